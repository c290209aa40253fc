"""Operational power, monthly switch-off savings, wiring payback, switch catalog."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from importlib import resources

from .errors import NoPayback, NoSwitchMeetsTemperature, UnknownId
from .model import NetworkInstance, Profile, money_str, to_minor


def network_power(inst: NetworkInstance, on_access, on_dist) -> float:
    """Total draw in watts: core plus every powered-on switch, traffic-independent."""
    watts = [inst.core.power]
    for aid in sorted(on_access):
        if aid not in inst.access_by_id:
            raise UnknownId(f"unknown access switch {aid!r}")
        watts.append(inst.access_by_id[aid].power)
    for did in sorted(on_dist):
        if did not in inst.dist_by_id:
            raise UnknownId(f"unknown distribution switch {did!r}")
        watts.append(inst.dist_by_id[did].power)
    return math.fsum(watts)


@dataclass(frozen=True)
class NightPower:
    day_w: float
    night_w: float
    off_access: tuple
    off_distribution: tuple

    def to_dict(self):
        return {"day_w": self.day_w, "night_w": self.night_w,
                "off_access": list(self.off_access),
                "off_distribution": list(self.off_distribution)}


def night_power(inst: NetworkInstance, sol, switch_off_distribution: bool = False) -> NightPower:
    """Power by day (everything installed on) and by night (office switches off).

    With ``switch_off_distribution`` a distribution switch whose access
    switches are all office-profile is switched off too.
    """
    on_a = set(sol.open_access)
    on_d = set(sol.open_distribution)
    off_a = {a for a in on_a if inst.access_by_id[a].profile == Profile.OFFICE}
    off_d = set()
    if switch_off_distribution:
        for d in on_d:
            children = [a for a, dd in sol.access_assignment.items() if dd == d]
            if all(a in off_a for a in children):
                off_d.add(d)
    return NightPower(network_power(inst, on_a, on_d),
                      network_power(inst, on_a - off_a, on_d - off_d),
                      tuple(sorted(off_a)), tuple(sorted(off_d)))


@dataclass(frozen=True)
class SavingsInput:
    n_ao: int
    n_total: int
    night_hours: float = 12
    working_days: int = 22
    weekend_days: int = 8
    hours_per_day: int = 24
    days_per_month: int = 30

    def __post_init__(self):
        if self.n_total <= 0:
            raise ValueError("n_total must be positive")
        if not 0 <= self.n_ao <= self.n_total:
            raise ValueError("n_ao must lie in [0, n_total]")
        if self.working_days + self.weekend_days != self.days_per_month:
            raise ValueError("working_days + weekend_days must equal days_per_month")
        if not 0 < self.night_hours < self.hours_per_day:
            raise ValueError("night_hours must lie strictly between 0 and hours_per_day")

    @property
    def switch_off_hours(self) -> float:
        return self.night_hours * self.working_days + self.hours_per_day * self.weekend_days


def savings_percent(inp: SavingsInput) -> float:
    """Share of monthly access-layer energy saved by switching office switches off."""
    return (100.0 * inp.n_ao * inp.switch_off_hours
            / (inp.n_total * inp.hours_per_day * inp.days_per_month))


@dataclass(frozen=True)
class Payback:
    extra_wire: float
    wire_cost: int
    monthly_saving: int
    payback_months: float

    def to_dict(self):
        return {
            "extra_wire_m": self.extra_wire,
            "wire_cost": money_str(self.wire_cost),
            "wire_cost_minor": self.wire_cost,
            "monthly_bill_saving": money_str(self.monthly_saving),
            "payback_months": round(self.payback_months, 2),
        }


def payback(n_uo: int, wire_per_user, wire_rate: int, monthly_saving: int) -> Payback:
    """Months for extra cabling to pay for itself.

    ``wire_rate`` and ``monthly_saving`` are in minor currency units.
    """
    if monthly_saving <= 0:
        raise NoPayback("monthly saving must be positive to recover the wiring cost")
    extra = Decimal(n_uo) * Decimal(str(wire_per_user))
    cost = int((extra * wire_rate).quantize(Decimal(1), rounding=ROUND_HALF_UP))
    return Payback(float(extra), cost, monthly_saving, cost / monthly_saving)


def modeled_monthly_saving(n_ao: int, avg_switch_watts: float, hours_off_per_month: float,
                           tariff_per_kwh: int) -> int:
    """Bill saving in minor units from a simple energy model (not a measured figure)."""
    kwh = Decimal(n_ao) * Decimal(str(avg_switch_watts)) * Decimal(str(hours_off_per_month))
    kwh /= 1000
    return int((kwh * tariff_per_kwh).quantize(Decimal(1), rounding=ROUND_HALF_UP))


@dataclass(frozen=True)
class SavingsReport:
    percent_monthly: float
    switch_off_hours_per_month: float
    extra_wire: float | None = None
    wire_cost: int | None = None
    monthly_bill_saving: int | None = None
    payback_months: float | None = None
    saving_is_modeled: bool = False

    def to_dict(self):
        d = {"percent_monthly": round(self.percent_monthly, 2),
             "switch_off_hours_per_month": self.switch_off_hours_per_month}
        if self.payback_months is not None:
            d.update(extra_wire_m=self.extra_wire, wire_cost=money_str(self.wire_cost),
                     monthly_bill_saving=money_str(self.monthly_bill_saving),
                     monthly_bill_saving_modeled=self.saving_is_modeled,
                     payback_months=round(self.payback_months, 2))
        return d


def savings_report(inp: SavingsInput, pb: Payback | None = None,
                   saving_is_modeled: bool = False) -> SavingsReport:
    pct = savings_percent(inp)
    if pb is None:
        return SavingsReport(pct, inp.switch_off_hours)
    return SavingsReport(pct, inp.switch_off_hours, pb.extra_wire, pb.wire_cost,
                         pb.monthly_saving, pb.payback_months, saving_is_modeled)


# -- switch catalog --------------------------------------------------------------

CATALOG_HEADER = ["vendor", "model", "power24_w", "price24", "power48_w", "price48",
                  "op_temp_min_c", "op_temp_max_c"]


@dataclass(frozen=True)
class SwitchCatalogEntry:
    vendor: str
    model: str
    power_24: float
    price_24: int
    power_48: float
    price_48: int
    op_temp_min: float
    op_temp_max: float

    def price(self, ports: int) -> int:
        return self.price_24 if ports == 24 else self.price_48

    def power(self, ports: int) -> float:
        return self.power_24 if ports == 24 else self.power_48

    def to_dict(self, ports: int | None = None):
        d = {"vendor": self.vendor, "model": self.model,
             "power24_w": self.power_24, "price24": money_str(self.price_24),
             "power48_w": self.power_48, "price48": money_str(self.price_48),
             "op_temp_min_c": self.op_temp_min, "op_temp_max_c": self.op_temp_max}
        if ports is not None:
            d["ports"] = ports
            d["price"] = money_str(self.price(ports))
            d["power_w"] = self.power(ports)
        return d


def read_catalog(fh) -> list[SwitchCatalogEntry]:
    reader = csv.DictReader(fh)
    if [h.strip() for h in (reader.fieldnames or [])] != CATALOG_HEADER:
        raise ValueError(f"catalog header must be {','.join(CATALOG_HEADER)}")
    return [SwitchCatalogEntry(r["vendor"].strip(), r["model"].strip(),
                               float(r["power24_w"]), to_minor(r["price24"]),
                               float(r["power48_w"]), to_minor(r["price48"]),
                               float(r["op_temp_min_c"]), float(r["op_temp_max_c"]))
            for r in reader]


def load_catalog(path=None) -> list[SwitchCatalogEntry]:
    """Read a catalog CSV; with no path, the bundled four-vendor table."""
    if path is None:
        text = resources.files("accessnet").joinpath("data/catalog.csv").read_text("utf-8")
        return read_catalog(io.StringIO(text))
    with open(path, newline="", encoding="utf-8") as fh:
        return read_catalog(fh)


def select_switch(catalog, min_op_temp: float, ports: int = 24) -> SwitchCatalogEntry:
    """Cheapest entry rated for ``min_op_temp``; ties by power, then vendor."""
    if ports not in (24, 48):
        raise ValueError("ports must be 24 or 48")
    if not catalog:
        raise ValueError("catalog is empty")
    ok = [e for e in catalog if e.op_temp_max >= min_op_temp]
    if not ok:
        hottest = max(e.op_temp_max for e in catalog)
        raise NoSwitchMeetsTemperature(
            f"no switch is rated for {min_op_temp:g} C (highest rating {hottest:g} C)")
    return min(ok, key=lambda e: (e.price(ports), e.power(ports), e.vendor))

"""Network instance types, topology JSON I/O and instance validation.

Money is always an ``int`` in the smallest currency unit (paise, cents).
Lengths are meters, power is watts, capacities are bits per second.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from enum import Enum
from functools import cached_property
from pathlib import Path
from types import MappingProxyType
from typing import Mapping

MINOR_PER_MAJOR = 100
CORE_ID = "core"


def to_minor(value) -> int:
    """Convert a major-unit amount (``15``, ``"1065.60"``) to integer minor units."""
    d = Decimal(str(value)) * MINOR_PER_MAJOR
    if d != d.to_integral_value():
        raise ValueError(f"amount {value!r} has sub-minor-unit precision")
    return int(d)


def from_minor(minor: int) -> Decimal:
    return Decimal(minor) / MINOR_PER_MAJOR


def money_str(minor: int) -> str:
    return f"{from_minor(minor):.2f}"


class Profile(str, Enum):
    OFFICE = "office"
    ALWAYS_ON = "always_on"

    @classmethod
    def parse(cls, value) -> "Profile":
        if isinstance(value, Profile):
            return value
        key = str(value).strip().lower()
        aliases = {"o": cls.OFFICE, "office": cls.OFFICE, "24": cls.ALWAYS_ON,
                   "always_on": cls.ALWAYS_ON, "alwayson": cls.ALWAYS_ON}
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown profile {value!r}") from None


@dataclass(frozen=True)
class User:
    id: str
    building: str
    profile: Profile


@dataclass(frozen=True)
class AccessSwitch:
    id: str
    building: str
    profile: Profile
    cost: int
    power: float
    max_users: int
    indoor: bool = True


@dataclass(frozen=True)
class DistributionSwitch:
    id: str
    building: str
    cost: int
    power: float
    max_access: int


@dataclass(frozen=True)
class CoreSwitch:
    cost: int = 0
    power: float = 0.0
    id: str = CORE_ID


@dataclass(frozen=True)
class Link:
    cost: int
    length: float = 0.0
    capacity: float = 1e9
    medium: str | None = None


@dataclass(frozen=True)
class CableRateTable:
    """Per-meter cable prices in minor units, keyed by medium."""

    rates: Mapping[str, int] = field(
        default_factory=lambda: {"copper": 15 * MINOR_PER_MAJOR})

    def __post_init__(self):
        object.__setattr__(self, "rates", MappingProxyType(dict(self.rates)))
        for medium, rate in self.rates.items():
            if rate <= 0:
                raise ValueError(f"cable rate for {medium!r} must be positive")

    def rate(self, medium: str) -> int:
        try:
            return self.rates[medium]
        except KeyError:
            raise ValueError(f"unknown cable medium {medium!r}") from None

    @classmethod
    def from_major(cls, mapping) -> "CableRateTable":
        return cls({k: to_minor(v) for k, v in mapping.items()})


def link_cost_from_length(length, medium: str, rates: CableRateTable) -> int:
    if Decimal(str(length)) < 0:
        raise ValueError("length must be non-negative")
    cost = Decimal(str(length)) * rates.rate(medium)
    return int(cost.quantize(Decimal(1), rounding=ROUND_HALF_UP))


@dataclass(frozen=True)
class NetworkInstance:
    users: tuple
    access_switches: tuple
    distribution_switches: tuple
    core: CoreSwitch = field(default_factory=CoreSwitch)
    user_access_links: Mapping = field(default_factory=dict)
    access_dist_links: Mapping = field(default_factory=dict)
    dist_core_links: Mapping = field(default_factory=dict)

    def __post_init__(self):
        for name in ("users", "access_switches", "distribution_switches"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        for name in ("user_access_links", "access_dist_links", "dist_core_links"):
            object.__setattr__(self, name, MappingProxyType(dict(getattr(self, name))))

    @cached_property
    def user_by_id(self):
        return {u.id: u for u in self.users}

    @cached_property
    def access_by_id(self):
        return {a.id: a for a in self.access_switches}

    @cached_property
    def dist_by_id(self):
        return {d.id: d for d in self.distribution_switches}

    @cached_property
    def user_candidates(self):
        """user id -> sorted access ids of the same profile with a link."""
        out = {u.id: [] for u in self.users}
        for (uid, aid) in self.user_access_links:
            u = self.user_by_id.get(uid)
            a = self.access_by_id.get(aid)
            if u is not None and a is not None and u.profile == a.profile:
                out[uid].append(aid)
        return {k: sorted(v) for k, v in out.items()}

    @cached_property
    def access_candidates(self):
        """access id -> sorted distribution ids reachable with a core uplink."""
        out = {a.id: [] for a in self.access_switches}
        for (aid, did) in self.access_dist_links:
            if aid in out and did in self.dist_by_id and did in self.dist_core_links:
                out[aid].append(did)
        return {k: sorted(v) for k, v in out.items()}

    def buildings(self):
        names = {u.building for u in self.users}
        names.update(a.building for a in self.access_switches)
        names.update(d.building for d in self.distribution_switches)
        return sorted(names)


@dataclass(frozen=True)
class Violation:
    code: str
    subject: str
    message: str

    def to_dict(self):
        return {"code": self.code, "subject": self.subject, "message": self.message}


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, code, subject, message):
        self.violations.append(Violation(code, str(subject), message))

    def to_dict(self):
        return {
            "valid": self.ok,
            "violations": [v.to_dict() for v in self.violations],
            "warnings": [w.to_dict() for w in self.warnings],
        }


def validate_instance(inst: NetworkInstance) -> ValidationReport:
    rep = ValidationReport()

    seen = {inst.core.id: "core"}
    for kind, items in (("user", inst.users), ("access", inst.access_switches),
                        ("distribution", inst.distribution_switches)):
        for item in items:
            if item.id in seen:
                rep.add("duplicate-id", item.id,
                        f"{kind} id {item.id!r} already used by a {seen[item.id]}")
            else:
                seen[item.id] = kind

    for u in inst.users:
        if not isinstance(u.profile, Profile):
            rep.add("bad-profile", u.id, f"user {u.id!r} has no valid profile")
    for a in inst.access_switches:
        if not isinstance(a.profile, Profile):
            rep.add("bad-profile", a.id, f"access switch {a.id!r} has no valid profile")
        if a.max_users < 1:
            rep.add("bad-degree", a.id, f"access switch {a.id!r} max_users must be >= 1")
        if a.cost < 0 or a.power < 0:
            rep.add("negative-value", a.id, f"access switch {a.id!r} has negative cost or power")
        if not a.indoor:
            rep.warnings.append(Violation(
                "outdoor-site", a.id,
                f"access switch {a.id!r} is not sited indoors; exposed to outside temperature"))
    for d in inst.distribution_switches:
        if d.max_access < 1:
            rep.add("bad-degree", d.id, f"distribution switch {d.id!r} max_access must be >= 1")
        if d.cost < 0 or d.power < 0:
            rep.add("negative-value", d.id,
                    f"distribution switch {d.id!r} has negative cost or power")
    if inst.core.cost < 0 or inst.core.power < 0:
        rep.add("negative-value", inst.core.id, "core switch has negative cost or power")

    def check_link(key, link, known_from, known_to):
        name = "->".join(key) if isinstance(key, tuple) else f"{key}->{inst.core.id}"
        ends = key if isinstance(key, tuple) else (key,)
        if ends[0] not in known_from or (len(ends) > 1 and ends[1] not in known_to):
            rep.add("unknown-endpoint", name, f"link {name} references an unknown node")
        if link.cost < 0 or link.length < 0:
            rep.add("negative-value", name, f"link {name} has negative cost or length")
        if not link.capacity > 0:
            rep.add("bad-capacity", name, f"link {name} capacity must be positive")

    for key, link in sorted(inst.user_access_links.items()):
        check_link(key, link, inst.user_by_id, inst.access_by_id)
    for key, link in sorted(inst.access_dist_links.items()):
        check_link(key, link, inst.access_by_id, inst.dist_by_id)
    for key, link in sorted(inst.dist_core_links.items()):
        check_link(key, link, inst.dist_by_id, None)

    for u in inst.users:
        if not inst.user_candidates.get(u.id):
            rep.add("no-same-profile-candidate", u.id,
                    f"user {u.id!r} has no link to a {u.profile.value} access switch")

    # pigeonhole: counted independently of the candidate map above
    for profile in Profile:
        need = sum(1 for u in inst.users if u.profile == profile)
        have = sum(a.max_users for a in inst.access_switches if a.profile == profile)
        if need > have:
            rep.add(f"insufficient-{profile.value.replace('_', '-')}-capacity", profile.value,
                    f"{need} {profile.value} users but only {have} {profile.value} ports")
    return rep


# -- topology JSON ----------------------------------------------------------

def _money(obj, key, default=0):
    return to_minor(obj.get(key, default))


def instance_from_dict(doc: dict) -> tuple[NetworkInstance, CableRateTable]:
    rates = CableRateTable.from_major(doc["rates"]) if "rates" in doc else CableRateTable()
    users = [User(str(u["id"]), str(u.get("building", "")), Profile.parse(u["profile"]))
             for u in doc.get("users", [])]
    access = [AccessSwitch(str(a["id"]), str(a.get("building", "")), Profile.parse(a["profile"]),
                           _money(a, "cost"), float(a.get("power_w", 0)),
                           int(a["max_users"]), bool(a.get("indoor", True)))
              for a in doc.get("access_switches", [])]
    dists = [DistributionSwitch(str(d["id"]), str(d.get("building", "")), _money(d, "cost"),
                                float(d.get("power_w", 0)), int(d["max_access"]))
             for d in doc.get("distribution_switches", [])]
    core_doc = doc.get("core", {})
    core = CoreSwitch(_money(core_doc, "cost"), float(core_doc.get("power_w", 0)),
                      str(core_doc.get("id", CORE_ID)))

    uids = {u.id for u in users}
    aids = {a.id for a in access}
    dids = {d.id for d in dists}
    ua, ad, dc = {}, {}, {}
    for i, ln in enumerate(doc.get("links", [])):
        src, dst = str(ln["from"]), str(ln["to"])
        medium = ln.get("medium")
        length = float(ln.get("length_m", 0))
        if "cost" in ln:
            cost = to_minor(ln["cost"])
        elif medium is not None:
            cost = link_cost_from_length(ln.get("length_m", 0), medium, rates)
        else:
            raise ValueError(f"link #{i} ({src}->{dst}) has neither cost nor medium")
        link = Link(cost, length, float(ln.get("capacity_bps", 1e9)), medium)
        if src in uids and dst in aids:
            table, key = ua, (src, dst)
        elif src in aids and dst in dids:
            table, key = ad, (src, dst)
        elif src in dids and dst == core.id:
            table, key = dc, src
        else:
            raise ValueError(f"link #{i} ({src}->{dst}) does not join adjacent tiers")
        if key in table:
            raise ValueError(f"link #{i} ({src}->{dst}) is duplicated")
        table[key] = link
    inst = NetworkInstance(users, access, dists, core, ua, ad, dc)
    return inst, rates


def load_instance(path) -> tuple[NetworkInstance, CableRateTable]:
    with open(Path(path), encoding="utf-8") as fh:
        return instance_from_dict(json.load(fh))


def _major(minor: int):
    d = from_minor(minor)
    return int(d) if d == d.to_integral_value() else float(d)


def instance_to_dict(inst: NetworkInstance, rates: CableRateTable | None = None) -> dict:
    def link_doc(src, dst, ln):
        d = {"from": src, "to": dst, "cost": _major(ln.cost), "length_m": ln.length,
             "capacity_bps": ln.capacity}
        if ln.medium is not None:
            d["medium"] = ln.medium
        return d

    doc = {
        "users": [{"id": u.id, "building": u.building, "profile": u.profile.value}
                  for u in inst.users],
        "access_switches": [{"id": a.id, "building": a.building, "profile": a.profile.value,
                             "cost": _major(a.cost), "power_w": a.power,
                             "max_users": a.max_users, "indoor": a.indoor}
                            for a in inst.access_switches],
        "distribution_switches": [{"id": d.id, "building": d.building, "cost": _major(d.cost),
                                   "power_w": d.power, "max_access": d.max_access}
                                  for d in inst.distribution_switches],
        "core": {"id": inst.core.id, "cost": _major(inst.core.cost), "power_w": inst.core.power},
        "links": [link_doc(u, a, ln) for (u, a), ln in sorted(inst.user_access_links.items())]
        + [link_doc(a, d, ln) for (a, d), ln in sorted(inst.access_dist_links.items())]
        + [link_doc(d, inst.core.id, ln) for d, ln in sorted(inst.dist_core_links.items())],
    }
    if rates is not None:
        doc["rates"] = {k: _major(v) for k, v in sorted(rates.rates.items())}
    return doc

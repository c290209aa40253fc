import io

import pytest
from conftest import A24, M, O, acc, dist, instance, link, user
from hypothesis import given
from hypothesis import strategies as st

from accessnet.errors import NoPayback, NoSwitchMeetsTemperature, UnknownId
from accessnet.model import CoreSwitch
from accessnet.optimizer import solve_exact
from accessnet.savings import (
    SavingsInput,
    load_catalog,
    modeled_monthly_saving,
    network_power,
    night_power,
    payback,
    read_catalog,
    savings_percent,
    savings_report,
    select_switch,
)


@pytest.mark.parametrize("n_ao,n_total,expected", [
    (62, 846, 4.64), (144, 846, 10.78), (62, 406, 9.67), (144, 406, 22.46)])
def test_campus_savings_percent(n_ao, n_total, expected):
    assert round(savings_percent(SavingsInput(n_ao, n_total)), 2) == expected


def test_switch_off_hours():
    assert SavingsInput(1, 1).switch_off_hours == 12 * 22 + 24 * 8


def test_savings_edge_cases():
    assert savings_percent(SavingsInput(0, 10)) == 0
    # every switch off: share of the month that is night or weekend
    assert savings_percent(SavingsInput(10, 10)) == pytest.approx(100 * 456 / 720)


@pytest.mark.parametrize("kw", [
    {"n_ao": 1, "n_total": 0}, {"n_ao": 5, "n_total": 4}, {"n_ao": -1, "n_total": 4},
    {"n_ao": 1, "n_total": 4, "working_days": 20},
    {"n_ao": 1, "n_total": 4, "night_hours": 0},
    {"n_ao": 1, "n_total": 4, "night_hours": 24},
])
def test_savings_input_validation(kw):
    with pytest.raises(ValueError):
        SavingsInput(**kw)


@given(st.integers(1, 2000), st.data(), st.floats(0.5, 23.5))
def test_savings_monotone_and_bounded(n_total, data, night):
    a = data.draw(st.integers(0, n_total))
    b = data.draw(st.integers(a, n_total))
    pa = savings_percent(SavingsInput(a, n_total, night))
    pb = savings_percent(SavingsInput(b, n_total, night))
    assert 0 <= pa <= pb <= 100


def test_campus_payback():
    pb = payback(476, 30, 15 * M, 18_560 * M)
    assert pb.extra_wire == 14_280
    assert pb.wire_cost == 214_200 * M
    assert round(pb.payback_months, 2) == 11.54
    assert pb.to_dict()["wire_cost"] == "214200.00"


def test_payback_needs_positive_saving():
    with pytest.raises(NoPayback):
        payback(476, 30, 15 * M, 0)


def test_savings_report_rounds_to_two_places():
    rep = savings_report(SavingsInput(62, 846), payback(476, 30, 15 * M, 18_560 * M))
    d = rep.to_dict()
    assert d["percent_monthly"] == 4.64 and d["payback_months"] == 11.54
    assert d["monthly_bill_saving_modeled"] is False


def test_modeled_saving():
    # 10 switches x 50 W x 456 h = 228 kWh at Rs 7/kWh
    assert modeled_monthly_saving(10, 50, 456, 7 * M) == 1596 * M


def test_network_power():
    users = [user("u1", O), user("u2", A24)]
    inst = instance(users, [acc("a1", O, power=50), acc("a2", A24, power=55)],
                    [dist("d1", power=80)], {("u1", "a1"): link(1), ("u2", "a2"): link(1)})
    inst = type(inst)(inst.users, inst.access_switches, inst.distribution_switches,
                      CoreSwitch(0, 300.0), inst.user_access_links, inst.access_dist_links,
                      inst.dist_core_links)
    assert network_power(inst, [], []) == 300
    assert network_power(inst, ["a1", "a2"], ["d1"]) == 485
    with pytest.raises(UnknownId):
        network_power(inst, ["nope"], [])
    np_ = night_power(inst, solve_exact(inst))
    assert (np_.day_w, np_.night_w, np_.off_access) == (485, 435, ("a1",))


def test_distribution_switch_off_only_when_all_children_office():
    inst = instance([user("u1", O)], [acc("a1", O, power=50)], [dist("d1", power=80)],
                    {("u1", "a1"): link(1)})
    sol = solve_exact(inst)
    assert night_power(inst, sol, switch_off_distribution=True).night_w == 0
    assert night_power(inst, sol).night_w == 80


# -- catalog -----------------------------------------------------------------------

def test_bundled_catalog():
    cat = {e.vendor: e for e in load_catalog()}
    assert set(cat) == {"Juniper", "Cisco", "D-Link", "HP"}
    assert (cat["Juniper"].power_24, cat["Juniper"].price_24, cat["Juniper"].op_temp_max) == (
        50, 121_280, 45)
    assert (cat["HP"].price_24, cat["HP"].price_48, cat["HP"].op_temp_max) == (
        106_560, 187_385, 55)
    assert cat["Cisco"].price_48 == 413_700 and cat["D-Link"].price_48 == 254_999


@pytest.mark.parametrize("temp,ports,vendor", [
    (40, 24, "HP"), (50, 24, "HP"), (55, 24, "HP"), (45, 48, "HP"), (20, 24, "HP")])
def test_select_switch(temp, ports, vendor):
    assert select_switch(load_catalog(), temp, ports).vendor == vendor


def test_select_switch_respects_temperature():
    cat = [e for e in load_catalog() if e.vendor != "HP"]
    assert select_switch(cat, 45).vendor == "Juniper"
    assert select_switch(cat, 50).vendor == "D-Link"
    with pytest.raises(NoSwitchMeetsTemperature):
        select_switch(cat, 51)
    with pytest.raises(NoSwitchMeetsTemperature):
        select_switch(load_catalog(), 60)


def test_select_switch_ties_break_on_power_then_vendor():
    text = ("vendor,model,power24_w,price24,power48_w,price48,op_temp_min_c,op_temp_max_c\n"
            "B,x,40,100,60,200,0,50\nA,y,40,100,60,200,0,50\nC,z,30,100,60,200,0,50\n")
    cat = read_catalog(io.StringIO(text))
    assert select_switch(cat, 45).vendor == "C"
    assert select_switch(cat, 45, ports=48).vendor == "A"


def test_catalog_header_checked():
    with pytest.raises(ValueError):
        read_catalog(io.StringIO("vendor,price\nX,1\n"))

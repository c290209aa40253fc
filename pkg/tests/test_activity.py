import io
import random
from datetime import date, datetime, time, timedelta

import pytest
from conftest import always_on, hourly_log, night_owl, office_pattern, random_log
from hypothesis import given, settings
from hypothesis import strategies as st

from accessnet.activity import (
    ActivityLog,
    ActivitySample,
    ClassifierConfig,
    PingSample,
    classify_users,
    collapse_samples,
    estimate_ao_switches,
    parse_activity_log,
    parse_ping_log,
    per_building_counts,
    ping_report,
    write_activity_log,
)
from accessnet.errors import EmptyLog, MalformedHeader, MalformedLog, UnknownId

MONDAY = date(2014, 5, 19)
PROPS = settings(max_examples=60, deadline=None)


def csv_text(*rows, header="timestamp,switch_id,interface_id,up"):
    return io.StringIO("\n".join([header, *rows]) + "\n")


# -- parsing -------------------------------------------------------------------

def test_empty_file_with_header():
    log = parse_activity_log(csv_text())
    assert log.samples == () and log.malformed == 0


def test_one_malformed_row_is_tolerated():
    log = parse_activity_log(csv_text(
        "2014-05-19T10:00:00,sw1,Gi0/1,1",
        "2014-05-19T11:00:00,sw1,Gi0/1,0",
        "not-a-time,sw1,Gi0/1,1",
        "2014-05-19T09:00:00,sw1,Gi0/2,1"))
    assert len(log.samples) == 3
    assert log.malformed == 1 and log.bad_lines == (4,)
    assert [s.timestamp.hour for s in log.samples] == [9, 10, 11]


def test_many_malformed_rows_fail_with_line_numbers():
    with pytest.raises(MalformedLog) as exc:
        parse_activity_log(csv_text("2014-05-19T10:00:00,sw1,Gi0/1,1", "x,y", "a,b,c,2"))
    assert exc.value.bad_lines == [3, 4]


def test_bad_header():
    with pytest.raises(MalformedHeader):
        parse_activity_log(csv_text("2014-05-19T10:00:00,sw1,Gi0/1,1", header="time,sw,if,up"))
    with pytest.raises(MalformedHeader):
        parse_activity_log(io.StringIO(""))


def test_duplicate_samples_collapse_to_up():
    log = parse_activity_log(csv_text("2014-05-19T10:00:00,sw1,Gi0/1,0",
                                      "2014-05-19T10:00:00,sw1,Gi0/1,1"))
    assert log.samples == (ActivitySample(datetime(2014, 5, 19, 10), "sw1", "Gi0/1", True),)


def test_declared_timezone_converts_aware_stamps():
    text = io.StringIO("# tz=+05:30\ntimestamp,switch_id,interface_id,up\n"
                       "2014-05-19T04:30:00Z,sw1,Gi0/1,1\n")
    log = parse_activity_log(text)
    assert log.tz == "+05:30"
    assert log.samples[0].timestamp == datetime(2014, 5, 19, 10, 0)


def test_write_then_parse_roundtrip():
    log = hourly_log(MONDAY, 2, {("sw1", "Gi0/1"): office_pattern})
    buf = io.StringIO()
    write_activity_log(log.samples, buf, tz="Asia/Kolkata")
    buf.seek(0)
    again = parse_activity_log(buf)
    assert again.samples == log.samples and again.tz == "Asia/Kolkata"


def test_ping_log_parse():
    rows = parse_ping_log(io.StringIO("timestamp,switch_id,reachable\n"
                                      "2014-05-19T10:20:00,sw1,0\n2014-05-19T10:00:00,sw1,1\n"))
    assert [r.reachable for r in rows] == [True, False]


# -- config ----------------------------------------------------------------------

def test_night_window_attribution():
    cfg = ClassifierConfig()
    assert cfg.crosses_midnight and cfg.night_hours == 12
    assert cfg.place(datetime(2014, 5, 19, 21)) == ("night", date(2014, 5, 19))
    assert cfg.place(datetime(2014, 5, 20, 8, 59)) == ("night", date(2014, 5, 19))
    assert cfg.place(datetime(2014, 5, 20, 9)) == ("day", date(2014, 5, 20))
    hostel = ClassifierConfig(night_start="23:00", night_end="07:59:59")
    assert hostel.place(datetime(2014, 5, 20, 7, 59, 58))[0] == "night"


@pytest.mark.parametrize("kw", [
    {"night_start": "09:00", "night_end": "09:00"},
    {"office_working_day_fraction": 0},
    {"office_working_day_fraction": 1.5},
    {"min_knight_days": 0},
])
def test_config_rejects_bad_values(kw):
    with pytest.raises(ValueError):
        ClassifierConfig(**kw)


def test_config_from_dict():
    cfg = ClassifierConfig.from_dict({"night_window": ["22:00", "06:00"], "min_knight_days": 4,
                                      "working_days": ["mon", "tue"]})
    assert cfg.night_start == time(22) and cfg.night_end == time(6)
    assert cfg.working_days == frozenset({0, 1}) and cfg.min_knight_days == 4


# -- classification --------------------------------------------------------------

def test_textbook_office_user():
    assert MONDAY.weekday() == 0
    log = hourly_log(MONDAY, 14, {("sw1", "Gi0/1"): office_pattern})  # 10 weekdays
    res = classify_users(log)
    assert res.working_days_in_range == 10
    assert res.office_users == {("sw1", "Gi0/1")}
    assert res.knight_users == {("sw1", "Gi0/1")}


def test_always_on_and_night_users_are_not_knight():
    log = hourly_log(MONDAY, 7, {("sw1", "a"): always_on, ("sw1", "b"): night_owl})
    res = classify_users(log)
    assert res.knight_users == frozenset() and res.office_users == frozenset()
    assert res.active_users == 2


def test_never_up_is_not_a_user():
    log = hourly_log(MONDAY, 7, {("sw1", "dead"): lambda t: False,
                                 ("sw1", "live"): office_pattern})
    res = classify_users(log)
    assert ("sw1", "dead") not in res.knight_users
    assert res.active_users == 1


def _compliant_nights(samples, start, end):
    """Independent night predicate: nights (by start date) whose samples are all down."""
    status = {}
    for s in samples:
        t = s.timestamp.time()
        if t >= start:
            n = s.timestamp.date()
        elif t < end:
            n = s.timestamp.date() - timedelta(days=1)
        else:
            continue
        status[n] = status.get(n, True) and not s.up
    return {n for n, ok in status.items() if ok}


@pytest.mark.parametrize("days,qualifies", [(2, False), (5, True)])
def test_one_night_up_at_two_am(days, qualifies):
    def pattern(t):
        if t.date() == MONDAY + timedelta(days=1) and t.hour == 2:
            return True  # belongs to Monday's night
        return office_pattern(t)

    log = hourly_log(MONDAY, days, {("sw1", "Gi0/1"): pattern})
    good = _compliant_nights(log.samples, time(21), time(9))
    assert MONDAY not in good
    assert (len(good) >= 3) is qualifies
    assert (("sw1", "Gi0/1") in classify_users(log).knight_users) is qualifies


def test_weekends_do_not_count_against_office():
    log = hourly_log(MONDAY, 14, {("sw1", "Gi0/1"): office_pattern,
                                  ("sw1", "Gi0/2"): office_pattern})
    res = classify_users(log)
    assert len(res.office_users) == 2
    pct = {d: p for d, p in res.per_day_office_pct}
    for d, p in pct.items():
        if d.weekday() >= 5:
            assert p == 0  # periodic two-day weekend dip
        elif d >= MONDAY:
            assert p == 100


def test_office_fraction_threshold():
    # up on 2 of 10 working days (20th and 30th): below 50%
    def pattern(t):
        return office_pattern(t) and t.day % 5 == 0

    log = hourly_log(MONDAY, 14, {("sw1", "x"): pattern})
    days_up = {s.timestamp.date() for s in log.samples if s.up}
    assert len({d for d in days_up if d.weekday() < 5}) == 2
    res = classify_users(log)
    assert ("sw1", "x") in res.knight_users and ("sw1", "x") not in res.office_users
    assert ("sw1", "x") in classify_users(
        log, ClassifierConfig(office_working_day_fraction=0.2)).office_users


def test_unobserved_night_does_not_count():
    samples = [ActivitySample(datetime(2014, 5, 19, 12), "sw", "i", True)]
    for n in range(2):  # only two observed nights
        samples.append(ActivitySample(datetime(2014, 5, 19 + n, 23), "sw", "i", False))
    res = classify_users(ActivityLog(collapse_samples(samples)))
    assert res.knight_users == frozenset()


def test_empty_log_errors():
    with pytest.raises(EmptyLog):
        classify_users(ActivityLog(()))


def test_per_building_counts():
    log = hourly_log(MONDAY, 7, {("s1", "a"): office_pattern, ("s1", "b"): office_pattern,
                                 ("s1", "c"): office_pattern, ("s2", "a"): office_pattern,
                                 ("s2", "b"): office_pattern, ("s2", "c"): office_pattern,
                                 ("s2", "d"): office_pattern, ("s3", "a"): always_on})
    res = classify_users(log, topo={"s1": "B1", "s2": "B1", "s3": "B2"})
    assert res.per_building_counts["B1"] == {"knight": 7, "office": 7}
    assert res.per_building_counts["B2"] == {"knight": 0, "office": 0}
    total = sum(v["office"] for v in res.per_building_counts.values())
    assert total == len(res.office_users)
    with pytest.raises(UnknownId, match="s3"):
        per_building_counts(res, {"s1": "B1", "s2": "B1"})


def test_estimate_ao_switches():
    est = estimate_ao_switches({"B1": {"knight": 13, "office": 0}, "B2": {"knight": 12,
                                                                          "office": 1}})
    assert est.per_building["B1"] == {"knight": 2, "office": 0}
    assert est.per_building["B2"] == {"knight": 1, "office": 1}
    assert (est.total_knight, est.total_office) == (3, 1)
    assert est.to_dict()["estimate"] is True
    with pytest.raises(ValueError):
        estimate_ao_switches({}, 0)


# -- ping report -----------------------------------------------------------------

def test_ping_report_counts():
    h = datetime(2014, 5, 19, 10)
    pattern = {"ok": [1, 1, 1], "once": [1, 0, 1], "twice": [0, 0, 1]}
    samples = [PingSample(h + timedelta(minutes=20 * i), sw, bool(v))
               for sw, vals in pattern.items() for i, v in enumerate(vals)]
    rep = ping_report(samples)
    (hc,) = rep.hours
    assert (hc.switches, hc.exactly_once_missed, hc.more_than_once_missed) == (3, 1, 1)


@PROPS
@given(st.lists(st.tuples(st.integers(0, 5), st.integers(0, 300), st.booleans()), max_size=80))
def test_ping_counts_bounded_by_switches(rows):
    t0 = datetime(2014, 5, 19)
    samples = [PingSample(t0 + timedelta(minutes=m), f"s{s}", r) for s, m, r in rows]
    for hc in ping_report(samples).hours:
        assert hc.exactly_once_missed + hc.more_than_once_missed <= hc.switches


# -- properties --------------------------------------------------------------------

seeds = st.integers(0, 2**32 - 1)


@PROPS
@given(seeds)
def test_office_subset_of_knight(seed):
    rng = random.Random(seed)
    res = classify_users(random_log(rng), ClassifierConfig(
        min_knight_days=rng.randint(1, 4), office_working_day_fraction=rng.choice([0.2, 0.5, 1])))
    assert res.office_users <= res.knight_users


@PROPS
@given(seeds, st.integers(21, 23), st.integers(0, 2), st.integers(6, 9), st.integers(0, 2))
def test_shrinking_night_window_never_shrinks_knight(seed, s_out, ds, e_out, de):
    rng = random.Random(seed)
    log = random_log(rng)
    outer = ClassifierConfig(time(s_out), time(e_out))
    inner = ClassifierConfig(time(min(s_out + ds, 23)), time(max(e_out - de, 6)))
    assert classify_users(log, outer).knight_users <= classify_users(log, inner).knight_users


@PROPS
@given(seeds, st.integers(1, 5))
def test_min_knight_days_is_monotone(seed, k):
    log = random_log(random.Random(seed))
    low = classify_users(log, ClassifierConfig(min_knight_days=k)).knight_users
    high = classify_users(log, ClassifierConfig(min_knight_days=k + 1)).knight_users
    assert high <= low


@PROPS
@given(seeds)
def test_classification_ignores_row_order(seed):
    rng = random.Random(seed)
    log = random_log(rng)
    buf = io.StringIO()
    write_activity_log(log.samples, buf)
    header, *rows = buf.getvalue().splitlines()
    rng.shuffle(rows)
    shuffled = parse_activity_log(io.StringIO("\n".join([header, *rows]) + "\n"))
    assert classify_users(shuffled) == classify_users(log)

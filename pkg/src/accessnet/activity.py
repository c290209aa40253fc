"""Interface activity logs: ingestion, night/day user classification, ping reports.

Terminology used below:

* an *interface* is a ``(switch_id, interface_id)`` pair; it counts as a user
  only if it was seen up at least once;
* a *Knight* user is down for every sample of at least ``min_knight_days``
  observed nights;
* an *Office* user is a Knight user that is also up at some point during day
  hours on at least ``office_working_day_fraction`` of the working days.

A night is attributed to the calendar day on which it starts. A night with
no samples for an interface is unobserved for that interface and counts
neither for nor against it.
"""

from __future__ import annotations

import csv
import math
import re
from collections import defaultdict
from dataclasses import dataclass, field
from datetime import datetime, time, timedelta, timezone
from typing import Iterable, Mapping, NamedTuple
from zoneinfo import ZoneInfo

from .errors import EmptyLog, MalformedHeader, MalformedLog, UnknownId

ACTIVITY_HEADER = ["timestamp", "switch_id", "interface_id", "up"]
PING_HEADER = ["timestamp", "switch_id", "reachable"]
MAX_BAD_FRACTION = 0.01
WEEKDAYS = ["mon", "tue", "wed", "thu", "fri", "sat", "sun"]

_TZ_LINE = re.compile(r"#\s*(?:tz|timezone)\s*[:=]\s*(\S+)", re.IGNORECASE)
_OFFSET = re.compile(r"^(?:UTC)?([+-])(\d{2}):?(\d{2})$", re.IGNORECASE)


class ActivitySample(NamedTuple):
    timestamp: datetime
    switch_id: str
    interface_id: str
    up: bool


class PingSample(NamedTuple):
    timestamp: datetime
    switch_id: str
    reachable: bool


@dataclass(frozen=True)
class ActivityLog:
    samples: tuple
    malformed: int = 0
    bad_lines: tuple = ()
    tz: str | None = None

    def interfaces(self):
        return sorted({(s.switch_id, s.interface_id) for s in self.samples})

    @property
    def start(self):
        return self.samples[0].timestamp if self.samples else None

    @property
    def end(self):
        return self.samples[-1].timestamp if self.samples else None


def _parse_tz(name: str):
    m = _OFFSET.match(name)
    if m:
        sign = 1 if m.group(1) == "+" else -1
        return timezone(sign * timedelta(hours=int(m.group(2)), minutes=int(m.group(3))))
    if name.upper() in ("UTC", "Z"):
        return timezone.utc
    return ZoneInfo(name)


def _parse_ts(text: str, tz):
    text = text.strip()
    if text.endswith("Z"):
        text = text[:-1] + "+00:00"
    ts = datetime.fromisoformat(text)
    if ts.tzinfo is not None:
        if tz is not None:
            ts = ts.astimezone(tz)
        ts = ts.replace(tzinfo=None)
    return ts


def _parse_bool(text: str) -> bool:
    text = text.strip()
    if text == "1":
        return True
    if text == "0":
        return False
    raise ValueError(f"expected 0 or 1, got {text!r}")


def _read_csv(stream: Iterable[str], header, convert):
    """Shared CSV reader: optional ``# tz=...`` comment lines, fixed header.

    Returns (rows, bad_lines, tz_name). Tolerates at most ``max(1, 1%)`` bad
    data rows; beyond that raises ``MalformedLog`` with the line numbers.
    """
    tz = tz_name = None
    reader = csv.reader(stream)
    head = None
    lineno = 0
    for row in reader:
        lineno = reader.line_num
        if not row or not "".join(row).strip():
            continue
        first = row[0].strip()
        if first.startswith("#"):
            m = _TZ_LINE.match(",".join(row).strip())
            if m:
                tz_name = m.group(1)
                tz = _parse_tz(tz_name)
            continue
        head = [c.strip().lower() for c in row]
        break
    if head is None:
        raise MalformedHeader(f"missing header; expected {','.join(header)}")
    if head != header:
        raise MalformedHeader(f"line {lineno}: expected header {','.join(header)}, "
                              f"got {','.join(head)}")

    rows, bad, total = [], [], 0
    for row in reader:
        if not row or not "".join(row).strip():
            continue
        total += 1
        try:
            if len(row) != len(header):
                raise ValueError("wrong field count")
            rows.append(convert(row, tz))
        except (ValueError, TypeError):
            bad.append(reader.line_num)
    if len(bad) > max(1, math.floor(MAX_BAD_FRACTION * total)):
        raise MalformedLog(f"{len(bad)} of {total} rows malformed (lines {bad[:20]})", bad)
    return rows, bad, tz_name


def _activity_row(row, tz):
    sw, iface = row[1].strip(), row[2].strip()
    if not sw or not iface:
        raise ValueError("empty id")
    return ActivitySample(_parse_ts(row[0], tz), sw, iface, _parse_bool(row[3]))


def _ping_row(row, tz):
    sw = row[1].strip()
    if not sw:
        raise ValueError("empty id")
    return PingSample(_parse_ts(row[0], tz), sw, _parse_bool(row[2]))


def collapse_samples(samples) -> tuple:
    """Sort and merge duplicate (switch, interface, time) samples by OR of ``up``."""
    merged = {}
    for s in samples:
        key = (s.timestamp, s.switch_id, s.interface_id)
        merged[key] = merged.get(key, False) or s.up
    return tuple(ActivitySample(t, sw, i, up) for (t, sw, i), up in sorted(merged.items()))


def parse_activity_log(stream: Iterable[str]) -> ActivityLog:
    rows, bad, tz_name = _read_csv(stream, ACTIVITY_HEADER, _activity_row)
    return ActivityLog(collapse_samples(rows), len(bad), tuple(bad), tz_name)


def parse_ping_log(stream: Iterable[str]) -> list[PingSample]:
    rows, _, _ = _read_csv(stream, PING_HEADER, _ping_row)
    return sorted(rows)


def write_activity_log(samples, fh, tz: str | None = None):
    if tz:
        fh.write(f"# tz={tz}\n")
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(ACTIVITY_HEADER)
    for s in samples:
        w.writerow([s.timestamp.isoformat(), s.switch_id, s.interface_id, int(s.up)])


# -- classification ------------------------------------------------------------

def parse_clock(text) -> time:
    if isinstance(text, time):
        return text
    parts = [int(p) for p in str(text).strip().split(":")]
    if not 2 <= len(parts) <= 3:
        raise ValueError(f"bad time of day {text!r}")
    return time(*parts)


def _weekday(value) -> int:
    if isinstance(value, int):
        if not 0 <= value <= 6:
            raise ValueError(f"weekday index {value} out of range")
        return value
    return WEEKDAYS.index(str(value).strip().lower()[:3])


@dataclass(frozen=True)
class ClassifierConfig:
    night_start: time = time(21, 0)
    night_end: time = time(9, 0)
    min_knight_days: int = 3
    office_working_day_fraction: float = 0.5
    working_days: frozenset = frozenset(range(5))

    def __post_init__(self):
        object.__setattr__(self, "night_start", parse_clock(self.night_start))
        object.__setattr__(self, "night_end", parse_clock(self.night_end))
        object.__setattr__(self, "working_days",
                           frozenset(_weekday(d) for d in self.working_days))
        if self.night_start == self.night_end:
            raise ValueError("night window must be shorter than 24 hours and non-empty")
        if not 0 < self.office_working_day_fraction <= 1:
            raise ValueError("office_working_day_fraction must be in (0, 1]")
        if self.min_knight_days < 1:
            raise ValueError("min_knight_days must be >= 1")

    @property
    def crosses_midnight(self) -> bool:
        return self.night_start > self.night_end

    @property
    def night_hours(self) -> float:
        s = self.night_start.hour * 3600 + self.night_start.minute * 60 + self.night_start.second
        e = self.night_end.hour * 3600 + self.night_end.minute * 60 + self.night_end.second
        return ((e - s) % 86400) / 3600

    def place(self, ts: datetime):
        """("night", start date of that night) or ("day", calendar date)."""
        t = ts.time()
        if self.crosses_midnight:
            if t >= self.night_start:
                return "night", ts.date()
            if t < self.night_end:
                return "night", ts.date() - timedelta(days=1)
            return "day", ts.date()
        if self.night_start <= t < self.night_end:
            return "night", ts.date()
        return "day", ts.date()

    @classmethod
    def from_dict(cls, doc: Mapping) -> "ClassifierConfig":
        kw = {}
        if "night_window" in doc:
            kw["night_start"], kw["night_end"] = doc["night_window"]
        for key in ("night_start", "night_end", "min_knight_days",
                    "office_working_day_fraction", "working_days"):
            if key in doc:
                kw[key] = doc[key]
        return cls(**kw)


@dataclass
class _Trace:
    ever_up: bool = False
    nights: dict = field(default_factory=dict)  # night date -> all samples down
    day_up: set = field(default_factory=set)


@dataclass(frozen=True)
class ClassificationResult:
    knight_users: frozenset
    office_users: frozenset
    per_day_knight_pct: tuple  # (night date, percent)
    per_day_office_pct: tuple
    per_switch_counts: Mapping
    per_building_counts: Mapping
    active_users: int = 0
    working_days_in_range: int = 0

    def to_dict(self):
        return {
            "active_users": self.active_users,
            "knight_users": len(self.knight_users),
            "office_users": len(self.office_users),
            "working_days_in_range": self.working_days_in_range,
            "knight": [list(k) for k in sorted(self.knight_users)],
            "office": [list(k) for k in sorted(self.office_users)],
            "per_day_knight_pct": [[d.isoformat(), round(p, 2)]
                                   for d, p in self.per_day_knight_pct],
            "per_day_office_pct": [[d.isoformat(), round(p, 2)]
                                   for d, p in self.per_day_office_pct],
            "per_switch_counts": {k: dict(v) for k, v in sorted(self.per_switch_counts.items())},
            "per_building_counts": {k: dict(v)
                                    for k, v in sorted(self.per_building_counts.items())},
        }


def _trace(samples, cfg: ClassifierConfig):
    traces = defaultdict(_Trace)
    for s in samples:
        tr = traces[(s.switch_id, s.interface_id)]
        if s.up:
            tr.ever_up = True
        kind, d = cfg.place(s.timestamp)
        if kind == "night":
            tr.nights[d] = tr.nights.get(d, True) and not s.up
        elif s.up:
            tr.day_up.add(d)
    return traces


def classify_users(log: ActivityLog, cfg: ClassifierConfig | None = None,
                   topo: Mapping[str, str] | None = None) -> ClassificationResult:
    cfg = cfg or ClassifierConfig()
    if not log.samples:
        raise EmptyLog("activity log has no samples")
    traces = _trace(log.samples, cfg)

    first, last = log.samples[0].timestamp.date(), log.samples[-1].timestamp.date()
    working = [first + timedelta(days=i) for i in range((last - first).days + 1)]
    working = [d for d in working if d.weekday() in cfg.working_days]
    working_set = set(working)

    knight, office = set(), set()
    for key, tr in traces.items():
        if not tr.ever_up:
            continue
        if sum(1 for down in tr.nights.values() if down) < cfg.min_knight_days:
            continue
        knight.add(key)
        if working:
            seen = len(tr.day_up & working_set)
            if seen >= cfg.office_working_day_fraction * len(working):
                office.add(key)

    nights = sorted({d for tr in traces.values() for d in tr.nights})
    knight_pct, office_pct = [], []
    for n in nights:
        observed = [k for k, tr in traces.items() if tr.ever_up and n in tr.nights]
        if not observed:
            continue
        off = [k for k in observed if traces[k].nights[n] and k in knight]
        off_day = [k for k in off if k in office and n in traces[k].day_up]
        knight_pct.append((n, 100.0 * len(off) / len(observed)))
        office_pct.append((n, 100.0 * len(off_day) / len(observed)))

    per_switch = {}
    for sw, _ in traces:
        per_switch.setdefault(sw, {"knight": 0, "office": 0})
    for sw, _ in knight:
        per_switch[sw]["knight"] += 1
    for sw, _ in office:
        per_switch[sw]["office"] += 1

    result = ClassificationResult(
        frozenset(knight), frozenset(office), tuple(knight_pct), tuple(office_pct),
        per_switch, {}, sum(1 for tr in traces.values() if tr.ever_up), len(working))
    if topo is not None:
        result = ClassificationResult(
            result.knight_users, result.office_users, result.per_day_knight_pct,
            result.per_day_office_pct, result.per_switch_counts,
            per_building_counts(result, topo), result.active_users,
            result.working_days_in_range)
    return result


def per_building_counts(result: ClassificationResult, topo: Mapping[str, str]):
    out = {}
    for sw in sorted(result.per_switch_counts):
        if sw not in topo:
            raise UnknownId(f"switch {sw!r} has no building in the topology")
        b = out.setdefault(topo[sw], {"knight": 0, "office": 0})
        b["knight"] += result.per_switch_counts[sw]["knight"]
        b["office"] += result.per_switch_counts[sw]["office"]
    return out


@dataclass(frozen=True)
class AoEstimate:
    per_building: Mapping
    total_knight: int
    total_office: int
    users_per_switch: int

    def to_dict(self):
        return {
            "estimate": True,
            "users_per_switch": self.users_per_switch,
            "per_building": {k: dict(v) for k, v in sorted(self.per_building.items())},
            "total": {"knight": self.total_knight, "office": self.total_office},
        }


def estimate_ao_switches(building_counts: Mapping, users_per_switch: int = 12) -> AoEstimate:
    """Office-profile switch count per building: ceil(users / users_per_switch)."""
    if users_per_switch < 1:
        raise ValueError("users_per_switch must be >= 1")
    per = {}
    for b, counts in sorted(building_counts.items()):
        per[b] = {k: -(-int(counts[k]) // users_per_switch) for k in ("knight", "office")}
    return AoEstimate(per, sum(v["knight"] for v in per.values()),
                      sum(v["office"] for v in per.values()), users_per_switch)


# -- ping reachability ---------------------------------------------------------

@dataclass(frozen=True)
class HourCount:
    hour: datetime
    switches: int
    exactly_once_missed: int
    more_than_once_missed: int

    def to_dict(self):
        return {"hour": self.hour.isoformat(), "switches": self.switches,
                "exactly_once_missed": self.exactly_once_missed,
                "more_than_once_missed": self.more_than_once_missed}


@dataclass(frozen=True)
class PingReport:
    hours: tuple

    def to_dict(self):
        return {"hours": [h.to_dict() for h in self.hours]}


def ping_report(samples: Iterable[PingSample]) -> PingReport:
    missed = defaultdict(lambda: defaultdict(int))
    for s in samples:
        hour = s.timestamp.replace(minute=0, second=0, microsecond=0)
        missed[hour][s.switch_id] += 0 if s.reachable else 1
    hours = []
    for hour in sorted(missed):
        counts = missed[hour].values()
        hours.append(HourCount(hour, len(missed[hour]),
                               sum(1 for n in counts if n == 1),
                               sum(1 for n in counts if n >= 2)))
    return PingReport(tuple(hours))


import random
from datetime import date, datetime, timedelta

import pytest
from hypothesis import strategies as st

from accessnet.activity import ActivityLog, ActivitySample, collapse_samples
from accessnet.generate import random_instance
from accessnet.model import (
    AccessSwitch,
    CoreSwitch,
    DistributionSwitch,
    Link,
    NetworkInstance,
    Profile,
    User,
)
from accessnet.optimizer import _kernel

M = 100  # minor units per rupee
O, A24 = Profile.OFFICE, Profile.ALWAYS_ON


def user(uid, prof=O, b="B1"):
    return User(uid, b, prof)


def acc(aid, prof=O, cost=0, cap=24, b="B1", power=50.0, indoor=True):
    return AccessSwitch(aid, b, prof, cost * M, power, cap, indoor)


def dist(did, cost=0, cap=48, b="B1", power=80.0):
    return DistributionSwitch(did, b, cost * M, power, cap)


def link(cost=0, length=0.0):
    return Link(cost * M, float(length))


def instance(users, access, dists, ua, ad=None, dc=None, core_cost=0, core_power=0.0):
    """Build an instance; ``ad``/``dc`` default to zero-cost full connectivity."""
    if ad is None:
        ad = {(a.id, d.id): link() for a in access for d in dists}
    if dc is None:
        dc = {d.id: link() for d in dists}
    return NetworkInstance(users, access, dists, CoreSwitch(core_cost * M, core_power),
                           ua, ad, dc)


KERNELS = {"python": _kernel.search_py}
if _kernel.search_ext is not None:
    KERNELS["cython"] = _kernel.search_ext


@pytest.fixture(params=sorted(KERNELS))
def kernel(request):
    return KERNELS[request.param]


@st.composite
def small_instances(draw, max_users=8, max_access=4, max_dist=3, buildings=1):
    """Hypothesis strategy for instances inside the brute-force guards."""
    seed = draw(st.integers(0, 2**32 - 1))
    density = draw(st.sampled_from([0.5, 0.8, 1.0]))
    return random_instance(random.Random(seed), max_users=max_users, max_access=max_access,
                           max_dist=max_dist, buildings=buildings, density=density)


# -- synthetic activity logs ---------------------------------------------------

def hourly_log(start: date, days: int, patterns, step_minutes=60):
    """Samples every ``step_minutes`` from ``start`` 00:00 for ``days`` days.

    ``patterns`` maps (switch, iface) -> f(datetime) -> bool.
    """
    samples = []
    t = datetime.combine(start, datetime.min.time())
    end = t + timedelta(days=days)
    while t < end:
        for (sw, iface), f in patterns.items():
            samples.append(ActivitySample(t, sw, iface, bool(f(t))))
        t += timedelta(minutes=step_minutes)
    return ActivityLog(collapse_samples(samples))


def office_pattern(t):
    return t.weekday() < 5 and 10 <= t.hour < 18


def always_on(t):
    return True


def night_owl(t):
    return t.hour >= 22 or t.hour < 6


def random_log(rng: random.Random, days=None, n_if=None):
    days = days or rng.randint(4, 14)
    n_if = n_if or rng.randint(1, 6)
    start = date(2014, 5, 18) + timedelta(days=rng.randint(0, 6))
    patterns = {}
    for i in range(n_if):
        p_day, p_night = rng.random(), rng.choice([0.0, 0.0, 0.05, 0.3, 1.0])
        seed = rng.randrange(2**32)

        def f(t, p_day=p_day, p_night=p_night, seed=seed):
            r = random.Random(hash((seed, t.toordinal(), t.hour)))
            night = t.hour >= 21 or t.hour < 9
            return r.random() < (p_night if night else p_day * (t.weekday() < 5))
        patterns[(f"sw{i % 3}", f"Gi0/{i}")] = f
    return hourly_log(start, days, patterns)

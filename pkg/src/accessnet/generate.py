"""Random small instances for property tests and the ``gen`` subcommand.

Costs are drawn uniformly (integers, major units) from the given ranges;
user->access link cost equals its length at one unit per meter, so the
cheapest link is also the closest one. Every user gets at least one link to
a switch of its own profile and per-profile port counts are raised until
they cover the users, so most instances are feasible; distribution degree
bounds are left random and can still make an instance infeasible.
"""

from __future__ import annotations

import random

from .model import (
    MINOR_PER_MAJOR,
    AccessSwitch,
    CoreSwitch,
    DistributionSwitch,
    Link,
    NetworkInstance,
    Profile,
    User,
)

DEFAULTS = {
    "max_users": 8,
    "max_access": 4,
    "max_dist": 3,
    "buildings": 1,
    "access_cost": (0, 100),
    "dist_cost": (0, 100),
    "core_cost": (0, 50),
    "uplink_cost": (0, 20),
    "length": (1, 50),
    "max_users_per_access": (1, 4),
    "max_access_per_dist": (1, 4),
    "density": 0.8,
}


def random_instance(rng: random.Random, **overrides) -> NetworkInstance:
    p = dict(DEFAULTS, **overrides)
    unknown = set(overrides) - set(DEFAULTS)
    if unknown:
        raise TypeError(f"unknown generator options: {sorted(unknown)}")

    def money(lo_hi):
        return rng.randint(*lo_hi) * MINOR_PER_MAJOR

    buildings = [f"B{i}" for i in range(p["buildings"])]
    nu = rng.randint(0, p["max_users"])
    users = [User(f"u{i}", rng.choice(buildings), rng.choice(list(Profile))) for i in range(nu)]
    needed = sorted({u.profile for u in users}, key=lambda x: x.value)
    if len(needed) > p["max_access"]:
        users = [User(u.id, u.building, needed[0]) for u in users]
        needed = needed[:1]
    na = rng.randint(max(1, len(needed)), p["max_access"])
    nd = rng.randint(1, p["max_dist"])

    profiles = [rng.choice(list(Profile)) for _ in range(na)]
    # every profile in use gets at least one switch
    for i, prof in enumerate(needed):
        if prof not in profiles:
            profiles[i] = prof
    caps = [rng.randint(*p["max_users_per_access"]) for _ in range(na)]
    for prof in Profile:
        idx = [i for i in range(na) if profiles[i] == prof]
        demand = sum(1 for u in users if u.profile == prof)
        while idx and sum(caps[i] for i in idx) < demand:
            caps[rng.choice(idx)] += 1
    abuild = [rng.choice(buildings) for _ in range(na)]
    access = [AccessSwitch(f"a{i}", abuild[i], profiles[i], money(p["access_cost"]),
                           float(rng.randint(20, 80)), caps[i]) for i in range(na)]
    dists = [DistributionSwitch(f"d{i}", rng.choice(buildings), money(p["dist_cost"]),
                                float(rng.randint(50, 150)),
                                rng.randint(*p["max_access_per_dist"])) for i in range(nd)]
    core = CoreSwitch(money(p["core_cost"]), float(rng.randint(100, 300)))

    ua = {}
    for u in users:
        for a in access:
            if rng.random() < p["density"]:
                length = rng.randint(*p["length"])
                ua[(u.id, a.id)] = Link(length * MINOR_PER_MAJOR, float(length), 1e8, "copper")
        same = [a for a in access if a.profile == u.profile]
        if not any((u.id, a.id) in ua for a in same):
            a = rng.choice(same)
            length = rng.randint(*p["length"])
            ua[(u.id, a.id)] = Link(length * MINOR_PER_MAJOR, float(length), 1e8, "copper")
    ad = {}
    for a in access:
        for d in dists:
            if rng.random() < p["density"]:
                ad[(a.id, d.id)] = Link(money(p["uplink_cost"]), float(rng.randint(10, 200)),
                                        1e9, "copper")
        if not any((a.id, d.id) in ad for d in dists):
            d = rng.choice(dists)
            ad[(a.id, d.id)] = Link(money(p["uplink_cost"]), float(rng.randint(10, 200)),
                                    1e9, "copper")
    dc = {d.id: Link(money(p["uplink_cost"]), float(rng.randint(100, 2000)), 1e9, "fiber")
          for d in dists}
    return NetworkInstance(users, access, dists, core, ua, ad, dc)

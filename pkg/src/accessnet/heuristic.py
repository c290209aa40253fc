"""Per-building distributed design.

Each building is designed on its own: users are wired to the closest access
switch of their own profile inside the building, and the building gets one
distribution switch uplinked to the core. Buildings are then stitched
together into a single ``DesignSolution``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from .errors import CapacityExhausted, HeuristicFailed, NoDistributionSwitch
from .model import CableRateTable, NetworkInstance, Profile, link_cost_from_length, money_str
from .optimizer.solve import DesignSolution


@dataclass(frozen=True)
class BuildingPlan:
    building: str
    instance: NetworkInstance
    issues: tuple = ()  # (code, message) pairs
    distribution: str | None = None
    assignment: dict = field(default_factory=dict)  # user -> access
    lengths: dict = field(default_factory=dict)  # user -> meters
    cost: int = 0

    @property
    def open_access(self):
        return sorted(set(self.assignment.values()))

    def to_dict(self):
        return {
            "building": self.building,
            "users": len(self.instance.users),
            "distribution": self.distribution,
            "open_access": self.open_access,
            "assignment": dict(sorted(self.assignment.items())),
            "wire_length_m": math.fsum(self.lengths.values()),
            "cost": money_str(self.cost),
            "cost_minor": self.cost,
            "issues": [m for _, m in self.issues],
        }


def partition_by_building(inst: NetworkInstance) -> list[BuildingPlan]:
    """One skeleton plan per building that has users, sorted by building id.

    Links that cross building boundaries are dropped from the sub-instances.
    Problems that make a building undesignable are recorded in ``issues``.
    """
    plans = []
    for b in sorted({u.building for u in inst.users}):
        users = [u for u in inst.users if u.building == b]
        access = [a for a in inst.access_switches if a.building == b]
        dists = [d for d in inst.distribution_switches if d.building == b]
        uids = {u.id for u in users}
        aids = {a.id for a in access}
        dids = {d.id for d in dists}
        sub = NetworkInstance(
            users, access, dists, inst.core,
            {k: v for k, v in inst.user_access_links.items() if k[0] in uids and k[1] in aids},
            {k: v for k, v in inst.access_dist_links.items() if k[0] in aids and k[1] in dids},
            {k: v for k, v in inst.dist_core_links.items() if k in dids},
        )
        issues = []
        for prof in Profile:
            if any(u.profile == prof for u in users) and not any(a.profile == prof for a in access):
                issues.append(("no-profile-switch",
                               f"{b}: {prof.value} users but no {prof.value} access switch"))
        for u in sorted(users, key=lambda u: u.id):
            if not sub.user_candidates[u.id] and any(a.profile == u.profile for a in access):
                issues.append(("no-candidate",
                               f"{b}: user {u.id} has no link to a {u.profile.value} switch"))
        if not sub.dist_core_links:
            issues.append(("no-distribution", f"{b}: no distribution switch with a core uplink"))
        plans.append(BuildingPlan(b, sub, tuple(issues)))
    return plans


def design_building(plan: BuildingPlan) -> BuildingPlan:
    if plan.issues:
        message = "; ".join(m for _, m in plan.issues)
        if all(code == "no-distribution" for code, _ in plan.issues):
            raise NoDistributionSwitch(message)
        raise CapacityExhausted(message)
    inst = plan.instance
    links = inst.user_access_links
    free = {a.id: a.max_users for a in inst.access_switches}

    def ranked(uid):
        return sorted(inst.user_candidates[uid], key=lambda a: (links[(uid, a)].length, a))

    order = []
    for u in inst.users:
        cands = ranked(u.id)
        order.append((links[(u.id, cands[0])].length, u.id, cands))
    order.sort(key=lambda t: (t[0], t[1]))

    assignment, lengths = {}, {}
    for _, uid, cands in order:
        for a in cands:
            if free[a] > 0:
                free[a] -= 1
                assignment[uid] = a
                lengths[uid] = links[(uid, a)].length
                break
        else:
            raise CapacityExhausted(
                f"{plan.building}: every same-profile switch linked to user {uid} is full")

    used = sorted(set(assignment.values()))
    linked = [d for d in inst.distribution_switches
              if d.id in inst.dist_core_links
              and all((a, d.id) in inst.access_dist_links for a in used)]
    if not linked:
        raise NoDistributionSwitch(
            f"{plan.building}: no distribution switch links all {len(used)} access switches "
            "to the core")
    fits = [d for d in linked if d.max_access >= len(used)]
    if not fits:
        raise CapacityExhausted(
            f"{plan.building}: {len(used)} access switches exceed every distribution "
            f"switch degree (max {max(d.max_access for d in linked)})")
    dist = min(fits, key=lambda d: (d.cost + inst.dist_core_links[d.id].cost, d.id))

    cost = sum(links[p].cost for p in assignment.items())
    cost += sum(inst.access_by_id[a].cost for a in used)
    cost += sum(inst.access_dist_links[(a, dist.id)].cost for a in used)
    cost += dist.cost + inst.dist_core_links[dist.id].cost
    return replace(plan, distribution=dist.id, assignment=assignment, lengths=lengths, cost=cost)


def design_plans(inst: NetworkInstance) -> list[BuildingPlan]:
    done, failures = [], {}
    for plan in partition_by_building(inst):
        try:
            done.append(design_building(plan))
        except (CapacityExhausted, NoDistributionSwitch) as e:
            failures[plan.building] = e
    if failures:
        raise HeuristicFailed(failures)
    return done


def solution_from_plans(inst: NetworkInstance, plans) -> DesignSolution:
    assignment, uplinks = {}, {}
    total = inst.core.cost
    for p in plans:
        assignment.update(p.assignment)
        uplinks.update({a: p.distribution for a in p.open_access})
        total += p.cost
    return DesignSolution(assignment, set(uplinks), uplinks, {p.distribution for p in plans},
                          total, False, 0, "heuristic")


def heuristic_design(inst: NetworkInstance) -> DesignSolution:
    return solution_from_plans(inst, design_plans(inst))


@dataclass(frozen=True)
class WireOverhead:
    extra_length: float
    extra_cost: int
    per_user: dict

    def to_dict(self):
        return {
            "extra_length_m": self.extra_length,
            "extra_cost": money_str(self.extra_cost),
            "extra_cost_minor": self.extra_cost,
        }


def wire_overhead(inst: NetworkInstance, sol: DesignSolution,
                  rates: CableRateTable | None = None, medium: str = "copper") -> WireOverhead:
    """Cable added by not wiring every user to its physically closest switch.

    The baseline is the closest linked access switch of any profile.
    """
    rates = rates or CableRateTable()
    shortest = {}
    for (uid, _), link in inst.user_access_links.items():
        if uid not in shortest or link.length < shortest[uid]:
            shortest[uid] = link.length
    per_user = {}
    for uid, aid in sorted(sol.user_assignment.items()):
        per_user[uid] = inst.user_access_links[(uid, aid)].length - shortest[uid]
    extra = math.fsum(per_user.values())
    return WireOverhead(extra, link_cost_from_length(extra, medium, rates), per_user)

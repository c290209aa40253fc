"""Exact design: branch-and-bound solver, brute-force oracle, solution checker."""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping

from ..errors import BudgetExceeded, InstanceTooLarge, Infeasible, InvalidInstance
from ..model import NetworkInstance, Profile, ValidationReport, money_str, validate_instance
from . import _kernel

ORACLE_MAX_USERS = 8
ORACLE_MAX_ACCESS = 4
ORACLE_MAX_DIST = 3


@dataclass(frozen=True)
class DesignSolution:
    user_assignment: Mapping[str, str]
    open_access: frozenset
    access_assignment: Mapping[str, str]
    open_distribution: frozenset
    total_cost: int
    proven_optimal: bool = True
    explored_nodes: int = 0
    method: str = "exact"

    def __post_init__(self):
        object.__setattr__(self, "user_assignment", MappingProxyType(dict(self.user_assignment)))
        object.__setattr__(self, "access_assignment",
                           MappingProxyType(dict(self.access_assignment)))
        object.__setattr__(self, "open_access", frozenset(self.open_access))
        object.__setattr__(self, "open_distribution", frozenset(self.open_distribution))

    def key(self):
        """Tie-break key: assignment in sorted user order, then sorted access order."""
        return (tuple(sorted(self.user_assignment.items())),
                tuple(sorted(self.access_assignment.items())))

    def to_dict(self):
        return {
            "method": self.method,
            "total_cost": money_str(self.total_cost),
            "total_cost_minor": self.total_cost,
            "proven_optimal": self.proven_optimal,
            "explored_nodes": self.explored_nodes,
            "user_assignment": dict(sorted(self.user_assignment.items())),
            "open_access": sorted(self.open_access),
            "access_assignment": dict(sorted(self.access_assignment.items())),
            "open_distribution": sorted(self.open_distribution),
        }

    @classmethod
    def from_dict(cls, doc):
        return cls(doc["user_assignment"], doc["open_access"], doc["access_assignment"],
                   doc["open_distribution"], int(doc["total_cost_minor"]),
                   bool(doc.get("proven_optimal", False)), int(doc.get("explored_nodes", 0)),
                   doc.get("method", "exact"))


def design_cost(inst: NetworkInstance, user_assignment, access_assignment,
                open_access, open_distribution) -> int:
    """Establishment cost of a design; raises KeyError on a missing link."""
    cost = inst.core.cost
    for uid, aid in user_assignment.items():
        cost += inst.user_access_links[(uid, aid)].cost
    for aid in open_access:
        cost += inst.access_by_id[aid].cost
    for aid, did in access_assignment.items():
        cost += inst.access_dist_links[(aid, did)].cost
    for did in open_distribution:
        cost += inst.dist_by_id[did].cost + inst.dist_core_links[did].cost
    return cost


def induced_tree(inst: NetworkInstance, sol: DesignSolution):
    """Nodes and undirected edges of the design rooted at the core."""
    root = ("core", inst.core.id)
    nodes = {root}
    nodes.update(("user", u.id) for u in inst.users)
    nodes.update(("access", a) for a in sol.open_access)
    nodes.update(("dist", d) for d in sol.open_distribution)
    edges = [(("user", u), ("access", a)) for u, a in sol.user_assignment.items()]
    edges += [(("access", a), ("dist", d)) for a, d in sol.access_assignment.items()]
    edges += [(("dist", d), root) for d in sol.open_distribution]
    return nodes, edges


def is_tree(nodes, edges, root) -> bool:
    if len(edges) != len(nodes) - 1:
        return False
    adj = {n: [] for n in nodes}
    for a, b in edges:
        if a not in adj or b not in adj:
            return False
        adj[a].append(b)
        adj[b].append(a)
    seen = {root}
    queue = deque([root])
    while queue:
        for nxt in adj[queue.popleft()]:
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return len(seen) == len(nodes)


def check_solution(inst: NetworkInstance, sol: DesignSolution) -> ValidationReport:
    rep = ValidationReport()
    users = inst.user_by_id
    access = inst.access_by_id
    dists = inst.dist_by_id

    for uid in sorted(sol.user_assignment):
        if uid not in users:
            rep.add("unknown-user", uid, f"assignment names unknown user {uid!r}")
    for aid in sorted(sol.open_access | set(sol.access_assignment)):
        if aid not in access:
            rep.add("unknown-access", aid, f"solution names unknown access switch {aid!r}")
    for did in sorted(sol.open_distribution | set(sol.access_assignment.values())):
        if did not in dists:
            rep.add("unknown-distribution", did,
                    f"solution names unknown distribution switch {did!r}")
    if rep.violations:
        return rep

    load = {}
    for u in inst.users:
        aid = sol.user_assignment.get(u.id)
        if aid is None:
            rep.add("user-unassigned", u.id, f"user {u.id!r} is not connected to an access switch")
            continue
        load[aid] = load.get(aid, 0) + 1
        a = access[aid]
        if a.profile != u.profile:
            rep.add("profile-mismatch", u.id,
                    f"{u.profile.value} user {u.id!r} on {a.profile.value} switch {aid!r}")
        if (u.id, aid) not in inst.user_access_links:
            rep.add("forbidden-link", f"{u.id}->{aid}", f"no link between {u.id!r} and {aid!r}")
        if aid not in sol.open_access:
            rep.add("assigned-to-closed-access", u.id,
                    f"user {u.id!r} uses access switch {aid!r}, which is not installed")
    for aid, n in sorted(load.items()):
        if n > access[aid].max_users:
            rep.add("access-over-capacity", aid,
                    f"access switch {aid!r} has {n} users, max {access[aid].max_users}")

    dload = {}
    for aid in sorted(access):
        did = sol.access_assignment.get(aid)
        is_open = aid in sol.open_access
        if is_open and did is None:
            rep.add("open-access-without-uplink", aid,
                    f"installed access switch {aid!r} has no distribution uplink")
        elif not is_open and did is not None:
            rep.add("closed-access-with-uplink", aid,
                    f"access switch {aid!r} is uplinked but not installed")
        if did is None:
            continue
        dload[did] = dload.get(did, 0) + 1
        if (aid, did) not in inst.access_dist_links:
            rep.add("forbidden-link", f"{aid}->{did}", f"no link between {aid!r} and {did!r}")
        if did not in sol.open_distribution:
            rep.add("uplink-to-closed-distribution", aid,
                    f"access switch {aid!r} uses distribution switch {did!r}, "
                    "which is not installed")
    for did, n in sorted(dload.items()):
        if n > dists[did].max_access:
            rep.add("distribution-over-capacity", did,
                    f"distribution switch {did!r} has {n} access switches, "
                    f"max {dists[did].max_access}")
    for did in sorted(sol.open_distribution):
        if did not in inst.dist_core_links:
            rep.add("forbidden-link", f"{did}->{inst.core.id}",
                    f"distribution switch {did!r} has no core link")

    nodes, edges = induced_tree(inst, sol)
    if not is_tree(nodes, edges, ("core", inst.core.id)):
        rep.add("not-a-tree", inst.core.id, "design is not a tree rooted at the core switch")

    try:
        cost = design_cost(inst, sol.user_assignment, sol.access_assignment,
                           sol.open_access, sol.open_distribution)
    except KeyError:
        cost = None
    if cost is not None and cost != sol.total_cost:
        rep.add("cost-mismatch", "total_cost",
                f"reported cost {sol.total_cost} but recomputed {cost}")
    return rep


def _pigeonhole(inst: NetworkInstance):
    for profile in Profile:
        need = sum(1 for u in inst.users if u.profile == profile)
        have = sum(a.max_users for a in inst.access_switches if a.profile == profile)
        if need > have:
            raise Infeasible(f"{need} {profile.value} users exceed {have} {profile.value} ports")


def _require_valid(inst: NetworkInstance):
    _pigeonhole(inst)
    rep = validate_instance(inst)
    if not rep.ok:
        raise InvalidInstance(rep)


def brute_force(inst: NetworkInstance) -> DesignSolution:
    """Exhaustive oracle for tiny instances.

    Enumerates every profile-respecting user->access assignment in
    lexicographic order, and for each resulting set of open access switches
    every access->distribution assignment, keeping the first cheapest.
    """
    if (len(inst.users) > ORACLE_MAX_USERS or len(inst.access_switches) > ORACLE_MAX_ACCESS
            or len(inst.distribution_switches) > ORACLE_MAX_DIST):
        raise InstanceTooLarge(
            f"brute force is limited to {ORACLE_MAX_USERS} users, {ORACLE_MAX_ACCESS} access "
            f"and {ORACLE_MAX_DIST} distribution switches")
    _require_valid(inst)

    uids = sorted(u.id for u in inst.users)
    choices = [inst.user_candidates[u] for u in uids]
    uplink_memo = {}
    enumerated = 0

    def best_uplinks(open_access):
        if open_access in uplink_memo:
            return uplink_memo[open_access]
        best = None
        per_access = [inst.access_candidates[a] for a in open_access]
        for combo in itertools.product(*per_access):
            counts = {}
            for d in combo:
                counts[d] = counts.get(d, 0) + 1
            if any(n > inst.dist_by_id[d].max_access for d, n in counts.items()):
                continue
            cost = sum(inst.access_dist_links[(a, d)].cost for a, d in zip(open_access, combo))
            cost += sum(inst.dist_by_id[d].cost + inst.dist_core_links[d].cost for d in counts)
            if best is None or cost < best[0]:
                best = (cost, combo)
        uplink_memo[open_access] = best
        return best

    best = None
    for combo in itertools.product(*choices):
        enumerated += 1
        counts = {}
        for a in combo:
            counts[a] = counts.get(a, 0) + 1
        if any(n > inst.access_by_id[a].max_users for a, n in counts.items()):
            continue
        open_access = tuple(sorted(counts))
        up = best_uplinks(open_access)
        if up is None:
            continue
        cost = inst.core.cost + up[0]
        cost += sum(inst.user_access_links[(u, a)].cost for u, a in zip(uids, combo))
        cost += sum(inst.access_by_id[a].cost for a in open_access)
        if best is None or cost < best[0]:
            best = (cost, combo, open_access, up[1])
    if best is None:
        raise Infeasible("no assignment satisfies the degree and profile constraints")
    cost, combo, open_access, uplinks = best
    access_assignment = dict(zip(open_access, uplinks))
    return DesignSolution(dict(zip(uids, combo)), open_access, access_assignment,
                          set(uplinks), cost, True, enumerated, "brute_force")


def _dense(inst: NetworkInstance):
    uids = sorted(u.id for u in inst.users)
    aids = sorted(a.id for a in inst.access_switches)
    dids = sorted(d.id for d in inst.distribution_switches)
    nu, na, nd = len(uids), len(aids), len(dids)
    ua = [-1] * (nu * na)
    for i, u in enumerate(uids):
        cands = set(inst.user_candidates[u])
        for j, a in enumerate(aids):
            if a in cands:
                ua[i * na + j] = inst.user_access_links[(u, a)].cost
    ad = [-1] * (na * nd)
    for j, a in enumerate(aids):
        cands = set(inst.access_candidates[a])
        for k, d in enumerate(dids):
            if d in cands:
                ad[j * nd + k] = inst.access_dist_links[(a, d)].cost
    acc = [inst.access_by_id[a] for a in aids]
    dist = [inst.dist_by_id[d] for d in dids]
    d_cost = [d.cost + (inst.dist_core_links[d.id].cost if d.id in inst.dist_core_links else 0)
              for d in dist]
    return (uids, aids, dids), (nu, na, nd, ua, [a.cost for a in acc],
                                [a.max_users for a in acc], ad, d_cost,
                                [d.max_access for d in dist], inst.core.cost)


def solve_exact(inst: NetworkInstance, max_nodes: int | None = None,
                time_budget: float | None = None, kernel=None) -> DesignSolution:
    """Minimum-establishment-cost design by depth-first branch and bound.

    Among equal-cost optima the lexicographically smallest assignment (sorted
    user ids, then sorted access ids) is returned. Raises ``Infeasible`` or
    ``BudgetExceeded`` (carrying the best incumbent, not proven optimal).
    """
    _require_valid(inst)
    (uids, aids, dids), args = _dense(inst)
    search = kernel or _kernel.search
    status, cost, uvec, dvec, nodes = search(*args, max_nodes, time_budget)
    if status == _kernel.INFEASIBLE:
        raise Infeasible("no assignment satisfies the degree and profile constraints")
    sol = None
    if uvec is not None:
        access_assignment = {aids[j]: dids[k] for j, k in enumerate(dvec) if k >= 0}
        sol = DesignSolution({uids[i]: aids[j] for i, j in enumerate(uvec)},
                             set(access_assignment), access_assignment,
                             set(access_assignment.values()),
                             cost, status == _kernel.OPTIMAL, nodes, "exact")
    if status == _kernel.BUDGET:
        raise BudgetExceeded(f"search stopped after {nodes} nodes without proving optimality",
                             sol)
    return sol

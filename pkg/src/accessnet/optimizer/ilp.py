"""Explicit binary integer program for the cheap-network design problem.

The model is never handed to an LP solver; it exists so the constraint
structure can be inspected, counted and evaluated against any candidate
0/1 vector (for instance one derived from a ``DesignSolution``).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..model import NetworkInstance, Profile

EQ = "="
LE = "<="

# constraint families, in the order they are emitted
USER_OFFICE = "user-office-assignment"
USER_ALWAYS_ON = "user-always-on-assignment"
ACCESS_DEGREE = "access-degree"
USER_NEEDS_OPEN_ACCESS = "user-needs-open-access"
ACCESS_UPLINK = "access-uplink"
DIST_DEGREE = "distribution-degree"
ACCESS_NEEDS_OPEN_DIST = "access-needs-open-distribution"


@dataclass(frozen=True)
class Constraint:
    family: str
    row: dict  # variable index -> coefficient
    sense: str
    rhs: int

    def satisfied(self, x) -> bool:
        lhs = sum(c * x[i] for i, c in self.row.items())
        return lhs == self.rhs if self.sense == EQ else lhs <= self.rhs


@dataclass
class IlpModel:
    w: dict = field(default_factory=dict)  # (user, access) -> index
    x: dict = field(default_factory=dict)  # access -> index
    y: dict = field(default_factory=dict)  # (access, dist) -> index
    z: dict = field(default_factory=dict)  # dist -> index
    objective: list = field(default_factory=list)
    constant: int = 0
    constraints: list = field(default_factory=list)
    # variables with no corresponding link; forced to zero as bounds, not rows
    fixed_zero: set = field(default_factory=set)

    @property
    def n_vars(self) -> int:
        return len(self.objective)

    def family_counts(self):
        out = {}
        for c in self.constraints:
            out[c.family] = out.get(c.family, 0) + 1
        return out

    def evaluate(self, x) -> int:
        return self.constant + sum(c * v for c, v in zip(self.objective, x))

    def violated(self, x):
        bad = [c for c in self.constraints if not c.satisfied(x)]
        bad += [Constraint("fixed-zero", {i: 1}, EQ, 0) for i in sorted(self.fixed_zero) if x[i]]
        bad += [Constraint("binary", {i: 1}, LE, 1) for i, v in enumerate(x) if v not in (0, 1)]
        return bad

    def vector(self, sol):
        """0/1 vector for a solution; raises KeyError for a pair without a variable."""
        x = [0] * self.n_vars
        for pair in sol.user_assignment.items():
            x[self.w[pair]] = 1
        for a in sol.open_access:
            x[self.x[a]] = 1
        for pair in sol.access_assignment.items():
            x[self.y[pair]] = 1
        for d in sol.open_distribution:
            x[self.z[d]] = 1
        return x


def build_ilp(inst: NetworkInstance) -> IlpModel:
    m = IlpModel(constant=inst.core.cost)
    users = sorted(inst.users, key=lambda u: u.id)
    access = sorted(inst.access_switches, key=lambda a: a.id)
    dists = sorted(inst.distribution_switches, key=lambda d: d.id)

    def var(table, key, cost, forbidden=False):
        table[key] = len(m.objective)
        m.objective.append(cost)
        if forbidden:
            m.fixed_zero.add(table[key])

    for u in users:
        for aid in inst.user_candidates[u.id]:
            var(m.w, (u.id, aid), inst.user_access_links[(u.id, aid)].cost)
    for a in access:
        var(m.x, a.id, a.cost)
    for a in access:
        for d in dists:
            link = inst.access_dist_links.get((a.id, d.id))
            var(m.y, (a.id, d.id), 0 if link is None else link.cost, link is None)
    for d in dists:
        core = inst.dist_core_links.get(d.id)
        var(m.z, d.id, d.cost + (0 if core is None else core.cost), core is None)

    add = m.constraints.append
    for u in users:
        fam = USER_OFFICE if u.profile == Profile.OFFICE else USER_ALWAYS_ON
        add(Constraint(fam, {m.w[(u.id, a)]: 1 for a in inst.user_candidates[u.id]}, EQ, 1))
    for a in access:
        row = {i: 1 for (uid, aid), i in m.w.items() if aid == a.id}
        add(Constraint(ACCESS_DEGREE, row, LE, a.max_users))
    for (uid, aid), i in m.w.items():
        add(Constraint(USER_NEEDS_OPEN_ACCESS, {i: 1, m.x[aid]: -1}, LE, 0))
    for a in access:
        row = {m.y[(a.id, d.id)]: 1 for d in dists}
        row[m.x[a.id]] = -1
        add(Constraint(ACCESS_UPLINK, row, EQ, 0))
    for d in dists:
        row = {m.y[(a.id, d.id)]: 1 for a in access}
        add(Constraint(DIST_DEGREE, row, LE, d.max_access))
    for a in access:
        for d in dists:
            add(Constraint(ACCESS_NEEDS_OPEN_DIST, {m.y[(a.id, d.id)]: 1, m.z[d.id]: -1}, LE, 0))
    return m

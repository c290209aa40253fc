# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled branch-and-bound kernel; same contract as ``_bnb_py.search``."""

from libc.stdlib cimport malloc, free
from libc.string cimport memcpy
from libc.stdint cimport int64_t

import time

cdef enum:
    LESS = 0
    EQUAL = 1
    GREATER = 2
    UNDET = 3
    PENDING = -2

OPTIMAL = 0
INFEASIBLE = 1
BUDGET = 2


cdef int64_t* _alloc(Py_ssize_t n) except NULL:
    cdef int64_t* p = <int64_t*> malloc((n if n > 0 else 1) * sizeof(int64_t))
    if p == NULL:
        raise MemoryError()
    return p


cdef class _Search:
    cdef Py_ssize_t nu, na, nd
    cdef int64_t *ua_cost
    cdef int64_t *ad_cost
    cdef int64_t *a_cost
    cdef int64_t *a_cap
    cdef int64_t *d_cost
    cdef int64_t *d_cap
    cdef int64_t *min_ad
    cdef int64_t *minu
    # cand[u * na + k] = k-th cheapest access for u; ncand[u] entries
    cdef int64_t *cand
    cdef int64_t *ncand
    cdef int64_t *dcand
    cdef int64_t *ndcand
    cdef int64_t *au
    cdef int64_t *adv
    cdef int64_t *load
    cdef int64_t *dload
    cdef int64_t *best_u
    cdef int64_t *best_d
    cdef int64_t *open_list
    cdef Py_ssize_t n_open
    cdef int64_t best, committed, rest
    cdef long long nodes, max_nodes
    cdef double deadline
    cdef bint has_deadline
    cdef bint aborted

    def __cinit__(self, Py_ssize_t nu, Py_ssize_t na, Py_ssize_t nd):
        self.nu, self.na, self.nd = nu, na, nd
        self.ua_cost = _alloc(nu * na)
        self.ad_cost = _alloc(na * nd)
        self.a_cost = _alloc(na)
        self.a_cap = _alloc(na)
        self.d_cost = _alloc(nd)
        self.d_cap = _alloc(nd)
        self.min_ad = _alloc(na)
        self.minu = _alloc(nu)
        self.cand = _alloc(nu * na)
        self.ncand = _alloc(nu)
        self.dcand = _alloc(na * nd)
        self.ndcand = _alloc(na)
        self.au = _alloc(nu)
        self.adv = _alloc(na)
        self.load = _alloc(na)
        self.dload = _alloc(nd)
        self.best_u = _alloc(nu)
        self.best_d = _alloc(na)
        self.open_list = _alloc(na)

    def __dealloc__(self):
        free(self.ua_cost); free(self.ad_cost); free(self.a_cost); free(self.a_cap)
        free(self.d_cost); free(self.d_cap); free(self.min_ad); free(self.minu)
        free(self.cand); free(self.ncand); free(self.dcand); free(self.ndcand)
        free(self.au); free(self.adv); free(self.load); free(self.dload)
        free(self.best_u); free(self.best_d); free(self.open_list)

    cdef int lex(self, bint phase2) nogil:
        cdef Py_ssize_t i
        cdef int64_t x
        for i in range(self.nu):
            x = self.au[i]
            if x < 0:
                return UNDET
            if x != self.best_u[i]:
                return LESS if x < self.best_u[i] else GREATER
        if not phase2:
            return UNDET
        for i in range(self.na):
            x = self.adv[i]
            if x == PENDING:
                return UNDET
            if x != self.best_d[i]:
                return LESS if x < self.best_d[i] else GREATER
        return EQUAL

    cdef bint pruned(self, int64_t bound, bint phase2) nogil:
        cdef int s
        if self.best < 0 or bound < self.best:
            return False
        if bound > self.best:
            return True
        s = self.lex(phase2)
        return s == GREATER or s == EQUAL

    cdef bint tick(self):
        self.nodes += 1
        if self.max_nodes >= 0 and self.nodes > self.max_nodes:
            self.aborted = True
        elif self.has_deadline and (self.nodes & 255) == 0 and time.monotonic() > self.deadline:
            self.aborted = True
        return self.aborted

    cdef void leaf(self):
        cdef int64_t cost = self.committed
        if self.best < 0 or cost < self.best or (cost == self.best and self.lex(True) == LESS):
            self.best = cost
            memcpy(self.best_u, self.au, self.nu * sizeof(int64_t))
            memcpy(self.best_d, self.adv, self.na * sizeof(int64_t))

    cdef void dfs2(self, Py_ssize_t k):
        cdef Py_ssize_t j, a, d
        cdef int64_t add
        if self.tick():
            return
        if k == self.n_open:
            self.leaf()
            return
        a = self.open_list[k]
        self.rest -= self.min_ad[a]
        for j in range(self.ndcand[a]):
            d = self.dcand[a * self.nd + j]
            if self.dload[d] >= self.d_cap[d]:
                continue
            add = self.ad_cost[a * self.nd + d]
            if self.dload[d] == 0:
                add += self.d_cost[d]
            self.committed += add
            self.adv[a] = d
            if not self.pruned(self.committed + self.rest, True):
                self.dload[d] += 1
                self.dfs2(k + 1)
                self.dload[d] -= 1
            self.adv[a] = PENDING
            self.committed -= add
            if self.aborted:
                break
        self.rest += self.min_ad[a]

    cdef void dfs1(self, Py_ssize_t assigned):
        cdef Py_ssize_t u, a, j, pick, pick_n, n
        cdef int64_t add, extra
        if self.tick():
            return
        if assigned == self.nu:
            self.n_open = 0
            for a in range(self.na):
                if self.load[a] > 0:
                    self.open_list[self.n_open] = a
                    self.n_open += 1
                    self.adv[a] = PENDING
            self.dfs2(0)
            for a in range(self.na):
                if self.load[a] > 0:
                    self.adv[a] = -1
            return
        # branch on the unassigned user with the fewest open candidates
        pick = -1
        pick_n = self.na + 1
        for u in range(self.nu):
            if self.au[u] >= 0:
                continue
            n = 0
            for j in range(self.ncand[u]):
                a = self.cand[u * self.na + j]
                if self.load[a] < self.a_cap[a]:
                    n += 1
            if n < pick_n:
                pick = u
                pick_n = n
                if n == 0:
                    return
        u = pick
        self.rest -= self.minu[u]
        for j in range(self.ncand[u]):
            a = self.cand[u * self.na + j]
            if self.load[a] >= self.a_cap[a]:
                continue
            add = self.ua_cost[u * self.na + a]
            extra = 0
            if self.load[a] == 0:
                add += self.a_cost[a]
                extra = self.min_ad[a]
            self.committed += add
            self.rest += extra
            self.au[u] = a
            if not self.pruned(self.committed + self.rest, False):
                self.load[a] += 1
                self.dfs1(assigned + 1)
                self.load[a] -= 1
            self.au[u] = -1
            self.rest -= extra
            self.committed -= add
            if self.aborted:
                break
        self.rest += self.minu[u]


def search(nu, na, nd, ua_cost, a_cost, a_cap, ad_cost, d_cost, d_cap, base_cost,
           max_nodes, time_budget):
    cdef _Search s = _Search(nu, na, nd)
    cdef Py_ssize_t u, a, d, i
    for i in range(nu * na):
        s.ua_cost[i] = ua_cost[i]
    for i in range(na * nd):
        s.ad_cost[i] = ad_cost[i]
    for a in range(na):
        s.a_cost[a] = a_cost[a]
        s.a_cap[a] = a_cap[a]
        s.load[a] = 0
        s.adv[a] = -1
        s.best_d[a] = -1
    for d in range(nd):
        s.d_cost[d] = d_cost[d]
        s.d_cap[d] = d_cap[d]
        s.dload[d] = 0

    for a in range(na):
        row = sorted((ad_cost[a * nd + d], d) for d in range(nd) if ad_cost[a * nd + d] >= 0)
        s.ndcand[a] = len(row)
        for i, (_, d) in enumerate(row):
            s.dcand[a * nd + i] = d
        s.min_ad[a] = row[0][0] if row else -1

    total = 0
    for u in range(nu):
        row = sorted((ua_cost[u * na + a], a) for a in range(na)
                     if ua_cost[u * na + a] >= 0 and s.min_ad[a] >= 0)
        if not row:
            return INFEASIBLE, -1, None, None, 0
        s.ncand[u] = len(row)
        for i, (_, a) in enumerate(row):
            s.cand[u * na + i] = a
        s.minu[u] = row[0][0]
        total += row[0][0]
        s.au[u] = -1
        s.best_u[u] = -1

    s.best = -1
    s.nodes = 0
    s.committed = base_cost
    s.rest = total
    s.max_nodes = -1 if max_nodes is None else max_nodes
    s.has_deadline = time_budget is not None
    s.deadline = time.monotonic() + time_budget if time_budget is not None else 0.0
    s.aborted = False

    s.dfs1(0)

    status = BUDGET if s.aborted else OPTIMAL
    if s.best < 0:
        return (INFEASIBLE if status == OPTIMAL else BUDGET), -1, None, None, s.nodes
    return (status, s.best, [s.best_u[u] for u in range(nu)],
            [s.best_d[a] for a in range(na)], s.nodes)

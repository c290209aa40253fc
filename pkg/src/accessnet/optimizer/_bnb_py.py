"""Pure-Python branch-and-bound kernel.

Mirrors ``_bnb_ext.pyx`` exactly; used when the compiled extension is not
built or ``ACCESSNET_PURE_PYTHON`` is set.

Inputs are dense, index-based tables (indices follow sorted ids):

    ua_cost[u * na + a]   user->access link cost, -1 when forbidden
    ad_cost[a * nd + d]   access->distribution link cost, -1 when forbidden
    a_cost, a_cap         access opening cost and max users
    d_cost, d_cap         distribution opening cost (c_d + c_ds) and max access

Returns ``(status, cost, user_vec, dist_vec, nodes)`` where status is
OPTIMAL, INFEASIBLE or BUDGET, ``user_vec[u]`` is the access index and
``dist_vec[a]`` the distribution index (-1 for a closed access switch).
"""

import time

OPTIMAL = 0
INFEASIBLE = 1
BUDGET = 2

_LESS, _EQUAL, _GREATER, _UNDET = 0, 1, 2, 3
_PENDING = -2


class _Abort(Exception):
    pass


def search(nu, na, nd, ua_cost, a_cost, a_cap, ad_cost, d_cost, d_cap, base_cost,
           max_nodes, time_budget):
    min_ad = []
    dcand = []
    for a in range(na):
        row = [(ad_cost[a * nd + d], d) for d in range(nd) if ad_cost[a * nd + d] >= 0]
        row.sort()
        dcand.append([d for _, d in row])
        min_ad.append(row[0][0] if row else -1)

    cand = []
    minu = []
    for u in range(nu):
        row = [(ua_cost[u * na + a], a) for a in range(na)
               if ua_cost[u * na + a] >= 0 and min_ad[a] >= 0]
        row.sort()
        if not row:
            return INFEASIBLE, -1, None, None, 0
        cand.append([a for _, a in row])
        minu.append(row[0][0])

    au = [-1] * nu
    adv = [-1] * na
    load = [0] * na
    dload = [0] * nd
    best_u = [-1] * nu
    best_d = [-1] * na
    st = {
        "best": -1,
        "nodes": 0,
        "committed": base_cost,
        "rest": sum(minu),
    }
    deadline = None if time_budget is None else time.monotonic() + time_budget

    def lex(phase2):
        for i in range(nu):
            x = au[i]
            if x < 0:
                return _UNDET
            if x != best_u[i]:
                return _LESS if x < best_u[i] else _GREATER
        if not phase2:
            return _UNDET
        for i in range(na):
            x = adv[i]
            if x == _PENDING:
                return _UNDET
            if x != best_d[i]:
                return _LESS if x < best_d[i] else _GREATER
        return _EQUAL

    def pruned(bound, phase2):
        best = st["best"]
        if best < 0 or bound < best:
            return False
        if bound > best:
            return True
        return lex(phase2) in (_GREATER, _EQUAL)

    def tick():
        st["nodes"] += 1
        if max_nodes is not None and st["nodes"] > max_nodes:
            raise _Abort
        if deadline is not None and (st["nodes"] & 255) == 0 and time.monotonic() > deadline:
            raise _Abort

    def leaf():
        cost = st["committed"]
        best = st["best"]
        if best < 0 or cost < best or (cost == best and lex(True) == _LESS):
            st["best"] = cost
            best_u[:] = au
            best_d[:] = adv

    def dfs2(open_list, k):
        tick()
        if k == len(open_list):
            leaf()
            return
        a = open_list[k]
        st["rest"] -= min_ad[a]
        for d in dcand[a]:
            if dload[d] >= d_cap[d]:
                continue
            add = ad_cost[a * nd + d] + (d_cost[d] if dload[d] == 0 else 0)
            st["committed"] += add
            adv[a] = d
            if not pruned(st["committed"] + st["rest"], True):
                dload[d] += 1
                dfs2(open_list, k + 1)
                dload[d] -= 1
            adv[a] = _PENDING
            st["committed"] -= add
        st["rest"] += min_ad[a]

    def dfs1(assigned):
        tick()
        if assigned == nu:
            open_list = [a for a in range(na) if load[a] > 0]
            for a in open_list:
                adv[a] = _PENDING
            dfs2(open_list, 0)
            for a in open_list:
                adv[a] = -1
            return
        # branch on the unassigned user with the fewest open candidates
        pick, pick_n = -1, na + 1
        for u in range(nu):
            if au[u] >= 0:
                continue
            n = 0
            for a in cand[u]:
                if load[a] < a_cap[a]:
                    n += 1
            if n < pick_n:
                pick, pick_n = u, n
                if n == 0:
                    return
        u = pick
        st["rest"] -= minu[u]
        for a in cand[u]:
            if load[a] >= a_cap[a]:
                continue
            add = ua_cost[u * na + a]
            extra = 0
            if load[a] == 0:
                add += a_cost[a]
                extra = min_ad[a]
            st["committed"] += add
            st["rest"] += extra
            au[u] = a
            if not pruned(st["committed"] + st["rest"], False):
                load[a] += 1
                dfs1(assigned + 1)
                load[a] -= 1
            au[u] = -1
            st["rest"] -= extra
            st["committed"] -= add
        st["rest"] += minu[u]

    status = OPTIMAL
    try:
        dfs1(0)
    except _Abort:
        status = BUDGET
    if st["best"] < 0:
        if status == OPTIMAL:
            return INFEASIBLE, -1, None, None, st["nodes"]
        return BUDGET, -1, None, None, st["nodes"]
    return status, st["best"], list(best_u), list(best_d), st["nodes"]

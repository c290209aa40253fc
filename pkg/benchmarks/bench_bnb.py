"""Compare the compiled and pure-Python branch-and-bound kernels.

Both kernels run on the same random instances; results must agree exactly
(cost, assignment and node count) before timings are reported.

    python3 benchmarks/bench_bnb.py --instances 20 --users 16 --access 7 --dist 3
"""

import argparse
import random
import statistics
import sys
import time

from accessnet.errors import Infeasible, InvalidInstance
from accessnet.generate import random_instance
from accessnet.optimizer import _kernel
from accessnet.optimizer.solve import _dense, _require_valid


def bench(search, args, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = search(*args, None, None)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--instances", type=int, default=20)
    p.add_argument("--users", type=int, default=16)
    p.add_argument("--access", type=int, default=7)
    p.add_argument("--dist", type=int, default=3)
    p.add_argument("--density", type=float, default=0.8)
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--seed", type=int, default=1)
    a = p.parse_args(argv)

    if _kernel.search_ext is None:
        sys.exit("compiled kernel not built; run `pip install --no-build-isolation -e .`")

    rng = random.Random(a.seed)
    rows = []
    while len(rows) < a.instances:
        inst = random_instance(random.Random(rng.randrange(2**32)), max_users=a.users,
                               max_access=a.access, max_dist=a.dist, density=a.density)
        try:
            _require_valid(inst)
        except (Infeasible, InvalidInstance):
            continue
        _, args = _dense(inst)
        t_ext, r_ext = bench(_kernel.search_ext, args, a.repeat)
        t_py, r_py = bench(_kernel.search_py, args, a.repeat)
        if r_ext != r_py:
            sys.exit(f"kernels disagree on instance {len(rows)}: {r_ext} vs {r_py}")
        rows.append((len(inst.users), len(inst.access_switches), r_ext[4], t_py, t_ext))

    print(f"{'#':>3} {'users':>5} {'acc':>4} {'nodes':>9} {'python ms':>10} "
          f"{'cython ms':>10} {'speedup':>8}")
    for i, (nu, na, nodes, t_py, t_ext) in enumerate(rows):
        print(f"{i:>3} {nu:>5} {na:>4} {nodes:>9} {t_py * 1e3:>10.2f} {t_ext * 1e3:>10.3f} "
              f"{t_py / max(t_ext, 1e-9):>7.1f}x")
    tot_py = sum(r[3] for r in rows)
    tot_ext = sum(r[4] for r in rows)
    speedups = [r[3] / max(r[4], 1e-9) for r in rows]
    print(f"total: python {tot_py:.3f} s, cython {tot_ext:.3f} s, "
          f"overall {tot_py / max(tot_ext, 1e-9):.1f}x, median {statistics.median(speedups):.1f}x")


if __name__ == "__main__":
    main()

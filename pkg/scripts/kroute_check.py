"""Flow facts of the k-route cut gadget on random instances.

For each demand: intact path count in [k, k+1], exactly 2 after deleting Z and S,
and every min-cost labeling's edges cut it below k.

    python scripts/kroute_check.py --seeds 50
"""

import argparse

import numpy as np

from lc2conn import core, oracle
from lc2conn.core import InstanceProfile
from lc2conn.gadgets import labeling_to_solution, to_kroute_cut
from lc2conn.transforms import max_to_min


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--seeds", type=int, default=50)
    p.add_argument("--left", type=int, default=2)
    p.add_argument("--right", type=int, default=2)
    p.add_argument("--labels", type=int, nargs=2, default=(3, 2))
    p.add_argument("--degree", type=int, default=2)
    a = p.parse_args()

    prof = InstanceProfile(a.left, a.right, a.labels[0], a.labels[1], a.degree)
    failures = 0
    print(f"{'seed':>4} {'k':>3} {'demands':>7} {'intact':>10} {'after Z,S':>9} {'cut':>4}")
    for seed in range(a.seeds):
        lc = max_to_min(core.random_instance(prof, seed), 0)
        net, layout = to_kroute_cut(lc)
        flow = oracle.FlowGraph.of(net)
        intact, after = [], []
        for e, dem in enumerate(net.demands):
            intact.append(flow.count(dem.s, dem.t))
            gone = set(layout.padding[e]["Z"]) | set(layout.padding[e]["S"])
            active = np.array([not ({x.u, x.v} & gone) for x in net.edges])
            after.append(flow.count(dem.s, dem.t, active))
        m, _ = core.brute_force_min_cost(lc)
        ok, _, counts = oracle.check_cut_solution(net, labeling_to_solution(layout, m), flow)
        good = all(net.k <= c <= net.k + 1 for c in intact) and set(after) == {2} and ok
        failures += not good
        print(f"{seed:>4} {net.k:>3} {len(net.demands):>7} {min(intact):>4}..{max(intact):<4} "
              f"{','.join(map(str, sorted(set(after)))):>9} {'yes' if ok else 'NO':>4}")
    print(f"{failures} failing instances out of {a.seeds}")


if __name__ == "__main__":
    main()

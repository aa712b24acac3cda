"""Planted-vs-random gap sweep: min-cost OPT of yes and no instances through each gadget.

    python scripts/gap_sweep.py --seeds 10 --gadget kroute
"""

import argparse
import statistics
from fractions import Fraction

from lc2conn.core import InstanceProfile
from lc2conn.cli import GADGET_ALIASES
from lc2conn.oracle import GapParams, gap_experiment


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--seeds", type=int, default=10)
    p.add_argument("--gadget", choices=sorted(GADGET_ALIASES), default="rootedDirected")
    p.add_argument("--left", type=int, default=2)
    p.add_argument("--right", type=int, default=2)
    p.add_argument("--labels", type=int, nargs=2, default=(2, 2))
    p.add_argument("--degree", type=int, default=2)
    a = p.parse_args()

    prof = InstanceProfile(a.left, a.right, a.labels[0], a.labels[1], a.degree)
    params = GapParams(prof, gadget=GADGET_ALIASES[a.gadget])
    print(f"{'seed':>4} {'yes OPT':>8} {'no OPT':>8} {'ratio':>7} {'no max':>7} {'k':>3} checks")
    ratios = []
    for seed in range(a.seeds):
        r = gap_experiment(params, seed)
        ratios.append(float(r.ratio))
        ok = "ok" if all(r.checks.values()) else "FAIL " + ",".join(k for k, v in r.checks.items() if not v)
        print(f"{seed:>4} {str(r.yes_opt):>8} {str(r.no_opt):>8} {float(r.ratio):>7.3f} "
              f"{str(r.no_max_fraction):>7} {r.params['k_no']:>3} {ok}")
    print(f"mean ratio {statistics.mean(ratios):.3f}, min {min(ratios):.3f}, max {max(ratios):.3f}")


if __name__ == "__main__":
    main()

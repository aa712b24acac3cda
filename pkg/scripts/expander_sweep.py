"""Success rate and lambda2 spread of seeded expander construction.

The certificate bound c*sqrt(d) is vacuous once it reaches d (c = 3 and d <= 9),
so the sweep also counts graphs with a real spectral gap (lambda2 < d).

    python scripts/expander_sweep.py --seeds 100 --c 3
"""

import argparse
import math
import statistics

from lc2conn import spectral
from lc2conn.errors import ExpanderError


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--seeds", type=int, default=100)
    p.add_argument("--c", type=float, default=3.0)
    p.add_argument("--sizes", type=int, nargs="+", default=[24, 50, 100])
    p.add_argument("--degrees", type=int, nargs="+", default=[4, 6])
    p.add_argument("--retries", type=int, default=32)
    a = p.parse_args()

    print(f"{'n':>4} {'d':>3} {'success':>8} {'attempts':>9} {'lambda2 mean':>13} {'max':>7} {'2sqrt(d-1)':>11} {'gap>0':>6}")
    for n in a.sizes:
        for d in a.degrees:
            lams, tries, ok, gapped = [], [], 0, 0
            for seed in range(a.seeds):
                try:
                    _, cert, attempts = spectral.build_expander(n, d, a.c, seed, a.retries)
                except ExpanderError:
                    continue
                ok += 1
                lams.append(cert.lambda2)
                tries.append(attempts)
                gapped += cert.lambda2 < d - 1e-6
            mean = statistics.mean(lams) if lams else float("nan")
            top = max(lams) if lams else float("nan")
            avg_tries = statistics.mean(tries) if tries else float("nan")
            print(f"{n:>4} {d:>3} {ok:>4}/{a.seeds:<3} {avg_tries:>9.2f} {mean:>13.4f} {top:>7.4f} {2 * math.sqrt(d - 1):>11.4f} {gapped:>6}")


if __name__ == "__main__":
    main()

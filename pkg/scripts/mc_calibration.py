"""Monte Carlo calibration battery: every (law, parameter) pair with its z-score.

Runs the default seed and the two documented fallbacks; at most one pair
per seed may land outside 3 sigma.
"""

import argparse
import time

from walklab.montecarlo import DEFAULT_SEED, FALLBACK_SEEDS
from walklab.verify import MAX_OUTSIDE_3SIGMA, calibration_battery


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=100_000)
    ap.add_argument("--seeds", type=int, nargs="*", default=[DEFAULT_SEED, *FALLBACK_SEEDS])
    args = ap.parse_args()

    for seed in args.seeds:
        t0 = time.perf_counter()
        rows = calibration_battery(seed, args.trials)
        outside = 0
        print(f"seed {seed}")
        for label, exact, est in rows:
            z = est.z_score(exact)
            outside += abs(z) > 3
            print(f"  {label:<38} exact {exact:.6f}  mean {est.mean:.6f}  z {z:+.2f}")
        verdict = "ok" if outside <= MAX_OUTSIDE_3SIGMA else "too many outliers"
        print(f"  {outside}/{len(rows)} outside 3 sigma ({verdict}), {time.perf_counter() - t0:.1f}s")


if __name__ == "__main__":
    main()

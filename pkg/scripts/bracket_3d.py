"""Return probability of the cubic-lattice walk: bracket tightening with N.

Also prints the ratio u3d(n) / (c n^-3/2), which settles near 1/2, so the
bound used for the tail is conservative by about a factor of two.
"""

import argparse

from walklab import recurrence

REFERENCE = 0.3405373


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--terms", type=int, nargs="*", default=[10, 100, 1000, 4000])
    args = ap.parse_args()

    print(f"{'N':>6} {'P0 lo':>10} {'P0 hi':>10} {'width':>8}  contains {REFERENCE}")
    for n in args.terms:
        b = recurrence.classify(3, terms=n).p_return
        print(f"{n:>6} {b.lo:>10.6f} {b.hi:>10.6f} {b.width:>8.5f}  {REFERENCE in b}")

    seq = recurrence.u3d_sequence(max(args.terms))
    print("\nn      u3d(n) / bound")
    for n in (1, 10, 100, 1000):
        if n < len(seq):
            print(f"{n:<6} {float(seq[n]) / recurrence.u3d_bound(n):.5f}")


if __name__ == "__main__":
    main()

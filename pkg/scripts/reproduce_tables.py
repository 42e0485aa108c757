"""Write every table and figure series as CSV into an output directory."""

import argparse
from pathlib import Path

from walklab import tables


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path("results"))
    ap.add_argument("--precision", type=int, default=3)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    for tid in (1, 2, 3, 4):
        prec = 1 if tid == 3 else args.precision
        (args.out / f"table{tid}.csv").write_text(tables.build_table(tid, prec).to_csv())
    for fid in (3, 4, 5):
        for n in (10, 50):
            sheet = tables.figure(fid, n=n, precision=args.precision)
            (args.out / f"figure{fid}_2n{2 * n}.csv").write_text(sheet.to_csv())
    for a in (3, 10):
        (args.out / f"figure7_A{a}.csv").write_text(tables.figure(7, a=a, precision=args.precision).to_csv())
        (args.out / f"figure9_A{a}.csv").write_text(tables.figure(9, a=a, precision=args.precision).to_csv())
    (args.out / "figure8.csv").write_text(tables.figure(8, precision=args.precision).to_csv())
    print(f"wrote {len(list(args.out.glob('*.csv')))} files to {args.out}")


if __name__ == "__main__":
    main()

"""Sweep M for fixed N and write exact log-counts next to N*H(M/N) as CSV."""

import argparse
import csv
import sys

from montybayes.maxent import TrialCount, table_row


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--N", type=int, default=1000)
    ap.add_argument("--step", type=int, default=10)
    ap.add_argument("--out", default="-")
    args = ap.parse_args(argv)
    rows = [table_row(TrialCount(args.N, M)) for M in range(0, args.N + 1, args.step)]
    fh = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
    writer = csv.DictWriter(fh, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    if fh is not sys.stdout:
        fh.close()


if __name__ == "__main__":
    main()

"""Run the verification grid and save the envelope (JSON) and a CSV next to it.

    python scripts/run_verify.py --trials 1000000 --out results/verify
"""

import argparse
import sys
import time
from pathlib import Path

from montybayes.cli import main as cli_main


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=100_000)
    ap.add_argument("--seed", type=int, default=2010)
    ap.add_argument("--n-max", type=int, default=8)
    ap.add_argument("--out", default="results/verify")
    args = ap.parse_args(argv)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    common = ["verify", "--trials", str(args.trials), "--seed", str(args.seed), "--n-max", str(args.n_max)]
    codes = []
    t0 = time.perf_counter()
    for fmt, suffix in (("json", ".json"), ("csv", ".csv")):
        with open(out.with_suffix(suffix), "w") as fh:
            saved, sys.stdout = sys.stdout, fh
            try:
                codes.append(cli_main(common + ["--format", fmt]))
            finally:
                sys.stdout = saved
    print(f"wrote {out.with_suffix('.json')} and {out.with_suffix('.csv')} in {time.perf_counter() - t0:.1f}s;"
          f" {'all checks passed' if codes == [0, 0] else 'FAILURES, see the csv'}")
    return max(codes)


if __name__ == "__main__":
    sys.exit(main())

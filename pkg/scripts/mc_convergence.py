"""Simulated switch frequency against trial count for one config, as CSV.

The counter-based stream makes each row a prefix of the next run, so the
curve is what a single long run would show at each checkpoint.
"""

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from montybayes.core import loads_config, strategy_by_name
from montybayes.exact import enumerate_worlds, strategy_expectation
from montybayes.montecarlo import SimPlan, agreement_test, simulate

CONFIGS = Path(__file__).resolve().parents[1] / "configs"


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--config", default=str(CONFIGS / "classical.json"))
    ap.add_argument("--strategy", default="switch")
    ap.add_argument("--seed", type=int, default=2010)
    ap.add_argument("--max-exp", type=int, default=6)
    args = ap.parse_args(argv)
    config = loads_config(Path(args.config).read_text())
    strategy = strategy_by_name(args.strategy)
    win = config.prizes.top_label
    exact = strategy_expectation(enumerate_worlds(config), strategy, config.doors,
                                 lambda w, d: 1 if w.prize_at(d) == win else 0)
    print("trials,freq,exact,z")
    for e in range(3, args.max_exp + 1):
        res = simulate(SimPlan(config, strategy, 10**e, args.seed))
        z = agreement_test(res, exact).z
        print(f"{10**e},{res.freq:.6f},{Fraction(exact)},{z:.3f}")


if __name__ == "__main__":
    sys.exit(main())

"""Two-outcome entropy and the counting argument behind uniform assignments.

Of N binary trials, C(N, M) sequences have M successes, and
ln C(N, M) ~ N * H(M/N) with H the natural-log Shannon entropy. The uniform
frequency M = N/2 has the most realisations. This is the one module that works
in floating point; sums use ``math.fsum`` so the only error left is one rounding
per log term.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction


class LogBase(str, Enum):
    NATURAL = "natural"
    BASE2 = "base2"
    BASE10 = "base10"

    @property
    def log(self):
        return {"natural": math.log, "base2": math.log2, "base10": math.log10}[self.value]


@dataclass(frozen=True)
class TrialCount:
    N: int
    M: int

    def __post_init__(self):
        if self.N < 1 or not 0 <= self.M <= self.N:
            raise ValueError(f"need N >= 1 and 0 <= M <= N, got N={self.N}, M={self.M}")

    @property
    def p(self) -> Fraction:
        return Fraction(self.M, self.N)


def shannon_entropy(p, log_base: LogBase = LogBase.NATURAL) -> float:
    """-p log p - (1-p) log(1-p), with 0 log 0 taken as 0."""
    p = Fraction(p) if not isinstance(p, float) else p
    if not 0 <= p <= 1:
        raise ValueError(f"p={p} outside [0, 1]")
    log = LogBase(log_base).log
    q = 1 - p
    out = 0.0
    for x in (p, q):
        if x:
            out -= float(x) * log(x)
    return out


@dataclass(frozen=True)
class LogCount:
    value: float
    rel_error_bound: float


def log_binomial_exact(tc: TrialCount) -> LogCount:
    """ln C(N, M) as a correctly-rounded sum of ln((N - k + 1)/k), k = 1..min(M, N - M)."""
    k_max = min(tc.M, tc.N - tc.M)
    terms = [math.log(tc.N - k + 1) - math.log(k) for k in range(1, k_max + 1)]
    value = math.fsum(terms)
    eps = sys.float_info.epsilon
    # each term: two logs (<= 1 ulp each) and a subtraction, relative to the logs' magnitude
    abs_err = sum(3 * eps * (math.log(tc.N - k + 1) + math.log(k)) for k in range(1, k_max + 1))
    abs_err += eps * abs(value)
    return LogCount(value, abs_err / value if value else 0.0)


def stirling_gap(tc: TrialCount) -> float:
    """Leading-order N*H(p) - ln C(N, M): half the log of 2 pi N p (1 - p)."""
    p = tc.M / tc.N
    return 0.5 * math.log(2 * math.pi * tc.N * p * (1 - p))


def gap_tolerance(tc: TrialCount) -> float:
    """Bound on |gap - stirling_gap| from the 1/(12n) terms of Stirling's series."""
    return 1 / (6 * min(tc.M, tc.N - tc.M)) + 1e-9


@dataclass(frozen=True)
class Approximation:
    approx: float
    exact: float
    ratio_bound_ok: bool

    @property
    def gap(self) -> float:
        return self.approx - self.exact


def entropy_approximation(tc: TrialCount) -> Approximation:
    if not 0 < tc.M < tc.N:
        raise ValueError("need 0 < M < N")
    approx = tc.N * shannon_entropy(tc.p)
    exact = log_binomial_exact(tc).value
    gap = approx - exact
    ok = exact <= approx and abs(gap - stirling_gap(tc)) <= gap_tolerance(tc)
    return Approximation(approx, exact, ok)


def maxent_uniform_assignment(k: int) -> list[Fraction]:
    """Uniform assignment over ``k`` exchangeable outcomes, the most-realisable frequency vector."""
    if k < 2:
        raise ValueError("need at least two outcomes")
    return [Fraction(1, k)] * k


def most_realisable_count(N: int) -> int:
    """argmax over M of ln C(N, M) by exhaustive sweep (lowest M on ties)."""
    values = [log_binomial_exact(TrialCount(N, M)).value for M in range(N + 1)]
    return max(range(N + 1), key=lambda M: (values[M], -M))


def table_row(tc: TrialCount) -> dict:
    lc = log_binomial_exact(tc)
    n_h = tc.N * shannon_entropy(tc.p)
    row = {
        "N": tc.N,
        "M": tc.M,
        "p": float(tc.p),
        "ln_count": lc.value,
        "ln_count_rel_error_bound": lc.rel_error_bound,
        "log10_count": lc.value / math.log(10),
        "n_h": n_h,
        "gap": n_h - lc.value,
        "stirling_gap": stirling_gap(tc) if 0 < tc.M < tc.N else None,
    }
    # exp(N * H) with H taken in base 10; this convention gives 10^130.7 for N=1000, p=1/2
    row["log10_exp_n_h_base10"] = tc.N * shannon_entropy(tc.p, LogBase.BASE10) / math.log(10)
    return row

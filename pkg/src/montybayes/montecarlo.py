"""Seeded, vectorized simulation of any game and strategy.

Each trial draws ``2m + 3`` uniforms from its own counter-addressed stream
(see :mod:`montybayes.rng`), laid out as

    [0, m)        sort keys that shuffle the prizes onto doors
    m             first pick
    m + 1         class draw (predetermined host)
    [m+2, 2m+2)   host priority keys: among eligible doors the host opens the
                  one(s) with the smallest key, i.e. uniformly at random
    2m + 2        strategy randomization

so the outcome of trial ``i`` never depends on chunking or worker count.
Conditioning is by rejection: trials whose evidence fails the condition are
dropped before counting.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import rng
from .core import (
    BatchReveal,
    Condition,
    ConditionalSwitch,
    Evidence,
    GameConfig,
    InformedGoatOnly,
    PredeterminedClass,
    Stick,
    Strategy,
    SwitchToDoor,
    SwitchUniform,
    TieBreak,
    UniformRandomUnchosen,
    validate,
)

POWER_FLOOR = 1000
DEFAULT_CHUNK = 1 << 16


class ConditionNeverMatched(RuntimeError):
    pass


class InsufficientTrials(ValueError):
    pass


@dataclass(frozen=True)
class SimPlan:
    config: GameConfig
    strategy: Strategy
    trials: int
    seed: int
    condition: Condition | None = None
    win_label: str | None = None
    stream: int = 0

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")


@dataclass(frozen=True)
class SimResult:
    trials: int
    matched_trials: int
    wins: int
    total_value: int
    total_value_sq: int
    freq: float
    stderr: float

    @classmethod
    def from_counts(cls, trials, matched, wins, total, total_sq) -> "SimResult":
        if matched == 0:
            raise ConditionNeverMatched(f"no trial out of {trials} matched the condition")
        freq = wins / matched
        return cls(trials, matched, wins, total, total_sq, freq, math.sqrt(freq * (1 - freq) / matched))

    @property
    def mean_value(self) -> float:
        return self.total_value / self.matched_trials

    @property
    def value_stderr(self) -> float:
        n = self.matched_trials
        mean = Fraction(self.total_value, n)
        var = Fraction(self.total_value_sq, n) - mean * mean
        return math.sqrt(float(var) / n) if n > 1 else 0.0


@dataclass(frozen=True)
class Batch:
    """Per-trial state for a contiguous block of trials (doors are 0-based here)."""

    classes: np.ndarray  # (T, m) class index behind each door
    first: np.ndarray  # (T,)
    opened: np.ndarray  # (T, m) bool
    u_strategy: np.ndarray  # (T,)


def words_per_trial(config: GameConfig) -> int:
    return 2 * config.doors + 3


def _pick_smallest(keys: np.ndarray, eligible: np.ndarray) -> np.ndarray:
    return np.argmin(np.where(eligible, keys, 2.0), axis=1)


def _host_open(config: GameConfig, classes, first, class_u, keys) -> np.ndarray:
    prizes, host = config.prizes, config.host
    t, m = classes.shape
    rows = np.arange(t)
    unchosen = np.ones((t, m), dtype=bool)
    unchosen[rows, first] = False
    opened = np.zeros((t, m), dtype=bool)

    if isinstance(host, UniformRandomUnchosen):
        opened[rows, _pick_smallest(keys, unchosen)] = True
    elif isinstance(host, InformedGoatOnly):
        zero = np.array([c.value_cents == 0 for c in prizes.classes])
        eligible = unchosen & zero[classes]
        if host.tie_break is TieBreak.UNIFORM:
            door = _pick_smallest(keys, eligible)
        elif host.tie_break is TieBreak.LOWEST:
            door = np.argmax(eligible, axis=1)
        else:
            door = m - 1 - np.argmax(eligible[:, ::-1], axis=1)
        opened[rows, door] = True
    elif isinstance(host, PredeterminedClass):
        index = {label: k for k, label in enumerate(prizes.labels)}
        targets = np.array([index[label] for label, _ in host.distribution])
        cum = np.cumsum([float(p) for _, p in host.distribution])
        cum[-1] = 1.0
        drawn = targets[np.minimum(np.searchsorted(cum, class_u, side="right"), len(cum) - 1)]
        eligible = unchosen & (classes == drawn[:, None])
        opened[rows, _pick_smallest(keys, eligible)] = True
    elif isinstance(host, BatchReveal):
        car = prizes.labels.index(prizes.car_label)
        for want, mask in ((host.k_cars, classes == car), (host.m_open - host.k_cars, classes != car)):
            if want == 0:
                continue
            eligible = unchosen & mask
            order = np.argsort(np.where(eligible, keys, 2.0), axis=1, kind="stable")
            opened[rows[:, None], order[:, :want]] = True
    else:
        raise TypeError(f"unsupported host {host!r}")
    return opened


def play(config: GameConfig, seed: int, start: int, count: int, stream: int = 0) -> Batch:
    """Deal, pick and host moves for trials ``start .. start + count - 1``."""
    m = config.doors
    u = rng.uniforms(seed, stream, start, count, words_per_trial(config))
    base = np.repeat(np.arange(len(config.prizes.classes)), [c.count for c in config.prizes.classes])
    classes = base[np.argsort(u[:, :m], axis=1, kind="stable")]
    first = rng.below(u[:, m], m)
    opened = _host_open(config, classes, first, u[:, m + 1], u[:, m + 2 : 2 * m + 2])
    return Batch(classes, first, opened, u[:, 2 * m + 2])


def evidence_groups(config: GameConfig, batch: Batch) -> tuple[list[Evidence], np.ndarray]:
    """Distinct evidence values in the batch and, per trial, the index of its evidence."""
    codes = np.where(batch.opened, batch.classes + 1, 0)
    mat = np.column_stack([batch.first, codes]).astype(np.int64)
    labels = config.prizes.labels
    radix = max(config.doors, len(labels) + 1)
    if radix ** mat.shape[1] < 2**62:
        # pack each row into one integer; 1-D unique is much faster than row-wise
        weights = radix ** np.arange(mat.shape[1], dtype=np.int64)
        keys, inverse = np.unique(mat @ weights, return_inverse=True)
        uniq = (keys[:, None] // weights) % radix
    else:
        uniq, inverse = np.unique(mat, axis=0, return_inverse=True)
    evidence = [
        Evidence(int(row[0]) + 1, tuple((d + 1, labels[c - 1]) for d, c in enumerate(row[1:]) if c))
        for row in uniq
    ]
    return evidence, inverse.reshape(-1)


def _switch_uniform(batch: Batch) -> np.ndarray:
    t, m = batch.classes.shape
    rows = np.arange(t)
    eligible = ~batch.opened
    eligible[rows, batch.first] = False
    count = eligible.sum(axis=1)
    k = rng.below(batch.u_strategy, np.maximum(count, 1))
    return np.argmax(np.cumsum(eligible, axis=1) > k[:, None], axis=1)


def final_doors(config: GameConfig, strategy: Strategy, batch: Batch, groups=None) -> np.ndarray:
    if isinstance(strategy, Stick):
        return batch.first
    if isinstance(strategy, SwitchUniform):
        return _switch_uniform(batch)
    evidence, inverse = groups if groups is not None else evidence_groups(config, batch)
    m = config.doors
    if isinstance(strategy, ConditionalSwitch):
        flag = np.array([bool(strategy.predicate(ev, m)) for ev in evidence])[inverse]
        return np.where(flag, _switch_uniform(batch), batch.first)
    if isinstance(strategy, SwitchToDoor):
        door = np.array([strategy.choices(ev, m)[0][0] - 1 for ev in evidence])
        return door[inverse]
    raise TypeError(f"unsupported strategy {strategy!r}")


def outcomes(plan: SimPlan, start: int, count: int) -> dict[str, np.ndarray]:
    """Per-trial ``matched``, ``win`` and ``value`` arrays for a block of trials."""
    config = plan.config
    batch = play(config, plan.seed, start, count, plan.stream)
    groups = None
    if plan.condition is not None or isinstance(plan.strategy, (ConditionalSwitch, SwitchToDoor)):
        groups = evidence_groups(config, batch)
    if plan.condition is None:
        matched = np.ones(count, dtype=bool)
    else:
        evidence, inverse = groups
        matched = np.array([bool(plan.condition(ev)) for ev in evidence])[inverse]
    door = final_doors(config, plan.strategy, batch, groups)
    final_class = batch.classes[np.arange(count), door]
    win_index = config.prizes.labels.index(plan.win_label or config.prizes.top_label)
    values = np.array([c.value_cents for c in config.prizes.classes], dtype=np.int64)
    return {
        "matched": matched,
        "final_class": final_class,
        "win": final_class == win_index,
        "value": values[final_class],
    }


def _chunk_counts(plan: SimPlan, start: int, count: int) -> tuple[int, int, int, int]:
    out = outcomes(plan, start, count)
    keep = out["matched"]
    per_class = np.bincount(out["final_class"][keep], minlength=len(plan.config.prizes.classes))
    values = [c.value_cents for c in plan.config.prizes.classes]
    total = sum(int(k) * v for k, v in zip(per_class, values))
    total_sq = sum(int(k) * v * v for k, v in zip(per_class, values))
    return int(keep.sum()), int(out["win"][keep].sum()), total, total_sq


def simulate(plan: SimPlan, chunk_size: int = DEFAULT_CHUNK, workers: int = 1) -> SimResult:
    """Run the plan; the result is identical for any ``chunk_size`` and ``workers``."""
    validate(plan.config)
    spans = [(s, min(chunk_size, plan.trials - s)) for s in range(0, plan.trials, chunk_size)]
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda sc: _chunk_counts(plan, *sc), spans))
    else:
        parts = [_chunk_counts(plan, s, c) for s, c in spans]
    matched, wins, total, total_sq = (sum(col) for col in zip(*parts))
    return SimResult.from_counts(plan.trials, matched, wins, total, total_sq)


@dataclass(frozen=True)
class Agreement:
    passed: bool
    z: float
    exact: Fraction | float
    observed: float
    n: int

    def __bool__(self):
        return self.passed


def agreement_test(result: SimResult, exact, z_threshold: float = 4.0) -> Agreement:
    """Two-sided binomial z-test of the observed win frequency against an exact probability."""
    n = result.matched_trials
    if n < POWER_FLOOR:
        raise InsufficientTrials(f"{n} matched trials is below the floor of {POWER_FLOOR}")
    p = float(exact)
    sd = math.sqrt(p * (1 - p) / n)
    diff = abs(result.freq - p)
    if sd == 0:
        z = 0.0 if diff == 0 else math.inf
    else:
        z = diff / sd
    return Agreement(z <= z_threshold, z, exact, result.freq, n)


def value_agreement_test(result: SimResult, exact_mean, exact_variance=None, z_threshold: float = 4.0) -> Agreement:
    """z-test of the mean simulated prize value; uses the sample variance unless an exact one is given."""
    n = result.matched_trials
    if n < POWER_FLOOR:
        raise InsufficientTrials(f"{n} matched trials is below the floor of {POWER_FLOOR}")
    if exact_variance is not None:
        se = math.sqrt(float(exact_variance) / n)
    else:
        se = result.value_stderr
    diff = abs(result.mean_value - float(exact_mean))
    z = (0.0 if diff == 0 else math.inf) if se == 0 else diff / se
    return Agreement(z <= z_threshold, z, exact_mean, result.mean_value, n)

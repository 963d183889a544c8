"""Two-player game and the numbered-door game with a stick bonus."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import product
from typing import Sequence

import numpy as np

from . import rng
from .core import (
    Evidence,
    GameConfig,
    InformedGoatOnly,
    Stick,
    Strategy,
    SwitchUniform,
    TieBreak,
    cars_goats,
    informed_switch,
    opened_lower_than_alternative,
)
from .exact import enumerate_worlds, event, probability, strategy_expectation
from .montecarlo import SimResult

DOORS = (1, 2, 3)


# ---------------------------------------------------------------------------
# Two players, one host


@dataclass(frozen=True)
class TwoPlayerWorld:
    car_door: int
    p1_choice: int
    p2_choice: int
    host_opened: int | None
    weight: Fraction
    valid: bool

    def choice(self, player: int) -> int:
        return self.p1_choice if player == 1 else self.p2_choice

    def switch_door(self, player: int) -> int:
        (other,) = [d for d in DOORS if d not in (self.choice(player), self.host_opened)]
        return other


def _host_options(car: int, p1: int, p2: int) -> list[int]:
    return [d for d in DOORS if d not in (p1, p2, car)]


def two_player_worlds(tie_break: TieBreak = TieBreak.UNIFORM) -> list[TwoPlayerWorld]:
    """All 27 deals, each split over the host's legal moves; deals with no legal move are marked invalid."""
    base = Fraction(1, 27)
    out = []
    for car, p1, p2 in product(DOORS, repeat=3):
        options = _host_options(car, p1, p2)
        if not options:
            out.append(TwoPlayerWorld(car, p1, p2, None, base, False))
            continue
        if tie_break is TieBreak.HIGHEST:
            options = [max(options)]
        elif tie_break is TieBreak.LOWEST:
            options = [min(options)]
        for d in options:
            out.append(TwoPlayerWorld(car, p1, p2, d, base / len(options), True))
    return out


@dataclass(frozen=True)
class TwoPlayerReport:
    player: int
    stick_prob: Fraction
    switch_prob: Fraction
    worlds: list[TwoPlayerWorld]
    # (own pick, opened door) -> P(own pick hides the car | that information)
    info_sets: dict[tuple[int, int], Fraction] = field(default_factory=dict)


def two_player_analyze(tie_break: TieBreak = TieBreak.UNIFORM, player: int = 1) -> TwoPlayerReport:
    """Exact stick and switch chances for one player, conditioning away deals the host cannot serve."""
    worlds = two_player_worlds(TieBreak(tie_break))
    valid = [w for w in worlds if w.valid]
    total = sum(w.weight for w in valid)
    stick = sum(w.weight for w in valid if w.car_door == w.choice(player)) / total
    switch = sum(w.weight for w in valid if w.car_door == w.switch_door(player)) / total
    mass: dict[tuple[int, int], list[Fraction]] = {}
    for w in valid:
        cell = mass.setdefault((w.choice(player), w.host_opened), [Fraction(0), Fraction(0)])
        cell[0] += w.weight * (w.car_door == w.choice(player))
        cell[1] += w.weight
    info = {key: hit / tot for key, (hit, tot) in sorted(mass.items())}
    return TwoPlayerReport(player, stick, switch, worlds, info)


def simulate_two_player(
    trials: int,
    seed: int,
    switch: bool,
    player: int = 1,
    tie_break: TieBreak = TieBreak.UNIFORM,
    stream: int = 0,
    chunk_size: int = 1 << 16,
) -> SimResult:
    """Re-deal semantics: trials where the host has no legal door are discarded."""
    tie_break = TieBreak(tie_break)
    matched = wins = 0
    for start in range(0, trials, chunk_size):
        count = min(chunk_size, trials - start)
        u = rng.uniforms(seed, stream, start, count, 4)
        car, p1, p2 = (rng.below(u[:, k], 3) for k in range(3))
        doors = np.arange(3)
        eligible = (doors != car[:, None]) & (doors != p1[:, None]) & (doors != p2[:, None])
        n_opt = eligible.sum(axis=1)
        ok = n_opt > 0
        if tie_break is TieBreak.UNIFORM:
            k = rng.below(u[:, 3], np.maximum(n_opt, 1))
            opened = np.argmax(np.cumsum(eligible, axis=1) > k[:, None], axis=1)
        elif tie_break is TieBreak.LOWEST:
            opened = np.argmax(eligible, axis=1)
        else:
            opened = 2 - np.argmax(eligible[:, ::-1], axis=1)
        own = p1 if player == 1 else p2
        final = (3 - own - opened) if switch else own
        matched += int(ok.sum())
        wins += int((ok & (final == car)).sum())
    return SimResult.from_counts(trials, matched, wins, 0, 0)


# ---------------------------------------------------------------------------
# Numbered doors with a bonus for sticking


class Hypothesis(str, Enum):
    H1 = "h1"  # host picks uniformly between two goats
    H2 = "h2"  # host always opens the higher-numbered goat door

    @property
    def host(self) -> InformedGoatOnly:
        return InformedGoatOnly(TieBreak.UNIFORM if self is Hypothesis.H1 else TieBreak.HIGHEST)


@dataclass(frozen=True)
class BonusGameSpec:
    hypothesis: Hypothesis
    car_value: int
    bonus: int
    contestant_strategy: Strategy

    def __post_init__(self):
        object.__setattr__(self, "hypothesis", Hypothesis(self.hypothesis))
        if self.bonus < 0:
            raise ValueError("bonus must be non-negative")

    def config(self) -> GameConfig:
        return GameConfig(cars_goats(3, 1, self.car_value), self.hypothesis.host,
                          label=f"bonus-{self.hypothesis.value}")


def bonus_game_value(spec: BonusGameSpec) -> Fraction:
    """Exact expected winnings in cents: the car's value if won, plus the bonus whenever the contestant stays."""
    config = spec.config()
    worlds = enumerate_worlds(config)
    car = config.prizes.car_label

    def payoff(w, door):
        return (spec.car_value if w.prize_at(door) == car else 0) + (spec.bonus if door == w.first_choice else 0)

    return strategy_expectation(worlds, spec.contestant_strategy, 3, payoff)


def default_strategies() -> list[Strategy]:
    return [Stick(), SwitchUniform(), informed_switch()]


@dataclass(frozen=True)
class ComparisonTable:
    hypotheses: tuple[Hypothesis, ...]
    strategies: tuple[str, ...]
    values: dict[tuple[str, str], Fraction]
    best: dict[str, tuple[str, ...]]
    switch_values_equal: bool
    best_differs: bool

    def flagged(self) -> list[tuple[str, str]]:
        """Cells holding a hypothesis' best strategy when the best choice depends on the hypothesis."""
        if not (self.best_differs and self.switch_values_equal):
            return []
        return [(h, s) for h, names in self.best.items() for s in names]


def strategy_comparison(
    hypotheses: Sequence[Hypothesis],
    strategies: Sequence[Strategy],
    car_value: int,
    bonus: int,
) -> ComparisonTable:
    if not hypotheses or not strategies:
        raise ValueError("need at least one hypothesis and one strategy")
    hyps = tuple(Hypothesis(h) for h in hypotheses)
    values = {}
    for h in hyps:
        for s in strategies:
            values[(h.value, s.name)] = bonus_game_value(BonusGameSpec(h, car_value, bonus, s))
    best = {}
    for h in hyps:
        row = {s.name: values[(h.value, s.name)] for s in strategies}
        top = max(row.values())
        best[h.value] = tuple(name for name, v in row.items() if v == top)
    switch_col = [values[(h.value, s.name)] for h in hyps for s in strategies if isinstance(s, SwitchUniform)]
    return ComparisonTable(
        hyps,
        tuple(s.name for s in strategies),
        values,
        best,
        switch_values_equal=len(set(switch_col)) <= 1,
        best_differs=len(set(best.values())) > 1,
    )


def partition_switch_win(hypothesis: Hypothesis) -> dict[str, Fraction | None]:
    """P(switch wins) split by whether the host opened the lower of the two doors he could open.

    ``None`` marks a block of probability zero.
    """
    config = GameConfig(cars_goats(3, 1), Hypothesis(hypothesis).host)
    worlds = enumerate_worlds(config)
    car = config.prizes.car_label

    def lower(w):
        return opened_lower_than_alternative(w.evidence(), 3)

    def switch_wins(w):
        (other,) = Evidence(w.first_choice, ((w.opened[0], w.prize_at(w.opened[0])),)).switch_targets(3)
        return w.prize_at(other) == car

    low = event(worlds, lower)
    win = event(worlds, switch_wins)
    out: dict[str, Fraction | None] = {}
    for name, block in (("lower", low), ("higher", ~low)):
        out[name] = probability(worlds, win, block) if len(block) else None
    return out

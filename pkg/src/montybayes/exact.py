"""Exhaustive exact-rational enumeration of game worlds.

A world is one full history: prize layout, the contestant's first pick and the
doors the host opened. Its weight is the product prior(layout) * prior(pick) *
P(host action | layout, pick); summing weights over any subset of worlds
answers probability and expectation queries exactly. Events are subsets of a
fixed world list, so complements and intersections are plain set algebra.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Sequence

from .core import (
    BatchReveal,
    Evidence,
    GameConfig,
    InvalidEvidence,
    NotTwoClass,
    PrizeSpec,
    Stick,
    Strategy,
    SwitchUniform,
    validate,
)

DEFAULT_CAP = 10**7


class StateSpaceTooLarge(RuntimeError):
    pass


class ConditionOnNull(ZeroDivisionError):
    """Conditioning on an observation that has probability zero under the config."""


@dataclass(frozen=True)
class World:
    assignment: tuple[str, ...]
    first_choice: int
    opened: tuple[int, ...]
    weight: Fraction

    def prize_at(self, door: int) -> str:
        return self.assignment[door - 1]

    def evidence(self) -> Evidence:
        return Evidence(self.first_choice, tuple((d, self.assignment[d - 1]) for d in self.opened))

    @property
    def revealed(self) -> tuple[str, ...]:
        return tuple(sorted(self.assignment[d - 1] for d in self.opened))


@dataclass(frozen=True)
class Event:
    """A set of world indices inside a universe of ``size`` worlds."""

    members: frozenset[int]
    size: int

    def __and__(self, other: "Event") -> "Event":
        self._same(other)
        return Event(self.members & other.members, self.size)

    def __or__(self, other: "Event") -> "Event":
        self._same(other)
        return Event(self.members | other.members, self.size)

    def __invert__(self) -> "Event":
        return Event(frozenset(range(self.size)) - self.members, self.size)

    def __len__(self):
        return len(self.members)

    def _same(self, other: "Event"):
        if self.size != other.size:
            raise ValueError("events come from different world lists")


def event(worlds: Sequence[World], predicate: Callable[[World], bool]) -> Event:
    return Event(frozenset(i for i, w in enumerate(worlds) if predicate(w)), len(worlds))


def everything(worlds: Sequence[World]) -> Event:
    return Event(frozenset(range(len(worlds))), len(worlds))


def multiset_permutations(prizes: PrizeSpec) -> Iterator[tuple[str, ...]]:
    """Distinct door layouts, in lexicographic order of class position."""
    counts = [c.count for c in prizes.classes]
    labels = prizes.labels
    m = sum(counts)
    layout: list[str] = []

    def rec():
        if len(layout) == m:
            yield tuple(layout)
            return
        for k, label in enumerate(labels):
            if counts[k]:
                counts[k] -= 1
                layout.append(label)
                yield from rec()
                layout.pop()
                counts[k] += 1

    yield from rec()


def layout_count(prizes: PrizeSpec) -> int:
    out = math.factorial(prizes.doors)
    for c in prizes.classes:
        out //= math.factorial(c.count)
    return out


def world_count_bound(config: GameConfig) -> int:
    m = config.doors
    if isinstance(config.host, BatchReveal):
        branches = math.comb(m - 1, config.host.m_open)
    else:
        branches = m - 1
    return layout_count(config.prizes) * m * branches


class WorldList(list):
    """A list of :class:`World` that also keeps each weight as an integer over one common denominator."""

    def __init__(self, worlds: Iterable[World] = ()):
        super().__init__(worlds)
        self.denominator = math.lcm(*(w.weight.denominator for w in self)) if self else 1
        self.units = [w.weight.numerator * (self.denominator // w.weight.denominator) for w in self]


def _units(worlds: Sequence[World]) -> tuple[list[int], int]:
    if isinstance(worlds, WorldList) and len(worlds.units) == len(worlds):
        return worlds.units, worlds.denominator
    wl = WorldList(worlds)
    return wl.units, wl.denominator


def enumerate_worlds(config: GameConfig, cap: int = DEFAULT_CAP) -> WorldList:
    """All positive-weight worlds of ``config``; weights sum to exactly 1."""
    validate(config)
    bound = world_count_bound(config)
    if bound > cap:
        raise StateSpaceTooLarge(f"up to {bound} worlds exceeds cap {cap}")
    m = config.doors
    p_layout = Fraction(1, layout_count(config.prizes))
    p_pick = Fraction(1, m)
    worlds = []
    for layout in multiset_permutations(config.prizes):
        for first in range(1, m + 1):
            for opened, w in config.host.branches(config.prizes, layout, first):
                if w:
                    worlds.append(World(layout, first, opened, p_layout * p_pick * w))
    return WorldList(worlds)


def mass(worlds: Sequence[World], ev: Event) -> Fraction:
    units, denom = _units(worlds)
    return Fraction(sum(units[i] for i in ev.members), denom)


def probability(worlds: Sequence[World], ev: Event, given: Event | None = None) -> Fraction:
    """P(ev | given), exact."""
    units, _ = _units(worlds)
    if given is None:
        return mass(worlds, ev)
    denom = sum(units[i] for i in given.members)
    if denom == 0:
        raise ConditionOnNull("conditioning event has probability zero")
    return Fraction(sum(units[i] for i in ev.members & given.members), denom)


# ---------------------------------------------------------------------------
# Evidence-level queries


def matches(world: World, evidence: Evidence) -> bool:
    if world.first_choice != evidence.first_choice or world.opened != evidence.opened_doors:
        return False
    return all(world.assignment[d - 1] == label for d, label in evidence.opened)


def evidence_event(worlds: Sequence[World], evidence: Evidence) -> Event:
    return event(worlds, lambda w: matches(w, evidence))


def reveal_event(worlds: Sequence[World], labels: Iterable[str]) -> Event:
    """Worlds where the opened doors show exactly the multiset ``labels``."""
    want = tuple(sorted(labels))
    return event(worlds, lambda w: w.revealed == want)


def strategy_expectation(
    worlds: Sequence[World],
    strategy: Strategy,
    n_doors: int,
    payoff: Callable[[World, int], Fraction | int],
    given: Event | None = None,
) -> Fraction:
    """E[payoff(world, final door) | given] with the strategy's own randomization averaged out."""
    units, _ = _units(worlds)
    idx = range(len(worlds)) if given is None else sorted(given.members)
    cache: dict[tuple, list] = {}
    # choice weights are grouped by denominator so the loop stays in integers
    by_den: dict[int, int] = {}
    den = 0
    for i in idx:
        w = worlds[i]
        key = (w.first_choice, w.opened, tuple(w.assignment[d - 1] for d in w.opened))
        choices = cache.get(key)
        if choices is None:
            choices = cache[key] = [
                (d, q.numerator, q.denominator) for d, q in strategy.choices(w.evidence(), n_doors)
            ]
        u = units[i]
        den += u
        for d, qn, qd in choices:
            by_den[qd] = by_den.get(qd, 0) + u * qn * payoff(w, d)
    if den == 0:
        raise ConditionOnNull("conditioning event has probability zero")
    return sum((Fraction(t) / qd for qd, t in by_den.items()), Fraction(0)) / den


def _value_payoff(prizes: PrizeSpec):
    values = {c.label: c.value_cents for c in prizes.classes}
    return lambda w, d: values[w.assignment[d - 1]]


def _win_payoff(label: str):
    return lambda w, d: 1 if w.assignment[d - 1] == label else 0


@dataclass(frozen=True)
class AnalysisReport:
    evidence: Evidence
    evidence_probability: Fraction
    posteriors: dict[int, dict[str, Fraction]]
    win_label: str
    win_probability: dict[str, Fraction]
    expected_value: dict[str, Fraction]
    provenance: str = "exact"

    def win_posterior(self, door: int) -> Fraction:
        return self.posteriors[door].get(self.win_label, Fraction(0))


def _conditioned(config: GameConfig, evidence: Evidence, worlds: Sequence[World] | None):
    evidence.check(config.doors)
    if worlds is None:
        worlds = enumerate_worlds(config)
    given = evidence_event(worlds, evidence)
    if not given.members:
        raise ConditionOnNull(f"evidence {evidence} is impossible under this config")
    return worlds, given


def posterior(
    config: GameConfig,
    evidence: Evidence,
    worlds: Sequence[World] | None = None,
    win_label: str | None = None,
    strategies: Sequence[Strategy] = (Stick(), SwitchUniform()),
) -> AnalysisReport:
    """Per-door class posteriors given ``evidence``, plus win chance and value of each strategy."""
    worlds, given = _conditioned(config, evidence, worlds)
    units, _ = _units(worlds)
    total = mass(worlds, given)
    total_units = sum(units[i] for i in given.members)
    table: dict[int, dict[str, Fraction]] = {}
    for d in evidence.unopened(config.doors):
        row = dict.fromkeys(config.prizes.labels, 0)
        for i in given.members:
            row[worlds[i].assignment[d - 1]] += units[i]
        table[d] = {label: Fraction(v, total_units) for label, v in row.items()}
    win_label = win_label or config.prizes.top_label
    wins, evs = {}, {}
    for s in strategies:
        wins[s.name] = strategy_expectation(worlds, s, config.doors, _win_payoff(win_label), given)
        evs[s.name] = strategy_expectation(worlds, s, config.doors, _value_payoff(config.prizes), given)
    return AnalysisReport(evidence, total, table, win_label, wins, evs)


def expected_value(
    config: GameConfig,
    evidence: Evidence,
    strategy: Strategy,
    worlds: Sequence[World] | None = None,
) -> Fraction:
    """Exact conditional expectation of the final prize value, in cents."""
    worlds, given = _conditioned(config, evidence, worlds)
    return strategy_expectation(worlds, strategy, config.doors, _value_payoff(config.prizes), given)


def win_probability(
    config: GameConfig,
    evidence: Evidence,
    strategy: Strategy,
    win_label: str | None = None,
    worlds: Sequence[World] | None = None,
) -> Fraction:
    worlds, given = _conditioned(config, evidence, worlds)
    label = win_label or config.prizes.top_label
    return strategy_expectation(worlds, strategy, config.doors, _win_payoff(label), given)


@dataclass(frozen=True)
class RevealSummary:
    """Class-level conditioning: what holds given only *which classes* the host revealed."""

    revealed: tuple[str, ...]
    reveal_probability: Fraction
    first_choice_posterior: dict[str, Fraction]
    win_probability: dict[str, Fraction]
    expected_value: dict[str, Fraction]


def reveal_summary(
    config: GameConfig,
    revealed: Iterable[str],
    worlds: Sequence[World] | None = None,
    win_label: str | None = None,
    strategies: Sequence[Strategy] = (Stick(), SwitchUniform()),
) -> RevealSummary:
    if worlds is None:
        worlds = enumerate_worlds(config)
    revealed = tuple(sorted(revealed))
    given = reveal_event(worlds, revealed)
    p_given = mass(worlds, given)
    if p_given == 0:
        raise ConditionOnNull(f"host never reveals {revealed}")
    first = {
        label: probability(worlds, event(worlds, lambda w, lb=label: w.prize_at(w.first_choice) == lb), given)
        for label in config.prizes.labels
    }
    label = win_label or config.prizes.top_label
    wins, evs = {}, {}
    for s in strategies:
        wins[s.name] = strategy_expectation(worlds, s, config.doors, _win_payoff(label), given)
        evs[s.name] = strategy_expectation(worlds, s, config.doors, _value_payoff(config.prizes), given)
    return RevealSummary(revealed, p_given, first, wins, evs)


# ---------------------------------------------------------------------------
# Probability-calculus checks


@dataclass(frozen=True)
class Counterexample:
    rule: str
    a: Event
    b: Event | None
    lhs: Fraction
    rhs: Fraction


def check_sum_product_rules(
    worlds: Sequence[World],
    pairs: Iterable[tuple[Event, Event]],
    given: Event | None = None,
) -> Counterexample | None:
    """Check P(A|C) + P(~A|C) = 1 and P(AB|C) = P(A|C) P(B|AC) for every pair.

    Returns the first failing case or ``None``. Pairs whose ``A`` has zero
    probability skip the product rule (its right side is undefined).
    """
    cond = given if given is not None else everything(worlds)
    for a, b in pairs:
        for x in (a, b):
            lhs = probability(worlds, x, cond) + probability(worlds, ~x, cond)
            if lhs != 1:
                return Counterexample("sum", x, None, lhs, Fraction(1))
        pa = probability(worlds, a, cond)
        if pa == 0:
            continue
        lhs = probability(worlds, a & b, cond)
        rhs = pa * probability(worlds, b, a & cond)
        if lhs != rhs:
            return Counterexample("product", a, b, lhs, rhs)
    return None


def total_probability_holds(
    worlds: Sequence[World],
    a: Event,
    partition: Sequence[Event],
    given: Event | None = None,
) -> bool:
    cond = given if given is not None else everything(worlds)
    covered = frozenset().union(*(b.members for b in partition))
    if covered != frozenset(range(len(worlds))) or sum(len(b) for b in partition) != len(worlds):
        raise ValueError("blocks do not partition the world list")
    rhs = Fraction(0)
    for b in partition:
        pb = probability(worlds, b, cond)
        if pb:
            rhs += probability(worlds, a, b & cond) * pb
    return probability(worlds, a, cond) == rhs


@dataclass(frozen=True)
class InvarianceWitness:
    holds: bool
    revealed: tuple[str, ...]
    given_car_first: Fraction
    given_goat_first: Fraction

    def __bool__(self):
        return self.holds


def default_reveal(config: GameConfig, reveal: str = "goat") -> tuple[str, ...]:
    """Revealed-class multiset for a single-door reveal of ``reveal`` ('goat' or 'car').

    A batch host always shows the same composition, which is returned instead.
    """
    prizes = config.prizes
    if isinstance(config.host, BatchReveal):
        h = config.host
        return tuple(sorted((prizes.car_label,) * h.k_cars + (prizes.goat_label,) * (h.m_open - h.k_cars)))
    return (prizes.goat_label if reveal == "goat" else prizes.car_label,)


def posterior_invariance_holds(
    config: GameConfig,
    reveal: str = "goat",
    worlds: Sequence[World] | None = None,
) -> InvarianceWitness:
    """Does the host's chance of the given reveal not depend on whether the first pick is a car?"""
    if not config.prizes.is_two_class:
        raise NotTwoClass("invariance check needs a car/goat config")
    if worlds is None:
        worlds = enumerate_worlds(config)
    car = config.prizes.car_label
    revealed = default_reveal(config, reveal)
    m_event = reveal_event(worlds, revealed)
    car_first = event(worlds, lambda w: w.prize_at(w.first_choice) == car)
    given_car = probability(worlds, m_event, car_first)
    given_goat = probability(worlds, m_event, ~car_first)
    if given_car == 0 or given_goat == 0:
        raise ConditionOnNull(f"reveal {revealed} is impossible under one of the first-pick classes")
    return InvarianceWitness(given_car == given_goat, revealed, given_car, given_goat)


def permute_evidence(evidence: Evidence, perm: dict[int, int]) -> Evidence:
    if evidence.first_choice not in perm:
        raise InvalidEvidence("permutation does not cover the first choice")
    return Evidence(perm[evidence.first_choice], tuple((perm[d], lbl) for d, lbl in evidence.opened))

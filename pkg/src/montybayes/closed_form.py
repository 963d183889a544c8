"""Explicit formulas for the car/goat and general-prize games.

Two of these are wrong on purpose. :func:`book_stick_claim` and
:func:`book_switch_ev_prior_weighted` reproduce a published analysis that
weights by priors where posteriors are needed; they are kept so the harness can
show exactly where, and by how much, they disagree with exact enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .core import PrizeSpec


class OutOfRange(ValueError):
    pass


class NoSuchClass(KeyError):
    pass


class Reveal(str, Enum):
    GOAT = "goat"
    CAR = "car"


ERRONEOUS_UNDER_RANDOM_MONTY = "ERRONEOUS_UNDER_RANDOM_MONTY"
VALID_ONLY_FOR_PREDETERMINED_HOST = "VALID_ONLY_FOR_PREDETERMINED_HOST"


@dataclass(frozen=True)
class CarsGoatsParams:
    n: int
    j: int

    def __post_init__(self):
        if self.n < 3:
            raise OutOfRange(f"n={self.n}: need at least 3 doors")
        if not 1 <= self.j <= self.n - 2:
            raise OutOfRange(f"j={self.j}: need 1 <= j <= n - 2 = {self.n - 2}")


@dataclass(frozen=True)
class Labeled:
    """A formula value that carries a warning about when it is valid."""

    value: Fraction
    label: str


def classical_switch_prob() -> Fraction:
    return Fraction(2, 3)


def classical_stick_prob() -> Fraction:
    return 1 - classical_switch_prob()


def random_monty_win_prob(params: CarsGoatsParams, revealed: Reveal) -> Fraction:
    """Win chance after a random host reveal; the same for sticking and for switching."""
    n, j = params.n, params.j
    if Reveal(revealed) is Reveal.GOAT:
        return Fraction(j, n - 1)
    return Fraction(j - 1, n - 1)


def book_stick_claim(params: CarsGoatsParams) -> Labeled:
    return Labeled(Fraction(params.j, params.n), ERRONEOUS_UNDER_RANDOM_MONTY)


def priors(params: CarsGoatsParams) -> tuple[Fraction, Fraction]:
    """(P(first pick is a car), P(first pick is a goat))."""
    return Fraction(params.j, params.n), Fraction(params.n - params.j, params.n)


def likelihoods(params: CarsGoatsParams, revealed: Reveal) -> tuple[Fraction, Fraction]:
    """Random host: P(reveal | first pick car), P(reveal | first pick goat)."""
    n, j = params.n, params.j
    if Reveal(revealed) is Reveal.GOAT:
        return Fraction(n - j, n - 1), Fraction(n - j - 1, n - 1)
    return Fraction(j - 1, n - 1), Fraction(j, n - 1)


def conditional_switch_probs(params: CarsGoatsParams, revealed: Reveal) -> tuple[Fraction, Fraction]:
    """P(switch wins | first pick car, reveal), P(switch wins | first pick goat, reveal)."""
    n, j = params.n, params.j
    if Reveal(revealed) is Reveal.GOAT:
        return Fraction(j - 1, n - 2), Fraction(j, n - 2)
    return Fraction(j - 2, n - 2) if j >= 2 else Fraction(0), Fraction(j - 1, n - 2)


def bayes_first_pick_posterior(params: CarsGoatsParams, revealed: Reveal) -> Fraction:
    """P(first pick car | reveal) by Bayes' theorem from the random-host likelihoods."""
    p_car, p_goat = priors(params)
    l_car, l_goat = likelihoods(params, revealed)
    evidence = l_car * p_car + l_goat * p_goat
    if evidence == 0:
        raise OutOfRange(f"reveal {Reveal(revealed).value} is impossible for n={params.n}, j={params.j}")
    return p_car * l_car / evidence


def switch_prob(params: CarsGoatsParams, revealed: Reveal, first_pick_posterior: Fraction) -> Fraction:
    """Total-probability combination of the conditional switch chances.

    With the random host's posterior this gives ``random_monty_win_prob``; with
    the prior ``j/n`` it gives the switch chance for any host whose reveal is
    independent of the first pick.
    """
    s_car, s_goat = conditional_switch_probs(params, revealed)
    return s_car * first_pick_posterior + s_goat * (1 - first_pick_posterior)


# ---------------------------------------------------------------------------
# General prizes, random host


def _check_prizes(prizes: PrizeSpec, revealed: str):
    if prizes.doors < 3:
        raise OutOfRange(f"need at least 3 doors, got {prizes.doors}")
    if revealed not in prizes.labels:
        raise NoSuchClass(revealed)


def conditional_switch_evs(prizes: PrizeSpec, revealed: str) -> dict[str, Fraction]:
    """E[switch value | first pick in class i, host revealed class r] = (t - v_i - v_r)/(m - 2).

    Classes that cannot be the first pick (the revealed class when it has a
    single door) are left out.
    """
    _check_prizes(prizes, revealed)
    m, t, v_r = prizes.doors, prizes.total_value, prizes.value_of(revealed)
    return {
        c.label: Fraction(t - c.value_cents - v_r, m - 2)
        for c in prizes.classes
        if not (c.label == revealed and c.count == 1)
    }


def random_host_posteriors(prizes: PrizeSpec, revealed: str) -> dict[str, Fraction]:
    """P(first pick in class i | random host revealed class r)."""
    _check_prizes(prizes, revealed)
    m = prizes.doors
    return {
        c.label: Fraction(c.count - 1 if c.label == revealed else c.count, m - 1)
        for c in prizes.classes
    }


@dataclass(frozen=True)
class GeneralPrizeEV:
    stick_ev: Fraction
    switch_ev: Fraction
    posteriors: dict[str, Fraction]


def general_prize_conditional_ev(prizes: PrizeSpec, revealed: str) -> GeneralPrizeEV:
    """Stick and switch both have expected value (t - v_r)/(m - 1) under a random host."""
    _check_prizes(prizes, revealed)
    ev = Fraction(prizes.total_value - prizes.value_of(revealed), prizes.doors - 1)
    return GeneralPrizeEV(ev, ev, random_host_posteriors(prizes, revealed))


def book_switch_ev_prior_weighted(prizes: PrizeSpec, revealed: str) -> Labeled:
    """Switch value averaged with *prior* class weights n_i/m.

    When the revealed class has one door, the first pick cannot be in it, so
    that class is dropped and the remaining priors are renormalized.
    """
    terms = conditional_switch_evs(prizes, revealed)
    weights = {c.label: Fraction(c.count, prizes.doors) for c in prizes.classes if c.label in terms}
    total = sum(weights.values())
    value = sum(weights[k] / total * terms[k] for k in terms)
    return Labeled(value, VALID_ONLY_FOR_PREDETERMINED_HOST)


def posterior_weighted_switch_ev(prizes: PrizeSpec, revealed: str) -> Fraction:
    """The same average with posterior weights; equals (t - v_r)/(m - 1)."""
    terms = conditional_switch_evs(prizes, revealed)
    post = random_host_posteriors(prizes, revealed)
    return sum((post[k] * terms[k] for k in terms), Fraction(0))


def classical_stick_ev(car_value: int) -> Fraction:
    """Three doors, one car: sticking is worth a third of the car, the mean prize."""
    return Fraction(car_value, 3)

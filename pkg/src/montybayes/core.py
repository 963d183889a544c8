"""Games, host policies, evidence, strategies and exact probabilities.

Every quantity on an exact path is a :class:`fractions.Fraction` (probabilities)
or an ``int`` number of cents (money). Door indices are 1-based.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import combinations
from typing import Callable, Iterable, Sequence, Union

Prob = Fraction


class ConfigError(ValueError):
    """A single violated invariant of a game description."""


class EmptyPrizeSpec(ConfigError):
    pass


class InfeasiblePolicy(ConfigError):
    pass


class NonCanonicalProbability(ConfigError):
    pass


class NotTwoClass(ConfigError):
    pass


class InvalidEvidence(ValueError):
    pass


class ValidationError(ValueError):
    """Raised by :func:`validate`; ``errors`` lists every violated invariant."""

    def __init__(self, errors: Sequence[ConfigError]):
        self.errors = list(errors)
        super().__init__("; ".join(f"{type(e).__name__}: {e}" for e in self.errors))


def prob(value) -> Fraction:
    """Coerce ``value`` (int, Fraction, or ``"p/q"`` string) to a probability in [0, 1]."""
    if isinstance(value, float):
        raise NonCanonicalProbability(f"floats are not exact probabilities: {value!r}")
    p = Fraction(value)
    if not 0 <= p <= 1:
        raise NonCanonicalProbability(f"{p} is outside [0, 1]")
    return p


def complement(p: Fraction) -> Fraction:
    return 1 - prob(p)


def fraction_str(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def decimal_str(x: Fraction, places: int = 6) -> str:
    """Round-half-even decimal rendering of an exact rational."""
    x = Fraction(x)
    scaled = round(x * 10**places)
    sign = "-" if scaled < 0 else ""
    whole, frac = divmod(abs(scaled), 10**places)
    return f"{sign}{whole}.{frac:0{places}d}" if places else f"{sign}{whole}"


def dollars(cents: Fraction | int) -> str:
    """Render cents as ``$8,120`` (or ``$8,120.50`` when not a whole dollar)."""
    c = Fraction(cents)
    if c.denominator == 1 and c.numerator % 100 == 0:
        return f"${c.numerator // 100:,}"
    return f"${float(c / 100):,.2f}"


# ---------------------------------------------------------------------------
# Prizes


@dataclass(frozen=True)
class PrizeClass:
    label: str
    count: int
    value_cents: int


@dataclass(frozen=True)
class PrizeSpec:
    classes: tuple[PrizeClass, ...]

    def __post_init__(self):
        object.__setattr__(self, "classes", tuple(self.classes))

    @classmethod
    def of(cls, *items: tuple[str, int, int]) -> "PrizeSpec":
        """``PrizeSpec.of(("car", 1, 3_000_000), ("goat", 2, 0))``."""
        return cls(tuple(PrizeClass(label, count, value) for label, count, value in items))

    @property
    def doors(self) -> int:
        return sum(c.count for c in self.classes)

    @property
    def total_value(self) -> int:
        return sum(c.count * c.value_cents for c in self.classes)

    @property
    def mean_value(self) -> Fraction:
        return Fraction(self.total_value, self.doors)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(c.label for c in self.classes)

    def get(self, label: str) -> PrizeClass:
        for c in self.classes:
            if c.label == label:
                return c
        raise KeyError(label)

    def value_of(self, label: str) -> int:
        return self.get(label).value_cents

    def count_of(self, label: str) -> int:
        return self.get(label).count

    @property
    def zero_labels(self) -> tuple[str, ...]:
        return tuple(c.label for c in self.classes if c.value_cents == 0)

    @property
    def top_label(self) -> str:
        """Label of the most valuable class; the first one listed on ties."""
        return max(self.classes, key=lambda c: c.value_cents).label

    @property
    def is_two_class(self) -> bool:
        return (
            len(self.classes) == 2
            and sum(c.value_cents == 0 for c in self.classes) == 1
            and all(c.value_cents >= 0 for c in self.classes)
        )

    def _two_class(self) -> tuple[PrizeClass, PrizeClass]:
        if not self.is_two_class:
            raise NotTwoClass("expected exactly one positive-value (car) and one zero-value (goat) class")
        a, b = self.classes
        return (a, b) if a.value_cents > 0 else (b, a)

    @property
    def car_label(self) -> str:
        return self._two_class()[0].label

    @property
    def goat_label(self) -> str:
        return self._two_class()[1].label

    @property
    def cars(self) -> int:
        return self._two_class()[0].count

    def problems(self) -> list[ConfigError]:
        out: list[ConfigError] = []
        if not self.classes:
            return [EmptyPrizeSpec("no prize classes")]
        labels = self.labels
        if len(set(labels)) != len(labels):
            out.append(ConfigError(f"duplicate prize labels in {labels}"))
        for c in self.classes:
            if not isinstance(c.count, int) or c.count < 1:
                out.append(ConfigError(f"class {c.label!r}: count must be a positive integer"))
            if not isinstance(c.value_cents, int) or c.value_cents < 0:
                out.append(ConfigError(f"class {c.label!r}: value_cents must be a non-negative integer"))
        if not out and self.doors < 3:
            out.append(EmptyPrizeSpec(f"need at least 3 doors, got {self.doors}"))
        return out


def cars_goats(n: int, j: int, car_value: int = 1, goat_label: str = "goat") -> PrizeSpec:
    """``n`` doors with ``j`` cars worth ``car_value`` cents and ``n - j`` goats."""
    return PrizeSpec.of(("car", j, car_value), (goat_label, n - j, 0))


# ---------------------------------------------------------------------------
# Host policies


class TieBreak(str, Enum):
    UNIFORM = "uniform"
    HIGHEST = "highest"
    LOWEST = "lowest"


Branches = list[tuple[tuple[int, ...], Fraction]]


def _unchosen(assignment: Sequence[str], first: int) -> list[int]:
    return [d for d in range(1, len(assignment) + 1) if d != first]


@dataclass(frozen=True)
class InformedGoatOnly:
    """Host knows the layout and always opens an unchosen zero-value door."""

    tie_break: TieBreak = TieBreak.UNIFORM

    def __post_init__(self):
        object.__setattr__(self, "tie_break", TieBreak(self.tie_break))

    def branches(self, prizes: PrizeSpec, assignment: Sequence[str], first: int) -> Branches:
        zero = set(prizes.zero_labels)
        options = [d for d in _unchosen(assignment, first) if assignment[d - 1] in zero]
        if not options:
            return []
        if self.tie_break is TieBreak.HIGHEST:
            return [((max(options),), Fraction(1))]
        if self.tie_break is TieBreak.LOWEST:
            return [((min(options),), Fraction(1))]
        w = Fraction(1, len(options))
        return [((d,), w) for d in options]

    def problems(self, prizes: PrizeSpec) -> list[ConfigError]:
        zero_doors = sum(c.count for c in prizes.classes if c.value_cents == 0)
        if zero_doors < 2:
            return [InfeasiblePolicy(
                f"informed host needs an unchosen zero-value door after any pick; only {zero_doors} exist")]
        return []


@dataclass(frozen=True)
class UniformRandomUnchosen:
    """Host opens one of the contestant's unchosen doors uniformly at random."""

    def branches(self, prizes: PrizeSpec, assignment: Sequence[str], first: int) -> Branches:
        options = _unchosen(assignment, first)
        w = Fraction(1, len(options))
        return [((d,), w) for d in options]

    def problems(self, prizes: PrizeSpec) -> list[ConfigError]:
        return []


@dataclass(frozen=True)
class PredeterminedClass:
    """Host fixes the class to reveal in advance; the door is uniform within that class."""

    distribution: tuple[tuple[str, Fraction], ...]

    def __post_init__(self):
        object.__setattr__(self, "distribution",
                           tuple((label, Fraction(p)) for label, p in self.distribution))

    def branches(self, prizes: PrizeSpec, assignment: Sequence[str], first: int) -> Branches:
        out: Branches = []
        for label, p in self.distribution:
            if p == 0:
                continue
            options = [d for d in _unchosen(assignment, first) if assignment[d - 1] == label]
            for d in options:
                out.append(((d,), p / len(options)))
        return out

    def problems(self, prizes: PrizeSpec) -> list[ConfigError]:
        out: list[ConfigError] = []
        total = Fraction(0)
        for label, p in self.distribution:
            if not 0 <= p <= 1:
                out.append(NonCanonicalProbability(f"reveal probability for {label!r} is {p}"))
            total += p
            if label not in prizes.labels:
                out.append(InfeasiblePolicy(f"unknown reveal class {label!r}"))
            elif p > 0 and prizes.count_of(label) < 2:
                # the contestant may hold the only door of this class
                out.append(InfeasiblePolicy(
                    f"class {label!r} needs at least 2 doors to be revealable after any pick"))
        if total != 1:
            out.append(NonCanonicalProbability(f"reveal distribution sums to {total}, not 1"))
        labels = [label for label, _ in self.distribution]
        if len(set(labels)) != len(labels):
            out.append(NonCanonicalProbability("reveal distribution repeats a class"))
        return out


@dataclass(frozen=True)
class BatchReveal:
    """Host opens ``m_open`` unchosen doors showing exactly ``k_cars`` cars, uniformly among such sets."""

    m_open: int
    k_cars: int

    def branches(self, prizes: PrizeSpec, assignment: Sequence[str], first: int) -> Branches:
        car = prizes.car_label
        unchosen = _unchosen(assignment, first)
        cars = [d for d in unchosen if assignment[d - 1] == car]
        goats = [d for d in unchosen if assignment[d - 1] != car]
        picks = [
            tuple(sorted(cs + gs))
            for cs in combinations(cars, self.k_cars)
            for gs in combinations(goats, self.m_open - self.k_cars)
        ]
        if not picks:
            return []
        w = Fraction(1, len(picks))
        return [(p, w) for p in picks]

    def problems(self, prizes: PrizeSpec) -> list[ConfigError]:
        if not prizes.is_two_class:
            return [NotTwoClass("batch reveal is defined for car/goat games only")]
        out: list[ConfigError] = []
        m, j = prizes.doors, prizes.cars
        if self.m_open < 1 or self.m_open > m - 2:
            out.append(InfeasiblePolicy(f"m_open={self.m_open} must lie in [1, {m - 2}] for {m} doors"))
        if self.k_cars < 0 or self.k_cars > self.m_open:
            out.append(InfeasiblePolicy(f"k_cars={self.k_cars} must lie in [0, m_open]"))
        elif self.k_cars > j - 1:
            out.append(InfeasiblePolicy(f"k_cars={self.k_cars} cars are not always available (j={j})"))
        elif self.m_open - self.k_cars > m - j - 1:
            out.append(InfeasiblePolicy(
                f"{self.m_open - self.k_cars} goats are not always available ({m - j} goats)"))
        return out


HostPolicy = Union[InformedGoatOnly, UniformRandomUnchosen, PredeterminedClass, BatchReveal]


# ---------------------------------------------------------------------------
# Config


@dataclass(frozen=True)
class GameConfig:
    prizes: PrizeSpec
    host: HostPolicy
    label: str | None = None

    @property
    def doors(self) -> int:
        return self.prizes.doors

    @property
    def n(self) -> int:
        return self.prizes.doors

    @property
    def j(self) -> int:
        return self.prizes.cars

    def problems(self) -> list[ConfigError]:
        out = self.prizes.problems()
        if out:
            return out
        return out + self.host.problems(self.prizes)


def validate(config: GameConfig) -> GameConfig:
    """Return ``config`` unchanged if it is well formed, else raise :class:`ValidationError`."""
    errors = config.problems()
    if errors:
        raise ValidationError(errors)
    return config


def classical(car_value: int = 3_000_000, tie_break: TieBreak = TieBreak.UNIFORM) -> GameConfig:
    return GameConfig(cars_goats(3, 1, car_value), InformedGoatOnly(tie_break), label="classical")


def six_door_prizes() -> PrizeSpec:
    return PrizeSpec.of(("car", 2, 2_000_000), ("motorcycle", 2, 1_000_000), ("fridge", 2, 30_000))


# ---------------------------------------------------------------------------
# Evidence and strategies


@dataclass(frozen=True)
class Evidence:
    """What the contestant has seen: own pick and the opened doors with their revealed class."""

    first_choice: int
    opened: tuple[tuple[int, str], ...] = ()

    def __post_init__(self):
        opened = tuple(sorted((int(d), str(lbl)) for d, lbl in self.opened))
        object.__setattr__(self, "opened", opened)
        doors = [d for d, _ in opened]
        if len(set(doors)) != len(doors):
            raise InvalidEvidence(f"opened doors repeat: {doors}")
        if self.first_choice in doors:
            raise InvalidEvidence(f"first choice {self.first_choice} cannot be opened")

    @property
    def opened_doors(self) -> tuple[int, ...]:
        return tuple(d for d, _ in self.opened)

    @property
    def revealed(self) -> tuple[str, ...]:
        return tuple(sorted(lbl for _, lbl in self.opened))

    def unopened(self, n_doors: int) -> list[int]:
        shut = set(self.opened_doors)
        return [d for d in range(1, n_doors + 1) if d not in shut]

    def switch_targets(self, n_doors: int) -> list[int]:
        return [d for d in self.unopened(n_doors) if d != self.first_choice]

    def check(self, n_doors: int) -> "Evidence":
        for d in (self.first_choice, *self.opened_doors):
            if not 1 <= d <= n_doors:
                raise InvalidEvidence(f"door {d} outside 1..{n_doors}")
        return self


Choices = list[tuple[int, Fraction]]


@dataclass(frozen=True)
class Stick:
    name: str = "stick"

    def choices(self, evidence: Evidence, n_doors: int) -> Choices:
        return [(evidence.first_choice, Fraction(1))]


@dataclass(frozen=True)
class SwitchUniform:
    name: str = "switch"

    def choices(self, evidence: Evidence, n_doors: int) -> Choices:
        targets = evidence.switch_targets(n_doors)
        if not targets:
            raise InvalidEvidence("no unopened door to switch to")
        w = Fraction(1, len(targets))
        return [(d, w) for d in targets]


@dataclass(frozen=True)
class SwitchToDoor:
    """Deterministic switch: ``rule(evidence, n_doors)`` names the final door."""

    rule: Callable[[Evidence, int], int]
    name: str = "switch-to-door"

    def choices(self, evidence: Evidence, n_doors: int) -> Choices:
        door = self.rule(evidence, n_doors)
        if door not in evidence.unopened(n_doors):
            raise InvalidEvidence(f"rule chose door {door}, which is open or missing")
        return [(door, Fraction(1))]


@dataclass(frozen=True)
class ConditionalSwitch:
    """Act as :class:`SwitchUniform` when ``predicate(evidence, n_doors)`` holds, else stick."""

    predicate: Callable[[Evidence, int], bool]
    name: str = "conditional"

    def choices(self, evidence: Evidence, n_doors: int) -> Choices:
        if self.predicate(evidence, n_doors):
            return SwitchUniform().choices(evidence, n_doors)
        return Stick().choices(evidence, n_doors)


Strategy = Union[Stick, SwitchUniform, SwitchToDoor, ConditionalSwitch]


def opened_lower_than_alternative(evidence: Evidence, n_doors: int) -> bool:
    """True when the single opened door is lower-numbered than every other door the host could have opened."""
    if len(evidence.opened) != 1:
        return False
    (opened,) = evidence.opened_doors
    others = evidence.switch_targets(n_doors)
    return bool(others) and opened < min(others)


def informed_switch() -> ConditionalSwitch:
    return ConditionalSwitch(opened_lower_than_alternative, name="informed")


STRATEGIES: dict[str, Callable[[], Strategy]] = {
    "stick": Stick,
    "switch": SwitchUniform,
    "informed": informed_switch,
}


def strategy_by_name(name: str) -> Strategy:
    try:
        return STRATEGIES[name]()
    except KeyError:
        raise ValueError(f"unknown strategy {name!r}; choose from {sorted(STRATEGIES)}") from None


# ---------------------------------------------------------------------------
# Conditions: predicates over Evidence used to filter simulated games


@dataclass(frozen=True)
class Always:
    def __call__(self, evidence: Evidence) -> bool:
        return True

    def __str__(self):
        return "any"


@dataclass(frozen=True)
class Revealed:
    """Opened doors show exactly this multiset of classes."""

    labels: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(sorted(self.labels)))

    def __call__(self, evidence: Evidence) -> bool:
        return evidence.revealed == self.labels

    def __str__(self):
        return "revealed:" + ",".join(self.labels)


@dataclass(frozen=True)
class Exactly:
    evidence: Evidence

    def __call__(self, evidence: Evidence) -> bool:
        return evidence == self.evidence

    def __str__(self):
        opened = ",".join(f"{d}={lbl}" for d, lbl in self.evidence.opened)
        return f"evidence:{self.evidence.first_choice}/{opened}"


Condition = Union[Always, Revealed, Exactly]


def parse_opened(items: Iterable[str]) -> tuple[tuple[int, str], ...]:
    out = []
    for item in items:
        door, sep, label = item.partition("=")
        if not sep or not door.strip().isdigit() or not label:
            raise InvalidEvidence(f"expected DOOR=LABEL, got {item!r}")
        out.append((int(door), label.strip()))
    return tuple(out)


def parse_condition(text: str) -> Condition:
    """Parse ``any``, ``revealed:goat[,goat...]`` or ``evidence:1/3=goat[,4=car]``."""
    text = text.strip()
    if text in ("", "any"):
        return Always()
    kind, _, rest = text.partition(":")
    if kind == "revealed" and rest:
        return Revealed(tuple(s.strip() for s in rest.split(",")))
    if kind == "evidence" and rest:
        first, _, opened = rest.partition("/")
        if not first.isdigit():
            raise InvalidEvidence(f"bad first choice in {text!r}")
        return Exactly(Evidence(int(first), parse_opened(opened.split(",") if opened else [])))
    raise InvalidEvidence(f"cannot parse condition {text!r}")


# ---------------------------------------------------------------------------
# Serialization


def host_to_dict(host: HostPolicy) -> dict:
    if isinstance(host, InformedGoatOnly):
        return {"type": "informed_goat_only", "tie_break": host.tie_break.value}
    if isinstance(host, UniformRandomUnchosen):
        return {"type": "uniform_random_unchosen"}
    if isinstance(host, PredeterminedClass):
        return {
            "type": "predetermined_class",
            "reveal_class_distribution": [
                {"label": label, "prob": fraction_str(p)} for label, p in host.distribution
            ],
        }
    if isinstance(host, BatchReveal):
        return {"type": "batch_reveal", "m_open": host.m_open, "k_cars": host.k_cars}
    raise TypeError(f"not a host policy: {host!r}")


def host_from_dict(data: dict) -> HostPolicy:
    kind = data.get("type")
    if kind == "informed_goat_only":
        return InformedGoatOnly(TieBreak(data.get("tie_break", "uniform")))
    if kind == "uniform_random_unchosen":
        return UniformRandomUnchosen()
    if kind == "predetermined_class":
        dist = []
        for item in data["reveal_class_distribution"]:
            p = item["prob"]
            if isinstance(p, float):
                raise NonCanonicalProbability(f"probability must be a 'p/q' string, got {p!r}")
            dist.append((item["label"], Fraction(p)))
        return PredeterminedClass(tuple(dist))
    if kind == "batch_reveal":
        return BatchReveal(int(data["m_open"]), int(data["k_cars"]))
    raise ConfigError(f"unknown host type {kind!r}")


def config_to_dict(config: GameConfig) -> dict:
    out = {
        "prizes": [
            {"label": c.label, "count": c.count, "value_cents": c.value_cents}
            for c in config.prizes.classes
        ],
        "host": host_to_dict(config.host),
    }
    if config.label is not None:
        out["label"] = config.label
    return out


def config_from_dict(data: dict) -> GameConfig:
    if not isinstance(data, dict) or "prizes" not in data or "host" not in data:
        raise ConfigError("config needs top-level 'prizes' and 'host'")
    prizes = PrizeSpec(tuple(
        PrizeClass(str(p["label"]), p["count"], p["value_cents"]) for p in data["prizes"]
    ))
    return GameConfig(prizes, host_from_dict(data["host"]), data.get("label"))


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def dumps_config(config: GameConfig) -> str:
    return canonical_json(config_to_dict(config))


def loads_config(text: str) -> GameConfig:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from None
    try:
        return config_from_dict(data)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"malformed config: {exc!r}") from None


def config_digest(config: GameConfig) -> str:
    return "sha256:" + hashlib.sha256(dumps_config(config).encode()).hexdigest()

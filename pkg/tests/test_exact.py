from fractions import Fraction

import pytest

import oracles
from montybayes.core import (
    BatchReveal,
    Evidence,
    GameConfig,
    InformedGoatOnly,
    PredeterminedClass,
    PrizeSpec,
    Stick,
    SwitchUniform,
    TieBreak,
    UniformRandomUnchosen,
    cars_goats,
    classical,
    six_door_prizes,
)
from montybayes.exact import (
    ConditionOnNull,
    StateSpaceTooLarge,
    enumerate_worlds,
    event,
    everything,
    expected_value,
    layout_count,
    mass,
    permute_evidence,
    posterior,
    probability,
    reveal_event,
    total_probability_holds,
    win_probability,
)

HALF = Fraction(1, 2)


def oracle_kwargs(config):
    host, prizes = config.host, config.prizes
    if isinstance(host, UniformRandomUnchosen):
        return "random", {}
    if isinstance(host, InformedGoatOnly):
        return "informed", {"zero": prizes.zero_labels, "tie": host.tie_break.value}
    if isinstance(host, PredeterminedClass):
        return "predetermined", {"dist": host.distribution}
    return "batch", {"batch": (host.m_open, host.k_cars)}


CASES = [
    (classical(), Evidence(1, ((2, "goat"),))),
    (classical(), Evidence(2, ((3, "goat"),))),
    (classical(tie_break=TieBreak.HIGHEST), Evidence(1, ((3, "goat"),))),
    (classical(tie_break=TieBreak.HIGHEST), Evidence(1, ((2, "goat"),))),
    (classical(tie_break=TieBreak.LOWEST), Evidence(3, ((1, "goat"),))),
    (GameConfig(cars_goats(4, 2), UniformRandomUnchosen()), Evidence(1, ((4, "car"),))),
    (GameConfig(cars_goats(5, 2), PredeterminedClass((("car", HALF), ("goat", HALF)))), Evidence(2, ((1, "car"),))),
    (GameConfig(cars_goats(5, 1), BatchReveal(2, 0)), Evidence(1, ((2, "goat"), (5, "goat")))),
    (GameConfig(cars_goats(6, 3), BatchReveal(3, 1)), Evidence(4, ((1, "car"), (2, "goat"), (6, "goat")))),
    (GameConfig(six_door_prizes(), UniformRandomUnchosen()), Evidence(1, ((2, "car"),))),
    (GameConfig(PrizeSpec.of(("a", 1, 700), ("b", 2, 300), ("c", 2, 0)), InformedGoatOnly()),
     Evidence(3, ((5, "c"),))),
]


@pytest.mark.parametrize("config,evidence", CASES, ids=lambda x: getattr(x, "label", None) or str(x)[:40])
def test_posterior_matches_brute_force(config, evidence):
    kind, kw = oracle_kwargs(config)
    classes = [(c.label, c.count, c.value_cents) for c in config.prizes.classes]
    want = oracles.brute_strategy_stats(classes, kind, evidence.first_choice, evidence.opened,
                                        config.prizes.top_label, **kw)
    got = posterior(config, evidence)
    assert got.evidence_probability == want["evidence"]
    assert got.win_probability == {"stick": want["stick_win"], "switch": want["switch_win"]}
    assert got.expected_value == {"stick": want["stick_ev"], "switch": want["switch_ev"]}
    for door, dist in got.posteriors.items():
        assert sum(dist.values()) == 1


def test_world_weights_sum_to_one():
    for config, _ in CASES:
        worlds = enumerate_worlds(config)
        assert sum(w.weight for w in worlds) == 1
        assert mass(worlds, everything(worlds)) == 1


def test_classical_world_count():
    worlds = enumerate_worlds(classical())
    # 3 layouts x 3 picks, the host splitting only when the pick hides the car
    assert layout_count(classical().prizes) == 3
    assert len(worlds) == 12


def test_informed_host_car_reveal_is_impossible():
    with pytest.raises(ConditionOnNull):
        posterior(classical(), Evidence(1, ((2, "car"),)))


def test_state_space_cap():
    config = GameConfig(cars_goats(8, 4), UniformRandomUnchosen())
    with pytest.raises(StateSpaceTooLarge):
        enumerate_worlds(config, cap=1000)


def test_probability_conditioning_on_null_event():
    worlds = enumerate_worlds(classical())
    empty = event(worlds, lambda w: False)
    with pytest.raises(ConditionOnNull):
        probability(worlds, everything(worlds), empty)


def test_expected_value_and_win_probability_helpers():
    config = GameConfig(six_door_prizes(), UniformRandomUnchosen())
    ev = Evidence(1, ((2, "car"),))
    assert expected_value(config, ev, Stick()) == 812_000
    assert win_probability(config, ev, SwitchUniform()) == Fraction(1, 5)


def test_door_relabelling_symmetry():
    """Uniform hosts treat doors alike: permuting doors permutes the posterior table."""
    config = GameConfig(cars_goats(5, 2), UniformRandomUnchosen())
    ev = Evidence(1, ((3, "goat"),))
    perm = {1: 4, 2: 5, 3: 1, 4: 2, 5: 3}
    a = posterior(config, ev)
    b = posterior(config, permute_evidence(ev, perm))
    assert a.win_probability == b.win_probability
    for door, dist in a.posteriors.items():
        assert b.posteriors[perm[door]] == dist


def test_reveal_event_uses_multisets():
    config = GameConfig(cars_goats(6, 3), BatchReveal(3, 1))
    worlds = enumerate_worlds(config)
    assert probability(worlds, reveal_event(worlds, ["goat", "car", "goat"])) == 1


def test_total_probability_rejects_non_partitions():
    worlds = enumerate_worlds(classical())
    a = event(worlds, lambda w: w.first_choice == 1)
    with pytest.raises(ValueError):
        total_probability_holds(worlds, a, [a])

from fractions import Fraction

import pytest

import oracles
from montybayes.core import Stick, SwitchUniform, TieBreak, informed_switch
from montybayes.montecarlo import agreement_test
from montybayes.variants import (
    BonusGameSpec,
    Hypothesis,
    bonus_game_value,
    default_strategies,
    partition_switch_win,
    simulate_two_player,
    strategy_comparison,
    two_player_analyze,
    two_player_worlds,
)


@pytest.mark.parametrize("tie", list(TieBreak))
@pytest.mark.parametrize("player", [1, 2])
def test_two_player_matches_counting(tie, player):
    rep = two_player_analyze(tie, player)
    assert (rep.stick_prob, rep.switch_prob) == oracles.two_player_bruteforce(tie.value, player)
    assert (rep.stick_prob, rep.switch_prob) == (Fraction(3, 7), Fraction(4, 7))


def test_two_player_redeal_mass():
    worlds = two_player_worlds()
    invalid = sum(w.weight for w in worlds if not w.valid)
    # host stuck exactly when the players pick the two goat doors
    assert invalid == Fraction(6, 27)


def test_two_player_information_sets_depend_on_tie_break():
    uniform = two_player_analyze(TieBreak.UNIFORM).info_sets
    highest = two_player_analyze(TieBreak.HIGHEST).info_sets
    assert set(uniform.values()) == {Fraction(3, 7)}
    assert len(set(highest.values())) > 1


def test_two_player_simulation():
    for tie in (TieBreak.UNIFORM, TieBreak.HIGHEST):
        res = simulate_two_player(200_000, 5, switch=True, player=2, tie_break=tie)
        assert agreement_test(res, Fraction(4, 7)).passed
        assert res.matched_trials < res.trials


@pytest.mark.parametrize("hyp", list(Hypothesis))
@pytest.mark.parametrize("name", ["stick", "switch", "informed"])
def test_bonus_game_matches_counting(hyp, name):
    strategy = {"stick": Stick(), "switch": SwitchUniform(), "informed": informed_switch()}[name]
    got = bonus_game_value(BonusGameSpec(hyp, 300_000, 10_000, strategy))
    assert got == oracles.bonus_game_bruteforce(hyp.value, 300_000, 10_000, name)


def test_bonus_game_worked_values():
    v = {(h, s.name): bonus_game_value(BonusGameSpec(h, 300_000, 10_000, s))
         for h in Hypothesis for s in default_strategies()}
    assert v[(Hypothesis.H1, "stick")] == v[(Hypothesis.H2, "stick")] == 110_000
    assert v[(Hypothesis.H1, "switch")] == v[(Hypothesis.H2, "switch")] == 200_000
    assert v[(Hypothesis.H1, "informed")] == 155_000
    assert v[(Hypothesis.H2, "informed")] == Fraction(620_000, 3)


def test_comparison_flags_hypothesis_dependent_best():
    table = strategy_comparison(list(Hypothesis), default_strategies(), 300_000, 10_000)
    assert table.switch_values_equal
    assert table.best == {"h1": ("switch",), "h2": ("informed",)}
    assert table.flagged() == [("h1", "switch"), ("h2", "informed")]
    with pytest.raises(ValueError):
        strategy_comparison([], default_strategies(), 1, 1)


def test_partition_by_opened_door():
    assert partition_switch_win(Hypothesis.H2) == {"lower": 1, "higher": Fraction(1, 2)}
    assert partition_switch_win(Hypothesis.H1) == {"lower": Fraction(2, 3), "higher": Fraction(2, 3)}


def test_negative_bonus_rejected():
    with pytest.raises(ValueError):
        BonusGameSpec(Hypothesis.H1, 1, -1, Stick())

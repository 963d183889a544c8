import math
from fractions import Fraction

import pytest

import oracles
from montybayes import maxent
from montybayes.maxent import LogBase, TrialCount


@pytest.mark.parametrize("N,M", [(1, 0), (10, 3), (1000, 500), (1000, 1), (1000, 999), (5000, 1234)])
def test_log_binomial_against_integer_binomial(N, M):
    lc = maxent.log_binomial_exact(TrialCount(N, M))
    want = oracles.ln_binomial(N, M)
    assert abs(lc.value - want) <= max(1e-9 * abs(want), 1e-12)
    assert lc.rel_error_bound <= 1e-9


def test_entropy_values_and_bases():
    assert maxent.shannon_entropy(Fraction(1, 2)) == pytest.approx(math.log(2))
    assert maxent.shannon_entropy(Fraction(1, 2), LogBase.BASE2) == pytest.approx(1.0)
    assert maxent.shannon_entropy(0) == 0 == maxent.shannon_entropy(1)
    with pytest.raises(ValueError):
        maxent.shannon_entropy(Fraction(3, 2))


def test_entropy_is_symmetric_and_peaks_at_half():
    for k in range(1, 50):
        p = Fraction(k, 100)
        assert maxent.shannon_entropy(p) == pytest.approx(maxent.shannon_entropy(1 - p))
        assert maxent.shannon_entropy(p) < maxent.shannon_entropy(Fraction(1, 2))


def test_most_realisable_count():
    assert maxent.most_realisable_count(1000) == 500
    # odd N: M and N-M tie, the lower one is reported
    assert maxent.most_realisable_count(7) == 3


def test_gap_tracks_stirling_term():
    for N, M in ((1000, 500), (1000, 100), (200, 37)):
        tc = TrialCount(N, M)
        a = maxent.entropy_approximation(tc)
        assert a.ratio_bound_ok
        assert a.gap > 0
        assert abs(a.gap - maxent.stirling_gap(tc)) <= maxent.gap_tolerance(tc)


def test_uniform_assignment():
    assert maxent.maxent_uniform_assignment(4) == [Fraction(1, 4)] * 4
    with pytest.raises(ValueError):
        maxent.maxent_uniform_assignment(1)


def test_table_row_magnitudes():
    row = maxent.table_row(TrialCount(1000, 500))
    # C(1000, 500) is about 2.7e299
    assert row["log10_count"] == pytest.approx(math.log10(math.comb(1000, 500)))
    assert 10 ** (row["log10_count"] - 299) == pytest.approx(2.7029, rel=1e-3)
    # exp(N * H) with a base-10 H lands near 5.4e130, nowhere near the true count
    assert 10 ** (row["log10_exp_n_h_base10"] - 130) == pytest.approx(5.44, rel=1e-2)


def test_trial_count_bounds():
    with pytest.raises(ValueError):
        TrialCount(10, 11)
    with pytest.raises(ValueError):
        maxent.entropy_approximation(TrialCount(10, 0))

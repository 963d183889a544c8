"""The ten acceptance criteria, each at its stated tolerance and time budget.

Run ``pytest tests/test_acceptance.py`` for a PASS/FAIL line per criterion in
the terminal summary, or ``python tests/test_acceptance.py`` to print them
directly.
"""

from __future__ import annotations

import json
import random
import subprocess
import sys
import time
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from acceptance_log import LINES
from montybayes import closed_form as cf
from montybayes import maxent
from montybayes.cli import main as cli_main
from montybayes.core import (
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
    informed_switch,
    loads_config,
    six_door_prizes,
)
from montybayes.exact import (
    ConditionOnNull,
    Event,
    check_sum_product_rules,
    enumerate_worlds,
    posterior,
    posterior_invariance_holds,
    reveal_summary,
    total_probability_holds,
)
from montybayes.montecarlo import SimPlan, agreement_test, simulate
from montybayes.variants import (
    BonusGameSpec,
    Hypothesis,
    bonus_game_value,
    simulate_two_player,
    two_player_analyze,
)

ROOT = Path(__file__).resolve().parents[1]
SEED = 2010
GRID = [(n, j) for n in range(3, 9) for j in range(1, n - 1)]


def _run(k: int, title: str, check, budget: float | None = None):
    t0 = time.perf_counter()
    try:
        detail = check()
        elapsed = time.perf_counter() - t0
        if budget is not None:
            assert elapsed < budget, f"took {elapsed:.2f}s, budget {budget}s"
    except Exception as exc:
        elapsed = time.perf_counter() - t0
        LINES[k] = f"FAIL  criterion {k:2d}  {title}  [{elapsed:.2f}s]  {type(exc).__name__}: {exc}"
        raise
    LINES[k] = f"PASS  criterion {k:2d}  {title}  [{elapsed:.2f}s]  {detail}"


# 1 -------------------------------------------------------------------------


def check_classical():
    config = classical()
    report = posterior(config, Evidence(1, ((2, "goat"),)))
    assert report.win_probability["switch"] == Fraction(2, 3) == cf.classical_switch_prob()
    assert report.win_probability["stick"] == Fraction(1, 3) == cf.classical_stick_prob()
    zs = []
    for k, strategy in enumerate((Stick(), SwitchUniform())):
        res = simulate(SimPlan(config, strategy, 10**6, SEED, stream=k))
        verdict = agreement_test(res, report.win_probability[strategy.name])
        assert verdict.passed, f"{strategy.name}: z={verdict.z:.2f}"
        zs.append(verdict.z)
    return f"stick 1/3, switch 2/3; MC 10^6 z = {zs[0]:.2f}, {zs[1]:.2f}"


def test_criterion_1_classical():
    _run(1, "classical 1/3 vs 2/3", check_classical, budget=5.0)


# 2 -------------------------------------------------------------------------


def check_random_monty():
    cells = 0
    for n, j in GRID:
        config = GameConfig(cars_goats(n, j), UniformRandomUnchosen())
        worlds = enumerate_worlds(config)
        for label, want in (("goat", Fraction(j, n - 1)), ("car", Fraction(j - 1, n - 1))):
            s = reveal_summary(config, [label], worlds=worlds)
            stick_post = s.first_choice_posterior["car"]
            assert stick_post == s.win_probability["stick"] == s.win_probability["switch"] == want, (n, j, label)
            assert cf.book_stick_claim(cf.CarsGoatsParams(n, j)).value != stick_post, (n, j, label)
            cells += 1
    return f"{cells} cells: goat j/(n-1), car (j-1)/(n-1); j/n differs in all"


def test_criterion_2_random_monty_correction():
    _run(2, "random-host correction", check_random_monty, budget=10.0)


# 3 -------------------------------------------------------------------------


def _predetermined_policies(n, j):
    goats = n - j
    out = []
    for p_car in (Fraction(0), Fraction(1, 3), Fraction(1, 2), Fraction(1)):
        if p_car > 0 and j < 2 or p_car < 1 and goats < 2:
            continue
        dist = tuple((lbl, p) for lbl, p in (("car", p_car), ("goat", 1 - p_car)) if p)
        out.append(PredeterminedClass(dist))
    return out


def check_invariance():
    checked = 0
    for n, j in GRID:
        hosts = [InformedGoatOnly(t) for t in TieBreak] + _predetermined_policies(n, j)
        for host in hosts:
            config = GameConfig(cars_goats(n, j), host)
            worlds = enumerate_worlds(config)
            for reveal in ("goat", "car"):
                try:
                    w = posterior_invariance_holds(config, reveal, worlds=worlds)
                except ConditionOnNull:
                    continue  # this host never shows that class
                assert w.holds, (n, j, host, reveal)
                checked += 1
        config = GameConfig(cars_goats(n, j), UniformRandomUnchosen())
        worlds = enumerate_worlds(config)
        w = posterior_invariance_holds(config, "goat", worlds=worlds)
        assert not w.holds and w.given_car_first > w.given_goat_first, (n, j)
        checked += 1
        if j >= 2:
            assert not posterior_invariance_holds(config, "car", worlds=worlds).holds, (n, j)
            checked += 1
    return f"{checked} (config, reveal) checks; random host witness P(Mg|Fc) > P(Mg|Fg)"


def test_criterion_3_invariance_condition():
    _run(3, "posterior invariance", check_invariance)


# 4 -------------------------------------------------------------------------


def check_six_door():
    prizes = six_door_prizes()
    evs = cf.conditional_switch_evs(prizes, "car")
    assert evs == {"car": 515_000, "motorcycle": 765_000, "fridge": 1_007_500}
    assert cf.book_switch_ev_prior_weighted(prizes, "car").value == 762_500
    config = GameConfig(prizes, UniformRandomUnchosen())
    report = posterior(config, Evidence(1, ((2, "car"),)))
    # every unopened door, including the first pick, carries the same posterior
    for door in report.posteriors:
        assert report.posteriors[door] == {"car": Fraction(1, 5), "motorcycle": Fraction(2, 5),
                                           "fridge": Fraction(2, 5)}
    assert report.expected_value["stick"] == report.expected_value["switch"] == 812_000
    g = cf.general_prize_conditional_ev(prizes, "car")
    assert g.stick_ev == g.switch_ev == 812_000
    return "$5,150 / $7,650 / $10,075; book $7,625; posteriors 1/5, 2/5, 2/5; stick = switch = $8,120"


def test_criterion_4_six_door_dollars():
    _run(4, "six-door dollar example", check_six_door)


# 5 -------------------------------------------------------------------------


def random_prize_spec(rnd: random.Random) -> PrizeSpec:
    m = rnd.randint(3, 9)
    k = rnd.randint(2, min(4, m))
    cuts = sorted(rnd.sample(range(1, m), k - 1))
    counts = [b - a for a, b in zip([0] + cuts, cuts + [m])]
    values = rnd.sample(range(0, 5_000_001, 2500), k)
    return PrizeSpec.of(*((f"prize{i}", c, v) for i, (c, v) in enumerate(zip(counts, values))))


def check_general_law():
    rnd = random.Random(5)
    specs = 0
    while specs < 24:
        prizes = random_prize_spec(rnd)
        config = GameConfig(prizes, UniformRandomUnchosen())
        worlds = enumerate_worlds(config)
        m, t = prizes.doors, prizes.total_value
        V = Fraction(t, m)
        for c in prizes.classes:
            want = Fraction(t - c.value_cents, m - 1)
            g = cf.general_prize_conditional_ev(prizes, c.label)
            assert g.stick_ev == g.switch_ev == want, (prizes, c)
            report = posterior(config, Evidence(1, ((2, c.label),)), worlds=worlds)
            assert report.expected_value["stick"] == want == report.expected_value["switch"], (prizes, c)
            s = reveal_summary(config, [c.label], worlds=worlds)
            assert s.expected_value["stick"] == want == s.expected_value["switch"], (prizes, c)
            # revealing a below-average prize lifts the rest above average, and vice versa
            if c.value_cents < V:
                assert want > V
            elif c.value_cents > V:
                assert want < V
            else:
                assert want == V
        specs += 1
    return f"{specs} random specs (m <= 9): stick = switch = (t - v_r)/(m - 1), sign vs t/m holds"


def test_criterion_5_general_prize_law():
    _run(5, "general-prize law", check_general_law)


# 6 -------------------------------------------------------------------------


def check_two_player():
    for tie in TieBreak:
        for player in (1, 2):
            rep = two_player_analyze(tie, player)
            assert (rep.stick_prob, rep.switch_prob) == (Fraction(3, 7), Fraction(4, 7)), (tie, player)
    zs = []
    for k, switch in enumerate((False, True)):
        res = simulate_two_player(10**6, SEED, switch, stream=k)
        verdict = agreement_test(res, Fraction(4, 7) if switch else Fraction(3, 7))
        assert verdict.passed, verdict
        zs.append(verdict.z)
    return f"3/7 vs 4/7 under every tie-break; MC 10^6 z = {zs[0]:.2f}, {zs[1]:.2f}"


def test_criterion_6_two_player():
    _run(6, "two-player game", check_two_player, budget=5.0)


# 7 -------------------------------------------------------------------------


def check_bonus_game():
    for car, bonus in ((300_000, 10_000), (3_000_000, 50_000), (1, 0), (999, 7)):
        values = {}
        for h in Hypothesis:
            for s in (SwitchUniform(), informed_switch()):
                values[(h, s.name)] = bonus_game_value(BonusGameSpec(h, car, bonus, s))
        assert values[(Hypothesis.H2, "informed")] - values[(Hypothesis.H2, "switch")] == Fraction(2, 3) * bonus
        assert values[(Hypothesis.H1, "switch")] == values[(Hypothesis.H2, "switch")]
    return "H2 informed - switch = 2/3 bonus; always-switch equal under H1 and H2"


def test_criterion_7_bonus_game():
    _run(7, "bonus game", check_bonus_game)


# 8 -------------------------------------------------------------------------


def check_maxent():
    grid = [Fraction(k, 1000) for k in range(0, 1001)]
    hs = [maxent.shannon_entropy(p) for p in grid]
    assert grid[max(range(len(grid)), key=hs.__getitem__)] == Fraction(1, 2)
    assert maxent.most_realisable_count(1000) == 500
    worst = 0.0
    for M in range(1, 1000):
        tc = maxent.TrialCount(1000, M)
        a = maxent.entropy_approximation(tc)
        assert a.approx >= a.exact, M
        if 10 <= M <= 990:
            # at p = M/N below 1% the 1/(12 M) Stirling term alone exceeds 1% of the gap
            rel = abs(a.gap - maxent.stirling_gap(tc)) / maxent.stirling_gap(tc)
            assert rel <= 0.01, (M, rel)
            worst = max(worst, rel)
    return f"H peaks at 1/2; argmax C(1000, M) = 500; N*H >= ln C; worst gap error {worst:.2%} for 10 <= M <= 990"


def test_criterion_8_maxent():
    _run(8, "max-entropy properties", check_maxent, budget=5.0)


# 9 -------------------------------------------------------------------------


def random_event(rnd: random.Random, size: int) -> Event:
    return Event(frozenset(i for i in range(size) if rnd.random() < rnd.random()), size)


def check_calculus():
    rnd = random.Random(9)
    files = sorted((ROOT / "configs").glob("*.json"))
    assert files, "no configs found"
    for path in files:
        config = loads_config(path.read_text())
        worlds = enumerate_worlds(config)
        size = len(worlds)
        pairs = [(random_event(rnd, size), random_event(rnd, size)) for _ in range(100)]
        assert check_sum_product_rules(worlds, pairs) is None, path.name
        given = random_event(rnd, size)
        while not given.members:
            given = random_event(rnd, size)
        assert check_sum_product_rules(worlds, pairs[:20], given=given) is None, path.name
        for _ in range(10):
            k = rnd.randint(1, 6)
            labels = [rnd.randrange(k) for _ in range(size)]
            blocks = [Event(frozenset(i for i in range(size) if labels[i] == b), size) for b in range(k)]
            assert total_probability_holds(worlds, random_event(rnd, size), blocks), path.name
    return f"{len(files)} configs x 100 pairs: sum, product and total probability exact"


def test_criterion_9_probability_calculus():
    _run(9, "probability-calculus invariants", check_calculus)


# 10 ------------------------------------------------------------------------


def check_reproducible(capsys=None):
    args = ["verify", "--seed", str(SEED)]
    proc = subprocess.run([sys.executable, "-m", "montybayes", *args], capture_output=True, check=False)
    assert proc.returncode == 0, proc.stdout.decode()[-2000:]
    if capsys is not None:
        code = cli_main(args)
        in_process = capsys.readouterr().out.encode()
    else:
        proc2 = subprocess.run([sys.executable, "-m", "montybayes", *args], capture_output=True, check=False)
        code, in_process = proc2.returncode, proc2.stdout
    assert code == 0
    assert proc.stdout == in_process, "verify output differs between runs"
    rows = json.loads(in_process)["results"]["rows"]
    return f"verify (default grid, {len(rows)} cells) twice: byte-identical JSON"


def test_criterion_10_reproducibility(capsys):
    _run(10, "verify byte-identical", lambda: check_reproducible(capsys))


ALL = [
    (1, "classical 1/3 vs 2/3", check_classical, 5.0),
    (2, "random-host correction", check_random_monty, 10.0),
    (3, "posterior invariance", check_invariance, None),
    (4, "six-door dollar example", check_six_door, None),
    (5, "general-prize law", check_general_law, None),
    (6, "two-player game", check_two_player, 5.0),
    (7, "bonus game", check_bonus_game, None),
    (8, "max-entropy properties", check_maxent, 5.0),
    (9, "probability-calculus invariants", check_calculus, None),
    (10, "verify byte-identical", check_reproducible, None),
]


if __name__ == "__main__":
    failed = 0
    for k, title, fn, budget in ALL:
        try:
            _run(k, title, fn, budget)
        except Exception:
            failed += 1
        print(LINES[k])
    sys.exit(1 if failed else 0)

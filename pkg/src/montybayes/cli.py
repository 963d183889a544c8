"""Command-line entry point: ``montybayes <command> ...``.

Exit codes: 0 success / all checks pass, 1 a verification failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import closed_form as cf
from . import maxent
from .core import (
    ConfigError,
    Evidence,
    GameConfig,
    InformedGoatOnly,
    InvalidEvidence,
    PredeterminedClass,
    Stick,
    SwitchUniform,
    TieBreak,
    UniformRandomUnchosen,
    ValidationError,
    canonical_json,
    config_digest,
    loads_config,
    parse_condition,
    parse_opened,
    strategy_by_name,
    validate,
)
from .exact import ConditionOnNull, StateSpaceTooLarge, posterior
from .montecarlo import (
    ConditionNeverMatched,
    InsufficientTrials,
    SimPlan,
    agreement_test,
    simulate,
)
from .report import UnknownFormat, envelope, money, q, render, sim
from .variants import (
    BonusGameSpec,
    bonus_game_value,
    Hypothesis,
    partition_switch_win,
    simulate_two_player,
    two_player_analyze,
)
from .verify import HOSTS, REVEALS, GridSpec, run_grid

SEED_ENV = "MONTYBAYES_SEED"
DEFAULT_SEED = 2010

VERIFY_COLUMNS = [
    "n", "j", "host", "reveal", "status", "reveal_probability",
    "stick_closed", "stick_exact", "switch_closed", "switch_exact",
    "book_stick", "book_label", "book_matches_exact", "invariance_holds",
    "reveal_given_car_first", "reveal_given_goat_first", "exact_ok",
    "sim_stick", "sim_switch", "sim_ok",
]


class InputError(Exception):
    def __init__(self, kind: str, messages: list[str]):
        self.kind = kind
        self.messages = messages
        super().__init__("; ".join(messages))


def _digest_of(obj) -> str:
    return "sha256:" + hashlib.sha256(canonical_json(obj).encode()).hexdigest()


def load_config_file(path: str) -> GameConfig:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise InputError("UnreadableConfig", [str(exc)]) from None
    try:
        return validate(loads_config(text))
    except ValidationError as exc:
        raise InputError("ValidationError", [f"{type(e).__name__}: {e}" for e in exc.errors]) from None
    except ConfigError as exc:
        raise InputError(type(exc).__name__, [str(exc)]) from None


def default_seed() -> int:
    env = os.environ.get(SEED_ENV)
    if env is None:
        return DEFAULT_SEED
    try:
        return int(env)
    except ValueError:
        raise InputError("BadSeed", [f"{SEED_ENV}={env!r} is not an integer"]) from None


# ---------------------------------------------------------------------------
# analyze


def _evidence_from_args(config: GameConfig, args) -> Evidence:
    opened = parse_opened(args.opened or [])
    if args.reveal:
        if opened:
            raise InvalidEvidence("use either --opened or --reveal, not both")
        door = min(d for d in range(1, config.doors + 1) if d != args.first)
        opened = ((door, args.reveal),)
    if not opened:
        raise InvalidEvidence("say what the host opened with --opened DOOR=LABEL or --reveal LABEL")
    labels = set(config.prizes.labels)
    for _, label in opened:
        if label not in labels:
            raise InvalidEvidence(f"unknown prize label {label!r}")
    return Evidence(args.first, opened).check(config.doors)


def closed_form_rows(config: GameConfig, evidence: Evidence, exact) -> list[dict]:
    """Closed-form counterparts of the exact report, where a formula exists for this game."""
    rows = []
    host, prizes = config.host, config.prizes

    def row(quantity, closed, exact_value, money_valued=False, label=None):
        wrap = money if money_valued else q
        out = {
            "quantity": quantity,
            "closed_form": wrap(closed, "closed_form"),
            "exact": wrap(exact_value, "exact"),
            "match": closed == exact_value,
        }
        if label:
            out["label"] = label
        rows.append(out)

    single = len(evidence.opened) == 1
    revealed = evidence.opened[0][1] if single else None
    two_class = prizes.is_two_class
    params = None
    if two_class and 1 <= prizes.cars <= prizes.doors - 2:
        params = cf.CarsGoatsParams(prizes.doors, prizes.cars)
    reveal = None
    if two_class and single:
        reveal = cf.Reveal.CAR if revealed == prizes.car_label else cf.Reveal.GOAT

    if isinstance(host, UniformRandomUnchosen) and single:
        if params is not None:
            p = cf.random_monty_win_prob(params, reveal)
            row("stick_win", p, exact.win_probability["stick"])
            row("switch_win", p, exact.win_probability["switch"])
            row("book_stick_claim", cf.book_stick_claim(params).value, exact.win_probability["stick"],
                label=cf.ERRONEOUS_UNDER_RANDOM_MONTY)
        g = cf.general_prize_conditional_ev(prizes, revealed)
        row("stick_ev", g.stick_ev, exact.expected_value["stick"], money_valued=True)
        row("switch_ev", g.switch_ev, exact.expected_value["switch"], money_valued=True)
        book = cf.book_switch_ev_prior_weighted(prizes, revealed)
        row("book_switch_ev_prior_weighted", book.value, exact.expected_value["switch"], money_valued=True,
            label=book.label)
        for label, value in cf.conditional_switch_evs(prizes, revealed).items():
            rows.append({"quantity": f"switch_ev_given_first_{label}",
                         "closed_form": money(value, "closed_form")})
        # first-pick class posteriors agree with the door posterior of the pick
        first_post = exact.posteriors[evidence.first_choice]
        for label, value in g.posteriors.items():
            row(f"first_pick_posterior_{label}", value, first_post[label])
    elif (isinstance(host, InformedGoatOnly) and host.tie_break is TieBreak.UNIFORM
          or isinstance(host, PredeterminedClass)) and params is not None and single:
        if isinstance(host, InformedGoatOnly) and prizes.doors == 3 and prizes.cars == 1:
            row("stick_win", cf.classical_stick_prob(), exact.win_probability["stick"])
            row("switch_win", cf.classical_switch_prob(), exact.win_probability["switch"])
        else:
            prior = Fraction(prizes.cars, prizes.doors)
            row("stick_win", prior, exact.win_probability["stick"])
            row("switch_win", cf.switch_prob(params, reveal, prior), exact.win_probability["switch"])
        row("book_stick_claim", cf.book_stick_claim(params).value, exact.win_probability["stick"],
            label=cf.VALID_ONLY_FOR_PREDETERMINED_HOST)
    return rows


def cmd_analyze(args) -> tuple[dict, int]:
    config = load_config_file(args.config)
    evidence = _evidence_from_args(config, args)
    report = posterior(config, evidence, strategies=(Stick(), SwitchUniform()))
    posteriors = []
    for door, dist in report.posteriors.items():
        entry = {"door": door, "role": "first_choice" if door == evidence.first_choice else "switch_target"}
        for label, p in dist.items():
            entry[label] = q(p, "exact")
        posteriors.append(entry)
    strategies = [
        {
            "strategy": name,
            "win_probability": q(report.win_probability[name], "exact"),
            "expected_value": money(report.expected_value[name], "exact"),
        }
        for name in report.win_probability
    ]
    comparisons = closed_form_rows(config, evidence, report)
    checked = [r for r in comparisons if "match" in r and "label" not in r]
    results = {
        "config_label": config.label,
        "evidence": {"first_choice": evidence.first_choice,
                     "opened": [{"door": d, "label": lbl} for d, lbl in evidence.opened]},
        "evidence_probability": q(report.evidence_probability, "exact"),
        "win_label": report.win_label,
        "posteriors": posteriors,
        "strategies": strategies,
        "rows": comparisons,
        "all_closed_forms_match": all(r["match"] for r in checked),
    }
    return envelope("analyze", config_digest(config), results), 0


# ---------------------------------------------------------------------------
# verify


def _cell_row(c) -> dict:
    row = {"n": c.n, "j": c.j, "host": c.host, "reveal": c.reveal, "status": c.status}
    if c.status != "ok":
        return row

    def opt(x, prov):
        return None if x is None else q(x, prov)

    row.update({
        "reveal_probability": q(c.reveal_probability, "exact"),
        "stick_closed": q(c.stick_closed, "closed_form"),
        "stick_exact": q(c.stick_exact, "exact"),
        "switch_closed": q(c.switch_closed, "closed_form"),
        "switch_exact": q(c.switch_exact, "exact"),
        "book_stick": q(c.book_stick, "closed_form"),
        "book_label": (cf.ERRONEOUS_UNDER_RANDOM_MONTY if c.host == "uniform_random"
                       else cf.VALID_ONLY_FOR_PREDETERMINED_HOST),
        "book_matches_exact": c.book_matches_exact,
        "invariance_holds": c.invariance_holds,
        "reveal_given_car_first": opt(c.given_car_first, "exact"),
        "reveal_given_goat_first": opt(c.given_goat_first, "exact"),
        "exact_ok": c.exact_ok,
    })
    if c.sim is not None:
        for name in ("stick", "switch"):
            s = c.sim[name]
            row[f"sim_{name}"] = sim(s["freq"], matched=s["matched"], z=s["z"], passed=s["pass"])
        row["sim_ok"] = c.sim_ok
    return row


def cmd_verify(args) -> tuple[dict, int]:
    grid = GridSpec(
        n_min=args.n_min,
        n_max=args.n_max,
        hosts=tuple(args.hosts),
        reveals=tuple(args.reveals),
        trials=args.trials,
        seed=args.seed if args.seed is not None else default_seed(),
        z_threshold=args.z,
    )
    report = run_grid(grid)
    rows = [_cell_row(c) for c in report.cells]
    results = {
        "grid": grid.to_dict(),
        "columns": VERIFY_COLUMNS,
        "rows": rows,
        "cells": len(rows),
        "all_exact_ok": report.all_exact_ok,
        "all_sim_ok": report.all_sim_ok,
        "book_mismatches": sum(1 for r in rows if r.get("book_matches_exact") is False),
        "passed": report.passed,
    }
    return envelope("verify", _digest_of(grid.to_dict()), results), 0 if report.passed else 1


# ---------------------------------------------------------------------------
# simulate / maxent / twoplayer / bonusgame / report


def cmd_simulate(args) -> tuple[dict, int]:
    config = load_config_file(args.config)
    strategy = strategy_by_name(args.strategy)
    condition = parse_condition(args.condition) if args.condition else None
    seed = args.seed if args.seed is not None else default_seed()
    plan = SimPlan(config, strategy, args.trials, seed, condition)
    result = simulate(plan)
    row = {
        "strategy": strategy.name,
        "condition": str(condition) if condition else "any",
        "trials": result.trials,
        "matched_trials": result.matched_trials,
        "wins": result.wins,
        "freq": sim(result.freq),
        "stderr": sim(result.stderr),
        "total_value_cents": result.total_value,
        "mean_value_cents": sim(result.mean_value),
    }
    results = {"seed": seed, "rows": [row]}
    return envelope("simulate", config_digest(config), results), 0


def cmd_maxent(args) -> tuple[dict, int]:
    N = args.N
    if args.M:
        Ms = args.M
    else:
        Ms = list(range(0, N + 1, args.step)) if args.step else [N // 2]
    rows = []
    for M in Ms:
        tc = maxent.TrialCount(N, M)
        r = maxent.table_row(tc)
        row = {"N": N, "M": M}
        row["p"] = q(tc.p, "exact")
        row["ln_count"] = sim(r["ln_count"], "exact", rel_error_bound=r["ln_count_rel_error_bound"])
        row["log10_count"] = sim(r["log10_count"], "exact")
        row["n_h"] = sim(r["n_h"], "closed_form")
        row["gap"] = sim(r["gap"], "closed_form")
        row["stirling_gap"] = None if r["stirling_gap"] is None else sim(r["stirling_gap"], "closed_form")
        row["log10_exp_n_h_base10"] = sim(r["log10_exp_n_h_base10"], "closed_form")
        rows.append(row)
    results = {"N": N, "argmax_M": maxent.most_realisable_count(N), "rows": rows}
    return envelope("maxent", _digest_of({"N": N, "M": Ms}), results), 0


def cmd_twoplayer(args) -> tuple[dict, int]:
    tie = TieBreak(args.tie_break)
    seed = args.seed if args.seed is not None else default_seed()
    rows = []
    ok = True
    for player in (1, 2):
        rep = two_player_analyze(tie, player)
        row = {"player": player, "stick": q(rep.stick_prob, "exact"), "switch": q(rep.switch_prob, "exact")}
        if args.trials:
            for k, (name, exact) in enumerate((("stick", rep.stick_prob), ("switch", rep.switch_prob))):
                res = simulate_two_player(args.trials, seed, name == "switch", player, tie, stream=2 * player + k)
                verdict = agreement_test(res, exact)
                row[f"sim_{name}"] = sim(res.freq, matched=res.matched_trials, z=verdict.z, passed=verdict.passed)
                ok = ok and verdict.passed
        rows.append(row)
    info = [
        {"own_pick": pick, "opened": opened, "stick": q(p, "exact"), "switch": q(1 - p, "exact")}
        for (pick, opened), p in two_player_analyze(tie, 1).info_sets.items()
    ]
    results = {"tie_break": tie.value, "seed": seed, "rows": rows, "player1_information_sets": info}
    return envelope("twoplayer", _digest_of({"tie_break": tie.value}), results), 0 if ok else 1


def cmd_bonusgame(args) -> tuple[dict, int]:
    hyp = Hypothesis(args.hypothesis)
    strategy = strategy_by_name(args.strategy)
    spec = BonusGameSpec(hyp, args.car_value, args.bonus, strategy)
    value = bonus_game_value(spec)
    partition = partition_switch_win(hyp)
    results = {
        "hypothesis": hyp.value,
        "strategy": strategy.name,
        "car_value": money(args.car_value, "exact"),
        "bonus": money(args.bonus, "exact"),
        "expected_winnings": money(value, "exact"),
        "rows": [
            {"host_opened": block, "switch_win": None if p is None else q(p, "exact")}
            for block, p in partition.items()
        ],
    }
    digest = _digest_of({"hypothesis": hyp.value, "car_value": args.car_value, "bonus": args.bonus})
    return envelope("bonusgame", digest, results), 0


def cmd_report(args) -> tuple[dict, int]:
    try:
        text = sys.stdin.read() if args.envelope == "-" else Path(args.envelope).read_text()
        env = json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError("UnreadableEnvelope", [str(exc)]) from None
    if not isinstance(env, dict) or "results" not in env or "command" not in env:
        raise InputError("InvalidEnvelope", ["not a report envelope"])
    return env, 0


# ---------------------------------------------------------------------------


def _u64(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="montybayes", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def fmt(p):
        p.add_argument("--format", default="json", help="json (default), csv or table")

    p = sub.add_parser("analyze", help="exact posteriors and values for one observation")
    p.add_argument("config", help="game config JSON file, or - for stdin")
    p.add_argument("--first", type=int, default=1, help="door picked first (default 1)")
    p.add_argument("--opened", action="append", metavar="DOOR=LABEL", help="an opened door and its prize")
    p.add_argument("--reveal", metavar="LABEL", help="shorthand: the lowest other door shows LABEL")
    fmt(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("verify", help="closed form vs exact vs simulation over a car/goat grid")
    p.add_argument("--n-min", type=int, default=3)
    p.add_argument("--n-max", type=int, default=8)
    p.add_argument("--hosts", nargs="*", default=list(HOSTS), choices=HOSTS)
    p.add_argument("--reveals", nargs="*", default=list(REVEALS), choices=REVEALS)
    p.add_argument("--trials", type=int, default=100_000, help="simulated trials per cell (0 skips)")
    p.add_argument("--seed", type=_u64, default=None)
    p.add_argument("--z", type=float, default=4.0)
    fmt(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simulate", help="seeded Monte Carlo run of one config and strategy")
    p.add_argument("--config", required=True)
    p.add_argument("--strategy", default="switch", help="stick, switch or informed")
    p.add_argument("--trials", type=int, default=1_000_000)
    p.add_argument("--seed", type=_u64, default=None)
    p.add_argument("--condition", default=None, help="any | revealed:goat | evidence:1/3=goat")
    fmt(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("maxent", help="exact log-counts against N*H(p)")
    p.add_argument("--N", type=int, default=1000)
    p.add_argument("--M", type=int, action="append", help="success count (repeatable)")
    p.add_argument("--step", type=int, default=None, help="sweep M = 0, step, 2*step, ...")
    fmt(p)
    p.set_defaults(func=cmd_maxent)

    p = sub.add_parser("twoplayer", help="two contestants, one host")
    p.add_argument("--tie-break", default="uniform", choices=[t.value for t in TieBreak])
    p.add_argument("--trials", type=int, default=0)
    p.add_argument("--seed", type=_u64, default=None)
    fmt(p)
    p.set_defaults(func=cmd_twoplayer)

    p = sub.add_parser("bonusgame", help="numbered doors with a bonus for staying")
    p.add_argument("--hypothesis", required=True, choices=[h.value for h in Hypothesis])
    p.add_argument("--car-value", type=int, required=True, help="cents")
    p.add_argument("--bonus", type=int, default=10_000, help="cents paid for not switching")
    p.add_argument("--strategy", default="informed")
    fmt(p)
    p.set_defaults(func=cmd_bonusgame)

    p = sub.add_parser("report", help="re-render a saved JSON envelope")
    p.add_argument("envelope", help="envelope JSON file, or - for stdin")
    fmt(p)
    p.set_defaults(func=cmd_report)
    return parser


def _error(kind: str, messages: list[str]) -> str:
    return json.dumps({"error": {"type": kind, "messages": messages}}, sort_keys=True, indent=2) + "\n"


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and 2
    try:
        env, code = args.func(args)
        out = render(env, args.format)
    except InputError as exc:
        sys.stdout.write(_error(exc.kind, exc.messages))
        return 2
    except (InvalidEvidence, ConfigError, UnknownFormat, ConditionOnNull, ConditionNeverMatched,
            InsufficientTrials, StateSpaceTooLarge, ValueError) as exc:
        sys.stdout.write(_error(type(exc).__name__, [str(exc)]))
        return 2
    sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())

"""Print the headline numbers of every worked game, each computed exactly."""

from fractions import Fraction

from montybayes import closed_form as cf
from montybayes.core import (
    Evidence,
    GameConfig,
    TieBreak,
    UniformRandomUnchosen,
    cars_goats,
    classical,
    dollars,
    six_door_prizes,
)
from montybayes.exact import posterior, reveal_summary
from montybayes.variants import (
    Hypothesis,
    default_strategies,
    partition_switch_win,
    strategy_comparison,
    two_player_analyze,
)


def show(title: str, value):
    if isinstance(value, Fraction) and value.denominator != 1:
        value = f"{value} ({float(value):.4f})"
    print(f"  {title:<44} {value}")


def main():
    print("Classical game, informed host, goat shown")
    r = posterior(classical(), Evidence(1, ((2, "goat"),)))
    show("stick", r.win_probability["stick"])
    show("switch", r.win_probability["switch"])

    print("\nRandom host, n doors, j cars (first pick posterior = switch chance)")
    for n, j in ((3, 1), (5, 2), (8, 3)):
        s = reveal_summary(GameConfig(cars_goats(n, j), UniformRandomUnchosen()), ["goat"])
        show(f"n={n}, j={j}, goat shown (j/n would say {Fraction(j, n)})", s.first_choice_posterior["car"])

    print("\nSix doors: 2 cars $20,000, 2 motorcycles $10,000, 2 fridges $300; a car shown")
    prizes = six_door_prizes()
    for label, v in cf.conditional_switch_evs(prizes, "car").items():
        show(f"switch value if first pick is {label}", dollars(v))
    show("prior-weighted switch value", dollars(cf.book_switch_ev_prior_weighted(prizes, "car").value))
    r = posterior(GameConfig(prizes, UniformRandomUnchosen()), Evidence(1, ((2, "car"),)))
    for label, p in r.posteriors[1].items():
        show(f"P(first pick is {label} | car shown)", p)
    show("stick value", dollars(r.expected_value["stick"]))
    show("switch value", dollars(r.expected_value["switch"]))

    print("\nTwo players, one host (deals the host cannot serve are re-dealt)")
    for tie in TieBreak:
        rep = two_player_analyze(tie)
        show(f"tie-break {tie.value}: stick / switch", f"{rep.stick_prob} / {rep.switch_prob}")

    print("\nNumbered doors, car $3,000, $100 for not switching")
    table = strategy_comparison(list(Hypothesis), default_strategies(), 300_000, 10_000)
    for (h, s), v in table.values.items():
        show(f"{h} {s}", dollars(v))
    for h in Hypothesis:
        show(f"{h.value} P(switch wins | lower / higher opened)",
             " / ".join(str(p) for p in partition_switch_win(h).values()))


if __name__ == "__main__":
    main()

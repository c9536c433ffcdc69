import json
import math
from dataclasses import replace

import pytest

from dwt.errors import BracketTooWide, ValidationError
from dwt.nonselection import (Stage, StageParams, Thresholds, build_example, check_order,
                              check_rules, desk_schedule, diagnostics, figure_schedule,
                              load_schedule, oscillation_experiment)
from dwt.potential import PlateauSeq, ReducedPotential
from dwt.spectrum import solve_lambda


def params(p, q, eps, beta, trunc):
    return StageParams(tuple(Stage(*s) for s in zip(p, q, eps, beta)), trunc)


def test_staircase_layout():
    P = params((1, 6), (4, 5), (0.5, 0.1), (10.0, 100.0), 0.01)
    R = build_example(P).potential
    assert R.H0.values(8).tolist() == [0.5, 0.1, 0.1, 0.1, 0.1, 0.1, 0.0, 0.0]
    assert R.H1.values(6).tolist() == [0.5, 0.5, 0.5, 0.5, 0.1, 0.0]
    assert R.trunc_level == 0.01 and R.limit_approximation


def test_interleaving_enforced():
    bad = params((1, 6), (4, 8), (0.5, 0.1), (10.0, 100.0), 0.01)
    assert check_order(bad)
    with pytest.raises(ValidationError):
        build_example(bad)
    # the chain p0 < q0 < q1 < p1 holds here
    assert not check_order(params((1, 40), (4, 8), (0.5, 0.1), (10.0, 100.0), 0.01))


@pytest.mark.parametrize("eps, beta, trunc", [
    ((0.1, 0.5), (10.0, 100.0), 0.01),
    ((0.5, 0.1), (100.0, 10.0), 0.01),
    ((0.5, 0.1), (10.0, 100.0), 0.2),
    ((0.5, 0.1), (-1.0, 100.0), 0.01),
])
def test_level_and_temperature_orderings(eps, beta, trunc):
    with pytest.raises(ValidationError):
        build_example(params((1, 6), (4, 5), eps, beta, trunc))


def test_figure_layout_is_astronomical():
    built = build_example(figure_schedule())
    assert built.astronomical and built.potential is None and built.reasons
    P = figure_schedule()
    assert (P.stages[0].p, P.stages[0].q) == (2 ** 4, 2 ** 5)
    with pytest.raises(ValueError):
        figure_schedule(start=3)
    with pytest.raises(ValidationError):
        oscillation_experiment(P)


def test_rules_constant_beta_reported():
    P = params((1, 30, 31), (10, 11, 400), (1e-2, 1e-4, 1e-6), (1e4, 1e4, 1e4), 1e-8)
    rep = check_rules(P)
    assert not rep.ok and rep.order_problems


def test_rules_geometric_borderline():
    eps = tuple(10.0 ** -k for k in range(4))
    beta = tuple(40 * 10.0 ** k for k in range(4))
    P = params((1, 300, 301, 90000), (20, 21, 6000, 6001), eps, beta, 1e-4)
    rep = check_rules(P)
    flagged = [r for r in rep.failures() if r["quantity"] == "beta eps_next"]
    assert flagged and all(math.isclose(r["value"], 4.0) for r in flagged)


def test_rules_ratios_and_sums():
    P = params((1, 6), (4, 5), (0.5, 0.1), (10.0, 100.0), 0.01)
    rep = check_rules(P)
    ratios = {r["k"]: r for r in rep.rows if r["quantity"] in ("q/p", "p/q")}
    assert ratios[0]["value"] == 4.0 and not ratios[0]["passed"]
    assert ratios[1]["value"] == 6 / 5 and ratios[1]["threshold"] == 10.0
    assert math.isclose(rep.partial_sums["p"], math.exp(-0.5) + 5 * math.exp(-0.1))
    assert json.dumps(rep.to_dict())


def test_desk_schedule_passes_rules():
    rep = check_rules(desk_schedule())
    assert rep.ok, rep.failures()
    assert all(r["value"] <= 0.1 for r in rep.rows if r["quantity"] == "beta eps_next")


def test_frozen_schedule_file(tmp_path):
    from pathlib import Path
    frozen = load_schedule(Path(__file__).resolve().parents[1] / "configs" / "schedules" / "desk.json")
    assert frozen == desk_schedule()
    path = tmp_path / "s.json"
    path.write_text(json.dumps(frozen.to_dict()))
    assert load_schedule(path) == frozen


def test_schedule_default_truncation_level():
    data = desk_schedule().to_dict()
    del data["eps_trunc"]
    P = StageParams.from_dict(data)
    assert math.isclose(P.eps_trunc, 1e-24, rel_tol=1e-12)


@pytest.mark.parametrize("data", [{}, {"stages": []}, {"stages": [{"p": 1}]}])
def test_malformed_schedule(data):
    with pytest.raises(ValidationError):
        StageParams.from_dict(data)


@pytest.fixture(scope="module")
def desk_rows():
    return oscillation_experiment(desk_schedule())


def test_alternation(desk_rows):
    for r in desk_rows:
        assert r["dominant_ok"]
        assert (r["mu0"] > 0.5) == (r["k"] % 2 == 0)
    assert all(r["mu0"] >= 0.9 for r in desk_rows if r["k"] in (2, 4))
    assert all(r["mu0"] <= 0.1 for r in desk_rows if r["k"] in (3, 5))


def test_ratio_lower_bound(desk_rows):
    assert all(r["favoured_ratio"] >= r["ratio_lower_bound"] for r in desk_rows)


def test_diagnostic_bounds_and_trend(desk_rows):
    P = desk_schedule()
    assert all(r["bounds_ok"] for r in desk_rows)
    deltas = [r["delta"] for r in desk_rows]
    assert min(deltas) > 0.98 and deltas[-1] >= deltas[0]
    for r in desk_rows:
        s = P.stages[r["k"]]
        assert s.q * r["theta1"] < 1e-30 and s.p * r["theta0"] < 1e-30


def test_truncation_does_not_move_answers(desk_rows):
    assert all(abs(r["mu0"] - r["mu0_completed"]) < 0.01 for r in desk_rows)


def test_diagnostics_definitions():
    R = ReducedPotential(PlateauSeq(((2, 0.5),), 0.1), PlateauSeq(((3, 0.4),), 0.2))
    beta = 3.0
    sp = solve_lambda(R, beta)
    lam = sp.lam
    d = diagnostics(R, beta, sp.loglam1, 2, 3)
    n = range(1, 4000)
    h0 = [R.H0.value(k) for k in n]
    theta0 = sum(math.exp(-beta * h) * lam ** -k for k, h in zip(n, h0) if k <= 2)
    alpha0 = lam ** 2 * (lam - 1) * sum(math.exp(-beta * h) * lam ** -k
                                        for k, h in zip(n, h0) if k > 2)
    alpha0 += lam ** 2 * math.exp(-beta * 0.1) * lam ** -3999  # geometric remainder
    assert math.isclose(d.theta0, theta0, rel_tol=1e-12)
    assert math.isclose(d.alpha0, alpha0, rel_tol=1e-9)
    assert math.isclose(d.delta, lam ** 2.5 * (lam - 1), rel_tol=1e-12)


def test_symmetric_staircase_does_not_favour_a_side():
    seq = PlateauSeq(((1, 1.0), (9, 1e-2), (90, 1e-4)), 0.0)
    R = ReducedPotential(seq, seq, 1e-6)
    for beta in (1e2, 1e4, 1e5):
        assert abs(solve_lambda(R, beta).mu0 - 0.5) < 1e-12


def test_bracket_too_wide():
    P = desk_schedule()
    wide = replace(P, eps_trunc=1e-20 * 0.5)
    with pytest.raises(BracketTooWide):
        oscillation_experiment(wide)
    rows = oscillation_experiment(wide, stages=[0, 1, 2])
    assert [r["k"] for r in rows] == [0, 1, 2]


def test_larger_ratio_favours_zero_more():
    base = desk_schedule()
    mus = []
    for q2 in (200_000, 400_000, 800_000):
        stages = list(base.stages)
        stages[2] = replace(stages[2], q=q2)
        P = replace(base, stages=tuple(stages))
        mus.append(oscillation_experiment(P, stages=[2])[0]["mu0"])
    assert mus == sorted(mus)


def test_thresholds_are_configurable():
    rep = check_rules(desk_schedule(), Thresholds(ratio_min=1000.0))
    assert not rep.ok

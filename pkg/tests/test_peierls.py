import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dwt.asymptotics import limit_subaction, profile
from dwt.errors import NumericFailure, ValidationError
from dwt.oracle import brute_force_barrier, brute_force_liminf
from dwt.peierls import (barrier, boundary_table, corollary_identities,
                         extrapolated_mather_values, lax_oleinik_step, representation_formula,
                         solve_calibrated, subaction_defect)
from dwt.spectrum import SubactionTable, eigenfunction_table, solve_lambda, subaction_table

from helpers import (GOLDEN, KAPPA2, MIXED, SELECT_ONE, STAIRCASE, SYMMETRIC, reduced,
                     reduced_potentials)


def zeros(n):
    return SubactionTable(np.zeros(n), np.zeros(n), 0.0, 0.0)


# -- barriers ------------------------------------------------------------------

@given(reduced_potentials())
def test_barrier_invariants(R):
    B = barrier(R, R.head_length + 4)
    assert B.from_fix0.v0.max() == 0.0 and B.from_fix0.vFix0 == 0.0
    assert B.from_fix1.v1.max() == 0.0 and B.from_fix1.vFix1 == 0.0
    assert B.from_fix0.vFix1 == R.Hinf0
    assert B.from_fix1.vFix0 == R.Hinf1


def test_barrier_example():
    R = reduced(([(1, 1.5)], 1.0), 2.0)
    assert barrier(R, 4).from_fix0.value(1, 2) == 1.0
    assert barrier(R, 4).from_fix0.value(1, 1) == 1.0


def test_golden_liminf():
    B = barrier(GOLDEN, 4)
    assert B.liminf1 == 2.0 == profile(GOLDEN).gamma
    assert B.identities == (2.0, 4.0, 2.0)


def test_identities_examples():
    ids = corollary_identities(SYMMETRIC)
    assert (ids["half_sum"], ids["liminf_to_fix0"], ids["liminf_to_fix1"]) == (1.0, 2.0, 2.0)
    assert not ids["nonselection"]
    assert corollary_identities(STAIRCASE)["nonselection"]
    g = corollary_identities(GOLDEN)
    assert (g["half_sum"], g["liminf_to_fix0"], g["liminf_to_fix1"]) == (2.0, 4.0, 2.0)
    assert g["minimum"] == 2.0


@given(reduced_potentials())
def test_identities_match_profile(R):
    ids = corollary_identities(R)
    assert ids["minimum"] == profile(R).gamma
    assert barrier(R, 2).identities == (ids["half_sum"], ids["liminf_to_fix0"],
                                       ids["liminf_to_fix1"])


@settings(max_examples=30)
@given(reduced_potentials(max_plateaus=2, max_len=2))
def test_barrier_matches_enumeration(R):
    B = barrier(R, 6)
    for n in range(1, 5):
        for source, target, table in ((0, 1, B.from_fix0), (1, 0, B.from_fix1)):
            value, bound = brute_force_barrier(R, source, (target, n), max_blocks=3,
                                               max_block_len=R.head_length + 2)
            exact = table.value(target, n)
            assert value - bound - 1e-12 <= exact <= value + 1e-12
    for source in (0, 1):
        value, bound = brute_force_barrier(R, source, (1 - source, None), max_blocks=3,
                                           max_block_len=R.head_length + 2)
        exact = R.side(source).tail
        assert value - bound - 1e-12 <= exact <= value + 1e-12


@given(reduced_potentials())
def test_liminf_matches_enumeration(R):
    B = barrier(R)
    L = R.head_length + 3
    assert math.isclose(brute_force_liminf(R, 0, L), B.liminf0)
    assert math.isclose(brute_force_liminf(R, 1, L), B.liminf1)


# -- Lax-Oleinik -----------------------------------------------------------------

def test_zero_is_fixed_for_constant():
    V = zeros(4)
    W = lax_oleinik_step(SYMMETRIC, V)
    assert W.sup_distance(V) == 0.0


def test_limit_subaction_is_calibrated():
    V = limit_subaction(GOLDEN, profile(GOLDEN), 8)
    assert lax_oleinik_step(GOLDEN, V).sup_distance(V) == 0.0


@given(reduced_potentials(max_plateaus=3, max_len=3), st.integers(0, 2 ** 31 - 1))
def test_step_is_monotone(R, seed):
    rng = np.random.default_rng(seed)
    n = R.head_length + 3
    a = rng.uniform(0, 3, 2 * n + 2)
    b = a + rng.uniform(0, 1, 2 * n + 2)
    V = SubactionTable(a[:n], a[n:2 * n], a[-2], a[-1])
    W = SubactionTable(b[:n], b[n:2 * n], b[-2], b[-1])
    TV, TW = lax_oleinik_step(R, V), lax_oleinik_step(R, W)
    assert np.all(TV.v0 <= TW.v0) and np.all(TV.v1 <= TW.v1)
    assert TV.vFix0 <= TW.vFix0 and TV.vFix1 <= TW.vFix1


def test_table_must_reach_past_head():
    R = reduced(([(5, 1.0)], 2.0), 1.0)
    with pytest.raises(ValidationError):
        lax_oleinik_step(R, zeros(5))


@given(reduced_potentials())
def test_calibrated_from_zero(R):
    V = solve_calibrated(R, zeros(R.head_length + 2))
    assert lax_oleinik_step(R, V).sup_distance(V) <= 1e-12
    assert V.minimum() == 0.0
    assert subaction_defect(R, V) <= 1e-12


@pytest.mark.parametrize("R", [GOLDEN, KAPPA2, SELECT_ONE, MIXED],
                         ids=["golden", "kappa2", "select_one", "mixed"])
def test_fixed_point_from_mather_values(R):
    nmax = R.head_length + 6
    Vinf = limit_subaction(R, profile(R), nmax)
    fixed = solve_calibrated(R, boundary_table(R, Vinf.vFix0, Vinf.vFix1, nmax), normalize=False)
    assert fixed.sup_distance(Vinf) <= 1e-10
    rep = representation_formula(R, fixed.vFix0, fixed.vFix1, nmax)
    assert rep.sup_distance(fixed) <= 1e-10
    assert subaction_defect(R, fixed) <= 1e-12


def test_calibrated_sub_actions_are_not_unique():
    # V = 0 is always calibrated for a reduced potential, yet V_inf is not 0:
    # the calibrated fixed point depends on the start and is pinned only by
    # its values on the Mather set
    nmax = 8
    zero = solve_calibrated(GOLDEN, zeros(nmax))
    Vinf = limit_subaction(GOLDEN, profile(GOLDEN), nmax)
    assert zero.maximum() == 0.0
    assert lax_oleinik_step(GOLDEN, Vinf).sup_distance(Vinf) == 0.0
    assert zero.sup_distance(Vinf) == 1.0


def test_no_convergence_raises():
    with pytest.raises(NumericFailure):
        solve_calibrated(GOLDEN, boundary_table(GOLDEN, 1.0, 0.0, 40), maxiter=3)


def test_extrapolated_mather_values():
    m0, m1 = extrapolated_mather_values(GOLDEN)
    assert abs(m0 - 1.0) < 1e-9 and abs(m1) < 1e-9


@settings(max_examples=25)
@given(reduced_potentials(), st.floats(0.5, 50.0))
def test_finite_temperature_subaction_inequality(R, beta):
    # Phi(y) >= exp(-beta H(x)) Phi(x) / lambda gives V(sigma x) - V(x) - H(x) <= log(lambda)/beta
    sp = solve_lambda(R, beta)
    V = subaction_table(R, sp, eigenfunction_table(R, sp, R.head_length + 4))
    assert subaction_defect(R, V) <= sp.loglam / beta + 1e-12


def test_barrier_dict():
    d = barrier(GOLDEN, 3).to_dict()
    assert d["identities"] == [2.0, 4.0, 2.0]

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dwt.errors import NumericFailure
from dwt.potential import PlateauSeq
from dwt.series import (eval_F, eval_F_derivative, geometric_tails, log_lambda, log_log_lambda,
                        log_series)

from helpers import GOLDEN, const, plateau_seqs, reduced, reduced_potentials

# 50-digit mpmath evaluation of the closed forms for H1 = [(1, 1.0)], tail 3 at
# beta = 5, lambda = 1.01
LOG_F_REF = -5.0054206125587797879
LOG_FT_REF = -4.6294070178178214116


def brute(seq, beta, lam, weighted=False, terms=20000):
    k = np.arange(1, terms + 1)
    v = seq.values(terms)
    w = k if weighted else np.ones(terms)
    return float(np.sum(w * np.exp(-beta * v - k * np.log(lam))))


def test_geometric_tails_at_two():
    a, b = geometric_tails(0.0, 0)
    assert math.isclose(math.exp(a), 1.0, rel_tol=1e-15)
    assert math.isclose(math.exp(b), 2.0, rel_tol=1e-15)
    a, b = geometric_tails(0.0, 1)
    assert math.isclose(math.exp(a), 0.5, rel_tol=1e-15)
    assert math.isclose(math.exp(b), 1.5, rel_tol=1e-15)


def test_geometric_tails_near_one():
    lam1 = 1e-8
    a, b = geometric_tails(math.log(lam1), 0)
    # sum lambda^-k = 1/(lambda-1) and sum k lambda^-k = lambda/(lambda-1)^2
    assert math.isclose(a, -math.log(lam1), rel_tol=1e-12)
    assert math.isclose(b, math.log1p(lam1) - 2 * math.log(lam1), rel_tol=1e-12)


def test_geometric_tails_against_partial_sum():
    lam = 1.001
    N = 3
    k = np.arange(N + 1, 20001)
    head = np.exp(-k * np.log(lam))
    rem = lam ** -20000 / (lam - 1)
    a, _ = geometric_tails(math.log(lam - 1), N)
    assert math.isclose(math.exp(a), head.sum() + rem, rel_tol=1e-11)


def test_geometric_tails_errors():
    with pytest.raises(NumericFailure):
        geometric_tails(-math.inf, 0)
    with pytest.raises(ValueError):
        geometric_tails(0.0, -1)


def test_frozen_reference_values():
    r = eval_F(GOLDEN, 1, 5.0, math.log(0.01))
    assert math.isclose(r.logF, LOG_F_REF, rel_tol=1e-13)
    assert math.isclose(r.logFtilde, LOG_FT_REF, rel_tol=1e-13)
    assert r.head_terms == 1 and r.bracket is None


def test_constant_closed_form():
    R = reduced(1.0, 1.0)
    r = eval_F(R, 0, 10.0, -10.0)
    assert abs(r.logF) < 1e-13
    lam = 1 + math.exp(-10.0)
    assert math.isclose(r.logFtilde, -10.0 + math.log(lam) + 20.0, rel_tol=1e-13)


@pytest.mark.parametrize("h", [0.3, 1.0, 2.5])
@pytest.mark.parametrize("beta", [0.5, 5.0, 50.0])
@pytest.mark.parametrize("t", [-60.0, -5.0, -0.5, 0.0, 2.0])
def test_constant_grid(h, beta, t):
    seq = const(h)
    lam = log_lambda(t)
    assert math.isclose(log_series(seq, beta, t), -beta * h - t, rel_tol=1e-13, abs_tol=1e-13)
    want = -beta * h + lam - 2 * t
    assert math.isclose(log_series(seq, beta, t, offset=0.0), want, rel_tol=1e-13, abs_tol=1e-13)


@settings(max_examples=60)
@given(plateau_seqs(max_plateaus=5, max_len=6), st.floats(0.1, 5.0), st.floats(0.02, 1.0))
def test_matches_direct_summation(seq, beta, lam1):
    t = math.log(lam1)
    lam = 1 + lam1
    for weighted in (False, True):
        got = math.exp(log_series(seq, beta, t, offset=0.0 if weighted else None))
        assert math.isclose(got, brute(seq, beta, lam, weighted), rel_tol=1e-11)


@given(plateau_seqs(), st.floats(0.1, 5.0), st.floats(-8.0, 0.0), st.integers(1, 8),
       st.integers(0, 8))
def test_ranges_add_up(seq, beta, t, split, extra):
    whole = log_series(seq, beta, t, start=split)
    lo = log_series(seq, beta, t, start=split, stop=split + extra)
    hi = log_series(seq, beta, t, start=split + extra + 1)
    assert math.isclose(whole, float(np.logaddexp(lo, hi)), rel_tol=1e-12, abs_tol=1e-12)


def test_offset_weights():
    seq = PlateauSeq([(2, 0.5)], 1.0)
    beta, lam1 = 1.3, 0.2
    lam = 1 + lam1
    k = np.arange(3, 4000)
    direct = np.sum((k - 2) * np.exp(-beta * seq.values(4000)[2:3999] - k * np.log(lam)))
    got = math.exp(log_series(seq, beta, math.log(lam1), start=3, offset=2))
    assert math.isclose(got, direct, rel_tol=1e-12)
    with pytest.raises(ValueError):
        log_series(seq, beta, 0.0, start=2, offset=2)
    assert log_series(seq, beta, 0.0, start=5, stop=4) == -math.inf


def test_extreme_scales():
    seq = PlateauSeq([(3, 2.0)], 5.0)
    for t in (-800.0, -200.0, 40.0):
        v = log_series(seq, 100.0, t)
        assert math.isfinite(v)
    # deep in the tail regime the tail term dominates: F ~ e^{-beta Hinf} / (lambda - 1)
    assert math.isclose(log_series(seq, 1.0, -800.0), -5.0 + 800.0, rel_tol=1e-12)


def test_log_log_lambda_branches():
    for t in (-40.0, -30.5, -29.5, -3.0, 0.0, 5.0):
        assert math.isclose(log_log_lambda(t), math.log(math.log1p(math.exp(t))), rel_tol=1e-13)


def test_divergent_tail():
    with pytest.raises(NumericFailure):
        log_series(const(1.0), 1.0, -math.inf)


@given(reduced_potentials(), st.floats(0.1, 20.0))
def test_strictly_decreasing_in_lambda(R, beta):
    ts = np.linspace(-12, 3, 16)
    for side in (0, 1):
        f = [eval_F(R, side, beta, t).logF for t in ts]
        ft = [eval_F(R, side, beta, t).logFtilde for t in ts]
        assert all(a > b for a, b in zip(f, f[1:]))
        assert all(a > b for a, b in zip(ft, ft[1:]))


def test_limits_in_lambda():
    assert eval_F(GOLDEN, 1, 2.0, -300.0).logF > 250
    assert eval_F(GOLDEN, 1, 2.0, 300.0).logF < -250


def test_derivative_closed_form_and_sign():
    R = reduced(1.0, 1.0)
    t = math.log(0.3)
    # d/dlambda e^{-beta}/(lambda-1) = -e^{-beta}/(lambda-1)^2
    assert math.isclose(eval_F_derivative(R, 0, 2.0, t), -2.0 - 2 * t, rel_tol=1e-13)


def test_derivative_finite_difference():
    beta, lam = 5.0, 1.01
    h = 1e-6

    def F(x):
        return math.exp(eval_F(GOLDEN, 1, beta, math.log(x - 1)).logF)

    fd = (F(lam + h) - F(lam - h)) / (2 * h)
    got = -math.exp(eval_F_derivative(GOLDEN, 1, beta, math.log(lam - 1)))
    assert fd < 0
    assert abs(got - fd) / abs(fd) <= 1e-6


@settings(max_examples=40)
@given(st.floats(0.01, 2.0), st.floats(1e-4, 0.5), st.floats(0.5, 30.0), st.floats(-10.0, 0.0))
def test_bracket_soundness(level, trunc, beta, t):
    seq = PlateauSeq([(2, level + trunc), (3, level)], 0.0)
    R = reduced(seq, const(1.0), trunc_level=trunc)
    r = eval_F(R, 0, beta, t)
    lo, hi = r.bracket
    assert lo <= r.logF <= hi
    # any completion with truncated levels in [0, trunc]
    for fill in (0.0, 0.5 * trunc, trunc):
        done = PlateauSeq(seq.plateaus, fill) if fill > 0 else None
        val = log_series(done, beta, t) if done else r.logF
        assert lo - 1e-12 <= val <= hi + 1e-12

"""Zero-temperature behaviour predicted from the potential alone.

The exponent ``gamma`` is the smallest of three energy barriers,

    gamma = min{(Hinf0 + Hinf1)/2, Hmin0 + Hinf1, Hmin1 + Hinf0},

and decides the regime:

* ``SelectOne``: the mean barrier is beaten by ``Hmin1 + Hinf0`` and the
  Gibbs measures concentrate on one fixed point,
* ``Barycenter``: ``gamma > 0`` otherwise, and the limit puts weights
  ``(1/(1+c^2), c^2/(1+c^2))`` on the two fixed points, where ``c`` is the
  positive root of ``X^2 = kappa X + 1`` and ``kappa`` counts the head
  indices that tie with the mean barrier,
* ``GammaZero``: both tails vanish and no limit is guaranteed.

Everything is computed in an orientation with ``Hinf0 <= Hinf1`` and mapped
back, so each statement is coded once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .potential import ReducedPotential
from .spectrum import SpectralData, SubactionTable

__all__ = [
    "SELECT_ONE",
    "BARYCENTER",
    "GAMMA_ZERO",
    "AsymptoticProfile",
    "profile",
    "log_scale_predictions",
    "equivalents",
    "equivalent_ratios",
    "limit_subaction",
    "phase_grid",
    "fit_rate",
    "KAPPA_RTOL",
]

SELECT_ONE = "SelectOne"
BARYCENTER = "Barycenter"
GAMMA_ZERO = "GammaZero"

# an index ties with the mean barrier when within KAPPA_RTOL * max(1, gamma)
KAPPA_RTOL = 1e-9


@dataclass(frozen=True)
class AsymptoticProfile:
    """Classification of a reduced potential as beta -> infinity.

    ``swapped`` is True when the symbols were exchanged to reach
    ``Hinf0 <= Hinf1``; ``c`` is then the coefficient of the exchanged
    problem.  ``weights`` are in the original labels (None in GammaZero).
    ``rates`` maps quantity names to predicted ``-lim (1/beta) log Q``.
    """

    gamma: float
    kappa: int | None
    c: float | None
    swapped: bool
    regime: str
    weights: tuple[float, float] | None
    exponents: tuple[float, float, float]
    rates: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        w0, w1 = self.weights if self.weights is not None else (None, None)
        return {
            "gamma": self.gamma,
            "kappa": self.kappa,
            "c": self.c,
            "swapped": self.swapped,
            "regime": self.regime,
            "w0": w0,
            "w1": w1,
            "exponents": list(self.exponents),
            "rates": dict(self.rates),
        }


def _oriented(R: ReducedPotential) -> tuple[ReducedPotential, bool]:
    if R.Hinf0 > R.Hinf1:
        return R.swapped(), True
    return R, False


def _tol(gamma: float, rtol: float) -> float:
    return rtol * max(1.0, gamma)


def _count_ties(O: ReducedPotential, mean: float, tol: float) -> int:
    """Head indices n with ``H1_n + Hinf0 = mean`` (within tol)."""
    if abs(O.Hinf1 + O.Hinf0 - mean) <= tol:
        raise ValidationError("the tail value ties with the mean barrier: infinitely many indices")
    return sum(length for length, v in O.H1.plateaus if abs(v + O.Hinf0 - mean) <= tol)


def profile(R: ReducedPotential, rtol: float = KAPPA_RTOL) -> AsymptoticProfile:
    O, swapped = _oriented(R)
    mean = 0.5 * (O.Hinf0 + O.Hinf1)
    e0 = O.Hmin0 + O.Hinf1
    e1 = O.Hmin1 + O.Hinf0
    gamma = min(mean, e0, e1)
    tol = _tol(gamma, rtol)
    kappa = c = None
    if gamma == 0.0:
        regime, weights = GAMMA_ZERO, None
    elif mean > e1 + tol:
        regime, weights = SELECT_ONE, (0.0, 1.0)
    else:
        regime = BARYCENTER
        kappa = _count_ties(O, mean, tol)
        c = 0.5 * (kappa + math.sqrt(kappa * kappa + 4.0))
        weights = (1.0 / (1.0 + c * c), c * c / (1.0 + c * c))
    if swapped and weights is not None:
        weights = (weights[1], weights[0])
    # exponents reported in the original labels
    exps = (mean, R.Hmin0 + R.Hinf1, R.Hmin1 + R.Hinf0)
    prof = AsymptoticProfile(gamma, kappa, c, swapped, regime, weights, exps)
    object.__setattr__(prof, "rates", log_scale_predictions(R, prof))
    return prof


def log_scale_predictions(R: ReducedPotential, prof: AsymptoticProfile) -> dict:
    """Predicted ``-lim (1/beta) log Q`` for lambda - 1, F, Ft and mu[0]/mu[1]."""
    g = prof.gamma
    r = {"lam1": g}
    for s in (0, 1):
        seq = R.side(s)
        r[f"F{s}"] = min(seq.minimum(), seq.tail - g)
        r[f"Ft{s}"] = min(seq.minimum(), seq.tail - 2.0 * g)
    r["mu_ratio"] = r["F0"] - r["F1"] + r["Ft1"] - r["Ft0"]
    return r


def equivalents(R: ReducedPotential, prof: AsymptoticProfile) -> dict:
    """Sharp asymptotics ``Q ~ A exp(-beta r)`` as ``name -> (log A, r)``.

    Only available in the Barycenter regime.  In the oriented labels:
    lambda - 1 ~ c e^{-beta gamma}, F0 ~ e^{beta (Hinf1 - Hinf0)/2} / c,
    Ft0 ~ e^{beta Hinf1} / c^2, F1 ~ c e^{-beta (Hinf1 - Hinf0)/2} and
    Ft1 ~ e^{beta Hinf0} / c^2.
    """
    if prof.regime != BARYCENTER:
        raise ValidationError(f"equivalents need the Barycenter regime, got {prof.regime}")
    O, swapped = _oriented(R)
    lc = math.log(prof.c)
    half = 0.5 * (O.Hinf1 - O.Hinf0)
    out = {
        "lam1": (lc, prof.gamma),
        "F0": (-lc, -half),
        "Ft0": (-2.0 * lc, -O.Hinf1),
        "F1": (lc, half),
        "Ft1": (-2.0 * lc, -O.Hinf0),
    }
    if swapped:
        out["F0"], out["F1"] = out["F1"], out["F0"]
        out["Ft0"], out["Ft1"] = out["Ft1"], out["Ft0"]
    return out


def equivalent_ratios(sp: SpectralData, prof: AsymptoticProfile) -> dict:
    """``Q / (A e^{-beta r})`` for each equivalent; all tend to 1."""
    eq = equivalents(sp.potential, prof)
    logs = {"lam1": sp.loglam1, "F0": sp.logF0, "F1": sp.logF1,
            "Ft0": sp.logFt0, "Ft1": sp.logFt1}
    return {k: math.exp(logs[k] - la + sp.beta * r) for k, (la, r) in eq.items()}


def limit_subaction(R: ReducedPotential, prof: AsymptoticProfile, nmax: int = 64) -> SubactionTable:
    """Uniform limit of ``V_beta`` on classes ``n <= nmax`` and the fixed points.

    Oriented labels: ``min{Hinf1 - gamma, inf_{k>=n} H1_k}`` on ``[0^n 1]``,
    zero on ``[1]``; identically zero when gamma = 0.
    """
    zeros = np.zeros(nmax)
    if prof.gamma == 0.0:
        return SubactionTable(zeros, zeros.copy(), 0.0, 0.0)
    O, swapped = _oriented(R)
    top = O.Hinf1 - prof.gamma
    v = np.array([min(top, O.H1.suffix_inf(n)) for n in range(1, nmax + 1)])
    if swapped:
        return SubactionTable(zeros, v, 0.0, top)
    return SubactionTable(v, zeros, top, 0.0)


def phase_grid(family, s_values, t_values, mapper=map) -> list[dict]:
    """Classify ``family(s, t)`` over a grid; rows follow input order.

    Points where the family does not produce a valid potential are kept as
    rows with ``regime = "invalid"``.
    """
    points = [(float(s), float(t)) for s in s_values for t in t_values]
    return list(mapper(_grid_row, [(family, s, t) for s, t in points]))


def _grid_row(args) -> dict:
    family, s, t = args
    row = {"s": s, "t": t}
    try:
        prof = profile(family(s, t))
    except (ValidationError, ValueError) as exc:
        row.update(regime="invalid", gamma=None, kappa=None, c=None, w0=None, w1=None,
                   error=str(exc))
        return row
    w0, w1 = prof.weights if prof.weights is not None else (None, None)
    row.update(regime=prof.regime, gamma=prof.gamma, kappa=prof.kappa, c=prof.c, w0=w0, w1=w1)
    return row


def fit_rate(betas, logs) -> float:
    """Least-squares slope of ``-log Q`` against beta."""
    betas = np.asarray(betas, float)
    logs = np.asarray(logs, float)
    return float(np.polyfit(betas, -logs, 1)[0])

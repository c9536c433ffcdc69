"""Peierls barriers, Lax-Oleinik iteration and calibrated sub-actions.

For a reduced potential the ergodic minimum is 0, attained only at the two
fixed points, so the Mather set is ``{0^inf, 1^inf}``.  Barriers from the
fixed points are explicit:

    h(0^inf, y) = 0                      for y in [0]
    h(0^inf, y) = inf_{k>=n} H0_k        for y in [1^n 0]
    h(0^inf, 1^inf) = Hinf0

and symmetrically from ``1^inf``.  Functions constant on the classes
``[0^n 1]``, ``[1^n 0]`` are stored as :class:`SubactionTable`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericFailure, ValidationError
from .potential import ReducedPotential
from .spectrum import SubactionTable, eigenfunction_table, solve_lambda, subaction_table

__all__ = [
    "BarrierTable",
    "barrier",
    "corollary_identities",
    "lax_oleinik_step",
    "solve_calibrated",
    "representation_formula",
    "boundary_table",
    "subaction_defect",
    "extrapolated_mather_values",
]

HBAR = 0.0  # ergodic minimum of a reduced potential


def _suffix_infs(seq, nmax: int) -> np.ndarray:
    return np.array([seq.suffix_inf(n) for n in range(1, nmax + 1)])


@dataclass(frozen=True)
class BarrierTable:
    """``h(0^inf, .)`` and ``h(1^inf, .)`` on classes, plus the liminf values.

    ``liminf0 = liminf_{x -> 0^inf} h(x, 0^inf)`` and ``liminf1`` likewise.
    """

    from_fix0: SubactionTable
    from_fix1: SubactionTable
    liminf0: float
    liminf1: float

    @property
    def identities(self) -> tuple[float, float, float]:
        half = 0.5 * (self.from_fix0.vFix1 + self.from_fix1.vFix0)
        return half, self.liminf0, self.liminf1

    def to_dict(self) -> dict:
        return {
            "from_fix0": self.from_fix0.to_dict(),
            "from_fix1": self.from_fix1.to_dict(),
            "liminf0": self.liminf0,
            "liminf1": self.liminf1,
            "identities": list(self.identities),
        }


def barrier(R: ReducedPotential, nmax: int = 64) -> BarrierTable:
    zeros = np.zeros(nmax)
    from0 = SubactionTable(zeros, _suffix_infs(R.H0, nmax), 0.0, R.Hinf0)
    from1 = SubactionTable(_suffix_infs(R.H1, nmax), zeros.copy(), R.Hinf1, 0.0)
    return BarrierTable(from0, from1, R.Hmin0 + R.Hinf1, R.Hmin1 + R.Hinf0)


def corollary_identities(R: ReducedPotential) -> dict:
    """The three barrier identities and the nonselection flag.

    ``min`` of the three values is gamma; the flag says both heteroclinic
    barriers between the fixed points vanish.
    """
    half = 0.5 * (R.Hinf0 + R.Hinf1)
    values = (half, R.Hmin0 + R.Hinf1, R.Hmin1 + R.Hinf0)
    return {
        "half_sum": values[0],
        "liminf_to_fix0": values[1],
        "liminf_to_fix1": values[2],
        "minimum": min(values),
        "nonselection": R.Hinf0 == 0.0 and R.Hinf1 == 0.0,
    }


def lax_oleinik_step(R: ReducedPotential, V: SubactionTable) -> SubactionTable:
    """``T[V](y) = min{V(x) + H(x) : sigma x = y}`` on classes.

    ``[0^n 1]`` has the preimages ``[0^{n+1} 1]`` (H = 0) and ``[1 0^n 1]``
    inside the class ``[10]``.  The last table entry stands for every deeper
    class, so it is updated with the tail value like a fixed point; the
    table must reach past the head for this to be exact.
    """
    nmax = V.nmax
    if nmax < R.head_length + 1:
        raise ValidationError(f"table depth {nmax} must exceed the head length {R.head_length}")
    h0 = R.H0.values(nmax)
    h1 = R.H1.values(nmax)
    v10, v01 = V.v1[0], V.v0[0]
    nxt0 = np.append(V.v0[1:], V.v0[-1])
    nxt1 = np.append(V.v1[1:], V.v1[-1])
    return SubactionTable(
        np.minimum(nxt0, v10 + h1) - HBAR,
        np.minimum(nxt1, v01 + h0) - HBAR,
        min(V.vFix0, v10 + R.Hinf1) - HBAR,
        min(V.vFix1, v01 + R.Hinf0) - HBAR,
    )


def solve_calibrated(R: ReducedPotential, V0: SubactionTable, maxiter: int = 10_000,
                     tol: float = 1e-12, normalize: bool = True) -> SubactionTable:
    """Iterate the Lax-Oleinik operator to a fixed point.

    Min-plus information travels one class per step, so convergence takes
    about ``nmax`` iterations; failure to settle raises.
    """
    V = V0
    for _ in range(maxiter):
        W = lax_oleinik_step(R, V)
        change = W.sup_distance(V)
        V = W
        if change <= tol:
            return V.normalized() if normalize else V
    raise NumericFailure(f"Lax-Oleinik iteration did not settle in {maxiter} steps")


def representation_formula(R: ReducedPotential, m0: float, m1: float,
                           nmax: int = 64) -> SubactionTable:
    """``min{m0 + h(0^inf, y), m1 + h(1^inf, y)}`` over the Mather set."""
    B = barrier(R, nmax)
    a, b = B.from_fix0.shifted(m0), B.from_fix1.shifted(m1)
    return SubactionTable(np.minimum(a.v0, b.v0), np.minimum(a.v1, b.v1),
                          min(a.vFix0, b.vFix0), min(a.vFix1, b.vFix1))


def boundary_table(R: ReducedPotential, m0: float, m1: float, nmax: int = 64,
                   big: float | None = None) -> SubactionTable:
    """Start for Lax-Oleinik: Mather values at the fixed points and deep classes.

    Every other class starts at ``big`` (default: well above any barrier).
    """
    if big is None:
        big = 10.0 * (R.H0.maximum() + R.H1.maximum() + abs(m0) + abs(m1) + 1.0)
    v0 = np.full(nmax, big)
    v1 = np.full(nmax, big)
    v0[-1], v1[-1] = m0, m1
    return SubactionTable(v0, v1, m0, m1)


def subaction_defect(R: ReducedPotential, V: SubactionTable) -> float:
    """``max (V(sigma x) - V(x) - H(x))`` over all class transitions.

    Nonpositive (up to rounding) exactly when V is a sub-action.
    """
    nmax = V.nmax
    h0, h1 = R.H0.values(nmax), R.H1.values(nmax)
    worst = -math.inf
    # [0^{n+1} 1] -> [0^n 1] with H = 0, and [1 0^n 1] -> [0^n 1]
    worst = max(worst, np.max(V.v0[:-1] - V.v0[1:]), np.max(V.v0 - V.v1[0] - h1))
    worst = max(worst, np.max(V.v1[:-1] - V.v1[1:]), np.max(V.v1 - V.v0[0] - h0))
    worst = max(worst, V.vFix0 - V.v1[0] - R.Hinf1, V.vFix1 - V.v0[0] - R.Hinf0)
    return float(worst)


def extrapolated_mather_values(R: ReducedPotential, betas=(100.0, 200.0)) -> tuple[float, float]:
    """Limits of ``V_beta`` at the fixed points by Richardson extrapolation.

    ``V_beta(fix) = V_inf(fix) + C/beta`` up to exponentially small terms,
    so two temperatures remove the ``1/beta`` correction.
    """
    b1, b2 = betas
    vals = []
    for b in betas:
        sp = solve_lambda(R, b)
        V = subaction_table(R, sp, eigenfunction_table(R, sp, 1))
        vals.append((V.vFix0, V.vFix1))
    (a0, a1), (c0, c1) = vals
    return ((b2 * c0 - b1 * a0) / (b2 - b1), (b2 * c1 - b1 * a1) / (b2 - b1))

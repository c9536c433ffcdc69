"""Transfer-operator eigendata of a reduced double-well potential.

The Perron eigenvalue lambda solves ``F0(lambda) * F1(lambda) = 1``.  Once
it is known everything else is explicit:

* the eigenfunction Phi is constant on the classes ``[0^n 1]``, ``[1^n 0]``
  and equal to tails of the fundamental series,
* the eigenmeasure nu has a locally constant Jacobian, so cylinder masses
  follow from a short recursion on the word,
* the Gibbs measure is ``Phi * nu`` normalized so that ``mu[0] + mu[1] = 1``.

All masses are kept in logs relative to ``nu[01] = 1`` and ``Phi(01) = 1``
(so ``Phi(10) = F0`` and ``nu[10] = F1``) until the final normalization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import expit

from .errors import NumericFailure, ValidationError
from .potential import ReducedPotential
from .series import eval_F, log_lambda, log_series

__all__ = [
    "SpectralData",
    "CylinderTables",
    "SubactionTable",
    "solve_lambda",
    "eigenfunction_table",
    "eigenmeasure_cylinder",
    "gibbs_cylinder",
    "subaction_table",
    "subaction_variation",
    "DEFAULT_NMAX",
]

DEFAULT_NMAX = 64
MAX_ITER = 500


@dataclass(frozen=True)
class SpectralData:
    """Solution of the characteristic equation at one inverse temperature."""

    beta: float
    loglam1: float
    logF0: float
    logF1: float
    logFt0: float
    logFt1: float
    residual: float
    iterations: int
    converged: bool
    potential: ReducedPotential = field(repr=False, compare=False)
    # log(lambda - 1) for the completed potential, limit approximations only
    loglam1_bracket: tuple[float, float] | None = None

    @property
    def lam_minus_1(self) -> float:
        return math.exp(self.loglam1)

    @property
    def lam(self) -> float:
        return 1.0 + math.exp(self.loglam1)

    @property
    def loglam(self) -> float:
        return log_lambda(self.loglam1)

    @property
    def log_mu_ratio(self) -> float:
        """``log(mu[0] / mu[1]) = log(F0 Ft1 / (F1 Ft0))``."""
        return self.logF0 + self.logFt1 - self.logF1 - self.logFt0

    @property
    def mu0(self) -> float:
        return float(expit(self.log_mu_ratio))

    @property
    def mu1(self) -> float:
        return float(expit(-self.log_mu_ratio))

    def to_dict(self) -> dict:
        out = {
            "beta": self.beta,
            "loglam1": self.loglam1,
            "logF0": self.logF0,
            "logF1": self.logF1,
            "logFt0": self.logFt0,
            "logFt1": self.logFt1,
            "residual": self.residual,
            "iterations": self.iterations,
            "converged": self.converged,
            "mu0": self.mu0,
            "mu1": self.mu1,
            "log_mu_ratio": self.log_mu_ratio,
        }
        if self.loglam1_bracket is not None:
            out["loglam1_bracket"] = list(self.loglam1_bracket)
        return out


def _char(R: ReducedPotential, beta: float, t: float):
    s0 = eval_F(R, 0, beta, t)
    s1 = eval_F(R, 1, beta, t)
    return s0.logF + s1.logF, s0, s1


def _solve_t(R: ReducedPotential, beta: float, tol: float):
    """Root of ``g(t) = log F0 + log F1`` (decreasing) with safeguarded Newton."""
    hmax = R.H0.maximum() + R.H1.maximum()
    lo, hi = -beta * hmax / 2.0 - 1.0, 0.0
    g_lo = _char(R, beta, lo)[0]
    g_hi, s0, s1 = _char(R, beta, hi)
    if not (g_lo > 0.0):
        raise NumericFailure(f"characteristic function not positive at t={lo}: {g_lo}")
    if g_hi > 0.0:
        raise NumericFailure(f"characteristic function positive at lambda = 2: {g_hi}")
    if abs(g_hi) <= tol:
        return hi, g_hi, s0, s1, 0, True

    t = 0.5 * (lo + hi)
    best = None
    for it in range(1, MAX_ITER + 1):
        g, s0, s1 = _char(R, beta, t)
        if best is None or abs(g) < abs(best[1]):
            best = (t, g, s0, s1)
        if abs(g) <= tol:
            return t, g, s0, s1, it, True
        if g > 0:
            lo = t
        else:
            hi = t
        # dg/dt = -(e^t / lambda) (Ft0/F0 + Ft1/F1)
        log_slope = t - log_lambda(t) + float(np.logaddexp(s0.logFtilde - s0.logF,
                                                           s1.logFtilde - s1.logF))
        step = t + math.copysign(math.exp(min(math.log(abs(g)) - log_slope, 700.0)), g)
        if lo < step < hi:
            t = step
        else:
            t = 0.5 * (lo + hi)
        if hi - lo <= 1e-15 * max(1.0, abs(t)):
            break
    t, g, s0, s1 = best
    return t, g, s0, s1, MAX_ITER, False


def solve_lambda(R: ReducedPotential, beta: float, tol: float = 1e-12) -> SpectralData:
    """Perron eigenvalue at inverse temperature ``beta``.

    Works in ``t = log(lambda - 1)``: bisection on the a-priori bracket
    ``[-beta (max H0 + max H1)/2 - 1, 0]`` with Newton steps accepted only
    inside the current bracket.  ``converged`` is False when ``tol`` was not
    reached; the best iterate is returned in that case.
    """
    if not (beta > 0 and math.isfinite(beta)):
        raise ValidationError("beta must be positive and finite")
    if tol < 1e-14:
        raise ValidationError("tol must be >= 1e-14")
    t, g, s0, s1, it, ok = _solve_t(R, beta, tol)
    bracket = None
    if R.limit_approximation:
        tc = _solve_t(R.completed(), beta, tol)[0]
        bracket = (min(t, tc), max(t, tc))
    return SpectralData(beta, t, s0.logF, s1.logF, s0.logFtilde, s1.logFtilde,
                        abs(g), it, ok, R, bracket)


# -- eigenfunction ---------------------------------------------------------

def _log_phi_raw(sp: SpectralData, side: int, n: int) -> float:
    """log Phi on the class ``[s^n (1-s)]`` with ``Phi(01) = 1``.

    Phi(0^n 1) = Phi(10) * lambda^{n-1} * sum_{k>=n} exp(-beta H1_k) lambda^{-k}
    and symmetrically with H0 and Phi(01) = 1.
    """
    R = sp.potential
    other = R.side(1 - side)
    base = sp.logF0 if side == 0 else 0.0
    return base + (n - 1) * sp.loglam + log_series(other, sp.beta, sp.loglam1, start=n)


def _log_phi_fix_raw(sp: SpectralData, side: int) -> float:
    """log Phi at ``s^inf``: ``exp(-beta H_inf^{1-s}) / (lambda - 1)`` times Phi(other)."""
    R = sp.potential
    base = sp.logF0 if side == 0 else 0.0
    return base - sp.beta * R.side(1 - side).tail - sp.loglam1


def _log_phi_max_raw(sp: SpectralData) -> float:
    """Exact ``log max Phi`` over the whole shift.

    On each plateau of the opposite sequence n -> Phi(s^n .) follows an
    affine contraction toward a fixed value, so it is monotone there and the
    maximum sits at a plateau endpoint or at a fixed point.
    """
    cands = [_log_phi_fix_raw(sp, 0), _log_phi_fix_raw(sp, 1)]
    for side in (0, 1):
        for lo, hi, _ in sp.potential.side(1 - side).segments():
            cands.append(_log_phi_raw(sp, side, lo + 1))
            cands.append(_log_phi_raw(sp, side, hi))
        cands.append(_log_phi_raw(sp, side, sp.potential.side(1 - side).head_length + 1))
    return max(cands)


@dataclass(frozen=True)
class CylinderTables:
    """Normalized eigenfunction (logs, ``max Phi = 1``) on classes ``n <= nmax``.

    ``logphi0[n-1] = log Phi(0^n 1)`` and ``logphi1[n-1] = log Phi(1^n 0)``.
    ``log_phi_max`` is the log of the raw maximum that was divided out;
    ``logZ`` is ``log mu~[0] + mu~[1]`` in the raw normalization.
    """

    nmax: int
    logphi0: np.ndarray
    logphi1: np.ndarray
    logphi_fix0: float
    logphi_fix1: float
    log_phi_max: float
    logZ: float
    logmu01: float

    def logphi(self, side: int, n: int | None = None) -> float:
        """log Phi on ``[s^n .]``; ``n=None`` gives the fixed point ``s^inf``."""
        if n is None:
            return self.logphi_fix1 if side else self.logphi_fix0
        arr = self.logphi1 if side else self.logphi0
        return float(arr[n - 1])


def eigenfunction_table(R: ReducedPotential, spectral: SpectralData,
                        nmax: int = DEFAULT_NMAX) -> CylinderTables:
    """Eigenfunction on classes up to ``nmax`` and at the two fixed points."""
    sp = spectral
    if nmax < 1:
        raise ValidationError("nmax must be >= 1")
    raw0 = np.array([_log_phi_raw(sp, 0, n) for n in range(1, nmax + 1)])
    raw1 = np.array([_log_phi_raw(sp, 1, n) for n in range(1, nmax + 1)])
    # the stored values join the candidates so rounding cannot push max Phi above 1
    top = max(_log_phi_max_raw(sp), float(raw0.max()), float(raw1.max()))
    phi0, phi1 = raw0 - top, raw1 - top
    fix0 = _log_phi_fix_raw(sp, 0) - top
    fix1 = _log_phi_fix_raw(sp, 1) - top
    logZ = float(np.logaddexp(sp.logF0 + sp.logFt1, sp.logF1 + sp.logFt0))
    # mu[01] = Phi(01) nu[01] / Z with both raw values equal to 1
    return CylinderTables(nmax, phi0, phi1, fix0, fix1, top, logZ, -logZ)


# -- eigenmeasure and Gibbs measure ------------------------------------------

def _check_word(w: str) -> None:
    if not w:
        raise ValidationError("empty cylinder word")
    if set(w) - {"0", "1"}:
        raise ValidationError(f"cylinder word must be binary, got {w!r}")


def _leading_run(w: str) -> int:
    return len(w) - len(w.lstrip(w[0]))


def eigenmeasure_cylinder(R: ReducedPotential, spectral: SpectralData, w: str) -> float:
    """``log nu[w]`` relative to ``nu[01] = 1`` (then ``nu[10] = F1``)."""
    _check_word(w)
    sp = spectral
    beta, ll = sp.beta, sp.loglam
    acc = 0.0
    while True:
        n = _leading_run(w)
        a = int(w[0])
        if n == len(w):
            # w = a^n: sum over [a^k b], k >= n, of lambda^{-(k-1)} nu[ab]
            base = 0.0 if a == 0 else sp.logF1
            return acc + base - (n - 2) * ll - sp.loglam1
        if n > 1:
            # H = 0 on [aa]
            acc -= (n - 1) * ll
            w = w[n - 1:]
            continue
        rest = w[1:]
        m = _leading_run(rest)
        if m == len(rest):
            # w = a b^m, run not closed: sum_{k>=m} nu[a b^k a]
            if m == 1:
                return acc + (0.0 if a == 0 else sp.logF1)
            base = sp.logF1 if a == 0 else 0.0
            return acc + base + log_series(R.side(a), beta, sp.loglam1, start=m)
        # H is constant (= H^a_m) on [a b^m a]
        acc += -beta * R.side(a).value(m) - ll
        w = rest


def _log_mu_raw(R: ReducedPotential, sp: SpectralData, w: str) -> float:
    n = _leading_run(w)
    a = int(w[0])
    if n == len(w):
        # mu~[a^n] = Phi(other) nu[...] sum_{j>=n} (j-n+1) exp(-beta H_j) lambda^{-j}
        base = sp.logF0 if a == 0 else sp.logF1
        return base + log_series(R.side(1 - a), sp.beta, sp.loglam1, start=n, offset=n - 1)
    return _log_phi_raw(sp, a, n) + eigenmeasure_cylinder(R, sp, w)


def gibbs_cylinder(R: ReducedPotential, spectral: SpectralData,
                   tables: CylinderTables | None, w: str, log: bool = False) -> float:
    """Gibbs mass ``mu[w]`` (its log when ``log=True``).

    ``tables`` only supplies the normalization and may be None.
    """
    _check_word(w)
    sp = spectral
    logZ = tables.logZ if tables is not None else float(
        np.logaddexp(sp.logF0 + sp.logFt1, sp.logF1 + sp.logFt0))
    val = _log_mu_raw(R, sp, w) - logZ
    return val if log else math.exp(val)


# -- sub-action --------------------------------------------------------------

@dataclass(frozen=True)
class SubactionTable:
    """Sub-action on classes: ``v0[n-1]`` on ``[0^n 1]``, ``v1[n-1]`` on ``[1^n 0]``."""

    v0: np.ndarray
    v1: np.ndarray
    vFix0: float
    vFix1: float

    @property
    def nmax(self) -> int:
        return len(self.v0)

    def minimum(self) -> float:
        return float(min(self.v0.min(), self.v1.min(), self.vFix0, self.vFix1))

    def maximum(self) -> float:
        return float(max(self.v0.max(), self.v1.max(), self.vFix0, self.vFix1))

    def value(self, side: int, n: int | None = None) -> float:
        if n is None:
            return self.vFix1 if side else self.vFix0
        arr = self.v1 if side else self.v0
        return float(arr[min(n, len(arr)) - 1])

    def shifted(self, c: float) -> "SubactionTable":
        return SubactionTable(self.v0 + c, self.v1 + c, self.vFix0 + c, self.vFix1 + c)

    def normalized(self) -> "SubactionTable":
        return self.shifted(-self.minimum())

    def sup_distance(self, other: "SubactionTable") -> float:
        n = min(self.nmax, other.nmax)
        d = max(np.max(np.abs(self.v0[:n] - other.v0[:n])),
                np.max(np.abs(self.v1[:n] - other.v1[:n])),
                abs(self.vFix0 - other.vFix0), abs(self.vFix1 - other.vFix1))
        return float(d)

    def to_dict(self) -> dict:
        return {"v0": self.v0.tolist(), "v1": self.v1.tolist(),
                "vFix0": self.vFix0, "vFix1": self.vFix1}


def subaction_table(R: ReducedPotential, spectral: SpectralData,
                    tables: CylinderTables) -> SubactionTable:
    """``V_beta = -(1/beta) log Phi`` with ``max Phi = 1``, so ``min V = 0``."""
    b = spectral.beta
    # adding 0.0 turns -0.0 into 0.0
    return SubactionTable(-tables.logphi0 / b + 0.0, -tables.logphi1 / b + 0.0,
                          -tables.logphi_fix0 / b + 0.0, -tables.logphi_fix1 / b + 0.0)


def subaction_variation(V: SubactionTable, n: int) -> float:
    """``var(V, n)`` for a class-constant V whose table reaches past the head.

    Only the cylinders ``[0^n]`` and ``[1^n]`` meet several classes.
    """
    out = 0.0
    for arr, fix in ((V.v0, V.vFix0), (V.v1, V.vFix1)):
        vals = np.append(arr[n - 1:], fix)
        out = max(out, float(vals.max() - vals.min()))
    return out

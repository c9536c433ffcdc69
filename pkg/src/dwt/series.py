"""Log-space evaluation of the fundamental series of a reduced potential.

For a side s and lambda > 1,

    F^s(lambda)  = sum_{k>=1} lambda^{-k} exp(-beta H^s_k)
    Ft^s(lambda) = sum_{k>=1} k lambda^{-k} exp(-beta H^s_k)

Quantities are carried as natural logs (``-inf`` stands for zero) and the
spectral parameter as ``t = log(lambda - 1)``, because lambda - 1 decays
like exp(-beta * gamma) and underflows long before the ratios of interest
lose meaning.  Every plateau contributes a closed-form geometric block, so
no truncation error is involved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericFailure
from .potential import PlateauSeq, ReducedPotential

__all__ = [
    "SeriesResult",
    "log_lambda",
    "log_log_lambda",
    "log1mexp_of_log",
    "log_series",
    "geometric_tails",
    "eval_F",
    "eval_F_derivative",
]


def log_lambda(t: float) -> float:
    """``log(lambda)`` for ``lambda = 1 + e^t``."""
    return float(np.logaddexp(0.0, t))


def log_log_lambda(t: float) -> float:
    """``log(log(lambda))``, accurate even when ``e^t`` underflows."""
    if t < -30.0:
        # log(1 + x) = x (1 - x/2 + ...), so log log lambda = t - e^t/2 + O(e^{2t})
        return t - 0.5 * math.exp(t)
    return math.log(math.log1p(math.exp(t)))


def log1mexp_of_log(lx: float) -> float:
    """``log(1 - exp(-x))`` given ``lx = log(x)``, x > 0."""
    if lx < -30.0:
        return lx - 0.5 * math.exp(lx)
    x = math.exp(lx)
    if x < math.log(2.0):
        return math.log(-math.expm1(-x))
    return math.log1p(-math.exp(-x))


def _phi(x: float) -> float:
    """``1/x - 1/expm1(x)``: mean of a truncated geometric law, in (0, 1/2]."""
    if x < 1e-2:
        x2 = x * x
        return 0.5 - x / 12.0 + x * x2 / 720.0 - x2 * x2 * x / 30240.0
    if x > 50.0:
        return 1.0 / x
    return 1.0 / x - 1.0 / math.expm1(x)


def _block_log(lo: int, length: float, t: float, lu: float, offset: float | None) -> float:
    """log of ``sum_{k=lo+1}^{lo+length} w_k lambda^{-k}``; ``length`` may be inf.

    ``w_k = 1`` when ``offset`` is None, else ``w_k = k - offset`` (must be > 0).
    """
    u = math.exp(lu)
    base = -lo * u - t
    if math.isinf(length):
        if offset is None:
            return base
        return base + float(np.logaddexp(math.log(lo - offset + 1.0), -t))
    llen = math.log(length)
    base += log1mexp_of_log(llen + lu)
    if offset is None:
        return base
    # mean of j over j = 1..L with weights lambda^{-j}
    x = math.exp(llen + lu)
    scaled = math.exp(-lu) if x > 50.0 else length * _phi(x)  # L * phi(L u)
    mean = 1.0 - _phi(u) + scaled
    return base + math.log(lo - offset + mean)


def log_series(seq: PlateauSeq, beta: float, t: float, start: int = 1,
               offset: float | None = None, stop: int | None = None) -> float:
    """log of ``sum_{start<=k<=stop} w_k exp(-beta seq[k]) lambda^{-k}``.

    ``stop=None`` sums to infinity.  ``w_k = 1`` by default and
    ``w_k = k - offset`` otherwise; ``offset`` must be smaller than
    ``start`` so every weight is positive.
    """
    if not math.isfinite(t):
        raise NumericFailure("log(lambda - 1) must be finite: the tail diverges at lambda = 1")
    if offset is not None and offset >= start:
        raise ValueError("offset must be smaller than start")
    end = math.inf if stop is None else stop
    if end < start:
        return -math.inf
    lu = log_log_lambda(t)
    terms = []
    for lo, hi, value in seq.segments():
        lo, hi = max(lo, start - 1), min(hi, end)
        if hi <= lo:
            continue
        terms.append(-beta * value + _block_log(lo, hi - lo, t, lu, offset))
    lo = max(seq.head_length, start - 1)
    if end > lo:
        terms.append(-beta * seq.tail + _block_log(lo, end - lo, t, lu, offset))
    if not terms:
        return -math.inf
    return float(np.logaddexp.reduce(terms))


def geometric_tails(loglam1: float, N: int) -> tuple[float, float]:
    """Logs of ``sum_{k>N} lambda^{-k}`` and ``sum_{k>N} k lambda^{-k}``.

    Closed forms ``1/(lambda^N (lambda-1))`` and
    ``(N(lambda-1) + lambda)/(lambda^N (lambda-1)^2)``, computed through
    ``N log1p(lambda - 1)`` so lambda^N is never formed.
    """
    if loglam1 == -math.inf or not math.isfinite(loglam1):
        raise NumericFailure("geometric tail diverges at lambda = 1")
    if N < 0:
        raise ValueError("N must be >= 0")
    lu = log_log_lambda(loglam1)
    return (_block_log(N, math.inf, loglam1, lu, None),
            _block_log(N, math.inf, loglam1, lu, 0.0))


@dataclass(frozen=True)
class SeriesResult:
    """``log F`` and ``log Ft`` for one side at one (beta, lambda).

    ``bracket`` is set for limit approximations: ``(lo, hi)`` bounds log F
    over every completion whose truncated levels lie in [0, trunc_level].
    """

    logF: float
    logFtilde: float
    head_terms: int
    bracket: tuple[float, float] | None = None


def eval_F(R: ReducedPotential, side: int, beta: float, loglam1: float) -> SeriesResult:
    """Evaluate ``F^side`` and ``Ft^side`` at ``lambda = 1 + exp(loglam1)``."""
    seq = R.side(side)
    logF = log_series(seq, beta, loglam1)
    logFt = log_series(seq, beta, loglam1, offset=0.0)
    bracket = None
    if R.limit_approximation and seq.tail == 0:
        low = log_series(R.completed().side(side), beta, loglam1)
        bracket = (low, logF)
    return SeriesResult(logF, logFt, seq.head_length, bracket)


def eval_F_derivative(R: ReducedPotential, side: int, beta: float, loglam1: float) -> float:
    """``log|dF/dlambda|``; the derivative itself is ``-Ft/lambda < 0``."""
    return log_series(R.side(side), beta, loglam1, offset=0.0) - log_lambda(loglam1)

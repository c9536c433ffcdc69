"""Independent ground truth from finite-range truncations.

Freezing both sequences at index ``m - 1`` gives a potential that depends
on ``m + 1`` coordinates.  Its transfer operator is a ``2^m x 2^m``
nonnegative matrix, and the Gibbs measure is the Markov measure built from
the Perron vectors.  Nothing here uses the fundamental series.

At low temperature ``lambda - 1`` is far below machine epsilon relative to
lambda, so the Perron root is found through the Schur complement onto the
two constant words ``0^m`` and ``1^m`` (each carries a self-loop of weight
exactly 1): ``lambda - 1`` is the spectral radius of a 2 x 2 matrix that is
computed to full relative accuracy.  Plain power iteration is also provided
for high temperatures.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import NumericFailure, ValidationError
from .potential import PlateauSeq, ReducedPotential

__all__ = [
    "TruncatedPotential",
    "truncate",
    "OracleResult",
    "transfer_matrix",
    "transfer_matrix_gibbs",
    "power_iteration",
    "brute_force_barrier",
    "brute_force_liminf",
    "MAX_DEPTH",
]

MAX_DEPTH = 14
PATTERN_BUDGET = 1_000_000


@dataclass(frozen=True)
class TruncatedPotential:
    """Depth-m truncation: ``H_n`` replaced by ``Hinf`` for ``n >= m - 1``.

    ``reduced`` is the same potential in plateau form, so the analytic
    solver can be run on exactly the same object.
    """

    depth: int
    reduced: ReducedPotential

    def energy(self, word: str) -> float:
        """Value on the cylinder of an (m+1)-word."""
        if len(word) != self.depth + 1:
            raise ValidationError(f"need a word of length {self.depth + 1}")
        a, b = word[0], word[1]
        if a == b:
            return 0.0
        rest = word[1:]
        run = len(rest) - len(rest.lstrip(b))
        return self.reduced.side(int(a)).value(run)

    def energies(self) -> np.ndarray:
        """``h[i]`` for the (m+1)-word with binary value i (first symbol high)."""
        m = self.depth
        out = np.empty(2 ** (m + 1))
        for i in range(2 ** (m + 1)):
            out[i] = self.energy(format(i, f"0{m + 1}b"))
        return out


def truncate(R: ReducedPotential, m: int) -> TruncatedPotential:
    if not 2 <= m <= MAX_DEPTH:
        raise ValidationError(f"depth must lie in [2, {MAX_DEPTH}]")

    def freeze(s: PlateauSeq) -> PlateauSeq:
        return PlateauSeq.from_values(s.values(m - 2), s.tail).trimmed()

    return TruncatedPotential(m, ReducedPotential(freeze(R.H0), freeze(R.H1), R.trunc_level))


def transfer_matrix(T: TruncatedPotential, beta: float) -> np.ndarray:
    """``M[u, v] = exp(-beta h(u.b))`` when ``v`` is ``u`` shifted by one symbol b."""
    m = T.depth
    n = 2 ** m
    h = T.energies()
    M = np.zeros((n, n))
    u = np.arange(n)
    for b in (0, 1):
        v = ((u << 1) & (n - 1)) | b
        M[u, v] = np.exp(-beta * h[(u << 1) | b])
    return M


@dataclass(frozen=True)
class OracleResult:
    beta: float
    lam_minus_1: float
    left: np.ndarray
    right: np.ndarray
    M: np.ndarray
    depth: int
    iterations: int = 0

    @property
    def lam(self) -> float:
        return 1.0 + self.lam_minus_1

    def mu(self, w: str) -> float:
        """Markov-measure mass of the cylinder ``[w]``."""
        m = self.depth
        if not w or set(w) - {"0", "1"}:
            raise ValidationError(f"bad cylinder word {w!r}")
        norm = float(self.left @ self.right)
        if len(w) <= m:
            lo = int(w, 2) << (m - len(w))
            hi = lo + 2 ** (m - len(w))
            return float(self.left[lo:hi] @ self.right[lo:hi]) / norm
        states = [int(w[i:i + m], 2) for i in range(len(w) - m + 1)]
        val = self.left[states[0]]
        for a, b in zip(states, states[1:]):
            val *= self.M[a, b] / self.lam
        return float(val * self.right[states[-1]] / norm)


def _two_by_two_perron(K: np.ndarray):
    """Perron root and vectors of a positive 2x2 matrix without cancellation.

    With x = rho - a and y = rho - d one has x y = b c, and the larger of
    the two is a sum of nonnegative terms.
    """
    a, b = K[0]
    c, d = K[1]
    sq = math.sqrt(0.25 * (a - d) ** 2 + b * c)
    if a >= d:
        y = 0.5 * (a - d) + sq
        x = b * c / y if y > 0 else 0.0
    else:
        x = 0.5 * (d - a) + sq
        y = b * c / x
    rho = a + x
    right = np.array([b, x]) if b > 0 else np.array([y, c])
    left = np.array([c, x]) if c > 0 else np.array([y, b])
    return rho, left, right


def _schur(M: np.ndarray, beta: float, depth: int) -> OracleResult:
    n = M.shape[0]
    S = np.array([0, n - 1])
    Tm = np.ones(n, bool)
    Tm[S] = False
    Tidx = np.flatnonzero(Tm)
    MST, MTS, MTT = M[np.ix_(S, Tidx)], M[np.ix_(Tidx, S)], M[np.ix_(Tidx, Tidx)]
    I = np.eye(len(Tidx))
    rho_tt = max(abs(np.linalg.eigvals(MTT))) if len(Tidx) else 0.0

    def K(delta):
        return MST @ np.linalg.solve((1.0 + delta) * I - MTT, MTS)

    def f(s):
        return math.log(_two_by_two_perron(K(math.exp(s)))[0]) - s

    # lambda exceeds the spectral radius of the T block
    s_lo = math.log(max(rho_tt - 1.0, 0.0) * (1 + 1e-12) + 1e-300) if rho_tt > 1 else -700.0
    s_hi = math.log(2.0)
    while f(s_lo) <= 0:
        s_lo = 0.5 * (s_lo + (math.log(rho_tt - 1.0) if rho_tt > 1 else -750.0))
        if s_lo < -745:
            raise NumericFailure("cannot bracket the Perron root")
    if f(s_hi) >= 0:
        raise NumericFailure("Perron root beyond lambda = 3")
    s = brentq(f, s_lo, s_hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=500)
    delta = math.exp(s)
    lam = 1.0 + delta
    Ks = K(delta)
    _, lS, rS = _two_by_two_perron(Ks)
    A = lam * I - MTT
    rT = np.linalg.solve(A, MTS @ rS)
    lT = np.linalg.solve(A.T, MST.T @ lS)
    left = np.empty(n)
    right = np.empty(n)
    left[S], right[S] = lS, rS
    left[Tidx], right[Tidx] = lT, rT
    return OracleResult(beta, delta, left, right, M, depth)


def power_iteration(M: np.ndarray, tol: float = 1e-13, maxiter: int = 1_000_000):
    """Perron root and left/right vectors from a uniform start."""
    n = M.shape[0]
    r = np.full(n, 1.0 / n)
    l = np.full(n, 1.0 / n)
    lam = 0.0
    for it in range(1, maxiter + 1):
        r2 = M @ r
        l2 = l @ M
        lam_new = r2.sum() / r.sum()
        r2 /= r2.sum()
        l2 /= l2.sum()
        done = (np.max(np.abs(r2 - r)) <= tol * np.max(r2)
                and np.max(np.abs(l2 - l)) <= tol * np.max(l2)
                and abs(lam_new - lam) <= tol * lam_new)
        r, l, lam = r2, l2, lam_new
        if done:
            return lam, l, r, it
    raise NumericFailure(f"power iteration did not converge in {maxiter} iterations")


def transfer_matrix_gibbs(T: TruncatedPotential, beta: float, wlist=(),
                          method: str = "schur"):
    """Perron data of the truncated potential and the masses of ``wlist``.

    Returns ``(result, {w: mu[w]})``; ``result.lam_minus_1`` is lambda - 1.
    ``method="power"`` uses plain power iteration (only sensible when
    lambda - 1 is not tiny).
    """
    if not beta > 0:
        raise ValidationError("beta must be positive")
    M = transfer_matrix(T, beta)
    if method == "schur":
        res = _schur(M, beta, T.depth)
    elif method == "power":
        lam, l, r, it = power_iteration(M)
        res = OracleResult(beta, lam - 1.0, l, r, M, T.depth, it)
    else:
        raise ValidationError(f"unknown method {method!r}")
    return res, {w: res.mu(w) for w in wlist}


# -- brute-force barriers -----------------------------------------------------

def _pattern_cost(R: ReducedPotential, runs: list[tuple[int, float]]) -> float:
    """Energy paid along consecutive runs ``(symbol, length)``.

    A run of symbol b and length L entered from the other symbol a costs
    ``H^a_L``; an infinite length costs ``Hinf^a``.
    """
    cost = 0.0
    for (a, _), (b, L) in zip(runs, runs[1:]):
        seq = R.side(a)
        cost += seq.tail if math.isinf(L) else seq.value(int(L))
    return cost


def _merge(runs):
    out = []
    for s, L in runs:
        if out and out[-1][0] == s:
            out[-1] = (s, out[-1][1] + L)
        else:
            out.append((s, L))
    return out


def brute_force_barrier(R: ReducedPotential, source: int, target,
                        max_blocks: int = 4, max_block_len: int = 6,
                        budget: int = PATTERN_BUDGET) -> tuple[float, float]:
    """Cheapest passage from the fixed point ``source^inf`` into ``target``.

    ``target`` is ``(s, n)`` for the class ``[s^n (1-s)]`` or ``(s, None)``
    for the fixed point ``s^inf``.  Enumerates intermediate patterns of at
    most ``max_blocks`` alternating blocks of length at most
    ``max_block_len``.  Returns ``(value, bound)``: the true barrier lies in
    ``[value - bound, value]``.  The bound is 0 once longer blocks cannot
    help (``max_block_len`` beyond the head) and extra blocks cost more
    than ``value``.
    """
    total = sum(max_block_len ** r for r in range(max_blocks + 1))
    if total > budget:
        raise NumericFailure(f"{total} patterns exceed the budget of {budget}")
    s, n = target
    if n is None:
        tail_runs = [(s, math.inf)]
    else:
        tail_runs = [(s, n), (1 - s, 1)]
    best = math.inf
    for r in range(max_blocks + 1):
        for lengths in itertools.product(range(1, max_block_len + 1), repeat=r):
            runs = [(source, math.inf)]
            sym = 1 - source
            for L in lengths:
                runs.append((sym, L))
                sym = 1 - sym
            runs = _merge(runs + tail_runs)
            # the last run only closes the target class and is not charged
            charged = runs if n is None else runs[:-1]
            best = min(best, _pattern_cost(R, charged))
    hmin = min(R.Hmin0, R.Hmin1)
    exhaustive_len = max_block_len > R.head_length
    if exhaustive_len and (max_blocks + 1) * hmin >= best:
        return best, 0.0
    if exhaustive_len:
        return best, best - (max_blocks + 1) * hmin
    return best, best


def brute_force_liminf(R: ReducedPotential, fix: int, max_len: int = 64) -> float:
    """``min_n`` energy of ``x = fix^k (1-fix)^n fix^inf`` on its way to ``fix^inf``."""
    other = 1 - fix
    best = math.inf
    for n in range(1, max_len + 1):
        runs = [(fix, 1), (other, n), (fix, math.inf)]
        best = min(best, _pattern_cost(R, runs))
    return best

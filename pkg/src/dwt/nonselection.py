"""A reduced potential whose Gibbs measures swing between the two wells.

Both sequences are nonincreasing staircases that drop to zero: ``H0`` takes
the level ``eps_k`` on ``p_{k-1} < n <= p_k`` and ``H1`` on
``q_{k-1} < n <= q_k``.  The drops alternate, ``q_k >> p_k`` for even k and
``p_k >> q_k`` for odd k, and at the inverse temperature ``beta_k`` every
level below ``eps_k`` is invisible while ``eps_k`` itself is prohibitive.
The measure then favours ``[0]`` at even stages and ``[1]`` at odd ones.

The levels of the original construction, ``exp(-k^(2k+1))``, underflow
immediately; :func:`desk_schedule` gives a floating-point sized schedule
with the same qualitative constraints.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .errors import BracketTooWide, ValidationError
from .potential import PlateauSeq, ReducedPotential
from .series import log_log_lambda, log_series
from .spectrum import solve_lambda

__all__ = [
    "Stage",
    "StageParams",
    "Thresholds",
    "RuleReport",
    "ExampleBuild",
    "Diagnostics",
    "check_order",
    "build_example",
    "check_rules",
    "diagnostics",
    "oscillation_experiment",
    "desk_schedule",
    "figure_schedule",
    "load_schedule",
]

# integers beyond this are not exactly representable as doubles
EXACT_INT = 2 ** 53
TINY = 1e-300


@dataclass(frozen=True)
class Stage:
    p: int
    q: int
    eps: float
    beta: float


@dataclass(frozen=True)
class StageParams:
    """Stages ``(p_k, q_k, eps_k, beta_k)`` and the first truncated level.

    ``eps_trunc`` stands for every level past the last stage; the built
    potential has tail 0 and brackets its answers with ``eps_trunc``.
    """

    stages: tuple[Stage, ...]
    eps_trunc: float

    @property
    def K(self) -> int:
        return len(self.stages)

    def eps_next(self, k: int) -> float:
        return self.stages[k + 1].eps if k + 1 < self.K else self.eps_trunc

    def to_dict(self) -> dict:
        return {"stages": [asdict(s) for s in self.stages], "eps_trunc": self.eps_trunc}

    @classmethod
    def from_dict(cls, data: dict) -> "StageParams":
        try:
            stages = tuple(Stage(int(s["p"]), int(s["q"]), float(s["eps"]), float(s["beta"]))
                           for s in data["stages"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"malformed schedule: {exc}") from exc
        if not stages:
            raise ValidationError("schedule has no stages")
        trunc = data.get("eps_trunc")
        if trunc is None:
            # one more step of the same geometric ratio
            e = [s.eps for s in stages]
            trunc = e[-1] * (e[-1] / e[-2]) if len(e) > 1 and e[-2] > 0 else 0.0
        return cls(stages, float(trunc))


def load_schedule(path) -> StageParams:
    with open(Path(path)) as fh:
        return StageParams.from_dict(json.load(fh))


def check_order(params: StageParams, levels: bool = True) -> list[str]:
    """Violations of the interleaving, level and temperature orderings.

    ``levels=False`` checks the interleaving of the drop positions only.
    """
    problems = []
    chain = []
    for k, s in enumerate(params.stages):
        chain += [("p", k, s.p), ("q", k, s.q)] if k % 2 == 0 else [("q", k, s.q), ("p", k, s.p)]
    if chain[0][2] < 1:
        problems.append("p_0 must be >= 1")
    for (n1, k1, v1), (n2, k2, v2) in zip(chain, chain[1:]):
        if not v1 < v2:
            problems.append(f"{n1}_{k1} = {v1} must be < {n2}_{k2} = {v2}")
    if not levels:
        return problems
    eps = [s.eps for s in params.stages] + [params.eps_trunc]
    for k in range(len(eps) - 1):
        if not eps[k] > eps[k + 1]:
            problems.append(f"eps must decrease strictly at stage {k}")
    if not params.eps_trunc >= 0:
        problems.append("eps_trunc must be >= 0")
    for k in range(params.K - 1):
        if not params.stages[k].beta < params.stages[k + 1].beta:
            problems.append(f"beta must increase strictly at stage {k}")
    if any(not s.beta > 0 for s in params.stages):
        problems.append("beta must be positive")
    return problems


@dataclass
class ExampleBuild:
    """Result of :func:`build_example`; ``potential`` is None when astronomical."""

    potential: ReducedPotential | None
    astronomical: bool
    reasons: list[str] = field(default_factory=list)


def _astronomical(params: StageParams) -> list[str]:
    out = []
    for k, s in enumerate(params.stages):
        if s.eps < TINY:
            out.append(f"eps_{k} = {s.eps!r} is below double precision")
        if max(s.p, s.q) > EXACT_INT:
            out.append(f"stage {k} lengths exceed exact double integers")
    if params.eps_trunc < TINY:
        out.append("eps_trunc is below double precision")
    return out


def build_example(params: StageParams) -> ExampleBuild:
    """Staircase potential of a schedule (tail 0, truncation level eps_trunc)."""
    reasons = _astronomical(params)
    # levels that underflowed cannot be compared, only the interleaving can
    problems = check_order(params, levels=not reasons)
    if problems:
        raise ValidationError("; ".join(problems))
    if reasons:
        return ExampleBuild(None, True, reasons)
    h0, h1 = [], []
    p_prev = q_prev = 0
    for s in params.stages:
        h0.append((s.p - p_prev, s.eps))
        h1.append((s.q - q_prev, s.eps))
        p_prev, q_prev = s.p, s.q
    R = ReducedPotential(PlateauSeq(tuple(h0), 0.0), PlateauSeq(tuple(h1), 0.0), params.eps_trunc)
    return ExampleBuild(R, False, [])


@dataclass(frozen=True)
class Thresholds:
    log_quadratic_max: float = -10.0   # log of p^2 exp(-beta eps) and q^2 exp(-beta eps)
    beta_eps_next_max: float = 0.1
    ratio_min: float = 10.0


@dataclass
class RuleReport:
    rows: list[dict]
    partial_sums: dict
    order_problems: list[str]

    @property
    def ok(self) -> bool:
        return not self.order_problems and all(r["passed"] for r in self.rows)

    def failures(self) -> list[dict]:
        return [r for r in self.rows if not r["passed"]]

    def to_dict(self) -> dict:
        return {"ok": self.ok, "rows": self.rows, "partial_sums": self.partial_sums,
                "order_problems": self.order_problems}


def check_rules(params: StageParams, thresholds: Thresholds = Thresholds()) -> RuleReport:
    """Per-stage evaluation of the temperature constraints.

    The quadratic terms are reported as logs.  The two level-count sums
    ``sum (p_k - p_{k-1}) exp(-eps_k)`` are only reported as partial sums:
    read literally they diverge whenever eps_k -> 0.
    """
    th = thresholds
    rows = []

    def add(k, name, value, limit, passed):
        rows.append({"k": k, "quantity": name, "value": value, "threshold": limit,
                     "passed": bool(passed)})

    for k, s in enumerate(params.stages):
        be = s.beta * s.eps
        lp = 2 * math.log(s.p) - be
        lq = 2 * math.log(s.q) - be
        add(k, "log p^2 exp(-beta eps)", lp, th.log_quadratic_max, lp <= th.log_quadratic_max)
        add(k, "log q^2 exp(-beta eps)", lq, th.log_quadratic_max, lq <= th.log_quadratic_max)
        bn = s.beta * params.eps_next(k)
        add(k, "beta eps_next", bn, th.beta_eps_next_max, bn <= th.beta_eps_next_max)
        if k % 2 == 0:
            r = s.q / s.p
            add(k, "q/p", r, th.ratio_min, r >= th.ratio_min)
        else:
            r = s.p / s.q
            add(k, "p/q", r, th.ratio_min, r >= th.ratio_min)
    sums = {"p": 0.0, "q": 0.0}
    p_prev = q_prev = 0
    for s in params.stages:
        sums["p"] += (s.p - p_prev) * math.exp(-s.eps)
        sums["q"] += (s.q - q_prev) * math.exp(-s.eps)
        p_prev, q_prev = s.p, s.q
    return RuleReport(rows, sums, check_order(params))


@dataclass(frozen=True)
class Diagnostics:
    """Quantities of the stage-k estimates (plain values, not logs).

    alpha0 = lambda^p (lambda-1) sum_{n>p} lambda^{-n} exp(-beta H0_n)
    theta0 = sum_{n<=p} lambda^{-n} exp(-beta H0_n)
    alpha1, theta1 likewise with q and H1, and
    delta = lambda^{(p+q)/2} (lambda - 1).
    """

    alpha0: float
    theta0: float
    alpha1: float
    theta1: float
    delta: float

    def bounds_ok(self, beta: float, eps: float, eps_next: float, p: int, q: int,
                  rtol: float = 1e-9) -> bool:
        lo = math.exp(-beta * eps_next) * (1 - rtol)
        cap = math.exp(-beta * eps) * (1 + rtol)
        return (lo <= self.alpha0 <= 1 + rtol and lo <= self.alpha1 <= 1 + rtol
                and self.theta0 <= p * cap and self.theta1 <= q * cap)


def diagnostics(R: ReducedPotential, beta: float, loglam1: float, p: int, q: int) -> Diagnostics:
    u = math.exp(log_log_lambda(loglam1))

    def alpha(seq, n):
        return math.exp(n * u + loglam1 + log_series(seq, beta, loglam1, start=n + 1))

    def theta(seq, n):
        return math.exp(log_series(seq, beta, loglam1, stop=n))

    return Diagnostics(alpha(R.H0, p), theta(R.H0, p), alpha(R.H1, q), theta(R.H1, q),
                       math.exp(0.5 * (p + q) * u + loglam1))


def oscillation_experiment(params: StageParams, stages=None, max_bracket: float = 0.1,
                           mapper=map) -> list[dict]:
    """Gibbs weights at each ``beta_k`` with the proof diagnostics.

    Every evaluated stage needs ``beta_k * eps_trunc <= max_bracket``: the
    truncated levels then change each series term by a factor in
    ``[exp(-beta_k eps_trunc), 1]``.  ``mu0_completed`` is the answer with
    the truncated levels set to ``eps_trunc`` instead of 0.
    """
    built = build_example(params)
    if built.astronomical:
        raise ValidationError("schedule is not representable: " + "; ".join(built.reasons))
    ks = list(range(params.K)) if stages is None else list(stages)
    for k in ks:
        b = params.stages[k].beta * params.eps_trunc
        if b > max_bracket:
            raise BracketTooWide(f"beta_{k} * eps_trunc = {b:.3g} > {max_bracket}: "
                                 "add a stage or lower eps_trunc")
    R = built.potential
    return list(mapper(lambda k: _stage_row(R, params, k), ks))


def _stage_row(R: ReducedPotential, params: StageParams, k: int) -> dict:
    s = params.stages[k]
    sp = solve_lambda(R, s.beta)
    spc = solve_lambda(R.completed(), s.beta)
    d = diagnostics(R, s.beta, sp.loglam1, s.p, s.q)
    lam = sp.lam
    lm1 = sp.lam_minus_1
    if k % 2 == 0:
        lower = min(s.q / (2 * s.p), s.q * lm1 / (2 * lam))
        ratio = math.exp(sp.log_mu_ratio)
        dominant_ok = sp.mu0 > sp.mu1
    else:
        lower = min(s.p / (2 * s.q), s.p * lm1 / (2 * lam))
        ratio = math.exp(-sp.log_mu_ratio)
        dominant_ok = sp.mu1 > sp.mu0
    return {
        "k": k,
        "beta": s.beta,
        "mu0": sp.mu0,
        "mu1": sp.mu1,
        "mu0_completed": spc.mu0,
        "loglam1": sp.loglam1,
        "alpha0": d.alpha0,
        "theta0": d.theta0,
        "alpha1": d.alpha1,
        "theta1": d.theta1,
        "delta": d.delta,
        "favoured_ratio": ratio,
        "ratio_lower_bound": lower,
        "dominant_ok": dominant_ok,
        "bounds_ok": d.bounds_ok(s.beta, s.eps, params.eps_next(k), s.p, s.q),
        "converged": sp.converged,
    }


def desk_schedule(K: int = 6, ratio: int = 100, level_step: float = 1e-4,
                  beta_eps: float = 200.0) -> StageParams:
    """Floating-point sized schedule satisfying every rule threshold.

    Drops are ``ratio`` apart and consecutive drops on the same side are
    adjacent: p0 = 1, q0 = ratio, q1 = q0 + 1, p1 = ratio * q1 rounded, ...
    Levels ``eps_k = level_step^k`` and ``beta_k = beta_eps / eps_k`` give
    ``beta_k eps_{k+1} = beta_eps * level_step``.
    """
    p, q = [], []
    last = 1
    for k in range(K):
        if k == 0:
            p.append(1)
            q.append(ratio)
            last = ratio
        elif k % 2 == 1:
            q.append(last + 1)
            p.append(ratio ** (k + 1))
            last = p[-1]
        else:
            p.append(last + 1)
            q.append(ratio ** (k + 1))
            last = q[-1]
    eps = [level_step ** k for k in range(K + 1)]
    stages = tuple(Stage(p[k], q[k], eps[k], beta_eps / eps[k]) for k in range(K))
    return StageParams(stages, eps[K])


def figure_schedule(K: int = 4, start: int = 2) -> StageParams:
    """The original layout: ``p_k = k^(2k)``, ``q_k = k^(2k+1)`` for even k
    (swapped for odd k) and ``eps_k = exp(-k^(2k+1))``.

    Stage indices start at an even ``start`` so parities are preserved; the
    temperatures are not specified by the layout and are set to
    ``k^(2k+2) / eps_k``.  The result is flagged astronomical by
    :func:`build_example` as soon as a level underflows.
    """
    if start % 2:
        raise ValueError("start must be even")
    stages = []
    for k in range(start, start + K):
        small, big = k ** (2 * k), k ** (2 * k + 1)
        p, q = (small, big) if k % 2 == 0 else (big, small)
        eps = math.exp(-float(big))
        beta = float(k ** (2 * k + 2)) / eps if eps > 0 else math.inf
        stages.append(Stage(p, q, eps, beta))
    k = start + K
    return StageParams(tuple(stages), math.exp(-float(k ** (2 * k + 1))))

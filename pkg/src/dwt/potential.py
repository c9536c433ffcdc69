"""Double-well potentials on the full shift over {0, 1}.

A potential of this class is determined by a handful of positive sequences
indexed by n >= 1.  Every sequence is stored as a :class:`PlateauSeq`: a
finite list of ``(length, value)`` plateaus followed by a constant tail, so
that all sums and infima appearing later have exact finite-head plus
closed-form-tail evaluations.

Two potential types are provided:

* :class:`GeneralDoubleWell` holds the four families ``a0, a1, b0, b1``
  (values on ``[0 0^n 1]``, ``[1 1^n 0]``, ``[0 1^n 0]``, ``[1 0^n 1]``).
* :class:`ReducedPotential` holds ``H0, H1`` and vanishes on ``[00] u [11]``;
  ``H0[n]`` is the value on ``[0 1^n 0]`` and ``H1[n]`` the value on
  ``[1 0^n 1]``.

:func:`reduce` maps the first onto the second by subtracting a coboundary.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator

import numpy as np

from .errors import ValidationError

__all__ = [
    "PlateauSeq",
    "GeneralDoubleWell",
    "ReducedPotential",
    "ValidationReport",
    "validate_general",
    "reduce",
    "derived_constants",
    "variation",
    "potential_from_dict",
    "potential_to_dict",
    "load_potential",
]

# Refuse to expand plateau heads beyond this many explicit indices.
MAX_EXPANDED_HEAD = 10_000_000


@dataclass(frozen=True)
class PlateauSeq:
    """Nonnegative sequence ``value(n)``, n >= 1: plateaus then a constant tail.

    >>> s = PlateauSeq([(1, 0.5), (2, 0.25)], tail=0.1)
    >>> [s.value(n) for n in range(1, 6)]
    [0.5, 0.25, 0.25, 0.1, 0.1]
    """

    plateaus: tuple[tuple[int, float], ...] = ()
    tail: float = 0.0

    def __post_init__(self):
        clean = []
        for item in self.plateaus:
            try:
                length, value = item
            except (TypeError, ValueError):
                raise ValidationError(f"plateau must be a (length, value) pair, got {item!r}")
            if isinstance(length, bool) or int(length) != length or int(length) < 1:
                raise ValidationError(f"plateau length must be a positive integer, got {length!r}")
            value = float(value)
            if not math.isfinite(value) or value < 0:
                raise ValidationError(f"plateau value must be finite and >= 0, got {value!r}")
            clean.append((int(length), value))
        tail = float(self.tail)
        if not math.isfinite(tail) or tail < 0:
            raise ValidationError(f"tail must be finite and >= 0, got {self.tail!r}")
        object.__setattr__(self, "plateaus", tuple(clean))
        object.__setattr__(self, "tail", tail)

    @classmethod
    def constant(cls, value: float) -> "PlateauSeq":
        return cls((), value)

    @classmethod
    def from_values(cls, values, tail: float) -> "PlateauSeq":
        """Compress explicit head values into plateaus (runs of equal values)."""
        plateaus: list[list] = []
        for v in values:
            v = float(v)
            if plateaus and plateaus[-1][1] == v:
                plateaus[-1][0] += 1
            else:
                plateaus.append([1, v])
        return cls(tuple((n, v) for n, v in plateaus), tail)

    @property
    def head_length(self) -> int:
        return sum(n for n, _ in self.plateaus)

    def segments(self) -> Iterator[tuple[int, int, float]]:
        """Yield ``(start, stop, value)``: the plateau covers ``start < n <= stop``."""
        pos = 0
        for length, value in self.plateaus:
            yield pos, pos + length, value
            pos += length

    def value(self, n: int) -> float:
        if n < 1:
            raise ValueError("sequence index starts at 1")
        for start, stop, value in self.segments():
            if n <= stop:
                return value
        return self.tail

    def head_values(self) -> np.ndarray:
        """Explicit array ``[value(1), ..., value(N)]`` of the head."""
        if self.head_length > MAX_EXPANDED_HEAD:
            raise ValidationError("head too long to expand explicitly")
        return np.repeat([v for _, v in self.plateaus], [n for n, _ in self.plateaus]).astype(float)

    def values(self, nmax: int) -> np.ndarray:
        """``[value(1), ..., value(nmax)]``."""
        out = np.full(nmax, self.tail)
        for start, stop, value in self.segments():
            if start >= nmax:
                break
            out[start:min(stop, nmax)] = value
        return out

    @property
    def strictly_positive(self) -> bool:
        """Every plateau value is > 0 (the tail is judged separately)."""
        return all(v > 0 for _, v in self.plateaus)

    def minimum(self) -> float:
        """``inf_n value(n)``, tail included."""
        return min([self.tail] + [v for _, v in self.plateaus])

    def maximum(self) -> float:
        return max([self.tail] + [v for _, v in self.plateaus])

    def suffix_inf(self, n: int) -> float:
        """``inf_{k >= n} value(k)``."""
        best = self.tail
        for start, stop, value in self.segments():
            if stop >= n and value < best:
                best = value
        return best

    def suffix_sup(self, n: int) -> float:
        best = self.tail
        for start, stop, value in self.segments():
            if stop >= n and value > best:
                best = value
        return best

    def oscillation_from(self, n: int) -> float:
        """``sup_{j, k >= n} |value(j) - value(k)|``, tail included."""
        return self.suffix_sup(n) - self.suffix_inf(n)

    def variation_sum(self) -> float:
        """Exact ``sum_k sup_{n >= 0} |value(k) - value(k + n)|``.

        The summand is constant along a plateau and vanishes past the head.
        """
        total = 0.0
        for start, stop, value in self.segments():
            lo, hi = self.suffix_inf(start + 1), self.suffix_sup(start + 1)
            total += (stop - start) * max(value - lo, hi - value)
        return total

    def index_weighted_sum(self) -> float:
        """Exact ``sum_n n * value(n)``; infinite unless the tail is 0."""
        if self.tail != 0:
            return math.inf
        total = 0.0
        for start, stop, value in self.segments():
            total += value * (stop - start) * (start + stop + 1) / 2
        return total

    def total(self) -> float:
        """``sum_n value(n)``; infinite unless the tail is 0."""
        if self.tail != 0:
            return math.inf
        return sum(n * v for n, v in self.plateaus)

    def trimmed(self) -> "PlateauSeq":
        """Drop trailing plateaus equal to the tail and merge equal neighbours."""
        merged: list[list] = []
        for n, v in self.plateaus:
            if merged and merged[-1][1] == v:
                merged[-1][0] += n
            else:
                merged.append([n, v])
        while merged and merged[-1][1] == self.tail:
            merged.pop()
        return PlateauSeq(tuple((n, v) for n, v in merged), self.tail)

    def to_dict(self) -> dict:
        return {"plateaus": [[n, v] for n, v in self.plateaus], "tail": self.tail}

    @classmethod
    def from_dict(cls, data) -> "PlateauSeq":
        if isinstance(data, (int, float)):
            return cls.constant(float(data))
        try:
            return cls(tuple(tuple(p) for p in data.get("plateaus", ())), data["tail"])
        except (KeyError, AttributeError, TypeError) as exc:
            raise ValidationError(f"malformed plateau sequence {data!r}") from exc


@dataclass(frozen=True)
class GeneralDoubleWell:
    """Potential constant on ``[00^n1], [11^n0], [01^n0], [10^n1]``.

    ``a0[n]`` is the value on ``[0 0^n 1]``, ``a1[n]`` on ``[1 1^n 0]``,
    ``b0[n]`` on ``[0 1^n 0]`` and ``b1[n]`` on ``[1 0^n 1]``.  ``trunc_level``
    marks a limit approximation in which a zero ``b`` tail stands for
    positive values not exceeding it.
    """

    a0: PlateauSeq
    a1: PlateauSeq
    b0: PlateauSeq
    b1: PlateauSeq
    trunc_level: float | None = None


@dataclass
class ValidationReport:
    """Outcome of :func:`validate_general`, one entry per admissibility item."""

    items: list[tuple[str, bool, str]] = field(default_factory=list)
    sum_n_a0: float = 0.0
    sum_n_a1: float = 0.0
    b0_variation: float = 0.0
    b1_variation: float = 0.0

    @property
    def ok(self) -> bool:
        return all(passed for _, passed, _ in self.items)

    def failures(self) -> list[str]:
        return [f"{name}: {detail}" for name, passed, detail in self.items if not passed]

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "items": [{"item": n, "passed": p, "detail": d} for n, p, d in self.items],
            "sum_n_a0": self.sum_n_a0,
            "sum_n_a1": self.sum_n_a1,
            "b0_variation": self.b0_variation,
            "b1_variation": self.b1_variation,
        }


def validate_general(P: GeneralDoubleWell) -> ValidationReport:
    """Check the four admissibility items of a general double-well potential.

    1. ``a0, a1`` are nonnegative (guaranteed by :class:`PlateauSeq`).
    2. ``b0, b1`` are strictly positive; a zero tail is admitted only as a
       limit approximation (``trunc_level`` set).
    3. ``sum n a_n < inf`` on both sides: exact for a zero ``a`` tail.
    4. ``sum_k sup_n |b_k - b_{k+n}| < inf``: exact for plateau sequences.
    """
    rep = ValidationReport()
    rep.items.append(("1: a nonnegative", True, "plateau values are >= 0 by construction"))

    for name, b in (("b0", P.b0), ("b1", P.b1)):
        if not b.strictly_positive:
            rep.items.append((f"2: {name} > 0", False, "a plateau value is 0"))
        elif b.tail == 0 and not (P.trunc_level and P.trunc_level > 0):
            rep.items.append((f"2: {name} > 0", False, "tail is 0 without a truncation level"))
        else:
            rep.items.append((f"2: {name} > 0", True, ""))

    rep.sum_n_a0 = P.a0.index_weighted_sum()
    rep.sum_n_a1 = P.a1.index_weighted_sum()
    for name, s in (("a0", rep.sum_n_a0), ("a1", rep.sum_n_a1)):
        finite = math.isfinite(s)
        rep.items.append((f"3: sum n*{name} finite", finite, f"sum = {s!r}"))

    rep.b0_variation = P.b0.variation_sum()
    rep.b1_variation = P.b1.variation_sum()
    for name, s in (("b0", rep.b0_variation), ("b1", rep.b1_variation)):
        rep.items.append((f"4: {name} summable variation", math.isfinite(s), f"sum = {s!r}"))
    return rep


@dataclass(frozen=True)
class ReducedPotential:
    """Double-well potential vanishing on ``[00] u [11]``.

    ``H0[n]`` is the value on ``[0 1^n 0]`` and ``H1[n]`` the value on
    ``[1 0^n 1]``.  Plateau values must be strictly positive.  A zero tail
    is a limit approximation and requires ``trunc_level > 0``: the level the
    first truncated plateau would carry.
    """

    H0: PlateauSeq
    H1: PlateauSeq
    trunc_level: float | None = None

    def __post_init__(self):
        for name, s in (("H0", self.H0), ("H1", self.H1)):
            if not isinstance(s, PlateauSeq):
                raise ValidationError(f"{name} must be a PlateauSeq")
            if not s.strictly_positive:
                raise ValidationError(f"{name} has a plateau with value 0")
        if self.trunc_level is not None:
            t = float(self.trunc_level)
            if not (math.isfinite(t) and t > 0):
                raise ValidationError("trunc_level must be positive and finite")
            object.__setattr__(self, "trunc_level", t)
        elif self.H0.tail == 0 or self.H1.tail == 0:
            raise ValidationError("a zero tail requires trunc_level (limit approximation)")

    def side(self, s: int) -> PlateauSeq:
        return self.H1 if s else self.H0

    @property
    def limit_approximation(self) -> bool:
        return self.trunc_level is not None

    @property
    def Hinf0(self) -> float:
        return self.H0.tail

    @property
    def Hinf1(self) -> float:
        return self.H1.tail

    @property
    def Hmin0(self) -> float:
        return self.H0.minimum()

    @property
    def Hmin1(self) -> float:
        return self.H1.minimum()

    @property
    def head_length(self) -> int:
        return max(self.H0.head_length, self.H1.head_length)

    def swapped(self) -> "ReducedPotential":
        """Exchange the roles of the symbols 0 and 1 (an involution)."""
        return ReducedPotential(self.H1, self.H0, self.trunc_level)

    def completed(self) -> "ReducedPotential":
        """Replace zero tails by ``trunc_level``: the other end of the bracket."""
        if not self.limit_approximation:
            return self

        def fill(s: PlateauSeq) -> PlateauSeq:
            return PlateauSeq(s.plateaus, s.tail if s.tail > 0 else self.trunc_level)

        return ReducedPotential(fill(self.H0), fill(self.H1))

    def energy(self, word: str) -> float:
        """Value of H on the cylinder ``[word]`` when H is constant there."""
        if len(word) < 2:
            raise ValidationError("H is not constant on cylinders of length < 2")
        a, b = word[0], word[1]
        if a == b:
            return 0.0
        rest = word[1:]
        run = len(rest) - len(rest.lstrip(b))
        if run == len(rest):
            raise ValidationError(f"H is not constant on [{word}]")
        return self.side(int(a)).value(run)


def derived_constants(R: ReducedPotential) -> dict:
    """``Hmin0, Hmin1, Hinf0, Hinf1`` of a reduced potential."""
    return {"Hmin0": R.Hmin0, "Hmin1": R.Hmin1, "Hinf0": R.Hinf0, "Hinf1": R.Hinf1}


def reduce(P: GeneralDoubleWell) -> ReducedPotential:
    """Cohomologous reduced potential: ``H0[n] = b0[n] + sum_{k<n} a1[k]``.

    Symmetrically ``H1[n] = b1[n] + sum_{k<n} a0[k]``.  Prefix sums are
    piecewise affine, so plateaus are split wherever the sum moves.
    """
    rep = validate_general(P)
    if not rep.ok:
        raise ValidationError("; ".join(rep.failures()))

    def combine(b: PlateauSeq, a: PlateauSeq) -> PlateauSeq:
        n = max(b.head_length, a.head_length + 1)
        if n > MAX_EXPANDED_HEAD:
            raise ValidationError("head too long to reduce")
        bv = b.values(n)
        prefix = np.concatenate([[0.0], np.cumsum(a.values(n - 1))]) if n > 1 else np.zeros(1)
        tail = b.tail + a.total()
        return PlateauSeq.from_values(bv + prefix, tail).trimmed()

    return ReducedPotential(combine(P.b0, P.a1), combine(P.b1, P.a0), P.trunc_level)


def variation(R: ReducedPotential, n: int) -> float:
    """``var(H, n)``: largest oscillation of H over a cylinder of length n.

    For n = 1 the cylinder ``[s]`` also contains ``[ss]`` where H = 0.
    For n >= 2 only ``[0 1^{n-1}]`` and ``[1 0^{n-1}]`` carry oscillation.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return max(R.H0.maximum(), R.H1.maximum())
    return max(R.H0.oscillation_from(n - 1), R.H1.oscillation_from(n - 1))


def variation_tail_sum(R: ReducedPotential, n: int) -> float:
    """``sum_{k >= n} var(H, k)``, exact (the summand vanishes past the head)."""
    last = R.head_length + 2
    return sum(variation(R, k) for k in range(max(n, 1), max(last, n) + 1))


# -- JSON -----------------------------------------------------------------

def potential_to_dict(P) -> dict:
    if isinstance(P, ReducedPotential):
        out = {"kind": "reduced", "H0": P.H0.to_dict(), "H1": P.H1.to_dict()}
    elif isinstance(P, GeneralDoubleWell):
        out = {"kind": "general"}
        for name in ("a0", "a1", "b0", "b1"):
            out[name] = getattr(P, name).to_dict()
    else:
        raise TypeError(f"not a potential: {P!r}")
    if P.trunc_level is not None:
        out["trunc_level"] = P.trunc_level
    return out


def potential_from_dict(data: dict, validate: bool = True):
    """Build a potential from its JSON form (``kind`` = reduced | general)."""
    if not isinstance(data, dict):
        raise ValidationError("potential must be a JSON object")
    kind = data.get("kind", "reduced")
    trunc = data.get("trunc_level")
    try:
        if kind == "reduced":
            return ReducedPotential(
                PlateauSeq.from_dict(data["H0"]), PlateauSeq.from_dict(data["H1"]), trunc
            )
        if kind == "general":
            seqs = {k: PlateauSeq.from_dict(data[k]) for k in ("a0", "a1", "b0", "b1")}
            return GeneralDoubleWell(trunc_level=trunc, **seqs)
    except KeyError as exc:
        raise ValidationError(f"missing field {exc} in potential") from exc
    raise ValidationError(f"unknown potential kind {kind!r}")


def load_potential(path) -> "ReducedPotential | GeneralDoubleWell":
    with open(Path(path)) as fh:
        return potential_from_dict(json.load(fh))

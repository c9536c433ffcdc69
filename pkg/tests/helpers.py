"""Shared potentials and hypothesis strategies for the test suite."""

import math

from hypothesis import strategies as st

from dwt.potential import PlateauSeq, ReducedPotential

PHI = (1 + math.sqrt(5)) / 2


def const(h):
    return PlateauSeq.constant(h)


def reduced(h0, h1, trunc_level=None):
    """Build from ``(plateaus, tail)`` pairs or plain floats (constants)."""
    def seq(x):
        if isinstance(x, PlateauSeq):
            return x
        if isinstance(x, (int, float)):
            return const(float(x))
        plateaus, tail = x
        return PlateauSeq(tuple((int(n), float(v)) for n, v in plateaus), float(tail))
    return ReducedPotential(seq(h0), seq(h1), trunc_level)


GOLDEN = reduced(1.0, ([(1, 1.0)], 3.0))
SELECT_ONE = reduced(1.0, ([(1, 0.2)], 3.0))
KAPPA2 = reduced(1.0, ([(2, 1.0)], 3.0))
SYMMETRIC = reduced(1.0, 1.0)
UNEQUAL_CONST = reduced(1.0, 2.0)
MIXED = reduced(([(1, 0.5), (2, 1.5)], 0.8), ([(3, 0.3), (1, 2.0)], 1.1))
STAIRCASE = reduced(([(1, 1e-2), (9, 1e-4)], 0.0), ([(3, 1e-2), (7, 1e-4)], 0.0), 1e-6)

FIXTURES = {
    "golden": GOLDEN,
    "select_one": SELECT_ONE,
    "kappa2": KAPPA2,
    "symmetric": SYMMETRIC,
    "unequal_const": UNEQUAL_CONST,
    "mixed": MIXED,
    "staircase": STAIRCASE,
}


levels = st.floats(min_value=0.05, max_value=3.0, allow_nan=False, allow_infinity=False)


@st.composite
def plateau_seqs(draw, max_plateaus=4, max_len=4, tail=None):
    n = draw(st.integers(0, max_plateaus))
    plateaus = tuple((draw(st.integers(1, max_len)), draw(levels)) for _ in range(n))
    t = draw(levels) if tail is None else tail
    return PlateauSeq(plateaus, t)


@st.composite
def reduced_potentials(draw, max_plateaus=4, max_len=4):
    return ReducedPotential(draw(plateau_seqs(max_plateaus, max_len)),
                            draw(plateau_seqs(max_plateaus, max_len)))


def random_reduced(rng, zero_tails=False, max_plateaus=4, max_len=4):
    """numpy-Generator version of :func:`reduced_potentials` (plain loops)."""
    def seq(tail_zero):
        n = int(rng.integers(0, max_plateaus + 1))
        plateaus = tuple((int(rng.integers(1, max_len + 1)), float(rng.uniform(0.05, 3.0)))
                         for _ in range(n))
        if tail_zero and not plateaus:
            plateaus = ((1, float(rng.uniform(0.05, 3.0))),)
        return PlateauSeq(plateaus, 0.0 if tail_zero else float(rng.uniform(0.05, 3.0)))
    if zero_tails:
        return ReducedPotential(seq(True), seq(True), 1e-3)
    return ReducedPotential(seq(False), seq(False))


def words(max_len):
    out = []
    for n in range(1, max_len + 1):
        out += [format(i, f"0{n}b") for i in range(2 ** n)]
    return out

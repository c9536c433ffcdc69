"""Regime map over the height m of the single 1-side plateau: SelectOne below 1, Barycenter from 1."""
import numpy as np

from dwt.asymptotics import phase_grid
from dwt.potential import PlateauSeq, ReducedPotential


def family(m, _):
    return ReducedPotential(PlateauSeq.constant(1.0), PlateauSeq(((1, m),), 3.0))


for r in phase_grid(family, np.linspace(0.25, 2.0, 8), [0.0]):
    c = "-" if r["c"] is None else f"{r['c']:.4f}"
    w0 = "-" if r["w0"] is None else f"{r['w0']:.4f}"
    print(f"m {r['s']:.3f}  {r['regime']:<10}  gamma {r['gamma']:.3f}  c {c}  w0 {w0}")

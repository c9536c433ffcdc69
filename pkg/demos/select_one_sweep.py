"""A short cheap excursion on the 1-side makes the Gibbs measure pick the 1-fixed point.

log(mu0/mu1) falls linearly in beta with slope -gamma = -1.2.
"""
import numpy as np

from dwt.asymptotics import fit_rate, profile
from dwt.potential import PlateauSeq, ReducedPotential
from dwt.spectrum import solve_lambda

R = ReducedPotential(PlateauSeq.constant(1.0), PlateauSeq(((1, 0.2),), 3.0))
p = profile(R)
betas = np.arange(20.0, 101.0, 5.0)
logratio = []
for beta in betas:
    sp = solve_lambda(R, beta)
    logratio.append(np.log(sp.mu0) - np.log(sp.mu1))
    print(f"beta {beta:5.1f}  mu0 {sp.mu0:.3e}  log(lam-1) {sp.loglam1:9.3f}")

print(f"regime {p.regime}, predicted slope {p.gamma}")
print(f"fitted slope of log(mu0/mu1): {fit_rate(betas, logratio):.6f}")

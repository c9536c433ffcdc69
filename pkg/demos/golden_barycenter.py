"""Golden potential: the Gibbs weight of the 0-side settles at 1/(1 + phi^2)."""
import math

from dwt.asymptotics import profile
from dwt.potential import PlateauSeq, ReducedPotential
from dwt.spectrum import solve_lambda

R = ReducedPotential(PlateauSeq.constant(1.0), PlateauSeq(((1, 1.0),), 3.0))
p = profile(R)
print(f"regime {p.regime}  gamma {p.gamma}  kappa {p.kappa}  c {p.c:.10f}")
print(f"limit weight w0 = {p.weights[0]:.10f}")

for beta in (1.0, 5.0, 10.0, 20.0, 40.0):
    sp = solve_lambda(R, beta)
    print(f"beta {beta:5.1f}  log(lam-1) {sp.loglam1:12.6f}  mu0 {sp.mu0:.10f}"
          f"  mu0/mu1 {sp.mu0 / sp.mu1:.10f}")

print(f"(3 - sqrt 5)/2 = {(3 - math.sqrt(5)) / 2:.10f}")

"""Staircase potential whose Gibbs measure swings between the two fixed points.

Each stage k is solved at its own temperature beta_k. Even stages favour 0,
odd stages favour 1, so mu_beta has no limit as beta grows.
"""
from dwt.nonselection import check_rules, desk_schedule, oscillation_experiment

P = desk_schedule()
rep = check_rules(P)
print(f"rule check ok: {rep.ok}")
for s in P.stages:
    print(f"  p {s.p:>14}  q {s.q:>14}  eps {s.eps:.0e}  beta {s.beta:.1e}")

for r in oscillation_experiment(P):
    print(f"stage {r['k']}  mu0 {r['mu0']:.4f}  delta {r['delta']:.4f}  bounds ok {r['bounds_ok']}")

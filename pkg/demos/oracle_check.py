"""Compare the series solver with a brute-force transfer matrix on a truncated potential."""
from dwt.oracle import transfer_matrix_gibbs, truncate
from dwt.potential import PlateauSeq, ReducedPotential
from dwt.spectrum import gibbs_cylinder, solve_lambda

R = ReducedPotential(PlateauSeq(((1, 0.5), (2, 1.5)), 0.8),
                     PlateauSeq(((3, 0.3), (1, 2.0)), 1.1))
T = truncate(R, 8)
words = ["0", "1", "01", "0011", "10110"]
for beta in (1.0, 5.0, 20.0):
    res, mus = transfer_matrix_gibbs(T, beta, words)
    sp = solve_lambda(T.reduced, beta)
    err = max(abs(gibbs_cylinder(T.reduced, sp, None, w) - mus[w]) for w in words)
    print(f"beta {beta:5.1f}  lam-1 matrix {res.lam_minus_1:.6e}  series {sp.lam_minus_1:.6e}"
          f"  max cylinder err {err:.1e}")

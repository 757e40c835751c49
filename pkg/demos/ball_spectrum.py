"""Eigenvalues of ||x - y|| on the unit ball in R^3.

For each angular degree m the radial operator has eigenvalues located at the
zeros of a small Bessel determinant.  They are compared here with a brute
force Nystrom discretization of the same operator.
"""

import numpy as np

from specdisc.ball_eigen import BallProblem, assemble_ball_expansion, find_eigs, nystrom_eigs, residual

for m in range(3):
    prob = BallProblem(d=3, p=1, m=m)
    pairs = find_eigs(prob, 5)
    ref = nystrom_eigs(prob, 200)[:5]
    print(f"m = {m}")
    for e, r in zip(pairs, ref):
        print(f"  omega {e.omega:10.6f}  lambda {e.lam:+.10e}  nystrom {r:+.10e}  residual {residual(e, prob):.1e}")

# Mercer expansion of 4 - ||x - y|| on the ball and a few partial sums
rng = np.random.default_rng(1)
x = rng.uniform(-0.5, 0.5, (5, 3))
y = rng.uniform(-0.5, 0.5, (5, 3))
exact = 4.0 - np.linalg.norm(x - y, axis=1)
for M, J in ((2, 2), (6, 4), (12, 8)):
    exp = assemble_ball_expansion(3, 1, M, J, shift=4.0)
    err = np.max(np.abs(exp.evaluate(x, y) - exact))
    print(f"partial sum with m <= {M:2d}, j <= {J}: max error {err:.2e}")

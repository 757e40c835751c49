"""How fast do the Fourier coefficients of distance kernels decay?

Prints scaled coefficients of ||x - y|| on S^2, SO(3) and G(2,4).  The scaled
columns settle to constants, which is the algebraic decay that fixes the
smoothness of each kernel.
"""

import math

from specdisc.spectra import (
    g24_coeff,
    so3_coeff,
    so3_decay_constant,
    sphere_coeff,
    sphere_decay_constant,
)

print("degree   m^3 |a_m(S^2)|   m^4 |a_m(SO(3))|   |l|^5 |a_(n,0)(G24)|")
for m in (5, 10, 20, 40, 80, 160):
    s = m**3 * abs(sphere_coeff(3, 1.0, m))
    r = m**4 * abs(so3_coeff(1.0, m))
    g = m**5 * abs(g24_coeff(1.0, (m, 0)))
    print(f"{m:6d}   {s:14.8f}   {r:16.8f}   {g:20.8f}")

print(f"\nlimit on S^2:   {sphere_decay_constant(3, 1.0):.8f}")
print(f"limit on SO(3): {so3_decay_constant(1.0):.8f}  (1/pi = {1 / math.pi:.8f})")

print("\nEven exponents give polynomials, so the expansions stop:")
for p in (2, 4):
    tail = [m for m in range(10) if sphere_coeff(3, p, m) != 0]
    print(f"  p = {p}: nonzero sphere degrees {tail}")

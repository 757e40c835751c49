"""Fifty points approximating a measure on two circles of the sphere.

The target puts mass 0.9 on one circle and 0.1 on another.  Minimizing the
discrepancy should send roughly 45 points to the heavy circle.
"""

from specdisc.discrepancy import circle_split, minimize, two_circle_scenario
from specdisc.spectra import kernel_table

M = 8
result = minimize(kernel_table("sphere", M), two_circle_scenario(M), n=50, seed=0)
first, second = circle_split(result.points.points)
print(f"objective {result.objective:.3e} after {len(result.trace) - 1} iterations")
print(f"points near the heavy circle: {first}, near the light one: {second}")

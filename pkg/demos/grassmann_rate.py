"""Optimized point sets on G(2,4) and their discrepancy as n grows.

With n points and M = n^(1/4) the discrepancy of minimizers is expected to
fall off like n^(-5/4).  Writes the rows as CSV and prints the fitted slope.
"""

import csv
import sys

from specdisc.discrepancy import convergence_study, fit_slope

rows = convergence_study("g24", n_list=(16, 81, 256), seed=0)
writer = csv.writer(sys.stdout, lineterminator="\n")
writer.writerow(["n", "M", "discrepancy"])
for r in rows:
    writer.writerow([r["n"], r["M"], f"{r['discrepancy']:.6e}"])
print(f"fitted log-log slope: {fit_slope([r['n'] for r in rows], [r['discrepancy'] for r in rows]):.3f}")

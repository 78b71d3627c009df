"""
Certified zeros of L(s, chi_5) and their bracketing
===================================================

Run from the repository root:  python demos/zeros_and_brackets.py
"""

from twisted_lambert import (DirichletLSeries, PrecisionContext, bracket, build_character,
                             export_zeros, first_zeros, import_zeros)
from twisted_lambert.zeros import bracket_threshold, check_scan_stability

ctx = PrecisionContext(40)
mp = ctx.mp
L5 = DirichletLSeries(build_character(5, [1, -1, -1, 1, 0]), ctx)

zeros = first_zeros(L5, 10)
for z in zeros:
    print(f"#{z.index:2d}  t = {mp.nstr(z.t, 25):>28}  |L(rho)| = {mp.nstr(z.residual, 2):>8}"
          f"  |L'(rho)| = {mp.nstr(z.derivative, 4)}")

# no zero hides between grid points at half the step
print("sign changes at half step:", check_scan_stability(L5, float(zeros[-1].t) + 0.01, zeros))

# the thresholds shrink fast, so well-separated zeros each get their own bracket
for t in (5, 20, 50):
    print(f"threshold at t = {t:>2}: {bracket_threshold(t):.3e}")
print("brackets with C = 1:", len(bracket(zeros)), " with C = 0.01:", len(bracket(zeros, C=0.01)))

# round trip through CSV; import re-certifies every ordinate
export_zeros(zeros, "l5_zeros.csv")
back = import_zeros("l5_zeros.csv", L5)
print("re-imported:", len(back), "max |t - t'| =", mp.nstr(max(abs(a.t - b.t) for a, b in zip(zeros, back)), 3))

"""
Small-y behaviour: polynomial part and oscillation
==================================================

Subtracting R0 and the B_m y^{2m+a} polynomial from the Lambert series
leaves sqrt(y) times a sum of cosines in log y, one per zero.
Run from the repository root:  python demos/small_y_behaviour.py
"""

from twisted_lambert import IdentityConfig, LambertIdentity, PrecisionContext, build_character, delta_form
from twisted_lambert import principal_character
from twisted_lambert.identity import relative_l2_deviation

ctx = PrecisionContext(40)
mp = ctx.mp
cfg = IdentityConfig(delta_form(40000), principal_character(1), build_character(5, [1, -1, -1, 1, 0]),
                     (), 2000, 2000, 20, "pairs", 1.0, ctx)
ev = LambertIdentity(cfg)

B = ev.asymptotic_coeffs(4)
for m, b in enumerate(B):
    print(f"B_{m} = {mp.nstr(mp.re(b), 15)}")

# an independent look at B_1 from the plain truncated sum
limit, ratios = ev.richardson_limit()
print("Richardson:", mp.nstr(mp.re(limit), 15), " raw ratios:", [mp.nstr(mp.re(r), 8) for r in ratios])

grid = [mp.mpf(10) ** (-1 - mp.mpf(j) / 9) for j in range(10)]
for budget in (2, 5, 10, 20):
    rows = ev.oscillation_profile(grid, zero_budget=budget, M_prime=10)
    print(f"{budget:2d} zeros: relative L2 deviation {mp.nstr(relative_l2_deviation(rows), 3)}")

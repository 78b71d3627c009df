"""
Both sides of the twisted Lambert identity, piece by piece
==========================================================

Delta with psi trivial and psi' the real character mod 5, at y = 1.589.
Run from the repository root:  python demos/walkthrough_identity.py
"""

from twisted_lambert import (IdentityConfig, LambertIdentity, PrecisionContext,
                             build_character, delta_form, principal_character)

ctx = PrecisionContext(40)
mp = ctx.mp

# the cusp form and the two twisting characters
form = delta_form(4096)
psi = principal_character(1)
psi_prime = build_character(5, [1, -1, -1, 1, 0])
print("tau(1..6):", [int(c) for c in form.coeffs_f[1:7]])

cfg = IdentityConfig(form, psi, psi_prime, (), 2000, 2000, 22, "pairs", 1.0, ctx)
ev = LambertIdentity(cfg)

# Lambert side: c = (a_f psi) * (mu psi')
print("c(1..10):", [int(c) for c in ev.lhs_coefficients(10)[1:]])

y = mp.mpf("1.589")
rec = ev.evaluate(y)
print()
print("LHS              ", mp.nstr(rec.lhs, 20))
print("hypergeometric   ", mp.nstr(mp.re(rec.rhs_hypergeom), 20))
print("R0               ", mp.nstr(mp.re(rec.rhs_R0), 20))
print("residue sum      ", mp.nstr(mp.re(rec.rhs_residue_sum), 20), f"({rec.zeros_used} zeros)")
print("RHS              ", mp.nstr(mp.re(rec.rhs_total), 20))
print("|LHS - RHS|      ", mp.nstr(rec.abs_diff, 3))

# the residue sum converges bracket by bracket; watch the partial sums settle
partial = mp.mpf(0)
print()
for j, sub in enumerate(rec.bracket_subtotals, start=1):
    partial += mp.re(sub)
    if j in (1, 2, 5, 10, 22):
        print(f"after {j:2d} brackets: {mp.nstr(partial, 15)}")

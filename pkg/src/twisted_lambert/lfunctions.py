"""Dirichlet L-functions and twisted cusp-form L-functions.

``L(s, chi)`` is evaluated everywhere through the Hurwitz decomposition
``M^-s sum_j chi(j) zeta(s, j/M)``.  The completed cusp-form function
``Lambda_f(s, psi) = (sqrt(N)/2 pi)^s Gamma(s) L_f(s, psi)`` is evaluated by
the incomplete-gamma splitting, which converges exponentially for every
``s`` and encodes the functional equation through the partner form ``g``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .characters import DirichletCharacter
from .cuspforms import CuspFormData, fricke_partner
from .errors import (
    AccuracyLossError,
    InsufficientCoefficientsError,
    ParameterError,
    PoleError,
)
from .precision import (
    DEFAULT_CONTEXT,
    PrecisionContext,
    cauchy_derivative,
    hurwitz_zeta,
    hurwitz_zeta_sderiv,
    to_mp,
)

__all__ = [
    "DirichletLSeries",
    "CuspFormLSeries",
    "dirichlet_L",
    "dirichlet_L_deriv",
    "completed_xi",
    "hardy_z",
    "lambda_f",
    "residue_numerator",
    "lfprime_at_zero",
]


def _boost_for_height(t):
    # completed functions shrink like exp(-pi |t| / 2) while their terms do not
    return math.ceil(math.pi * abs(float(t)) / (2 * math.log(10))) + 10


@dataclass(frozen=True)
class DirichletLSeries:
    """``L(s, chi)`` for a primitive character ``chi`` (``chi`` mod 1 gives zeta)."""

    character: DirichletCharacter
    ctx: PrecisionContext = DEFAULT_CONTEXT
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        if not self.character.primitive:
            raise ParameterError("DirichletLSeries requires a primitive character")

    @property
    def modulus(self):
        return self.character.modulus

    @property
    def parity_a(self):
        return self.character.parity_a

    @property
    def is_zeta(self):
        return self.character.modulus == 1

    def at(self, ctx):
        """The same series at another precision."""
        return DirichletLSeries(self.character, ctx)

    def conjugate(self):
        return DirichletLSeries(self.character.conjugate(), self.ctx)

    def root_number(self, ctx=None):
        """``W = eps_chi / (i^a sqrt(M))``, with ``xi(s) = W xi(1 - s, conj chi)``."""
        ctx = ctx or self.ctx
        mp = ctx.mp
        eps = self.character.gauss_sum(ctx)
        return eps / (mp.mpc(0, 1) ** self.parity_a * mp.sqrt(self.modulus))

    # -- L and L' ------------------------------------------------------------
    def _L(self, s, ctx):
        mp = ctx.mp
        M = self.modulus
        if M == 1:
            return hurwitz_zeta(s, 1, ctx)
        if abs(s - 1) < 1e-6:
            # L is entire here but each Hurwitz term has a pole: average over a circle
            points = ctx.digits + 10
            r = mp.mpf(1) / 8
            nodes = (s + r * mp.expjpi(mp.mpf(2 * j) / points) for j in range(points))
            return mp.fsum(self._L(u, ctx) for u in nodes) / points
        total = mp.mpc(0)
        for j in range(1, M):
            if self.character.exponent(j) is not None:
                total += self.character.value(j, ctx) * hurwitz_zeta(s, mp.mpf(j) / M, ctx)
        return mp.power(M, -s) * total

    def L(self, s):
        ctx = self.ctx
        s = to_mp(s, ctx)
        if self.is_zeta and abs(s - 1) <= ctx.eps():
            raise PoleError("zeta has a pole at s = 1")
        extra = 10
        if not self.is_zeta and abs(s - 1) >= 1e-6:
            # the Hurwitz poles at s = 1 cancel across residues: pay for the cancellation
            extra += max(0, int(-ctx.mp.log10(abs(s - 1))) + 1)
        inner = ctx.extended(extra)
        return ctx.mp.convert(self._L(to_mp(s, inner), inner))

    def L_deriv(self, s):
        """``L'(s)`` from Hurwitz derivatives, cross-checked by a Cauchy circle on ``L``."""
        ctx = self.ctx
        mp = ctx.mp
        s = to_mp(s, ctx)
        M = self.modulus
        if self.is_zeta:
            value = hurwitz_zeta_sderiv(s, 1, ctx)
        else:
            total = mp.mpc(0)
            for j in range(1, M):
                if self.character.exponent(j) is not None:
                    total += self.character.value(j, ctx) * hurwitz_zeta_sderiv(s, mp.mpf(j) / M, ctx)
            value = mp.power(M, -s) * (total - mp.log(M) * self._L(s, ctx))
        check = cauchy_derivative(lambda u, inner: self._L(u, inner), s, ctx)
        tol = mp.mpf(10) ** (-(ctx.digits // 2)) * max(1, abs(value))
        if abs(value - check) > tol:
            raise AccuracyLossError(
                f"L'(s) routes disagree by {mp.nstr(abs(value - check), 5)}", achieved=abs(value - check)
            )
        return value

    # -- completed function --------------------------------------------------
    def _gamma_factor_log(self, s, ctx):
        mp = ctx.mp
        a = self.parity_a
        u = (s + a) / 2
        return u * mp.log(mp.mpf(self.modulus) / mp.pi) + mp.loggamma(u)

    def _near_gamma_pole(self, s, ctx):
        mp = ctx.mp
        u = (s + self.parity_a) / 2
        return mp.re(u) < 0.25 and abs(u - mp.nint(mp.re(u))) < 0.25

    def _xi_direct(self, s, ctx):
        return ctx.mp.exp(self._gamma_factor_log(s, ctx)) * self._L(s, ctx)

    def _reflected(self, s, ctx):
        # xi(s) = W xi(1 - s, conj chi), evaluated where the right side is regular
        dual = self.conjugate().at(ctx)
        return self.root_number(ctx) * dual._xi_direct(1 - s, ctx)

    def xi(self, s):
        """Completed ``(M/pi)^((s+a)/2) Gamma((s+a)/2) L(s)``; finite at trivial zeros."""
        ctx = self.ctx
        mp = ctx.mp
        s = to_mp(s, ctx)
        if self.is_zeta and (abs(s - 1) <= ctx.eps() or abs(s) <= ctx.eps()):
            raise PoleError("completed zeta has poles at s = 0 and s = 1")
        inner = ctx.extended(_boost_for_height(mp.im(s)))
        s_in = to_mp(s, inner)
        if self._near_gamma_pole(s_in, inner):
            if self.is_zeta and abs(s) < 0.25:
                raise PoleError("completed zeta has a pole at s = 0")
            return mp.convert(self._reflected(s_in, inner))
        return mp.convert(self._xi_direct(s_in, inner))

    def fe_residual(self, s):
        """Relative residual of ``xi(s) = W xi(1 - s, conj chi)``, both sides directly."""
        ctx = self.ctx
        mp = ctx.mp
        inner = ctx.extended(_boost_for_height(mp.im(to_mp(s, ctx))))
        s = to_mp(s, inner)
        lhs = self._xi_direct(s, inner)
        rhs = self.root_number(inner) * self.conjugate().at(inner)._xi_direct(1 - s, inner)
        return mp.convert(abs(lhs - rhs) / max(abs(lhs), abs(rhs)))

    def hardy_z(self, t):
        """Real function of ``t`` with ``|Z(t)| = |L(1/2 + it)|``.

        ``W^(-1/2) xi(1/2 + it)`` is real on the line; dividing by the modulus
        of the gamma factor leaves the rotated value of ``L`` itself.
        """
        ctx = self.ctx
        mp = ctx.mp
        t = to_mp(t, ctx)
        s = mp.mpc(mp.mpf(1) / 2, t)
        phase = mp.im(self._gamma_factor_log(s, ctx))
        rot = self._rotation(ctx) * mp.expj(phase)
        return mp.re(rot * self.L(s))

    def _rotation(self, ctx):
        key = ("rot", ctx.digits)
        if key not in self._cache:
            self._cache[key] = 1 / ctx.mp.sqrt(self.root_number(ctx))
        return self._cache[key]


def dirichlet_L(s, series):
    return series.L(s)


def dirichlet_L_deriv(s, series):
    return series.L_deriv(s)


def completed_xi(s, series):
    return series.xi(s)


def hardy_z(t, series):
    return series.hardy_z(t)


# ---------------------------------------------------------------------------
# cusp forms


def _coeff(x, ctx):
    return to_mp(x, ctx)


@dataclass(frozen=True)
class CuspFormLSeries:
    """``L_f(s, psi)`` for ``f`` of level ``Q`` twisted by primitive ``psi`` mod ``r``.

    ``root_factor = i^k chi(r) psi(Q) eps_psi^2 / r`` links ``Lambda_f(s, psi)``
    to ``Lambda_g(k - s, conj psi)``.
    """

    form: CuspFormData
    twist: DirichletCharacter
    ctx: PrecisionContext = DEFAULT_CONTEXT

    def __post_init__(self):
        Q, r = self.form.level, self.twist.modulus
        if math.gcd(Q, r) != 1:
            raise ParameterError(f"level {Q} and twist modulus {r} must be coprime")
        if not self.twist.primitive:
            raise ParameterError("the twist must be a primitive character")
        neb = self.form.nebentypus
        if not (neb.primitive or neb.is_principal):
            raise ParameterError("nebentypus must be primitive or principal")

    @property
    def weight(self):
        return self.form.weight

    @property
    def level_N(self):
        return self.form.level * self.twist.modulus ** 2

    def at(self, ctx):
        return CuspFormLSeries(self.form, self.twist, ctx)

    def root_factor(self, ctx=None):
        ctx = ctx or self.ctx
        mp = ctx.mp
        k, Q, r = self.weight, self.form.level, self.twist.modulus
        eps = self.twist.gauss_sum(ctx)
        return (mp.mpc(0, 1) ** k * self.form.nebentypus.value(r, ctx)
                * self.twist.value(Q, ctx) * eps**2 / r)

    def dual(self):
        """The series of ``(g, conj psi)`` on the other side of the functional equation."""
        f = self.form
        g_form = CuspFormData(f.weight, f.level, f.nebentypus.conjugate(), fricke_partner(f),
                              f.coeffs_f, f.source, normalized=False)
        return CuspFormLSeries(g_form, self.twist.conjugate(), self.ctx)

    # -- incomplete-gamma sums ---------------------------------------------
    def _side(self, coeffs, twist, s, tol, ctx):
        """``sum a(n) twist(n) (sqrt N / 2 pi n)^s Gamma(s, 2 pi n / sqrt N)`` with certified tail."""
        mp = ctx.mp
        N = self.level_N
        k = self.weight
        sqN = mp.sqrt(N)
        x1 = 2 * mp.pi / sqN
        sigma = float(mp.re(s))
        decay = math.exp(-2 * math.pi / math.sqrt(N))
        power = max(0.0, k / 2 - 1)
        total = mp.mpc(0)
        n = 0
        available = len(coeffs) - 1
        while True:
            n += 1
            if n > available:
                raise InsufficientCoefficientsError(
                    f"incomplete-gamma series needs more than {available} coefficients",
                    required=self._required(sigma, tol, n),
                )
            a = coeffs[n]
            chi = twist.exponent(n)
            if a != 0 and chi is not None:
                x = x1 * n
                total += _coeff(a, ctx) * twist.value(n, ctx) * mp.power(1 / x, s) * mp.gammainc(s, x)
            bound = self._tail_bound(n, sigma, decay, power)
            if bound is not None and bound < tol:
                return total

    def _tail_bound(self, n0, sigma, decay, power):
        """Bound on ``sum_{n > n0}`` of the term moduli, or ``None`` if not yet geometric.

        Uses ``|a(n)| <= 2 sqrt(n) n^((k-1)/2)``, ``|Gamma(s, x)| <= Gamma(sigma, x)
        <= x^(sigma-1) e^-x / (1 - (sigma-1)/x)``.
        """
        N = self.level_N
        x = 2 * math.pi * (n0 + 1) / math.sqrt(N)
        corr = 1.0
        if sigma > 1:
            if x <= 2 * (sigma - 1):
                return None
            corr = 1 / (1 - (sigma - 1) / x)
        q = decay * ((n0 + 2) / (n0 + 1)) ** power
        if q >= 1:
            return None
        first = 2 * math.sqrt(N) / (2 * math.pi) * (n0 + 1) ** (self.weight / 2 - 1) * math.exp(-x) * corr
        return first / (1 - q)

    def _required(self, sigma, tol, start):
        decay = math.exp(-2 * math.pi / math.sqrt(self.level_N))
        power = max(0.0, self.weight / 2 - 1)
        n = start
        while True:
            b = self._tail_bound(n, sigma, decay, power)
            if b is not None and b < tol:
                return n
            n += 1

    def lambda_f(self, s):
        """Completed ``Lambda_f(s, psi)`` by the incomplete-gamma splitting."""
        ctx = self.ctx
        mp = ctx.mp
        s = to_mp(s, ctx)
        t = mp.im(s)
        inner = ctx.extended(_boost_for_height(t))
        s_in = to_mp(s, inner)
        # absolute target scaled with the natural size exp(-pi |t| / 2)
        tol = float(ctx.series_tail_tol) * math.exp(-math.pi * abs(float(t)) / 2)
        k = self.weight
        f = self.form
        g = fricke_partner(f)
        first = self._side(f.coeffs_f, self.twist, s_in, tol, inner)
        second = self._side(g, self.twist.conjugate(), k - s_in, tol, inner)
        return mp.convert(first + self.root_factor(inner) * second)

    def dirichlet_series(self, s, n_terms=None):
        """Direct ``sum a_f(n) psi(n) n^-s``; only meaningful far right of the strip."""
        ctx = self.ctx
        mp = ctx.mp
        s = to_mp(s, ctx)
        n_terms = n_terms or self.form.n_max
        total = mp.mpc(0)
        for n in range(1, n_terms + 1):
            if self.twist.exponent(n) is not None and self.form.coeffs_f[n] != 0:
                total += _coeff(self.form.coeffs_f[n], ctx) * self.twist.value(n, ctx) * mp.power(n, -s)
        return total

    def fe_residual(self, s):
        """Relative residual of ``Lambda_f(s) = root_factor Lambda_g(k - s)``."""
        mp = self.ctx.mp
        s = to_mp(s, self.ctx)
        lhs = self.lambda_f(s)
        rhs = self.root_factor() * self.dual().lambda_f(self.weight - s)
        return abs(lhs - rhs) / max(abs(lhs), abs(rhs))

    def residue_numerator(self, rho):
        """``Gamma(rho) L_f(rho, psi) = Lambda_f(rho, psi) (2 pi / sqrt N)^rho``."""
        mp = self.ctx.mp
        rho = to_mp(rho, self.ctx)
        return self.lambda_f(rho) * mp.power(2 * mp.pi / mp.sqrt(self.level_N), rho)

    def lfprime_at_zero(self):
        """``L_f'(0, psi)``: ``L_f`` vanishes at 0 against the pole of ``Gamma``, so it is ``Lambda_f(0)``."""
        return self.lambda_f(0)


def lambda_f(s, Lf):
    return Lf.lambda_f(s)


def residue_numerator(rho, Lf):
    return Lf.residue_numerator(rho)


def lfprime_at_zero(Lf):
    return Lf.lfprime_at_zero()

"""Working precision and the special functions every other module consumes.

All numbers are :mod:`mpmath` multiprecision values.  Each
:class:`PrecisionContext` owns a private ``mpmath.MPContext`` so that
evaluations at different precisions never touch shared global state.

Gamma, log-gamma, the upper incomplete gamma function and the Hurwitz zeta
value are delegated to mpmath.  Derivatives (Cauchy circles), the Gauss
hypergeometric function on ``z <= 0`` and the Mellin-Barnes integral are
implemented here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import mpmath

from .errors import AccuracyLossError, ParameterError, PoleError

__all__ = [
    "PrecisionContext",
    "DEFAULT_CONTEXT",
    "gamma",
    "log_gamma",
    "upper_incomplete_gamma",
    "hurwitz_zeta",
    "hurwitz_zeta_sderiv",
    "cauchy_derivative",
    "central_difference",
    "gauss_2f1",
    "gauss_2f1_minus_one",
    "gauss_2f1_taylor_remainder",
    "mellin_barnes_integrand",
    "mellin_barnes_u",
    "mellin_barnes_u_closed_form",
]


@dataclass(frozen=True)
class PrecisionContext:
    """Decimal working precision plus the truncation targets derived from it.

    ``series_tail_tol`` and ``quad_tol`` default to ``10**-(digits - 10)``.
    """

    digits: int = 60
    series_tail_tol: object = None
    quad_tol: object = None

    def __post_init__(self):
        if int(self.digits) != self.digits or self.digits < 30:
            raise ParameterError(f"digits must be an integer >= 30, got {self.digits!r}")
        object.__setattr__(self, "digits", int(self.digits))
        default = self.mp.mpf(10) ** (-(self.digits - 10))
        for name in ("series_tail_tol", "quad_tol"):
            value = getattr(self, name)
            value = default if value is None else self.mp.mpf(value)
            if not 0 < value <= self.mp.mpf("1e-15"):
                raise ParameterError(f"{name} must lie in (0, 1e-15], got {value}")
            object.__setattr__(self, name, value)

    @cached_property
    def mp(self):
        ctx = mpmath.MPContext()
        ctx.dps = self.digits
        return ctx

    def extended(self, extra):
        """Same tolerances, ``extra`` more working digits."""
        return PrecisionContext(self.digits + int(extra), self.series_tail_tol, self.quad_tol)

    def with_digits(self, digits):
        """A fresh context at ``digits`` with default tolerances."""
        return PrecisionContext(digits)

    def eps(self):
        return self.mp.mpf(10) ** (-self.digits)


DEFAULT_CONTEXT = PrecisionContext()


def to_mp(x, ctx):
    """Convert ints, Fractions, floats, strings and mpmath values into ``ctx``."""
    mp = ctx.mp
    if hasattr(x, "to_mp"):
        return x.to_mp(ctx)
    if isinstance(x, Fraction):
        return mp.mpf(x.numerator) / x.denominator
    if isinstance(x, (mpmath.mpf, mpmath.mpc)) or hasattr(x, "_mpf_") or hasattr(x, "_mpc_"):
        return +mp.convert(x)
    return mp.mpmathify(x)


def _check_gamma_pole(s, ctx):
    mp = ctx.mp
    re, im = mp.re(s), mp.im(s)
    tol = ctx.eps() * max(1, abs(re))
    if abs(im) <= tol and re < 0.5 and abs(re - mp.nint(re)) <= tol:
        raise PoleError(f"gamma has a pole at s = {mp.nstr(mp.nint(re), 5)}")


def gamma(s, ctx=DEFAULT_CONTEXT):
    """Euler's gamma function."""
    s = to_mp(s, ctx)
    _check_gamma_pole(s, ctx)
    return ctx.mp.gamma(s)


def log_gamma(s, ctx=DEFAULT_CONTEXT):
    """Principal branch of log Gamma, continuous away from the negative real axis.

    Overflow-safe route for ``Gamma(rho)`` high on vertical lines.
    """
    s = to_mp(s, ctx)
    _check_gamma_pole(s, ctx)
    return ctx.mp.loggamma(s)


def upper_incomplete_gamma(s, x, ctx=DEFAULT_CONTEXT):
    """``Gamma(s, x) = int_x^oo t^(s-1) e^(-t) dt`` for ``x > 0``."""
    mp = ctx.mp
    s = to_mp(s, ctx)
    x = to_mp(x, ctx)
    if mp.im(x) != 0 or x <= 0:
        raise ParameterError("upper_incomplete_gamma requires real x > 0")
    value = mp.gammainc(s, x)
    if not mp.isfinite(value):
        raise AccuracyLossError(f"Gamma({s}, {x}) did not evaluate to a finite number")
    return value


def hurwitz_zeta(s, alpha, ctx=DEFAULT_CONTEXT):
    """Hurwitz zeta ``sum_{n>=0} (n + alpha)^(-s)``, analytically continued.

    ``alpha`` may be an exact :class:`~fractions.Fraction`; it is converted at
    the working precision.
    """
    mp = ctx.mp
    s = to_mp(s, ctx)
    alpha = to_mp(alpha, ctx)
    if mp.im(alpha) != 0 or alpha <= 0:
        raise ParameterError("hurwitz_zeta requires real alpha > 0")
    if abs(s - 1) <= ctx.eps():
        raise PoleError("hurwitz_zeta has a pole at s = 1")
    return mp.zeta(s, alpha)


def cauchy_derivative(f, s, ctx=DEFAULT_CONTEXT, radius=None, points=8):
    """First derivative of an analytic ``f`` by the trapezoid rule on a circle.

    ``f(s, inner_ctx)`` is called at ``points`` nodes on the circle of the
    given radius (default ``10**-(digits/4)``), with the working precision
    raised by ``digits/4 + 10`` to absorb the cancellation.
    """
    inner = ctx.extended(ctx.digits // 4 + 10)
    mp = inner.mp
    s = to_mp(s, inner)
    r = mp.mpf(10) ** (-(ctx.digits // 4)) if radius is None else to_mp(radius, inner)
    total = mp.mpc(0)
    for j in range(points):
        w = mp.expjpi(mp.mpf(2 * j) / points)
        total += f(s + r * w, inner) / w
    return ctx.mp.convert(total / (points * r))


def central_difference(f, s, ctx=DEFAULT_CONTEXT, h=None):
    """Symmetric difference quotient, used to validate Cauchy derivatives."""
    inner = ctx.extended(ctx.digits // 2 + 10)
    mp = inner.mp
    s = to_mp(s, inner)
    h = mp.mpf(10) ** (-(ctx.digits // 3 + 1)) if h is None else to_mp(h, inner)
    return ctx.mp.convert((f(s + h, inner) - f(s - h, inner)) / (2 * h))


def _validated_derivative(f, s, ctx, what):
    value = cauchy_derivative(f, s, ctx)
    check = central_difference(f, s, ctx)
    tol = ctx.mp.mpf(10) ** (-(ctx.digits // 2)) * max(1, abs(value))
    gap = abs(value - check)
    if gap > tol:
        raise AccuracyLossError(
            f"{what}: Cauchy and central-difference derivatives disagree by {ctx.mp.nstr(gap, 5)}",
            achieved=gap,
        )
    return value


def hurwitz_zeta_sderiv(s, alpha, ctx=DEFAULT_CONTEXT):
    """``d/ds zeta(s, alpha)`` by a Cauchy circle, checked against a central difference."""
    s = to_mp(s, ctx)
    if abs(s - 1) <= ctx.mp.mpf(10) ** (-(ctx.digits // 4 - 1)):
        raise PoleError("hurwitz_zeta_sderiv has a pole at s = 1")
    return _validated_derivative(
        lambda u, inner: hurwitz_zeta(u, alpha, inner), s, ctx, "hurwitz_zeta_sderiv"
    )


# ---------------------------------------------------------------------------
# Gauss hypergeometric function on the ray z <= 0


def _is_nonpositive_integer(x, mp):
    return x <= 0 and x == mp.nint(x)


def _hyp2f1_series(a, b, c, z, mp, tol, max_terms=200000):
    total = term = mp.mpf(1)
    big_a, big_b = abs(a), abs(b)
    n = 0
    while True:
        term *= (a + n) * (b + n) / ((c + n) * (n + 1)) * z
        total += term
        n += 1
        if term == 0:
            return total
        if n + c > 0:
            # sup of the term ratio over all later indices
            ratio = abs(z) * max(1, (n + big_a) / (n + 1)) * max(1, (n + big_b) / (n + c))
            if ratio < 1 and abs(term) * ratio / (1 - ratio) <= tol * abs(total):
                return total
        if n > max_terms:
            raise AccuracyLossError("2F1 series did not converge", achieved=abs(term))


def gauss_2f1(a, b, c, z, ctx=DEFAULT_CONTEXT, method="auto"):
    """Gauss ``2F1(a, b; c; z)`` for real parameters and real ``z <= 0``.

    ``method="series"`` sums the defining series (``|z| < 1``);
    ``method="pfaff"`` sums ``(1-z)^(-a) 2F1(a, c-b; c; z/(z-1))``, whose
    argument lies in ``[0, 1)``.  ``"auto"`` uses the series for
    ``z > -1/2`` and the Pfaff form otherwise.
    """
    inner = ctx.extended(8)
    mp = inner.mp
    a, b, c, z = (to_mp(v, inner) for v in (a, b, c, z))
    if any(mp.im(v) != 0 for v in (a, b, c, z)):
        raise ParameterError("gauss_2f1 takes real arguments only")
    if _is_nonpositive_integer(c, mp):
        raise ParameterError(f"c = {c} is a non-positive integer")
    if z > 0:
        raise ParameterError("gauss_2f1 is only provided on the ray z <= 0")
    if method == "auto":
        method = "series" if z > -0.5 else "pfaff"
    tol = mp.mpf(10) ** (-(ctx.digits + 2))
    if method == "series":
        if z <= -1:
            raise ParameterError("defining series diverges for z <= -1")
        value = _hyp2f1_series(a, b, c, z, mp, tol)
    elif method == "pfaff":
        w = z / (z - 1)
        value = (1 - z) ** (-a) * _hyp2f1_series(a, c - b, c, w, mp, tol)
    else:
        raise ParameterError(f"unknown method {method!r}")
    return ctx.mp.convert(value)


def gauss_2f1_minus_one(a, b, c, z, ctx=DEFAULT_CONTEXT):
    """``2F1(a, b; c; z) - 1`` without cancellation for small ``|z|``."""
    return gauss_2f1_taylor_remainder(a, b, c, z, 1, ctx)


def gauss_2f1_taylor_remainder(a, b, c, z, order, ctx=DEFAULT_CONTEXT):
    """``2F1(a, b; c; z)`` minus its Taylor polynomial of degree ``order - 1``.

    For ``z > -1/2`` the defining series is summed from the term of degree
    ``order``; otherwise the polynomial is subtracted from the Pfaff value
    at enough extra digits to absorb the cancellation.
    """
    order = int(order)
    if order < 0:
        raise ParameterError("order must be non-negative")
    inner = ctx.extended(8)
    mp = inner.mp
    a, b, c, z = (to_mp(v, inner) for v in (a, b, c, z))
    if _is_nonpositive_integer(c, mp):
        raise ParameterError(f"c = {c} is a non-positive integer")
    if z > 0:
        raise ParameterError("gauss_2f1_taylor_remainder is only provided on the ray z <= 0")
    if order == 0:
        return gauss_2f1(a, b, c, z, ctx)
    if z == 0:
        return ctx.mp.mpf(0)
    terms = [mp.mpf(1)]
    for n in range(order - 1):
        terms.append(terms[-1] * (a + n) * (b + n) / ((c + n) * (n + 1)) * z)
    if z <= -0.5:
        biggest = max(abs(t) for t in terms)
        wide = ctx.extended(8 + max(0, int(mp.log10(biggest)) + 1))
        full = gauss_2f1(a, b, c, z, wide)
        return ctx.mp.convert(full - wide.mp.fsum(to_mp(t, wide) for t in terms))
    tol = mp.mpf(10) ** (-(ctx.digits + 2))
    first = terms[-1] * (a + order - 1) * (b + order - 1) / ((c + order - 1) * order) * z
    return ctx.mp.convert(_series_from(a, b, c, z, first, order, mp, tol))


def _series_from(a, b, c, z, term, n, mp, tol, max_terms=200000):
    """Sum of the 2F1 series from the degree-``n`` term ``term`` onwards."""
    total = term
    big_a, big_b = abs(a), abs(b)
    while True:
        term *= (a + n) * (b + n) / ((c + n) * (n + 1)) * z
        total += term
        n += 1
        if term == 0:
            return total
        if n + c > 0:
            ratio = abs(z) * max(1, (n + big_a) / (n + 1)) * max(1, (n + big_b) / (n + c))
            if ratio < 1 and abs(term) * ratio / (1 - ratio) <= tol * abs(total):
                return total
        if n > max_terms:
            raise AccuracyLossError("2F1 series did not converge", achieved=abs(term))


# ---------------------------------------------------------------------------
# Mellin-Barnes integral of the hypergeometric kernel


def mellin_barnes_integrand(s, a, k, X, ctx=DEFAULT_CONTEXT):
    """``Gamma(s) Gamma((k-s+a)/2) / Gamma((s-k+1+a)/2) * X^s`` via log-gamma."""
    mp = ctx.mp
    s = to_mp(s, ctx)
    log_value = (
        mp.loggamma(s)
        + mp.loggamma((k - s + a) / mp.mpf(2))
        - mp.loggamma((s - k + 1 + a) / mp.mpf(2))
        + s * mp.log(X)
    )
    return mp.exp(log_value)


def mellin_barnes_u(n, a, k, N, M, y, ctx=DEFAULT_CONTEXT, lam=-0.5, max_height=5000, panel=2):
    """The line integral ``U_{n,a}(y)`` on ``Re(s) = k - lam``, by quadrature.

    The integrand is Schwarz-symmetric for real parameters, so the integral
    reduces to ``(1/pi) int_0^T Re F(c + it) dt``.  The height ``T`` is the
    first integer beyond which the Stirling-decay tail bound falls below
    ``quad_tol`` times the integrand modulus at ``t = 0``; the integral is
    split into Gauss-Legendre panels of width ``panel``.
    """
    if a not in (0, 1):
        raise ParameterError("parity a must be 0 or 1")
    if not -1 < float(lam) < 0:
        raise ParameterError("abscissa offset lam must lie in (-1, 0)")
    if to_mp(y, ctx) <= 0:
        raise ParameterError("y must be positive")
    # Gauss-Legendre panels in the decaying tail lose digits at the target
    # precision; the quadrature runs at half again as many digits.
    inner = ctx.extended(ctx.digits // 2)
    mp = inner.mp
    y = to_mp(y, inner)
    c = k - to_mp(lam, inner)
    X = mp.mpf(N) * y / (4 * mp.pi * M * n)

    def f(t):
        return mp.re(mellin_barnes_integrand(mp.mpc(c, t), a, k, X, inner))

    # tolerances are relative to the integrand scale on the real axis
    scale = abs(mellin_barnes_integrand(c, a, k, X, inner))
    tol = ctx.quad_tol * scale
    T = _truncation_height(lambda t: abs(mellin_barnes_integrand(mp.mpc(c, t), a, k, X, inner)),
                           k, tol, max_height)
    # poles of the integrand sit at distance 1/2 from t = 0: grade the first panels
    nodes = [0, mp.mpf(1) / 8, mp.mpf(1) / 4, mp.mpf(1) / 2, 1]
    nodes += list(range(1 + panel, T + 1, panel)) + ([T] if (T - 1) % panel else [])
    value = mp.quad(f, nodes, method="gauss-legendre")
    return ctx.mp.mpf(value / mp.pi)


def _truncation_height(modulus, k, tol, max_height):
    # |F(c+it)| ~ e^{-pi t/2} t^{k-1}; its tail integral is below 2|F(T)|/(pi - 2k/T).
    T = max(8, 2 * k)
    while True:
        bound = 2 * modulus(T) / (math.pi - 2.0 * k / T)
        if bound < tol:
            return T
        T += max(4, T // 8)
        if T > max_height:
            raise AccuracyLossError("Mellin-Barnes tail bound unattainable", achieved=bound)


def mellin_barnes_u_closed_form(n, a, k, N, M, y, ctx=DEFAULT_CONTEXT):
    """Closed form of ``U_{n,a}(y)`` through the Gauss hypergeometric function."""
    if a not in (0, 1):
        raise ParameterError("parity a must be 0 or 1")
    mp = ctx.mp
    Y = mp.mpf(N) * to_mp(y, ctx) / (2 * mp.pi * M * n)
    hyp = gauss_2f1(mp.mpf(k + a) / 2, mp.mpf(k + 1 + a) / 2, mp.mpf(1 + 2 * a) / 2, -Y**2, ctx)
    return 2 / mp.sqrt(mp.pi) * Y ** (k + a) * mp.gamma(k + a) / mp.mpf(2) ** k * (hyp - (1 - a))

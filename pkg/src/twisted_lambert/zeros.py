"""Zeros of Dirichlet L-functions on the critical line and their bracketing.

Zeros are located as sign changes of the rotated function ``Z(t)`` (real on
the line, ``|Z(t)| = |L(1/2 + it)|``) on a uniform grid, scanned at a coarse
precision, and then refined at full precision by Illinois regula falsi, a
bracketing secant method that never leaves the sign-change interval.

Certification of a zero ``rho = 1/2 + it``:

* residual ``|L(rho)|`` at the refined ordinate, which must be at most
  ``10**-(digits/2)``;
* simplicity witness ``|L'(rho)| > 1000 * residual``.

The completed value ``xi(rho)`` carries the gamma factor, which is of size
``exp(-pi t/4)``, so ``|L(rho)|`` is the scale-free residual and bounds
``|xi(rho)|`` from above once multiplied by that factor.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

from .errors import CertificationError, ParameterError, SimplicityError
from .lfunctions import DirichletLSeries
from .precision import PrecisionContext, to_mp

__all__ = [
    "LZero",
    "Bracketing",
    "find_zeros",
    "first_zeros",
    "scan_sign_changes",
    "check_scan_stability",
    "certify_zero",
    "export_zeros",
    "import_zeros",
    "bracket",
    "bracket_threshold",
]

SCAN_DIGITS = 30


@dataclass(frozen=True)
class LZero:
    """A certified zero ``1/2 + i t`` of ``L(s, chi)`` with ``t > 0``."""

    modulus: int
    character_digest: str
    index: int
    t: object
    residual: object
    derivative: object = None

    @property
    def rho(self):
        return self.t.context.mpc(0.5, self.t)


def _coarse(series):
    """The scan-precision twin of ``series`` with a memo of ``Z`` on grid points."""
    key = ("coarse", SCAN_DIGITS)
    if key not in series._cache:
        coarse = series.at(PrecisionContext(min(series.ctx.digits, SCAN_DIGITS)))
        memo = {}

        def z(t):
            if t not in memo:
                memo[t] = coarse.hardy_z(t)
            return memo[t]

        series._cache[key] = (coarse, z)
    return series._cache[key]


def scan_sign_changes(series, t_min, t_max, step=0.05):
    """Grid intervals ``(a, b)`` in ``(t_min, t_max]`` across which ``Z`` changes sign."""
    coarse, z = _coarse(series)
    mp = coarse.ctx.mp
    step = mp.mpf(step)
    n_steps = int(mp.ceil((mp.mpf(t_max) - mp.mpf(t_min)) / step))
    out = []
    a = mp.mpf(t_min)
    if a <= 0:
        a = step / 2
    za = z(a)
    for j in range(1, n_steps + 1):
        b = min(mp.mpf(t_min) + j * step, mp.mpf(t_max))
        if b <= a:
            continue
        zb = z(b)
        if za == 0:
            out.append((a - step / 4, a + step / 4))
        elif za * zb < 0:
            out.append((a, b))
        a, za = b, zb
    return out


def _illinois(f, a, b, fa, fb, width, max_iter=400):
    """Illinois regula falsi on a sign-change interval, down to ``width``."""
    side = 0
    for _ in range(max_iter):
        if abs(b - a) <= width:
            break
        c = (a * fb - b * fa) / (fb - fa)
        if not (min(a, b) < c < max(a, b)):
            c = (a + b) / 2
        fc = f(c)
        if fc == 0:
            return c, c
        if fc * fb > 0:
            b, fb = c, fc
            if side == -1:
                fa /= 2
            side = -1
        else:
            a, fa = c, fc
            if side == 1:
                fb /= 2
            side = 1
    return (a, b) if a < b else (b, a)


def certify_zero(series, t, index=0):
    """Residual and simplicity certification of the ordinate ``t``; returns an :class:`LZero`."""
    ctx = series.ctx
    mp = ctx.mp
    t = to_mp(t, ctx)
    rho = mp.mpc(mp.mpf(1) / 2, t)
    residual = abs(series.L(rho))
    bound = mp.mpf(10) ** (-(ctx.digits // 2))
    if residual > bound:
        raise CertificationError(
            f"zero #{index} at t = {mp.nstr(t, 15)}: residual {mp.nstr(residual, 3)} exceeds {mp.nstr(bound, 3)}"
        )
    deriv = abs(series.L_deriv(rho))
    if not deriv > 1000 * residual:
        raise SimplicityError(
            f"zero #{index} at t = {mp.nstr(t, 15)}: |L'| = {mp.nstr(deriv, 3)} "
            f"does not dominate the residual {mp.nstr(residual, 3)}"
        )
    ch = series.character
    return LZero(ch.modulus, ch.values_digest(), index, t, residual, deriv)


def _refine_width(ctx, t):
    return ctx.mp.mpf(10) ** (-(ctx.digits - 10)) * max(1, abs(t))


def _refine(series, a, b, fa=None, fb=None):
    ctx = series.ctx
    mp = ctx.mp
    a, b = to_mp(a, ctx), to_mp(b, ctx)
    f = series.hardy_z
    fa = f(a) if fa is None else fa
    fb = f(b) if fb is None else fb
    if fa * fb > 0:
        raise CertificationError(f"no sign change of Z on [{mp.nstr(a, 12)}, {mp.nstr(b, 12)}]")
    width = _refine_width(ctx, b)
    lo, hi = _illinois(f, a, b, fa, fb, width)
    return (lo + hi) / 2


def find_zeros(series, t_max=100, ctx=None, scan_step=0.05, t_min=0):
    """Certified zeros with ``t_min < t <= t_max``, sorted by ordinate."""
    if ctx is not None:
        series = series.at(ctx)
    if not isinstance(series, DirichletLSeries):
        raise ParameterError("find_zeros expects a DirichletLSeries")
    intervals = scan_sign_changes(series, t_min, t_max, scan_step)
    zeros = []
    for i, (a, b) in enumerate(intervals, start=1):
        t = _refine(series, a, b)
        zeros.append(certify_zero(series, t, i))
    _check_ordering(zeros)
    return zeros


def first_zeros(series, count, ctx=None, scan_step=0.05, chunk=25):
    """The ``count`` lowest positive-ordinate zeros found by widening the scan."""
    if ctx is not None:
        series = series.at(ctx)
    zeros = []
    lo = 0
    while len(zeros) < count:
        hi = lo + chunk
        found = find_zeros(series, hi, scan_step=scan_step, t_min=lo)
        for z in found:
            zeros.append(LZero(z.modulus, z.character_digest, len(zeros) + 1, z.t, z.residual, z.derivative))
        lo = hi
    return zeros[:count]


def check_scan_stability(series, t_max, zeros, scan_step=0.05):
    """Halve the scan step and confirm no extra sign change appears below ``t_max``.

    Returns the number of sign changes seen on the finer grid; raises
    :class:`CertificationError` if it differs from ``len(zeros)``.
    """
    fine = scan_sign_changes(series, 0, t_max, float(scan_step) / 2)
    if len(fine) != len(zeros):
        raise CertificationError(
            f"scan step {float(scan_step) / 2} finds {len(fine)} sign changes below t = {t_max}, "
            f"step {scan_step} found {len(zeros)}"
        )
    for (a, b), z in zip(fine, zeros):
        if not a <= z.t <= b:
            raise CertificationError(f"zero #{z.index} is not bracketed by the finer grid")
    return len(fine)


def _check_ordering(zeros):
    for z0, z1 in zip(zeros, zeros[1:]):
        if not z1.t - z0.t > 1e-6:
            raise CertificationError(f"zeros #{z0.index} and #{z1.index} are not separated")


# ---------------------------------------------------------------------------
# CSV import / export

_FIELDS = ("modulus", "character_values_digest", "index", "t")


def export_zeros(zeros, path, digits=None):
    """Write ``modulus,character_values_digest,index,t`` rows (``t`` to the stored precision)."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(_FIELDS)
        for z in zeros:
            mp = z.t.context
            text = mp.nstr(z.t, digits or mp.dps + 5, strip_zeros=False)
            writer.writerow((z.modulus, z.character_digest, z.index, text))


def _significant_digits(text):
    mantissa = text.lower().split("e")[0].lstrip("+-").replace(".", "").lstrip("0")
    return max(1, len(mantissa))


def import_zeros(path, series):
    """Read zeros for ``series`` and re-certify each one.

    Every stored ordinate must sit inside a sign change of ``Z`` across a
    window of ten units in its last stored digit; the ordinate is refined
    when its residual is above ``10**-(digits/2)``.
    """
    ctx = series.ctx
    mp = ctx.mp
    ch = series.character
    zeros = []
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [row for row in csv.reader(fh) if row and any(cell.strip() for cell in row)]
    if rows and rows[0][0].strip().lower() == "modulus":
        rows = rows[1:]
    for lineno, row in enumerate(rows, start=1):
        where = f"row {lineno}"
        if len(row) != 4:
            raise CertificationError(f"{where}: expected 4 columns, got {len(row)}")
        modulus, digest, index, text = (cell.strip() for cell in row)
        if int(modulus) != ch.modulus or digest != ch.values_digest():
            raise CertificationError(f"{where}: zero belongs to a different character")
        t = mp.mpf(text)
        if t <= 0:
            raise CertificationError(f"{where}: ordinate must be positive")
        ulp = mp.mpf(10) ** (int(mp.floor(mp.log10(t))) - _significant_digits(text) + 1)
        # never narrower than the refinement width used by the finder
        half = max(10 * ulp, 10 * _refine_width(ctx, t))
        a, b = t - half, t + half
        fa, fb = series.hardy_z(a), series.hardy_z(b)
        if fa * fb > 0:
            raise CertificationError(f"{where}: no sign change of Z in the certification window around t = {text}")
        rho = mp.mpc(mp.mpf(1) / 2, t)
        if abs(series.L(rho)) > mp.mpf(10) ** (-(ctx.digits // 2)):
            t = _refine(series, a, b, fa, fb)
        try:
            zeros.append(certify_zero(series, t, int(index)))
        except CertificationError as exc:
            raise type(exc)(f"{where}: {exc}") from None
    _check_ordering(zeros)
    return zeros


# ---------------------------------------------------------------------------
# bracketing


def bracket_threshold(t, C=1.0):
    """``exp(-C |t| / log(|t| + 3))``."""
    t = abs(float(t))
    return math.exp(-float(C) * t / math.log(t + 3))


@dataclass(frozen=True)
class Bracketing:
    """A partition of an ordinate-sorted zero list into maximal chains."""

    constant_C: float
    groups: tuple

    def __len__(self):
        return len(self.groups)


def _ordinate(z):
    if isinstance(z, LZero):
        return float(z.t)
    if isinstance(z, complex) or hasattr(z, "_mpc_"):
        return float(z.imag)
    return float(z)


def bracket(zeros, C=1.0):
    """Chain consecutive zeros whose gap is below the sum of their thresholds."""
    if float(C) <= 0:
        raise ParameterError("bracketing constant C must be positive")
    zeros = list(zeros)
    ords = [_ordinate(z) for z in zeros]
    if any(b < a for a, b in zip(ords, ords[1:])):
        raise ParameterError("zeros must be sorted by ordinate")
    groups = []
    current = []
    for i, z in enumerate(zeros):
        if current:
            t0, t1 = ords[i - 1], ords[i]
            if abs(t1 - t0) < bracket_threshold(t0, C) + bracket_threshold(t1, C):
                current.append(z)
                continue
            groups.append(tuple(current))
        current = [z]
    if current:
        groups.append(tuple(current))
    return Bracketing(float(C), tuple(groups))

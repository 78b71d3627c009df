"""Fourier coefficients of the cusp form ``f`` and of its Fricke partner ``g``.

The Ramanujan tau function is generated exactly: the Euler product
``prod (1 - q^m)`` comes from the pentagonal number theorem and is raised to
the 24th power with big-integer (Kronecker substitution) multiplication.

Other forms are read from a small text format::

    weight=12
    level=1
    nebentypus_modulus=1
    nebentypus_values=1
    normalized=true
    1 1 0
    2 -24 0
    ...
    [g]
    1 1 0
    ...

Coefficients are kept exact: integers, :class:`~fractions.Fraction` or
:class:`GaussianRational`, so export followed by ingest is lossless.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import gmpy2

from .characters import build_character, principal_character
from .errors import (
    CoefficientFileError,
    InsufficientCoefficientsError,
    IntegrityError,
    ParameterError,
    UnsupportedLevelError,
)

__all__ = [
    "GaussianRational",
    "CuspFormData",
    "ramanujan_tau",
    "delta_form",
    "divisor_count",
    "load_coefficients",
    "export_coefficients",
    "fricke_partner",
]


@dataclass(frozen=True)
class GaussianRational:
    """An exact complex number with rational parts."""

    re: Fraction
    im: Fraction

    @staticmethod
    def make(re, im=0):
        re, im = Fraction(re), Fraction(im)
        if im == 0:
            return re.numerator if re.denominator == 1 else re
        return GaussianRational(re, im)

    @staticmethod
    def _parts(other):
        if isinstance(other, GaussianRational):
            return other.re, other.im
        if isinstance(other, complex):
            return Fraction(other.real), Fraction(other.imag)
        return Fraction(other), Fraction(0)

    def __add__(self, other):
        a, b = GaussianRational._parts(other)
        return GaussianRational.make(self.re + a, self.im + b)

    __radd__ = __add__

    def __mul__(self, other):
        a, b = GaussianRational._parts(other)
        return GaussianRational.make(self.re * a - self.im * b, self.re * b + self.im * a)

    __rmul__ = __mul__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __eq__(self, other):
        try:
            a, b = GaussianRational._parts(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.re == a and self.im == b

    def __hash__(self):
        return hash((self.re, self.im))

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def abs2(self):
        return self.re * self.re + self.im * self.im

    def to_mp(self, ctx):
        mp = ctx.mp
        return mp.mpc(mp.mpf(self.re.numerator) / self.re.denominator,
                      mp.mpf(self.im.numerator) / self.im.denominator)

    def __complex__(self):
        return complex(float(self.re), float(self.im))


def _abs2(x):
    if isinstance(x, GaussianRational):
        return x.abs2()
    return Fraction(x) * Fraction(x)


def _parts(x):
    if isinstance(x, GaussianRational):
        return x.re, x.im
    return Fraction(x), Fraction(0)


# ---------------------------------------------------------------------------
# Ramanujan tau


def _euler_product(n):
    """Coefficients of ``prod_{m>=1} (1 - q^m)`` up to ``q^n``."""
    c = [0] * (n + 1)
    k = 0
    while True:
        k += 1
        sign = -1 if k % 2 else 1
        lo, hi = k * (3 * k - 1) // 2, k * (3 * k + 1) // 2
        if lo > n:
            break
        c[lo] += sign
        if hi <= n:
            c[hi] += sign
    c[0] = 1
    return c


def _pack(coeffs, bits, offset):
    """Integer ``sum (c_i + offset) 2^(bits i)`` for non-negative shifted digits."""
    nbytes = bits // 8
    raw = b"".join(int(c + offset).to_bytes(nbytes, "little") for c in coeffs)
    return gmpy2.mpz(int.from_bytes(raw, "little"))


def _poly_mul_trunc(x, y, n):
    """Product of integer polynomials ``x``, ``y`` truncated at degree ``n``."""
    x, y = x[: n + 1], y[: n + 1]
    bx = max(abs(c) for c in x)
    by = max(abs(c) for c in y)
    bound = min(len(x), len(y)) * bx * by  # bound on every product coefficient
    bits = ((2 * bound + 1).bit_length() + 8 + 7) // 8 * 8
    # signed digits: X = pack(x + bx) - pack(bx), likewise for y
    X = _pack(x, bits, bx) - _pack([0] * len(x), bits, bx)
    Y = _pack(y, bits, by) - _pack([0] * len(y), bits, by)
    length = len(x) + len(y) - 1
    shift = _pack([0] * length, bits, bound)
    Z = int(X * Y + shift)
    nbytes = bits // 8
    raw = Z.to_bytes(length * nbytes + 1, "little")
    return [
        int.from_bytes(raw[i * nbytes:(i + 1) * nbytes], "little") - bound
        for i in range(min(length, n + 1))
    ]


@lru_cache(maxsize=4)
def _tau_table(n_max):
    # tau(n) is the coefficient of q^(n-1) in prod (1 - q^m)^24
    n = n_max - 1
    p1 = _euler_product(n)
    p2 = _poly_mul_trunc(p1, p1, n)
    p4 = _poly_mul_trunc(p2, p2, n)
    p8 = _poly_mul_trunc(p4, p4, n)
    p16 = _poly_mul_trunc(p8, p8, n)
    p24 = _poly_mul_trunc(p16, p8, n)
    p24 += [0] * (n + 1 - len(p24))
    return tuple([0] + p24)


def ramanujan_tau(n_max):
    """``[0, tau(1), ..., tau(n_max)]`` as exact integers."""
    n_max = int(n_max)
    if n_max < 1:
        raise ParameterError("n_max must be >= 1")
    return list(_tau_table(n_max))


def divisor_count(n):
    count = 0
    for d in range(1, math.isqrt(n) + 1):
        if n % d == 0:
            count += 1 if d * d == n else 2
    return count


# ---------------------------------------------------------------------------
# Form data


@dataclass(frozen=True)
class CuspFormData:
    """Weight, level, nebentypus and coefficient arrays of ``f`` (and ``g``).

    ``coeffs_f[n] = a_f(n)`` with ``coeffs_f[0] = 0``.  For level 1 the
    Fricke partner is ``f`` itself and ``coeffs_g`` is filled in.
    """

    weight: int
    level: int
    nebentypus: object
    coeffs_f: tuple
    coeffs_g: tuple = None
    source: str = field(default="file", compare=False)
    normalized: bool = True

    def __post_init__(self):
        k, Q = self.weight, self.level
        if int(k) != k or k < 1 or k % 2:
            raise ParameterError(f"weight must be a positive even integer, got {k}")
        if int(Q) != Q or Q < 1:
            raise ParameterError(f"level must be a positive integer, got {Q}")
        if self.nebentypus.modulus != Q:
            raise ParameterError("nebentypus modulus must equal the level")
        object.__setattr__(self, "coeffs_f", tuple(self.coeffs_f))
        if self.coeffs_g is not None:
            object.__setattr__(self, "coeffs_g", tuple(self.coeffs_g))
        elif Q == 1:
            object.__setattr__(self, "coeffs_g", self.coeffs_f)
        if self.normalized and (len(self.coeffs_f) < 2 or self.coeffs_f[1] != 1):
            raise IntegrityError("normalized form must have a_f(1) = 1")

    @property
    def n_max(self):
        n = len(self.coeffs_f) - 1
        if self.coeffs_g is not None:
            n = min(n, len(self.coeffs_g) - 1)
        return n

    @property
    def is_real(self):
        seqs = [self.coeffs_f] + ([self.coeffs_g] if self.coeffs_g is not None else [])
        return self.nebentypus.is_real and not any(
            isinstance(x, GaussianRational) for seq in seqs for x in seq
        )

    def truncated(self, n_max):
        if n_max > self.n_max:
            raise InsufficientCoefficientsError(
                f"form has {self.n_max} coefficients, {n_max} requested", required=n_max
            )
        g = None if self.coeffs_g is None else self.coeffs_g[: n_max + 1]
        return CuspFormData(self.weight, self.level, self.nebentypus,
                            self.coeffs_f[: n_max + 1], g, self.source, self.normalized)


def delta_form(n_max=4096):
    """Ramanujan's Delta, weight 12 and level 1, from the exact tau generator."""
    tau = ramanujan_tau(n_max)
    return CuspFormData(12, 1, principal_character(1), tau, tau, "delta-generator", True)


def fricke_partner(data):
    """Coefficients ``a_g`` of the Fricke partner (stored data for level > 1)."""
    if data.level == 1:
        return data.coeffs_f
    if data.coeffs_g is None:
        raise UnsupportedLevelError(
            f"level {data.level} form has no Fricke-partner coefficients; supply a [g] block"
        )
    return data.coeffs_g


def _deligne_screen(coeffs, k, which):
    slack = Fraction(1000001, 1000000) ** 2
    for n in range(1, len(coeffs)):
        if _abs2(coeffs[n]) > divisor_count(n) ** 2 * Fraction(n) ** (k - 1) * slack:
            raise IntegrityError(
                f"|a_{which}({n})| exceeds the Deligne-scale bound d(n) n^((k-1)/2)"
            )


# ---------------------------------------------------------------------------
# Text format

_HEADER_KEYS = ("weight", "level", "nebentypus_modulus", "nebentypus_values", "normalized")


def _parse_number(text, lineno):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise CoefficientFileError(f"cannot parse number {text!r}", line=lineno) from None


def _parse_bool(text, lineno):
    low = text.strip().lower()
    if low in ("true", "yes", "1"):
        return True
    if low in ("false", "no", "0"):
        return False
    raise CoefficientFileError(f"expected true/false, got {text!r}", line=lineno)


def load_coefficients(path, n_max):
    """Read a coefficient file, keeping ``n <= n_max``, and screen it."""
    n_max = int(n_max)
    header = {}
    blocks = {"f": {}, "g": {}}
    current = "f"
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if line.lower() in ("[g]", "[f]"):
                current = line[1].lower()
                continue
            if "=" in line:
                key, _, value = line.partition("=")
                key = key.strip().lower()
                if key not in _HEADER_KEYS:
                    raise CoefficientFileError(f"unknown header key {key!r}", line=lineno)
                header[key] = (value.strip(), lineno)
                continue
            parts = line.split()
            if len(parts) not in (2, 3):
                raise CoefficientFileError("expected 'n re im'", line=lineno)
            try:
                n = int(parts[0])
            except ValueError:
                raise CoefficientFileError(f"bad index {parts[0]!r}", line=lineno) from None
            if n < 1:
                raise CoefficientFileError("indices start at 1", line=lineno)
            if n in blocks[current]:
                raise CoefficientFileError(f"duplicate index {n}", line=lineno)
            re = _parse_number(parts[1], lineno)
            im = _parse_number(parts[2], lineno) if len(parts) == 3 else Fraction(0)
            blocks[current][n] = GaussianRational.make(re, im)

    for key in ("weight", "level"):
        if key not in header:
            raise CoefficientFileError(f"missing header {key}=")
    try:
        k = int(header["weight"][0])
        Q = int(header["level"][0])
    except ValueError as exc:
        raise CoefficientFileError(f"bad integer header: {exc}") from None
    neb_mod = int(header.get("nebentypus_modulus", (str(Q), 0))[0])
    if neb_mod != Q:
        raise CoefficientFileError("nebentypus_modulus must equal level",
                                   line=header.get("nebentypus_modulus", (0, None))[1])
    if "nebentypus_values" in header:
        text, lineno = header["nebentypus_values"]
        items = [v for v in text.strip("[] ").replace(",", " ").split() if v]
        try:
            spec = text if text.lower() in ("principal", "quadratic") else items
            neb = build_character(Q, spec)
        except Exception as exc:
            raise CoefficientFileError(f"bad nebentypus: {exc}", line=lineno) from None
    else:
        neb = principal_character(Q)
    normalized = _parse_bool(header["normalized"][0], header["normalized"][1]) \
        if "normalized" in header else True

    def to_array(block, which):
        missing = [n for n in range(1, n_max + 1) if n not in block]
        if missing:
            raise InsufficientCoefficientsError(
                f"{which}-block provides fewer than {n_max} coefficients (first gap at n = {missing[0]})",
                required=n_max,
            )
        return tuple([0] + [block[n] for n in range(1, n_max + 1)])

    coeffs_f = to_array(blocks["f"], "f")
    coeffs_g = to_array(blocks["g"], "g") if blocks["g"] else None
    if Q > 1 and coeffs_g is None:
        raise CoefficientFileError(f"level {Q} > 1 requires a [g] block")
    if normalized and coeffs_f[1] != 1:
        raise IntegrityError("file declares normalized = true but a_f(1) != 1")
    _deligne_screen(coeffs_f, k, "f")
    if coeffs_g is not None:
        _deligne_screen(coeffs_g, k, "g")
    return CuspFormData(k, Q, neb, coeffs_f, coeffs_g, "file", normalized)


def _format_number(x):
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def _format_character(chi):
    out = []
    for j in range(1, chi.modulus + 1):
        e = chi.exponent(j)
        out.append("0" if e is None else ("1" if e == 0 else ("-1" if e == Fraction(1, 2) else f"e({e})")))
    return "[" + ", ".join(out) + "]"


def export_coefficients(data, path, n_max=None):
    """Write ``data`` in the text format read by :func:`load_coefficients`."""
    n_max = data.n_max if n_max is None else int(n_max)
    lines = [
        f"weight={data.weight}",
        f"level={data.level}",
        f"nebentypus_modulus={data.level}",
        f"nebentypus_values={_format_character(data.nebentypus)}",
        f"normalized={'true' if data.normalized else 'false'}",
    ]

    def body(seq):
        for n in range(1, n_max + 1):
            re, im = _parts(seq[n])
            lines.append(f"{n} {_format_number(re)} {_format_number(im)}")

    body(data.coeffs_f)
    if data.level > 1 and data.coeffs_g is not None:
        lines.append("[g]")
        body(data.coeffs_g)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")

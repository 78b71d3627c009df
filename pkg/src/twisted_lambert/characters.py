"""Dirichlet characters, the Moebius function and twisted Dirichlet convolutions.

A character is stored as a table of exact root-of-unity exponents: entry
``j`` is a :class:`~fractions.Fraction` ``e`` with ``chi(j) = exp(2 pi i e)``,
or ``None`` where ``gcd(j, M) > 1``.  Real characters therefore evaluate to
Python integers and their convolutions stay in exact integer arithmetic.

Arithmetic sequences throughout the package are indexed directly by ``n``:
``seq[n]`` is the ``n``-th term and ``seq[0]`` is an unused placeholder.
"""

from __future__ import annotations

import cmath
import hashlib
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InvalidCharacterError, ParameterError
from .precision import DEFAULT_CONTEXT, to_mp

__all__ = [
    "DirichletCharacter",
    "ConvolvedSequence",
    "build_character",
    "principal_character",
    "quadratic_character",
    "all_characters",
    "kronecker_symbol",
    "mobius_sieve",
    "mu_k",
    "twisted_convolve",
]

_EXACT_UNITS = {Fraction(0): 1, Fraction(1, 2): -1, Fraction(1, 4): 1j, Fraction(3, 4): -1j}


def _unit_exponent(value, modulus):
    """Exponent ``e`` in ``[0, 1)`` with ``value = exp(2 pi i e)``, or ``None`` for 0."""
    if isinstance(value, str):
        text = value.strip().replace(" ", "")
        if text.startswith("e(") and text.endswith(")"):
            return Fraction(text[2:-1]) % 1
        value = complex(text.replace("i", "j")) if ("i" in text or "j" in text) else Fraction(text)
    if isinstance(value, (int, Fraction)):
        if value == 0:
            return None
        if value == 1:
            return Fraction(0)
        if value == -1:
            return Fraction(1, 2)
        raise InvalidCharacterError(f"{value} is not a root of unity")
    z = complex(value)
    if abs(z) < 1e-12:
        return None
    if abs(abs(z) - 1) > 1e-12:
        raise InvalidCharacterError(f"{value} is not a root of unity")
    # the order of a character value divides phi(M) <= M
    e = Fraction(cmath.phase(z) / (2 * math.pi)).limit_denominator(max(modulus, 2)) % 1
    if abs(cmath.exp(2j * math.pi * float(e)) - z) > 1e-9:
        raise InvalidCharacterError(f"{value} is not a root of unity of order dividing {modulus}")
    return e


@dataclass(frozen=True)
class DirichletCharacter:
    """A Dirichlet character modulo ``modulus`` given by exact exponents.

    ``exponents[j]`` for ``j = 0..M-1`` describes ``chi(j mod M)``.
    Construct through :func:`build_character`, which validates the table.
    """

    modulus: int
    exponents: tuple
    label: str = field(default="", compare=False)
    _gauss_cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    # -- values ------------------------------------------------------------
    def exponent(self, n):
        return self.exponents[n % self.modulus]

    def exact_value(self, n):
        """``chi(n)`` as an int (real values) or a Python complex (other units)."""
        e = self.exponents[n % self.modulus]
        if e is None:
            return 0
        if e in _EXACT_UNITS:
            return _EXACT_UNITS[e]
        return cmath.exp(2j * math.pi * float(e))

    def __call__(self, n):
        return self.exact_value(n)

    def value(self, n, ctx=DEFAULT_CONTEXT):
        """``chi(n)`` at the working precision of ``ctx``."""
        e = self.exponents[n % self.modulus]
        mp = ctx.mp
        if e is None:
            return mp.mpf(0)
        if e == 0:
            return mp.mpf(1)
        if e == Fraction(1, 2):
            return mp.mpf(-1)
        return mp.expjpi(2 * to_mp(e, ctx))

    # -- structure ---------------------------------------------------------
    @property
    def is_real(self):
        return all(e is None or e in (0, Fraction(1, 2)) for e in self.exponents)

    @property
    def is_principal(self):
        return all(e is None or e == 0 for e in self.exponents)

    @property
    def parity_a(self):
        """0 for even characters, 1 for odd ones."""
        e = self.exponent(self.modulus - 1)
        return 0 if e == 0 else 1

    @property
    def conductor(self):
        M = self.modulus
        for d in sorted(_divisors(M)):
            if all(
                self.exponents[j] == 0
                for j in range(1, M)
                if math.gcd(j, M) == 1 and (j - 1) % d == 0
            ):
                return d
        return M

    @property
    def primitive(self):
        return self.conductor == self.modulus

    def conjugate(self):
        exps = tuple(None if e is None else (-e) % 1 for e in self.exponents)
        label = f"conj({self.label})" if self.label else ""
        return DirichletCharacter(self.modulus, exps, label)

    def values_digest(self):
        """Short stable hash of the exponent table, used to tag exported zeros."""
        text = ",".join("x" if e is None else str(e) for e in self.exponents)
        return hashlib.sha256(f"{self.modulus}:{text}".encode()).hexdigest()[:16]

    def gauss_sum(self, ctx=DEFAULT_CONTEXT):
        """``sum_{j=1}^{M} chi(j) exp(2 pi i j / M)`` by the definitional sum."""
        key = ctx.digits
        if key not in self._gauss_cache:
            mp = ctx.mp
            M = self.modulus
            total = mp.mpc(0)
            for j in range(1, M + 1):
                if self.exponent(j) is not None:
                    total += self.value(j, ctx) * mp.expjpi(mp.mpf(2 * j) / M)
            if self.is_real and M > 1:
                # real characters: the sum is real (even) or purely imaginary (odd)
                total = mp.mpc(mp.re(total), 0) if self.parity_a == 0 else mp.mpc(0, mp.im(total))
            self._gauss_cache[key] = total
        return self._gauss_cache[key]

    def __repr__(self):
        vals = [self.exact_value(j) for j in range(1, self.modulus + 1)]
        name = f" {self.label}" if self.label else ""
        return f"DirichletCharacter(mod {self.modulus}{name}: {vals})"


def _divisors(n):
    small = [d for d in range(1, math.isqrt(n) + 1) if n % d == 0]
    return set(small) | {n // d for d in small}


def _validate(modulus, exponents):
    M = modulus
    if len(exponents) != M:
        raise InvalidCharacterError(f"table needs {M} entries, got {len(exponents)}")
    for j in range(M):
        unit = math.gcd(j, M) == 1
        if unit != (exponents[j] is not None):
            where = "coprime" if unit else "non-coprime"
            raise InvalidCharacterError(f"value at {where} residue {j} has the wrong support")
    if exponents[1 % M] != 0:
        raise InvalidCharacterError("chi(1) must equal 1")
    units = [j for j in range(M) if exponents[j] is not None]
    for m in units:
        for n in units:
            if exponents[m * n % M] != (exponents[m] + exponents[n]) % 1:
                raise InvalidCharacterError(f"table is not multiplicative at ({m}, {n})")


def build_character(modulus, value_spec="principal", label=""):
    """Build and validate a character.

    ``value_spec`` is ``"principal"``, ``"quadratic"`` or an explicit table of
    ``M`` values ``chi(1), ..., chi(M)``.  Entries may be ``0``, ``1``, ``-1``,
    complex units, or strings ``"e(p/q)"`` meaning ``exp(2 pi i p/q)``.
    """
    M = int(modulus)
    if M < 1:
        raise ParameterError("modulus must be a positive integer")
    if isinstance(value_spec, str):
        spec = value_spec.strip().lower()
        if spec == "principal":
            return principal_character(M)
        if spec == "quadratic":
            return quadratic_character(M)
        raise InvalidCharacterError(f"unknown character spec {value_spec!r}")
    values = list(value_spec)
    if len(values) != M:
        raise InvalidCharacterError(f"table needs {M} entries, got {len(values)}")
    # the table lists chi(1..M); chi(M) sits at residue 0
    exps = [None] * M
    for j, v in enumerate(values, start=1):
        exps[j % M] = _unit_exponent(v, M)
    if M == 1:
        exps = [Fraction(0)]
    exps = tuple(exps)
    _validate(M, exps)
    return DirichletCharacter(M, exps, label)


def principal_character(modulus):
    M = int(modulus)
    exps = tuple(Fraction(0) if math.gcd(j, M) == 1 else None for j in range(M))
    return DirichletCharacter(M, exps, "principal")


def kronecker_symbol(D, n):
    """Kronecker symbol ``(D / n)`` for ``n >= 1``."""
    if n < 1:
        raise ParameterError("kronecker_symbol expects n >= 1")
    result = 1
    while n % 2 == 0:
        n //= 2
        if D % 2 == 0:
            return 0
        if D % 8 in (3, 5):
            result = -result
    # Jacobi symbol (D / n) for odd n
    a = D % n if n > 1 else 0
    if n == 1:
        return result
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def _is_fundamental(D):
    if D == 1:
        return False
    if D % 4 == 1:
        return _squarefree(abs(D))
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and _squarefree(abs(m))
    return False


def _squarefree(n):
    return all(n % (p * p) for p in range(2, math.isqrt(n) + 1))


def quadratic_character(modulus):
    """The primitive real character ``n -> (D/n)`` with ``|D| = modulus``.

    When both ``modulus`` and ``-modulus`` are fundamental discriminants
    (``modulus = 8m``), the even character ``D = +modulus`` is returned.
    """
    M = int(modulus)
    for D in (M, -M):
        if _is_fundamental(D):
            exps = [None] * M
            for j in range(1, M + 1):
                v = kronecker_symbol(D, j)
                exps[j % M] = None if v == 0 else (Fraction(0) if v == 1 else Fraction(1, 2))
            chi = DirichletCharacter(M, tuple(exps), f"kronecker({D})")
            _validate(M, chi.exponents)
            return chi
    raise InvalidCharacterError(f"there is no primitive quadratic character modulo {M}")


def _factor(n):
    out = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _cyclic_factors(M):
    """Generators ``g`` (as residues mod M) and orders of a cyclic decomposition."""
    gens = []
    for p, e in _factor(M).items():
        q = p**e
        rest = M // q
        local = []
        if p == 2:
            if e >= 2:
                local.append((q - 1, 2))
            if e >= 3:
                local.append((5, 2 ** (e - 2)))
        else:
            order = q - q // p
            g = next(
                g for g in range(2, q)
                if math.gcd(g, p) == 1 and all(pow(g, order // r, q) != 1 for r in _factor(order))
            )
            local.append((g, order))
        for g, order in local:
            # lift g mod q to M, trivial on the other prime-power components
            lifted = g if rest == 1 else (g * rest * pow(rest, -1, q) + q * pow(q, -1, rest)) % M
            gens.append((lifted, order))
    return gens


def all_characters(modulus):
    """Every Dirichlet character modulo ``modulus`` (small moduli only)."""
    M = int(modulus)
    if M == 1:
        return [principal_character(1)]
    gens = _cyclic_factors(M)
    # discrete-log table: residue -> exponent vector over the generators
    logs = {1 % M: tuple(0 for _ in gens)}
    for idx, (g, order) in enumerate(gens):
        new = {}
        for r, vec in logs.items():
            x = r
            for i in range(order):
                v = list(vec)
                v[idx] = i
                new[x] = tuple(v)
                x = x * g % M
        logs = new
    chars = []
    choices = [[Fraction(c, order) for c in range(order)] for _, order in gens]

    def rec(i, picked):
        if i == len(choices):
            exps = [None] * M
            for r, vec in logs.items():
                exps[r] = sum((p * v for p, v in zip(picked, vec)), Fraction(0)) % 1
            chars.append(DirichletCharacter(M, tuple(exps)))
            return
        for c in choices[i]:
            rec(i + 1, picked + [c])

    rec(0, [])
    return chars


def mobius_sieve(n_max):
    """``mu[0..n_max]`` (``mu[0] = 0``) by a linear sieve."""
    n_max = int(n_max)
    if n_max < 1:
        raise ParameterError("n_max must be >= 1")
    mu = [0] * (n_max + 1)
    mu[1] = 1
    primes = []
    composite = bytearray(n_max + 1)
    for i in range(2, n_max + 1):
        if not composite[i]:
            primes.append(i)
            mu[i] = -1
        for p in primes:
            ip = i * p
            if ip > n_max:
                break
            composite[ip] = 1
            if i % p == 0:
                mu[ip] = 0
                break
            mu[ip] = -mu[i]
    return mu


def mu_k(n, k):
    """``mu(n) * n**(k-1)`` as an exact integer."""
    if n < 1 or k < 1:
        raise ParameterError("mu_k needs n >= 1 and k >= 1")
    return mobius_sieve(n)[n] * n ** (k - 1)


@dataclass(frozen=True)
class ConvolvedSequence:
    """Terms ``c(1..length)`` of a twisted Dirichlet convolution; ``terms[0] = 0``."""

    length: int
    terms: tuple

    def __getitem__(self, n):
        return self.terms[n]

    def __len__(self):
        return len(self.terms)


def twisted_convolve(a, chi1, b, chi2, n_max, ctx=None):
    """``c(n) = sum_{d | n} a(d) chi1(d) b(n/d) chi2(n/d)`` for ``n <= n_max``.

    Sequences are indexed by ``n`` (entry 0 ignored).  With real characters
    and integer inputs the result is exact; otherwise the terms are mpmath
    numbers at ``ctx`` (default precision if omitted).
    """
    n_max = int(n_max)
    if len(a) <= n_max or len(b) <= n_max:
        raise ParameterError(
            f"sequences must be defined up to n_max = {n_max} "
            f"(got lengths {len(a) - 1} and {len(b) - 1})"
        )
    exact = chi1.is_real and chi2.is_real
    if exact:
        ta = [0] + [a[d] * chi1.exact_value(d) for d in range(1, n_max + 1)]
        tb = [0] + [b[m] * chi2.exact_value(m) for m in range(1, n_max + 1)]
        zero = 0
    else:
        ctx = ctx or DEFAULT_CONTEXT
        ta = [0] + [to_mp(a[d], ctx) * chi1.value(d, ctx) for d in range(1, n_max + 1)]
        tb = [0] + [to_mp(b[m], ctx) * chi2.value(m, ctx) for m in range(1, n_max + 1)]
        zero = ctx.mp.mpf(0)
    c = [zero] * (n_max + 1)
    support = [(m, tb[m]) for m in range(1, n_max + 1) if tb[m] != 0]
    for d in range(1, n_max + 1):
        x = ta[d]
        if x == 0:
            continue
        limit = n_max // d
        for m, y in support:
            if m > limit:
                break
            c[d * m] += x * y
    return ConvolvedSequence(n_max, tuple(c))

import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twisted_lambert.characters import (
    all_characters,
    build_character,
    kronecker_symbol,
    mobius_sieve,
    mu_k,
    principal_character,
    quadratic_character,
    twisted_convolve,
)
from twisted_lambert.cuspforms import ramanujan_tau
from twisted_lambert.errors import InvalidCharacterError, ParameterError

from conftest import CTX40, CTX60

TAU = ramanujan_tau(400)
MU = mobius_sieve(400)


def test_table1_character(chi5):
    assert [chi5(j) for j in range(1, 6)] == [1, -1, -1, 1, 0]
    assert chi5.parity_a == 0
    assert chi5.primitive and chi5.is_real and not chi5.is_principal
    assert chi5 == quadratic_character(5)


def test_trivial_character(ctx60):
    one = build_character(1, "principal")
    assert one(7) == 1 and one.primitive
    assert one.gauss_sum(ctx60) == 1


def test_gauss_sum_mod5(chi5, ctx60):
    mp = ctx60.mp
    g = chi5.gauss_sum(ctx60)
    assert mp.im(g) == 0
    assert abs(g - mp.sqrt(5)) < mp.mpf(10) ** -58


def test_odd_character_mod4():
    chi = build_character(4, [1, 0, -1, 0])
    assert chi.parity_a == 1 and chi.primitive


def test_invalid_tables():
    with pytest.raises(InvalidCharacterError):
        build_character(5, [1, 1, -1, 1, 0])        # not multiplicative
    with pytest.raises(InvalidCharacterError):
        build_character(5, [1, -1, -1, 1, 1])        # nonzero at a non-unit
    with pytest.raises(InvalidCharacterError):
        build_character(5, [1, 2, -1, 1, 0])         # not a root of unity
    with pytest.raises(InvalidCharacterError):
        build_character(5, [1, -1, -1])              # wrong length


def test_imprimitive_character():
    chi = principal_character(6)
    assert not chi.primitive and chi.conductor == 1
    induced = build_character(10, [1, 0, -1, 0, 0, 0, -1, 0, 1, 0])
    assert induced.conductor == 5


def test_complex_character_mod5(ctx60):
    chi = build_character(5, ["1", "i", "-i", "-1", "0"])
    assert chi.parity_a == 1 and chi.primitive and not chi.is_real
    assert chi.conjugate()(2) == -1j
    mp = ctx60.mp
    assert abs(abs(chi.gauss_sum(ctx60)) ** 2 - 5) < mp.mpf(10) ** -55


@pytest.mark.parametrize("M", range(1, 21))
def test_orthogonality_and_gauss_modulus(M, ctx60):
    mp = ctx60.mp
    chars = all_characters(M)
    phi = sum(1 for j in range(1, M + 1) if math.gcd(j, M) == 1)
    assert len(chars) == phi
    assert len({c.exponents for c in chars}) == phi
    for chi in chars:
        total = sum(chi.value(j, ctx60) for j in range(1, M + 1))
        if chi.is_principal:
            assert abs(total - phi) < 1e-50
        else:
            assert abs(total) < mp.mpf(10) ** -55
        if chi.primitive:
            assert abs(abs(chi.gauss_sum(ctx60)) ** 2 - M) < mp.mpf(10) ** -50


def test_kronecker_symbol():
    assert [kronecker_symbol(5, n) for n in range(1, 6)] == [1, -1, -1, 1, 0]
    assert [kronecker_symbol(-4, n) for n in range(1, 5)] == [1, 0, -1, 0]
    assert [kronecker_symbol(8, n) for n in (1, 3, 5, 7)] == [1, -1, -1, 1]


def test_no_quadratic_mod6():
    with pytest.raises(ParameterError):
        quadratic_character(6)


def test_mobius():
    assert MU[1] == 1 and MU[12] == 0 and MU[30] == -1
    assert sum(MU[d] for d in range(1, 61) if 60 % d == 0) == 0
    assert mu_k(1, 12) == 1 and mu_k(2, 12) == -2048 and mu_k(4, 12) == 0


def test_convolution_examples(chi5):
    one = principal_character(1)
    c = twisted_convolve(TAU, one, MU, one, 10)
    assert c[1] == 1
    assert c[2] == TAU[2] - TAU[1] == -25
    c5 = twisted_convolve(TAU, one, MU, chi5, 10)
    assert c5[5] == TAU[5]
    with pytest.raises(ParameterError):
        twisted_convolve(TAU[:5], one, MU, one, 10)


def _brute(a, chi1, b, chi2, n):
    return sum(a[d] * chi1(d) * b[n // d] * chi2(n // d) for d in range(1, n + 1) if n % d == 0)


@pytest.mark.parametrize("M1,M2", [(1, 1), (1, 5), (5, 5), (4, 5), (5, 4)])
def test_convolution_brute_force(M1, M2):
    c1 = build_character(M1, "principal" if M1 == 1 else "quadratic")
    c2 = build_character(M2, "principal" if M2 == 1 else "quadratic")
    c = twisted_convolve(TAU, c1, MU, c2, 200)
    assert all(c[n] == _brute(TAU, c1, MU, c2, n) for n in range(1, 201))


def test_convolution_complex_matches_brute(ctx40):
    chi = build_character(5, ["1", "i", "-i", "-1", "0"])
    one = principal_character(1)
    c = twisted_convolve(TAU, chi, MU, one, 200, ctx40)
    for n in range(1, 201):
        b = _brute(TAU, chi, MU, one, n)
        assert abs(complex(c[n]) - b) <= 1e-9 * max(1, abs(b))


@settings(max_examples=30, deadline=None, derandomize=True)
@given(st.lists(st.integers(-50, 50), min_size=60, max_size=60),
       st.lists(st.integers(-50, 50), min_size=60, max_size=60),
       st.integers(-3, 3), st.integers(-3, 3))
def test_convolution_bilinear(u, v, s, t):
    one, chi5 = principal_character(1), quadratic_character(5)
    u, v = [0] + u[1:], [0] + v[1:]
    w = [0] + [s * x + t * y for x, y in zip(u[1:], v[1:])]
    n = 59
    cw = twisted_convolve(w, one, MU, chi5, n)
    cu = twisted_convolve(u, one, MU, chi5, n)
    cv = twisted_convolve(v, one, MU, chi5, n)
    assert all(cw[j] == s * cu[j] + t * cv[j] for j in range(1, n + 1))


@pytest.mark.parametrize("ctx", [CTX40, CTX60], ids=["d40", "d60"])
def test_dirichlet_series_consistency(ctx, chi5):
    # sum c(n) n^-s against the product of the two truncated series at s = k + 2
    mp = ctx.mp
    one = principal_character(1)
    n_max, s = 400, 14
    c = twisted_convolve(TAU, one, MU, chi5, n_max)
    lhs = mp.fsum(mp.mpf(c[n]) / mp.mpf(n) ** s for n in range(1, n_max + 1))
    fa = mp.fsum(mp.mpf(TAU[n]) / mp.mpf(n) ** s for n in range(1, n_max + 1))
    fb = mp.fsum(mp.mpf(MU[n] * chi5(n)) / mp.mpf(n) ** s for n in range(1, n_max + 1))
    # every missing product term has d * m > n_max with |tau(d)| <= d^6, so the
    # discrepancy is below sum_{n > n_max} d(n) n^{6-s} <= 4 n_max^{-6.5}
    assert abs(lhs - fa * fb) < 4 * mp.mpf(n_max) ** -6.5


def test_seeded_character_values_are_stable():
    rng = random.Random(5)
    chi = build_character(7, "quadratic")
    for _ in range(50):
        n = rng.randrange(1, 10**6)
        assert chi(n) == kronecker_symbol(-7, n)

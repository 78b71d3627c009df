from fractions import Fraction

import pytest

from twisted_lambert.characters import build_character, principal_character
from twisted_lambert.cuspforms import (
    CuspFormData,
    GaussianRational,
    delta_form,
    divisor_count,
    export_coefficients,
    fricke_partner,
    load_coefficients,
    ramanujan_tau,
)
from twisted_lambert.errors import (
    CoefficientFileError,
    InsufficientCoefficientsError,
    IntegrityError,
    ParameterError,
    UnsupportedLevelError,
)

TAU = ramanujan_tau(1000)


def naive_tau(n_max):
    # q prod (1 - q^m)^24 by 24 successive multiplications with (1 - q^m) factors
    poly = [1] + [0] * (n_max - 1)
    for m in range(1, n_max):
        for _ in range(24):
            for i in range(n_max - 1, m - 1, -1):
                poly[i] -= poly[i - m]
    return [0] + poly


def test_first_values():
    assert TAU[1:11] == [1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920]


def test_matches_independent_generator():
    assert ramanujan_tau(300) == naive_tau(300)


def test_multiplicativity():
    from math import gcd
    for m in range(2, 32):
        for n in range(2, 1000 // m + 1):
            if gcd(m, n) == 1:
                assert TAU[m * n] == TAU[m] * TAU[n]


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_hecke_prime_square(p):
    assert TAU[p * p] == TAU[p] ** 2 - p**11


def test_deligne_bound():
    for n in range(1, 1001):
        assert TAU[n] ** 2 <= divisor_count(n) ** 2 * n**11


def test_tau_argument_check():
    with pytest.raises(ParameterError):
        ramanujan_tau(0)


def test_delta_form():
    d = delta_form(500)
    assert d.weight == 12 and d.level == 1 and d.n_max == 500
    assert fricke_partner(d) == d.coeffs_f
    assert d.is_real


def test_round_trip(tmp_path):
    d = delta_form(300)
    path = tmp_path / "delta.txt"
    export_coefficients(d, path)
    back = load_coefficients(path, 300)
    assert back == d


def test_round_trip_complex_level_q(tmp_path):
    neb = build_character(5, ["1", "i", "-i", "-1", "0"])
    f = [0, 1] + [GaussianRational(Fraction(n, 7), Fraction(-1, n)) for n in range(2, 21)]
    g = [0] + [GaussianRational.make(Fraction(3, 5 * n), Fraction(4, 5 * n)) for n in range(1, 21)]
    data = CuspFormData(4, 5, neb, f, g, normalized=True)
    path = tmp_path / "form.txt"
    export_coefficients(data, path)
    assert load_coefficients(path, 20) == data


def _write(tmp_path, text):
    p = tmp_path / "c.txt"
    p.write_text(text)
    return p


def test_normalization_violation(tmp_path):
    p = _write(tmp_path, "weight=12\nlevel=1\nnormalized=true\n1 0 0\n2 -24 0\n")
    with pytest.raises(IntegrityError):
        load_coefficients(p, 2)


def test_integrity_screen(tmp_path):
    big = int(3 * 2**5.5 * 1.01) + 1
    p = _write(tmp_path, f"weight=12\nlevel=1\n1 1 0\n2 {big} 0\n")
    with pytest.raises(IntegrityError):
        load_coefficients(p, 2)


def test_parse_errors_carry_line(tmp_path):
    p = _write(tmp_path, "weight=12\nlevel=1\n1 1 0\n2 abc 0\n")
    with pytest.raises(CoefficientFileError, match="line 4"):
        load_coefficients(p, 2)
    p = _write(tmp_path, "weight=12\nlevel=1\ncolour=blue\n")
    with pytest.raises(CoefficientFileError, match="line 3"):
        load_coefficients(p, 1)


def test_insufficient(tmp_path):
    p = _write(tmp_path, "weight=12\nlevel=1\n1 1 0\n2 -24 0\n")
    with pytest.raises(InsufficientCoefficientsError) as info:
        load_coefficients(p, 5)
    assert info.value.required == 5
    with pytest.raises(InsufficientCoefficientsError):
        delta_form(10).truncated(20)


def test_level_q_requires_partner(tmp_path):
    p = _write(tmp_path, "weight=2\nlevel=11\n" + "".join(f"{n} 0 0\n" for n in range(2, 4)).replace("2 0 0", "1 1 0\n2 0 0"))
    with pytest.raises(CoefficientFileError, match="g"):
        load_coefficients(p, 3)
    data = CuspFormData(2, 11, principal_character(11), (0, 1, -2, -1), None)
    with pytest.raises(UnsupportedLevelError):
        fricke_partner(data)


def test_stored_partner_passes_through(tmp_path):
    text = "weight=2\nlevel=11\n1 1 0\n2 -2 0\n3 -1 0\n[g]\n1 1 0\n2 -2 0\n3 -1 0\n"
    data = load_coefficients(_write(tmp_path, text), 3)
    assert fricke_partner(data) == (0, 1, -2, -1)


def test_form_validation():
    with pytest.raises(ParameterError):
        CuspFormData(11, 1, principal_character(1), (0, 1))
    with pytest.raises(ParameterError):
        CuspFormData(12, 5, principal_character(1), (0, 1))

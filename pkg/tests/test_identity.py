import json

import pytest

from twisted_lambert.characters import build_character, principal_character
from twisted_lambert.cuspforms import delta_form
from twisted_lambert.errors import HypothesisError, ParameterError
from twisted_lambert.identity import IdentityConfig, LambertIdentity, relative_l2_deviation, verify_identity
from twisted_lambert.precision import PrecisionContext

CTX = PrecisionContext(40)
DELTA = delta_form(3000)
ONE = principal_character(1)
CHI5 = build_character(5, [1, -1, -1, 1, 0])


@pytest.fixture(scope="module")
def table1_eval():
    cfg = IdentityConfig(DELTA, ONE, CHI5, (), 2000, 2000, 22, "pairs", 1.0, CTX)
    return LambertIdentity(cfg)


@pytest.fixture(scope="module")
def level_one_eval():
    cfg = IdentityConfig(DELTA, ONE, ONE, (), 2000, 2000, 22, "pairs", 1.0, CTX)
    return LambertIdentity(cfg)


def test_config_aggregates_problems():
    with pytest.raises(HypothesisError) as info:
        IdentityConfig(DELTA, principal_character(6), CHI5, (-1,), 0, 10, -1, "both", 0, CTX)
    msg = str(info.value)
    for part in ("primitive", "y = -1", "truncations", "zero budget", "semantics", "bracketing"):
        assert part in msg


def test_lhs_leading_term(table1_eval):
    mp = CTX.mp
    v = table1_eval.lhs_series(50, 40)
    assert abs(v / mp.exp(-50) - 1) < mp.mpf(10) ** -20


def test_lhs_matches_float_oracle(table1_eval):
    # float64 forward summation of c(n) e^{-ny} from the exact coefficients
    import math
    c = table1_eval.lhs_coefficients(2000)
    for y in (1.589, 4 - math.pi):
        ref = math.fsum(float(c[n]) * math.exp(-n * y) for n in range(1, 2001))
        assert abs(float(table1_eval.lhs_series(y)) - ref) < 1e-12


def test_hypergeometric_side_vanishes_at_small_y(table1_eval):
    assert abs(table1_eval.rhs_hypergeometric_sum("1e-6")) < 1e-10


def test_r0_cases(table1_eval, level_one_eval):
    mp = CTX.mp
    r0 = table1_eval.r0_term()
    assert abs(mp.im(r0)) < 1e-35 and 0.02179 < mp.re(r0) < 0.02180
    assert level_one_eval.r0_term() == 0
    chi4 = build_character(4, [1, 0, -1, 0])
    odd = LambertIdentity(IdentityConfig(DELTA, ONE, chi4, (), ctx=CTX))
    assert odd.r0_term() == 0


def test_b0_vanishes_for_even(table1_eval):
    B = table1_eval.asymptotic_coeffs(3)
    assert B[0] == 0 and B[1] != 0
    with pytest.raises(ParameterError):
        table1_eval.asymptotic_coeffs(0)


def test_table1_rows_internal_agreement(table1_eval):
    mp = CTX.mp
    for y in ("1.589", 1 + mp.sqrt(5), "0.0749"):
        rec = table1_eval.evaluate(y)
        assert rec.abs_diff <= 5e-7
        # series tails plus the residue-sum cut; the last bracket sets its order of magnitude
        cut = 10 * abs(rec.bracket_subtotals[-1])
        assert rec.abs_diff <= max(rec.lhs_tail_bound, rec.rhs_tail_bound) + cut + 10 * CTX.series_tail_tol
        assert abs(mp.im(rec.lhs)) <= 1e-30 and abs(mp.im(rec.rhs_total)) <= 1e-30
        assert len(rec.bracket_subtotals) == 22


def test_level_one_agreement(level_one_eval):
    for y in (0.5, 2):
        assert level_one_eval.evaluate(y).abs_diff <= 1e-6


def test_bracketing_is_neutral_without_clusters(table1_eval):
    mp = CTX.mp
    y = mp.mpf("1.3")
    total, subs = table1_eval.residue_sum(y, with_brackets=True)
    one_by_one = mp.fsum(2 * mp.re(table1_eval.residue_weight(r) * mp.power(y, -r))
                         for r in table1_eval.selected_zeros() if mp.im(r) > 0)
    assert abs(total - one_by_one) < mp.mpf(10) ** -35


def test_pairs_and_terms_semantics(table1_eval):
    pairs = table1_eval.selected_zeros()
    terms_cfg = IdentityConfig(DELTA, ONE, CHI5, (), 2000, 2000, 22, "terms", 1.0, CTX)
    terms = LambertIdentity(terms_cfg, zeros=table1_eval._zeros).selected_zeros()
    assert len(pairs) == 44 and len(terms) == 22
    mp = CTX.mp
    assert sum(1 for r in terms if mp.im(r) > 0) == 11


def test_truncation_monotone(table1_eval):
    # more zeros never makes things worse beyond the stored bounds at a moderate y
    cfg = table1_eval.config
    y = "1.589"
    diffs = []
    for budget in (5, 10, 22):
        ev = LambertIdentity(IdentityConfig(DELTA, ONE, CHI5, (), 2000, 2000, budget, "pairs", 1.0, CTX),
                             zeros=table1_eval._zeros)
        rec = ev.evaluate(y)
        diffs.append((rec.abs_diff, max(rec.lhs_tail_bound, rec.rhs_tail_bound)))
    for (d0, b0), (d1, b1) in zip(diffs, diffs[1:]):
        assert d1 <= d0 + b1
    assert cfg.zero_budget == 22


def test_odd_character_consistency():
    chi4 = build_character(4, [1, 0, -1, 0])
    ctx = PrecisionContext(30)
    cfg = IdentityConfig(delta_form(2000), ONE, chi4, ("0.8", "1.5"), 1500, 1500, 15, "pairs", 1.0, ctx)
    report = verify_identity(cfg)
    assert report.max_abs_diff() <= 1e-6


def test_report_json_is_deterministic(level_one_eval):
    cfg = IdentityConfig(DELTA, ONE, ONE, ("2",), 2000, 2000, 22, "pairs", 1.0, CTX)
    a = verify_identity(cfg, level_one_eval._zeros).to_json()
    b = verify_identity(cfg, level_one_eval._zeros).to_json()
    assert a == b
    data = json.loads(a)
    assert data["config"]["digits"] == 40 and len(data["records"]) == 1


def test_oscillation_profile_small(table1_eval):
    rows = table1_eval.oscillation_profile(["0.05", "0.08"], zero_budget=10)
    assert len(rows) == 2
    assert relative_l2_deviation(rows) < 0.5


def test_polynomial_remainder_order(table1_eval):
    # the truncated hypergeometric sum against the polynomial built from the same
    # finite n-sums: the remainder is O(y^6) with constant close to B_3
    mp = CTX.mp
    ev = table1_eval
    k, n_max = 12, ev.config.n_max_rhs
    A = ev.rhs_coefficients(n_max)
    B = ev.asymptotic_coeffs(4)
    B_trunc = [B[m] * mp.fsum(mp.mpf(A[n]) / mp.mpf(n) ** (k + 2 * m) for n in range(1, n_max + 1))
               / ev.dirichlet_ratio(m) for m in range(3)]
    consts = []
    for y in ("0.04", "0.02", "0.01"):
        y = mp.mpf(y)
        rem = ev.rhs_hypergeometric_sum(y, exact_terms=1) - mp.fsum(B_trunc[m] * y ** (2 * m) for m in range(3))
        consts.append(mp.re(rem) / y**6)
    assert abs(consts[2] / consts[1] - 1) < 1e-3
    assert abs(consts[2] / mp.re(B[3]) - 1) < 1e-3


@pytest.mark.parametrize("y", ["0.5", "1.589", "4"])
def test_exact_terms_agree_within_tail_bounds(table1_eval, y):
    ev = table1_eval
    n_max = 300
    plain = ev.rhs_hypergeometric_sum(y, n_max, exact_terms=1)
    split = ev.rhs_hypergeometric_sum(y, n_max, exact_terms=4)
    bound = ev.rhs_tail_bound(y, n_max, exact_terms=1) + ev.rhs_tail_bound(y, n_max, exact_terms=4)
    assert abs(plain - split) <= bound
    assert ev.rhs_tail_bound(y, n_max, exact_terms=4) < ev.rhs_tail_bound(y, n_max, exact_terms=1)


def test_lhs_matches_decimal_oracle_at_small_y(table1_eval):
    # float64 cancels badly near y = 0.07; 50-digit decimal summation does not
    from decimal import Decimal, localcontext
    c = table1_eval.lhs_coefficients(2000)
    with localcontext() as dec:
        dec.prec = 50
        q = (-Decimal("0.0749")).exp()
        total, power = Decimal(0), Decimal(1)
        for n in range(1, 2001):
            power *= q
            total += int(c[n]) * power
    mp = CTX.mp
    assert abs(table1_eval.lhs_series("0.0749") - mp.mpf(str(total))) < mp.mpf(10) ** -35

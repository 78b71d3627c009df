"""Both sides of the exact formula for the twisted Lambert series.

For a cusp form ``f`` of weight ``k``, level ``Q`` and nebentypus ``chi``,
a primitive twist ``psi`` mod ``r`` and a primitive ``psi'`` mod ``M`` of
parity ``a``, with ``N = Q r^2``::

    sum_n c(n) e^{-ny},            c = (a_f psi) * (mu psi')

    = P(y) sum_n A(n)/n^{k+a} [2F1((k+a)/2, (k+1+a)/2; (1+2a)/2; -Y_n^2) - (1-a)]
      + R(y) + R0

    A = (a_g conj(psi)) * (mu_k conj(psi')),   Y_n = N y / (2 pi M n),
    P(y) = 2 N^{k/2} Gamma(k+a) (yN/M)^a (i/2pi)^{k+a} chi(r) psi(Q) eps_psi^2 / (r eps_psi'),
    R(y) = sum_rho Gamma(rho) L_f(rho, psi) / L'(rho, psi') y^{-rho},
    R0   = L_f'(0, psi) / L'(0, psi')  if a = 0 and M > 1, else 0.

:class:`LambertIdentity` evaluates every piece and assembles
:class:`VerificationReport` records.  Special cases (level one, trivial
twist, ``M = r``, ...) are reached purely through the configuration.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .characters import DirichletCharacter, mobius_sieve, twisted_convolve
from .cuspforms import CuspFormData, fricke_partner
from .errors import HypothesisError, InsufficientCoefficientsError, ParameterError
from .lfunctions import CuspFormLSeries, DirichletLSeries
from .precision import DEFAULT_CONTEXT, PrecisionContext, gauss_2f1_taylor_remainder, to_mp
from .zeros import LZero, bracket, first_zeros

__all__ = [
    "IdentityConfig",
    "YRecord",
    "VerificationReport",
    "LambertIdentity",
    "verify_identity",
]

ZERO_SEMANTICS = ("pairs", "terms")
# Taylor terms of the hypergeometric kernel summed over all n in closed form
HYP_EXACT_TERMS = 4


@dataclass(frozen=True)
class IdentityConfig:
    """Every parameter of one verification run."""

    form: CuspFormData
    psi: DirichletCharacter
    psi_prime: DirichletCharacter
    y_values: tuple = ()
    n_max_lhs: int = 2000
    n_max_rhs: int = 2000
    zero_budget: int = 22
    zero_semantics: str = "pairs"
    bracket_C: float = 1.0
    ctx: PrecisionContext = DEFAULT_CONTEXT

    def __post_init__(self):
        object.__setattr__(self, "y_values", tuple(self.y_values))
        problems = self.problems()
        if problems:
            raise HypothesisError("; ".join(problems))

    def problems(self):
        out = []
        Q, r = self.form.level, self.psi.modulus
        if math.gcd(Q, r) != 1:
            out.append(f"level Q = {Q} and twist modulus r = {r} must be coprime")
        if not self.psi.primitive:
            out.append("psi must be primitive")
        if not self.psi_prime.primitive:
            out.append("psi' must be primitive")
        for y in self.y_values:
            if not to_mp(y, self.ctx) > 0:
                out.append(f"y = {y} must be positive")
        if self.n_max_lhs < 1 or self.n_max_rhs < 1:
            out.append("truncations must be positive")
        if self.zero_budget < 0:
            out.append("zero budget must be non-negative")
        if self.zero_semantics not in ZERO_SEMANTICS:
            out.append(f"zero semantics must be one of {ZERO_SEMANTICS}")
        if not float(self.bracket_C) > 0:
            out.append("bracketing constant must be positive")
        return out

    @property
    def weight(self):
        return self.form.weight

    @property
    def parity_a(self):
        return self.psi_prime.parity_a

    @property
    def level_N(self):
        return self.form.level * self.psi.modulus ** 2

    @property
    def is_real(self):
        return self.form.is_real and self.psi.is_real and self.psi_prime.is_real


@dataclass
class YRecord:
    """All intermediate values at one ``y``."""

    y: object
    lhs: object
    rhs_hypergeom: object
    rhs_R0: object
    rhs_residue_sum: object
    bracket_subtotals: list
    rhs_total: object
    abs_diff: object
    lhs_tail_bound: object
    rhs_tail_bound: object
    n_lhs: int
    n_rhs: int
    zeros_used: int


@dataclass
class VerificationReport:
    config_summary: dict
    records: list = field(default_factory=list)
    zeros: list = field(default_factory=list)

    def max_abs_diff(self):
        return max(r.abs_diff for r in self.records)

    def to_dict(self, digits=30):
        return {
            "config": self.config_summary,
            "zeros": [_num(z, digits) for z in self.zeros],
            "records": [
                {
                    "y": _num(r.y, digits),
                    "lhs": _num(r.lhs, digits),
                    "rhs_hypergeom": _num(r.rhs_hypergeom, digits),
                    "rhs_R0": _num(r.rhs_R0, digits),
                    "rhs_residue_sum": _num(r.rhs_residue_sum, digits),
                    "bracket_subtotals": [_num(b, digits) for b in r.bracket_subtotals],
                    "rhs_total": _num(r.rhs_total, digits),
                    "abs_diff": _num(r.abs_diff, 6),
                    "lhs_tail_bound": _num(r.lhs_tail_bound, 6),
                    "rhs_tail_bound": _num(r.rhs_tail_bound, 6),
                    "n_lhs": r.n_lhs,
                    "n_rhs": r.n_rhs,
                    "zeros_used": r.zeros_used,
                }
                for r in self.records
            ],
        }

    def to_json(self, digits=30):
        return json.dumps(self.to_dict(digits), indent=2, sort_keys=True) + "\n"


def _num(x, digits):
    """JSON-safe decimal strings; complex values become ``{"re", "im"}``."""
    if isinstance(x, (int, float, str)):
        return x
    mp = x.context
    if hasattr(x, "imag") and mp.im(x) != 0:
        return {"re": mp.nstr(mp.re(x), digits), "im": mp.nstr(mp.im(x), digits)}
    return mp.nstr(mp.re(x), digits)


class LambertIdentity:
    """Evaluator for one :class:`IdentityConfig`.  Expensive pieces are cached."""

    def __init__(self, config, zeros=None, zeros_conj=None):
        self.config = config
        self.ctx = config.ctx
        self._zeros = zeros
        self._zeros_conj = zeros_conj
        self._cache = {}

    # -- shared data ---------------------------------------------------------
    @property
    def mp(self):
        return self.ctx.mp

    def dirichlet_series(self):
        if "L" not in self._cache:
            self._cache["L"] = DirichletLSeries(self.config.psi_prime, self.ctx)
        return self._cache["L"]

    def cusp_series(self):
        if "Lf" not in self._cache:
            self._cache["Lf"] = CuspFormLSeries(self.config.form, self.config.psi, self.ctx)
        return self._cache["Lf"]

    def lhs_coefficients(self, n_max):
        key = ("c", n_max)
        if key not in self._cache:
            cfg = self.config
            if cfg.form.n_max < n_max:
                raise InsufficientCoefficientsError(
                    f"Lambert series needs a_f(n) for n <= {n_max}", required=n_max
                )
            mu = mobius_sieve(n_max)
            self._cache[key] = twisted_convolve(cfg.form.coeffs_f, cfg.psi, mu, cfg.psi_prime, n_max, self.ctx)
        return self._cache[key]

    def rhs_coefficients(self, n_max):
        key = ("A", n_max)
        if key not in self._cache:
            cfg = self.config
            g = fricke_partner(cfg.form)
            if len(g) <= n_max:
                raise InsufficientCoefficientsError(
                    f"hypergeometric sum needs a_g(n) for n <= {n_max}", required=n_max
                )
            mu = mobius_sieve(n_max)
            muk = [m * n ** (cfg.weight - 1) for n, m in enumerate(mu)]
            self._cache[key] = twisted_convolve(
                g, cfg.psi.conjugate(), muk, cfg.psi_prime.conjugate(), n_max, self.ctx
            )
        return self._cache[key]

    # -- left side -----------------------------------------------------------
    def lhs_tail_bound(self, y, n_max):
        """Bound on ``sum_{n > n_max} |c(n)| e^{-ny}`` from ``|c(n)| <= 4 n^{(k+1)/2}``."""
        k = self.config.weight
        y = float(y)
        p = (k + 1) / 2
        ratio = math.exp(-y) * ((n_max + 2) / (n_max + 1)) ** p
        if ratio >= 1:
            return math.inf
        log_first = math.log(4) + p * math.log(n_max + 1) - (n_max + 1) * y
        return math.exp(log_first) / (1 - ratio)

    def lhs_terms_needed(self, y, tol=None):
        tol = float(self.ctx.series_tail_tol if tol is None else tol)
        n = max(1, int(1 / float(y)))
        while self.lhs_tail_bound(y, n) > tol:
            n = int(n * 1.1) + 1
        return n

    def lhs_series(self, y, n_terms=None):
        """``sum_{n <= n_terms} c(n) e^{-ny}`` (default ``n_max_lhs`` terms), by Horner in ``e^{-y}``."""
        mp = self.mp
        y = to_mp(y, self.ctx)
        if not y > 0:
            raise ParameterError("y must be positive")
        n_terms = self.config.n_max_lhs if n_terms is None else int(n_terms)
        c = self.lhs_coefficients(n_terms)
        inner = self.ctx.extended(10)
        q = inner.mp.exp(-to_mp(y, inner))
        acc = inner.mp.mpf(0)
        for n in range(n_terms, 0, -1):
            acc = (acc + c[n]) * q if c[n] != 0 else acc * q
        return mp.convert(acc)

    # -- hypergeometric side --------------------------------------------------
    def prefactor_constant(self):
        """``2 N^{k/2} Gamma(k+a) (N/M)^a (i/2pi)^{k+a} K`` without the ``y^a``."""
        if "pref" not in self._cache:
            cfg = self.config
            mp = self.mp
            ctx = self.ctx
            k, a, N, M = cfg.weight, cfg.parity_a, cfg.level_N, cfg.psi_prime.modulus
            Q, r = cfg.form.level, cfg.psi.modulus
            K = (cfg.form.nebentypus.value(r, ctx) * cfg.psi.value(Q, ctx) * cfg.psi.gauss_sum(ctx) ** 2
                 / (r * cfg.psi_prime.gauss_sum(ctx)))
            self._cache["pref"] = (2 * mp.power(N, mp.mpf(k) / 2) * mp.gamma(k + a)
                                   * mp.power(mp.mpf(N) / M, a) * mp.power(mp.mpc(0, 1) / (2 * mp.pi), k + a) * K)
        return self._cache["pref"]

    def hypergeometric_kernel(self, n, y):
        """``2F1(...; -Y_n^2) - (1 - a)`` for the n-th term."""
        return self._kernel_remainder(n, y, 1) + self.config.parity_a

    def _kernel_remainder(self, n, y, order):
        """``2F1(...; -Y_n^2)`` minus its Taylor polynomial of degree ``order - 1`` in ``-Y_n^2``."""
        cfg = self.config
        mp = self.mp
        k, a = cfg.weight, cfg.parity_a
        Y = cfg.level_N * to_mp(y, self.ctx) / (2 * mp.pi * cfg.psi_prime.modulus * n)
        return gauss_2f1_taylor_remainder(mp.mpf(k + a) / 2, mp.mpf(k + 1 + a) / 2,
                                          mp.mpf(1 + 2 * a) / 2, -Y * Y, order, self.ctx)

    def _taylor_coeff(self, j):
        cfg = self.config
        k, a = cfg.weight, cfg.parity_a
        c = 1.0
        for i in range(j):
            c *= ((k + a) / 2 + i) * ((k + 1 + a) / 2 + i) / (((1 + 2 * a) / 2 + i) * (i + 1))
        return c

    def rhs_tail_bound(self, y, n_max, exact_terms=None):
        """Tail of the hypergeometric sum beyond ``n_max``.

        With the first ``J = exact_terms`` Taylor terms of the kernel summed
        in closed form, the truncated part has kernel
        ``|2F1 - T_J| <= c_J Y^{2J} / (1 - rho_J Y^2)``, where ``c_J`` is the
        degree-``J`` coefficient and ``rho_J`` the supremum of the later
        coefficient ratios; with ``|A(n)| <= 4 n^{k-1/2}`` the tail is below
        ``4 c_J Y_1^{2J} n_max^{1/2-a-2J} / (2J+a-1/2)`` times the prefactor.
        """
        cfg = self.config
        k, a, N, M = cfg.weight, cfg.parity_a, cfg.level_N, cfg.psi_prime.modulus
        J = HYP_EXACT_TERMS if exact_terms is None else int(exact_terms)
        Y1 = N * float(y) / (2 * math.pi * M)
        Yn = Y1 / (n_max + 1)
        cJ = self._taylor_coeff(J)
        rho = self._taylor_coeff(J + 1) / cJ
        if rho * Yn**2 >= 1:
            return math.inf
        p = 2 * J + a - 0.5
        log_s = math.log(4 * cJ) + 2 * J * math.log(Y1) - p * math.log(n_max) - math.log(p)
        pref = abs(complex(self.prefactor_constant())) * float(y) ** a
        return pref * math.exp(log_s) / (1 - rho * Yn**2)

    def rhs_hypergeometric_sum(self, y, n_terms=None, exact_terms=None):
        """The prefactored hypergeometric sum, truncated at ``n_terms`` (default ``n_max_rhs``).

        The first ``J = exact_terms`` Taylor terms of every kernel are summed
        over all ``n`` in closed form, which gives ``sum_{m<J} B_m y^{2m+a}``
        (:meth:`asymptotic_coeffs`); only the remainder, decaying like
        ``n^{-2J}``, is truncated.  ``J = 1`` keeps only the constant term
        exact (``-1`` for even ``psi'``, ``S_0`` for odd).
        """
        cfg = self.config
        mp = self.mp
        y = to_mp(y, self.ctx)
        if not y > 0:
            raise ParameterError("y must be positive")
        n_terms = cfg.n_max_rhs if n_terms is None else int(n_terms)
        J = HYP_EXACT_TERMS if exact_terms is None else int(exact_terms)
        if J < 1:
            raise ParameterError("exact_terms must be >= 1")
        k, a = cfg.weight, cfg.parity_a
        A = self.rhs_coefficients(n_terms)
        total = mp.mpc(0)
        for n in range(1, n_terms + 1):
            if A[n] == 0:
                continue
            total += to_mp(A[n], self.ctx) * self._kernel_remainder(n, y, J) / mp.power(n, k + a)
        B = self.asymptotic_coeffs(J)
        poly = mp.fsum(B[m] * mp.power(y, 2 * m + a) for m in range(J))
        return self.prefactor_constant() * mp.power(y, a) * total + poly

    def dirichlet_ratio(self, m):
        """``S_m = sum_n A(n) / n^{k+a+2m} = L_g(k+a+2m, conj psi) / L(1+a+2m, conj psi')``."""
        key = ("S", m)
        if key not in self._cache:
            cfg = self.config
            mp = self.mp
            k, a = cfg.weight, cfg.parity_a
            s = k + a + 2 * m
            dual = self.cusp_series().dual()
            Ng = cfg.level_N
            Lg = dual.lambda_f(s) * mp.power(2 * mp.pi / mp.sqrt(Ng), s) / mp.gamma(s)
            L = DirichletLSeries(cfg.psi_prime.conjugate(), self.ctx).L(1 + a + 2 * m)
            self._cache[key] = Lg / L
        return self._cache[key]

    # -- residues --------------------------------------------------------------
    def zero_lists(self):
        """Positive-ordinate zeros of ``L(s, psi')`` and of ``L(s, conj psi')``."""
        cfg = self.config
        need = cfg.zero_budget
        if self._zeros is None or len(self._zeros) < need:
            self._zeros = first_zeros(self.dirichlet_series(), need) if need else []
        if cfg.psi_prime.is_real:
            self._zeros_conj = self._zeros
        elif self._zeros_conj is None or len(self._zeros_conj) < need:
            conj = DirichletLSeries(cfg.psi_prime.conjugate(), self.ctx)
            self._zeros_conj = first_zeros(conj, need) if need else []
        return self._zeros, self._zeros_conj

    def selected_zeros(self):
        """The ``rho`` used in ``R(y)``, ordered by ordinate.

        ``pairs``: the ``zero_budget`` lowest zeros above the axis together with
        the same number below.  ``terms``: the ``zero_budget`` zeros of
        smallest ``|Im rho|`` counted individually (upper one first on ties).
        """
        cfg = self.config
        mp = self.mp
        upper, lower = self.zero_lists()
        ups = [mp.mpc(0.5, z.t) for z in upper]
        downs = [mp.mpc(0.5, -z.t) for z in lower]
        B = cfg.zero_budget
        if cfg.zero_semantics == "pairs":
            chosen = ups[:B] + downs[:B]
        else:
            merged = sorted(ups[:B] + downs[:B], key=lambda r: (abs(mp.im(r)), -mp.im(r)))
            chosen = merged[:B]
        return sorted(chosen, key=lambda r: mp.im(r))

    def residue_weight(self, rho):
        """``Gamma(rho) L_f(rho, psi) / L'(rho, psi')``."""
        mp = self.mp
        key = ("w", mp.nstr(mp.re(rho), 40), mp.nstr(mp.im(rho), 40))
        if key not in self._cache:
            Lf = self.cusp_series()
            if mp.im(rho) > 0 or self.config.psi_prime.is_real:
                deriv = self.dirichlet_series().L_deriv(rho)
            else:
                # L'(rho, psi') = conj(L'(conj rho, conj psi'))
                conj = DirichletLSeries(self.config.psi_prime.conjugate(), self.ctx)
                deriv = mp.conj(conj.L_deriv(mp.conj(rho)))
            self._cache[key] = Lf.residue_numerator(rho) / deriv
        return self._cache[key]

    def residue_sum(self, y, with_brackets=False):
        """``R(y)`` summed bracket by bracket; returns ``(total, subtotals)`` if asked."""
        cfg = self.config
        mp = self.mp
        y = to_mp(y, self.ctx)
        rhos = self.selected_zeros()
        brackets = bracket(rhos, cfg.bracket_C)
        use_pairs = cfg.is_real and cfg.zero_semantics == "pairs"
        subtotals = []
        for group in brackets.groups:
            sub = mp.mpc(0)
            for rho in group:
                if use_pairs:
                    if mp.im(rho) < 0:
                        continue
                    sub += 2 * mp.re(self.residue_weight(rho) * mp.power(y, -rho))
                else:
                    sub += self.residue_weight(rho) * mp.power(y, -rho)
            if use_pairs and all(mp.im(rho) < 0 for rho in group):
                continue
            subtotals.append(sub)
        total = mp.fsum(subtotals) if subtotals else mp.mpc(0)
        return (total, subtotals) if with_brackets else total

    def r0_term(self):
        cfg = self.config
        mp = self.mp
        if cfg.parity_a != 0 or cfg.psi_prime.modulus == 1:
            return mp.mpf(0)
        if "R0" not in self._cache:
            self._cache["R0"] = self.cusp_series().lfprime_at_zero() / self.dirichlet_series().L_deriv(0)
        return self._cache["R0"]

    # -- assembly ----------------------------------------------------------------
    def evaluate(self, y):
        cfg = self.config
        mp = self.mp
        y = to_mp(y, self.ctx)
        lhs = self.lhs_series(y)
        hyp = self.rhs_hypergeometric_sum(y)
        r0 = self.r0_term()
        res, subtotals = self.residue_sum(y, with_brackets=True)
        total = hyp + r0 + res
        return YRecord(
            y=y, lhs=lhs, rhs_hypergeom=hyp, rhs_R0=r0, rhs_residue_sum=res,
            bracket_subtotals=subtotals, rhs_total=total, abs_diff=abs(lhs - total),
            lhs_tail_bound=mp.mpf(self.lhs_tail_bound(y, cfg.n_max_lhs)),
            rhs_tail_bound=mp.mpf(self.rhs_tail_bound(y, cfg.n_max_rhs)),
            n_lhs=cfg.n_max_lhs, n_rhs=cfg.n_max_rhs, zeros_used=len(self.selected_zeros()),
        )

    def summary(self):
        cfg = self.config
        return {
            "weight": cfg.weight,
            "level_Q": cfg.form.level,
            "psi_modulus": cfg.psi.modulus,
            "psi_prime_modulus": cfg.psi_prime.modulus,
            "psi_digest": cfg.psi.values_digest(),
            "psi_prime_digest": cfg.psi_prime.values_digest(),
            "parity_a": cfg.parity_a,
            "level_N": cfg.level_N,
            "n_max_lhs": cfg.n_max_lhs,
            "n_max_rhs": cfg.n_max_rhs,
            "zero_budget": cfg.zero_budget,
            "zero_semantics": cfg.zero_semantics,
            "bracket_C": float(cfg.bracket_C),
            "digits": self.ctx.digits,
        }

    def verify(self):
        report = VerificationReport(self.summary())
        report.zeros = [self.mp.im(r) for r in self.selected_zeros()]
        for y in self.config.y_values:
            report.records.append(self.evaluate(y))
        return report

    # -- asymptotics -----------------------------------------------------------------
    def asymptotic_coeffs(self, M_prime):
        """``B_0, ..., B_{M'-1}``: the hypergeometric side equals ``sum B_m y^{2m+a} + O(y^{2M'+a})``.

        ``B_m = C (-1)^m c_m (N / 2 pi M)^{2m} S_m`` with ``C`` the constant
        prefactor, ``c_m = ((k+a)/2)_m ((k+1+a)/2)_m / (((1+2a)/2)_m m!)``
        and ``S_m`` from :meth:`dirichlet_ratio`.  ``B_0 = 0`` when ``a = 0``.
        """
        if int(M_prime) < 1:
            raise ParameterError("M' must be >= 1")
        cfg = self.config
        mp = self.mp
        k, a, N, M = cfg.weight, cfg.parity_a, cfg.level_N, cfg.psi_prime.modulus
        C = self.prefactor_constant()
        out = []
        for m in range(int(M_prime)):
            if m == 0 and a == 0:
                out.append(mp.mpf(0))
                continue
            cm = (mp.rf(mp.mpf(k + a) / 2, m) * mp.rf(mp.mpf(k + 1 + a) / 2, m)
                  / (mp.rf(mp.mpf(1 + 2 * a) / 2, m) * mp.factorial(m)))
            out.append(C * (-1) ** m * cm * mp.power(mp.mpf(N) / (2 * mp.pi * M), 2 * m)
                       * self.dirichlet_ratio(m))
        return out

    def richardson_limit(self, ys=("1e-2", "1e-3", "1e-4")):
        """Extrapolate ``(hyp(y) - B_0 y^a) / y^{2+a}`` to ``y -> 0``; the limit is ``B_1``.

        The hypergeometric side is the plain truncated sum, only its constant
        term exact, so the limit is an independent check of ``B_1``.  The
        ratio has an expansion in powers of ``y^2``; each Richardson pass
        removes one power.  Returns ``(limit, raw_ratios)``.
        """
        mp = self.mp
        a = self.config.parity_a
        B0 = self.asymptotic_coeffs(1)[0]
        ys = [to_mp(y, self.ctx) for y in ys]
        ratios = [(self.rhs_hypergeometric_sum(y, exact_terms=1) - B0 * mp.power(y, a)) / mp.power(y, 2 + a)
                  for y in ys]
        table = list(ratios)
        hs = [y * y for y in ys]
        for level in range(1, len(table)):
            table = [
                (hs[i] * table[i + 1] - hs[i + level] * table[i]) / (hs[i] - hs[i + level])
                for i in range(len(table) - 1)
            ]
        return table[0], ratios

    # -- oscillation ----------------------------------------------------------------
    def oscillation_profile(self, y_grid, zero_budget=None, M_prime=3, lhs_tol=None):
        """Rows ``(y, direct, reconstructed, deviation)``.

        ``direct = sqrt(y) (LHS - R0 - sum_{m<M'} B_m y^{2m+a})`` with the
        Lambert series summed until its certified tail is below ``lhs_tol``;
        ``reconstructed = sum r_n cos(theta_n - t_n log y)`` over the lowest
        ``zero_budget`` zeros, ``r_n e^{i theta_n} = 2 Gamma(rho_n) L_f(rho_n) / L'(rho_n)``.
        """
        cfg = self.config
        if not cfg.is_real:
            raise HypothesisError("oscillation profile needs real characters and real coefficients")
        mp = self.mp
        budget = cfg.zero_budget if zero_budget is None else int(zero_budget)
        upper, _ = self.zero_lists() if budget <= cfg.zero_budget else (None, None)
        if upper is None or len(upper) < budget:
            self._zeros = first_zeros(self.dirichlet_series(), budget)
            upper = self._zeros
        weights = []
        for z in upper[:budget]:
            rho = mp.mpc(0.5, z.t)
            w = 2 * self.residue_weight(rho)
            weights.append((abs(w), mp.arg(w), z.t))
        B = self.asymptotic_coeffs(M_prime)
        r0 = mp.re(self.r0_term())
        a = cfg.parity_a
        tol = lhs_tol if lhs_tol is not None else mp.mpf(10) ** (-20)
        rows = []
        for y in y_grid:
            y = to_mp(y, self.ctx)
            n = self.lhs_terms_needed(y, tol)
            lhs = mp.re(self.lhs_series(y, n))
            poly = mp.re(mp.fsum(B[m] * mp.power(y, 2 * m + a) for m in range(M_prime)))
            direct = mp.sqrt(y) * (lhs - r0 - poly)
            ly = mp.log(y)
            rec = mp.fsum(r * mp.cos(theta - t * ly) for r, theta, t in weights)
            rows.append((y, direct, rec, direct - rec))
        return rows


def relative_l2_deviation(rows):
    num = sum(r[3] ** 2 for r in rows)
    den = sum(r[1] ** 2 for r in rows)
    return (num / den) ** 0.5


def write_profile_csv(rows, path, digits=20):
    import csv

    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(("y", "direct", "reconstructed", "deviation"))
        for y, d, r, dev in rows:
            mp = y.context
            w.writerow((mp.nstr(y, digits), mp.nstr(d, digits), mp.nstr(r, digits), mp.nstr(dev, digits)))


def verify_identity(config, zeros=None):
    """Evaluate ``config`` at every ``y`` and return the :class:`VerificationReport`."""
    return LambertIdentity(config, zeros).verify()

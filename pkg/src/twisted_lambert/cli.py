"""Command-line front door.

Subcommands::

    twisted-lambert table1      [--digits D] [--n-max N] [--zero-budget B] [--zero-pairs|--zero-terms]
    twisted-lambert verify      CONFIG [--out report.json]
    twisted-lambert zeros find  --modulus M [--values V] [--t-max T] [--scan-step h] [--out zeros.csv]
    twisted-lambert zeros export --modulus M ... --out zeros.csv
    twisted-lambert zeros import PATH --modulus M [--values V]
    twisted-lambert oscillate   CONFIG [--zero-budget B] [--m-prime 3] [--out profile.csv]
    twisted-lambert asymptotic  CONFIG [--m-prime 3] [--out coeffs.json]

Exit codes: 0 success, 2 configuration error, 3 numerical acceptance
failure, 4 data or certification failure.

Run configurations are INI files with sections ``[form]``, ``[psi]``,
``[psi_prime]`` and ``[run]``; see ``demos/table1.ini``.
"""

from __future__ import annotations

import argparse
import ast
import configparser
import datetime as _dt
import json
import operator
import sys
import traceback
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .characters import build_character
from .cuspforms import delta_form, load_coefficients
from .errors import (
    CertificationError,
    CoefficientFileError,
    ConfigError,
    HypothesisError,
    InsufficientCoefficientsError,
    IntegrityError,
    LambertError,
    ParameterError,
    UnsupportedLevelError,
)
from .identity import IdentityConfig, LambertIdentity, relative_l2_deviation, write_profile_csv
from .lfunctions import DirichletLSeries
from .precision import PrecisionContext
from .zeros import check_scan_stability, export_zeros, find_zeros, import_zeros

EXIT_OK, EXIT_CONFIG, EXIT_ACCEPTANCE, EXIT_DATA = 0, 2, 3, 4

# Delta twisted by the even quadratic character mod 5: y, expected LHS, expected RHS
TABLE1_ROWS = (
    ("1.589", "0.02160533841", "0.02160532545"),
    ("1+sqrt(5)", "0.01599519746", "0.01599520708"),
    ("0.0749", "0.03507904537", "0.03507917507"),
    ("4-pi", "0.01767636417", "0.01767636262"),
    ("pi**sqrt(3)", "0.00069009521", "0.00069009799"),
    ("5.7395", "0.00298669912", "0.00298669847"),
)
TABLE1_LHS_TOL = 1e-9
TABLE1_RHS_TOL = 1e-6
TABLE1_INTERNAL_TOL = 5e-7


# ---------------------------------------------------------------------------
# y expressions


_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv, ast.Pow: operator.pow}


def eval_expression(text, ctx):
    """Evaluate an arithmetic expression in ``pi``, ``e``, ``sqrt``, ``exp``, ``log`` at ``ctx``."""
    mp = ctx.mp
    names = {"pi": mp.pi, "e": mp.e}
    funcs = {"sqrt": mp.sqrt, "exp": mp.exp, "log": mp.log}

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            # decimal literals are re-read at full precision
            return mp.mpf(ast.get_source_segment(text, node) or repr(node.value))
        if isinstance(node, ast.Name) and node.id in names:
            return +names[node.id]
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if (isinstance(node, ast.Call) and isinstance(node.func, ast.Name)
                and node.func.id in funcs and len(node.args) == 1 and not node.keywords):
            return funcs[node.func.id](ev(node.args[0]))
        raise ValueError(f"unsupported expression element in {text!r}")

    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"cannot parse {text!r}: {exc.msg}") from None
    return ev(tree)


# ---------------------------------------------------------------------------
# configuration


@dataclass
class RunConfig:
    form_source: str = "delta"
    form_n_max: int = 4096
    psi_modulus: int = 1
    psi_values: object = "principal"
    psi_prime_modulus: int = 1
    psi_prime_values: object = "principal"
    y_texts: list = field(default_factory=list)
    y_min: str = None
    y_max: str = None
    y_points: int = 0
    n_max_lhs: int = 2000
    n_max_rhs: int = 2000
    zero_budget: int = 22
    zero_semantics: str = "pairs"
    bracket_C: float = 1.0
    digits: int = 60
    tolerance: float = None
    report: str = None
    profile: str = None
    zeros_file: str = None
    base_dir: str = "."


def _split_values(text):
    text = text.strip()
    if text.lower() in ("principal", "quadratic"):
        return text.lower()
    inner = text.strip("[]")
    return [v.strip() for v in inner.replace(";", ",").split(",") if v.strip()]


def parse_config(path):
    """Read and validate a run configuration, reporting every problem at once."""
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    problems = []
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    except (OSError, configparser.Error) as exc:
        raise ConfigError([f"cannot read {path}: {exc}"]) from None
    rc = RunConfig(base_dir=str(Path(path).resolve().parent))

    def get(section, key, conv, default):
        if not parser.has_option(section, key):
            return default
        raw = parser.get(section, key)
        try:
            return conv(raw)
        except (TypeError, ValueError) as exc:
            problems.append(f"[{section}] {key} = {raw!r}: {exc}")
            return default

    for section in ("form", "psi", "psi_prime", "run"):
        if not parser.has_section(section):
            if section == "run":
                problems.append("missing section [run]")
            continue
    known = {
        "form": {"source", "n_max"},
        "psi": {"modulus", "values"},
        "psi_prime": {"modulus", "values"},
        "run": {"y", "y_min", "y_max", "y_points", "n_max_lhs", "n_max_rhs", "zero_budget",
                "zero_semantics", "bracket_c", "digits", "tolerance", "report", "profile", "zeros_file"},
    }
    for section in parser.sections():
        if section not in known:
            problems.append(f"unknown section [{section}]")
            continue
        for key in parser.options(section):
            if key not in known[section]:
                problems.append(f"[{section}] unknown key {key!r}")

    rc.form_source = get("form", "source", str, rc.form_source)
    rc.form_n_max = get("form", "n_max", int, rc.form_n_max)
    rc.psi_modulus = get("psi", "modulus", int, rc.psi_modulus)
    rc.psi_values = get("psi", "values", _split_values, rc.psi_values)
    rc.psi_prime_modulus = get("psi_prime", "modulus", int, rc.psi_prime_modulus)
    rc.psi_prime_values = get("psi_prime", "values", _split_values, rc.psi_prime_values)
    rc.y_texts = get("run", "y", lambda s: [t.strip() for t in s.split(",") if t.strip()], [])
    rc.y_min = get("run", "y_min", str, None)
    rc.y_max = get("run", "y_max", str, None)
    rc.y_points = get("run", "y_points", int, 0)
    rc.n_max_lhs = get("run", "n_max_lhs", int, rc.n_max_lhs)
    rc.n_max_rhs = get("run", "n_max_rhs", int, rc.n_max_rhs)
    rc.zero_budget = get("run", "zero_budget", int, rc.zero_budget)
    rc.zero_semantics = get("run", "zero_semantics", lambda s: s.strip().lower(), rc.zero_semantics)
    rc.bracket_C = get("run", "bracket_c", float, rc.bracket_C)
    rc.digits = get("run", "digits", int, rc.digits)
    rc.tolerance = get("run", "tolerance", float, None)
    rc.report = get("run", "report", str, None)
    rc.profile = get("run", "profile", str, None)
    rc.zeros_file = get("run", "zeros_file", str, None)
    problems += validate_run_config(rc)
    if problems:
        raise ConfigError(problems)
    return rc


def validate_run_config(rc):
    problems = []
    if rc.digits < 30:
        problems.append(f"digits = {rc.digits} must be >= 30")
    if rc.zero_semantics not in ("pairs", "terms"):
        problems.append(f"zero_semantics must be 'pairs' or 'terms', got {rc.zero_semantics!r}")
    for name in ("n_max_lhs", "n_max_rhs", "form_n_max"):
        if getattr(rc, name) < 1:
            problems.append(f"{name} must be positive")
    if rc.zero_budget < 0:
        problems.append("zero_budget must be non-negative")
    if rc.bracket_C <= 0:
        problems.append("bracket_C must be positive")
    ctx = PrecisionContext(max(rc.digits, 30))
    for text in rc.y_texts + [t for t in (rc.y_min, rc.y_max) if t]:
        try:
            if not eval_expression(text, ctx) > 0:
                problems.append(f"y = {text} must be positive")
        except ValueError as exc:
            problems.append(str(exc))
    if (rc.y_min is None) != (rc.y_max is None):
        problems.append("y_min and y_max must be given together")
    for label, mod, values in (("psi", rc.psi_modulus, rc.psi_values),
                               ("psi_prime", rc.psi_prime_modulus, rc.psi_prime_values)):
        try:
            chi = build_character(mod, values)
            if not chi.primitive:
                problems.append(f"[{label}] character mod {mod} is not primitive")
        except LambertError as exc:
            problems.append(f"[{label}] {exc}")
    if rc.form_source != "delta" and not _resolve(rc, rc.form_source).exists():
        problems.append(f"[form] coefficient file {rc.form_source!r} not found")
    return problems


def _resolve(rc, name):
    p = Path(name)
    return p if p.is_absolute() else Path(rc.base_dir) / p


def build_identity_config(rc, y_values=None):
    ctx = PrecisionContext(rc.digits)
    if rc.form_source == "delta":
        form = delta_form(rc.form_n_max)
    else:
        form = load_coefficients(_resolve(rc, rc.form_source), rc.form_n_max)
    psi = build_character(rc.psi_modulus, rc.psi_values)
    psi_prime = build_character(rc.psi_prime_modulus, rc.psi_prime_values)
    if y_values is None:
        y_values = [eval_expression(t, ctx) for t in rc.y_texts]
    return IdentityConfig(form, psi, psi_prime, tuple(y_values), rc.n_max_lhs, rc.n_max_rhs,
                          rc.zero_budget, rc.zero_semantics, rc.bracket_C, ctx)


def _log_grid(rc, ctx):
    mp = ctx.mp
    lo, hi = eval_expression(rc.y_min, ctx), eval_expression(rc.y_max, ctx)
    n = max(rc.y_points, 2)
    return [mp.exp(mp.log(lo) + (mp.log(hi) - mp.log(lo)) * j / (n - 1)) for j in range(n)]


def _apply_overrides(rc, args):
    for attr, name in (("digits", "digits"), ("n_max_lhs", "n_max"), ("n_max_rhs", "n_max"),
                       ("zero_budget", "zero_budget"), ("bracket_C", "bracket_C")):
        value = getattr(args, name, None)
        if value is not None:
            setattr(rc, attr, value)
    if getattr(args, "zero_semantics", None):
        rc.zero_semantics = args.zero_semantics
    problems = validate_run_config(rc)
    if problems:
        raise ConfigError(problems)
    return rc


# ---------------------------------------------------------------------------
# output helpers


def _write_text(path, text):
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _write_metadata(path, command):
    meta = {
        "command": command,
        "version": __version__,
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
    }
    _write_text(str(path) + ".meta.json", json.dumps(meta, indent=2, sort_keys=True) + "\n")


def _fixed(x, places=11):
    """``x`` rounded to ``places`` decimals, printed in fixed notation."""
    mp = x.context
    v = mp.re(x)
    scaled = mp.nint(v * mp.mpf(10) ** places)
    sign = "-" if scaled < 0 else ""
    digits = str(abs(int(scaled))).rjust(places + 1, "0")
    return f"{sign}{digits[:-places]}.{digits[-places:]}"


# ---------------------------------------------------------------------------
# commands


def cmd_table1(args):
    ctx = PrecisionContext(args.digits or 60)
    mp = ctx.mp
    n_max = args.n_max or 2000
    ys = [eval_expression(y, ctx) for y, _, _ in TABLE1_ROWS]
    config = IdentityConfig(
        delta_form(max(4096, n_max)), build_character(1, "principal"),
        build_character(5, [1, -1, -1, 1, 0]), tuple(ys), n_max, n_max,
        22 if args.zero_budget is None else args.zero_budget,
        args.zero_semantics or "pairs", args.bracket_C or 1.0, ctx,
    )
    report = LambertIdentity(config).verify()
    print(f"{'y':>12}  {'LHS':>14}  {'RHS':>14}  {'|diff|':>14}")
    failures = []
    rows = []
    for (label, lhs_ref, rhs_ref), rec in zip(TABLE1_ROWS, report.records):
        lhs_gap = abs(mp.re(rec.lhs) - mp.mpf(lhs_ref))
        rhs_gap = abs(mp.re(rec.rhs_total) - mp.mpf(rhs_ref))
        ok_lhs = lhs_gap <= TABLE1_LHS_TOL
        ok_rhs = rhs_gap <= TABLE1_RHS_TOL
        ok_int = rec.abs_diff <= TABLE1_INTERNAL_TOL
        print(f"{label:>12}  {_fixed(rec.lhs):>14}  {_fixed(rec.rhs_total):>14}  {_fixed(rec.abs_diff):>14}")
        rows.append({
            "y": label, "expected_lhs": lhs_ref, "expected_rhs": rhs_ref,
            "lhs_gap": mp.nstr(lhs_gap, 6), "rhs_gap": mp.nstr(rhs_gap, 6),
            "lhs_ok": bool(ok_lhs), "rhs_ok": bool(ok_rhs), "internal_ok": bool(ok_int),
        })
        for ok, what, gap, tol in ((ok_lhs, "LHS vs reference", lhs_gap, TABLE1_LHS_TOL),
                                   (ok_rhs, "RHS vs reference", rhs_gap, TABLE1_RHS_TOL),
                                   (ok_int, "internal |LHS - RHS|", rec.abs_diff, TABLE1_INTERNAL_TOL)):
            if not ok:
                failures.append(f"y = {label}: {what} = {mp.nstr(gap, 3)} > {tol:g}")
    payload = report.to_dict()
    payload["reference_checks"] = rows
    out = args.out or "table1_report.json"
    _write_text(out, json.dumps(payload, indent=2, sort_keys=True) + "\n")
    _write_metadata(out, "table1")
    if failures:
        for f in failures:
            print(f"FAIL {f}")
        print(f"first failing row: {failures[0]}", file=sys.stderr)
        return EXIT_ACCEPTANCE
    print("all rows within tolerance")
    return EXIT_OK


def cmd_verify(args):
    rc = _apply_overrides(parse_config(args.config), args)
    config = build_identity_config(rc)
    if not config.y_values:
        raise ConfigError(["[run] y must list at least one value for verify"])
    report = LambertIdentity(config).verify()
    out = args.out or (str(_resolve(rc, rc.report)) if rc.report else "report.json")
    _write_text(out, report.to_json())
    _write_metadata(out, "verify")
    mp = config.ctx.mp
    for rec in report.records:
        print(f"y = {mp.nstr(rec.y, 12):>16}  lhs = {mp.nstr(mp.re(rec.lhs), 15):>22}  "
              f"|lhs - rhs| = {mp.nstr(rec.abs_diff, 3)}")
    if rc.tolerance is not None and report.max_abs_diff() > rc.tolerance:
        print(f"FAIL max |lhs - rhs| = {mp.nstr(report.max_abs_diff(), 3)} > {rc.tolerance:g}", file=sys.stderr)
        return EXIT_ACCEPTANCE
    return EXIT_OK


def _series_from_args(args):
    ctx = PrecisionContext(args.digits or 60)
    values = _split_values(args.values) if args.values else ("principal" if args.modulus == 1 else "quadratic")
    try:
        chi = build_character(args.modulus, values)
    except LambertError as exc:
        raise ConfigError([str(exc)]) from None
    if not chi.primitive:
        raise ConfigError([f"character mod {args.modulus} is not primitive"])
    return DirichletLSeries(chi, ctx)


def cmd_zeros(args):
    series = _series_from_args(args)
    mp = series.ctx.mp
    if args.action == "import":
        zeros = import_zeros(args.path, series)
        print(f"{len(zeros)} zeros re-certified")
    else:
        t_max = args.t_max or 100
        step = args.scan_step or 0.05
        zeros = find_zeros(series, t_max, scan_step=step)
        check_scan_stability(series, t_max, zeros, step)
        if args.action == "export" and not args.out:
            raise ConfigError(["zeros export needs --out"])
    for z in zeros:
        print(f"{z.index:4d}  {mp.nstr(z.t, 25):>30}  residual {mp.nstr(z.residual, 3)}")
    if args.out:
        export_zeros(zeros, args.out)
    return EXIT_OK


def cmd_oscillate(args):
    rc = _apply_overrides(parse_config(args.config), args)
    ctx = PrecisionContext(rc.digits)
    grid = _log_grid(rc, ctx) if rc.y_min else [eval_expression(t, ctx) for t in rc.y_texts]
    if not grid:
        raise ConfigError(["oscillate needs y_min/y_max/y_points or a y list in [run]"])
    ev = LambertIdentity(build_identity_config(rc, y_values=grid))
    rows = ev.oscillation_profile(grid, M_prime=args.m_prime)
    out = args.out or (str(_resolve(rc, rc.profile)) if rc.profile else "profile.csv")
    write_profile_csv(rows, out)
    _write_metadata(out, "oscillate")
    dev = relative_l2_deviation(rows)
    print(f"{len(rows)} rows, relative L2 deviation {ctx.mp.nstr(dev, 3)}, "
          f"max |deviation| {ctx.mp.nstr(max(abs(r[3]) for r in rows), 3)}")
    return EXIT_OK


def cmd_asymptotic(args):
    rc = _apply_overrides(parse_config(args.config), args)
    ev = LambertIdentity(build_identity_config(rc, y_values=()))
    mp = ev.mp
    B = ev.asymptotic_coeffs(args.m_prime)
    limit, ratios = ev.richardson_limit()
    rel = abs(limit - B[1]) / abs(B[1])
    for m, b in enumerate(B):
        print(f"B_{m} = {mp.nstr(b, 20)}")
    print(f"Richardson limit for B_1 from the truncated sum: {mp.nstr(limit, 20)} "
          f"(relative gap {mp.nstr(rel, 3)})")
    payload = {
        "B": [mp.nstr(b, 30) if mp.im(b) == 0 else {"re": mp.nstr(mp.re(b), 30), "im": mp.nstr(mp.im(b), 30)}
              for b in map(mp.mpmathify, B)],
        "richardson_limit": mp.nstr(mp.re(limit), 30),
        "richardson_ratios": [mp.nstr(mp.re(r), 30) for r in ratios],
        "relative_gap": mp.nstr(rel, 6),
    }
    if args.out:
        _write_text(args.out, json.dumps(payload, indent=2, sort_keys=True) + "\n")
        _write_metadata(args.out, "asymptotic")
    return EXIT_OK if rel < 5e-4 else EXIT_ACCEPTANCE


# ---------------------------------------------------------------------------
# parser


def _add_common(p, config=False):
    p.add_argument("--digits", type=int, help="working decimal precision (>= 30)")
    p.add_argument("--out", help="output path")
    if config:
        p.add_argument("--n-max", type=int, dest="n_max", help="truncation of both n-sums")
        p.add_argument("--zero-budget", type=int, dest="zero_budget")
        g = p.add_mutually_exclusive_group()
        g.add_argument("--zero-pairs", dest="zero_semantics", action="store_const", const="pairs",
                       help="count the zero budget in conjugate pairs (default)")
        g.add_argument("--zero-terms", dest="zero_semantics", action="store_const", const="terms",
                       help="count the zero budget in individual zeros")
        p.add_argument("--bracket-C", type=float, dest="bracket_C")


def build_parser():
    parser = argparse.ArgumentParser(prog="twisted-lambert", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("table1", help="reproduce the six-row reference table")
    _add_common(p, config=True)
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("verify", help="evaluate both sides for a configuration")
    p.add_argument("config")
    _add_common(p, config=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("zeros", help="find, export or import certified zeros")
    zsub = p.add_subparsers(dest="action", required=True)
    for action in ("find", "export", "import"):
        q = zsub.add_parser(action)
        if action == "import":
            q.add_argument("path")
        q.add_argument("--modulus", type=int, default=1)
        q.add_argument("--values", help="principal, quadratic or [v_1, ..., v_M]")
        q.add_argument("--t-max", type=float, dest="t_max")
        q.add_argument("--scan-step", type=float, dest="scan_step")
        _add_common(q)
        q.set_defaults(func=cmd_zeros)

    p = sub.add_parser("oscillate", help="oscillation profile CSV")
    p.add_argument("config")
    p.add_argument("--m-prime", type=int, default=3, dest="m_prime")
    _add_common(p, config=True)
    p.set_defaults(func=cmd_oscillate)

    p = sub.add_parser("asymptotic", help="small-y coefficients with a Richardson cross-check")
    p.add_argument("config")
    p.add_argument("--m-prime", type=int, default=3, dest="m_prime")
    _add_common(p, config=True)
    p.set_defaults(func=cmd_asymptotic)
    return parser


def _provenance(exc):
    module = "cli"
    for frame, _ in traceback.walk_tb(exc.__traceback__):
        name = frame.f_globals.get("__name__", "")
        if name.startswith("twisted_lambert."):
            module = name.rsplit(".", 1)[1]
    return module


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        for p in exc.problems:
            print(f"config error: {p}", file=sys.stderr)
        return EXIT_CONFIG
    except HypothesisError as exc:
        print(f"config error [{_provenance(exc)}]: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (CertificationError, CoefficientFileError, IntegrityError,
            InsufficientCoefficientsError, UnsupportedLevelError) as exc:
        print(f"data error [{_provenance(exc)}]: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (ParameterError, LambertError) as exc:
        print(f"error [{_provenance(exc)}]: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())

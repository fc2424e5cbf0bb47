"""Command-line front end.

Every subcommand writes one table (CSV, the default for tabular commands)
or one JSON object carrying ``schema_version``.  Numbers are written with
``--precision`` significant digits so that repeated runs are byte-identical.
A relative ``--output`` path is resolved against ``$HENON_OUTPUT_DIR`` when
that variable is set.

Exit codes: 0 success, 1 invalid input, 2 numerical failure, 64 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import math
import os
import sys
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import asymptotics, morse_index, weighted_spectrum
from .bessel import bessel_zero
from .errors import DomainError, NumericalError
from .radial_shooting import ProblemParams, solve_radial
from .singular_sturm import nu_spectrum

SCHEMA_VERSION = 1
DEFAULT_P = 1.001
MAX_SWEEP_CELLS = 10_000
OUTPUT_DIR_ENV = "HENON_OUTPUT_DIR"
EX_USAGE = 64


@dataclass
class OutputSpec:
    format: str = "csv"
    path: Optional[str] = None
    precision: int = 10

    def resolved_path(self) -> Optional[str]:
        if self.path is None or self.path == "-":
            return None
        base = os.environ.get(OUTPUT_DIR_ENV)
        if base and not os.path.isabs(self.path):
            return os.path.join(base, self.path)
        return self.path


def _fmt(x, precision):
    if isinstance(x, bool) or x is None:
        return "" if x is None else str(x).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return format(x, f".{precision}g")
    return str(x)


def _round(obj, precision):
    """Round floats recursively to ``precision`` significant digits for JSON."""
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return None
        return float(format(x, f".{precision}g"))
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, dict):
        return {k: _round(v, precision) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v, precision) for v in obj]
    return obj


def render_csv(header, rows, precision) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v, precision) for v in row])
    return buf.getvalue()


def render_json(obj, precision) -> str:
    payload = {"schema_version": SCHEMA_VERSION}
    payload.update(_round(obj, precision))
    return json.dumps(payload, indent=2) + "\n"


def emit(spec: OutputSpec, header, rows, extra: Optional[dict] = None):
    """Write a table; JSON output wraps it as ``{"columns", "rows", **extra}``."""
    if spec.format == "json":
        obj = dict(extra or {})
        obj["columns"] = list(header)
        obj["rows"] = [list(r) for r in rows]
        text = render_json(obj, spec.precision)
    else:
        text = render_csv(header, rows, spec.precision)
    _write(spec, text)


def emit_object(spec: OutputSpec, obj: dict):
    if spec.format == "csv":
        flat = {k: (";".join(_fmt(x, spec.precision) for x in v) if isinstance(v, (list, tuple)) else v)
                for k, v in obj.items() if not isinstance(v, dict)}
        text = render_csv(list(flat), [list(flat.values())], spec.precision)
    else:
        text = render_json(obj, spec.precision)
    _write(spec, text)


def _write(spec: OutputSpec, text: str):
    path = spec.resolved_path()
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


# ------------------------------------------------------------------ commands

def cmd_zeros(args, out):
    rows = [(i, bessel_zero(args.beta, i)) for i in range(1, args.count + 1)]
    emit(out, ["i", "zero"], rows)


def cmd_spectrum(args, out):
    rows = []
    for n in range(0, args.n_max + 1):
        for i in range(1, args.i_max + 1):
            pr = weighted_spectrum.weighted_eigenvalue(args.N, args.alpha, n, i)
            rows.append((n, i, pr.order, pr.zero, pr.mu))
    emit(out, ["n", "i", "order", "zero", "mu"], rows)


def cmd_beta_i(args, out):
    cr = weighted_spectrum.beta_crossings(args.N, args.alpha, args.m)
    emit(out, ["i", "beta"], list(enumerate(cr.betas, start=1)),
         {"target_zero": cr.target})


def cmd_resonances(args, out):
    cr = weighted_spectrum.beta_crossings(args.N, args.alpha, args.m)
    rows = []
    for ell, n, a in weighted_spectrum.resonant_alphas(args.N, cr, args.n_max):
        if args.refine:
            a = weighted_spectrum.refine_resonant_alpha(args.N, args.m, ell, n, a)
        rows.append((ell, n, a))
    rows.sort(key=lambda r: r[2])
    emit(out, ["ell", "n", "alpha"], rows)


def _params(args):
    return ProblemParams(args.N, args.alpha, args.p, args.m)


def cmd_solve_radial(args, out):
    prof = solve_radial(_params(args))
    w = prof.w_values
    rows = [(t, r, wv, u) for t, r, wv, u in zip(prof.grid_t, prof.grid_r, w, prof.w_normalized)]
    emit(out, ["t", "r", "w", "u_normalized"], rows,
         {"log_sup_norm": prof.log_sup_norm, "amplitude_root": prof.amplitude_root,
          "nodal_r": prof.nodal_r})


def cmd_nu(args, out):
    spec = nu_spectrum(solve_radial(_params(args)))
    rows = [(i, nu, th, c) for i, (nu, th, c) in
            enumerate(zip(spec.nus, spec.thetas, spec.zero_counts), start=1)]
    emit(out, ["i", "nu", "theta", "zero_count"], rows)


def cmd_morse(args, out):
    params = _params(args)
    rep = morse_index.exact_morse(params, nu_spectrum(solve_radial(params)))
    emit_object(out, rep.to_dict())


def _limit_dict(N, alpha, m):
    rep = morse_index.asymptotic_morse_report(N, alpha, m)
    return {"N": N, "alpha": alpha, "m": m, "total": rep.total, "resonant": rep.resonant,
            "interval": list(rep.interval) if rep.interval else None, "K": rep.K_values}


def cmd_morse_limit(args, out):
    emit_object(out, _limit_dict(args.N, args.alpha, args.m))


def cmd_n_morse(args, out):
    if args.nu1 is not None and args.nu2 is not None:
        nu1, nu2 = args.nu1, args.nu2
    else:
        spec = nu_spectrum(solve_radial(ProblemParams(2, args.alpha, args.p, 2)))
        nu1, nu2 = spec.nus
    rows = [(n, morse_index.n_morse_index(args.alpha, nu1, nu2, n))
            for n in range(1, args.n_max + 1)]
    emit(out, ["n", "n_morse"], rows, {"nu1": nu1, "nu2": nu2})


def cmd_classify(args, out):
    rows = []
    for n in range(1, args.n_max + 1):
        c = asymptotics.classify_n_invariant(args.alpha, n)
        lp = c.limit_eigenpair
        rows.append((n, c.verdict, c.threshold,
                     lp.n if lp else None, lp.i if lp else None, lp.mu if lp else None))
    count = asymptotics.classify_n_invariant(args.alpha, 1).nonradial_count
    emit(out, ["n", "verdict", "threshold", "limit_n", "limit_i", "limit_mu"], rows,
         {"nonradial_count": count})


def cmd_verify_asymptotics(args, out):
    rep = asymptotics.convergence_report(args.N, args.alpha, args.m, args.p_list)
    header = (["p", "amplitude_error"] + [f"nodal_error_{k}" for k in range(1, args.m)]
              + [f"nu_error_{k}" for k in range(1, args.m + 1)] + ["profile_error"])
    rows = [[r.p, r.amplitude_error, *r.nodal_errors, *r.nu_errors, r.profile_error]
            for r in rep.rows]
    emit(out, header, rows, {"monotone": rep.monotone, "flags": rep.flags})
    if not rep.monotone:
        print(f"warning: non-monotone error columns: {', '.join(rep.flags)}", file=sys.stderr)


def cmd_expansion(args, out):
    rep = asymptotics.expansion_check(args.N, args.alpha, args.m, args.p)
    emit_object(out, {"N": args.N, "alpha": args.alpha, "m": args.m, "p": args.p,
                      "mu": rep.mu, "c": rep.c, "lhs": rep.lhs, "rhs": rep.rhs,
                      "residual": rep.residual, "ratio": rep.ratio,
                      "point_error": rep.point_error})


def _sweep_value(command, N, alpha, p, m):
    if command == "morse-limit":
        v = morse_index.asymptotic_morse(N, alpha, m)
        return f"{v[0]}..{v[1]}" if isinstance(v, tuple) else v
    params = ProblemParams(N, alpha, p, m)
    if command == "morse":
        rep = morse_index.exact_morse(params, nu_spectrum(solve_radial(params)))
        return f"{rep.interval[0]}..{rep.interval[1]}" if rep.resonant else rep.total
    if command == "nu":
        return ";".join(format(v, ".10g") for v in nu_spectrum(solve_radial(params)).nus)
    if command == "amplitude":
        return solve_radial(params).amplitude_root
    raise DomainError(f"unsupported sweep command {command!r}")


def sweep(command, Ns, alphas, ps, ms):
    """Evaluate ``command`` on the cartesian grid; failures become row statuses."""
    cells = len(Ns) * len(alphas) * len(ps) * len(ms)
    if cells > MAX_SWEEP_CELLS:
        raise DomainError(f"grid has {cells} cells, limit is {MAX_SWEEP_CELLS}")
    rows = []
    for N, alpha, p, m in itertools.product(Ns, alphas, ps, ms):
        try:
            value, status = _sweep_value(command, N, alpha, p, m), "ok"
        except (DomainError, NumericalError, OverflowError) as exc:
            value, status = None, f"{type(exc).__name__}: {exc}".replace("\n", " ")
        rows.append((N, alpha, p, m, status, value))
    return ["N", "alpha", "p", "m", "status", "value"], rows


def cmd_sweep(args, out):
    header, rows = sweep(args.command, args.N, args.alpha, args.p, args.m)
    emit(out, header, rows)


# ------------------------------------------------------------------ parsing

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EX_USAGE)


def _float_list(text):
    """``a,b,c`` or ``start:stop:count`` (inclusive linspace); empty means no values."""
    text = text.strip()
    if not text:
        return []
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise argparse.ArgumentTypeError("range must be start:stop:count")
        a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
        return [float(x) for x in np.linspace(a, b, n)]
    return [float(x) for x in text.split(",")]


def _int_list(text):
    return [int(round(x)) for x in _float_list(text)]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default=None)
    common.add_argument("--output", default=None, help="file path (default: standard output)")
    common.add_argument("--precision", type=int, default=10, help="significant digits")

    parser = _Parser(prog="henon", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    def add(name, func, fmt="csv", params=(), help=None):
        sp = sub.add_parser(name, parents=[common], help=help)
        sp.set_defaults(func=func, default_format=fmt)
        if "N" in params:
            sp.add_argument("--N", type=int, default=2)
        if "alpha" in params:
            sp.add_argument("--alpha", type=float, default=0.0)
        if "p" in params:
            sp.add_argument("--p", type=float, default=DEFAULT_P)
        if "m" in params:
            sp.add_argument("--m", type=int, default=2)
        return sp

    sp = add("zeros", cmd_zeros, help="positive zeros of J_beta")
    sp.add_argument("--beta", type=float, required=True)
    sp.add_argument("--count", type=int, default=5)

    sp = add("spectrum", cmd_spectrum, params=("N", "alpha"), help="weighted eigenvalues mu_{n,i}")
    sp.add_argument("--n-max", type=int, default=3)
    sp.add_argument("--i-max", type=int, default=3)

    add("beta-i", cmd_beta_i, params=("N", "alpha", "m"), help="Bessel crossing orders beta_i")

    sp = add("resonances", cmd_resonances, params=("N", "alpha", "m"),
             help="weight exponents where the limit Morse index jumps")
    sp.add_argument("--n-max", type=int, default=5)
    sp.add_argument("--refine", action="store_true",
                    help="iterate to a self-consistent alpha (needed for N >= 3)")

    add("solve-radial", cmd_solve_radial, params=("N", "alpha", "p", "m"), help="radial profile")
    add("nu", cmd_nu, params=("N", "alpha", "p", "m"), help="negative singular eigenvalues")
    add("morse", cmd_morse, "json", ("N", "alpha", "p", "m"), help="Morse index at finite p")
    add("morse-limit", cmd_morse_limit, "json", ("N", "alpha", "m"), help="Morse index as p -> 1")

    sp = add("n-morse", cmd_n_morse, params=("alpha", "p"), help="n-invariant Morse index (plane)")
    sp.add_argument("--n-max", type=int, default=6)
    sp.add_argument("--nu1", type=float, default=None)
    sp.add_argument("--nu2", type=float, default=None)

    sp = add("classify", cmd_classify, params=("alpha",), help="n-invariant limit classification")
    sp.add_argument("--n-max", type=int, default=6)

    sp = add("verify-asymptotics", cmd_verify_asymptotics, params=("N", "alpha", "m"),
             help="errors against the p -> 1 limits")
    sp.add_argument("--p-list", type=_float_list, default=[1.1, 1.01, 1.001])

    add("expansion", cmd_expansion, "json", ("N", "alpha", "p", "m"),
        help="first-order expansion of the sup-norm")

    sp = add("sweep", cmd_sweep, help="evaluate a command over a parameter grid")
    sp.add_argument("--command", choices=("morse-limit", "morse", "nu", "amplitude"),
                    default="morse-limit")
    sp.add_argument("--N", type=_int_list, default=[2])
    sp.add_argument("--alpha", type=_float_list, default=[0.0])
    sp.add_argument("--p", type=_float_list, default=[DEFAULT_P])
    sp.add_argument("--m", type=_int_list, default=[2])
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # --help exits 0, usage errors exit 64
        return int(exc.code or 0)
    out = OutputSpec(format=args.format or args.default_format, path=args.output,
                     precision=args.precision)
    try:
        args.func(args, out)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (NumericalError, OverflowError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    return 0


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()

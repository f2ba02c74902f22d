"""``spn``: command-line front end.

Exit codes: 0 success, 1 bad input or usage, 2 internal-consistency failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__, _kernels
from ._io import write_rows
from .errors import ConsistencyError, SPNError, UserError
from .numtheory import LIOUVILLE, MOBIUS, ONE, parse_sign_function

log = logging.getLogger("spn")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    command: str
    f: str | None
    cache_dir: str
    use_cache: bool
    output_format: str
    out: str | None
    options: dict = field(default_factory=dict)


def _f_arg(allowed):
    def parse(text):
        f = parse_sign_function(text)
        if f not in allowed:
            names = ", ".join(g.descriptor for g in allowed)
            raise argparse.ArgumentTypeError(f"--f must be one of {names}")
        return f

    return parse


F_ALL = _f_arg((ONE, MOBIUS, LIOUVILLE, parse_sign_function("mu2")))
F_ASYM = _f_arg((MOBIUS, LIOUVILLE))
F_HR = _f_arg((ONE, MOBIUS, LIOUVILLE))
F_CONTOUR = _f_arg((ONE, MOBIUS, LIOUVILLE))


def _n_list(args, parser) -> list[int]:
    if args.n is not None and args.n_min is not None:
        parser.error("give either --n or --n-min/--n-max, not both")
    if args.n is not None:
        return list(args.n)
    if args.n_min is None or args.n_max is None:
        parser.error("need --n or both --n-min and --n-max")
    if args.n_max < args.n_min:
        parser.error("--n-max must be >= --n-min")
    return list(range(args.n_min, args.n_max + 1, args.step))


def _add_n_range(p):
    p.add_argument("--n", type=int, nargs="+", help="explicit list of n")
    p.add_argument("--n-min", type=int)
    p.add_argument("--n-max", type=int)
    p.add_argument("--step", type=int, default=1)


def _add_common(p, default):
    d = (lambda v: v) if default is None else (lambda v: default)
    p.add_argument("--format", choices=("csv", "json", "plot"), default=d("csv"))
    p.add_argument("--out", default=d(None), help="write output here instead of stdout")
    p.add_argument("--cache-dir", default=d(None), help="exact-table cache (default: $SPN_CACHE or ./.spn-cache)")
    p.add_argument("--no-cache", action="store_true", default=d(False), help="never read or write cache files")
    p.add_argument("-q", "--quiet", action="store_true", default=d(False), help="only warnings on stderr")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="spn", description="Signed partition numbers: exact tables, asymptotics and arc diagnostics.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _add_common(parser, None)
    common = argparse.ArgumentParser(add_help=False)
    # repeated after the subcommand; SUPPRESS keeps the top-level value unless given here
    _add_common(common, argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    _add = sub.add_parser
    sub.add_parser = lambda name, **kw: _add(name, parents=[common], **kw)

    p = sub.add_parser("exact", help="exact table p(0..N, f)")
    p.add_argument("--f", type=F_ALL, required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--method", choices=("recurrence", "product"), default="recurrence")

    p = sub.add_parser("estimate", help="two-term asymptotic estimate")
    p.add_argument("--f", type=F_ASYM, required=True)
    _add_n_range(p)

    p = sub.add_parser("compare", help="estimate against exact values")
    p.add_argument("--f", type=F_ASYM, required=True)
    _add_n_range(p)

    p = sub.add_parser("saddle", help="solve the saddle-point equation")
    p.add_argument("--f", type=F_ASYM, required=True)
    p.add_argument("--x", type=float, nargs="+", required=True)
    p.add_argument("--sign", choices=("+", "-", "both"), default="both")

    p = sub.add_parser("relations", help="normalised saddle relations")
    p.add_argument("--f", type=F_ASYM, required=True)
    p.add_argument("--x", type=float, nargs="+", required=True)

    p = sub.add_parser("growth", help="log p(2k, f) against its normalisation")
    p.add_argument("--f", type=F_HR, required=True)
    p.add_argument("--k", type=int, nargs="+", required=True)

    p = sub.add_parser("constants", help="exact arc constants V, W, G and the crude V bound")
    p.add_argument("--which", choices=("V", "W", "G", "crude"), required=True)
    p.add_argument("--q", type=int, nargs="+")
    p.add_argument("--q-max", type=int)

    p = sub.add_parser("gqr", help="zeta(2) g(q, r) exactly, with a truncated-series check")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--terms", type=int, default=10**5)

    p = sub.add_parser("arcs", help="arc classification and scans of Psi(rho e(alpha))")
    p.add_argument("--f", type=F_ASYM, required=True)
    p.add_argument("--X", type=float, required=True)
    p.add_argument(
        "--scan", choices=("classify", "major", "minor", "nonprincipal", "taylor", "principal"), default="minor"
    )
    p.add_argument("--alpha", type=float, nargs="+", help="points for --scan classify")
    p.add_argument("--q", type=int, help="denominator for --scan major")
    p.add_argument("--a", type=int, help="numerator for --scan major")
    p.add_argument("--j", type=int, default=0, help="weight for --scan principal")
    p.add_argument("--samples", type=int, default=256)
    p.add_argument("--grid", type=int, default=9, help="beta grid size for major/taylor/principal")

    p = sub.add_parser("contour", help="p(n, f) by contour quadrature")
    p.add_argument("--f", type=F_CONTOUR, required=True)
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("diagnostics", help="exponential-sum ratios (no pass/fail)")
    p.add_argument("--t", type=int, nargs="+", default=[10**4, 10**5, 10**6])
    p.add_argument("--A", type=float, default=2.0)
    p.add_argument("--X", type=float, default=1e5)
    return parser


# ---------------------------------------------------------------- commands


def cmd_exact(args, cfg, parser):
    from .exactpartitions import cached_table, exact_by_product

    if args.n_max < 0:
        parser.error("--n-max must be >= 0")
    if args.method == "product":
        tab = exact_by_product(args.f, args.n_max)
    else:
        tab = cached_table(args.f, args.n_max, Path(cfg.cache_dir), use_disk=cfg.use_cache)
    return ("n", "p"), [(n, tab[n]) for n in range(args.n_max + 1)]


def _estimate_rows(reports):
    from .asymptotics import EstimateReport

    return EstimateReport.CSV_HEADER, [r.csv_row() for r in reports]


def cmd_estimate(args, cfg, parser):
    from .asymptotics import report

    return _estimate_rows([report(args.f, n) for n in _n_list(args, parser)])


def cmd_compare(args, cfg, parser):
    from .asymptotics import compare_exact
    from .exactpartitions import cached_table

    ns = _n_list(args, parser)
    top = max(ns) + (1 if any(n % 2 for n in ns) else 0)
    tab = cached_table(args.f, top, Path(cfg.cache_dir), use_disk=cfg.use_cache)
    return _estimate_rows(compare_exact(args.f, ns, tab))


def cmd_saddle(args, cfg, parser):
    from .saddle import solve_saddle

    signs = {"+": (1,), "-": (-1,), "both": (1, -1)}[args.sign]
    rows = []
    for x in args.x:
        for s in signs:
            sol = solve_saddle(args.f, x, s)
            rows.append((x, "+" if s > 0 else "-", sol.rho, sol.X, *sol.psi, sol.residual))
    return ("x", "sign", "rho", "X", "psi0", "psi1", "psi2", "psi3", "residual"), rows


def cmd_relations(args, cfg, parser):
    from .asymptotics import RELATIONS_HEADER, relations_report

    rows = relations_report(args.f, args.x)
    return RELATIONS_HEADER, [tuple(r[k] for k in RELATIONS_HEADER) for r in rows]


def cmd_growth(args, cfg, parser):
    from .asymptotics import hardy_ramanujan_check
    from .exactpartitions import cached_table

    tab = cached_table(args.f, 2 * max(args.k), Path(cfg.cache_dir), use_disk=cfg.use_cache)
    rows = hardy_ramanujan_check(args.f, args.k, tab)
    return ("n", "f", "positive", "ratio"), [(r["n"], r["f"], r["positive"], r["ratio"]) for r in rows]


def cmd_constants(args, cfg, parser):
    from . import arcconstants as ac

    if (args.q is None) == (args.q_max is None):
        parser.error("give exactly one of --q and --q-max")
    qs = args.q if args.q is not None else list(range(1, args.q_max + 1))
    if any(q < 1 for q in qs):
        parser.error("q must be positive")
    fn = {"V": ac.v_constant, "W": ac.w_constant, "G": ac.big_g, "crude": ac.crude_v_bound}[args.which]
    rows = []
    for q in qs:
        v = fn(q)
        rows.append((q, v, float(v)))
    return ("q", "exact", "numeric"), rows


def cmd_gqr(args, cfg, parser):
    from . import arcconstants as ac

    if args.q < 1:
        parser.error("--q must be positive")
    exact = ac.g_times_zeta2(args.q, args.r % args.q)
    trunc = ac.g_numeric_truncated(args.q, args.r % args.q, args.terms) * ac.ZETA2
    return ("q", "r", "zeta2_g_exact", "zeta2_g_numeric", "truncated_series", "terms"), [
        (args.q, args.r, exact, float(exact), trunc, args.terms)
    ]


def cmd_arcs(args, cfg, parser):
    from . import arcs

    params = arcs.arc_params(args.f, args.X)
    header = arcs.ScanRow.HEADER
    if args.scan == "classify":
        if not args.alpha:
            parser.error("--scan classify needs --alpha")
        rows = []
        for al in args.alpha:
            lab = arcs.classify(al, params)
            rows.append((al, lab.kind, lab.q, lab.a, lab.beta))
        return ("alpha", "arc_kind", "q", "a", "beta"), rows
    if args.scan == "major":
        if args.q is None or args.a is None:
            parser.error("--scan major needs --q and --a")
        w = params.Q / (args.q * params.X)
        rep = arcs.major_arc_residual(params, args.q, args.a, np.linspace(-w, w, args.grid))
        return header, [r.as_tuple() for r in rep.rows]
    if args.scan == "minor":
        rep = arcs.minor_arc_scan(params, args.samples)
        return header, [r.as_tuple() for r in rep.rows]
    if args.scan == "nonprincipal":
        rep = arcs.nonprincipal_inequality_check(params, args.samples)
        return ("alpha", "family", "re_psi", "bound", "ok"), [
            (s.alpha, s.family, s.re_psi, s.bound, s.ok) for s in rep.samples
        ]
    betas = np.linspace(-params.eta, params.eta, args.grid)
    if args.scan == "taylor":
        rep = arcs.principal_taylor_check(params, betas)
        return ("beta", "re_w", "im_w", "abs_w"), [
            (b, None if w is None else w.real, None if w is None else w.imag, None if w is None else abs(w))
            for b, w in zip(rep.betas, rep.w)
        ]
    rows = []
    for s in (1, -1):
        rep = arcs.principal_formula_check(params, args.j, betas, s)
        rows += [(b, "+" if s > 0 else "-", r.real, r.imag, abs(r - 1)) for b, r in zip(betas, rep.ratios)]
    return ("beta", "sign", "re_ratio", "im_ratio", "deviation"), rows


def cmd_contour(args, cfg, parser):
    from .arcs import contour_report

    r = contour_report(args.f, args.n)
    return ("n", "p"), [(r.n, r.value)]


def cmd_diagnostics(args, cfg, parser):
    from . import arcs

    rows = []
    for name, fn in (("davenport_mu", arcs.davenport_ratio), ("bateman_chowla_lambda", arcs.bateman_chowla_ratio)):
        for r in fn(args.t, A=args.A):
            rows.append((name, r["t"], r["theta"], r["ratio"]))
    b = arcs.brudern_minor_sup(args.X)
    rows.append(("brudern_mu2_minor", int(b["X"]), b["theta"], b["sup_ratio"]))
    rows.append(("mu2_at_zero", int(b["X"]), 0.0, b["ratio_at_zero"]))
    return ("diagnostic", "t", "theta", "ratio"), rows


COMMANDS = {
    "exact": cmd_exact,
    "estimate": cmd_estimate,
    "compare": cmd_compare,
    "saddle": cmd_saddle,
    "relations": cmd_relations,
    "growth": cmd_growth,
    "constants": cmd_constants,
    "gqr": cmd_gqr,
    "arcs": cmd_arcs,
    "contour": cmd_contour,
    "diagnostics": cmd_diagnostics,
}


def _resolve_config(args) -> RunConfig:
    import os

    cache = args.cache_dir or os.environ.get("SPN_CACHE", "./.spn-cache")
    skip = {"command", "format", "out", "cache_dir", "no_cache", "quiet"}
    opts = {k: (v.descriptor if hasattr(v, "descriptor") else v) for k, v in vars(args).items() if k not in skip}
    f = opts.pop("f", None)
    return RunConfig(args.command, f, cache, not args.no_cache, args.format, args.out, opts)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING if args.quiet else logging.INFO, format="spn: %(levelname)s: %(message)s", stream=sys.stderr
    )
    cfg = _resolve_config(args)
    log.info("config %s (backend=%s)", json.dumps(asdict(cfg), sort_keys=True, default=str), _kernels.BACKEND)
    try:
        header, rows = COMMANDS[args.command](args, cfg, parser)
        if args.out:
            with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
                write_rows(fh, header, rows, args.format)
        else:
            write_rows(sys.stdout, header, rows, args.format)
    except UserError as exc:
        print(f"spn: error: {exc}", file=sys.stderr)
        return 1
    except ConsistencyError as exc:
        print(f"spn: internal consistency failure: {exc}", file=sys.stderr)
        return 2
    except SPNError as exc:
        print(f"spn: failure: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"spn: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

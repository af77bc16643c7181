"""Command-line entry point for the reproduction drivers."""

from __future__ import annotations

import argparse
import logging
import sys
from itertools import combinations
from pathlib import Path

import numpy as np

from . import experiments as ex
from .bell import DEFAULT_RESTARTS, DEFAULT_TOL, get_inequality
from .criteria import correlation_matrix, ppt_min_eigenvalue
from .errors import ArgumentError, BellmonoError, ContractError
from .filters import FilterMode, LocalFilter, apply_filter, uniform_filters
from .library import SymmetricStateParams, ghz_state, reduced_w, symmetric_state, w_state
from .monogamy import MonogamyMode, OptimizerParams, chsh_monogamy, multipartite_monogamy, subsystem_states
from .output import ResultTable
from .states import density_from_vector, num_qubits, partial_trace

log = logging.getLogger("bellmono")

EXIT_OK, EXIT_USAGE, EXIT_CONTRACT = 0, 2, 3
INEQUALITY_NAMES = ("chsh", "mermin3", "svetlichny3", "dda3", "dda4", "facet3", "facet4", "facet5", "facet6")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# -- state specs --------------------------------------------------------------

def parse_state(spec: str) -> tuple[np.ndarray, dict]:
    """Parse ``w:<n>[:reduce=<qubits>]``, ``ghz:<n>``, ``sym:<a1>,<b1>``, ``noisyW:<n>:<m>``.

    Any spec also takes ``:h=<strength>`` and ``:filter=f1|f2`` to filter
    every qubit of the resulting state.  The returned metadata records the
    register size the state came from (used to replicate symmetric marginals).
    """
    kind, *fields = spec.split(":")
    positional = [f for f in fields if "=" not in f]
    options = dict(f.split("=", 1) for f in fields if "=" in f)
    try:
        if kind == "w" and len(positional) == 1:
            n = int(positional[0])
            rho = density_from_vector(w_state(n))
        elif kind == "ghz" and len(positional) == 1:
            n = int(positional[0])
            rho = density_from_vector(ghz_state(n))
        elif kind == "sym" and len(positional) == 1:
            a1, b1 = (float(v) for v in positional[0].split(","))
            n = 3
            rho = density_from_vector(symmetric_state(SymmetricStateParams(a1, b1)))
        elif kind == "noisyW" and len(positional) == 2:
            n, m = int(positional[0]), int(positional[1])
            rho = reduced_w(n, m)
        else:
            raise ArgumentError(f"unrecognized state spec {spec!r}")
        if "reduce" in options:
            keep = [int(c) for c in options.pop("reduce")]
            rho = partial_trace(rho, keep)
        mode = FilterMode(options.pop("filter", "f1"))
        if "h" in options:
            rho = apply_filter(rho, uniform_filters(num_qubits(rho), float(options.pop("h")), mode))
    except ValueError as exc:
        raise ArgumentError(f"bad state spec {spec!r}: {exc}") from exc
    if options:
        raise ArgumentError(f"unknown state options {sorted(options)} in {spec!r}")
    return rho, {"spec": spec, "n": n}


# -- subcommands --------------------------------------------------------------

def _config(args) -> ex.SweepConfig:
    return ex.SweepConfig(restarts=args.restarts, tol=args.tol, seed=args.seed, workers=args.workers, out_dir=args.out)


def cmd_table1(args):
    return ex.run_table1(_config(args)), {}


def cmd_table2(args):
    return ex.run_table2(args.h, _config(args)), {}


def cmd_threshold(args):
    config = _config(args)
    res = ex.scan_threshold(args.n, args.m, args.ineq, config)
    return ex.threshold_table(res, config), {}


def cmd_fig1(args):
    table = ex.run_fig1(range(args.n_min, args.n_max + 1), _config(args))
    return table, ex.fig1_svgs(table)


def cmd_appendix(args):
    fixed = {k: getattr(args, k) for k in ex.AXES if getattr(args, k) is not None}
    table = ex.run_appendix(FilterMode(args.filter), fixed, args.points, _config(args))
    return table, {f"appendix_{args.filter}": ex.appendix_svg(table)}


def cmd_monogamy(args):
    rho, meta = parse_state(args.state)
    params = OptimizerParams(args.restarts, tol=args.tol, seed=args.seed)
    filt = None if args.h is None else LocalFilter(args.h, FilterMode(args.filter))
    if args.relation == "chsh":
        report = chsh_monogamy(rho, MonogamyMode(args.mode), pair_filter=filt, params=params)
    else:
        ineq = get_inequality(args.relation)
        m, q = ineq.parties, num_qubits(rho)
        if q == m:
            # a symmetric marginal standing for all of its siblings
            n = args.n or meta["n"]
            if filt is not None:
                rho = apply_filter(rho, [filt] * m)
            report = multipartite_monogamy([(meta["spec"], rho)], ineq, n, params)
        elif q > m:
            report = multipartite_monogamy(subsystem_states(rho, m, filt), ineq, q, params)
        else:
            raise ArgumentError(f"{args.relation} needs at least {m} qubits, state has {q}")
    rows = [{"subsystem": t.label, "value": t.value, "squared": t.squared} for t in report.terms]
    derived = {
        "relation": report.relation_name,
        "mode": report.mode,
        "sum_of_squares": report.sum_of_squares,
        "bound": report.bound,
        "violated": report.violated,
    }
    params_out = {"state": args.state, "h": args.h, "filter": args.filter, "restarts": args.restarts, "tol": args.tol}
    return ResultTable("monogamy", ["subsystem", "value", "squared"], rows, params_out, args.seed, derived), {}


def cmd_analyze(args):
    rho, _ = parse_state(args.state)
    n = num_qubits(rho)
    if n < 2:
        raise ArgumentError("analyze needs at least two qubits")
    pairs = [(1, 2)] if n == 2 else list(combinations(range(1, n + 1), 2))
    rows = []
    for pair in pairs:
        reduced = rho if n == 2 else partial_trace(rho, pair)
        ca = correlation_matrix(reduced)
        rows.append({
            "pair": "".join(map(str, pair)),
            "ppt_min": ppt_min_eigenvalue(reduced),
            "m_value": ca.m_value,
            "max_chsh": ca.max_chsh,
            "violates_chsh": ca.violates_chsh,
            "u_eigenvalues": " ".join(repr(float(v)) for v in ca.u_eigenvalues),
        })
    derived = {"qubits": n}
    if n == 2:
        derived |= {k: rows[0][k] for k in ("ppt_min", "m_value", "max_chsh", "violates_chsh")}
    columns = ["pair", "ppt_min", "m_value", "max_chsh", "violates_chsh", "u_eigenvalues"]
    return ResultTable("analyze", columns, rows, {"state": args.state}, None, derived), {}


# -- parser -------------------------------------------------------------------

def _h_value(text: str) -> float:
    h = float(text)
    if not 0 < h <= 1:
        raise argparse.ArgumentTypeError(f"filter strength must be in (0, 1], got {text}")
    return h


def _h_list(text: str) -> list[float]:
    return [_h_value(t) for t in text.split(",") if t]


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--restarts", type=int, default=DEFAULT_RESTARTS)
    common.add_argument("--tol", type=float, default=DEFAULT_TOL)
    common.add_argument("--workers", type=int, default=1, help="threads sharing the optimizer restarts")
    common.add_argument("--out", type=Path, default=None, help="write results here instead of stdout")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="bellmono", description="Bell nonlocality of reduced and filtered multi-qubit states.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("table1", parents=[common], help="optimized Bell values of the 3-qubit marginal of W4")
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("table2", parents=[common], help="same, after local filtering")
    p.add_argument("--h", type=_h_list, default=list(ex.TABLE2_H), help="comma-separated filter strengths")
    p.set_defaults(func=cmd_table2)

    p = sub.add_parser("threshold", parents=[common], help="bisect the filter strength needed for a violation")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--ineq", choices=INEQUALITY_NAMES, required=True)
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("fig1", parents=[common], help="facet threshold against the register size")
    p.add_argument("--n-min", type=int, default=ex.FIG1_N_RANGE[0])
    p.add_argument("--n-max", type=int, default=ex.FIG1_N_RANGE[-1])
    p.set_defaults(func=cmd_fig1)

    p = sub.add_parser("appendix", parents=[common], help="Horodecki sum over the symmetric family")
    p.add_argument("--filter", choices=[m.value for m in FilterMode], required=True)
    fixed = p.add_mutually_exclusive_group(required=True)
    fixed.add_argument("--h", type=_h_value)
    fixed.add_argument("--a1", type=float)
    fixed.add_argument("--b1", type=float)
    p.add_argument("--points", type=int, default=101, help="grid points per axis")
    p.set_defaults(func=cmd_appendix)

    p = sub.add_parser("monogamy", parents=[common], help="sum of squared Bell values over subsystems")
    p.add_argument("--state", required=True)
    p.add_argument("--relation", choices=INEQUALITY_NAMES, required=True)
    p.add_argument("--h", type=_h_value, default=None, help="filter every subsystem qubit")
    p.add_argument("--filter", choices=[m.value for m in FilterMode], default="f1")
    p.add_argument("--mode", choices=[m.value for m in MonogamyMode], default="pairwise")
    p.add_argument("--n", type=int, default=None, help="register size a replicated marginal stands for")
    p.set_defaults(func=cmd_monogamy)

    p = sub.add_parser("analyze", parents=[common], help="PPT and Horodecki report")
    p.add_argument("--state", required=True)
    p.set_defaults(func=cmd_analyze)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        table, figures = args.func(args)
    except ContractError as exc:
        print(f"bellmono: numerical contract failed: {exc}", file=sys.stderr)
        return EXIT_CONTRACT
    except (BellmonoError, ValueError) as exc:
        print(f"bellmono: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.out is None:
        sys.stdout.write(table.render(args.format))
    else:
        path = table.write(args.out, args.format)
        print(path)
        for stem, text in figures.items():
            fig = args.out / f"{stem}.svg"
            fig.write_text(text)
            print(fig)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

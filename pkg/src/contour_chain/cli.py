"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 invalid parameters or infeasible /
inadmissible input, 3 a verified claim was violated.
"""

from __future__ import annotations

import argparse
import io
import json
import sys
from fractions import Fraction

from .chain import ChainParams, DelayType, InadmissibleStateError, check_state, require_admissible
from .harness import GridSpec, GridSyntaxError, run_points, suite_document
from .orbit import BudgetExceededError, find_cycle, trace, velocities, write_trace
from .spectrum import (
    DEFAULT_BUDGET,
    SCHEMA_VERSION,
    ConstructionError,
    DelayDecomposition,
    InfeasibleDecompositionError,
    candidate_velocities,
    construct_cycle_state,
    empirical_spectrum,
    fraction_str,
)

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_VIOLATION = 0, 1, 2, 3
DEFAULT_GRID = "N=2..5,m=1..4,l=1..2m-1"


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int_list(text):
    try:
        return [int(t) for t in text.replace(" ", "").split(",") if t != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _positive(text):
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="contour-chain", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, params=True):
        if params:
            p.add_argument("-N", type=int, required=True, dest="N", help="number of contours")
            p.add_argument("-m", type=int, required=True, help="half the cells per contour")
            p.add_argument("-l", type=int, required=True, help="particles per cluster")
        p.add_argument("--format", choices=("json", "csv", "text"), default="json")
        p.add_argument("--out", metavar="PATH", help="write here instead of stdout")

    p = sub.add_parser("simulate", help="follow a state to its limit cycle")
    common(p)
    p.add_argument("--state", type=_int_list, required=True, help="e.g. 1,5,8")
    p.add_argument("--steps", type=int, default=20, help="trace length (with --trace)")
    p.add_argument("--trace", action="store_true", help="emit a step-by-step trace")
    p.add_argument("--mode", choices=("visited", "brent"), default="visited")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("spectrum", help="velocity spectrum over initial states")
    common(p)
    p.add_argument("--budget", type=_positive, default=DEFAULT_BUDGET)
    p.add_argument("--sample", type=int, help="sample this many admissible states")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("verify", help="check the structural claims over a grid")
    common(p, params=False)
    p.add_argument("--grid", default=DEFAULT_GRID)
    p.add_argument("--budget", type=_positive, default=DEFAULT_BUDGET)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("construct", help="build a cycle from a delay decomposition")
    common(p)
    p.add_argument("--delays", type=_int_list, required=True, help="k1,k2,...")
    p.add_argument("--type", choices=("first", "second"), default="first")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("candidates", help="velocities allowed by the delay balance")
    common(p)
    p.set_defaults(func=cmd_candidates)
    return parser


def _config(args) -> dict:
    return {k: v for k, v in vars(args).items() if k not in ("func", "out")}


def _params(args) -> ChainParams:
    try:
        return ChainParams(args.N, args.m, args.l)
    except ValueError as exc:
        raise InputError(str(exc))


def _params_doc(params):
    n, m, l = params.as_tuple()
    return {"contours": n, "half_cells": m, "cluster_len": l}


def _dump(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _text(config, lines) -> str:
    return "".join(f"{line}\n" for line in [f"# config: {json.dumps(config)}", *lines])


def _csv(config, body: str) -> str:
    """Tabular output preceded by a single ``# config:`` comment line."""
    return f"# config: {json.dumps(config)}\n{body}"


def _analysis_doc(analysis, params):
    v = velocities(analysis)
    return {
        "transient": analysis.transient_len,
        "period": analysis.period,
        "moves_per_cluster": list(analysis.moves_per_cluster),
        "velocity": fraction_str(analysis.velocity),
        "velocities": [fraction_str(x) for x in v.values],
        "uniform": v.uniform,
        "regime": analysis.regime.value,
        "delay_type": analysis.delay_type_purity.value,
        "entry_state": list(analysis.entry_state),
        "canonical_state": list(analysis.canonical_state(params)),
        "delay_log": [[r.time, r.cluster, r.type.value, r.node] for r in analysis.delay_log],
    }


def cmd_simulate(args) -> tuple[str, int]:
    params = _params(args)
    config = _config(args)
    try:
        state = require_admissible(check_state(args.state, params), params)
    except InadmissibleStateError as exc:
        raise InputError(str(exc))
    except ValueError as exc:
        raise InputError(f"bad state: {exc}")

    if args.trace:
        if args.steps < 0:
            raise UsageError("--steps must be non-negative")
        if args.format == "csv":
            buf = io.StringIO()
            write_trace(state, params, args.steps, buf)
            return _csv(config, buf.getvalue()), EXIT_OK
        rows = list(trace(state, params, args.steps))
        if args.format == "text":
            lines = [
                f"t={t} state={','.join(map(str, s))} moved={''.join('1' if k else '0' for k in mv)}"
                + (" delays=" + ";".join(f"{d.cluster}:{d.type.value}" for d in dl) if dl else "")
                for t, s, mv, dl in rows
            ]
            return _text(config, lines), EXIT_OK
        doc = {
            "schema_version": SCHEMA_VERSION,
            "config": config,
            "params": _params_doc(params),
            "trace": [
                {
                    "t": t,
                    "positions": list(s),
                    "moved": list(mv),
                    "delays": [[d.cluster, d.type.value, d.node] for d in dl],
                }
                for t, s, mv, dl in rows
            ],
        }
        return _dump(doc), EXIT_OK

    analysis = find_cycle(state, params, mode=args.mode)
    summary = _analysis_doc(analysis, params)
    if args.format == "json":
        doc = {
            "schema_version": SCHEMA_VERSION,
            "config": config,
            "params": _params_doc(params),
            "initial": list(state),
            **summary,
        }
        return _dump(doc), EXIT_OK
    keys = ("transient", "period", "velocity", "uniform", "regime", "delay_type")
    if args.format == "csv":
        buf = io.StringIO()
        buf.write("N,m,l,state," + ",".join(keys) + "\n")
        values = [summary[k] for k in keys]
        buf.write(
            f"{args.N},{args.m},{args.l},{';'.join(map(str, state))},"
            + ",".join(str(v).lower() if isinstance(v, bool) else str(v) for v in values)
            + "\n"
        )
        return _csv(config, buf.getvalue()), EXIT_OK
    return _text(config, [f"{k}: {summary[k]}" for k in keys]), EXIT_OK


def cmd_spectrum(args) -> tuple[str, int]:
    params = _params(args)
    config = _config(args)
    if args.sample is not None and args.sample <= 0:
        raise UsageError("--sample must be positive")
    try:
        report = empirical_spectrum(params, budget=args.budget, sample=args.sample, seed=args.seed)
    except BudgetExceededError as exc:
        raise InputError(f"{exc} (pass --sample COUNT)")
    if args.format == "json":
        return report.to_json({"config": config}), EXIT_OK
    if args.format == "csv":
        return _csv(config, report.to_csv()), EXIT_OK
    lines = [
        f"velocity {fraction_str(e.velocity)}: basin {e.basin_count}, period {e.period}, "
        f"{e.regime.value}, {e.delay_type_purity.value}, representative "
        + ",".join(map(str, e.representative))
        for e in report.entries
    ]
    lines.append("candidates: " + " ".join(fraction_str(v) for v in report.candidates))
    return _text(config, lines), EXIT_OK


def cmd_verify(args) -> tuple[str, int]:
    config = _config(args)
    try:
        grid = GridSpec.parse(args.grid, budget=args.budget)
    except GridSyntaxError as exc:
        raise UsageError(str(exc))
    try:
        grid.params()
    except ValueError as exc:
        raise InputError(f"invalid grid point: {exc}")
    points = run_points(grid)
    code = EXIT_VIOLATION if any(p.violated for p in points) else EXIT_OK
    if args.format == "json":
        return _dump(suite_document(points, grid, config)), code
    if args.format == "csv":
        buf = io.StringIO()
        buf.write("N,m,l,claim,verdict,witness\n")
        for p in points:
            n, m, l = p.params.as_tuple()
            for claim, v in p.verdicts.items():
                w = ";".join(map(str, v.witness)) if v.witness else ""
                buf.write(f"{n},{m},{l},{claim},{v.status},{w}\n")
        return _csv(config, buf.getvalue()), code
    lines = []
    for p in points:
        bad = p.violated
        lines.append(f"{p.params}: " + ("VIOLATED " + ", ".join(bad) if bad else "ok"))
    doc = suite_document(points, grid)
    lines.append("summary: " + json.dumps(doc["summary"]))
    return _text(config, lines), code


def cmd_construct(args) -> tuple[str, int]:
    params = _params(args)
    config = _config(args)
    kind = DelayType(args.type)
    dec = DelayDecomposition(tuple(args.delays), kind)
    try:
        state = construct_cycle_state(params, dec)
    except InfeasibleDecompositionError as exc:
        raise InputError(f"infeasible decomposition: {exc}")
    analysis = find_cycle(state, params)
    summary = _analysis_doc(analysis, params)
    total = params.accounting_period
    doc = {
        "schema_version": SCHEMA_VERSION,
        "config": config,
        "params": _params_doc(params),
        "decomposition": {"r": dec.r, "k": list(dec.k), "type": kind.value},
        "state": list(state),
        "expected_velocity": fraction_str(1 - Fraction(dec.total_delay, total)),
        **summary,
    }
    if args.format == "json":
        return _dump(doc), EXIT_OK
    if args.format == "csv":
        return _csv(
            config,
            "N,m,l,state,velocity,period,delay_type\n"
            f"{args.N},{args.m},{args.l},{';'.join(map(str, state))},"
            f"{summary['velocity']},{summary['period']},{summary['delay_type']}\n",
        ), EXIT_OK
    lines = [
        "state: " + ",".join(map(str, state)),
        f"velocity: {summary['velocity']}",
        f"period: {summary['period']}",
        f"delay_type: {summary['delay_type']}",
    ]
    return _text(config, lines), EXIT_OK


def cmd_candidates(args) -> tuple[str, int]:
    params = _params(args)
    config = _config(args)
    values = [fraction_str(v) for v in candidate_velocities(params)]
    if args.format == "json":
        doc = {
            "schema_version": SCHEMA_VERSION,
            "config": config,
            "params": _params_doc(params),
            "candidates": values,
        }
        return _dump(doc), EXIT_OK
    if args.format == "csv":
        return _csv(
            config, "N,m,l,velocity\n" + "".join(f"{args.N},{args.m},{args.l},{v}\n" for v in values)
        ), EXIT_OK
    return _text(config, values), EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # --help or a usage error
        return exc.code
    try:
        text, code = args.func(args)
    except UsageError as exc:
        print(f"contour-chain: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InputError as exc:
        print(f"contour-chain: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ConstructionError as exc:
        print(f"contour-chain: construction failed verification: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fp:
            fp.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())

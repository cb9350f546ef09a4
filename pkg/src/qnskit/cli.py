"""Command-line front end.

Exit codes: 0 success / check passed, 1 check failed, 2 malformed input or
IO error.  Reports are JSON objects (the default) or an equivalent plain
text rendering; produced payloads go to --out when given, otherwise to
stdout with the report on stderr so that commands compose through pipes.
"""

from __future__ import annotations

import argparse
import sys

from . import io
from .algebra import AlgStochasticMatrix
from .correlations import (CorrelationDims, CqnsCorrelation, NsCorrelation,
                           QnsCorrelation, build_commuting, build_local,
                           build_quantum, build_tracial, compose_correlations,
                           compose_tables, cqns_report, lift_cqns, ns_report,
                           qns_report, reduce_cqns, reduce_ns)
from .games import ConstraintGame, compose_games, perfect_strategy_check
from .graphs import (Graph, kd2_colouring, orth_rep_to_colouring,
                     proper_residuals, xi_qc_lower_bound)
from .stochastic import StochasticOperatorMatrix, verify as verify_stochastic
from .symmetry import build_tracial_cqns, build_tracial_ns, fair_residual
from .theta import solve_theta


class CliError(Exception):
    """Input or usage problem; maps to exit code 2."""


def _render_text(obj, prefix="") -> list[str]:
    lines = []
    if isinstance(obj, dict):
        for key in sorted(obj):
            value = obj[key]
            if isinstance(value, (dict, list)):
                lines.extend(_render_text(value, f"{prefix}{key}."))
            else:
                lines.append(f"{prefix}{key}: {value!r}")
    elif isinstance(obj, list):
        for i, value in enumerate(obj):
            if isinstance(value, (dict, list)):
                lines.extend(_render_text(value, f"{prefix}{i}."))
            else:
                lines.append(f"{prefix}{i}: {value!r}")
    else:
        lines.append(f"{prefix.rstrip('.')}: {obj!r}")
    return lines


def _jsonable(obj):
    """Replace non-finite floats so reports stay strict JSON."""
    import math
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    return obj


def _emit_report(report: dict, fmt: str, stream) -> None:
    report = _jsonable(report)
    if fmt == "json":
        print(io.dump_json(report), file=stream)
    else:
        print("\n".join(_render_text(report)), file=stream)


def _emit_payload(payload: dict, out_path: str | None) -> bool:
    """Write payload; returns True when the report should go to stderr."""
    text = io.dump_json(payload)
    if out_path and out_path != "-":
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        return False
    print(text)
    return True


def _load_payload(path: str):
    try:
        return io.detect_payload(io.load(path))
    except (OSError, ValueError) as exc:
        raise CliError(f"cannot read {path}: {exc}") from exc


def _correlation_report(corr, tol: float | None) -> dict:
    if isinstance(corr, QnsCorrelation):
        report = qns_report(corr, tol=tol or 1e-9).as_dict()
        report["kind"] = "qns"
    elif isinstance(corr, CqnsCorrelation):
        report = cqns_report(corr, tol or 1e-9).as_dict()
        report["kind"] = "cqns"
        if corr.witness is not None:
            from .correlations import witness_residual_or_inf
            report["witness_residual"] = witness_residual_or_inf(corr)
            report["pass"] = bool(report["pass"] and
                                  report["witness_residual"] <= (tol or 1e-9))
    elif isinstance(corr, NsCorrelation):
        report = ns_report(corr, tol or 1e-9).as_dict()
        report["kind"] = "ns"
        if corr.witness is not None:
            from .correlations import witness_residual_or_inf
            report["witness_residual"] = witness_residual_or_inf(corr)
            report["pass"] = bool(report["pass"] and
                                  report["witness_residual"] <= (tol or 1e-9))
    else:
        raise CliError("file does not contain a correlation")
    return report


def _cmd_verify(args) -> int:
    payload = _load_payload(args.file)
    if isinstance(payload, (QnsCorrelation, CqnsCorrelation, NsCorrelation)):
        report = _correlation_report(payload, args.tol)
    elif isinstance(payload, StochasticOperatorMatrix):
        report = verify_stochastic(payload, args.tol or 1e-9).as_dict()
        report["kind"] = "stochastic"
    elif isinstance(payload, AlgStochasticMatrix):
        defect = payload.verification_defect(args.tol or 1e-9)
        report = {"kind": "alg-stochastic", "defect": defect,
                  "pass": defect <= (args.tol or 1e-9)}
    else:
        raise CliError("verify expects a correlation or stochastic matrix file")
    _emit_report(report, args.format, sys.stdout)
    return 0 if report["pass"] else 1


_BUILDERS = ("local", "quantum", "qc", "tracial", "cqns-tracial", "ns-tracial")


def _cmd_build(args) -> int:
    obj = io.load(args.witness)
    kind = args.kind
    try:
        if kind == "local":
            dims = CorrelationDims(int(obj["dims"]["X"]), int(obj["dims"]["Y"]),
                                   int(obj["dims"]["A"]), int(obj["dims"]["B"]))
            corr = build_local([float(w) for w in obj["weights"]],
                               [io.matrix_from_json(m) for m in obj["alice"]],
                               [io.matrix_from_json(m) for m in obj["bob"]], dims)
        elif kind in ("quantum", "qc"):
            e = io.stochastic_from_json(obj["E"])
            f = io.stochastic_from_json(obj["F"])
            sigma = io.matrix_from_json(obj["sigma"])
            corr = build_quantum(e, f, sigma) if kind == "quantum" \
                else build_commuting(e, f, sigma)
        else:
            matrix = io.alg_stochastic_from_json(obj)
            if kind == "tracial":
                corr = build_tracial(matrix)
            elif kind == "cqns-tracial":
                corr = build_tracial_cqns(matrix)
            else:
                corr = build_tracial_ns(matrix)
    except (KeyError, TypeError) as exc:
        raise CliError(f"malformed witness file: {exc}") from exc
    report = _correlation_report(corr, args.tol)
    to_stderr = _emit_payload(io.correlation_to_json(corr), args.out)
    _emit_report(report, args.format, sys.stderr if to_stderr else sys.stdout)
    return 0 if report["pass"] else 1


def _cmd_reduce(args) -> int:
    corr = _load_payload(args.file)
    if args.map == "E":
        if not isinstance(corr, QnsCorrelation):
            raise CliError("reduce E expects a qns correlation")
        out = reduce_cqns(corr)
    else:
        if not isinstance(corr, (QnsCorrelation, CqnsCorrelation)):
            raise CliError("reduce N expects a qns or cqns correlation")
        out = reduce_ns(corr)
    report = _correlation_report(out, args.tol)
    to_stderr = _emit_payload(io.correlation_to_json(out), args.out)
    _emit_report(report, args.format, sys.stderr if to_stderr else sys.stdout)
    return 0 if report["pass"] else 1


def _cmd_lift(args) -> int:
    corr = _load_payload(args.file)
    if not isinstance(corr, CqnsCorrelation):
        raise CliError("lift expects a cqns correlation")
    out = lift_cqns(corr)
    report = _correlation_report(out, args.tol)
    to_stderr = _emit_payload(io.correlation_to_json(out), args.out)
    _emit_report(report, args.format, sys.stderr if to_stderr else sys.stdout)
    return 0 if report["pass"] else 1


def _cmd_compose(args) -> int:
    second = _load_payload(args.second)
    first = _load_payload(args.first)
    if isinstance(second, ConstraintGame) and isinstance(first, ConstraintGame):
        out = compose_games(second, first)
        payload = io.game_to_json(out)
        report = {"kind": "game", "n_constraints": out.n_constraints, "pass": True}
    elif isinstance(second, QnsCorrelation) and isinstance(first, QnsCorrelation):
        out = compose_correlations(second, first)
        payload = io.correlation_to_json(out)
        report = _correlation_report(out, args.tol)
    elif isinstance(second, NsCorrelation) and isinstance(first, NsCorrelation):
        out = compose_tables(second, first)
        payload = io.correlation_to_json(out)
        report = _correlation_report(out, args.tol)
    else:
        raise CliError("compose expects two games, two qns or two ns correlations")
    to_stderr = _emit_payload(payload, args.out)
    _emit_report(report, args.format, sys.stderr if to_stderr else sys.stdout)
    return 0 if report["pass"] else 1


def _cmd_check_game(args) -> int:
    game = _load_payload(args.game)
    if not isinstance(game, ConstraintGame):
        raise CliError("first argument must be a game file")
    strategy = _load_payload(args.strategy)
    if not isinstance(strategy, (QnsCorrelation, CqnsCorrelation, NsCorrelation)):
        raise CliError("second argument must be a correlation file")
    report = perfect_strategy_check(game, strategy, args.tol or 1e-9).as_dict()
    _emit_report(report, args.format, sys.stdout)
    return 0 if report["pass"] else 1


def _cmd_theta(args) -> int:
    graph = _load_payload(args.graph)
    if not isinstance(graph, Graph):
        raise CliError("theta expects a graph file")
    result = solve_theta(graph.n, sorted(graph.edges), tol=args.tol or 1e-7)
    report = {"theta": result.value, "iterations": result.iterations,
              "gap": result.gap, "certificate_norm": result.certificate_norm,
              "dual_bound": result.dual_bound,
              "xi_qc_lower_bound": xi_qc_lower_bound(graph, result.value),
              "pass": True}
    if args.format == "text":
        print(f"{result.value:.6f}")
        _emit_report(report, "text", sys.stderr)
    else:
        _emit_report(report, "json", sys.stdout)
    return 0


def _cmd_kd2(args) -> int:
    if args.d is None or args.d < 2:
        raise CliError("--d must be an integer >= 2")
    corr = kd2_colouring(args.d)
    graph = Graph.complete(args.d * args.d)
    residuals = proper_residuals(corr, graph)
    report = _correlation_report(corr, args.tol)
    report["properness_residual"] = max(residuals.values())
    report["pass"] = bool(report["pass"] and
                          report["properness_residual"] <= (args.tol or 1e-9))
    to_stderr = _emit_payload(io.correlation_to_json(corr), args.out)
    _emit_report(report, args.format, sys.stderr if to_stderr else sys.stdout)
    return 0 if report["pass"] else 1


def _cmd_orthrep(args) -> int:
    graph = _load_payload(args.graph)
    if not isinstance(graph, Graph):
        raise CliError("orthrep expects a graph file first")
    obj = io.load(args.vectors)
    try:
        vectors = [io.vector_from_json(v) for v in obj["vectors"]]
    except (KeyError, TypeError) as exc:
        raise CliError(f"malformed vectors file: {exc}") from exc
    corr = orth_rep_to_colouring(vectors, graph)
    residuals = proper_residuals(corr, graph)
    report = _correlation_report(corr, args.tol)
    report["properness_residual"] = max(residuals.values(), default=0.0)
    report["pass"] = bool(report["pass"] and
                          report["properness_residual"] <= (args.tol or 1e-9))
    to_stderr = _emit_payload(io.correlation_to_json(corr), args.out)
    _emit_report(report, args.format, sys.stderr if to_stderr else sys.stdout)
    return 0 if report["pass"] else 1


def _cmd_fair(args) -> int:
    corr = _load_payload(args.file)
    if not isinstance(corr, (QnsCorrelation, CqnsCorrelation, NsCorrelation)):
        raise CliError("fair expects a correlation file")
    residual = fair_residual(corr)
    tol = args.tol or 1e-9
    report = {"fair_residual": residual, "pass": residual <= tol, "tol": tol}
    _emit_report(report, args.format, sys.stdout)
    return 0 if report["pass"] else 1


def _positive_float(text: str) -> float:
    value = float(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("tolerance must be positive")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qnskit",
        description="Build, verify and compose no-signalling correlations and "
                    "quantum non-local games.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--tol", type=_positive_float, default=None,
                       help="override the check tolerance")
        p.add_argument("--out", default=None, help="write the produced payload here")
        p.add_argument("--format", choices=("json", "text"), default="json")

    p = sub.add_parser("verify", help="verify a correlation or stochastic matrix file")
    p.add_argument("file")
    common(p)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("build", help="build a correlation from a witness file")
    p.add_argument("kind", choices=_BUILDERS)
    p.add_argument("witness")
    common(p)
    p.set_defaults(func=_cmd_build)

    p = sub.add_parser("reduce", help="classical reduction of a correlation")
    p.add_argument("map", choices=("E", "N"))
    p.add_argument("file")
    common(p)
    p.set_defaults(func=_cmd_reduce)

    p = sub.add_parser("lift", help="lift a cqns correlation to a qns correlation")
    p.add_argument("file")
    common(p)
    p.set_defaults(func=_cmd_lift)

    p = sub.add_parser("compose", help="compose two correlations or two games")
    p.add_argument("second", help="outer correlation/game (applied last)")
    p.add_argument("first", help="inner correlation/game (applied first)")
    common(p)
    p.set_defaults(func=_cmd_compose)

    p = sub.add_parser("check-game", help="check a strategy against a game")
    p.add_argument("game")
    p.add_argument("strategy")
    common(p)
    p.set_defaults(func=_cmd_check_game)

    p = sub.add_parser("theta", help="Lovasz theta of a graph")
    p.add_argument("graph")
    common(p)
    p.set_defaults(func=_cmd_theta)

    p = sub.add_parser("kd2", help="explicit colouring of the complete graph on d^2 vertices")
    p.add_argument("--d", type=int, required=True)
    common(p)
    p.set_defaults(func=_cmd_kd2)

    p = sub.add_parser("orthrep", help="colouring from an orthogonal representation")
    p.add_argument("graph")
    p.add_argument("vectors")
    common(p)
    p.set_defaults(func=_cmd_orthrep)

    p = sub.add_parser("fair", help="fairness check of a correlation")
    p.add_argument("file")
    common(p)
    p.set_defaults(func=_cmd_fair)

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (io.FormatError, OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

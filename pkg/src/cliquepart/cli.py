"""Command-line front end.

Subcommands: pf, density, decide, extract, oracle, audit.  The data stream
(stdout) carries only the report, in JSON or flattened text; diagnostics go
to stderr.  Reports repeat every input parameter so a run can be reproduced
from its output alone, and exact quantities carry both a decimal float and
an exact rational string.

Exit codes: 0 success, 2 parse error, 3 parameter error, 4 enumeration cap
exceeded, 5 decision refused.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from fractions import Fraction

from .density import (
    MAX_DECIDE_CERTIFICATE,
    classify_density_estimate,
    density_functional_estimate,
    extract_dense_subset,
)
from .errors import (
    CapExceededError,
    CliquePartError,
    DecideRefusedError,
    ParameterError,
    ParseError,
)
from .graph_io import load_graph
from .model import (
    AlgorithmParams,
    Mode,
    Regime,
    as_fraction,
    binomial,
    weights_from_graph,
)
from .oracle import (
    DEFAULT_ORACLE_CAP,
    complex_partition_function,
    density_histogram,
    exact_g_of_t,
    exact_partition_function,
    exact_restricted_pf,
)
from .taylor import (
    TruncationPlan,
    f_from_g,
    g_derivatives,
    order_for_target,
    taylor_log_estimate,
)
from .zerofree import (
    ZeroFreeConstants,
    audit_min_modulus,
    line_matrix,
    sample_polydisc,
    standard_fixed_point_gap,
)

log = logging.getLogger("cliquepart")

_EXIT_OK = 0
_EXIT_PARSE = 2
_EXIT_PARAMS = 3
_EXIT_CAP = 4
_EXIT_REFUSED = 5


def _json_float(x):
    """Strict-JSON float: non-finite or unrepresentable values become null."""
    try:
        x = float(x)
    except OverflowError:
        return None
    return x if math.isfinite(x) else None


def _num(x):
    """Numeric report field: floats stay plain, exact values carry both forms."""
    if isinstance(x, Fraction):
        return {"float": _json_float(x), "rational": f"{x.numerator}/{x.denominator}"}
    if isinstance(x, int):
        return {"float": _json_float(x), "rational": str(x)}
    return _json_float(x)


def _approx_log_report(estimate) -> dict:
    return {
        "value": _json_float(estimate.value),
        "additive_bound": _json_float(estimate.additive_bound),
        "lower": _json_float(estimate.lower),
        "upper": _json_float(estimate.upper),
        "relative_error_certificate": _json_float(estimate.relative_error()),
    }


def _parse_anchor(text: str | None) -> tuple[int, ...]:
    if not text:
        return ()
    try:
        return tuple(int(tok) for tok in text.split(","))
    except ValueError:
        raise ParameterError(f"anchor must be comma-separated integers, got {text!r}") from None


def _gamma_type(text: str) -> Fraction:
    return as_fraction(text)


def _build_params(args) -> AlgorithmParams:
    return AlgorithmParams(m=args.m, gamma=args.gamma, regime=Regime(args.regime))


def _resolve_order(args, params: AlgorithmParams) -> tuple[int, float | None]:
    if getattr(args, "order", None) is not None:
        return args.order, None
    target = getattr(args, "target_eps", None)
    if target is None:
        # Only decide reaches this point; pick the weakest order the decision
        # rule can accept.
        target = MAX_DECIDE_CERTIFICATE
    l = order_for_target(params.m, params.beta, target)
    return l, float(target)


def _params_report(args, params: AlgorithmParams) -> dict:
    return {
        "m": params.m,
        "gamma": _num(params.gamma),
        "regime": params.regime.value,
        "omega": _num(params.omega),
        "beta": _num(params.beta),
        "delta": _num(params.delta),
    }


def _graph_report(graph, path) -> dict:
    return {
        "path": str(path),
        "n": graph.n,
        "edge_count": graph.edge_count,
        "edges": sorted(graph.edges),
    }


def _estimate_command(args, which: str) -> dict:
    graph = load_graph(args.input)
    params = _build_params(args)
    params.require_graph_size(graph.n)
    mode = Mode(args.mode)
    order, target = _resolve_order(args, params)
    report = {
        "command": which,
        "graph": _graph_report(graph, args.input),
        "params": _params_report(args, params),
        "order": order,
        "target_eps": target,
        "mode": mode.value,
        "workers": args.workers,
    }
    plan = TruncationPlan.for_order(params.m, params.beta, order)

    if which == "pf":
        anchor = _parse_anchor(args.anchor)
        derivs = f_from_g(
            g_derivatives(
                weights_from_graph(graph, params),
                params.m,
                order,
                anchor,
                mode=mode,
                workers=args.workers,
            )
        )
        estimate = taylor_log_estimate(derivs, plan)
        report["anchor"] = list(anchor)
        report["result"] = {
            "log_pf": _approx_log_report(estimate),
            "additive_bound": _num(plan.additive_bound),
            "g_derivs": [_num(x) for x in derivs.g_derivs],
            "f_derivs": [_num(x) for x in derivs.f_derivs],
        }
    elif which == "density":
        estimate = density_functional_estimate(
            graph, params, order, mode=mode, workers=args.workers
        )
        report["result"] = {
            "log_density": _approx_log_report(estimate),
            "additive_bound": _num(plan.additive_bound),
        }
    elif which == "decide":
        estimate = density_functional_estimate(
            graph, params, order, mode=mode, workers=args.workers
        )
        verdict = classify_density_estimate(
            estimate, graph.n, params, args.sigma, args.eps
        )
        report["sigma"] = verdict.sigma
        report["eps"] = verdict.eps
        report["result"] = {
            "verdict": verdict.verdict.value,
            "threshold_log": verdict.threshold_log,
            "decision_factor": verdict.decision_factor,
            "decision_margin": verdict.estimate.value
            - verdict.threshold_log
            - math.log(verdict.decision_factor),
            "log_density": _approx_log_report(verdict.estimate),
        }
    else:  # extract
        subset, certificate = extract_dense_subset(
            graph, params, order, mode=mode, workers=args.workers
        )
        report["result"] = {
            "subset": list(subset),
            "subset_density": _num(graph.density(subset)),
            "log_restricted_pf": _approx_log_report(certificate),
        }
    return report


def _oracle_command(args) -> dict:
    graph = load_graph(args.input)
    params = _build_params(args)
    params.require_graph_size(graph.n)
    anchor = _parse_anchor(args.anchor)
    w = weights_from_graph(graph, params)
    pf = exact_partition_function(w, params.m, cap=args.cap, workers=args.workers)
    histogram = density_histogram(graph, params.m, cap=args.cap)
    mass = histogram.tilted_mass(params.delta)
    result = {
        "pf": _num(pf),
        "log_pf": math.log(pf.numerator) - math.log(pf.denominator),
        "histogram": {str(e): c for e, c in sorted(histogram.counts.items())},
        "subset_count": histogram.total(),
        "max_density": _num(histogram.max_density()),
        "density_ratio": _num(mass),
        "log_density": histogram.log_density(params),
    }
    if anchor:
        restricted = exact_restricted_pf(w, params.m, anchor, cap=args.cap)
        result["restricted_pf"] = _num(restricted)
    if args.t is not None:
        t = as_fraction(args.t)
        result["g_of_t"] = {
            "t": _num(t),
            "value": _num(exact_g_of_t(w, params.m, t, anchor, cap=args.cap)),
        }
    return {
        "command": "oracle",
        "graph": _graph_report(graph, args.input),
        "params": _params_report(args, params),
        "anchor": list(anchor),
        "cap": args.cap,
        "workers": args.workers,
        "result": result,
    }


def _line_grid(beta: float) -> list[complex]:
    """Deterministic grid in the disc |z| <= beta: 4 radii times 12 angles, plus 0."""
    points = [0j]
    for q in range(1, 5):
        r = beta * q / 4
        for k in range(12):
            phi = 2 * math.pi * k / 12
            points.append(complex(r * math.cos(phi), r * math.sin(phi)))
    return points


def _audit_command(args) -> dict:
    graph = load_graph(args.input)
    params = _build_params(args)
    params.require_graph_size(graph.n)
    constants = ZeroFreeConstants.for_regime(params.regime)
    exploratory = args.radius is not None
    radius = float(args.radius) if exploratory else constants.radius(params.m)
    samples = sample_polydisc(
        graph.n, params.m, constants, args.count, args.seed, radius=radius
    )
    outcome = audit_min_modulus(samples, params.m, cap=args.cap)

    w = weights_from_graph(graph, params)
    beta = float(params.beta)
    line_min = None
    line_max_dev = 0.0
    for z in _line_grid(beta):
        matrix = line_matrix(w, z)
        line_max_dev = max(line_max_dev, matrix.max_deviation())
        modulus = abs(complex_partition_function(matrix.entries, params.m, cap=args.cap))
        if line_min is None or modulus < line_min:
            line_min = modulus

    result = {
        "radius": radius,
        "exploratory": exploratory,
        "count": outcome.count,
        "seed": args.seed,
        "min_modulus": outcome.min_modulus,
        "scale": float(binomial(graph.n, params.m)),
        "argmin_index": outcome.argmin_index,
        "argmin_in_polydisc": outcome.argmin.in_polydisc(radius),
        "argmin_entries": [
            [u, v, z.real, z.imag] for u, v, z in outcome.argmin.upper_triangle()
        ],
        "line_restriction": {
            "beta": beta,
            "points": 49,
            "max_entry_deviation": line_max_dev,
            "within_radius": line_max_dev <= constants.radius(params.m) * (1 + 1e-12),
            "min_modulus": line_min,
        },
        "constants": {
            "regime": constants.regime.value,
            "omega": constants.omega,
            "theta": constants.theta,
            "lambda": constants.lambda_,
            "tau": constants.tau,
            "fixed_point_gap": (
                standard_fixed_point_gap(constants)
                if constants.regime is Regime.STANDARD
                else None
            ),
        },
    }
    return {
        "command": "audit",
        "graph": _graph_report(graph, args.input),
        "params": _params_report(args, params),
        "cap": args.cap,
        "result": result,
    }


def _flatten(prefix: str, value, lines: list[str]) -> None:
    if isinstance(value, dict):
        for key, sub in value.items():
            _flatten(f"{prefix}.{key}" if prefix else str(key), sub, lines)
    elif isinstance(value, list):
        lines.append(f"{prefix} = {json.dumps(value)}")
    else:
        lines.append(f"{prefix} = {value}")


def _emit(report: dict, fmt: str) -> None:
    if fmt == "json":
        sys.stdout.write(json.dumps(report, indent=2) + "\n")
    else:
        lines: list[str] = []
        _flatten("", report, lines)
        sys.stdout.write("\n".join(lines) + "\n")


def _add_common(sub, *, order_group: str | None) -> None:
    sub.add_argument("input", help="graph file (edge-list or DIMACS-like)")
    sub.add_argument("--m", type=int, required=True, help="subset size")
    sub.add_argument(
        "--gamma",
        type=_gamma_type,
        default=None,
        help="weight-scale constant, rational or decimal (default: regime maximum)",
    )
    sub.add_argument(
        "--regime",
        choices=[r.value for r in Regime],
        default=Regime.STANDARD.value,
        help="constant pair to use",
    )
    sub.add_argument("--workers", type=int, default=1, help="worker count for partitioned sums")
    sub.add_argument("--format", choices=["json", "text"], default="json", help="report format")
    if order_group is not None:
        group = sub.add_mutually_exclusive_group(required=order_group == "required")
        group.add_argument("--order", type=int, help="truncation order of the series estimate")
        group.add_argument(
            "--target-eps",
            type=float,
            help="target additive error; picks the smallest adequate order",
        )
        sub.add_argument(
            "--mode",
            choices=[m.value for m in Mode],
            default=Mode.EXACT.value,
            help="arithmetic for derivative sums",
        )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cliquepart",
        description=(
            "Clique partition sums of weighted graphs: certified series "
            "estimates, density analysis, exact oracles, and a zero-freeness audit."
        ),
    )
    parser.add_argument("-v", "--verbose", action="count", default=0)
    commands = parser.add_subparsers(dest="command", required=True)

    pf = commands.add_parser("pf", help="certified estimate of ln of the partition sum")
    _add_common(pf, order_group="required")
    pf.add_argument("--anchor", default=None, help="comma-separated anchor vertices")

    density = commands.add_parser(
        "density", help="certified estimate of ln of the density functional"
    )
    _add_common(density, order_group="required")

    decide = commands.add_parser("decide", help="sound two-sided density decision")
    _add_common(decide, order_group="optional")
    decide.add_argument("--sigma", type=float, required=True, help="density threshold")
    decide.add_argument("--eps", type=float, required=True, help="density gap")

    extract = commands.add_parser("extract", help="greedy near-average-dense m-subset")
    _add_common(extract, order_group="required")

    oracle = commands.add_parser("oracle", help="exact brute-force values (cap-guarded)")
    _add_common(oracle, order_group=None)
    oracle.add_argument("--anchor", default=None, help="comma-separated anchor vertices")
    oracle.add_argument("--t", default=None, help="evaluate the interpolation polynomial at t")
    oracle.add_argument("--cap", type=int, default=DEFAULT_ORACLE_CAP, help="enumeration cap")

    audit = commands.add_parser("audit", help="numerical zero-freeness audit")
    _add_common(audit, order_group=None)
    audit.add_argument("--count", type=int, default=1000, help="number of sampled matrices")
    audit.add_argument("--seed", type=int, default=0, help="sampling seed")
    audit.add_argument(
        "--radius",
        type=float,
        default=None,
        help="exploratory polydisc radius (default: the audited omega/(m-1))",
    )
    audit.add_argument("--cap", type=int, default=DEFAULT_ORACLE_CAP, help="enumeration cap")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(stream=sys.stderr, level=level, format="%(levelname)s %(message)s")
    try:
        if args.command in ("pf", "density", "decide", "extract"):
            report = _estimate_command(args, args.command)
        elif args.command == "oracle":
            report = _oracle_command(args)
        else:
            report = _audit_command(args)
    except ParseError as exc:
        log.error("parse error: %s", exc)
        return _EXIT_PARSE
    except DecideRefusedError as exc:
        log.error("decision refused: %s", exc)
        return _EXIT_REFUSED
    except CapExceededError as exc:
        log.error("cap exceeded: %s", exc)
        return _EXIT_CAP
    except ParameterError as exc:
        log.error("parameter error: %s", exc)
        return _EXIT_PARAMS
    except CliquePartError as exc:  # pragma: no cover - defensive fallback
        log.error("error: %s", exc)
        return _EXIT_PARAMS
    _emit(report, args.format)
    return _EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

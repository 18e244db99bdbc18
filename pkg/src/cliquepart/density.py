"""Exponentially tilted density analysis of a graph.

The density functional is the sum over all m-subsets of a weight that grows
like exp(gamma * m * density); it equals the clique partition sum of the
graph-derived weight matrix times an exact closed-form prefactor, so the
interpolation engine estimates its log with a rigorous certificate.

On top of the estimate sit a sound two-sided decision rule (dense subsets
exist vs. not many near-dense subsets) and a greedy extraction loop that
grows an anchor one vertex at a time by maximizing the estimated restricted
partition sum, producing an m-subset almost as dense as the tilted average.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import DecideRefusedError, ParameterError
from .model import (
    AlgorithmParams,
    Graph,
    Mode,
    binomial,
    log_weight_curve,
    weights_from_graph,
)
from .taylor import (
    ApproxLog,
    TruncationPlan,
    f_from_g,
    g_derivatives,
    order_for_target,
    taylor_log_estimate,
)

__all__ = [
    "DECISION_FACTOR",
    "MAX_DECIDE_CERTIFICATE",
    "Verdict",
    "DensityVerdict",
    "density_functional_estimate",
    "classify_density_estimate",
    "decide_density",
    "extract_dense_subset",
]

# Any factor strictly between 1.1 and 1.8 separates the two promise bounds
# once the estimate carries a 10% relative-error certificate; 1.45 is the
# midpoint, giving a symmetric robustness margin.
DECISION_FACTOR = 1.45

# The decision rule needs a relative-error certificate of at most 10%.
MAX_DECIDE_CERTIFICATE = math.log(1.1)


class Verdict(Enum):
    EXISTS_DENSE = "EXISTS_DENSE"
    NOT_MANY_DENSE = "NOT_MANY_DENSE"


@dataclass(frozen=True)
class DensityVerdict:
    """Outcome of the sound two-sided density decision.

    threshold_log is ln of the no-side threshold C(n, m) * w(sigma), where w
    is the subset weight curve.  The verdict is EXISTS_DENSE exactly when the
    estimate exceeds threshold_log + ln(decision_factor).  Both verdicts are
    unconditionally sound: EXISTS_DENSE implies some m-subset has density at
    least sigma, and NOT_MANY_DENSE implies fewer than
    2 * exp(-gamma*eps*m) * C(n, m) subsets have density at least sigma + eps.
    """

    verdict: Verdict
    sigma: float
    eps: float
    threshold_log: float
    estimate: ApproxLog
    decision_factor: float


def density_functional_estimate(
    graph: Graph,
    params: AlgorithmParams,
    l: int,
    *,
    mode: Mode = Mode.EXACT,
    workers: int = 1,
) -> ApproxLog:
    """Certified estimate of ln of the density functional.

    The functional equals exp(gamma*m) * (1+delta)^(-C(m,2)) times the clique
    partition sum of the graph weights, so the value is that exact prefactor
    plus the interpolation estimate of ln of the partition sum; the additive
    bound is inherited unchanged.
    """
    w = weights_from_graph(graph, params)
    derivs = f_from_g(g_derivatives(w, params.m, l, mode=mode, workers=workers))
    plan = TruncationPlan.for_order(params.m, params.beta, l)
    estimate = taylor_log_estimate(derivs, plan)
    prefactor = float(params.gamma * params.m) - params.pair_count * math.log1p(
        float(params.delta)
    )
    return ApproxLog(prefactor + estimate.value, estimate.additive_bound)


def _check_thresholds(sigma: float, eps: float) -> None:
    sigma = float(sigma)
    eps = float(eps)
    if sigma < 0:
        raise ParameterError("sigma must be nonnegative")
    if eps <= 0:
        raise ParameterError("eps must be positive")
    if sigma + eps > 1:
        raise ParameterError(f"sigma + eps must not exceed 1, got {sigma + eps}")


def classify_density_estimate(
    estimate: ApproxLog,
    n: int,
    params: AlgorithmParams,
    sigma: float,
    eps: float,
    *,
    decision_factor: float = DECISION_FACTOR,
) -> DensityVerdict:
    """Apply the two-sided decision rule to a certified density estimate.

    Refuses (rather than guessing) when the certificate is weaker than the
    10% relative error the soundness argument consumes.
    """
    _check_thresholds(sigma, eps)
    if not 1.1 < decision_factor < 1.8:
        raise ParameterError("decision factor must lie strictly between 1.1 and 1.8")
    params.require_graph_size(n)
    # 1e-12 of slack absorbs the float rounding of an exactly-at-threshold bound.
    if estimate.additive_bound > MAX_DECIDE_CERTIFICATE + 1e-12:
        raise DecideRefusedError(
            f"certificate {estimate.additive_bound:.6g} exceeds ln(1.1); "
            "increase the truncation order"
        )
    threshold_log = math.log(binomial(n, params.m)) + log_weight_curve(sigma, params)
    exists = estimate.value > threshold_log + math.log(decision_factor)
    return DensityVerdict(
        verdict=Verdict.EXISTS_DENSE if exists else Verdict.NOT_MANY_DENSE,
        sigma=float(sigma),
        eps=float(eps),
        threshold_log=threshold_log,
        estimate=estimate,
        decision_factor=decision_factor,
    )


def decide_density(
    graph: Graph,
    params: AlgorithmParams,
    sigma: float,
    eps: float,
    l: int | None = None,
    *,
    mode: Mode = Mode.EXACT,
    workers: int = 1,
) -> DensityVerdict:
    """Sound two-sided density decision for the given thresholds.

    When l is omitted, the smallest order whose truncation bound meets the
    10% certificate requirement is chosen automatically; an explicit order
    with a weaker bound makes the operation refuse instead of answering.
    """
    _check_thresholds(sigma, eps)
    params.require_graph_size(graph.n)
    if l is None:
        l = order_for_target(params.m, params.beta, MAX_DECIDE_CERTIFICATE)
    estimate = density_functional_estimate(graph, params, l, mode=mode, workers=workers)
    return classify_density_estimate(estimate, graph.n, params, sigma, eps)


def extract_dense_subset(
    graph: Graph,
    params: AlgorithmParams,
    l: int,
    *,
    mode: Mode = Mode.EXACT,
    workers: int = 1,
) -> tuple[tuple[int, ...], ApproxLog]:
    """Greedy extraction of an m-subset almost as dense as the tilted average.

    Grows an anchor from empty to size m; each step estimates the restricted
    log partition sum for every candidate extension at the same truncation
    order and keeps the maximizer, breaking ties toward the smallest vertex
    index.  Returns the sorted subset and the certified estimate of its
    restricted log partition value (the log of the product of its pair
    weights).
    """
    params.require_graph_size(graph.n)
    w = weights_from_graph(graph, params)
    m = params.m
    plan = TruncationPlan.for_order(m, params.beta, l)

    def anchored_estimate(anchor: tuple[int, ...]) -> ApproxLog:
        derivs = f_from_g(g_derivatives(w, m, l, anchor, mode=mode, workers=workers))
        return taylor_log_estimate(derivs, plan)

    chosen: list[int] = []
    for _ in range(m):
        best_vertex = None
        best_value = None
        for candidate in range(1, graph.n + 1):
            if candidate in chosen:
                continue
            value = anchored_estimate(tuple(chosen) + (candidate,)).value
            if best_value is None or value > best_value:
                best_vertex = candidate
                best_value = value
        chosen.append(best_vertex)
    subset = tuple(sorted(chosen))
    return subset, anchored_estimate(subset)

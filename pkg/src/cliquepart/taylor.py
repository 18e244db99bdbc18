"""Derivative enumeration along the segment from the all-ones matrix.

For a weight matrix W and the restricted clique partition sum over m-subsets
containing an anchor set, let g(t) be the partition sum of J + t*(W - J),
where J is the all-ones matrix.  This module computes the derivatives of g at
t = 0 by direct enumeration, converts them to derivatives of f = ln g through
a triangular linear system, and sums the truncated series for f(1) together
with a rigorous additive error bound valid inside the root-free disc.

Derivative enumeration.  g(t) is a product of affine factors 1 + t*(w_uv - 1)
summed over subsets, so its k-th derivative at 0 is a sum over ordered
k-tuples of distinct vertex pairs; grouping tuples by their underlying
k-subset of pairs multiplies each subset term by the k! orderings.  A pair
subset covering rho distinct vertices (counting anchor vertices) contributes
C(n - rho, m - rho) * k! * prod(w_uv - 1); subsets covering more than m
vertices contribute nothing and are pruned as soon as the running vertex
union exceeds m, which caps the enumeration depth at C(m, 2).

Float mode uses compensated (error-free transformation) summation with a
deterministic enumeration order.  The term stream is partitioned by the
lowest pair index of each subset, and partial sums are reduced in partition
order, so results are bit-identical for every worker count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Collection

from ._parallel import map_chunks
from .errors import DegenerateSystemError, DomainError, ParameterError
from .model import Mode, WeightMatrix, as_fraction, binomial, float_log

__all__ = [
    "CompensatedSum",
    "DerivativeVector",
    "TruncationPlan",
    "ApproxLog",
    "g_derivatives",
    "f_from_g",
    "taylor_log_estimate",
    "truncation_error_bound",
    "order_for_target",
]

_FACTORIALS = [1, 1]


def _factorial(k: int) -> int:
    while len(_FACTORIALS) <= k:
        _FACTORIALS.append(_FACTORIALS[-1] * len(_FACTORIALS))
    return _FACTORIALS[k]


class CompensatedSum:
    """Neumaier running sum; deterministic and accurate for a fixed order."""

    __slots__ = ("total", "correction")

    def __init__(self, value: float = 0.0):
        self.total = float(value)
        self.correction = 0.0

    def add(self, x) -> None:
        x = float(x)
        t = self.total + x
        if abs(self.total) >= abs(x):
            self.correction += (self.total - t) + x
        else:
            self.correction += (x - t) + self.total
        self.total = t

    def value(self) -> float:
        return self.total + self.correction


@dataclass(frozen=True)
class ApproxLog:
    """A log-scale estimate with a rigorous additive half-width.

    The pair certifies value - additive_bound <= ln(true) <= value + additive_bound,
    which exponentiates to a relative-error certificate of exp(additive_bound) - 1.
    """

    value: float
    additive_bound: float

    def __post_init__(self):
        if self.additive_bound < 0:
            raise ParameterError("additive bound must be nonnegative")

    @property
    def lower(self) -> float:
        return self.value - self.additive_bound

    @property
    def upper(self) -> float:
        return self.value + self.additive_bound

    def relative_error(self) -> float:
        """Relative-error certificate after exponentiation; inf when the
        bound exceeds float range (an unboundedly weak certificate)."""
        try:
            return math.expm1(self.additive_bound)
        except OverflowError:
            return math.inf


@dataclass(frozen=True)
class DerivativeVector:
    """Derivatives at t = 0 of g and, once filled, of f = ln g.

    g_derivs[k] holds the k-th derivative of g for k = 0..order; g_derivs[0]
    is the binomial count C(n - |anchor|, m - |anchor|).  f_derivs[k] holds
    the k-th derivative of f for k = 1..order with f_derivs[0] pinned to zero
    (the constant term of the series is ln g_derivs[0], kept separately
    because it is not rational).

    In float mode f_taylor additionally holds the series coefficients
    f_derivs[k]/k!.  Raw f-derivatives grow factorially and overflow doubles
    near k = 170 even when the series converges, so float summation always
    goes through the coefficients.
    """

    n: int
    m: int
    anchor: tuple[int, ...]
    order: int
    g_derivs: tuple
    f_derivs: tuple | None
    mode: Mode
    f_taylor: tuple | None = None


@dataclass(frozen=True)
class TruncationPlan:
    """Truncation order, root-exclusion radius, and the resulting error bound.

    The bound m(m-1) / (2(l+1) beta^l (beta-1)) is a rigorous additive error
    for the order-l series estimate of ln of the partition sum whenever the
    interpolation polynomial has no complex root of modulus <= beta.  It is
    strictly decreasing in l for fixed beta > 1.
    """

    order: int
    beta: Fraction | float
    additive_bound: Fraction | float

    @classmethod
    def for_order(cls, m: int, beta, order: int) -> "TruncationPlan":
        return cls(order, beta, truncation_error_bound(m, beta, order))


def truncation_error_bound(m: int, beta, l: int):
    """Additive error bound m(m-1) / (2(l+1) beta^l (beta-1)), evaluated exactly.

    Returns a Fraction for rational beta and a float for float beta.
    """
    if not isinstance(m, int) or isinstance(m, bool) or m < 2:
        raise ParameterError("m must be an integer greater than 1")
    if not isinstance(l, int) or isinstance(l, bool) or l < 0:
        raise ParameterError("order must be a nonnegative integer")
    if isinstance(beta, int) and not isinstance(beta, bool):
        beta = Fraction(beta)
    if not beta > 1:
        raise DomainError(f"root-exclusion radius beta must exceed 1, got {beta}")
    return m * (m - 1) / (2 * (l + 1) * beta**l * (beta - 1))


def order_for_target(m: int, beta, eps_add) -> int:
    """Smallest order whose truncation bound is at most eps_add, by linear scan.

    eps_add is read as an exact rational (floats through their decimal repr),
    so boundary targets such as 0.0375 compare exactly.
    """
    eps = as_fraction(eps_add)
    if not eps > 0:
        raise ParameterError("target additive error must be positive")
    if not isinstance(m, int) or isinstance(m, bool) or m < 2:
        raise ParameterError("m must be an integer greater than 1")
    if isinstance(beta, int) and not isinstance(beta, bool):
        beta = Fraction(beta)
    if not beta > 1:
        raise DomainError(f"root-exclusion radius beta must exceed 1, got {beta}")
    numerator = m * (m - 1)
    power = Fraction(1) if isinstance(beta, Fraction) else 1.0
    l = 0
    while True:
        bound = numerator / (2 * (l + 1) * power * (beta - 1))
        if bound <= eps:
            return l
        l += 1
        power = power * beta


def _normalize_anchor(anchor: Collection[int], n: int, m: int) -> tuple[int, ...]:
    vertices = tuple(anchor)
    if any(not isinstance(v, int) or isinstance(v, bool) for v in vertices):
        raise ParameterError("anchor vertices must be integers")
    if len(set(vertices)) != len(vertices):
        raise ParameterError("anchor contains repeated vertices")
    if any(not (1 <= v <= n) for v in vertices):
        raise ParameterError(f"anchor leaves the vertex range 1..{n}")
    if len(vertices) > m:
        raise ParameterError(f"anchor of size {len(vertices)} exceeds subset size m={m}")
    return tuple(sorted(vertices))


def _g_chunk(state, c):
    """Sums over pair subsets whose lowest pair index is c, keyed by subset size."""
    masks, diffs, bins, fact, l, m, anchor_mask, is_float = state
    count = len(masks)
    if is_float:
        acc = [CompensatedSum() for _ in range(l + 1)]

        def emit(depth, mask, prod):
            acc[depth].add((fact[depth] * bins[mask.bit_count()]) * prod)

    else:
        acc = [0] * (l + 1)

        def emit(depth, mask, prod):
            acc[depth] += (fact[depth] * bins[mask.bit_count()]) * prod

    def walk(start, depth, mask, prod):
        emit(depth, mask, prod)
        if depth == l:
            return
        for q in range(start, count):
            merged = mask | masks[q]
            if merged.bit_count() <= m:
                walk(q + 1, depth + 1, merged, prod * diffs[q])

    base = anchor_mask | masks[c]
    if l >= 1 and base.bit_count() <= m:
        walk(c + 1, 1, base, diffs[c])
    if is_float:
        return [(a.total, a.correction) for a in acc[1:]]
    return acc[1:]


def g_derivatives(
    w: WeightMatrix,
    m: int,
    l: int,
    anchor: Collection[int] = (),
    *,
    mode: Mode = Mode.EXACT,
    workers: int = 1,
) -> DerivativeVector:
    """Derivatives of the restricted partition sum along the line from all-ones.

    Returns a DerivativeVector of size l + 1 whose k-th entry is the k-th
    derivative of g at t = 0.  Exact mode is bit-reproducible and independent
    of the work partitioning; float mode is reproducible for every worker
    count thanks to the fixed partition and reduction order.
    """
    n = w.n
    if not isinstance(m, int) or isinstance(m, bool) or not 1 < m <= n:
        raise ParameterError(f"subset size m must satisfy 1 < m <= n, got m={m}, n={n}")
    if not isinstance(l, int) or isinstance(l, bool) or l < 0:
        raise ParameterError("order must be a nonnegative integer")
    if not isinstance(workers, int) or workers < 1:
        raise ParameterError("workers must be a positive integer")
    if not isinstance(mode, Mode):
        raise ParameterError("mode must be a Mode value")
    anchor_t = _normalize_anchor(anchor, n, m)
    anchor_mask = 0
    for v in anchor_t:
        anchor_mask |= 1 << (v - 1)

    is_float = mode is Mode.FLOAT
    masks: list[int] = []
    diffs: list = []
    entries = w.entries
    for u in range(n - 1):
        row = entries[u]
        for v in range(u + 1, n):
            diff = Fraction(row[v]) - 1
            if diff == 0:
                continue
            masks.append((1 << u) | (1 << v))
            diffs.append(float(diff) if is_float else diff)

    # g is a polynomial of degree at most C(m, 2): a pair subset larger than
    # that cannot fit inside m vertices.  Enumerate only up to that depth and
    # pad the higher derivatives with exact zeros.
    l_eff = min(l, m * (m - 1) // 2)
    bins = tuple(binomial(n - r, m - r) for r in range(m + 1))
    fact = tuple(_factorial(k) for k in range(l_eff + 1))
    state = (
        tuple(masks),
        tuple(diffs),
        bins,
        fact,
        l_eff,
        m,
        anchor_mask,
        is_float,
    )
    parts = map_chunks(_g_chunk, state, len(masks), workers)

    g0 = bins[len(anchor_t)]
    zero = 0.0 if is_float else Fraction(0)
    if is_float:
        out = [float(g0)]
        for k in range(1, l_eff + 1):
            acc = CompensatedSum()
            for part in parts:
                total, correction = part[k - 1]
                acc.add(total)
                acc.add(correction)
            out.append(acc.value())
    else:
        out = [g0]
        for k in range(1, l_eff + 1):
            out.append(sum(part[k - 1] for part in parts))
    out.extend([zero] * (l - l_eff))
    return DerivativeVector(
        n=n,
        m=m,
        anchor=anchor_t,
        order=l,
        g_derivs=tuple(out),
        f_derivs=None,
        mode=mode,
    )


def f_from_g(d: DerivativeVector) -> DerivativeVector:
    """Solve the triangular system relating g- and f-derivatives forward.

    Uses g[k] = sum_{j=0}^{k-1} C(k-1, j) * g[j] * f[k-j], solved for f[k].
    Zero g-derivatives are skipped, so the solve costs O(order * nnz(g)).

    Exact mode solves in derivative space.  Float mode solves the equivalent
    recurrence in series-coefficient space, k*b[k] = sum (k-j)*b[j]*c[k-j]
    with b[k] = g[k]/k! and c[k] = f[k]/k!, which stays within double range
    at every order; the raw derivatives c[k]*k! are reported as well and
    saturate to +-inf once k! leaves double range.
    """
    g = d.g_derivs
    if g[0] == 0:
        raise DegenerateSystemError("g(0) vanishes, the triangular system is singular")
    if d.mode is Mode.EXACT:
        g0 = Fraction(g[0])
        nonzero = [j for j in range(1, d.order + 1) if g[j] != 0]
        f = [Fraction(0)]
        comb = math.comb
        for k in range(1, d.order + 1):
            s = g[k]
            for j in nonzero:
                if j > k - 1:
                    break
                s = s - comb(k - 1, j) * g[j] * f[k - j]
            f.append(s / g0)
        return replace(d, f_derivs=tuple(f), f_taylor=None)

    b0 = float(g[0])
    # exact rational division then one rounding, so huge factorials are safe
    b = {
        j: float(Fraction(g[j]) / _factorial(j))
        for j in range(1, d.order + 1)
        if g[j] != 0
    }
    nonzero = sorted(b)
    coeffs = [0.0]
    for k in range(1, d.order + 1):
        s = 0.0
        for j in nonzero:
            if j > k - 1:
                break
            s += (k - j) * b[j] * coeffs[k - j]
        coeffs.append((b.get(k, 0.0) - s / k) / b0)
    f = [0.0]
    fact = 1.0
    for k in range(1, d.order + 1):
        fact = fact * k  # float k factorial, saturates to inf past k = 170
        f.append(coeffs[k] * fact if coeffs[k] != 0.0 else 0.0)
    return replace(d, f_derivs=tuple(f), f_taylor=tuple(coeffs))


def taylor_log_estimate(d: DerivativeVector, plan: TruncationPlan) -> ApproxLog:
    """Truncated-series estimate of ln of the restricted partition sum at t = 1.

    The estimate is ln g(0) + sum_{k=1}^{l} f_derivs[k] / k! with the plan's
    additive bound attached; the bound is rigorous whenever no complex root of
    the interpolation polynomial has modulus <= plan.beta.
    """
    if d.f_derivs is None:
        raise ParameterError("f derivatives are not filled; call f_from_g first")
    if plan.order > d.order:
        raise ParameterError(
            f"plan order {plan.order} exceeds derivative vector order {d.order}"
        )
    if d.mode is Mode.EXACT:
        tail = Fraction(0)
        for k in range(1, plan.order + 1):
            tail += Fraction(d.f_derivs[k]) / _factorial(k)
        tail_value = float(tail)
    else:
        coeffs = d.f_taylor
        if coeffs is None:
            # hand-built vector: recover coefficients by exact division
            coeffs = [0.0] + [
                float(Fraction(d.f_derivs[k]) / _factorial(k))
                for k in range(1, d.order + 1)
            ]
        acc = CompensatedSum()
        for k in range(1, plan.order + 1):
            acc.add(coeffs[k])
        tail_value = acc.value()
    return ApproxLog(float_log(d.g_derivs[0]) + tail_value, float(plan.additive_bound))

"""Exact brute-force ground truth for partition sums and density histograms.

Everything here enumerates m-subsets directly, in exact rational arithmetic
(or plain complex arithmetic for the zero-freeness audit), and is
deliberately the simplest correct computation.  The fast estimators are
validated against this module, so no clever shortcuts belong here.

Enumeration walks subsets in lexicographic order and multiplies in the at
most m - 1 pair weights added per extension step, so the work per subset is
O(m) multiplications.  A size cap (default 20 vertices) keeps C(n, m)
enumeration bounded.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Collection, Mapping

from ._parallel import map_chunks
from .errors import CapExceededError, ParameterError
from .model import AlgorithmParams, Graph, WeightMatrix, as_fraction, binomial, float_log

__all__ = [
    "DEFAULT_ORACLE_CAP",
    "DensityHistogram",
    "exact_partition_function",
    "exact_restricted_pf",
    "exact_g_of_t",
    "density_histogram",
    "complex_partition_function",
]

DEFAULT_ORACLE_CAP = 20


def _require_within_cap(n: int, cap: int) -> None:
    if n > cap:
        raise CapExceededError(f"exact enumeration needs n <= {cap}, got n = {n}")


def _check_m(n: int, m: int) -> None:
    if not isinstance(m, int) or isinstance(m, bool) or not 1 < m <= n:
        raise ParameterError(f"subset size m must satisfy 1 < m <= n, got m={m}, n={n}")


def _anchor_positions(anchor: Collection[int], n: int, m: int) -> tuple[int, ...]:
    vertices = tuple(anchor)
    if len(set(vertices)) != len(vertices):
        raise ParameterError("anchor contains repeated vertices")
    if any(not isinstance(v, int) or isinstance(v, bool) or not 1 <= v <= n for v in vertices):
        raise ParameterError(f"anchor leaves the vertex range 1..{n}")
    if len(vertices) > m:
        raise ParameterError(f"anchor of size {len(vertices)} exceeds subset size m={m}")
    return tuple(sorted(v - 1 for v in vertices))


def _pf_chunk(state, t0):
    """Sum over m-subsets whose first chosen free vertex is free[t0]."""
    values, free, anchor0, need = state
    members = list(anchor0)
    prod = 1
    for i, u in enumerate(members):
        for v in members[i + 1 :]:
            prod = prod * values[u][v]
    v0 = free[t0]
    for u in members:
        prod = prod * values[u][v0]
    members.append(v0)
    if need == 1:
        return prod

    total = 0

    def extend(idx, remaining, running):
        nonlocal total
        last = len(free) - remaining
        for t in range(idx, last + 1):
            v = free[t]
            p = running
            for u in members:
                p = p * values[u][v]
            if remaining == 1:
                total += p
            else:
                members.append(v)
                extend(t + 1, remaining - 1, p)
                members.pop()

    extend(t0 + 1, need - 1, prod)
    return total


def _subset_products(values, n: int, m: int, anchor0: tuple[int, ...], workers: int = 1):
    """Sum of pair-weight products over all m-subsets containing the anchor."""
    anchor_set = set(anchor0)
    free = tuple(v for v in range(n) if v not in anchor_set)
    need = m - len(anchor0)
    if need == 0:
        prod = 1
        for i, u in enumerate(anchor0):
            for v in anchor0[i + 1 :]:
                prod = prod * values[u][v]
        return prod
    state = (values, free, anchor0, need)
    chunk_count = len(free) - need + 1
    parts = map_chunks(_pf_chunk, state, chunk_count, workers)
    return sum(parts)


def _exact_values(w: WeightMatrix):
    return tuple(tuple(Fraction(x) for x in row) for row in w.entries)


def exact_restricted_pf(
    w: WeightMatrix,
    m: int,
    anchor: Collection[int] = (),
    *,
    cap: int = DEFAULT_ORACLE_CAP,
    workers: int = 1,
) -> Fraction:
    """Exact sum of pair-weight products over m-subsets containing the anchor.

    The empty anchor recovers the full partition sum; an anchor of size m
    returns the single product over pairs inside the anchor.
    """
    n = w.n
    _check_m(n, m)
    _require_within_cap(n, cap)
    anchor0 = _anchor_positions(anchor, n, m)
    return Fraction(_subset_products(_exact_values(w), n, m, anchor0, workers))


def exact_partition_function(
    w: WeightMatrix, m: int, *, cap: int = DEFAULT_ORACLE_CAP, workers: int = 1
) -> Fraction:
    """Exact clique partition sum: sum over m-subsets of the product of pair weights."""
    return exact_restricted_pf(w, m, (), cap=cap, workers=workers)


def exact_g_of_t(
    w: WeightMatrix,
    m: int,
    t,
    anchor: Collection[int] = (),
    *,
    cap: int = DEFAULT_ORACLE_CAP,
) -> Fraction:
    """Exact value of the interpolation polynomial g(t) at a rational point.

    g(t) is the (restricted) partition sum of J + t*(W - J); g(0) counts the
    enumerated subsets and g(1) equals the exact restricted partition sum.
    """
    n = w.n
    _check_m(n, m)
    _require_within_cap(n, cap)
    anchor0 = _anchor_positions(anchor, n, m)
    t = as_fraction(t)
    values = tuple(
        tuple(1 + t * (Fraction(x) - 1) for x in row) for row in w.entries
    )
    return Fraction(_subset_products(values, n, m, anchor0))


def complex_partition_function(
    entries, m: int, *, cap: int = DEFAULT_ORACLE_CAP
) -> complex:
    """Clique partition sum of a complex symmetric matrix at double precision.

    ``entries`` may be any square matrix of complex numbers (row-major); only
    off-diagonal values are read.
    """
    rows = tuple(tuple(complex(x) for x in row) for row in entries)
    n = len(rows)
    if any(len(row) != n for row in rows):
        raise ParameterError("entries must form a square matrix")
    _check_m(n, m)
    _require_within_cap(n, cap)
    return complex(_subset_products(rows, n, m, ()))


@dataclass(frozen=True)
class DensityHistogram:
    """Counts of m-subsets by the number of edges they span.

    counts maps an edge count e in 0..C(m, 2) to the number of m-subsets
    spanning exactly e edges; absent keys mean zero subsets.
    """

    n: int
    m: int
    counts: Mapping[int, int]

    @property
    def pair_count(self) -> int:
        return self.m * (self.m - 1) // 2

    def total(self) -> int:
        return sum(self.counts.values())

    def max_density(self) -> Fraction:
        """Largest subset density present."""
        return Fraction(max(e for e, c in self.counts.items() if c > 0), self.pair_count)

    def count_with_density_at_least(self, sigma) -> int:
        """Number of m-subsets of density >= sigma (sigma read as an exact rational)."""
        sigma = as_fraction(sigma)
        big_m = self.pair_count
        return sum(c for e, c in self.counts.items() if Fraction(e, big_m) >= sigma)

    def tilted_mass(self, delta) -> Fraction:
        """Exact sum over subsets of (1+delta)^(e-M) * (1-delta)^(M-e), M = C(m, 2).

        This is the density functional divided by its exp(gamma*m) prefactor,
        so it stays rational.
        """
        delta = as_fraction(delta)
        hi = 1 + delta
        lo = 1 - delta
        big_m = self.pair_count
        return sum(
            (c * hi ** (e - big_m) * lo ** (big_m - e) for e, c in self.counts.items()),
            start=Fraction(0),
        )

    def log_density(self, params: AlgorithmParams) -> float:
        """Natural log of the exact density functional for the given parameters."""
        if params.m != self.m:
            raise ParameterError(
                f"histogram was built for m={self.m}, parameters carry m={params.m}"
            )
        return float(params.gamma * params.m) + float_log(self.tilted_mass(params.delta))


def density_histogram(
    graph: Graph, m: int, *, cap: int = DEFAULT_ORACLE_CAP
) -> DensityHistogram:
    """Exhaustive histogram of edge counts over all m-subsets of the graph."""
    n = graph.n
    _check_m(n, m)
    _require_within_cap(n, cap)
    edges = graph.edges
    counts: dict[int, int] = {}
    for subset in combinations(range(1, n + 1), m):
        e = sum(1 for pair in combinations(subset, 2) if pair in edges)
        counts[e] = counts.get(e, 0) + 1
    assert sum(counts.values()) == binomial(n, m)
    return DensityHistogram(n=n, m=m, counts=counts)

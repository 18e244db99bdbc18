"""Core model: graphs, parameter regimes, pair-weight matrices, the weight curve.

A graph on n vertices is turned into a symmetric matrix of pair weights
1 + delta on edges and 1 - delta on non-edges, where delta = gamma/(m-1) for
a subset size m and a small rational constant gamma.  The product of these
weights over the pairs inside an m-subset grows exponentially with the
subset's edge density, which is what makes weighted subset sums usable as a
smoothed detector of dense subsets.

Two constant pairs (gamma, omega) are supported.  gamma caps the weight
deviation, omega is the radius of the complex disc around the all-ones
matrix on which the partition sum provably does not vanish, and
beta = omega/gamma > 1 is the root-exclusion radius that controls how fast
truncated-series estimates converge.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .errors import DomainError, ParameterError, RegimeError

__all__ = [
    "Graph",
    "Regime",
    "Mode",
    "AlgorithmParams",
    "WeightMatrix",
    "weights_from_graph",
    "weight_curve",
    "log_weight_curve",
    "binomial",
    "as_fraction",
    "float_log",
]


def as_fraction(value) -> Fraction:
    """Coerce a number to an exact rational.

    Floats are read through their shortest decimal repr, so 0.06 becomes
    3/50 rather than its binary expansion.  Strings accept both "0.06" and
    "3/50" forms.
    """
    if isinstance(value, bool):
        raise ParameterError(f"expected a number, got {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ParameterError(f"expected a finite number, got {value!r}")
        return Fraction(str(value))
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParameterError(f"cannot read {value!r} as a rational") from exc
    raise ParameterError(f"expected a number, got {type(value).__name__}")


def float_log(x) -> float:
    """Natural log of a positive int, Fraction, or float, safe for huge integers."""
    if isinstance(x, Fraction):
        if x <= 0:
            raise DomainError(f"log of non-positive value {x}")
        return math.log(x.numerator) - math.log(x.denominator)
    if x <= 0:
        raise DomainError(f"log of non-positive value {x}")
    return math.log(x)


def binomial(a: int, b: int) -> int:
    """Exact binomial coefficient, with C(a, b) = 0 whenever b < 0 or b > a.

    The out-of-range convention is the combinatorially correct count of
    b-subsets of an a-set, so callers never need to special-case it.
    """
    if not isinstance(a, int) or isinstance(a, bool) or a < 0:
        raise ParameterError("binomial needs a nonnegative integer first argument")
    if not isinstance(b, int) or isinstance(b, bool):
        raise ParameterError("binomial needs an integer second argument")
    if b < 0 or b > a:
        return 0
    return math.comb(a, b)


class Graph:
    """Simple undirected graph on vertices 1..n (no loops, no duplicate edges)."""

    __slots__ = ("n", "edges")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if not isinstance(n, int) or isinstance(n, bool) or n < 1:
            raise ParameterError("vertex count must be a positive integer")
        normalized: set[tuple[int, int]] = set()
        for edge in edges:
            try:
                u, v = edge
            except (TypeError, ValueError):
                raise ParameterError(f"edge {edge!r} is not a vertex pair") from None
            if not isinstance(u, int) or not isinstance(v, int):
                raise ParameterError(f"edge {edge!r} has non-integer endpoints")
            if u == v:
                raise ParameterError(f"loop at vertex {u} is not allowed")
            if not (1 <= u <= n and 1 <= v <= n):
                raise ParameterError(f"edge {edge!r} leaves the vertex range 1..{n}")
            key = (u, v) if u < v else (v, u)
            if key in normalized:
                raise ParameterError(f"duplicate edge {key}")
            normalized.add(key)
        self.n = n
        self.edges = frozenset(normalized)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self.edges or (v, u) in self.edges

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls(n, combinations(range(1, n + 1), 2))

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n)

    def density(self, subset: Iterable[int]) -> Fraction:
        """Fraction of the C(k, 2) vertex pairs of the subset that are edges."""
        vertices = tuple(subset)
        if len(set(vertices)) != len(vertices):
            raise ParameterError("subset contains repeated vertices")
        if any(not (1 <= v <= self.n) for v in vertices):
            raise ParameterError("subset leaves the vertex range")
        k = len(vertices)
        if k < 2:
            raise ParameterError("density needs at least two vertices")
        inside = sum(1 for a, b in combinations(sorted(vertices), 2) if (a, b) in self.edges)
        return Fraction(inside, math.comb(k, 2))

    def permuted(self, relabeling: Sequence[int]) -> "Graph":
        """Relabel vertices: vertex i becomes relabeling[i-1]."""
        if sorted(relabeling) != list(range(1, self.n + 1)):
            raise ParameterError("relabeling must be a permutation of 1..n")
        return Graph(self.n, ((relabeling[u - 1], relabeling[v - 1]) for u, v in self.edges))

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self):
        return f"Graph(n={self.n}, edges={sorted(self.edges)})"


class Regime(Enum):
    """Constant pairs: the weight scale gamma and the matching disc radius omega."""

    STANDARD = "standard"
    LARGE_GAP = "large-gap"


_GAMMA_MAX = {Regime.STANDARD: Fraction(3, 50), Regime.LARGE_GAP: Fraction(9, 50)}
_OMEGA = {Regime.STANDARD: Fraction(61, 1000), Regime.LARGE_GAP: Fraction(181, 1000)}


class Mode(Enum):
    """Arithmetic for derivative sums: exact rationals or compensated doubles."""

    EXACT = "exact"
    FLOAT = "float"


@dataclass(frozen=True)
class AlgorithmParams:
    """Subset size m plus the weight-scale constant gamma and its regime.

    gamma is stored as an exact rational and is capped at the regime maximum
    (3/50 standard, 9/50 large-gap); beta = omega/gamma is then always > 1.
    The large-gap pair additionally requires m >= 10 at construction and
    n >= 4m whenever a graph is attached.
    """

    m: int
    gamma: Fraction = None
    regime: Regime = Regime.STANDARD

    def __post_init__(self):
        if not isinstance(self.m, int) or isinstance(self.m, bool) or self.m <= 1:
            raise ParameterError("subset size m must be an integer greater than 1")
        if not isinstance(self.regime, Regime):
            raise ParameterError("regime must be a Regime value")
        if self.regime is Regime.LARGE_GAP and self.m < 10:
            raise RegimeError("large-gap constants require m >= 10")
        gamma = self.gamma
        gamma = _GAMMA_MAX[self.regime] if gamma is None else as_fraction(gamma)
        if not 0 < gamma <= _GAMMA_MAX[self.regime]:
            raise ParameterError(
                f"gamma must lie in (0, {_GAMMA_MAX[self.regime]}] for the "
                f"{self.regime.value} regime, got {gamma}"
            )
        object.__setattr__(self, "gamma", gamma)

    @property
    def omega(self) -> Fraction:
        return _OMEGA[self.regime]

    @property
    def beta(self) -> Fraction:
        """Root-exclusion radius omega/gamma (> 1)."""
        return self.omega / self.gamma

    @property
    def delta(self) -> Fraction:
        """Maximum pair-weight deviation gamma/(m-1)."""
        return self.gamma / (self.m - 1)

    @property
    def pair_count(self) -> int:
        """Number of vertex pairs inside an m-subset, C(m, 2)."""
        return self.m * (self.m - 1) // 2

    def require_graph_size(self, n: int) -> None:
        if self.m > n:
            raise ParameterError(f"subset size m={self.m} exceeds vertex count n={n}")
        if self.regime is Regime.LARGE_GAP and n < 4 * self.m:
            raise RegimeError(f"large-gap constants require n >= 4m (n={n}, m={self.m})")


class WeightMatrix:
    """Symmetric pair weights w_uv with |w_uv - 1| <= delta.

    The diagonal is never read by any computation and is pinned to 1, so equal
    matrices compare equal.  Entries are exact rationals when built from a
    graph.  Instances are immutable and safe to share between workers.
    """

    __slots__ = ("n", "delta", "entries")

    def __init__(self, n: int, entries, delta, validate: bool = True):
        if not isinstance(n, int) or isinstance(n, bool) or n < 1:
            raise ParameterError("dimension must be a positive integer")
        delta = as_fraction(delta)
        if not 0 <= delta < 1:
            raise ParameterError(f"delta must lie in [0, 1), got {delta}")
        rows = [list(row) for row in entries]
        if validate:
            if len(rows) != n or any(len(row) != n for row in rows):
                raise ParameterError(f"entries must form an {n} x {n} matrix")
            for i in range(n):
                for j in range(i + 1, n):
                    if rows[i][j] != rows[j][i]:
                        raise ParameterError(f"entries are not symmetric at ({i + 1}, {j + 1})")
                    if abs(rows[i][j] - 1) > delta:
                        raise ParameterError(
                            f"entry at ({i + 1}, {j + 1}) deviates from 1 by more than {delta}"
                        )
        for i in range(n):
            rows[i][i] = Fraction(1)
        self.n = n
        self.delta = delta
        self.entries = tuple(tuple(row) for row in rows)

    def weight(self, u: int, v: int):
        """Weight of the pair {u, v}, 1-indexed; the diagonal reads as 1."""
        if not (1 <= u <= self.n and 1 <= v <= self.n):
            raise ParameterError(f"pair ({u}, {v}) leaves the vertex range 1..{self.n}")
        return self.entries[u - 1][v - 1]

    @classmethod
    def all_ones(cls, n: int) -> "WeightMatrix":
        """The degenerate delta = 0 matrix with every pair weight equal to 1."""
        one = Fraction(1)
        return cls(n, [[one] * n for _ in range(n)], Fraction(0), validate=False)

    def __eq__(self, other):
        if not isinstance(other, WeightMatrix):
            return NotImplemented
        return self.n == other.n and self.delta == other.delta and self.entries == other.entries

    def __hash__(self):
        return hash((self.n, self.delta, self.entries))

    def __repr__(self):
        return f"WeightMatrix(n={self.n}, delta={self.delta})"


def weights_from_graph(graph: Graph, params: AlgorithmParams) -> WeightMatrix:
    """Pair weights 1 + delta on edges and 1 - delta elsewhere, delta = gamma/(m-1)."""
    params.require_graph_size(graph.n)
    n = graph.n
    delta = params.delta
    hi = 1 + delta
    lo = 1 - delta
    one = Fraction(1)
    rows = [[one] * n for _ in range(n)]
    edges = graph.edges
    for u in range(1, n):
        row = rows[u - 1]
        for v in range(u + 1, n + 1):
            val = hi if (u, v) in edges else lo
            row[v - 1] = val
            rows[v - 1][u - 1] = val
    return WeightMatrix(n, rows, delta, validate=False)


def log_weight_curve(t, params: AlgorithmParams) -> float:
    """Natural log of the subset weight at edge density t in [0, 1].

    An m-subset spanning exactly t*C(m, 2) edges carries weight
    exp(gamma*m) * (1+delta)^((t-1)*M) * (1-delta)^((1-t)*M) with M = C(m, 2).
    The log is affine and strictly increasing in t, and equals gamma*m at t=1.
    """
    tf = float(t)
    if not 0.0 <= tf <= 1.0:
        raise DomainError(f"density t must lie in [0, 1], got {t}")
    d = float(params.delta)
    big_m = params.pair_count
    return (
        float(params.gamma * params.m)
        + (tf - 1.0) * big_m * math.log1p(d)
        + (1.0 - tf) * big_m * math.log1p(-d)
    )


def weight_curve(t, params: AlgorithmParams) -> float:
    """Subset weight at edge density t; see log_weight_curve for the closed form."""
    return math.exp(log_weight_curve(t, params))

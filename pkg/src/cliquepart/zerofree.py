"""Numerical audit of the zero-free disc around the all-ones matrix.

The estimates in this package are trustworthy because the clique partition
sum of any complex symmetric matrix whose entries stay within omega/(m-1)
of 1 is nonzero.  This module stress-tests that statement numerically:
it samples complex matrices in the closed polydisc of that radius (half of
the draws sit exactly on the boundary, where minima of the modulus are
approached) and evaluates the partition sum by exhaustive enumeration.

It also houses the cone constants behind the non-vanishing argument, with
their defining equations checkable to high precision, and the angle-cone
sum inequality as a tested numeric utility: nonzero vectors with pairwise
angles at most alpha < pi/2 satisfy ||sum u_i|| >= sqrt(cos alpha) * sum ||u_i||.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Sequence

from .errors import ParameterError
from .model import Regime, WeightMatrix
from .oracle import DEFAULT_ORACLE_CAP, complex_partition_function

__all__ = [
    "ZeroFreeConstants",
    "ComplexWeightMatrix",
    "AuditResult",
    "sample_polydisc",
    "audit_min_modulus",
    "line_matrix",
    "angle_sum_check",
    "standard_fixed_point_gap",
    "large_gap_theta_root",
]


@dataclass(frozen=True)
class ZeroFreeConstants:
    """Disc radius and cone constants for one regime.

    For the standard pair, theta solves
    theta = 4*omega*exp(theta) / ((1-omega)*cos(theta)) and
    tau = cos(theta)/exp(theta).  For the large-gap pair, theta is an upper
    bound below which theta = 4*omega / ((1-omega/(m-1))*sqrt(cos theta))
    has a root for every m >= 10, and tau = sqrt(cos(theta)).  In both cases
    lambda_ = exp(theta) bounds ratios of restricted partition sums.
    """

    regime: Regime
    omega: float
    theta: float
    lambda_: float
    tau: float

    @classmethod
    def standard(cls) -> "ZeroFreeConstants":
        theta = 0.4580097179
        return cls(
            regime=Regime.STANDARD,
            omega=0.061,
            theta=theta,
            lambda_=math.exp(theta),
            tau=math.cos(theta) / math.exp(theta),
        )

    @classmethod
    def large_gap(cls) -> "ZeroFreeConstants":
        theta = 1.02831829
        return cls(
            regime=Regime.LARGE_GAP,
            omega=0.181,
            theta=theta,
            lambda_=math.exp(theta),
            tau=math.sqrt(math.cos(theta)),
        )

    @classmethod
    def for_regime(cls, regime: Regime) -> "ZeroFreeConstants":
        return cls.standard() if regime is Regime.STANDARD else cls.large_gap()

    def radius(self, m: int) -> float:
        """Polydisc radius omega/(m-1) for subset size m."""
        if not isinstance(m, int) or isinstance(m, bool) or m < 2:
            raise ParameterError("subset size m must be an integer greater than 1")
        return self.omega / (m - 1)


def standard_fixed_point_gap(constants: ZeroFreeConstants) -> float:
    """Residual of the standard-regime defining equation at the stored theta."""
    theta = constants.theta
    omega = constants.omega
    return abs(theta - 4 * omega * math.exp(theta) / ((1 - omega) * math.cos(theta)))


def large_gap_theta_root(m: int, omega: float = 0.181) -> float:
    """Smallest root of theta*(1 - omega/(m-1))*sqrt(cos theta) = 4*omega, by bisection."""
    if not isinstance(m, int) or isinstance(m, bool) or m < 10:
        raise ParameterError("the large-gap equation is used for m >= 10")
    shrink = 1 - omega / (m - 1)

    def residual(theta: float) -> float:
        return theta * shrink * math.sqrt(math.cos(theta)) - 4 * omega

    lo, hi = 0.5, 1.05
    if not (residual(lo) < 0 < residual(hi)):
        raise ParameterError(f"no sign change on [{lo}, {hi}] for m={m}")
    for _ in range(200):
        mid = (lo + hi) / 2
        if residual(mid) < 0:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


class ComplexWeightMatrix:
    """Symmetric complex pair weights; the diagonal is pinned to 1."""

    __slots__ = ("n", "entries")

    def __init__(self, n: int, entries):
        if not isinstance(n, int) or isinstance(n, bool) or n < 1:
            raise ParameterError("dimension must be a positive integer")
        rows = [[complex(x) for x in row] for row in entries]
        if len(rows) != n or any(len(row) != n for row in rows):
            raise ParameterError(f"entries must form an {n} x {n} matrix")
        for i in range(n):
            for j in range(i + 1, n):
                if rows[i][j] != rows[j][i]:
                    raise ParameterError(f"entries are not symmetric at ({i + 1}, {j + 1})")
            rows[i][i] = 1 + 0j
        self.n = n
        self.entries = tuple(tuple(row) for row in rows)

    def max_deviation(self) -> float:
        """Largest |z_uv - 1| over off-diagonal entries."""
        n = self.n
        if n == 1:
            return 0.0
        return max(
            abs(self.entries[i][j] - 1) for i in range(n) for j in range(i + 1, n)
        )

    def in_polydisc(self, radius: float, rel_slack: float = 1e-12) -> bool:
        """Whether every entry satisfies |z_uv - 1| <= radius (up to float slack)."""
        return self.max_deviation() <= radius * (1 + rel_slack)

    def upper_triangle(self) -> list[tuple[int, int, complex]]:
        """Off-diagonal entries as (u, v, z_uv) with 1-indexed u < v."""
        return [
            (i + 1, j + 1, self.entries[i][j])
            for i in range(self.n)
            for j in range(i + 1, self.n)
        ]

    def __eq__(self, other):
        if not isinstance(other, ComplexWeightMatrix):
            return NotImplemented
        return self.n == other.n and self.entries == other.entries

    def __repr__(self):
        return f"ComplexWeightMatrix(n={self.n})"


def sample_polydisc(
    n: int,
    m: int,
    constants: ZeroFreeConstants,
    count: int,
    seed: int,
    *,
    radius: float | None = None,
) -> list[ComplexWeightMatrix]:
    """Seeded samples from the closed polydisc of radius omega/(m-1) around all-ones.

    Entries are drawn as 1 + r*exp(i*phi) with phi uniform; even-indexed
    samples put every entry exactly on the boundary r = radius, odd-indexed
    samples draw r uniformly from [0, radius].  The sequence is a pure
    function of the seed.  Passing an explicit radius switches to
    exploratory sampling outside the audited disc.
    """
    if not isinstance(n, int) or isinstance(n, bool) or n < 2:
        raise ParameterError("polydisc sampling needs n >= 2")
    if not isinstance(count, int) or isinstance(count, bool) or count < 1:
        raise ParameterError("sample count must be a positive integer")
    if radius is None:
        radius = constants.radius(m)
    else:
        radius = float(radius)
        if radius < 0:
            raise ParameterError("radius must be nonnegative")
    rng = random.Random(seed)
    two_pi = 2 * math.pi
    samples = []
    for index in range(count):
        boundary = index % 2 == 0
        rows = [[1 + 0j] * n for _ in range(n)]
        for u in range(n - 1):
            for v in range(u + 1, n):
                phi = rng.uniform(0.0, two_pi)
                r = radius if boundary else rng.uniform(0.0, radius)
                z = complex(1.0 + r * math.cos(phi), r * math.sin(phi))
                rows[u][v] = rows[v][u] = z
        samples.append(ComplexWeightMatrix(n, rows))
    return samples


@dataclass(frozen=True)
class AuditResult:
    """Minimum modulus of the partition sum over a sample batch."""

    min_modulus: float
    argmin_index: int
    argmin: ComplexWeightMatrix
    count: int


def audit_min_modulus(
    samples: Sequence[ComplexWeightMatrix], m: int, *, cap: int = DEFAULT_ORACLE_CAP
) -> AuditResult:
    """Evaluate |P_m| on every sample by exhaustive enumeration and report the minimum.

    The reduction is deterministic: ties keep the earliest sample index.  At
    the audited radius the minimum must stay well away from zero; at
    exploratory radii the result is reported without any pass/fail meaning.
    """
    if not samples:
        raise ParameterError("audit needs at least one sample")
    best = None
    best_index = -1
    for index, sample in enumerate(samples):
        modulus = abs(complex_partition_function(sample.entries, m, cap=cap))
        if best is None or modulus < best:
            best = modulus
            best_index = index
    return AuditResult(
        min_modulus=best,
        argmin_index=best_index,
        argmin=samples[best_index],
        count=len(samples),
    )


def line_matrix(w: WeightMatrix, z: complex) -> ComplexWeightMatrix:
    """The complex matrix J + z*(W - J) reached by the interpolation segment."""
    z = complex(z)
    n = w.n
    rows = [[1 + 0j] * n for _ in range(n)]
    for u in range(n - 1):
        for v in range(u + 1, n):
            value = 1 + z * (complex(w.entries[u][v]) - 1)
            rows[u][v] = rows[v][u] = value
    return ComplexWeightMatrix(n, rows)


def _norm(vector: Sequence[float]) -> float:
    return math.sqrt(math.fsum(x * x for x in vector))


def angle_sum_check(vectors: Sequence[Sequence[float]], alpha: float) -> bool:
    """Check ||sum u_i|| >= sqrt(cos alpha) * sum ||u_i|| for a cone of vectors.

    Inputs are validated, not trusted: every vector must be nonzero, all of
    the same dimension, and every pairwise angle must actually be at most
    alpha; violations raise instead of producing a vacuous answer.  For valid
    inputs the inequality always holds, which makes this a property check of
    the angle computation itself.
    """
    if not 0 <= alpha < math.pi / 2:
        raise ParameterError("alpha must lie in [0, pi/2)")
    vecs = [tuple(float(x) for x in v) for v in vectors]
    if not vecs:
        raise ParameterError("need at least one vector")
    dim = len(vecs[0])
    if any(len(v) != dim for v in vecs):
        raise ParameterError("vectors must share one dimension")
    norms = [_norm(v) for v in vecs]
    if any(norm == 0.0 for norm in norms):
        raise ParameterError("zero vectors are not allowed")
    for i in range(len(vecs)):
        for j in range(i + 1, len(vecs)):
            dot = math.fsum(a * b for a, b in zip(vecs[i], vecs[j]))
            cosine = max(-1.0, min(1.0, dot / (norms[i] * norms[j])))
            if math.acos(cosine) > alpha:
                raise ParameterError(
                    f"vectors {i} and {j} subtend an angle above alpha={alpha}"
                )
    total = tuple(math.fsum(v[k] for v in vecs) for k in range(dim))
    return _norm(total) >= math.sqrt(math.cos(alpha)) * math.fsum(norms)

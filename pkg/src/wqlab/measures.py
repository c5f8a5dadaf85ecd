"""Ground data model: finite metric spaces and exact-weight discrete measures.

Weights are exact ``fractions.Fraction`` values throughout; distances are
binary floats.  All objects are immutable after construction and safe to
share across threads.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError

# Relative tolerance for float distance comparisons (triangle check etc.).
DIST_RTOL = 1e-9


def as_fraction(value) -> Fraction:
    """Coerce ints, Fractions and "num/den" strings to an exact Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"cannot parse rational {value!r}") from exc
    raise DomainError(f"weights must be exact rationals, got {type(value).__name__}")


class FiniteMetricSpace:
    """A finite metric space: point labels plus a full distance matrix.

    The triangle inequality is validated eagerly (O(n^3)); pass
    ``validate=False`` for large synthetic spaces whose metric is known
    valid by construction.
    """

    __slots__ = ("labels", "dist", "_label_index")

    def __init__(self, labels: Sequence[str], dist, validate: bool = True):
        labels = tuple(str(x) for x in labels)
        if len(set(labels)) != len(labels):
            raise DomainError("point labels must be distinct")
        d = np.array(dist, dtype=float)
        n = len(labels)
        if d.shape != (n, n):
            raise DomainError(f"distance matrix must be {n}x{n}, got {d.shape}")
        if np.any(d < 0):
            raise DomainError("distances must be nonnegative")
        if np.any(np.diag(d) != 0):
            raise DomainError("self-distances must be zero")
        if not np.array_equal(d, d.T):
            raise DomainError("distance matrix must be symmetric")
        if validate and n > 2:
            self._check_triangle(d)
        d.flags.writeable = False
        self.labels = labels
        self.dist = d
        self._label_index = {lab: i for i, lab in enumerate(labels)}

    @staticmethod
    def _check_triangle(d: np.ndarray) -> None:
        n = d.shape[0]
        scale = d.max() if d.size else 0.0
        tol = DIST_RTOL * max(scale, 1.0)
        # Chunk over the first index to keep memory at O(n^2).
        for i in range(n):
            via = np.min(d[i][:, None] + d, axis=0)
            bad = d[i] > via + tol
            if bad.any():
                k = int(np.argmax(bad))
                raise DomainError(
                    f"triangle inequality violated: d[{i},{k}]={d[i, k]} exceeds "
                    f"min over midpoints {via[k]}"
                )

    def __len__(self) -> int:
        return len(self.labels)

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, FiniteMetricSpace):
            return NotImplemented
        return self.labels == other.labels and np.array_equal(self.dist, other.dist)

    def __hash__(self) -> int:
        return hash(self.labels)

    def index(self, label: str) -> int:
        try:
            return self._label_index[label]
        except KeyError:
            raise DomainError(f"unknown point label {label!r}") from None

    def distinct_distances(self) -> tuple[float, ...]:
        """Sorted distinct pairwise distance values, including 0."""
        return tuple(sorted(set(self.dist.ravel().tolist())))

    def diameter(self) -> float:
        return float(self.dist.max()) if len(self) else 0.0

    def __repr__(self) -> str:
        return f"FiniteMetricSpace({len(self)} points)"


class EmbeddedSpace:
    """Points in R^d under an L2 or L-infinity norm; materializes to a
    FiniteMetricSpace by evaluating the chosen norm."""

    __slots__ = ("points", "metric_kind")

    METRICS = ("l2", "linf")

    def __init__(self, points, metric_kind: str = "l2"):
        pts = np.array(points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] < 1:
            raise DomainError("points must be a nonempty 2-D array of coordinates")
        if metric_kind not in self.METRICS:
            raise DomainError(f"metric_kind must be one of {self.METRICS}")
        pts.flags.writeable = False
        self.points = pts
        self.metric_kind = metric_kind

    def to_metric_space(self, labels: Sequence[str] | None = None) -> FiniteMetricSpace:
        diff = self.points[:, None, :] - self.points[None, :, :]
        if self.metric_kind == "l2":
            d = np.sqrt((diff ** 2).sum(axis=2))
        else:
            d = np.abs(diff).max(axis=2)
        d = (d + d.T) / 2.0  # enforce exact symmetry against float noise
        np.fill_diagonal(d, 0.0)
        if labels is None:
            labels = [f"p{i}" for i in range(len(self.points))]
        # Norm-induced metrics satisfy the triangle inequality by
        # construction; skip the O(n^3) check.
        return FiniteMetricSpace(labels, d, validate=False)


class SubMeasure:
    """Nonnegative rational weights with total mass at most 1."""

    __slots__ = ("space", "weights")

    def __init__(self, space: FiniteMetricSpace, weights: Iterable):
        w = tuple(as_fraction(x) for x in weights)
        if len(w) != len(space):
            raise DomainError(
                f"expected {len(space)} weights, got {len(w)}"
            )
        if any(x < 0 for x in w):
            raise DomainError("weights must be nonnegative")
        self._check_mass(sum(w, Fraction(0)))
        self.space = space
        self.weights = w

    @staticmethod
    def _check_mass(total: Fraction) -> None:
        if total > 1:
            raise DomainError(f"total mass must be at most 1, got {total}")

    @property
    def mass(self) -> Fraction:
        return sum(self.weights, Fraction(0))

    def support(self) -> tuple[int, ...]:
        return tuple(i for i, w in enumerate(self.weights) if w > 0)

    def weight(self, i: int) -> Fraction:
        return self.weights[i]

    def as_float_array(self) -> np.ndarray:
        return np.array([float(w) for w in self.weights])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SubMeasure)
            and self.space is other.space
            and self.weights == other.weights
        )

    def __hash__(self):
        return hash((id(self.space), self.weights))

    def leq(self, other: "SubMeasure") -> bool:
        """Setwise order: self(A) <= other(A) for all A (atomwise here)."""
        _require_same_space(self, other)
        return all(a <= b for a, b in zip(self.weights, other.weights))

    def __repr__(self) -> str:
        return f"{type(self).__name__}(mass={self.mass}, support={len(self.support())} atoms)"


class DiscreteMeasure(SubMeasure):
    """A probability measure: rational weights summing to exactly 1."""

    __slots__ = ()

    @staticmethod
    def _check_mass(total: Fraction) -> None:
        if total != 1:
            raise DomainError(f"weights must sum to 1, got {total}")

    @classmethod
    def delta(cls, space: FiniteMetricSpace, index: int) -> "DiscreteMeasure":
        w = [Fraction(0)] * len(space)
        w[index] = Fraction(1)
        return cls(space, w)

    @classmethod
    def uniform(cls, space: FiniteMetricSpace, indices: Sequence[int] | None = None) -> "DiscreteMeasure":
        if indices is None:
            indices = range(len(space))
        indices = list(indices)
        if not indices:
            raise DomainError("uniform measure needs a nonempty index set")
        w = [Fraction(0)] * len(space)
        share = Fraction(1, len(indices))
        for i in indices:
            w[i] += share
        return cls(space, w)

    @classmethod
    def from_counts(cls, space: FiniteMetricSpace, counts: Sequence[int]) -> "DiscreteMeasure":
        total = sum(counts)
        if total <= 0:
            raise DomainError("counts must have positive total")
        return cls(space, [Fraction(c, total) for c in counts])


class PointMap:
    """A total map between point indices of (usually the same) space."""

    __slots__ = ("source", "target", "assignment")

    def __init__(self, source: FiniteMetricSpace, target: FiniteMetricSpace, assignment: Sequence[int]):
        assignment = tuple(int(a) for a in assignment)
        if len(assignment) != len(source):
            raise DomainError("assignment must cover every source point")
        if any(a < 0 or a >= len(target) for a in assignment):
            raise DomainError("assignment maps outside the target space")
        self.source = source
        self.target = target
        self.assignment = assignment

    def __call__(self, i: int) -> int:
        return self.assignment[i]

    def range(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.assignment)))

    @classmethod
    def identity(cls, space: FiniteMetricSpace) -> "PointMap":
        return cls(space, space, range(len(space)))

    @classmethod
    def constant(cls, space: FiniteMetricSpace, index: int) -> "PointMap":
        return cls(space, space, [index] * len(space))


def _require_same_space(a: SubMeasure, b: SubMeasure) -> None:
    if a.space != b.space:
        raise DomainError("measures live on different spaces")


def pushforward(m: SubMeasure, T: PointMap) -> SubMeasure:
    """Image measure of ``m`` under ``T``: mass at y is the exact sum of
    m-weights over the preimage of y."""
    if T.source != m.space:
        raise DomainError("map source does not match the measure's space")
    out = [Fraction(0)] * len(T.target)
    for i, w in enumerate(m.weights):
        if w:
            out[T.assignment[i]] += w
    kind = type(m)
    result = kind.__new__(kind)
    result.space = T.target
    result.weights = tuple(out)
    return result


def meet_and_residuals(mu: DiscreteMeasure, nu: DiscreteMeasure):
    """Atomwise minimum of two probability measures plus the normalized
    residuals (mu-meet)/(1-mass) and (nu-meet)/(1-mass).

    Returns (meet, mass, res_mu, res_nu); the residuals are None when the
    measures coincide (mass == 1).
    """
    _require_same_space(mu, nu)
    meet_w = tuple(min(a, b) for a, b in zip(mu.weights, nu.weights))
    mass = sum(meet_w, Fraction(0))
    meet = SubMeasure(mu.space, meet_w)
    if mass == 1:
        return meet, mass, None, None
    rem = 1 - mass
    res_mu = DiscreteMeasure(mu.space, [(a - m) / rem for a, m in zip(mu.weights, meet_w)])
    res_nu = DiscreteMeasure(mu.space, [(b - m) / rem for b, m in zip(nu.weights, meet_w)])
    return meet, mass, res_mu, res_nu


def mixture(components: Sequence[tuple[Fraction, DiscreteMeasure]]) -> DiscreteMeasure:
    """Exact convex combination sum t_j * mu_j of probability measures."""
    if not components:
        raise DomainError("mixture needs at least one component")
    ts = [as_fraction(t) for t, _ in components]
    if any(t < 0 for t in ts):
        raise DomainError("mixture weights must be nonnegative")
    if sum(ts, Fraction(0)) != 1:
        raise DomainError(f"mixture weights must sum to 1, got {sum(ts, Fraction(0))}")
    space = components[0][1].space
    out = [Fraction(0)] * len(space)
    for t, m in components:
        if m.space != space:
            raise DomainError("mixture components live on different spaces")
        t = as_fraction(t)
        for i, w in enumerate(m.weights):
            if w:
                out[i] += t * w
    return DiscreteMeasure(space, out)


def nearest_map(space: FiniteMetricSpace, subset: Sequence[int]) -> PointMap:
    """Map every point to its nearest point of ``subset``; ties broken by
    the smallest point index so outputs are reproducible."""
    subset = sorted(set(int(i) for i in subset))
    if not subset:
        raise DomainError("nearest_map needs a nonempty subset")
    if subset[0] < 0 or subset[-1] >= len(space):
        raise DomainError("subset indices outside the space")
    assignment = []
    for i in range(len(space)):
        best = subset[0]
        best_d = space.dist[i, best]
        for s in subset[1:]:
            d = space.dist[i, s]
            if d < best_d:
                best, best_d = s, d
        assignment.append(best)
    return PointMap(space, space, assignment)


def distances_to_subset(space: FiniteMetricSpace, subset: Sequence[int]) -> np.ndarray:
    """Vector of d(x, S) over all points x."""
    subset = list(subset)
    if not subset:
        raise DomainError("subset must be nonempty")
    return space.dist[:, subset].min(axis=1)

"""Built-in measure suite used by the verification harness.

Spans the degenerate cases (two points, equidistant clouds), a line
grid, seeded random 6-atom measures with small rational weights, and a
grid discretization of the cube-plus-far-atom mixture used by the
scaling study.
"""
from __future__ import annotations

import itertools
from fractions import Fraction

from .measures import DiscreteMeasure, EmbeddedSpace, FiniteMetricSpace
from .rng import make_generator


def equidistant_space(k: int, scale: float = 1.0) -> FiniteMetricSpace:
    """k points with all pairwise distances equal to scale."""
    dist = [[0.0 if i == j else scale for j in range(k)] for i in range(k)]
    return FiniteMetricSpace([f"x{i}" for i in range(k)], dist, validate=False)


def line_space(k: int, spacing: float = 1.0) -> FiniteMetricSpace:
    dist = [[abs(i - j) * spacing for j in range(k)] for i in range(k)]
    return FiniteMetricSpace([f"t{i}" for i in range(k)], dist, validate=False)


def two_point_space() -> FiniteMetricSpace:
    return equidistant_space(2)


def random_six_atom(variant: int, seed: int = 2026) -> DiscreteMeasure:
    """Six atoms at seeded positions in the unit square, weights a
    random composition of 12 twelfths (so every weight is a positive
    multiple of 1/12)."""
    gen = make_generator(seed, f"instances/random6/{variant}")
    points = gen.random((6, 2))
    space = EmbeddedSpace(points, "l2").to_metric_space(
        [f"r{variant}_{i}" for i in range(6)]
    )
    cuts = sorted(gen.choice(range(1, 12), size=5, replace=False).tolist())
    parts = [b - a for a, b in zip([0] + cuts, cuts + [12])]
    weights = [Fraction(c, 12) for c in parts]
    return DiscreteMeasure(space, weights)


def mixture_instance(g: int = 10, alpha=Fraction(1, 10)) -> DiscreteMeasure:
    """Cube [0,1]^3 discretized to the g^3 cell centers under the sup
    metric, carrying mass alpha uniformly, plus a far atom at (0,0,4)
    with mass 1 - alpha."""
    alpha = Fraction(alpha)
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must lie strictly between 0 and 1, got {alpha}")
    pts = [
        ((i + 0.5) / g, (j + 0.5) / g, (l + 0.5) / g)
        for i, j, l in itertools.product(range(g), repeat=3)
    ]
    pts.append((0.0, 0.0, 4.0))
    labels = [f"c{i}" for i in range(len(pts) - 1)] + ["far"]
    space = EmbeddedSpace(pts, "linf").to_metric_space(labels)
    share = alpha / g ** 3
    weights = [share] * (g ** 3) + [1 - alpha]
    return DiscreteMeasure(space, weights)


def unit_square_instance(g: int = 8) -> DiscreteMeasure:
    """Uniform measure on a g x g grid of cell centers in the unit
    square under the Euclidean metric."""
    pts = [
        ((i + 0.5) / g, (j + 0.5) / g)
        for i, j in itertools.product(range(g), repeat=2)
    ]
    space = EmbeddedSpace(pts, "l2").to_metric_space(
        [f"s{i}" for i in range(len(pts))]
    )
    return DiscreteMeasure.uniform(space)


def default_suite() -> dict[str, DiscreteMeasure]:
    suite = {
        "two_point_uniform": DiscreteMeasure.uniform(two_point_space()),
        "two_point_skew": DiscreteMeasure(
            two_point_space(), [Fraction(3, 4), Fraction(1, 4)]
        ),
        "equidistant_4": DiscreteMeasure.uniform(equidistant_space(4)),
        "equidistant_8": DiscreteMeasure.uniform(equidistant_space(8)),
        "line_grid_5": DiscreteMeasure.uniform(line_space(5)),
        "mixture_grid_small": mixture_instance(g=2),
    }
    for variant in (1, 2, 3):
        suite[f"random6_{variant}"] = random_six_atom(variant)
    return suite

"""Dyadic decomposition of a discrete measure and the uniform quantizer
built from it.

A measure is peeled into components lambda^(0) .. lambda^(k) with dyadic
mixture weights 1/2^k, 1/2^k, 1/2^(k-1), ..., 1/2 such that pushing
lambda^(j) onto a site set S_j of size at most 2^j gives weights in
multiples of 1/2^j.  Mixing the pushforwards yields a quantizer whose
weights are multiples of 1/2^(k+1).  All mass bookkeeping is exact
rational arithmetic.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainError
from .measures import (
    DiscreteMeasure,
    PointMap,
    distances_to_subset,
    mixture,
    nearest_map,
    pushforward,
)
from .quantize import QuantizerResult
from .transport import wasserstein


def reduce_counts(f, r: int):
    """Shrink a nonnegative integer vector to total r by repeatedly
    decrementing the largest entry (ties to the smallest index)."""
    if not all(isinstance(v, int) and v >= 0 for v in f):
        raise DomainError("counts must be nonnegative integers")
    if not (isinstance(r, int) and r >= 1):
        raise DomainError(f"target total must be a positive integer, got {r}")
    total = sum(f)
    if total < r:
        raise DomainError(f"counts sum to {total}, below the target {r}")
    g = list(f)
    while total > r:
        idx = g.index(max(g))
        g[idx] -= 1
        total -= 1
    return tuple(g)


def split_half(mu: DiscreteMeasure, tmap: PointMap, r: int):
    """Split mu = (1/2) lam + (1/2) zeta so that pushing lam through
    tmap gives weights in multiples of 1/r.

    Construction: per fiber y with mass m_y = mu(tmap^{-1}{y}), take
    f(y) = floor(2 r m_y), reduce the counts to total r, and give lam
    mass g(y)/r on the normalized fiber restriction.  zeta = 2 mu - lam.
    """
    if not (isinstance(r, int) and r >= 1):
        raise DomainError(f"r must be a positive integer, got {r}")
    space = mu.space
    fibers: dict[int, list[int]] = {}
    for x in mu.support():
        fibers.setdefault(tmap.assignment[x], []).append(x)
    if len(fibers) > r:
        raise DomainError(
            f"map image has {len(fibers)} populated fibers, more than r={r}"
        )
    ys = sorted(fibers)
    masses = {y: sum(mu.weights[x] for x in fibers[y]) for y in ys}
    f = [int(2 * r * masses[y]) for y in ys]  # floor: arguments are >= 0
    g = reduce_counts(f, r)

    lam_w = [Fraction(0)] * len(space)
    for y, gy in zip(ys, g):
        if gy == 0:
            continue
        scale = Fraction(gy, r) / masses[y]
        for x in fibers[y]:
            lam_w[x] = mu.weights[x] * scale
    lam = DiscreteMeasure(space, lam_w)
    zeta_w = [2 * mu.weights[x] - lam_w[x] for x in range(len(space))]
    if any(w < 0 for w in zeta_w):
        raise RuntimeError("half-split produced a negative residual weight")
    zeta = DiscreteMeasure(space, zeta_w)
    return lam, zeta


@dataclass(frozen=True)
class DyadicDecomposition:
    """Levels lambda^(0)..lambda^(k) with nearest maps onto S_0..S_k."""

    k: int
    lambdas: tuple
    maps: tuple
    supports: tuple

    def __post_init__(self):
        mu = self.reconstruct()
        for j, (lam, tmap, sj) in enumerate(
            zip(self.lambdas, self.maps, self.supports)
        ):
            if len(sj) > 2 ** j:
                raise DomainError(
                    f"level {j} support has {len(sj)} sites, more than {2 ** j}"
                )
            pushed = pushforward(lam, tmap)
            if any((w * 2 ** j).denominator != 1 for w in pushed.weights):
                raise RuntimeError(
                    f"level {j} pushforward weights are not multiples of 1/2^{j}"
                )

    def mixture_weights(self):
        """Dyadic coefficients: 1/2^k for level 0, 1/2^(k-j+1) for j >= 1."""
        return [Fraction(1, 2 ** self.k)] + [
            Fraction(1, 2 ** (self.k - j + 1)) for j in range(1, self.k + 1)
        ]

    def reconstruct(self) -> DiscreteMeasure:
        return mixture(list(zip(self.mixture_weights(), self.lambdas)))


def dyadic_decompose(mu: DiscreteMeasure, supports) -> DyadicDecomposition:
    """Peel mu level by level, from S_k down to S_1; the final residual
    is lambda^(0)."""
    if not supports:
        raise DomainError("at least one support level is required")
    supports = [tuple(sorted(s)) for s in supports]
    k = len(supports) - 1
    for j, sj in enumerate(supports):
        if not sj:
            raise DomainError(f"support level {j} is empty")
        if len(sj) > 2 ** j:
            raise DomainError(
                f"support level {j} has {len(sj)} sites, more than {2 ** j}"
            )
    space = mu.space
    maps = [nearest_map(space, sj) for sj in supports]
    lambdas = [None] * (k + 1)
    residual = mu
    for j in range(k, 0, -1):
        lam, residual = split_half(residual, maps[j], 2 ** j)
        lambdas[j] = lam
    lambdas[0] = residual
    dec = DyadicDecomposition(k, tuple(lambdas), tuple(maps), tuple(supports))
    if dec.reconstruct().weights != mu.weights:
        raise RuntimeError("dyadic decomposition failed to reconstruct the measure")
    return dec


def build_uniform_quantizer(mu: DiscreteMeasure, supports, p=1.0) -> QuantizerResult:
    """Mix the level pushforwards into a quantizer with weights in
    multiples of 1/2^(k+1) and report its W_p error against mu.

    Also verifies the construction's cost bound
    error^p <= 2 sum_j 2^(-(k-j+1)) * integral d(x, S_j)^p dlambda^(j),
    which is what the mixture and transport-cost estimates give level by
    level.
    """
    if not p >= 1:
        raise DomainError(f"order p must be at least 1, got {p}")
    p = float(p)
    dec = dyadic_decompose(mu, supports)
    k = dec.k
    pushed = [pushforward(lam, tmap) for lam, tmap in zip(dec.lambdas, dec.maps)]
    nu = mixture(list(zip(dec.mixture_weights(), pushed)))
    denom = 2 ** (k + 1)
    if any((w * denom).denominator != 1 for w in nu.weights):
        raise RuntimeError(
            f"quantizer weights are not multiples of 1/2^{k + 1}"
        )
    error, _ = wasserstein(mu, nu, p)

    bound = 0.0
    for j, (lam, sj) in enumerate(zip(dec.lambdas, dec.supports)):
        moment = float(
            np.dot(lam.as_float_array(), distances_to_subset(mu.space, sj) ** p)
        )
        bound += 2.0 ** (-(k - j + 1)) * moment
    bound *= 2.0
    if error ** p > bound + 1e-9 * max(1.0, bound):
        raise RuntimeError(
            "constructed quantizer violates its own cost bound "
            f"({error ** p:g} > {bound:g})"
        )
    return QuantizerResult(error, nu.support(), nu, "exact", p, denom)

"""Quantization errors on finite metric spaces.

* ``optimal_quantization_error``: best approximation by a measure on at
  most n sites (free weights).  The optimal measure given a site set is
  the nearest-map pushforward, so exact mode reduces to subset search.
* ``uniform_quantization_error``: best approximation by a measure whose
  weights are multiples of 1/n.  Exact mode solves a mixed-integer
  transport program; a plain multiset enumeration is kept as a
  cross-check for small instances.
* ``covering_number`` and ``resolution``: epsilon-net size and the
  smallest epsilon reaching a given net size.

Candidate sites are always points of the ambient space.  Measures meant
to live in a continuum must be materialized on a grid that already
contains every site the caller wants considered.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.optimize import LinearConstraint, milp
from scipy.sparse import lil_matrix

from .errors import BudgetError, DomainError
from .measures import DiscreteMeasure, nearest_map, pushforward
from .transport import wasserstein_value

DEFAULT_BUDGET = 10 ** 6


@dataclass(frozen=True)
class QuantizerResult:
    """A quantizer witness: the achieving measure, its support, and the
    attained error.  Heuristic-mode errors are upper bounds only."""

    error: float
    support: tuple
    measure: DiscreteMeasure
    mode: str
    p: float
    n: int

    def __post_init__(self):
        if self.mode not in ("exact", "heuristic"):
            raise DomainError(f"unknown quantizer mode {self.mode!r}")

    def to_dict(self) -> dict:
        space = self.measure.space
        return {
            "error": self.error,
            "p": self.p,
            "budget": self.n,
            "mode": self.mode,
            "support_labels": [space.labels[i] for i in self.support],
            "weights": [str(w) for w in self.measure.weights],
        }


def _site_cost(dp: np.ndarray, w: np.ndarray, sites) -> float:
    """p-th power cost of quantizing onto the given site columns."""
    return float(dp[:, sites].min(axis=1) @ w)


def _check_np(n, p) -> None:
    if not (isinstance(n, int) and n >= 1):
        raise DomainError(f"site budget n must be a positive integer, got {n}")
    if not p >= 1:
        raise DomainError(f"order p must be at least 1, got {p}")


def optimal_quantization_error(
    mu: DiscreteMeasure, n: int, p=1.0, mode="exact", budget=DEFAULT_BUDGET
) -> QuantizerResult:
    """Least W_p distance from mu to any measure on at most n sites.

    Exact mode enumerates site subsets in lexicographic order (ties go
    to the earliest subset).  Heuristic mode is multi-start Lloyd
    alternation and reports an upper bound.
    """
    _check_np(n, p)
    p = float(p)
    space = mu.space
    sup = mu.support()
    if n >= len(sup):
        return QuantizerResult(0.0, sup, mu, mode, p, n)

    w = np.array([float(mu.weights[i]) for i in sup])
    dp = space.dist[np.ix_(sup, range(len(space)))] ** p

    if mode == "exact":
        size = min(n, len(space))
        count = math.comb(len(space), size)
        if count > budget:
            raise BudgetError(
                f"exact site enumeration needs {count} subsets "
                f"(budget {budget}); use heuristic mode",
                required=count,
                budget=budget,
            )
        best_cost = math.inf
        best_sites = None
        for combo in itertools.combinations(range(len(space)), size):
            cost = _site_cost(dp, w, list(combo))
            if cost < best_cost:
                best_cost = cost
                best_sites = combo
        sites = tuple(best_sites)
    elif mode == "heuristic":
        sites, best_cost = _lloyd(space, sup, w, dp, n)
    else:
        raise DomainError(f"unknown mode {mode!r}")

    tmap = nearest_map(space, sites)
    witness = pushforward(mu, tmap)
    error = max(best_cost, 0.0) ** (1.0 / p)
    return QuantizerResult(error, sites, witness, mode, p, n)


def _lloyd(space, sup, w, dp, n, starts=20, iters=60):
    """Multi-start Lloyd alternation over ambient sites; deterministic
    seeding from the start index."""
    n_space = len(space)
    best_cost = math.inf
    best_sites = None
    for s in range(starts):
        rng = np.random.default_rng(1_000_003 * s + 17)
        sites = list(rng.choice(n_space, size=min(n, n_space), replace=False))
        prev = None
        for _ in range(iters):
            assign = dp[:, sites].argmin(axis=1)
            new_sites = []
            for c in range(len(sites)):
                members = np.nonzero(assign == c)[0]
                if len(members) == 0:
                    new_sites.append(sites[c])
                    continue
                # Best ambient relocation for this cluster.
                col_costs = w[members] @ dp[members, :]
                new_sites.append(int(col_costs.argmin()))
            new_sites = sorted(set(new_sites))
            if new_sites == prev:
                break
            prev = new_sites
            sites = new_sites
        cost = _site_cost(dp, w, sites)
        if cost < best_cost:
            best_cost = cost
            best_sites = tuple(sorted(sites))
    return best_sites, best_cost


def uniform_quantization_error(
    mu: DiscreteMeasure, n: int, p=1.0, mode="exact", budget=DEFAULT_BUDGET
) -> QuantizerResult:
    """Least W_p distance from mu to any measure with weights in
    multiples of 1/n.

    Exact mode solves the joint transport/site-count integer program to
    zero gap.  Heuristic mode hill-climbs over single 1/n mass moves.
    """
    _check_np(n, p)
    p = float(p)
    space = mu.space
    if mode == "exact":
        counts = _uniform_milp(mu, n, p)
    elif mode == "heuristic":
        counts = _uniform_local_search(mu, n, p)
    else:
        raise DomainError(f"unknown mode {mode!r}")
    weights = [Fraction(c, n) for c in counts]
    nu = DiscreteMeasure(space, weights)
    error = wasserstein_value(mu, nu, p)
    return QuantizerResult(error, nu.support(), nu, mode, p, n)


def _uniform_milp(mu: DiscreteMeasure, n: int, p: float):
    """Exact site counts via a mixed-integer min-cost transport.

    Variables: plan entries pi(x, y) >= 0 for x in supp(mu), y ambient,
    and integer counts m_y >= 0 with sum m_y = n and column sums
    pi(., y) = m_y / n.
    """
    space = mu.space
    sup = mu.support()
    s, N = len(sup), len(space)
    n_plan = s * N
    n_var = n_plan + N
    cost = np.zeros(n_var)
    cost[:n_plan] = (space.dist[np.ix_(sup, range(N))] ** p).ravel()

    a = lil_matrix((s + N + 1, n_var))
    lb = np.zeros(s + N + 1)
    ub = np.zeros(s + N + 1)
    for xi in range(s):  # row sums = mu weights
        a[xi, xi * N:(xi + 1) * N] = 1.0
        lb[xi] = ub[xi] = float(mu.weights[sup[xi]])
    for y in range(N):  # n * column sum - m_y = 0
        for xi in range(s):
            a[s + y, xi * N + y] = float(n)
        a[s + y, n_plan + y] = -1.0
    a[s + N, n_plan:] = 1.0  # total count = n
    lb[s + N] = ub[s + N] = float(n)

    integrality = np.zeros(n_var)
    integrality[n_plan:] = 1
    res = milp(
        c=cost,
        constraints=LinearConstraint(a.tocsr(), lb, ub),
        integrality=integrality,
        bounds=None,
        options={"mip_rel_gap": 0.0},
    )
    if res.status != 0:
        raise RuntimeError(f"uniform quantizer MILP failed: {res.message}")
    counts = [int(round(v)) for v in res.x[n_plan:]]
    if sum(counts) != n or any(c < 0 for c in counts):
        raise RuntimeError("uniform quantizer MILP returned invalid counts")
    return counts


def uniform_error_by_enumeration(
    mu: DiscreteMeasure, n: int, p=1.0, budget=DEFAULT_BUDGET
) -> QuantizerResult:
    """Brute-force multiset enumeration of all count vectors summing to
    n.  Independent cross-check for the integer program; small instances
    only."""
    _check_np(n, p)
    p = float(p)
    space = mu.space
    N = len(space)
    total = math.comb(n + N - 1, N - 1)
    if total > budget:
        raise BudgetError(
            f"multiset enumeration needs {total} candidates (budget {budget})",
            required=total,
            budget=budget,
        )
    best = math.inf
    best_counts = None
    for cuts in itertools.combinations(range(n + N - 1), N - 1):
        counts = []
        prev = -1
        for c in cuts:
            counts.append(c - prev - 1)
            prev = c
        counts.append(n + N - 2 - prev)
        nu = DiscreteMeasure(space, [Fraction(c, n) for c in counts])
        val = wasserstein_value(mu, nu, p)
        if val < best - 1e-15:
            best = val
            best_counts = counts
    nu = DiscreteMeasure(space, [Fraction(c, n) for c in best_counts])
    return QuantizerResult(best, nu.support(), nu, "exact", p, n)


def _uniform_local_search(mu: DiscreteMeasure, n: int, p: float):
    """Greedy start plus single-unit mass moves until no improvement."""
    space = mu.space
    N = len(space)
    start = optimal_quantization_error(
        mu, min(n, len(mu.support())), p, mode="heuristic"
    )
    counts = [0] * N
    # Round the witness weights to multiples of 1/n, largest remainders first.
    raw = [w * n for w in start.measure.weights]
    counts = [int(x) for x in raw]
    remainders = sorted(
        range(N), key=lambda i: (-(raw[i] - int(raw[i])), i)
    )
    short = n - sum(counts)
    for i in remainders[:short]:
        counts[i] += 1

    def value(cs):
        nu = DiscreteMeasure(space, [Fraction(c, n) for c in cs])
        return wasserstein_value(mu, nu, p)

    best = value(counts)
    improved = True
    while improved:
        improved = False
        for src in range(N):
            if counts[src] == 0:
                continue
            for dst in range(N):
                if dst == src:
                    continue
                counts[src] -= 1
                counts[dst] += 1
                v = value(counts)
                if v < best - 1e-12:
                    best = v
                    improved = True
                    if counts[src] == 0:
                        break
                else:
                    counts[src] += 1
                    counts[dst] -= 1
    return counts


def covering_number(space, eps, mode="exact", budget=DEFAULT_BUDGET) -> int:
    """Smallest number of closed eps-balls centered at points of the
    space that cover it."""
    if eps < 0:
        raise DomainError(f"radius must be nonnegative, got {eps}")
    N = len(space)
    tol = 1e-12 * max(1.0, float(eps))
    cov = space.dist <= eps + tol
    if mode == "heuristic":
        return _greedy_cover(cov)
    if mode != "exact":
        raise DomainError(f"unknown mode {mode!r}")
    for size in range(1, N + 1):
        count = math.comb(N, size)
        if count > budget:
            raise BudgetError(
                f"covering search needs {count} subsets of size {size} "
                f"(budget {budget}); use heuristic mode",
                required=count,
                budget=budget,
            )
        for combo in itertools.combinations(range(N), size):
            if cov[:, combo].any(axis=1).all():
                return size
    raise RuntimeError("covering search exhausted without a cover")


def _greedy_cover(cov: np.ndarray) -> int:
    uncovered = np.ones(cov.shape[0], dtype=bool)
    size = 0
    while uncovered.any():
        gains = (cov & uncovered[:, None]).sum(axis=0)
        center = int(gains.argmax())
        uncovered &= ~cov[:, center]
        size += 1
    return size


def resolution(space, m: int, mode="exact", budget=DEFAULT_BUDGET) -> float:
    """Smallest radius eps with covering_number(space, eps) <= m.

    The covering number is a right-continuous step function whose
    breakpoints sit among the distinct pairwise distances, so the
    answer is one of those distances (or 0 when m >= |E|).
    """
    if not (isinstance(m, int) and m >= 1):
        raise DomainError(f"net size m must be a positive integer, got {m}")
    if m >= len(space):
        return 0.0
    values = [v for v in space.distinct_distances() if v > 0]
    lo, hi = 0, len(values) - 1
    # covering_number is nonincreasing in eps; find the first feasible value.
    while lo < hi:
        mid = (lo + hi) // 2
        if covering_number(space, values[mid], mode=mode, budget=budget) <= m:
            hi = mid
        else:
            lo = mid + 1
    return values[lo]

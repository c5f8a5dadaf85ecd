"""Exact p-Wasserstein distances and transport plans between discrete measures.

The solver is a min-cost flow on the bipartite support graph.  Marginals
are kept as exact rationals; costs d(x,y)^p are floats.  Two backends:

* a pure-Python successive-shortest-path solver with exact rational flows
  for small supports, and
* scipy's HiGHS LP for large instances, whose vertex solution is snapped
  back to exact rationals via the common denominator of the weights.

Either way, optimality is certified by a reduced-cost check with relative
tolerance ``COST_RTOL``.
"""
from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.optimize import linprog
from scipy.sparse import csr_matrix

from .errors import DomainError
from .measures import DiscreteMeasure, meet_and_residuals

COST_RTOL = 1e-9

# Support-size product below which the pure-Python exact solver is used.
_SMALL_LIMIT = 256

# Exhaustive permutation search bound for the assignment formulation.
_ASSIGNMENT_EXHAUSTIVE_LIMIT = 8


class TransportPlan:
    """An optimal coupling: rational masses on support pairs with exact
    marginals and a float p-th-power cost."""

    __slots__ = ("source", "target", "p", "entries", "cost")

    def __init__(self, source, target, p, entries: dict, cost: float):
        self.source = source
        self.target = target
        self.p = float(p)
        self.entries = dict(entries)
        self.cost = float(cost)
        self._validate()

    def _validate(self) -> None:
        space = self.source.space
        row = [Fraction(0)] * len(space)
        col = [Fraction(0)] * len(space)
        for (i, j), m in self.entries.items():
            if m < 0:
                raise DomainError("transport plan entries must be nonnegative")
            row[i] += m
            col[j] += m
        if tuple(row) != self.source.weights:
            raise DomainError("plan row sums do not match the source weights")
        if tuple(col) != self.target.weights:
            raise DomainError("plan column sums do not match the target weights")
        recomputed = sum(
            float(m) * space.dist[i, j] ** self.p for (i, j), m in self.entries.items()
        )
        if abs(recomputed - self.cost) > COST_RTOL * max(1.0, abs(self.cost)):
            raise DomainError("plan cost inconsistent with its entries")

    def distance(self) -> float:
        return self.cost ** (1.0 / self.p)


def _check_inputs(mu: DiscreteMeasure, nu: DiscreteMeasure, p) -> None:
    if mu.space != nu.space:
        raise DomainError("measures live on different spaces")
    if not p >= 1:
        raise DomainError(f"order p must be at least 1, got {p}")


def _solve_small(sup_w, dem_w, cost):
    """Successive shortest paths with exact rational flows.

    ``cost`` is an m x n list of float costs.  Returns (total_cost, flows)
    where flows maps (i, j) to a positive Fraction.
    """
    m, n = len(sup_w), len(dem_w)
    remaining_sup = list(sup_w)
    remaining_dem = list(dem_w)
    flow: dict[tuple[int, int], Fraction] = {}
    inf = math.inf

    while any(remaining_dem):
        du = [0.0 if remaining_sup[i] > 0 else inf for i in range(m)]
        dv = [inf] * n
        pv = [-1] * n  # source feeding each sink on the shortest path
        pu = [-1] * m  # sink feeding each source via a backward arc
        for _ in range(m + n + 1):
            changed = False
            for i in range(m):
                di = du[i]
                if di == inf:
                    continue
                ci = cost[i]
                for j in range(n):
                    nd = di + ci[j]
                    if nd < dv[j] - 1e-15:
                        dv[j] = nd
                        pv[j] = i
                        changed = True
            for (i, j), f in flow.items():
                if f > 0 and dv[j] != inf:
                    nd = dv[j] - cost[i][j]
                    if nd < du[i] - 1e-15:
                        du[i] = nd
                        pu[i] = j
                        changed = True
            if not changed:
                break
        else:
            raise RuntimeError("shortest-path search failed to converge")

        sink = min(
            (j for j in range(n) if remaining_dem[j] > 0),
            key=lambda j: dv[j],
        )
        if dv[sink] == inf:
            raise RuntimeError("no augmenting path found (unbalanced problem)")

        # Trace the alternating path back to a source with free supply.
        path = []  # forward arcs (i, j) and backward arcs marked by sign
        j = sink
        guard = 0
        while True:
            i = pv[j]
            path.append((i, j, +1))
            if pu[i] == -1:
                root = i
                break
            jj = pu[i]
            path.append((i, jj, -1))
            j = jj
            guard += 1
            if guard > m + n:
                raise RuntimeError("cycle detected while tracing augmenting path")

        delta = min(remaining_sup[root], remaining_dem[sink])
        for i, j, sign in path:
            if sign < 0:
                delta = min(delta, flow[(i, j)])
        for i, j, sign in path:
            if sign > 0:
                flow[(i, j)] = flow.get((i, j), Fraction(0)) + delta
            else:
                flow[(i, j)] -= delta
                if flow[(i, j)] == 0:
                    del flow[(i, j)]
        remaining_sup[root] -= delta
        remaining_dem[sink] -= delta

    total = sum(float(f) * cost[i][j] for (i, j), f in flow.items())
    return total, flow


def _solve_lp(sup_w, dem_w, cost: np.ndarray):
    """HiGHS LP backend; snaps the vertex solution to exact rationals."""
    m, n = len(sup_w), len(dem_w)
    denom = math.lcm(*(w.denominator for w in sup_w + dem_w))
    c = cost.ravel()
    rows, cols, data = [], [], []
    for i in range(m):
        for j in range(n):
            k = i * n + j
            rows.append(i)
            cols.append(k)
            data.append(1.0)
            rows.append(m + j)
            cols.append(k)
            data.append(1.0)
    a_eq = csr_matrix((data, (rows, cols)), shape=(m + n, m * n))
    b_eq = np.array([float(w) for w in sup_w] + [float(w) for w in dem_w])
    res = linprog(c, A_eq=a_eq, b_eq=b_eq, bounds=(0, None), method="highs")
    if not res.success:
        raise RuntimeError(f"LP solver failed: {res.message}")
    # Dual certificate: every reduced cost c_ij - y_i - y_j >= -tol.
    y = res.eqlin.marginals
    reduced = cost - y[:m, None] - y[m:][None, :]
    tol = 1e-7 * max(1.0, float(cost.max()))
    if float(reduced.min()) < -tol:
        raise RuntimeError(
            f"LP dual certificate failed (violation {-float(reduced.min()):g})"
        )
    scaled = res.x * denom
    units = np.rint(scaled).astype(object)
    if np.abs(scaled - units.astype(float)).max() > 1e-6 * max(1.0, denom * 1e-9) + 1e-6:
        raise RuntimeError("LP vertex solution is not integral in rational units")
    flow = {}
    for k, u in enumerate(units):
        if u:
            flow[(k // n, k % n)] = Fraction(int(u), denom)
    # Exact marginal repair is not attempted: the snap is verified instead.
    row = [Fraction(0)] * m
    col = [Fraction(0)] * n
    for (i, j), f in flow.items():
        if f < 0:
            raise RuntimeError("negative flow after rational snap")
        row[i] += f
        col[j] += f
    if row != list(sup_w) or col != list(dem_w):
        raise RuntimeError("rational snap lost the marginal constraints")
    total = sum(float(f) * cost[i, j] for (i, j), f in flow.items())
    return total, flow


def _certify(sup_w, dem_w, cost, flow) -> None:
    """Optimality check for a feasible plan: a min-cost flow is optimal
    iff the residual graph has no negative cycle, i.e. Bellman-Ford
    potentials exist.  Residual arcs: source->sink at +cost everywhere,
    sink->source at -cost where the plan carries mass."""
    m, n = len(sup_w), len(dem_w)
    scale = max(1.0, float(np.max(cost))) if m and n else 1.0
    tol = 1e-7 * scale
    u = [0.0] * m
    v = [0.0] * n
    back = [(i, j) for (i, j), f in flow.items() if f > 0]
    for rounds in range(m + n + 1):
        changed = False
        for i in range(m):
            ci = cost[i]
            ui = u[i]
            for j in range(n):
                nd = ui + ci[j]
                if nd < v[j] - tol:
                    v[j] = nd
                    changed = True
        for i, j in back:
            nd = v[j] - cost[i][j]
            if nd < u[i] - tol:
                u[i] = nd
                changed = True
        if not changed:
            return
    raise RuntimeError(
        "optimality certificate failed (negative residual cycle)"
    )


def _support_problem(mu: DiscreteMeasure, nu: DiscreteMeasure, p: float):
    sup_idx = list(mu.support())
    dem_idx = list(nu.support())
    sup_w = [mu.weights[i] for i in sup_idx]
    dem_w = [nu.weights[j] for j in dem_idx]
    cost = mu.space.dist[np.ix_(sup_idx, dem_idx)] ** p
    return sup_idx, dem_idx, sup_w, dem_w, cost


def wasserstein(mu: DiscreteMeasure, nu: DiscreteMeasure, p=1.0):
    """Optimal coupling between ``mu`` and ``nu`` for the cost d^p.

    Returns (distance, plan) where distance = (optimal cost)^(1/p).
    """
    _check_inputs(mu, nu, p)
    p = float(p)
    sup_idx, dem_idx, sup_w, dem_w, cost = _support_problem(mu, nu, p)

    if mu.weights == nu.weights:
        entries = {(i, i): mu.weights[i] for i in sup_idx}
        return 0.0, TransportPlan(mu, nu, p, entries, 0.0)

    if len(sup_idx) * len(dem_idx) <= _SMALL_LIMIT:
        total, flow = _solve_small(sup_w, dem_w, [list(r) for r in cost])
        _certify(sup_w, dem_w, [list(r) for r in cost], flow)
    else:
        total, flow = _solve_lp(sup_w, dem_w, cost)  # dual-certified inside
    entries = {(sup_idx[i], dem_idx[j]): f for (i, j), f in flow.items()}
    plan = TransportPlan(mu, nu, p, entries, total)
    return float(total) ** (1.0 / p), plan


def wasserstein_value(mu: DiscreteMeasure, nu: DiscreteMeasure, p=1.0) -> float:
    """Distance only; skips plan materialization and certification.

    Used inside enumeration and Monte-Carlo loops where the plan is not
    needed.
    """
    _check_inputs(mu, nu, p)
    p = float(p)
    if mu.weights == nu.weights:
        return 0.0
    sup_idx, dem_idx, sup_w, dem_w, cost = _support_problem(mu, nu, p)
    if len(sup_idx) == 1:
        total = sum(float(w) * cost[0, j] for j, w in enumerate(dem_w))
    elif len(dem_idx) == 1:
        total = sum(float(w) * cost[i, 0] for i, w in enumerate(sup_w))
    elif len(sup_idx) * len(dem_idx) <= _SMALL_LIMIT:
        total, _ = _solve_small(sup_w, dem_w, [list(r) for r in cost])
    else:
        total, _ = _solve_lp(sup_w, dem_w, cost)
    return max(float(total), 0.0) ** (1.0 / p)


def assignment_wasserstein(space, y: Sequence[int], z: Sequence[int], p=1.0) -> float:
    """W_p between the two uniform measures (1/r) sum delta_{y_i} and
    (1/r) sum delta_{z_i}, via the permutation formulation.

    Exhaustive over permutations for r <= 8 (the independent route);
    delegates to the flow solver otherwise.
    """
    if len(y) != len(z):
        raise DomainError("point lists must have equal length")
    r = len(y)
    if r == 0:
        raise DomainError("point lists must be nonempty")
    if not p >= 1:
        raise DomainError(f"order p must be at least 1, got {p}")
    p = float(p)
    if r <= _ASSIGNMENT_EXHAUSTIVE_LIMIT:
        d = space.dist
        best = math.inf
        for sigma in itertools.permutations(range(r)):
            total = sum(d[y[i], z[sigma[i]]] ** p for i in range(r))
            if total < best:
                best = total
        return (best / r) ** (1.0 / p)
    mu = DiscreteMeasure.uniform(space, y)
    nu = DiscreteMeasure.uniform(space, z)
    return wasserstein_value(mu, nu, p)


def wasserstein_dollar(mu: DiscreteMeasure, nu: DiscreteMeasure, p=1.0) -> float:
    """Overlap-discounted distance: remove the common part mu ^ nu,
    renormalize, take W_p of the residuals, rescale by (1-mass)^(1/p).

    Coincides with W_p when the supports are disjoint and with W_1 when
    p = 1; zero when mu = nu.
    """
    _check_inputs(mu, nu, p)
    p = float(p)
    _, mass, res_mu, res_nu = meet_and_residuals(mu, nu)
    if mass == 1:
        return 0.0
    return float(1 - mass) ** (1.0 / p) * wasserstein_value(res_mu, res_nu, p)

"""Inequality verification harness.

Every supported bound has a checker that evaluates both sides on a
concrete instance and returns BoundReports.  Sides are computed exactly
whenever feasible (enumeration oracles, exact quantizers); otherwise a
Monte-Carlo estimate with a recorded standard error is used and the
pass policy allows 4 combined sigmas of slack.  A failed report whose
sides are both exact is a hard failure: the inequalities hold
mathematically, so an exact violation means a bug.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .decompose import build_uniform_quantizer
from .empirical import (
    EmpiricalConfig,
    estimate_expected_error,
    estimate_expected_two_sample,
    exact_expected_error,
    exact_expected_two_sample,
)
from .errors import BudgetError, DomainError
from .instances import default_suite
from .measures import (
    DiscreteMeasure,
    SubMeasure,
    distances_to_subset,
    mixture,
    nearest_map,
    pushforward,
)
from .quantize import (
    optimal_quantization_error,
    resolution,
    uniform_quantization_error,
)
from .rng import make_generator
from .transport import wasserstein_dollar, wasserstein_value

DEFAULT_TRIALS = 800
SIGMA_FAIL = 4.0
SIGMA_MARGINAL = 2.0


@dataclass(frozen=True)
class Provenance:
    kind: str  # "exact" or "monte_carlo"
    std_error: float = 0.0

    def __post_init__(self):
        if self.kind not in ("exact", "monte_carlo"):
            raise DomainError(f"unknown provenance kind {self.kind!r}")
        if self.kind == "exact" and self.std_error != 0.0:
            raise DomainError("exact provenance cannot carry a standard error")

    def to_dict(self):
        d = {"kind": self.kind}
        if self.kind == "monte_carlo":
            d["std_error"] = self.std_error
        return d


EXACT = Provenance("exact")


@dataclass(frozen=True)
class BoundReport:
    bound_id: str
    instance_id: str
    lhs: float
    rhs: float
    lhs_provenance: Provenance
    rhs_provenance: Provenance
    parameters: dict = field(default_factory=dict)

    def __post_init__(self):
        # Normalize numpy scalars so reports are JSON-serializable.
        object.__setattr__(self, "lhs", float(self.lhs))
        object.__setattr__(self, "rhs", float(self.rhs))

    @property
    def combined_sigma(self) -> float:
        return math.hypot(self.lhs_provenance.std_error, self.rhs_provenance.std_error)

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    @property
    def passed(self) -> bool:
        return self.lhs <= self.rhs + SIGMA_FAIL * self.combined_sigma + 1e-12

    @property
    def marginal(self) -> bool:
        sigma = self.combined_sigma
        return self.passed and sigma > 0 and self.lhs > self.rhs + SIGMA_MARGINAL * sigma

    @property
    def hard_failure(self) -> bool:
        return not self.passed and self.combined_sigma == 0.0

    def to_dict(self) -> dict:
        return {
            "bound_id": self.bound_id,
            "instance_id": self.instance_id,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "lhs_provenance": self.lhs_provenance.to_dict(),
            "rhs_provenance": self.rhs_provenance.to_dict(),
            "slack": self.slack,
            "pass": self.passed,
            "marginal": self.marginal,
            "parameters": {k: self.parameters[k] for k in sorted(self.parameters)},
        }


def _ilog2(n: int) -> int:
    return n.bit_length() - 1


def _expected(mu, n, p, kind, seed, trials, context, dollar=False):
    """(value, std_error): exact enumeration when affordable, else MC."""
    try:
        rep = exact_expected_error(mu, n, p, kind, dollar=dollar)
    except BudgetError:
        cfg = EmpiricalConfig(n=n, trials=trials, seed=seed, p=p, estimator_kind=kind)
        rep = estimate_expected_error(mu, cfg, context=context, dollar=dollar)
    return rep.point_estimate, rep.std_error


def _prov(se: float) -> Provenance:
    return EXACT if se == 0.0 else Provenance("monte_carlo", se)


def _b_exact(mu, n, p) -> float:
    return uniform_quantization_error(mu, n, p, mode="exact").error


def _e_exact(mu, n, p) -> float:
    return optimal_quantization_error(mu, n, p, mode="exact").error


def _e_support(mu, n, p):
    return optimal_quantization_error(mu, n, p, mode="exact").support


def _e_minimax(mu, n: int) -> tuple[float, tuple]:
    """Limit q -> infinity of the optimal quantization error: the least
    possible max distance from supp(mu) to an n-site set."""
    space = mu.space
    sup = mu.support()
    if n >= len(sup):
        return 0.0, sup
    d = space.dist[np.ix_(sup, range(len(space)))]
    size = min(n, len(space))
    best = math.inf
    best_sites = None
    for combo in itertools.combinations(range(len(space)), size):
        value = float(d[:, combo].min(axis=1).max())
        if value < best:
            best = value
            best_sites = combo
    return best, best_sites


def _seeded_measure(space, seed, context) -> DiscreteMeasure:
    """Random measure with weights in multiples of 1/12."""
    gen = make_generator(seed, context)
    counts = gen.multinomial(12, [1.0 / len(space)] * len(space))
    return DiscreteMeasure(space, [Fraction(int(c), 12) for c in counts])


def _seeded_collapse(space, seed, context):
    """Nearest map onto a random half of the points."""
    gen = make_generator(seed, context)
    size = max(1, len(space) // 2)
    subset = sorted(gen.choice(len(space), size=size, replace=False).tolist())
    return nearest_map(space, subset)


# --- individual checkers ---------------------------------------------------

def _check_remark_compare(mu, iid, params, seed, trials):
    n, p = params["n"], params["p"]
    e = _e_exact(mu, n, p)
    b = _b_exact(mu, n, p)
    ev, se = _expected(mu, n, p, "mean_of_W1", seed, trials, f"{iid}/compare/{n}/{p}")
    return [
        BoundReport("remark_compare", iid, e, b, EXACT, EXACT,
                    {"n": n, "p": p, "part": "e_le_b"}),
        BoundReport("remark_compare", iid, b, ev, EXACT, _prov(se),
                    {"n": n, "p": p, "part": "b_le_E"}),
    ]


def _check_main1(mu, iid, params, seed, trials):
    n = params["n"]
    if n < 1:
        raise DomainError("main1 needs n >= 1")
    k0 = _ilog2(n)
    bs = [_b_exact(mu, 2 ** k, 1.0) for k in range(k0 + 1)]
    lower = max(math.sqrt(2 ** k / n) * bs[k] for k in range(k0 + 1))
    lower /= 22.0 * math.sqrt(math.log(2 * n))
    upper = 5.0 * sum(math.sqrt(2 ** k / n) * bs[k] for k in range(k0 + 1))
    ev, se = _expected(mu, n, 1.0, "mean_of_W1", seed, trials, f"{iid}/main1/{n}")
    reports = [
        BoundReport("main1", iid, lower, ev, EXACT, _prov(se),
                    {"n": n, "part": "lower"}),
        BoundReport("main1", iid, ev, upper, _prov(se), EXACT,
                    {"n": n, "part": "upper"}),
    ]
    if lower > 0:
        # The two bounds differ by 110 sqrt(ln 2n) times sum/max of the
        # same k0+1 terms, so the term count is the provable factor.
        ratio_cap = 110.0 * math.sqrt(math.log(2 * n)) * (k0 + 1)
        reports.append(
            BoundReport("main1", iid, upper / lower, ratio_cap, EXACT, EXACT,
                        {"n": n, "part": "ratio"})
        )
    return reports


def _check_w1decayrule(mu, iid, params, seed, trials):
    n = params["n"]
    en, se_n = _expected(mu, n, 1.0, "mean_of_W1", seed, trials, f"{iid}/decay/{n}")
    e2n, se_2n = _expected(mu, 2 * n, 1.0, "mean_of_W1", seed, trials,
                           f"{iid}/decay/{2 * n}")
    return [
        BoundReport("w1decayrule", iid, 0.5 * en, e2n,
                    _prov(0.5 * se_n), _prov(se_2n), {"n": n, "part": "lower"}),
        BoundReport("w1decayrule", iid, e2n, en,
                    _prov(se_2n), _prov(se_n), {"n": n, "part": "upper"}),
    ]


def _check_basicstability(mu, iid, params, seed, trials):
    m, n = params["m"], params["n"]
    if not 1 <= m <= n:
        raise DomainError("basicstability needs 1 <= m <= n")
    em, se_m = _expected(mu, m, 1.0, "mean_of_W1", seed, trials, f"{iid}/stab/{m}")
    en, se_n = _expected(mu, n, 1.0, "mean_of_W1", seed, trials, f"{iid}/stab/{n}")
    scale = m / n
    return [
        BoundReport("basicstability", iid, scale * em, en,
                    _prov(scale * se_m), _prov(se_n), {"m": m, "n": n}),
    ]


def _check_main2(mu, iid, params, seed, trials):
    n, p = params["n"], params["p"]
    k0 = _ilog2(n)
    rhs = 5.0 * sum(
        (2 ** k / n) ** (1.0 / (2 * p)) * _b_exact(mu, 2 ** k, p)
        for k in range(k0 + 1)
    )
    ev, se = _expected(mu, n, p, "root_mean_of_Wp_pow", seed, trials,
                       f"{iid}/main2/{n}/{p}")
    return [BoundReport("main2", iid, ev, rhs, _prov(se), EXACT, {"n": n, "p": p})]


_Q_FACTORS = (1.0, 1.25, 1.5, 2.0, 3.0, 4.0, 8.0)


def _main3_rhs(mu, k, p):
    """2 * sum_j min over the q probe grid (plus the q -> infinity term)
    of 2^((p/q - 1)(k - j)) e_{2^j, q}^p; returns (value, per-level argmin
    supports for the witness quantizer)."""
    total = 0.0
    supports = []
    for j in range(k + 1):
        best = math.inf
        best_support = None
        for f in _Q_FACTORS:
            q = f * p
            res = optimal_quantization_error(mu, 2 ** j, q, mode="exact")
            term = 2.0 ** ((p / q - 1.0) * (k - j)) * res.error ** p
            if term < best:
                best = term
                best_support = res.support
        einf, sites = _e_minimax(mu, 2 ** j)
        term = 2.0 ** (-(k - j)) * einf ** p
        if term < best:
            best = term
            best_support = sites
        total += best
        supports.append(best_support)
    return 2.0 * total, supports


def _check_main3(mu, iid, params, seed, trials):
    k, p = params["k"], params["p"]
    b = _b_exact(mu, 2 ** k, p)
    rhs, supports = _main3_rhs(mu, k, p)
    reports = [
        BoundReport("main3", iid, b ** p, rhs, EXACT, EXACT,
                    {"k": k, "p": p, "part": "bound"})
    ]
    witness = build_uniform_quantizer(mu, supports, p)
    b_next = _b_exact(mu, 2 ** (k + 1), p)
    reports.append(
        BoundReport("main3", iid, b_next, witness.error, EXACT, EXACT,
                    {"k": k, "p": p, "part": "witness"})
    )
    return reports


def _check_main4(mu, iid, params, seed, trials):
    n, p, q = params["n"], params["p"], params["q"]
    if q < p:
        raise DomainError("main4 needs q >= p")
    k0 = _ilog2(n)
    if q == 2 * p:
        def a(k):
            return (k0 + 1) * (2 ** k / n) ** (1.0 / (2 * p))
        regime = "q_eq_2p"
    else:
        c = 2.0 / abs(1.0 / (2 * p) - 1.0 / q)
        if q > 2 * p:
            def a(k):
                return c * (2 ** k / n) ** (1.0 / (2 * p))
            regime = "q_gt_2p"
        else:
            def a(k):
                return c * (2 ** k / n) ** (1.0 / p - 1.0 / q)
            regime = "q_lt_2p"
    rhs = 10.0 * sum(a(k) * _e_exact(mu, 2 ** k, q) for k in range(k0 + 1))
    ev, se = _expected(mu, n, p, "root_mean_of_Wp_pow", seed, trials,
                       f"{iid}/main4/{n}/{p}/{q}")
    return [BoundReport("main4", iid, ev, rhs, _prov(se), EXACT,
                        {"n": n, "p": p, "q": q, "regime": regime})]


def _check_supmu(mu, iid, params, seed, trials):
    n, p = params["n"], params["p"]
    space = mu.space
    k0 = _ilog2(n)
    rhs = 40.0 * p * sum(
        (2 ** k / n) ** (1.0 / (2 * p)) * resolution(space, 2 ** k)
        for k in range(k0 + 1)
    )
    ev, se = _expected(mu, n, p, "root_mean_of_Wp_pow", seed, trials,
                       f"{iid}/supmu/{n}/{p}")
    return [BoundReport("supmu", iid, ev, rhs, _prov(se), EXACT, {"n": n, "p": p})]


def separated_uniform(space, r: int) -> DiscreteMeasure:
    """Uniform measure on max(r, 2) points with pairwise distances at
    least the r-site resolution of the space.

    A maximal such set is a cover at any smaller radius, so it has more
    than r points; greedy selection therefore always finds enough.
    """
    hr = resolution(space, r)
    chosen: list[int] = []
    for i in range(len(space)):
        if all(space.dist[i, j] >= hr - 1e-12 for j in chosen):
            chosen.append(i)
    need = max(r, 2)
    if len(chosen) < need:
        raise RuntimeError(
            f"separated-set construction found only {len(chosen)} of {need} points"
        )
    return DiscreteMeasure.uniform(space, chosen[:need])


def _check_supmu_lower(mu, iid, params, seed, trials):
    n, p, r = params["n"], params["p"], params["r"]
    space = mu.space
    if not 1 <= r <= n:
        raise DomainError("supmu_lower needs 1 <= r <= n")
    hr = resolution(space, r)
    lhs = 0.25 * (r / n) ** (1.0 / (2 * p)) * hr
    sep = separated_uniform(space, r)
    ev, se = _expected(sep, n, p, "root_mean_of_Wp_pow", seed, trials,
                       f"{iid}/supmu_lower/{n}/{p}/{r}")
    return [BoundReport("supmu_lower", iid, lhs, ev, EXACT, _prov(se),
                        {"n": n, "p": p, "r": r})]


def _check_w1lb(mu, iid, params, seed, trials):
    m, n = params["m"], params["n"]
    en, se_n = _expected(mu, n, 1.0, "mean_of_W1", seed, trials, f"{iid}/w1lb/{n}")
    emn, se_mn = _expected(mu, m * n, 1.0, "mean_of_W1", seed, trials,
                           f"{iid}/w1lb/{m * n}")
    scale = 1.0 / (11.0 * math.sqrt(m * math.log(2 * m * n)))
    return [BoundReport("w1lb", iid, scale * en, emn,
                        _prov(scale * se_n), _prov(se_mn), {"m": m, "n": n})]


def _check_chainingwp(mu, iid, params, seed, trials):
    r, n, p = params["r"], params["n"], params["p"]
    space = mu.space
    if len(space) < 2 * r:
        raise DomainError(f"chainingwp needs at least {2 * r} points")
    ys = list(range(2 * r))
    gen = make_generator(seed, f"{iid}/chainingwp/{r}/{n}/{p}")
    zs = gen.choice(len(space), size=r, replace=True).tolist()
    big = DiscreteMeasure.uniform(space, ys)
    small = DiscreteMeasure.uniform(space, zs)  # multiset: weights sum per point
    lhs, se_l = _expected(big, n, p, "root_mean_of_Wp_pow", seed, trials,
                          f"{iid}/chainingwp/big/{r}/{n}/{p}", dollar=True)
    tail, se_r = _expected(small, n, p, "root_mean_of_Wp_pow", seed, trials,
                           f"{iid}/chainingwp/small/{r}/{n}/{p}", dollar=True)
    wp = wasserstein_value(big, small, p)
    rhs = tail + 2.0 ** (1.0 - 1.0 / p) * (2 * r / n) ** (1.0 / (2 * p)) * wp
    return [BoundReport("chainingwp", iid, lhs, rhs, _prov(se_l), _prov(se_r),
                        {"r": r, "n": n, "p": p})]


def _move_cost(space, m, tmap, p) -> float:
    return sum(
        float(w) * space.dist[x, tmap.assignment[x]] ** p
        for x, w in enumerate(m.weights)
        if w
    ) ** (1.0 / p)


def _check_mutmu(mu, iid, params, seed, trials):
    p = params["p"]
    tmap = _seeded_collapse(mu.space, seed, f"{iid}/mutmu/{p}")
    lhs = wasserstein_value(mu, pushforward(mu, tmap), p)
    rhs = _move_cost(mu.space, mu, tmap, p)
    return [BoundReport("mutmu", iid, lhs, rhs, EXACT, EXACT, {"p": p})]


def _check_mixlemma(mu, iid, params, seed, trials):
    p = params["p"]
    space = mu.space
    ts = [Fraction(1, 2), Fraction(1, 3), Fraction(1, 6)]
    mus, nus = [], []
    for j in range(3):
        mus.append(_seeded_measure(space, seed, f"{iid}/mixlemma/mu/{j}/{p}"))
        nus.append(_seeded_measure(space, seed, f"{iid}/mixlemma/nu/{j}/{p}"))
    lhs = wasserstein_value(
        mixture(list(zip(ts, mus))), mixture(list(zip(ts, nus))), p
    ) ** p
    rhs = sum(float(t) * wasserstein_value(a, b, p) ** p
              for t, a, b in zip(ts, mus, nus))
    return [BoundReport("mixlemma", iid, lhs, rhs, EXACT, EXACT, {"p": p})]


def _check_2samples(mu, iid, params, seed, trials):
    n, p = params["n"], params["p"]
    try:
        one = exact_expected_error(mu, n, p, "root_mean_of_Wp_pow")
        two = exact_expected_two_sample(mu, n, p, "root_mean_of_Wp_pow")
        a, se_a = one.point_estimate, 0.0
        b, se_b = two.point_estimate, 0.0
    except BudgetError:
        cfg = EmpiricalConfig(n=n, trials=trials, seed=seed, p=p,
                              estimator_kind="root_mean_of_Wp_pow")
        one = estimate_expected_error(mu, cfg, context=f"{iid}/2s/one/{n}/{p}")
        two = estimate_expected_two_sample(mu, cfg, context=f"{iid}/2s/two/{n}/{p}")
        a, se_a = one.point_estimate, one.std_error
        b, se_b = two.point_estimate, two.std_error
    return [
        BoundReport("2samples", iid, a, b, _prov(se_a), _prov(se_b),
                    {"n": n, "p": p, "part": "lower"}),
        BoundReport("2samples", iid, b, 2.0 * a, _prov(se_b), _prov(2.0 * se_a),
                    {"n": n, "p": p, "part": "upper"}),
    ]


def _check_easybound(mu, iid, params, seed, trials):
    n, p = params["n"], params["p"]
    tmap = _seeded_collapse(mu.space, seed, f"{iid}/easybound/{n}/{p}")
    other = pushforward(mu, tmap)
    a, se_a = _expected(mu, n, p, "root_mean_of_Wp_pow", seed, trials,
                        f"{iid}/easy/a/{n}/{p}")
    b, se_b = _expected(other, n, p, "root_mean_of_Wp_pow", seed, trials,
                        f"{iid}/easy/b/{n}/{p}")
    gap = 2.0 * wasserstein_value(mu, other, p)
    return [
        BoundReport("easybound", iid, a, b + gap, _prov(se_a), _prov(se_b),
                    {"n": n, "p": p, "part": "forward"}),
        BoundReport("easybound", iid, b, a + gap, _prov(se_b), _prov(se_a),
                    {"n": n, "p": p, "part": "reverse"}),
    ]


def _discounted_distance(mu, nu, zeta: SubMeasure, p: float) -> float:
    """(1 - zeta(E))^(1/p) W_p of the zeta-discounted normalizations."""
    mass = zeta.mass
    if mass == 1:
        return 0.0
    rem = 1 - mass
    res_mu = DiscreteMeasure(mu.space,
                             [(a - z) / rem for a, z in zip(mu.weights, zeta.weights)])
    res_nu = DiscreteMeasure(nu.space,
                             [(b - z) / rem for b, z in zip(nu.weights, zeta.weights)])
    return float(rem) ** (1.0 / p) * wasserstein_value(res_mu, res_nu, p)


def _check_dollar2(mu, iid, params, seed, trials):
    p = params["p"]
    space = mu.space
    nu = _seeded_measure(space, seed, f"{iid}/dollar2/{p}")
    meet = SubMeasure(space, [min(a, b) for a, b in zip(mu.weights, nu.weights)])
    half = SubMeasure(space, [w / 2 for w in meet.weights])
    reports = [
        BoundReport("dollar2", iid,
                    _discounted_distance(mu, nu, half, p),
                    _discounted_distance(mu, nu, meet, p),
                    EXACT, EXACT, {"p": p, "part": "half_vs_full"}),
        BoundReport("dollar2", iid,
                    wasserstein_value(mu, nu, p),
                    wasserstein_dollar(mu, nu, p),
                    EXACT, EXACT, {"p": p, "part": "wp_le_dollar"}),
    ]
    return reports


def _check_transbound1(mu, iid, params, seed, trials):
    p = params["p"]
    space = mu.space
    nu = _seeded_measure(space, seed, f"{iid}/transbound1/{p}")
    tmap = _seeded_collapse(space, seed, f"{iid}/transbound1/map/{p}")
    lhs = wasserstein_value(mu, nu, p)
    rhs = (
        wasserstein_value(pushforward(mu, tmap), pushforward(nu, tmap), p)
        + _move_cost(space, mu, tmap, p)
        + _move_cost(space, nu, tmap, p)
    )
    return [BoundReport("transbound1", iid, lhs, rhs, EXACT, EXACT, {"p": p})]


def _check_basicbound(mu, iid, params, seed, trials):
    p = params["p"]
    space = mu.space
    nu = _seeded_measure(space, seed, f"{iid}/basicbound/{p}")
    tmap = _seeded_collapse(space, seed, f"{iid}/basicbound/map/{p}")
    lhs = wasserstein_dollar(mu, nu, p)
    diff_cost = sum(
        float(abs(a - b)) * space.dist[x, tmap.assignment[x]] ** p
        for x, (a, b) in enumerate(zip(mu.weights, nu.weights))
    )
    rhs = (
        wasserstein_dollar(pushforward(mu, tmap), pushforward(nu, tmap), p)
        + 2.0 ** (1.0 - 1.0 / p) * diff_cost ** (1.0 / p)
    )
    return [BoundReport("basicbound", iid, lhs, rhs, EXACT, EXACT, {"p": p})]


_CHECKERS = {
    "remark_compare": _check_remark_compare,
    "main1": _check_main1,
    "w1decayrule": _check_w1decayrule,
    "basicstability": _check_basicstability,
    "main2": _check_main2,
    "main3": _check_main3,
    "main4": _check_main4,
    "supmu": _check_supmu,
    "supmu_lower": _check_supmu_lower,
    "w1lb": _check_w1lb,
    "chainingwp": _check_chainingwp,
    "mutmu": _check_mutmu,
    "mixlemma": _check_mixlemma,
    "2samples": _check_2samples,
    "easybound": _check_easybound,
    "dollar2": _check_dollar2,
    "transbound1": _check_transbound1,
    "basicbound": _check_basicbound,
}

KNOWN_BOUNDS = tuple(sorted(_CHECKERS))


def check_bound(bound_id, instance, params, instance_id="instance",
                seed=0, trials=DEFAULT_TRIALS):
    """Evaluate one bound on one instance; returns a list of
    BoundReports (several when the statement has multiple parts)."""
    if bound_id not in _CHECKERS:
        raise DomainError(
            f"unknown bound id {bound_id!r}; known: {', '.join(KNOWN_BOUNDS)}"
        )
    return _CHECKERS[bound_id](instance, instance_id, dict(params), seed, trials)


def _suite_plan(mu):
    """Default (bound_id, params) grid for one suite instance."""
    size = len(mu.space)
    plan = []
    for n, p in [(2, 1.0), (4, 2.0)]:
        plan.append(("remark_compare", {"n": n, "p": p}))
    for n in (4, 8):
        plan.append(("main1", {"n": n}))
    plan.append(("w1decayrule", {"n": 4}))
    plan.append(("basicstability", {"m": 2, "n": 6}))
    plan.append(("main2", {"n": 4, "p": 2.0}))
    for k in (0, 1, 2):
        for p in (1.0, 2.0):
            plan.append(("main3", {"k": k, "p": p}))
    for p, q in [(1.0, 4.0), (1.0, 2.0), (2.0, 3.0)]:
        plan.append(("main4", {"n": 4, "p": p, "q": q}))
    for p in (1.0, 2.0):
        plan.append(("supmu", {"n": 4, "p": p}))
    for r in sorted({2, size // 2, size - 1}):
        if 1 <= r <= 8:
            plan.append(("supmu_lower", {"n": 8, "p": 1.0, "r": r}))
    plan.append(("w1lb", {"m": 2, "n": 4}))
    if size >= 4:
        for p in (1.0, 2.0):
            plan.append(("chainingwp", {"r": 2, "n": 8, "p": p}))
    for p in (1.0, 2.0):
        plan.append(("mutmu", {"p": p}))
        plan.append(("mixlemma", {"p": p}))
        plan.append(("2samples", {"n": 3, "p": p}))
        plan.append(("easybound", {"n": 4, "p": p}))
        plan.append(("dollar2", {"p": p}))
        plan.append(("transbound1", {"p": p}))
        plan.append(("basicbound", {"p": p}))
    return plan


def run_suite(suite=None, bound_ids=None, seed=0, trials=DEFAULT_TRIALS):
    """Run the default (or restricted) check plan over the instance
    suite; reports are sorted deterministically."""
    if suite is None:
        suite = default_suite()
    reports = []
    for iid in sorted(suite):
        mu = suite[iid]
        for bound_id, params in _suite_plan(mu):
            if bound_ids is not None and bound_id not in bound_ids:
                continue
            reports.extend(
                check_bound(bound_id, mu, params, instance_id=iid,
                            seed=seed, trials=trials)
            )
    reports.sort(
        key=lambda r: (r.bound_id, r.instance_id, sorted(r.parameters.items()))
    )
    return reports


@dataclass(frozen=True)
class ScalingStudy:
    family: str
    params: dict
    rows: tuple  # of dicts: {n, series, value, std_error}
    slopes: dict  # series -> fitted log-log slope

    def to_rows(self):
        return [dict(r) for r in self.rows]


def _fit_slope(pairs):
    pairs = [(n, v) for n, v in pairs if v > 0]
    if len(pairs) < 2:
        return float("nan")
    xs = np.log([n for n, _ in pairs])
    ys = np.log([v for _, v in pairs])
    return float(np.polyfit(xs, ys, 1)[0])


def scaling_study(family, params=None, seed=0):
    """Decay-rate study: tabulate error measures over a grid of sample
    sizes and fit log-log slopes."""
    params = dict(params or {})
    if family == "two_point":
        mu = default_suite()["two_point_uniform"]
        ns = params.get("ns", [2 ** k for k in range(1, 7)])
        rows = []
        for n in ns:
            rep = exact_expected_error(mu, n, 1.0, "mean_of_W1")
            rows.append({"n": n, "series": "expected_w1",
                         "value": rep.point_estimate, "std_error": 0.0})
        slopes = {"expected_w1": _fit_slope(
            [(r["n"], r["value"]) for r in rows])}
        return ScalingStudy(family, params, tuple(rows), slopes)

    if family == "mixture_example":
        from .instances import mixture_instance

        g = params.get("g", 10)
        alpha = Fraction(params.get("alpha", Fraction(1, 10)))
        ns = params.get("ns", [2 ** k for k in range(6, 13)])
        base_trials = params.get("trials", 24)
        mu = mixture_instance(g=g, alpha=alpha)
        supp_size = len(mu.support())
        rows = []
        min_trials = max(6, base_trials // 8)
        for n in ns:
            trials = max(min_trials, int(base_trials * 128 / max(n, 128)))
            cfg = EmpiricalConfig(n=n, trials=trials, seed=seed, p=1.0,
                                  estimator_kind="mean_of_W1")
            rep = estimate_expected_error(mu, cfg, context=f"mixture/{g}/{n}")
            rows.append({"n": n, "series": "expected_w1",
                         "value": rep.point_estimate,
                         "std_error": rep.std_error})
            if n < supp_size:
                e = optimal_quantization_error(mu, n, 1.0, mode="heuristic")
                rows.append({"n": n, "series": "e_heuristic",
                             "value": e.error, "std_error": 0.0})
        slopes = {
            series: _fit_slope(
                [(r["n"], r["value"]) for r in rows if r["series"] == series]
            )
            for series in ("expected_w1", "e_heuristic")
        }
        study_params = dict(params)
        study_params.update({"g": g, "alpha": str(alpha),
                             "discretization": f"cube grid {g}^3 cell centers"})
        return ScalingStudy(family, study_params, tuple(rows), slopes)

    if family == "unit_square":
        from .instances import unit_square_instance

        g = params.get("g", 8)
        ns = params.get("ns", [2 ** k for k in range(2, 9)])
        trials = params.get("trials", 200)
        mu = unit_square_instance(g=g)
        rows = []
        for n in ns:
            cfg = EmpiricalConfig(n=n, trials=trials, seed=seed, p=1.0,
                                  estimator_kind="mean_of_W1")
            rep = estimate_expected_error(mu, cfg, context=f"square/{g}/{n}")
            rows.append({"n": n, "series": "expected_w1",
                         "value": rep.point_estimate,
                         "std_error": rep.std_error})
        slopes = {"expected_w1": _fit_slope(
            [(r["n"], r["value"]) for r in rows])}
        study_params = dict(params)
        study_params.update({"g": g,
                             "discretization": f"unit square grid {g}^2"})
        return ScalingStudy(family, study_params, tuple(rows), slopes)

    raise DomainError(f"unknown scaling family {family!r}")

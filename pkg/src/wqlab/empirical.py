"""Expected distance between a measure and its empirical samples.

Two routes to E[W_p(mu_n, mu)] style quantities:

* exact enumeration of all multinomial outcomes of n draws (rational
  probabilities, float distances), feasible for small support x n;
* Monte-Carlo over counter-based random streams, with a CLT standard
  error (delta method for the root-mean estimator).

Both support the plain distance and the overlap-discounted variant, and
both estimator kinds: the mean of W_p and the p-th root of the mean of
W_p^p.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import BudgetError, DomainError
from .measures import DiscreteMeasure
from .rng import CategoricalSampler, make_generator
from .transport import wasserstein_dollar, wasserstein_value

ESTIMATOR_KINDS = ("mean_of_W1", "root_mean_of_Wp_pow")
EXACT_OUTCOME_BUDGET = 10 ** 5


@dataclass(frozen=True)
class EmpiricalConfig:
    n: int
    trials: int
    seed: int
    p: float = 1.0
    estimator_kind: str = "mean_of_W1"

    def __post_init__(self):
        if self.n < 1:
            raise DomainError(f"sample size must be positive, got {self.n}")
        if self.trials < 1:
            raise DomainError(f"trial count must be positive, got {self.trials}")
        if not self.p >= 1:
            raise DomainError(f"order p must be at least 1, got {self.p}")
        if self.estimator_kind not in ESTIMATOR_KINDS:
            raise DomainError(f"unknown estimator kind {self.estimator_kind!r}")


@dataclass(frozen=True)
class EstimateReport:
    point_estimate: float
    std_error: float
    trials: int
    exact: bool
    n: int
    p: float
    estimator_kind: str
    seed: int | None = None

    def __post_init__(self):
        if self.exact and self.std_error != 0.0:
            raise DomainError("exact estimates must have zero standard error")

    def to_dict(self) -> dict:
        return {
            "estimate": self.point_estimate,
            "std_error": self.std_error,
            "trials": self.trials,
            "n": self.n,
            "p": self.p,
            "estimator_kind": self.estimator_kind,
            "seed": self.seed,
            "exact": self.exact,
        }


def _distance(mu, nu, p, dollar):
    if dollar:
        return wasserstein_dollar(mu, nu, p)
    return wasserstein_value(mu, nu, p)


def sample_empirical(
    mu: DiscreteMeasure, n: int, seed: int, trial: int = 0, context: str = "empirical"
) -> DiscreteMeasure:
    """One empirical measure (1/n) sum of n i.i.d. draws from mu,
    reproducible from (seed, context, trial)."""
    if n < 1:
        raise DomainError(f"sample size must be positive, got {n}")
    gen = make_generator(seed, context, trial)
    sampler = CategoricalSampler(mu.weights)
    draws = sampler.sample(gen, n)
    weights = [Fraction(0)] * len(mu.space)
    share = Fraction(1, n)
    for i in draws:
        weights[int(i)] += share
    return DiscreteMeasure(mu.space, weights)


def _multinomial_outcomes(weights, n: int):
    """Yield (counts, exact probability) over all outcomes of n draws
    from the positive-weight atoms."""
    sup = [i for i, w in enumerate(weights) if w > 0]
    s = len(sup)
    n_fact = math.factorial(n)
    for cuts in itertools.combinations(range(n + s - 1), s - 1):
        counts = []
        prev = -1
        for c in cuts:
            counts.append(c - prev - 1)
            prev = c
        counts.append(n + s - 2 - prev)
        prob = Fraction(n_fact)
        for i, c in zip(sup, counts):
            prob *= weights[i] ** c
            prob /= math.factorial(c)
        yield dict(zip(sup, counts)), prob


def _outcome_count(mu: DiscreteMeasure, n: int) -> int:
    s = len(mu.support())
    return math.comb(n + s - 1, s - 1)


def _finish(mean_value, p, kind, trials, n, exact, se_mean=0.0, seed=None):
    if kind == "mean_of_W1":
        point, se = mean_value, se_mean
    else:
        point = max(mean_value, 0.0) ** (1.0 / p)
        if mean_value > 0 and se_mean > 0:
            se = (1.0 / p) * mean_value ** (1.0 / p - 1.0) * se_mean
        else:
            se = 0.0
    return EstimateReport(point, se if not exact else 0.0, trials, exact, n, p, kind, seed)


def exact_expected_error(
    mu: DiscreteMeasure,
    n: int,
    p=1.0,
    estimator_kind: str = "mean_of_W1",
    dollar: bool = False,
    budget: int = EXACT_OUTCOME_BUDGET,
) -> EstimateReport:
    """Exact E[W_p(mu_n, mu)] or (E[W_p(mu_n, mu)^p])^(1/p) by summing
    over all multinomial outcomes."""
    if n < 1:
        raise DomainError(f"sample size must be positive, got {n}")
    if not p >= 1:
        raise DomainError(f"order p must be at least 1, got {p}")
    if estimator_kind not in ESTIMATOR_KINDS:
        raise DomainError(f"unknown estimator kind {estimator_kind!r}")
    count = _outcome_count(mu, n)
    if count > budget:
        raise BudgetError(
            f"exact expectation needs {count} outcomes (budget {budget}); "
            "use the Monte-Carlo estimator",
            required=count,
            budget=budget,
        )
    p = float(p)
    total = 0.0
    for counts, prob in _multinomial_outcomes(mu.weights, n):
        weights = [Fraction(0)] * len(mu.space)
        for i, c in counts.items():
            weights[i] = Fraction(c, n)
        nu = DiscreteMeasure(mu.space, weights)
        value = _distance(mu, nu, p, dollar)
        if estimator_kind == "root_mean_of_Wp_pow":
            value = value ** p
        total += float(prob) * value
    return _finish(total, p, estimator_kind, count, n, exact=True)


def estimate_expected_error(
    mu: DiscreteMeasure,
    cfg: EmpiricalConfig,
    context: str = "empirical",
    dollar: bool = False,
) -> EstimateReport:
    """Monte-Carlo estimate over cfg.trials independent replicates."""
    p = float(cfg.p)
    sampler = CategoricalSampler(mu.weights)
    share = Fraction(1, cfg.n)
    values = np.empty(cfg.trials)
    for t in range(cfg.trials):
        gen = make_generator(cfg.seed, context, t)
        draws = sampler.sample(gen, cfg.n)
        weights = [Fraction(0)] * len(mu.space)
        for i in draws:
            weights[int(i)] += share
        nu = DiscreteMeasure(mu.space, weights)
        value = _distance(mu, nu, p, dollar)
        values[t] = value ** p if cfg.estimator_kind == "root_mean_of_Wp_pow" else value
    mean = float(values.mean())
    se = float(values.std(ddof=1) / math.sqrt(cfg.trials)) if cfg.trials > 1 else 0.0
    return _finish(
        mean, p, cfg.estimator_kind, cfg.trials, cfg.n, exact=False,
        se_mean=se, seed=cfg.seed,
    )


def exact_expected_two_sample(
    mu: DiscreteMeasure,
    n: int,
    p=1.0,
    estimator_kind: str = "mean_of_W1",
    dollar: bool = False,
    budget: int = EXACT_OUTCOME_BUDGET,
) -> EstimateReport:
    """Exact expected distance between two independent empirical
    measures of mu; enumerates outcome pairs, so budgets are quadratic."""
    count = _outcome_count(mu, n)
    if count * count > budget:
        raise BudgetError(
            f"two-sample enumeration needs {count * count} outcome pairs "
            f"(budget {budget})",
            required=count * count,
            budget=budget,
        )
    p = float(p)
    outcomes = []
    for counts, prob in _multinomial_outcomes(mu.weights, n):
        weights = [Fraction(0)] * len(mu.space)
        for i, c in counts.items():
            weights[i] = Fraction(c, n)
        outcomes.append((DiscreteMeasure(mu.space, weights), prob))
    total = 0.0
    for nu1, p1 in outcomes:
        for nu2, p2 in outcomes:
            value = _distance(nu1, nu2, p, dollar)
            if estimator_kind == "root_mean_of_Wp_pow":
                value = value ** p
            total += float(p1 * p2) * value
    return _finish(total, p, estimator_kind, count * count, n, exact=True)


def estimate_expected_two_sample(
    mu: DiscreteMeasure,
    cfg: EmpiricalConfig,
    context: str = "two-sample",
    dollar: bool = False,
) -> EstimateReport:
    """Monte-Carlo expected distance between independent empirical
    pairs; the two replicates per trial use distinct stream contexts."""
    p = float(cfg.p)
    sampler = CategoricalSampler(mu.weights)
    share = Fraction(1, cfg.n)
    values = np.empty(cfg.trials)
    for t in range(cfg.trials):
        pair = []
        for side in ("a", "b"):
            gen = make_generator(cfg.seed, f"{context}/{side}", t)
            draws = sampler.sample(gen, cfg.n)
            weights = [Fraction(0)] * len(mu.space)
            for i in draws:
                weights[int(i)] += share
            pair.append(DiscreteMeasure(mu.space, weights))
        value = _distance(pair[0], pair[1], p, dollar)
        values[t] = value ** p if cfg.estimator_kind == "root_mean_of_Wp_pow" else value
    mean = float(values.mean())
    se = float(values.std(ddof=1) / math.sqrt(cfg.trials)) if cfg.trials > 1 else 0.0
    return _finish(
        mean, p, cfg.estimator_kind, cfg.trials, cfg.n, exact=False,
        se_mean=se, seed=cfg.seed,
    )

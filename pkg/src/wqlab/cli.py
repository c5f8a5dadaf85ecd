"""Command line front end.

Exit codes: 0 success, 1 domain error, 2 budget error, 3 exact-side
bound failure in verify, 64 usage error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from .decompose import build_uniform_quantizer, dyadic_decompose
from .empirical import (
    EmpiricalConfig,
    estimate_expected_error,
    exact_expected_error,
)
from .errors import BudgetError, DomainError
from .quantize import (
    covering_number,
    optimal_quantization_error,
    resolution,
    uniform_quantization_error,
)
from .serialize import (
    decomposition_to_dict,
    load_measure,
    load_space,
    save_plan,
    save_reports,
    save_study,
)
from .transport import wasserstein, wasserstein_dollar
from .verify import check_bound, run_suite, scaling_study

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_BUDGET = 2
EXIT_BOUND_FAILURE = 3
EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _default_seed() -> int:
    return int(os.environ.get("WQLAB_SEED", "0"))


def _int_grid(text: str):
    return [int(v) for v in text.split(",") if v]


def _parse_supports(text: str, space):
    """Levels separated by ';', labels within a level by ','."""
    levels = []
    for chunk in text.split(";"):
        labels = [s.strip() for s in chunk.split(",") if s.strip()]
        levels.append([space.index(lab) for lab in labels])
    return levels


def build_parser() -> _Parser:
    parser = _Parser(prog="wqlab", description=__doc__)
    parser.add_argument("--seed", type=int, default=None,
                        help="RNG seed (default: WQLAB_SEED env or 0)")
    sub = parser.add_subparsers(dest="command")

    def add(name, **kw):
        p = sub.add_parser(name, **kw)
        p.add_argument("--out", default=None, help="output directory")
        return p

    p = add("wasserstein", help="p-Wasserstein distance and optimal plan")
    p.add_argument("--mu", required=True)
    p.add_argument("--nu", required=True)
    p.add_argument("--p", type=float, default=1.0)

    p = add("dollar", help="overlap-discounted Wasserstein distance")
    p.add_argument("--mu", required=True)
    p.add_argument("--nu", required=True)
    p.add_argument("--p", type=float, default=1.0)

    for name, helptext in (
        ("quantize-e", "optimal quantization error (free weights)"),
        ("quantize-b", "optimal uniform quantization error (weights k/n)"),
    ):
        p = add(name, help=helptext)
        p.add_argument("--mu", required=True)
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--p", type=float, default=1.0)
        p.add_argument("--mode", choices=["exact", "heuristic"], default="exact")
        p.add_argument("--budget-enum", type=int, default=10 ** 6)

    p = add("covering", help="epsilon covering number of a space")
    p.add_argument("--space", required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--mode", choices=["exact", "heuristic"], default="exact")
    p.add_argument("--budget-enum", type=int, default=10 ** 6)

    p = add("resolution", help="smallest radius reaching a covering size")
    p.add_argument("--space", required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--budget-enum", type=int, default=10 ** 6)

    p = add("decompose", help="dyadic decomposition of a measure")
    p.add_argument("--mu", required=True)
    p.add_argument("--supports", required=True,
                   help="site labels: levels split by ';', labels by ','")

    p = add("build-quantizer", help="uniform quantizer from a dyadic decomposition")
    p.add_argument("--mu", required=True)
    p.add_argument("--supports", required=True)
    p.add_argument("--p", type=float, default=1.0)

    p = add("empirical", help="expected empirical-measure error")
    p.add_argument("--mu", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, default=1.0)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--estimator", choices=["mean_of_W1", "root_mean_of_Wp_pow"],
                   default="mean_of_W1")
    p.add_argument("--exact", action="store_true",
                   help="force the enumeration oracle")
    p.add_argument("--budget-outcomes", type=int, default=10 ** 5)

    p = add("verify", help="run the bound-verification suite")
    p.add_argument("--suite", default="default")
    p.add_argument("--bounds", default=None, help="comma list of bound ids")
    p.add_argument("--trials", type=int, default=800)

    p = add("scaling", help="decay-rate scaling study")
    p.add_argument("--family", required=True,
                   choices=["two_point", "mixture_example", "unit_square"])
    p.add_argument("--g", type=int, default=None, help="grid resolution")
    p.add_argument("--alpha", default=None, help="mixture mass on the cube")
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--n", dest="ns", type=_int_grid, default=None,
                   help="comma grid of sample sizes")

    return parser


def _out_dir(args) -> Path:
    out = Path(args.out) if args.out else Path(".")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _cmd_wasserstein(args, seed):
    mu = load_measure(args.mu)
    nu = load_measure(args.nu)
    d, plan = wasserstein(mu, nu, args.p)
    print(f"{d:.10f}")
    save_plan(plan, _out_dir(args) / "plan.csv")
    return EXIT_OK


def _cmd_dollar(args, seed):
    mu = load_measure(args.mu)
    nu = load_measure(args.nu)
    print(f"{wasserstein_dollar(mu, nu, args.p):.10f}")
    return EXIT_OK


def _cmd_quantize(args, seed, kind):
    mu = load_measure(args.mu)
    func = optimal_quantization_error if kind == "e" else uniform_quantization_error
    res = func(mu, args.n, args.p, mode=args.mode, budget=args.budget_enum)
    print(f"{res.error:.10f}")
    if args.out:
        with open(_out_dir(args) / f"quantizer_{kind}.json", "w") as f:
            json.dump(res.to_dict(), f, indent=2)
            f.write("\n")
    return EXIT_OK


def _cmd_covering(args, seed):
    space = load_space(args.space)
    print(covering_number(space, args.eps, mode=args.mode, budget=args.budget_enum))
    return EXIT_OK


def _cmd_resolution(args, seed):
    space = load_space(args.space)
    print(f"{resolution(space, args.m, budget=args.budget_enum):.10f}")
    return EXIT_OK


def _cmd_decompose(args, seed):
    mu = load_measure(args.mu)
    supports = _parse_supports(args.supports, mu.space)
    dec = dyadic_decompose(mu, supports)
    doc = decomposition_to_dict(dec)
    with open(_out_dir(args) / "decomposition.json", "w") as f:
        json.dump(doc, f, indent=2)
        f.write("\n")
    print(f"levels: {dec.k + 1}")
    return EXIT_OK


def _cmd_build_quantizer(args, seed):
    mu = load_measure(args.mu)
    supports = _parse_supports(args.supports, mu.space)
    res = build_uniform_quantizer(mu, supports, args.p)
    print(f"{res.error:.10f}")
    if args.out:
        with open(_out_dir(args) / "quantizer_built.json", "w") as f:
            json.dump(res.to_dict(), f, indent=2)
            f.write("\n")
    return EXIT_OK


def _cmd_empirical(args, seed):
    mu = load_measure(args.mu)
    if args.exact:
        rep = exact_expected_error(mu, args.n, args.p, args.estimator,
                                   budget=args.budget_outcomes)
    else:
        cfg = EmpiricalConfig(n=args.n, trials=args.trials, seed=seed,
                              p=args.p, estimator_kind=args.estimator)
        rep = estimate_expected_error(mu, cfg)
    print(f"{rep.point_estimate:.10f} +/- {rep.std_error:.10f}")
    if args.out:
        with open(_out_dir(args) / "empirical.json", "w") as f:
            json.dump(rep.to_dict(), f, indent=2)
            f.write("\n")
    return EXIT_OK


def _cmd_verify(args, seed):
    if args.suite != "default":
        raise DomainError(f"unknown suite {args.suite!r}")
    bound_ids = set(args.bounds.split(",")) if args.bounds else None
    reports = run_suite(bound_ids=bound_ids, seed=seed, trials=args.trials)
    out = _out_dir(args)
    save_reports(reports, out, seed=seed)
    from .plotting import plot_report_summary

    plot_report_summary(reports, out / "reports_summary.png")
    failed = [r for r in reports if not r.passed]
    hard = [r for r in reports if r.hard_failure]
    print(f"checks: {len(reports)}  failed: {len(failed)}  "
          f"exact-side failures: {len(hard)}")
    for r in failed:
        print(f"  FAIL {r.bound_id} on {r.instance_id} "
              f"(lhs={r.lhs:.6g}, rhs={r.rhs:.6g})")
    return EXIT_BOUND_FAILURE if hard else EXIT_OK


def _cmd_scaling(args, seed):
    params = {}
    if args.g is not None:
        params["g"] = args.g
    if args.alpha is not None:
        params["alpha"] = Fraction(args.alpha)
    if args.trials is not None:
        params["trials"] = args.trials
    if args.ns is not None:
        params["ns"] = args.ns
    study = scaling_study(args.family, params, seed=seed)
    out = _out_dir(args)
    save_study(study, out)
    from .plotting import plot_scaling

    plot_scaling(study, out / f"scaling_{study.family}.png")
    for series, slope in sorted(study.slopes.items()):
        print(f"{series}: slope {slope:.4f}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    seed = args.seed if args.seed is not None else _default_seed()
    handlers = {
        "wasserstein": _cmd_wasserstein,
        "dollar": _cmd_dollar,
        "quantize-e": lambda a, s: _cmd_quantize(a, s, "e"),
        "quantize-b": lambda a, s: _cmd_quantize(a, s, "b"),
        "covering": _cmd_covering,
        "resolution": _cmd_resolution,
        "decompose": _cmd_decompose,
        "build-quantizer": _cmd_build_quantizer,
        "empirical": _cmd_empirical,
        "verify": _cmd_verify,
        "scaling": _cmd_scaling,
    }
    try:
        return handlers[args.command](args, seed)
    except BudgetError as exc:
        print(f"budget error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    raise SystemExit(main())

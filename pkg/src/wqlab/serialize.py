"""JSON/CSV input and output.

Measure files carry exact rational weights as "num/den" strings so a
load/save round trip is lossless.  Schema violations raise DomainError
with a JSON-pointer location of the offending field.
"""
from __future__ import annotations

import csv
import datetime
import json
from fractions import Fraction
from pathlib import Path

from .errors import DomainError
from .measures import DiscreteMeasure, EmbeddedSpace, FiniteMetricSpace, as_fraction


def _fail(pointer: str, message: str):
    raise DomainError(f"{pointer}: {message}")


def space_from_dict(doc, pointer="/space") -> FiniteMetricSpace:
    if not isinstance(doc, dict):
        _fail(pointer, "expected an object")
    if "points" in doc:
        points = doc["points"]
        if not isinstance(points, list) or not points:
            _fail(pointer + "/points", "expected a nonempty array of coordinates")
        metric = doc.get("metric", "l2")
        if metric not in ("l2", "linf"):
            _fail(pointer + "/metric", f"unknown metric {metric!r}")
        labels = doc.get("labels")
        return EmbeddedSpace(points, metric).to_metric_space(labels)
    if "labels" in doc and "dist" in doc:
        labels = doc["labels"]
        dist = doc["dist"]
        if not isinstance(labels, list) or not labels:
            _fail(pointer + "/labels", "expected a nonempty array of labels")
        if not isinstance(dist, list) or len(dist) != len(labels):
            _fail(pointer + "/dist", "expected a square matrix matching labels")
        return FiniteMetricSpace(labels, dist)
    _fail(pointer, "expected either {labels, dist} or {points, metric}")


def space_to_dict(space: FiniteMetricSpace) -> dict:
    return {
        "labels": list(space.labels),
        "dist": [[float(v) for v in row] for row in space.dist],
    }


def measure_from_dict(doc) -> DiscreteMeasure:
    if not isinstance(doc, dict):
        _fail("", "expected an object")
    if "space" not in doc:
        _fail("/space", "missing")
    if "weights" not in doc:
        _fail("/weights", "missing")
    space = space_from_dict(doc["space"])
    raw = doc["weights"]
    if not isinstance(raw, list) or len(raw) != len(space):
        _fail("/weights", f"expected an array of {len(space)} weights")
    weights = []
    for i, w in enumerate(raw):
        try:
            weights.append(as_fraction(w))
        except (DomainError, ValueError, ZeroDivisionError):
            _fail(f"/weights/{i}", f"not a rational weight: {w!r}")
    return DiscreteMeasure(space, weights)


def measure_to_dict(mu: DiscreteMeasure) -> dict:
    return {
        "space": space_to_dict(mu.space),
        "weights": [str(w) for w in mu.weights],
    }


def load_measure(path) -> DiscreteMeasure:
    with open(path) as f:
        try:
            doc = json.load(f)
        except json.JSONDecodeError as exc:
            raise DomainError(f"{path}: invalid JSON ({exc})") from exc
    return measure_from_dict(doc)


def save_measure(mu: DiscreteMeasure, path) -> None:
    with open(path, "w") as f:
        json.dump(measure_to_dict(mu), f, indent=2)
        f.write("\n")


def load_space(path) -> FiniteMetricSpace:
    with open(path) as f:
        try:
            doc = json.load(f)
        except json.JSONDecodeError as exc:
            raise DomainError(f"{path}: invalid JSON ({exc})") from exc
    if isinstance(doc, dict) and "space" in doc:
        doc = doc["space"]
    return space_from_dict(doc, pointer="")


def save_plan(plan, path) -> None:
    """Transport plan as CSV triples (source_label, target_label, mass)."""
    space = plan.source.space
    rows = sorted(plan.entries.items())
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["source_label", "target_label", "mass"])
        for (i, j), m in rows:
            writer.writerow([space.labels[i], space.labels[j], str(m)])


def load_plan_entries(path, space) -> dict:
    entries = {}
    with open(path) as f:
        reader = csv.DictReader(f)
        for row in reader:
            i = space.index(row["source_label"])
            j = space.index(row["target_label"])
            entries[(i, j)] = Fraction(row["mass"])
    return entries


def decomposition_to_dict(dec) -> dict:
    space = dec.lambdas[0].space
    from .measures import pushforward

    levels = []
    for j, (lam, tmap, sj) in enumerate(zip(dec.lambdas, dec.maps, dec.supports)):
        weight = dec.mixture_weights()[j]
        pushed = pushforward(lam, tmap)
        levels.append({
            "j": j,
            "weight": str(weight),
            "support_labels": [space.labels[i] for i in sj],
            "lambda_weights": [str(w) for w in lam.weights],
            "pushforward_weights": [str(w) for w in pushed.weights],
        })
    return {"k": dec.k, "levels": levels}


def reports_payload(reports, seed=None) -> dict:
    return {
        "generated_at": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "seed": seed,
        "reports": [r.to_dict() for r in reports],
    }


def save_reports(reports, out_dir, seed=None) -> dict:
    """Write reports.json and reports.csv; returns the JSON payload."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    payload = reports_payload(reports, seed=seed)
    with open(out / "reports.json", "w") as f:
        json.dump(payload, f, indent=2, sort_keys=True)
        f.write("\n")
    with open(out / "reports.csv", "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow([
            "bound_id", "instance_id", "lhs", "rhs", "slack",
            "pass", "marginal", "lhs_provenance", "rhs_provenance", "parameters",
        ])
        for r in reports:
            writer.writerow([
                r.bound_id, r.instance_id, repr(r.lhs), repr(r.rhs),
                repr(r.slack), r.passed, r.marginal,
                json.dumps(r.lhs_provenance.to_dict(), sort_keys=True),
                json.dumps(r.rhs_provenance.to_dict(), sort_keys=True),
                json.dumps(r.to_dict()["parameters"], sort_keys=True),
            ])
    return payload


def save_study(study, out_dir) -> None:
    """One CSV per scaling study: columns n, series, value, std_error."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / f"scaling_{study.family}.csv", "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["n", "series", "value", "std_error"])
        for row in study.to_rows():
            writer.writerow([row["n"], row["series"],
                             repr(row["value"]), repr(row["std_error"])])
    with open(out / f"scaling_{study.family}.json", "w") as f:
        json.dump({
            "family": study.family,
            "params": {k: str(v) for k, v in sorted(study.params.items())},
            "slopes": study.slopes,
            "rows": study.to_rows(),
        }, f, indent=2, sort_keys=True)
        f.write("\n")

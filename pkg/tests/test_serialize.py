"""Serialization round trips and schema error reporting."""
import json
from fractions import Fraction

import pytest

from wqlab.errors import DomainError
from wqlab.measures import DiscreteMeasure
from wqlab.serialize import (
    load_measure,
    load_plan_entries,
    load_space,
    measure_from_dict,
    measure_to_dict,
    reports_payload,
    save_measure,
    save_plan,
    save_reports,
    space_from_dict,
)
from wqlab.transport import wasserstein
from wqlab.verify import run_suite


class TestMeasureRoundTrip:
    def test_exact_round_trip(self, tmp_path, random6):
        path = tmp_path / "m.json"
        save_measure(random6, path)
        back = load_measure(path)
        assert back.weights == random6.weights
        assert back.space.labels == random6.space.labels
        assert (back.space.dist == random6.space.dist).all()

    def test_third_does_not_drift(self, tmp_path, two_point):
        mu = DiscreteMeasure(two_point, [Fraction(1, 3), Fraction(2, 3)])
        path = tmp_path / "m.json"
        save_measure(mu, path)
        doc = json.loads(path.read_text())
        assert doc["weights"] == ["1/3", "2/3"]
        assert load_measure(path).weights == (Fraction(1, 3), Fraction(2, 3))

    def test_suite_round_trips(self, tmp_path, suite):
        for iid, mu in suite.items():
            path = tmp_path / f"{iid}.json"
            save_measure(mu, path)
            assert load_measure(path).weights == mu.weights


class TestSchemaErrors:
    def test_rejects_bad_mass(self):
        doc = {
            "space": {"labels": ["a", "b"], "dist": [[0, 1], [1, 0]]},
            "weights": ["1/2", "1/3"],
        }
        with pytest.raises(DomainError, match="weights must sum to 1"):
            measure_from_dict(doc)

    def test_pointer_for_bad_weight(self):
        doc = {
            "space": {"labels": ["a", "b"], "dist": [[0, 1], [1, 0]]},
            "weights": ["1/2", "0.5!"],
        }
        with pytest.raises(DomainError, match="/weights/1"):
            measure_from_dict(doc)

    def test_pointer_for_missing_fields(self):
        with pytest.raises(DomainError, match="/space"):
            measure_from_dict({"weights": []})
        with pytest.raises(DomainError, match="/weights"):
            measure_from_dict({"space": {"labels": ["a"], "dist": [[0]]}})

    def test_pointer_for_bad_metric(self):
        with pytest.raises(DomainError, match="/metric"):
            space_from_dict({"points": [[0.0], [1.0]], "metric": "l9"})

    def test_wrong_weight_count(self):
        doc = {
            "space": {"labels": ["a", "b"], "dist": [[0, 1], [1, 0]]},
            "weights": ["1"],
        }
        with pytest.raises(DomainError, match="/weights"):
            measure_from_dict(doc)

    def test_invalid_json_file(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{nope")
        with pytest.raises(DomainError, match="invalid JSON"):
            load_measure(path)


class TestSpaceLoading:
    def test_embedded_points_document(self, tmp_path):
        path = tmp_path / "s.json"
        path.write_text(json.dumps({"points": [[0, 0], [3, 4]], "metric": "l2"}))
        space = load_space(path)
        assert space.dist[0, 1] == pytest.approx(5.0)

    def test_measure_document_also_works(self, tmp_path, random6):
        path = tmp_path / "m.json"
        save_measure(random6, path)
        space = load_space(path)
        assert space.labels == random6.space.labels


class TestPlanSerialization:
    def test_round_trip(self, tmp_path, two_point):
        mu = DiscreteMeasure(two_point, [Fraction(1, 2), Fraction(1, 2)])
        nu = DiscreteMeasure(two_point, [Fraction(2, 3), Fraction(1, 3)])
        _, plan = wasserstein(mu, nu, 1.0)
        path = tmp_path / "plan.csv"
        save_plan(plan, path)
        entries = load_plan_entries(path, two_point)
        assert entries == plan.entries


@pytest.fixture(scope="module")
def small_reports():
    return run_suite(bound_ids={"basicbound"}, seed=7, trials=10)


class TestReports:
    def test_payload_has_reports_and_seed(self, small_reports):
        payload = reports_payload(small_reports, seed=7)
        assert payload["seed"] == 7
        assert len(payload["reports"]) == len(small_reports)
        assert all(r["pass"] for r in payload["reports"])

    def test_save_writes_json_and_csv(self, tmp_path, small_reports):
        save_reports(small_reports, tmp_path, seed=7)
        assert (tmp_path / "reports.json").exists()
        csv_lines = (tmp_path / "reports.csv").read_text().splitlines()
        assert csv_lines[0].startswith("bound_id,instance_id")
        assert len(csv_lines) == len(small_reports) + 1

    def test_payload_deterministic_outside_timestamp(self, small_reports):
        a = reports_payload(small_reports, seed=7)
        b = reports_payload(small_reports, seed=7)
        a.pop("generated_at")
        b.pop("generated_at")
        assert a == b

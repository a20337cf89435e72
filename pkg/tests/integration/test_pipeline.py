import json
from pathlib import Path

import numpy as np
import pytest

from src.core.completion import build_completion
from src.core.errors import ExflowError
from src.core.output_manager import (
    SCHEMA,
    component_tree_dot,
    create_summary_report,
    dynamics_dot,
    round_floats,
    tower_block,
)
from src.core.pipeline_processor import (
    analyze,
    complete_block,
    ends_block,
    fixture_from_config,
    limits_block,
    process_fixture,
    process_gallery,
    run_checks,
    trace_orbit,
)
from src.ingestion.config_loader import load_config

pytestmark = pytest.mark.integration

DATA = Path(__file__).resolve().parent.parent / "data"


class TestCheckBlocks:
    def test_ends(self, twosinks):
        block = ends_block(twosinks)
        assert block["theorem"] == "end_space"
        assert block["count"] == 2
        assert block["components_per_level"] == [1, 2, 2, 2]
        assert block["ends"][1] == {"name": "end:c4", "branch": ["c0", "c3", "c4", "c4"]}
        assert block["e0"] == {"c0": "end:c0", "c4": "end:c4"}
        assert block["e0_injective"] and block["e0_surjective"]

    def test_limits(self, line5shift):
        assert limits_block(line5shift) == {
            "theorem": "limit_sets",
            "L": ["c4"],
            "Lbar": ["c4", "f34"],
            "diagnostics": [],
        }

    def test_complete(self, ray5):
        block = complete_block(ray5)
        assert block["complete"] is False
        assert block["reason"] == "E0NotSurjective"
        assert block["completion"]["glued_points"] == 1
        assert block["completion"]["replaced_limit_atoms"] == 0
        assert len(block["completion"]["points"]) == 10
        assert block["idempotence"]["carrier_isomorphic"]

    def test_dynamic_checks_skip_without_a_map(self, ray5):
        results = run_checks(ray5, ["ends", "thm66", "basins", "duality"])
        assert results["ends"]["count"] == 1
        for check in ("thm66", "basins", "duality"):
            assert results[check] == {"skipped": "fixture has no dynamics"}

    def test_unknown_check(self, ray5):
        with pytest.raises(ExflowError):
            run_checks(ray5, ["ends", "homology"])

    def test_results_follow_request_order(self, twosinks):
        results = run_checks(twosinks, ["separation", "limits", "compactness"])
        assert list(results) == ["separation", "limits", "compactness"]


class TestTraceOrbit:
    def test_least_image_walk(self, twosinks):
        report = trace_orbit(twosinks, "c2", 6)
        assert report["walk"] == ["c2", "c1", "c0", "c0", "c0", "c0", "c0"]
        assert report["end"] == "end:c0"
        assert report["converges"] and report["is_pi0_net"]

    def test_seeded_walk_is_reproducible(self, morse16):
        assert trace_orbit(morse16, "c3", 20, seed=2) == trace_orbit(morse16, "c3", 20, seed=2)

    def test_fixture_without_map(self, ray5):
        with pytest.raises(ExflowError):
            trace_orbit(ray5, "c0", 4)


class TestReports:
    def test_report_layout(self, twosinks):
        report = analyze(twosinks, ["ends", "limits"])
        assert report["schema"] == SCHEMA
        assert report["fixture"]["name"] == "twosinks"
        assert report["space"]["tops"] == ["c0", "c1", "c2", "c3", "c4"]
        assert report["tower"]["tail"] == "Stabilized"
        assert report["tower"]["levels"][2] == ["c0", "c4"]
        assert list(report["results"]) == ["ends", "limits"]
        json.dumps(report)

    def test_round_floats(self):
        value = {"a": np.float64(1.23456789), "b": (np.int64(3), np.bool_(True)), 4: [0.1 + 0.2]}
        assert round_floats(value) == {"a": 1.234568, "b": [3, True], "4": [0.3]}

    def test_core_is_reported(self, ray5):
        completion = build_completion(ray5.space, ray5.tower)
        block = tower_block(completion.as_space(), completion.induced_tower)
        assert block["tail"] == "ShrinksToCore"
        assert block["core"] == ["end:c4"]

    def test_component_tree_dot(self, ray5, twosinks):
        text = component_tree_dot(ray5.space, ray5.tower)
        assert text.startswith('digraph "components ray5" {')
        assert "rankdir=BT;" in text
        assert text.count("doublecircle") == 1
        assert '"L1_0" -> "L0_0";' in text
        assert component_tree_dot(twosinks.space, twosinks.tower).count("doublecircle") == 2

    def test_dynamics_dot(self, ray5shift, twosinks):
        text = dynamics_dot(ray5shift.cell_map)
        assert '"Exit" [shape=point];' in text
        assert '"c4" -> "Exit";' in text
        assert '"c0" -> "c1";' in text
        assert "Exit" not in dynamics_dot(twosinks.cell_map)

    def test_summary(self, tmp_path):
        path = tmp_path / "summary.json"
        create_summary_report([
            {"key": "ray5", "complete": False},
            {"key": "twosinks", "complete": True},
            {"key": "torus", "error": {"error": "UnknownFixture", "message": "unknown fixture"}},
        ], str(path))
        summary = json.loads(path.read_text(encoding="utf-8"))
        assert summary["run_info"]["total_fixtures"] == 3
        assert summary["run_info"]["failed"] == ["torus"]
        assert summary["run_info"]["complete"] == ["twosinks"]


class TestConfigSubjects:
    def test_fixture_from_config(self):
        config = load_config(str(DATA / "linear_sink.ini"))
        fixture = fixture_from_config(config)
        assert fixture.name == "linear_sink"
        assert len(fixture.space.cells) == 64
        assert fixture.tower.tail.value == "Stabilized"
        assert fixture.describe()["grid"]["resolution"] == [8, 8]

    def test_config_report(self):
        config = load_config(str(DATA / "linear_sink.ini"))
        report = analyze(fixture_from_config(config), config.checks, seed=config.seed,
                         walks=config.walks, steps=config.steps)
        results = report["results"]
        assert list(results) == ["ends", "limits", "complete", "thm66", "basins"]
        assert results["ends"]["count"] == 1
        assert results["thm66"]["biconditional_ok"]
        assert results["basins"]["walks"]["count"] == 20


class TestBatch:
    def test_process_fixture(self, tmp_path, capsys):
        entry = process_fixture("twosinks", None, str(tmp_path))
        assert entry["key"] == "twosinks"
        assert entry["complete"] is True
        assert entry["ends"] == 2
        for path in entry["outputs"].values():
            assert Path(path).exists()
        assert "✅ Completed twosinks" in capsys.readouterr().out

    def test_parametric_key(self, tmp_path):
        entry = process_fixture("bintree", 2, str(tmp_path))
        assert entry["key"] == "bintree-2"
        assert "dynamics_dot" not in entry["outputs"]
        assert entry["thm66_complete"] is None

    @pytest.mark.slow
    def test_process_gallery(self, tmp_path):
        result = process_gallery(str(tmp_path))
        summary = json.loads(Path(result["summary_path"]).read_text(encoding="utf-8"))
        assert summary["run_info"]["total_fixtures"] == 11
        assert summary["run_info"]["failed"] == []
        assert "morse-circle-16" in summary["run_info"]["complete"]

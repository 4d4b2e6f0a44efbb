"""Tests for region-bound calibration against labeled games."""

import json
import math

import pytest

from chesslens.calibration import (
    GRID,
    MIN_RUN_CHOICES,
    CalibrationResult,
    LabeledCase,
    fit_config,
    load_labeled,
    total_volume,
)
from chesslens.board import Color
from chesslens.pgn import read_pgn
from chesslens.space import default_config, seed_config
from chesslens.trajectory import build_trajectories

LABELED = "tests/fixtures/labeled.json"


@pytest.fixture(scope="module")
def labeled():
    return load_labeled(LABELED)


@pytest.fixture(scope="module")
def golden_fit(labeled):
    positives, negatives = labeled
    return fit_config(seed_config(), positives, negatives, version="0.1")


def test_load_labeled_counts(labeled):
    positives, negatives = labeled
    assert len(positives) == 4
    # the negatives entry names a five game file without an index
    assert len(negatives) == 5
    concepts = sorted({case.concept for case, _ in positives})
    assert concepts == ["king_attack", "positional_sacrifice"]
    for case, dual in positives:
        assert case.perspective in (Color.WHITE, Color.BLACK)
        lo, hi = case.move_window
        assert lo <= hi
        assert len(dual.white) == len(dual.black)


def test_load_labeled_missing_file():
    with pytest.raises(ValueError, match="cannot read"):
        load_labeled("tests/fixtures/no_such_file.json")


def test_load_labeled_rejects_bad_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(ValueError, match="not valid JSON"):
        load_labeled(str(path))


def write_labeled(tmp_path, doc):
    path = tmp_path / "labeled.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    return str(path)


def test_load_labeled_rejects_non_object(tmp_path):
    with pytest.raises(ValueError, match="JSON object"):
        load_labeled(write_labeled(tmp_path, [1, 2]))


def test_load_labeled_requires_positive_keys(tmp_path):
    doc = {"positives": [{"pgn": "x.pgn", "concept": "king_attack"}]}
    with pytest.raises(ValueError, match="start_move"):
        load_labeled(write_labeled(tmp_path, doc))


def test_load_labeled_game_index_range(tmp_path, monkeypatch):
    source = open("tests/fixtures/morphy_opera_1858.pgn", encoding="utf-8").read()
    (tmp_path / "one.pgn").write_text(source, encoding="utf-8")
    doc = {
        "positives": [
            {
                "pgn": "one.pgn",
                "game_index": 3,
                "concept": "king_attack",
                "perspective": "white",
                "start_move": 10,
            }
        ]
    }
    with pytest.raises(ValueError, match="out of range"):
        load_labeled(write_labeled(tmp_path, doc))


def test_load_labeled_scalar_start_move(tmp_path):
    source = open("tests/fixtures/morphy_opera_1858.pgn", encoding="utf-8").read()
    (tmp_path / "one.pgn").write_text(source, encoding="utf-8")
    doc = {
        "positives": [
            {
                "pgn": "one.pgn",
                "concept": "king_attack",
                "perspective": "white",
                "start_move": 13,
            }
        ]
    }
    positives, negatives = load_labeled(write_labeled(tmp_path, doc))
    assert positives[0][0].move_window == (13, 13)
    assert negatives == []


def test_fit_requires_positives():
    with pytest.raises(ValueError, match="at least one positive"):
        fit_config(seed_config(), [], [])


def test_golden_fit_reproduces_packaged_default(golden_fit):
    """The packaged default config is exactly the fit from the seed."""
    assert golden_fit.feasible
    assert golden_fit.detected == golden_fit.total_positives == 4
    assert golden_fit.false_events == 0
    assert golden_fit.config.to_dict() == default_config().to_dict()


def test_fit_is_deterministic(labeled):
    positives, negatives = labeled
    a = fit_config(seed_config(), positives, negatives, version="0.1")
    b = fit_config(seed_config(), positives, negatives, version="0.1")
    assert a.config.to_dict() == b.config.to_dict()
    assert a.summary_dict() == b.summary_dict()


def test_fit_keeps_bounds_on_grid(golden_fit):
    for concept in golden_fit.config.concepts:
        assert concept.min_run_plies in MIN_RUN_CHOICES
        for region in concept.regions:
            for lo, hi in region.bounds.values():
                for value in (lo, hi):
                    assert min(abs(value - g) for g in GRID) < 1e-9


def test_fit_leaves_unlabeled_concepts_untouched(golden_fit):
    seed = {c.name: c for c in seed_config().concepts}
    fitted = {c.name: c for c in golden_fit.config.concepts}
    assert fitted["space_domination"] == seed["space_domination"]


def test_fit_default_version_suffix(labeled):
    positives, negatives = labeled
    result = fit_config(
        seed_config(), positives[:1], negatives[:1], max_sweeps=1
    )
    assert result.config.version == seed_config().version + "+fit"


def test_fit_reports_infeasible_for_unreachable_window():
    record = read_pgn("tests/fixtures/quiet_draws.pgn")[0]
    dual = build_trajectories(record)
    case = LabeledCase(
        game_id=record.game_id,
        concept="king_attack",
        perspective=Color.WHITE,
        move_window=(30, 30),
    )
    result = fit_config(seed_config(), [(case, dual)], [])
    assert isinstance(result, CalibrationResult)
    assert not result.feasible
    assert result.detected == 0
    assert result.diagnostics[0]["detected"] is False


def test_total_volume_matches_hand_computation():
    cfg = seed_config()
    expected = 0.0
    for concept in cfg.concepts:
        product = 1.0
        for region in concept.regions:
            for lo, hi in region.bounds.values():
                product *= hi - lo
        expected += product
    assert math.isclose(total_volume(cfg), expected, rel_tol=1e-12)


def test_summary_dict_shape(golden_fit):
    summary = golden_fit.summary_dict()
    assert summary["feasible"] is True
    assert summary["detected"] == 4
    assert summary["false_events"] == 0
    assert len(summary["cases"]) == 4
    for case in summary["cases"]:
        assert {"game_id", "concept", "perspective", "expected_start_move",
                "detected"} <= set(case)

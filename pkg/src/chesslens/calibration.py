"""Fit concept region bounds against labeled games by grid coordinate descent.

Positively labeled cases name a game, a concept, a perspective, and the
expected start-move window; negative games should produce no events at
all. The search walks interval endpoints on a 0.05 grid and run lengths
in {2..8}, maximizing (positives detected, fewer false events, smaller
total region volume) lexicographically. Everything is deterministic.

Two refinements keep pure coordinate descent from getting stuck or
degenerating, without changing the objective at the optimum:

* A near-miss shaping term (partial credit for membership plies inside an
  undetected positive's expected window) orders the search between equal
  detection counts. It is zero once every positive is detected, so among
  fully detecting configs the comparison reduces exactly to the declared
  (detected, fewer false, smaller volume) order.
* Concepts with no labeled positives are left at their incoming bounds
  unless they produce false events on negatives; there is no signal to fit
  them against, and unconstrained volume minimization would collapse their
  regions to points. Volume-only moves on a concept are likewise deferred
  until all of that concept's positives are detected.
"""

from __future__ import annotations

import dataclasses
import json
import os
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .board import Color
from .pgn import read_pgn
from .recognition import detect_events
from .space import ConceptSpec, ConfigError, RegionSpec, SpaceConfig, membership
from .trajectory import DualTrajectories, build_trajectories, smooth
from .validation import as_color

GRID = tuple(round(i * 0.05, 2) for i in range(21))
MIN_RUN_CHOICES = tuple(range(2, 9))
MOVE_TOLERANCE = 2
MAX_SWEEPS = 8


@dataclass(frozen=True)
class LabeledCase:
    """One expected strategy episode in one game."""

    game_id: str
    concept: str
    perspective: Color
    move_window: Tuple[int, int]


@dataclass
class CalibrationResult:
    config: SpaceConfig
    feasible: bool
    detected: int
    total_positives: int
    false_events: int
    volume: float
    sweeps: int
    diagnostics: List[dict]

    def summary_dict(self) -> dict:
        return {
            "feasible": self.feasible,
            "detected": self.detected,
            "total_positives": self.total_positives,
            "false_events": self.false_events,
            "volume": self.volume,
            "sweeps": self.sweeps,
            "cases": self.diagnostics,
        }


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ValueError(message)


def load_labeled(path) -> Tuple[List[Tuple[LabeledCase, DualTrajectories]],
                                List[DualTrajectories]]:
    """Read a labeled-cases JSON file; game paths resolve relative to it.

    Schema: {"positives": [{"pgn", "game_index"?, "concept", "perspective",
    "start_move": [lo, hi] | move}], "negatives": [{"pgn", "game_index"?}]}.
    Omitting game_index on a negative entry takes every game in the file.
    """
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ValueError(f"cannot read labeled file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValueError(f"labeled file {path} is not valid JSON: {exc}") from exc
    _require(isinstance(doc, dict), "labeled file must hold a JSON object")
    base_dir = os.path.dirname(os.path.abspath(path))
    games_cache: Dict[str, list] = {}

    def games_for(rel: str) -> list:
        full = os.path.join(base_dir, rel)
        if full not in games_cache:
            games_cache[full] = read_pgn(full)
        return games_cache[full]

    positives = []
    for entry in doc.get("positives", []):
        _require(isinstance(entry, dict), "each positive entry must be an object")
        _require("pgn" in entry, "positive entry missing 'pgn'")
        _require("concept" in entry, "positive entry missing 'concept'")
        _require("start_move" in entry, "positive entry missing 'start_move'")
        records = games_for(entry["pgn"])
        index = int(entry.get("game_index", 0))
        _require(0 <= index < len(records),
                 f"game_index {index} out of range for {entry['pgn']}")
        record = records[index]
        window = entry["start_move"]
        if isinstance(window, (int, float)):
            window = [window, window]
        _require(isinstance(window, list) and len(window) == 2,
                 "start_move must be a move number or a [lo, hi] pair")
        lo, hi = int(window[0]), int(window[1])
        _require(lo <= hi, f"start_move window [{lo}, {hi}] is reversed")
        case = LabeledCase(
            game_id=record.game_id,
            concept=str(entry["concept"]),
            perspective=as_color(entry.get("perspective", "white")),
            move_window=(lo, hi),
        )
        positives.append((case, build_trajectories(record)))
    negatives = []
    for entry in doc.get("negatives", []):
        _require(isinstance(entry, dict), "each negative entry must be an object")
        _require("pgn" in entry, "negative entry missing 'pgn'")
        records = games_for(entry["pgn"])
        if "game_index" in entry:
            index = int(entry["game_index"])
            _require(0 <= index < len(records),
                     f"game_index {index} out of range for {entry['pgn']}")
            records = [records[index]]
        negatives.extend(build_trajectories(r) for r in records)
    _require(bool(positives), "labeled file declares no positive cases")
    return positives, negatives


def total_volume(cfg: SpaceConfig) -> float:
    """Sum over concepts of the product of declared interval widths."""
    volume = 0.0
    for concept in cfg.concepts:
        product = 1.0
        for lo, hi in concept.declared_bounds().values():
            product *= hi - lo
        volume += product
    return volume


def _match(case: LabeledCase, events) -> Optional[object]:
    lo, hi = case.move_window
    for event in events:
        if (event.concept == case.concept
                and event.perspective is case.perspective
                and lo - MOVE_TOLERANCE <= event.start_move <= hi + MOVE_TOLERANCE):
            return event
    return None


def _snap(x: float) -> float:
    return min(1.0, max(0.0, round(round(x / 0.05) * 0.05, 2)))


# bounds keys carry DimensionId values; alias only for annotation readability
DimensionIdKey = object


class _Search:
    """Mutable view of the tunable parameters over a fixed base config."""

    def __init__(self, base: SpaceConfig):
        self.base = base
        self.bounds: Dict[Tuple[str, DimensionIdKey], Tuple[float, float]] = {}
        self.min_runs: Dict[str, int] = {}
        for concept in base.concepts:
            for region in concept.regions:
                for dim, (lo, hi) in region.bounds.items():
                    self.bounds[(concept.name, dim)] = (_snap(lo), _snap(hi))
            self.min_runs[concept.name] = concept.min_run_plies

    def build(self, version: str) -> SpaceConfig:
        concepts = []
        for concept in self.base.concepts:
            regions = []
            for region in concept.regions:
                new_bounds = {
                    dim: self.bounds[(concept.name, dim)] for dim in region.bounds
                }
                regions.append(RegionSpec(domain=region.domain, bounds=new_bounds))
            concepts.append(
                dataclasses.replace(
                    concept,
                    regions=tuple(regions),
                    min_run_plies=self.min_runs[concept.name],
                )
            )
        return SpaceConfig(version=version, concepts=tuple(concepts))


@dataclass(frozen=True)
class _Measure:
    """Everything one config evaluation learns about the labeled set."""

    detected: int
    near_miss: float
    false_events: int
    volume: float
    detected_per_concept: Tuple[Tuple[str, int], ...]
    false_per_concept: Tuple[Tuple[str, int], ...]


def _near_miss_credit(case: LabeledCase, dual: DualTrajectories,
                      concept: ConceptSpec, smooth_window: int) -> float:
    """Fraction of a qualifying run already present in the expected window.

    Counts smoothed plies inside [lo - tol, hi + tol] that satisfy the
    concept's region bounds, capped at min_run_plies. This gives the
    descent a gradient toward an undetected positive even when no single
    endpoint move yet flips detection.
    """
    traj = smooth(dual.for_perspective(case.perspective), smooth_window)
    lo, hi = case.move_window
    count = 0
    for i in range(len(traj)):
        move = int(traj.move_numbers[i])
        if lo - MOVE_TOLERANCE <= move <= hi + MOVE_TOLERANCE:
            if membership(traj.vector_at(i), concept):
                count += 1
    need = max(1, concept.min_run_plies)
    return min(count, need) / need


def _evaluate(cfg: SpaceConfig,
              positives: Sequence[Tuple[LabeledCase, DualTrajectories]],
              negatives: Sequence[DualTrajectories],
              smooth_window: int) -> _Measure:
    by_name = {c.name: c for c in cfg.concepts}
    detected = 0
    near_miss = 0.0
    detected_per: Dict[str, int] = {}
    for case, dual in positives:
        events = detect_events(dual, cfg, smooth_window=smooth_window)
        if _match(case, events) is not None:
            detected += 1
            detected_per[case.concept] = detected_per.get(case.concept, 0) + 1
        elif case.concept in by_name:
            near_miss += _near_miss_credit(case, dual, by_name[case.concept],
                                           smooth_window)
    false_events = 0
    false_per: Dict[str, int] = {}
    for dual in negatives:
        for event in detect_events(dual, cfg, smooth_window=smooth_window):
            false_events += 1
            false_per[event.concept] = false_per.get(event.concept, 0) + 1
    return _Measure(
        detected=detected,
        near_miss=near_miss,
        false_events=false_events,
        volume=total_volume(cfg),
        detected_per_concept=tuple(sorted(detected_per.items())),
        false_per_concept=tuple(sorted(false_per.items())),
    )


def _key(measure: _Measure) -> Tuple[int, float, int, float]:
    return (measure.detected, measure.near_miss,
            -measure.false_events, -measure.volume)


def fit_config(base: SpaceConfig,
               positives: Sequence[Tuple[LabeledCase, DualTrajectories]],
               negatives: Sequence[DualTrajectories],
               *,
               max_sweeps: int = MAX_SWEEPS,
               smooth_window: int = 3,
               version: Optional[str] = None) -> CalibrationResult:
    """Deterministic coordinate descent; ties always keep the incumbent."""
    if not positives:
        raise ValueError("calibration needs at least one positive case")
    fitted_version = version if version is not None else base.version + "+fit"
    search = _Search(base)
    labeled_counts: Dict[str, int] = {}
    for case, _ in positives:
        labeled_counts[case.concept] = labeled_counts.get(case.concept, 0) + 1
    best = _evaluate(search.build(fitted_version), positives, negatives,
                     smooth_window)
    best_key = _key(best)
    sweeps = 0

    def frozen(name: str) -> bool:
        # Nothing to fit against and nothing to repair: leave it alone.
        return (name not in labeled_counts
                and dict(best.false_per_concept).get(name, 0) == 0)

    def incomplete(name: str) -> bool:
        detected_per = dict(best.detected_per_concept)
        return detected_per.get(name, 0) < labeled_counts.get(name, 0)

    def try_values(apply, restore, values, prefix_only: bool) -> bool:
        nonlocal best, best_key
        chosen = None
        chosen_measure = best
        chosen_key = best_key
        for value in values:
            apply(value)
            try:
                candidate = search.build(fitted_version)
            except ConfigError:
                continue
            measure = _evaluate(candidate, positives, negatives, smooth_window)
            key = _key(measure)
            better = key[:3] > chosen_key[:3] if prefix_only else key > chosen_key
            if better:
                chosen, chosen_measure, chosen_key = value, measure, key
        if chosen is None:
            restore()
            return False
        apply(chosen)
        best, best_key = chosen_measure, chosen_key
        return True

    for _ in range(max_sweeps):
        improved = False
        sweeps += 1
        for concept in base.concepts:
            for region in concept.regions:
                for dim in sorted(region.bounds):
                    for side in (0, 1):
                        if frozen(concept.name):
                            continue
                        slot = (concept.name, dim)
                        original = search.bounds[slot]

                        def apply(value, slot=slot, side=side, original=original):
                            lo, hi = original
                            pair = (value, hi) if side == 0 else (lo, value)
                            search.bounds[slot] = pair

                        def restore(slot=slot, original=original):
                            search.bounds[slot] = original

                        candidates = [
                            v for v in GRID
                            if v != original[side]
                            and (v <= original[1] if side == 0 else v >= original[0])
                        ]
                        improved |= try_values(apply, restore, candidates,
                                               incomplete(concept.name))
            if frozen(concept.name):
                continue
            original_run = search.min_runs[concept.name]

            def apply_run(value, name=concept.name):
                search.min_runs[name] = value

            def restore_run(name=concept.name, original=original_run):
                search.min_runs[name] = original

            run_candidates = [v for v in MIN_RUN_CHOICES if v != original_run]
            improved |= try_values(apply_run, restore_run, run_candidates,
                                   incomplete(concept.name))
        if not improved:
            break

    final = search.build(fitted_version)
    final_measure = _evaluate(final, positives, negatives, smooth_window)
    detected = final_measure.detected
    false_events = final_measure.false_events
    volume = final_measure.volume
    diagnostics = []
    for case, dual in positives:
        events = detect_events(dual, final, smooth_window=smooth_window)
        matched = _match(case, events)
        diagnostics.append(
            {
                "game_id": case.game_id,
                "concept": case.concept,
                "perspective": str(case.perspective),
                "expected_start_move": list(case.move_window),
                "detected": matched is not None,
                "event_start_move": matched.start_move if matched else None,
                "events_in_game": len(events),
            }
        )
    return CalibrationResult(
        config=final,
        feasible=detected == len(positives) and false_events == 0,
        detected=detected,
        total_positives=len(positives),
        false_events=false_events,
        volume=volume,
        sweeps=sweeps,
        diagnostics=diagnostics,
    )

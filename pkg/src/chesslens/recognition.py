"""Strategy episode detection over concept-space trajectories.

An episode is a maximal run of plies whose smoothed points sit inside a
concept's region, long enough for the concept, entered on a converging
course, with every trend constraint met on the raw trajectory. Events are
reported per concept and per perspective.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterator, List, Sequence, Tuple

from .board import Color
from .space import ConceptSpec, Direction, SpaceConfig, centroid, membership, scaled_distance, typicality
from .trajectory import (
    NON_CONVERGING,
    DualTrajectories,
    Segment,
    Trajectory,
    segment_direction,
    smooth,
    trend_delta,
)

# Plies of approach examined before a run entry, capped by the run length.
APPROACH_PLIES = 6
DEFAULT_SMOOTH_WINDOW = 3


@dataclass(frozen=True)
class RecognitionEvent:
    """One detected strategy episode."""

    concept: str
    perspective: Color
    start_ply: int
    end_ply: int
    start_move: int
    end_move: int
    peak_typicality: float
    convergence: float
    trend_values: Tuple[Tuple[str, float], ...] = ()

    def __post_init__(self):
        if not 0 <= self.start_ply <= self.end_ply:
            raise ValueError(f"invalid ply range [{self.start_ply}, {self.end_ply}]")
        if not 0.0 <= self.peak_typicality <= 1.0:
            raise ValueError(f"peak_typicality {self.peak_typicality} outside [0, 1]")

    def to_dict(self) -> dict:
        return {
            "concept": self.concept,
            "perspective": str(self.perspective),
            "start_ply": self.start_ply,
            "end_ply": self.end_ply,
            "start_move": self.start_move,
            "end_move": self.end_move,
            "peak_typicality": self.peak_typicality,
            "convergence": self.convergence,
            "trend_values": {name: delta for name, delta in self.trend_values},
        }


def _membership_runs(flags: Sequence[bool]) -> Iterator[Tuple[int, int]]:
    """Maximal inclusive runs of consecutive True flags."""
    start = None
    for i, flag in enumerate(flags):
        if flag and start is None:
            start = i
        elif not flag and start is not None:
            yield (start, i - 1)
            start = None
    if start is not None:
        yield (start, len(flags) - 1)


def _approach(smoothed: Trajectory, concept: ConceptSpec, run_start: int,
              run_len: int) -> Tuple[bool, float]:
    """Convergence test over the approach window ending at the run entry.

    The window holds min(APPROACH_PLIES, run_len) points ending at the run's
    first ply, clipped at the game start. Fewer than two points make the
    test vacuous. Passing requires the direction cosine toward the centroid
    to reach the concept threshold, or the centroid distance to be
    non-increasing across the window.
    """
    width = min(APPROACH_PLIES, run_len)
    start = max(0, run_start - (width - 1))
    if start == run_start:
        return True, NON_CONVERGING
    direction = segment_direction(Segment(smoothed, start, run_start), centroid(concept))
    if direction >= concept.convergence_threshold:
        return True, direction
    series = [
        scaled_distance(smoothed.vector_at(i), concept)
        for i in range(start, run_start + 1)
    ]
    closing = all(series[i + 1] <= series[i] for i in range(len(series) - 1))
    return closing, direction


def _trends(raw: Trajectory, concept: ConceptSpec, start_ply: int,
            end_ply: int) -> Tuple[bool, Tuple[Tuple[str, float], ...]]:
    """Check every trend constraint somewhere inside the run, on raw values.

    Returns the extremal observed delta per constraint: the largest for
    increasing trends, the smallest for decreasing ones.
    """
    observed: List[Tuple[str, float]] = []
    for trend in concept.trends:
        deltas = [
            trend_delta(raw, trend.dimension, ply, trend.window)
            for ply in range(start_ply, end_ply + 1)
        ]
        if trend.direction is Direction.INCREASING:
            extreme = max(deltas)
            satisfied = extreme >= trend.min_delta
        else:
            extreme = min(deltas)
            satisfied = extreme <= -trend.min_delta
        if not satisfied:
            return False, ()
        observed.append((trend.dimension.name, extreme))
    return True, tuple(observed)


def detect_events(trajs: DualTrajectories, cfg: SpaceConfig, *,
                  smooth_window: int = DEFAULT_SMOOTH_WINDOW) -> List[RecognitionEvent]:
    """Detect all strategy episodes in one game, both perspectives.

    Membership and convergence are judged on the smoothed trajectory; trend
    constraints on the raw one so sharp changes are not averaged away.
    Events are sorted by (start_ply, concept, perspective).
    """
    events: List[RecognitionEvent] = []
    for perspective in (Color.WHITE, Color.BLACK):
        raw = trajs.for_perspective(perspective)
        smoothed = smooth(raw, smooth_window)
        points = [smoothed.vector_at(i) for i in range(len(smoothed))]
        for concept in cfg.concepts:
            member = [membership(v, concept) for v in points]
            for start_ply, end_ply in _membership_runs(member):
                run_len = end_ply - start_ply + 1
                if run_len < concept.min_run_plies:
                    continue
                converged, direction = _approach(smoothed, concept, start_ply, run_len)
                if not converged:
                    continue
                ok, trend_values = _trends(raw, concept, start_ply, end_ply)
                if not ok:
                    continue
                peak = max(typicality(points[p], concept)
                           for p in range(start_ply, end_ply + 1))
                events.append(
                    RecognitionEvent(
                        concept=concept.name,
                        perspective=perspective,
                        start_ply=start_ply,
                        end_ply=end_ply,
                        start_move=raw.move_numbers[start_ply],
                        end_move=raw.move_numbers[end_ply],
                        peak_typicality=peak,
                        convergence=direction,
                        trend_values=trend_values,
                    )
                )
    events.sort(key=lambda e: (e.start_ply, e.concept, int(e.perspective)))
    return events


def explain_event(event: RecognitionEvent, trajs: DualTrajectories, cfg: SpaceConfig, *,
                  smooth_window: int = DEFAULT_SMOOTH_WINDOW) -> dict:
    """Per-dimension account of one event against the same inputs.

    Start and end values come from the raw trajectory (matching the CSV
    export); centroid-distance contributions are measured at the smoothed
    peak-typicality ply and sum to the squared interval-scaled distance.
    """
    try:
        concept = cfg.concept(event.concept)
    except KeyError:
        raise ValueError(f"event concept {event.concept!r} not in configuration") from None
    raw = trajs.for_perspective(event.perspective)
    if event.end_ply >= len(raw):
        raise ValueError("event ply range exceeds the given trajectories")
    smoothed = smooth(raw, smooth_window)
    peak_ply = max(
        range(event.start_ply, event.end_ply + 1),
        key=lambda p: typicality(smoothed.vector_at(p), concept),
    )
    bounds = concept.declared_bounds()
    mids = centroid(concept)
    dimensions = []
    for dim, (lo, hi) in bounds.items():
        mid = mids[dim]
        halfwidth = (hi - lo) / 2.0
        x = float(smoothed.values[peak_ply, dim])
        if halfwidth == 0.0:
            term = 0.0 if x == mid else (1.0 + abs(x - mid)) ** 2
        else:
            term = ((x - mid) / halfwidth) ** 2
        dimensions.append(
            {
                "dimension": dim.name,
                "start_value": float(raw.values[event.start_ply, dim]),
                "end_value": float(raw.values[event.end_ply, dim]),
                "bounds": [lo, hi],
                "centroid": mid,
                "peak_contribution": term / len(bounds),
            }
        )
    observed: Dict[str, float] = dict(event.trend_values)
    trends = []
    for trend in concept.trends:
        trends.append(
            {
                "dimension": trend.dimension.name,
                "direction": trend.direction.value,
                "required_delta": trend.min_delta,
                "window": trend.window,
                "observed_delta": observed.get(trend.dimension.name),
            }
        )
    return {
        "concept": event.concept,
        "perspective": str(event.perspective),
        "game_id": raw.game_id,
        "start_ply": event.start_ply,
        "end_ply": event.end_ply,
        "start_move": event.start_move,
        "end_move": event.end_move,
        "peak_ply": peak_ply,
        "peak_move": raw.move_numbers[peak_ply],
        "peak_typicality": event.peak_typicality,
        "convergence": event.convergence,
        "dimensions": dimensions,
        "trends": trends,
    }

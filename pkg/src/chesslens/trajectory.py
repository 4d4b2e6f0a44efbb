"""Game trajectories through the concept space: build, smooth, measure.

One point per ply including the initial position. Values are stored as a
read-only (n, 7) float array whose columns follow DimensionId order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, NamedTuple, Optional, TextIO, Tuple

import numpy as np

from .board import Color, apply_move
from .dimensions import DIMENSIONS, DimensionId, PerspectiveVector
from .features import encode_both
from .pgn import GameRecord
from .space import ConceptSpec, scaled_distance

# Sentinel for degenerate segment directions: less than any cosine and any
# threshold in [-1, 1], and JSON-serializable.
NON_CONVERGING = -2.0


@dataclass(frozen=True, eq=False)
class Trajectory:
    """One game seen from one perspective; row i is ply i."""

    game_id: str
    perspective: Color
    values: np.ndarray
    move_numbers: Tuple[int, ...]
    sides_moved: Tuple[str, ...]

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 2 or values.shape[1] != len(DIMENSIONS):
            raise ValueError(f"trajectory values must be (n, 7), got {values.shape}")
        if len(self.move_numbers) != len(values) or len(self.sides_moved) != len(values):
            raise ValueError("per-ply labels must match the number of points")
        values = values.copy()
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return len(self.values)

    def vector_at(self, ply: int) -> PerspectiveVector:
        if not 0 <= ply < len(self):
            raise IndexError(f"ply {ply} outside trajectory of length {len(self)}")
        return PerspectiveVector(*self.values[ply])

    def dimension(self, dim: DimensionId) -> np.ndarray:
        return self.values[:, dim]


class DualTrajectories(NamedTuple):
    white: Trajectory
    black: Trajectory

    def for_perspective(self, perspective: Color) -> Trajectory:
        return self.white if perspective is Color.WHITE else self.black


def build_trajectories(record: GameRecord, game_id: Optional[str] = None) -> DualTrajectories:
    """Encode every position of the game for both perspectives."""
    gid = game_id if game_id is not None else record.game_id
    rows_w: List[PerspectiveVector] = []
    rows_b: List[PerspectiveVector] = []
    move_numbers: List[int] = []
    sides_moved: List[str] = []
    p = record.initial
    pair = encode_both(p)
    rows_w.append(pair.white)
    rows_b.append(pair.black)
    move_numbers.append(p.fullmove_number)
    sides_moved.append("-")
    for m in record.moves:
        mover = p.side_to_move
        p = apply_move(p, m)
        pair = encode_both(p)
        rows_w.append(pair.white)
        rows_b.append(pair.black)
        # equals ply // 2 + 1 for standard-start games
        move_numbers.append(p.fullmove_number)
        sides_moved.append(str(mover))
    numbers = tuple(move_numbers)
    white = Trajectory(gid, Color.WHITE, np.array(rows_w, dtype=float), numbers,
                       tuple(sides_moved))
    black = Trajectory(gid, Color.BLACK, np.array(rows_b, dtype=float), numbers,
                       tuple(sides_moved))
    return DualTrajectories(white=white, black=black)


def ply_to_move_number(ply: int) -> int:
    """Full-move number containing a ply of a standard-start game."""
    return ply // 2 + 1


def smooth(t: Trajectory, window: int) -> Trajectory:
    """Centered moving average; edges shrink to the available points."""
    if window < 1 or window % 2 == 0:
        raise ValueError(f"smoothing window must be odd and >= 1, got {window}")
    if window == 1:
        return t
    half = window // 2
    n = len(t)
    out = np.empty_like(np.asarray(t.values))
    for i in range(n):
        lo = max(0, i - half)
        hi = min(n, i + half + 1)
        out[i] = t.values[lo:hi].mean(axis=0)
    return Trajectory(t.game_id, t.perspective, out, t.move_numbers, t.sides_moved)


@dataclass(frozen=True)
class Segment:
    """Inclusive ply range of a trajectory, at least two points."""

    trajectory: Trajectory
    start_ply: int
    end_ply: int

    def __post_init__(self):
        if not 0 <= self.start_ply < self.end_ply < len(self.trajectory):
            raise ValueError(
                f"segment [{self.start_ply}, {self.end_ply}] invalid for "
                f"trajectory of length {len(self.trajectory)}"
            )


def segment_direction(segment: Segment, target) -> float:
    """Cosine between segment displacement and the pull toward `target`.

    Both vectors are restricted to the target's declared dimensions.
    Returns NON_CONVERGING when either restricted vector is zero.
    """
    dims = sorted(target)
    if not dims:
        raise ValueError("target declares no dimensions")
    t = segment.trajectory
    v_start = t.values[segment.start_ply, [int(d) for d in dims]]
    v_end = t.values[segment.end_ply, [int(d) for d in dims]]
    goal = np.array([target[d] for d in dims], dtype=float)
    u = v_end - v_start
    w = goal - v_start
    nu = float(np.linalg.norm(u))
    nw = float(np.linalg.norm(w))
    if nu == 0.0 or nw == 0.0:
        return NON_CONVERGING
    cos = float(np.dot(u, w) / (nu * nw))
    return max(-1.0, min(1.0, cos))


def distance_series(t: Trajectory, c: ConceptSpec) -> List[float]:
    """Interval-scaled distance to the concept centroid at every ply."""
    return [scaled_distance(t.vector_at(i), c) for i in range(len(t))]


def trend_delta(t: Trajectory, dim: DimensionId, end_ply: int, window: int) -> float:
    """value(end_ply) - value(max(0, end_ply - window + 1)) on one dimension."""
    if not 0 <= end_ply < len(t):
        raise ValueError(f"end_ply {end_ply} outside trajectory")
    start = max(0, end_ply - window + 1)
    column = t.values[:, dim]
    return float(column[end_ply] - column[start])


CSV_HEADER = "game_id,ply,move_number,side_moved,perspective,MAT,MOB,VUL,CTR,FLO,PRS,SPA"


def write_trajectory_csv(trajectories: Iterable[Trajectory], out: TextIO) -> None:
    """Write rows for each trajectory with 6-decimal fixed formatting."""
    out.write(CSV_HEADER + "\n")
    for t in trajectories:
        for ply in range(len(t)):
            values = ",".join(f"{x:.6f}" for x in t.values[ply])
            out.write(
                f"{t.game_id},{ply},{t.move_numbers[ply]},{t.sides_moved[ply]},"
                f"{t.perspective},{values}\n"
            )

"""Chess positions as points in an interpretable seven-dimension concept space.

The package encodes positions from both players' perspectives, anchors
strategy concepts as interval-box regions over three domains, and detects
strategy episodes in whole games as sustained, converging trajectory runs
inside those regions.
"""

from .board import Color, Move, Piece, PieceKind, Position, parse_fen, startpos
from .dimensions import DIMENSIONS, DimensionId, Domain, PerspectiveVector
from .features import encode_both, encode_position
from .pgn import GameRecord, PgnError, SanError, parse_pgn, read_pgn
from .recognition import RecognitionEvent, detect_events, explain_event
from .space import (
    ConceptSpec,
    ConfigError,
    Direction,
    RegionSpec,
    SpaceConfig,
    TrendConstraint,
    centroid,
    default_config,
    load_config,
    membership,
    seed_config,
    typicality,
)
from .trajectory import (
    NON_CONVERGING,
    DualTrajectories,
    Trajectory,
    build_trajectories,
    smooth,
    write_trajectory_csv,
)

__version__ = "0.1.0"

__all__ = [
    "Color",
    "Move",
    "Piece",
    "PieceKind",
    "Position",
    "parse_fen",
    "startpos",
    "DIMENSIONS",
    "DimensionId",
    "Domain",
    "PerspectiveVector",
    "encode_both",
    "encode_position",
    "GameRecord",
    "PgnError",
    "SanError",
    "parse_pgn",
    "read_pgn",
    "RecognitionEvent",
    "detect_events",
    "explain_event",
    "ConceptSpec",
    "ConfigError",
    "Direction",
    "RegionSpec",
    "SpaceConfig",
    "TrendConstraint",
    "centroid",
    "default_config",
    "seed_config",
    "load_config",
    "membership",
    "typicality",
    "NON_CONVERGING",
    "DualTrajectories",
    "Trajectory",
    "build_trajectories",
    "smooth",
    "write_trajectory_csv",
    "__version__",
]

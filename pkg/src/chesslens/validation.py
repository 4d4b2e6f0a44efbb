"""Input coercion helpers shared by the estimators and the CLI.

Each helper accepts either the domain object itself or an obvious textual
form and returns the domain object, raising ValueError with a usable
message otherwise.
"""

from __future__ import annotations

import os
from typing import Union

from .board import Color, Position, parse_fen
from .pgn import GameRecord, parse_pgn
from .space import SpaceConfig, config_from_dict, load_config

_COLOR_NAMES = {
    "white": Color.WHITE,
    "w": Color.WHITE,
    "black": Color.BLACK,
    "b": Color.BLACK,
}


def as_position(value: Union[Position, str]) -> Position:
    """Accept a Position or a FEN string."""
    if isinstance(value, Position):
        return value
    if isinstance(value, str):
        return parse_fen(value)
    raise ValueError(f"expected a Position or FEN string, got {type(value).__name__}")


def as_color(value: Union[Color, str, int]) -> Color:
    """Accept a Color, its name ('white'/'black'/'w'/'b'), or 0/1."""
    if isinstance(value, Color):
        return value
    if isinstance(value, str):
        try:
            return _COLOR_NAMES[value.strip().lower()]
        except KeyError:
            raise ValueError(f"unknown color {value!r}") from None
    if isinstance(value, int) and value in (0, 1):
        return Color(value)
    raise ValueError(f"cannot interpret {value!r} as a color")


def as_game_record(value: Union[GameRecord, str]) -> GameRecord:
    """Accept a GameRecord or the PGN text of exactly one game."""
    if isinstance(value, GameRecord):
        return value
    if isinstance(value, str):
        games = parse_pgn(value)
        if len(games) != 1:
            raise ValueError(f"expected PGN text with exactly one game, found {len(games)}")
        return games[0]
    raise ValueError(f"expected a GameRecord or PGN text, got {type(value).__name__}")


def as_space_config(value) -> SpaceConfig:
    """Accept a SpaceConfig, a configuration dict, or a file path."""
    if isinstance(value, SpaceConfig):
        return value
    if isinstance(value, dict):
        return config_from_dict(value)
    if isinstance(value, (str, os.PathLike)):
        return load_config(value)
    raise ValueError(
        f"expected a SpaceConfig, config dict, or path, got {type(value).__name__}"
    )


def check_smooth_window(value) -> int:
    """An odd integer >= 1."""
    try:
        window = int(value)
    except (TypeError, ValueError):
        raise ValueError(f"smoothing window must be an integer, got {value!r}") from None
    if window < 1 or window % 2 == 0:
        raise ValueError(f"smoothing window must be odd and >= 1, got {window}")
    return window

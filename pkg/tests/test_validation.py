"""Tests for the input coercion helpers."""

import pytest

from chesslens.board import Color, Position, parse_fen, startpos
from chesslens.pgn import GameRecord, parse_pgn
from chesslens.space import SpaceConfig, default_config
from chesslens.validation import (
    as_color,
    as_game_record,
    as_position,
    as_space_config,
    check_smooth_window,
)

SINGLE_GAME = """[Event "t"]
[White "A"]
[Black "B"]
[Result "1-0"]

1. e4 e5 2. Qh5 Nc6 3. Bc4 Nf6 4. Qxf7# 1-0
"""


def test_as_position_passthrough():
    pos = startpos()
    assert as_position(pos) is pos


def test_as_position_from_fen():
    pos = as_position("rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1")
    assert isinstance(pos, Position)
    assert pos == startpos()


def test_as_position_rejects_bad_fen():
    with pytest.raises(ValueError):
        as_position("not a fen")


def test_as_position_rejects_other_types():
    with pytest.raises(ValueError, match="Position or FEN"):
        as_position(42)


@pytest.mark.parametrize(
    "value,expected",
    [
        ("white", Color.WHITE),
        ("WHITE", Color.WHITE),
        (" w ", Color.WHITE),
        ("black", Color.BLACK),
        ("b", Color.BLACK),
        (0, Color.WHITE),
        (1, Color.BLACK),
        (Color.BLACK, Color.BLACK),
    ],
)
def test_as_color_accepted_forms(value, expected):
    assert as_color(value) == expected


@pytest.mark.parametrize("value", ["green", 2, -1, 0.5, None])
def test_as_color_rejections(value):
    with pytest.raises(ValueError):
        as_color(value)


def test_as_game_record_passthrough_and_text():
    record = parse_pgn(SINGLE_GAME)[0]
    assert as_game_record(record) is record
    again = as_game_record(SINGLE_GAME)
    assert isinstance(again, GameRecord)
    assert again.moves == record.moves


def test_as_game_record_rejects_multi_game_text():
    with pytest.raises(ValueError, match="exactly one game"):
        as_game_record(SINGLE_GAME + "\n" + SINGLE_GAME)


def test_as_game_record_rejects_other_types():
    with pytest.raises(ValueError):
        as_game_record(["1. e4"])


def test_as_space_config_forms(tmp_path):
    cfg = default_config()
    assert as_space_config(cfg) is cfg
    from_dict = as_space_config(cfg.to_dict())
    assert isinstance(from_dict, SpaceConfig)
    assert from_dict.to_dict() == cfg.to_dict()
    path = tmp_path / "space.json"
    import json

    path.write_text(json.dumps(cfg.to_dict()), encoding="utf-8")
    from_path = as_space_config(str(path))
    assert from_path.to_dict() == cfg.to_dict()


def test_as_space_config_rejects_other_types():
    with pytest.raises(ValueError):
        as_space_config(3.14)


@pytest.mark.parametrize("value,expected", [(1, 1), (3, 3), ("5", 5), (7.0, 7)])
def test_check_smooth_window_accepts_odd(value, expected):
    assert check_smooth_window(value) == expected


@pytest.mark.parametrize("value", [0, 2, 4, -3, "two", None])
def test_check_smooth_window_rejections(value):
    with pytest.raises(ValueError):
        check_smooth_window(value)

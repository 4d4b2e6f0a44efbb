"""Raw positional features and their normalization into PerspectiveVectors.

Every feature is computed for one perspective color `c` and is a pure
function of the position. Attack relations are pseudo-legal throughout
(pins are ignored), matching the board module's `attackers`.
"""

from __future__ import annotations

from dataclasses import replace
from typing import NamedTuple

from .board import (
    KING_ATTACKS,
    PIECE_VALUES,
    Color,
    PieceKind,
    Position,
    _attacked,
    _attackers_bb,
    _bits,
    legal_moves,
    parse_square,
    pseudo_legal_count,
)
from .dimensions import DimensionId, PerspectiveVector

CENTER_SQUARES = tuple(parse_square(s) for s in ("d4", "e4", "d5", "e5"))

# Divisors of the linear clamp normalization, one per raw feature.
_SCALE = {
    DimensionId.MOB: 60.0,
    DimensionId.CTR: 12.0,
    DimensionId.PRS: 20.0,
    DimensionId.SPA: 8.0,
    DimensionId.VUL: 16.0,
}


def _clamp01(x: float) -> float:
    return 0.0 if x < 0.0 else 1.0 if x > 1.0 else x


def raw_material(p: Position, c: Color) -> int:
    """Signed non-king material difference from c's point of view."""
    total = 0
    for kind, value in PIECE_VALUES.items():
        total += value * bin(p.pieces(c, kind)).count("1")
        total -= value * bin(p.pieces(Color(1 - c), kind)).count("1")
    return total


def raw_mobility(p: Position, c: Color) -> int:
    """Number of legal moves for c with the move forced to c.

    The synthetic position clears any en-passant square. When handing the
    move to c is illegal (c already attacks the enemy king), the count
    falls back to c's pseudo-legal moves.
    """
    if p.side_to_move is Color(c) and p.ep_square is None:
        synthetic = p
    else:
        synthetic = replace(p, side_to_move=Color(c), ep_square=None)
    occ = synthetic.occupancy()
    if _attacked(synthetic.bb, occ, synthetic.king_square(Color(1 - c)), c):
        return pseudo_legal_count(p, c)
    return len(legal_moves(synthetic))


def raw_control(p: Position, c: Color) -> int:
    """Attack counts over d4/e4/d5/e5 plus occupancy bonuses for c."""
    occ = p.occupancy()
    own = p.occupancy(c)
    total = 0
    for sq in CENTER_SQUARES:
        total += bin(_attackers_bb(p.bb, occ, sq, c)).count("1")
        if own & (1 << sq):
            total += 1
    return total


def raw_pressure(p: Position, c: Color) -> int:
    """Value of attacked enemy pieces plus a king-zone attacker bonus.

    The bonus is 2 per distinct piece of c attacking at least one EMPTY
    square among the 8 adjacent to the enemy king.
    """
    opp = Color(1 - c)
    occ = p.occupancy()
    bb = p.bb
    total = 0
    for kind, value in PIECE_VALUES.items():
        for sq in _bits(p.pieces(opp, kind)):
            if _attacked(bb, occ, sq, c):
                total += value
    zone = KING_ATTACKS[p.king_square(opp)] & ~occ
    zone_attackers = 0
    for sq in _bits(zone):
        zone_attackers |= _attackers_bb(bb, occ, sq, c)
    total += 2 * bin(zone_attackers).count("1")
    return total


def raw_space(p: Position, c: Color) -> int:
    """Own non-king pieces on the opponent's half (ranks 5-8 from c's side)."""
    half = 0xFFFFFFFF00000000 if c is Color.WHITE else 0x00000000FFFFFFFF
    total = 0
    for kind in PIECE_VALUES:
        total += bin(p.pieces(c, kind) & half).count("1")
    return total


def raw_vulnerability(p: Position, c: Color) -> int:
    """Hanging material plus exposure of the squares around c's king.

    Sum of values of own non-king pieces that are attacked and undefended,
    plus 1 per opponent-attacked empty-or-hostile square adjacent to the king.
    """
    opp = Color(1 - c)
    occ = p.occupancy()
    own = p.occupancy(c)
    bb = p.bb
    total = 0
    for kind, value in PIECE_VALUES.items():
        for sq in _bits(p.pieces(c, kind)):
            if _attacked(bb, occ, sq, opp) and not _attacked(bb, occ, sq, c):
                total += value
    zone = KING_ATTACKS[p.king_square(c)] & ~own
    for sq in _bits(zone):
        if _attacked(bb, occ, sq, opp):
            total += 1
    return total


def raw_flow(p: Position, c: Color) -> float:
    """Fraction of own non-pawn, non-king pieces defended by another piece."""
    occ = p.occupancy()
    bb = p.bb
    defended = 0
    count = 0
    for kind in (PieceKind.KNIGHT, PieceKind.BISHOP, PieceKind.ROOK, PieceKind.QUEEN):
        for sq in _bits(p.pieces(c, kind)):
            count += 1
            if _attacked(bb, occ, sq, c):
                defended += 1
    return defended / count if count else 0.0


class BothPerspectives(NamedTuple):
    """Both encodings of one position; indexable by Color."""

    white: PerspectiveVector
    black: PerspectiveVector


def encode_position(p: Position, c: Color) -> PerspectiveVector:
    """Embed the position for perspective c, each dimension clamped to [0, 1]."""
    return PerspectiveVector(
        MAT=_clamp01(0.5 + raw_material(p, c) / 20.0),
        MOB=_clamp01(raw_mobility(p, c) / _SCALE[DimensionId.MOB]),
        VUL=_clamp01(raw_vulnerability(p, c) / _SCALE[DimensionId.VUL]),
        CTR=_clamp01(raw_control(p, c) / _SCALE[DimensionId.CTR]),
        FLO=_clamp01(raw_flow(p, c)),
        PRS=_clamp01(raw_pressure(p, c) / _SCALE[DimensionId.PRS]),
        SPA=_clamp01(raw_space(p, c) / _SCALE[DimensionId.SPA]),
    )


def encode_both(p: Position) -> BothPerspectives:
    return BothPerspectives(
        white=encode_position(p, Color.WHITE),
        black=encode_position(p, Color.BLACK),
    )

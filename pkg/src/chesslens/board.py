"""Bitboard chess engine: positions, FEN, attack relations, legal moves, perft.

Squares are integers 0..63 with a1 = 0, b1 = 1, ..., h8 = 63
(square = rank * 8 + file). Bitboards are plain Python ints.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from typing import Iterator, NamedTuple, Optional

STARTPOS_FEN = "rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1"


class Color(IntEnum):
    WHITE = 0
    BLACK = 1

    @property
    def opponent(self) -> "Color":
        return Color(1 - self.value)

    def __str__(self) -> str:
        return "white" if self is Color.WHITE else "black"


class PieceKind(IntEnum):
    PAWN = 0
    KNIGHT = 1
    BISHOP = 2
    ROOK = 3
    QUEEN = 4
    KING = 5


# Conventional material values; the king carries none.
PIECE_VALUES = {
    PieceKind.PAWN: 1,
    PieceKind.KNIGHT: 3,
    PieceKind.BISHOP: 3,
    PieceKind.ROOK: 5,
    PieceKind.QUEEN: 9,
}

_KIND_LETTERS = "pnbrqk"


class Piece(NamedTuple):
    color: Color
    kind: PieceKind

    @property
    def symbol(self) -> str:
        letter = _KIND_LETTERS[self.kind]
        return letter.upper() if self.color is Color.WHITE else letter


def square(file: int, rank: int) -> int:
    return rank * 8 + file


def square_file(sq: int) -> int:
    return sq & 7


def square_rank(sq: int) -> int:
    return sq >> 3


def square_name(sq: int) -> str:
    return "abcdefgh"[sq & 7] + str((sq >> 3) + 1)


def parse_square(name: str) -> int:
    if len(name) != 2 or name[0] not in "abcdefgh" or name[1] not in "12345678":
        raise ValueError(f"invalid square name: {name!r}")
    return (int(name[1]) - 1) * 8 + "abcdefgh".index(name[0])


# Move flags.
CAPTURE = 1
EN_PASSANT = 2
CASTLE_KINGSIDE = 4
CASTLE_QUEENSIDE = 8
DOUBLE_PUSH = 16


class Move(NamedTuple):
    from_sq: int
    to_sq: int
    promotion: Optional[PieceKind] = None
    flags: int = 0

    def uci(self) -> str:
        suffix = _KIND_LETTERS[self.promotion] if self.promotion is not None else ""
        return square_name(self.from_sq) + square_name(self.to_sq) + suffix

    def __repr__(self) -> str:
        return f"Move({self.uci()})"


def _move_sort_key(m: Move) -> tuple:
    promo = 0 if m.promotion is None else int(m.promotion)
    return (m.from_sq, m.to_sq, promo)


# ---------------------------------------------------------------------------
# Precomputed attack tables.

FILE_A = 0x0101010101010101
FILE_H = FILE_A << 7
RANK_1 = 0xFF
RANK_2 = RANK_1 << 8
RANK_7 = RANK_1 << 48
RANK_8 = RANK_1 << 56
ALL_SQUARES = (1 << 64) - 1

NORTH, SOUTH, EAST, WEST, NE, NW, SE, SW = range(8)
_DIR_DELTAS = {
    NORTH: (0, 1),
    SOUTH: (0, -1),
    EAST: (1, 0),
    WEST: (-1, 0),
    NE: (1, 1),
    NW: (-1, 1),
    SE: (1, -1),
    SW: (-1, -1),
}
_POSITIVE_DIRS = (NORTH, EAST, NE, NW)  # increasing square index


def _build_rays() -> list:
    rays = [[0] * 64 for _ in range(8)]
    for d, (df, dr) in _DIR_DELTAS.items():
        for sq in range(64):
            f, r = sq & 7, sq >> 3
            bb = 0
            while True:
                f += df
                r += dr
                if not (0 <= f < 8 and 0 <= r < 8):
                    break
                bb |= 1 << (r * 8 + f)
            rays[d][sq] = bb
    return rays


RAYS = _build_rays()


def _step_targets(sq: int, deltas) -> int:
    f, r = sq & 7, sq >> 3
    bb = 0
    for df, dr in deltas:
        nf, nr = f + df, r + dr
        if 0 <= nf < 8 and 0 <= nr < 8:
            bb |= 1 << (nr * 8 + nf)
    return bb


KNIGHT_ATTACKS = [
    _step_targets(sq, ((1, 2), (2, 1), (2, -1), (1, -2), (-1, -2), (-2, -1), (-2, 1), (-1, 2)))
    for sq in range(64)
]
KING_ATTACKS = [
    _step_targets(sq, ((0, 1), (1, 1), (1, 0), (1, -1), (0, -1), (-1, -1), (-1, 0), (-1, 1)))
    for sq in range(64)
]
# PAWN_ATTACKS[color][sq]: squares attacked by a pawn of `color` standing on sq.
PAWN_ATTACKS = (
    [_step_targets(sq, ((-1, 1), (1, 1))) for sq in range(64)],
    [_step_targets(sq, ((-1, -1), (1, -1))) for sq in range(64)],
)

ROOK_RAYS = [RAYS[NORTH][sq] | RAYS[SOUTH][sq] | RAYS[EAST][sq] | RAYS[WEST][sq] for sq in range(64)]
BISHOP_RAYS = [RAYS[NE][sq] | RAYS[NW][sq] | RAYS[SE][sq] | RAYS[SW][sq] for sq in range(64)]


def _bits(bb: int) -> Iterator[int]:
    while bb:
        lsb = bb & -bb
        yield lsb.bit_length() - 1
        bb ^= lsb


def _build_between() -> list:
    between = [[0] * 64 for _ in range(64)]
    for a in range(64):
        for d, (df, dr) in _DIR_DELTAS.items():
            f, r = a & 7, a >> 3
            path = 0
            while True:
                f += df
                r += dr
                if not (0 <= f < 8 and 0 <= r < 8):
                    break
                b = r * 8 + f
                between[a][b] = path
                path |= 1 << b
    return between


BETWEEN = _build_between()


def _rook_attacks(sq: int, occ: int) -> int:
    att = 0
    for d in (NORTH, EAST):
        ray = RAYS[d][sq]
        blockers = ray & occ
        if blockers:
            ray ^= RAYS[d][(blockers & -blockers).bit_length() - 1]
        att |= ray
    for d in (SOUTH, WEST):
        ray = RAYS[d][sq]
        blockers = ray & occ
        if blockers:
            ray ^= RAYS[d][blockers.bit_length() - 1]
        att |= ray
    return att


def _bishop_attacks(sq: int, occ: int) -> int:
    att = 0
    for d in (NE, NW):
        ray = RAYS[d][sq]
        blockers = ray & occ
        if blockers:
            ray ^= RAYS[d][(blockers & -blockers).bit_length() - 1]
        att |= ray
    for d in (SE, SW):
        ray = RAYS[d][sq]
        blockers = ray & occ
        if blockers:
            ray ^= RAYS[d][blockers.bit_length() - 1]
        att |= ray
    return att


# Castling-rights bits.
W_KINGSIDE, W_QUEENSIDE, B_KINGSIDE, B_QUEENSIDE = 1, 2, 4, 8
_CASTLE_MASK = [15] * 64
_CASTLE_MASK[parse_square("e1")] = 15 - (W_KINGSIDE | W_QUEENSIDE)
_CASTLE_MASK[parse_square("h1")] = 15 - W_KINGSIDE
_CASTLE_MASK[parse_square("a1")] = 15 - W_QUEENSIDE
_CASTLE_MASK[parse_square("e8")] = 15 - (B_KINGSIDE | B_QUEENSIDE)
_CASTLE_MASK[parse_square("h8")] = 15 - B_KINGSIDE
_CASTLE_MASK[parse_square("a8")] = 15 - B_QUEENSIDE


@dataclass(frozen=True)
class Position:
    """Immutable chess position.

    ``bb`` holds 12 bitboards indexed ``kind + 6 * color``.
    """

    bb: tuple
    side_to_move: Color
    castling: int
    ep_square: Optional[int]
    halfmove_clock: int
    fullmove_number: int

    def occupancy(self, color: Optional[Color] = None) -> int:
        cached = self.__dict__.get("_occ")
        if cached is None:
            b = self.bb
            white = b[0] | b[1] | b[2] | b[3] | b[4] | b[5]
            black = b[6] | b[7] | b[8] | b[9] | b[10] | b[11]
            cached = (white, black, white | black)
            self.__dict__["_occ"] = cached
        if color is None:
            return cached[2]
        return cached[color]

    def piece_at(self, sq: int) -> Optional[Piece]:
        bit = 1 << sq
        for color in (Color.WHITE, Color.BLACK):
            base = 6 * color
            for kind in PieceKind:
                if self.bb[base + kind] & bit:
                    return Piece(color, kind)
        return None

    def king_square(self, color: Color) -> int:
        return self.bb[6 * color + PieceKind.KING].bit_length() - 1

    def pieces(self, color: Color, kind: PieceKind) -> int:
        return self.bb[6 * color + kind]

    def __str__(self) -> str:
        rows = []
        for rank in range(7, -1, -1):
            row = []
            for file in range(8):
                piece = self.piece_at(rank * 8 + file)
                row.append(piece.symbol if piece else ".")
            rows.append(" ".join(row))
        return "\n".join(rows)


def _attacked(bb: tuple, occ: int, sq: int, by: Color) -> bool:
    """Whether any piece of `by` attacks `sq` (pseudo-legal, pins ignored)."""
    base = 6 * by
    if PAWN_ATTACKS[1 - by][sq] & bb[base + PieceKind.PAWN]:
        return True
    if KNIGHT_ATTACKS[sq] & bb[base + PieceKind.KNIGHT]:
        return True
    if KING_ATTACKS[sq] & bb[base + PieceKind.KING]:
        return True
    rq = bb[base + PieceKind.ROOK] | bb[base + PieceKind.QUEEN]
    if rq and ROOK_RAYS[sq] & rq and _rook_attacks(sq, occ) & rq:
        return True
    bq = bb[base + PieceKind.BISHOP] | bb[base + PieceKind.QUEEN]
    if bq and BISHOP_RAYS[sq] & bq and _bishop_attacks(sq, occ) & bq:
        return True
    return False


def _attackers_bb(bb: tuple, occ: int, sq: int, by: Color) -> int:
    base = 6 * by
    att = PAWN_ATTACKS[1 - by][sq] & bb[base + PieceKind.PAWN]
    att |= KNIGHT_ATTACKS[sq] & bb[base + PieceKind.KNIGHT]
    att |= KING_ATTACKS[sq] & bb[base + PieceKind.KING]
    rq = bb[base + PieceKind.ROOK] | bb[base + PieceKind.QUEEN]
    if rq and ROOK_RAYS[sq] & rq:
        att |= _rook_attacks(sq, occ) & rq
    bq = bb[base + PieceKind.BISHOP] | bb[base + PieceKind.QUEEN]
    if bq and BISHOP_RAYS[sq] & bq:
        att |= _bishop_attacks(sq, occ) & bq
    return att


def is_square_attacked(p: Position, sq: int, by: Color) -> bool:
    """Pseudo-legal attack test: pins on the attacker are ignored."""
    return _attacked(p.bb, p.occupancy(), sq, by)


def attackers(p: Position, sq: int, by: Color) -> set:
    """Squares of all pieces of `by` attacking `sq` (pseudo-legal)."""
    return set(_bits(_attackers_bb(p.bb, p.occupancy(), sq, by)))


def is_check(p: Position, color: Color) -> bool:
    return _attacked(p.bb, p.occupancy(), p.king_square(color), Color(1 - color))


# ---------------------------------------------------------------------------
# FEN.


def parse_fen(fen: str) -> Position:
    """Parse a FEN string, validating structure and basic legality.

    Raises ValueError with a specific message on malformed input.
    """
    fields = fen.split()
    if len(fields) != 6:
        raise ValueError(f"FEN must have 6 fields, got {len(fields)}: {fen!r}")
    placement, side, castling, ep, halfmove, fullmove = fields

    ranks = placement.split("/")
    if len(ranks) != 8:
        raise ValueError(f"FEN placement must have 8 ranks, got {len(ranks)}")
    bb = [0] * 12
    for i, row in enumerate(ranks):
        rank = 7 - i
        file = 0
        for ch in row:
            if ch.isdigit():
                step = int(ch)
                if not 1 <= step <= 8:
                    raise ValueError(f"invalid skip count {ch!r} in FEN rank {rank + 1}")
                file += step
            else:
                lower = ch.lower()
                if lower not in _KIND_LETTERS:
                    raise ValueError(f"invalid piece letter {ch!r} in FEN")
                if file >= 8:
                    raise ValueError(f"FEN rank {rank + 1} overflows 8 files")
                color = Color.WHITE if ch.isupper() else Color.BLACK
                kind = PieceKind(_KIND_LETTERS.index(lower))
                bb[6 * color + kind] |= 1 << (rank * 8 + file)
                file += 1
        if file != 8:
            raise ValueError(f"FEN rank {rank + 1} has {file} files, expected 8")

    for color in (Color.WHITE, Color.BLACK):
        kings = bb[6 * color + PieceKind.KING]
        if bin(kings).count("1") != 1:
            raise ValueError(f"{color} must have exactly one king")
    pawns = bb[PieceKind.PAWN] | bb[6 + PieceKind.PAWN]
    if pawns & (RANK_1 | RANK_8):
        raise ValueError("pawns on rank 1 or 8")

    if side == "w":
        stm = Color.WHITE
    elif side == "b":
        stm = Color.BLACK
    else:
        raise ValueError(f"invalid side-to-move field {side!r}")

    rights = 0
    if castling != "-":
        order = "KQkq"
        bits = (W_KINGSIDE, W_QUEENSIDE, B_KINGSIDE, B_QUEENSIDE)
        pos = -1
        for ch in castling:
            if ch not in order:
                raise ValueError(f"invalid castling field {castling!r}")
            idx = order.index(ch)
            if idx <= pos:
                raise ValueError(f"invalid castling field {castling!r}")
            pos = idx
            rights |= bits[idx]

    ep_sq: Optional[int] = None
    if ep != "-":
        try:
            ep_sq = parse_square(ep)
        except ValueError:
            raise ValueError(f"invalid en-passant field {ep!r}") from None
        if square_rank(ep_sq) not in (2, 5):
            raise ValueError(f"en-passant square {ep!r} not on rank 3 or 6")

    try:
        hm = int(halfmove)
        fm = int(fullmove)
    except ValueError:
        raise ValueError(f"invalid move counters {halfmove!r} {fullmove!r}") from None
    if hm < 0 or fm < 1:
        raise ValueError(f"invalid move counters {halfmove!r} {fullmove!r}")

    p = Position(tuple(bb), stm, rights, ep_sq, hm, fm)
    occ = p.occupancy()
    if _attacked(p.bb, occ, p.king_square(Color(1 - stm)), stm):
        raise ValueError("side not to move is in check")
    return p


def to_fen(p: Position) -> str:
    rows = []
    for rank in range(7, -1, -1):
        row = ""
        empty = 0
        for file in range(8):
            piece = p.piece_at(rank * 8 + file)
            if piece is None:
                empty += 1
            else:
                if empty:
                    row += str(empty)
                    empty = 0
                row += piece.symbol
        if empty:
            row += str(empty)
        rows.append(row)
    castling = ""
    for bit, ch in ((W_KINGSIDE, "K"), (W_QUEENSIDE, "Q"), (B_KINGSIDE, "k"), (B_QUEENSIDE, "q")):
        if p.castling & bit:
            castling += ch
    ep = square_name(p.ep_square) if p.ep_square is not None else "-"
    side = "w" if p.side_to_move is Color.WHITE else "b"
    return " ".join(
        ["/".join(rows), side, castling or "-", ep, str(p.halfmove_clock), str(p.fullmove_number)]
    )


def startpos() -> Position:
    return parse_fen(STARTPOS_FEN)


# ---------------------------------------------------------------------------
# Move generation.


def _pawn_moves(p: Position, side: Color, own: int, enemy: int, occ: int, out: list) -> None:
    pawns = p.bb[6 * side + PieceKind.PAWN]
    if not pawns:
        return
    empty = ~occ & ALL_SQUARES
    ep_bit = 1 << p.ep_square if p.ep_square is not None else 0
    if side is Color.WHITE:
        promo_rank = RANK_8
        single = (pawns << 8) & empty
        double = ((single & (RANK_1 << 16)) << 8) & empty
        cap_w = ((pawns & ~FILE_A) << 7) & (enemy | ep_bit)
        cap_e = ((pawns & ~FILE_H) << 9) & (enemy | ep_bit)
        deltas = (8, 16, 7, 9)
    else:
        promo_rank = RANK_1
        single = (pawns >> 8) & empty
        double = ((single & (RANK_1 << 40)) >> 8) & empty
        cap_w = ((pawns & ~FILE_H) >> 7) & (enemy | ep_bit)
        cap_e = ((pawns & ~FILE_A) >> 9) & (enemy | ep_bit)
        deltas = (-8, -16, -7, -9)

    def emit(to_sq: int, delta: int, flags: int) -> None:
        from_sq = to_sq - delta
        if (1 << to_sq) & promo_rank:
            for kind in (PieceKind.KNIGHT, PieceKind.BISHOP, PieceKind.ROOK, PieceKind.QUEEN):
                out.append(Move(from_sq, to_sq, kind, flags))
        else:
            out.append(Move(from_sq, to_sq, None, flags))

    for to_sq in _bits(single):
        emit(to_sq, deltas[0], 0)
    for to_sq in _bits(double):
        out.append(Move(to_sq - deltas[1], to_sq, None, DOUBLE_PUSH))
    for to_sq in _bits(cap_w):
        flags = CAPTURE | (EN_PASSANT if (1 << to_sq) & ep_bit else 0)
        emit(to_sq, deltas[2], flags)
    for to_sq in _bits(cap_e):
        flags = CAPTURE | (EN_PASSANT if (1 << to_sq) & ep_bit else 0)
        emit(to_sq, deltas[3], flags)


def _piece_moves(p: Position, side: Color, own: int, enemy: int, occ: int, out: list) -> None:
    base = 6 * side
    for from_sq in _bits(p.bb[base + PieceKind.KNIGHT]):
        for to_sq in _bits(KNIGHT_ATTACKS[from_sq] & ~own):
            out.append(Move(from_sq, to_sq, None, CAPTURE if (1 << to_sq) & enemy else 0))
    for from_sq in _bits(p.bb[base + PieceKind.BISHOP]):
        for to_sq in _bits(_bishop_attacks(from_sq, occ) & ~own):
            out.append(Move(from_sq, to_sq, None, CAPTURE if (1 << to_sq) & enemy else 0))
    for from_sq in _bits(p.bb[base + PieceKind.ROOK]):
        for to_sq in _bits(_rook_attacks(from_sq, occ) & ~own):
            out.append(Move(from_sq, to_sq, None, CAPTURE if (1 << to_sq) & enemy else 0))
    for from_sq in _bits(p.bb[base + PieceKind.QUEEN]):
        att = _rook_attacks(from_sq, occ) | _bishop_attacks(from_sq, occ)
        for to_sq in _bits(att & ~own):
            out.append(Move(from_sq, to_sq, None, CAPTURE if (1 << to_sq) & enemy else 0))


def _castle_moves(p: Position, side: Color, occ: int, out: list, check_safety: bool = True) -> None:
    bb = p.bb
    opp = Color(1 - side)
    if side is Color.WHITE:
        ksq, k_bit, q_bit, rank = 4, W_KINGSIDE, W_QUEENSIDE, 0
    else:
        ksq, k_bit, q_bit, rank = 60, B_KINGSIDE, B_QUEENSIDE, 56
    if p.castling & k_bit:
        path = (1 << (rank + 5)) | (1 << (rank + 6))
        if not occ & path:
            if not check_safety or not any(
                _attacked(bb, occ, s, opp) for s in (ksq, rank + 5, rank + 6)
            ):
                out.append(Move(ksq, rank + 6, None, CASTLE_KINGSIDE))
    if p.castling & q_bit:
        path = (1 << (rank + 1)) | (1 << (rank + 2)) | (1 << (rank + 3))
        if not occ & path:
            if not check_safety or not any(
                _attacked(bb, occ, s, opp) for s in (ksq, rank + 3, rank + 2)
            ):
                out.append(Move(ksq, rank + 2, None, CASTLE_QUEENSIDE))


def _pseudo_moves(p: Position, side: Color, include_castling: bool = False) -> list:
    own = p.occupancy(side)
    enemy = p.occupancy(Color(1 - side))
    occ = own | enemy
    out: list = []
    _pawn_moves(p, side, own, enemy, occ, out)
    _piece_moves(p, side, own, enemy, occ, out)
    ksq = p.king_square(side)
    for to_sq in _bits(KING_ATTACKS[ksq] & ~own):
        out.append(Move(ksq, to_sq, None, CAPTURE if (1 << to_sq) & enemy else 0))
    if include_castling:
        _castle_moves(p, side, occ, out, check_safety=False)
    return out


def pseudo_legal_count(p: Position, side: Color) -> int:
    """Number of pseudo-legal moves for `side` (pins and checks ignored)."""
    return len(_pseudo_moves(p, side, include_castling=True))


def _pins(p: Position, side: Color, ksq: int, own: int, occ: int) -> dict:
    """Map from pinned-piece square to the bitboard of squares it may stay on."""
    bb = p.bb
    opp = 6 * (1 - side)
    pinned: dict = {}
    rq = bb[opp + PieceKind.ROOK] | bb[opp + PieceKind.QUEEN]
    bq = bb[opp + PieceKind.BISHOP] | bb[opp + PieceKind.QUEEN]
    for sliders in (rq & ROOK_RAYS[ksq], bq & BISHOP_RAYS[ksq]):
        for pot in _bits(sliders):
            between = BETWEEN[ksq][pot]
            blockers = between & occ
            if blockers and not blockers & (blockers - 1) and blockers & own:
                sq = blockers.bit_length() - 1
                pinned[sq] = between | (1 << pot)
    return pinned


def _is_legal_after(p: Position, m: Move) -> bool:
    child = _apply(p, m)
    side = p.side_to_move
    return not _attacked(child.bb, child.occupancy(), child.king_square(side), child.side_to_move)


def legal_moves(p: Position) -> tuple:
    """All legal moves, sorted by (from_sq, to_sq, promotion)."""
    cached = p.__dict__.get("_legal_moves")
    if cached is not None:
        return cached
    side = p.side_to_move
    opp = Color(1 - side)
    own = p.occupancy(side)
    enemy = p.occupancy(opp)
    occ = own | enemy
    ksq = p.king_square(side)
    out: list = []

    if _attacked(p.bb, occ, ksq, opp):
        for m in _pseudo_moves(p, side):
            if _is_legal_after(p, m):
                out.append(m)
    else:
        pinned = _pins(p, side, ksq, own, occ)
        candidates: list = []
        _pawn_moves(p, side, own, enemy, occ, candidates)
        _piece_moves(p, side, own, enemy, occ, candidates)
        for m in candidates:
            if m.flags & EN_PASSANT:
                # the capture clears two squares on one rank; verify directly
                if _is_legal_after(p, m):
                    out.append(m)
                continue
            allowed = pinned.get(m.from_sq)
            if allowed is None or (1 << m.to_sq) & allowed:
                out.append(m)
        occ_no_king = occ ^ (1 << ksq)
        for to_sq in _bits(KING_ATTACKS[ksq] & ~own):
            if not _attacked(p.bb, occ_no_king | (1 << to_sq), to_sq, opp):
                out.append(Move(ksq, to_sq, None, CAPTURE if (1 << to_sq) & enemy else 0))
        _castle_moves(p, side, occ, out)

    out.sort(key=_move_sort_key)
    result = tuple(out)
    p.__dict__["_legal_moves"] = result
    return result


def _apply(p: Position, m: Move) -> Position:
    bb = list(p.bb)
    side = p.side_to_move
    opp = Color(1 - side)
    base = 6 * side
    obase = 6 * opp
    from_bit = 1 << m.from_sq
    to_bit = 1 << m.to_sq

    kind = None
    for k in range(6):
        if bb[base + k] & from_bit:
            kind = k
            break
    if kind is None:
        raise ValueError(f"no {side} piece on {square_name(m.from_sq)}")

    captured = False
    if m.flags & EN_PASSANT:
        cap_sq = m.to_sq - 8 if side is Color.WHITE else m.to_sq + 8
        bb[obase + PieceKind.PAWN] ^= 1 << cap_sq
        captured = True
    else:
        for k in range(6):
            if bb[obase + k] & to_bit:
                bb[obase + k] ^= to_bit
                captured = True
                break

    bb[base + kind] ^= from_bit
    if m.promotion is not None:
        bb[base + m.promotion] |= to_bit
    else:
        bb[base + kind] |= to_bit

    if m.flags & CASTLE_KINGSIDE:
        rank = 0 if side is Color.WHITE else 56
        bb[base + PieceKind.ROOK] ^= (1 << (rank + 7)) | (1 << (rank + 5))
    elif m.flags & CASTLE_QUEENSIDE:
        rank = 0 if side is Color.WHITE else 56
        bb[base + PieceKind.ROOK] ^= (1 << rank) | (1 << (rank + 3))

    castling = p.castling & _CASTLE_MASK[m.from_sq] & _CASTLE_MASK[m.to_sq]
    ep = (m.from_sq + m.to_sq) // 2 if m.flags & DOUBLE_PUSH else None
    halfmove = 0 if kind == PieceKind.PAWN or captured else p.halfmove_clock + 1
    fullmove = p.fullmove_number + (1 if side is Color.BLACK else 0)
    return Position(tuple(bb), opp, castling, ep, halfmove, fullmove)


def apply_move(p: Position, m: Move) -> Position:
    """Apply a legal move; raises ValueError if `m` is not legal in `p`."""
    if m not in legal_moves(p):
        raise ValueError(f"illegal move {m.uci()} in {to_fen(p)}")
    return _apply(p, m)


def find_move(p: Position, from_sq: int, to_sq: int, promotion: Optional[PieceKind] = None) -> Move:
    """Resolve (from, to, promotion) to the legal Move carrying proper flags."""
    for m in legal_moves(p):
        if m.from_sq == from_sq and m.to_sq == to_sq and m.promotion == promotion:
            return m
    raise ValueError(
        f"no legal move {square_name(from_sq)}{square_name(to_sq)} in {to_fen(p)}"
    )


# ---------------------------------------------------------------------------
# Game state.


def insufficient_material(p: Position) -> bool:
    bb = p.bb
    for base in (0, 6):
        if bb[base + PieceKind.PAWN] or bb[base + PieceKind.ROOK] or bb[base + PieceKind.QUEEN]:
            return False
    minors = []
    for base in (0, 6):
        minors.append(bb[base + PieceKind.KNIGHT] | bb[base + PieceKind.BISHOP])
    counts = [bin(m).count("1") for m in minors]
    if max(counts) <= 1:
        if counts == [1, 1]:
            # two knights or knight vs bishop can still mate with helpmates;
            # only same-colored lone bishops are a dead draw
            wb = bb[PieceKind.BISHOP]
            bbis = bb[6 + PieceKind.BISHOP]
            if wb and bbis:
                light = 0x55AA55AA55AA55AA
                return bool(wb & light) == bool(bbis & light)
            return False
        return True
    return False


def game_result(p: Position) -> str:
    """One of 'ongoing', 'checkmate', 'stalemate', 'draw' (50-move or material)."""
    if not legal_moves(p):
        return "checkmate" if is_check(p, p.side_to_move) else "stalemate"
    if p.halfmove_clock >= 100:
        return "draw"
    if insufficient_material(p):
        return "draw"
    return "ongoing"


def color_flip(p: Position) -> Position:
    """Mirror the position vertically and swap colors (clocks preserved)."""

    def flip_bb(bb: int) -> int:
        return int.from_bytes(bb.to_bytes(8, "little"), "big")

    bb = [0] * 12
    for kind in range(6):
        bb[kind] = flip_bb(p.bb[6 + kind])
        bb[6 + kind] = flip_bb(p.bb[kind])
    castling = 0
    if p.castling & W_KINGSIDE:
        castling |= B_KINGSIDE
    if p.castling & W_QUEENSIDE:
        castling |= B_QUEENSIDE
    if p.castling & B_KINGSIDE:
        castling |= W_KINGSIDE
    if p.castling & B_QUEENSIDE:
        castling |= W_QUEENSIDE
    ep = p.ep_square ^ 56 if p.ep_square is not None else None
    return Position(
        tuple(bb),
        Color(1 - p.side_to_move),
        castling,
        ep,
        p.halfmove_clock,
        p.fullmove_number,
    )


def flip_move(m: Move) -> Move:
    return Move(m.from_sq ^ 56, m.to_sq ^ 56, m.promotion, m.flags)


# ---------------------------------------------------------------------------
# Perft.


def perft(p: Position, depth: int) -> int:
    """Node count of the legal-move tree at `depth` (bulk counting + cache)."""
    if depth <= 0:
        return 1
    cache: dict = {}

    def rec(pos: Position, d: int) -> int:
        key = (pos.bb, pos.side_to_move, pos.castling, pos.ep_square, d)
        count = cache.get(key)
        if count is None:
            moves = legal_moves(pos)
            if d == 1:
                count = len(moves)
            else:
                count = 0
                for m in moves:
                    count += rec(_apply(pos, m), d - 1)
            cache[key] = count
        return count

    return rec(p, depth)

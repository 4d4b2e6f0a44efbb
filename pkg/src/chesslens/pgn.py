"""PGN reading and SAN move resolution against the board module.

Comments, NAGs, and recursive variations are skipped; only mainline moves
are kept. Errors carry line/column (tokenizer) or game index and move
number (SAN resolution).
"""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass, field
from typing import Iterator, List, Optional, Tuple

from .board import (
    CAPTURE,
    CASTLE_KINGSIDE,
    CASTLE_QUEENSIDE,
    Color,
    Move,
    PieceKind,
    Position,
    apply_move,
    game_result,
    legal_moves,
    parse_fen,
    square_file,
    square_rank,
    startpos,
)


class PgnError(ValueError):
    """Malformed PGN: syntax or unresolvable SAN."""

    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line = line
        self.col = col
        if line:
            message = f"line {line}, column {col}: {message}"
        super().__init__(message)


class SanError(ValueError):
    """SAN token that matches zero or several legal moves."""


class ResultMismatchWarning(UserWarning):
    """Game result token contradicts the final position."""


_SAN_RE = re.compile(
    r"^(?P<piece>[KQRBN])?(?P<from_file>[a-h])?(?P<from_rank>[1-8])?"
    r"(?P<capture>x)?(?P<to>[a-h][1-8])(?:=?(?P<promo>[QRBN]))?$"
)
_PIECE_KINDS = {
    "K": PieceKind.KING,
    "Q": PieceKind.QUEEN,
    "R": PieceKind.ROOK,
    "B": PieceKind.BISHOP,
    "N": PieceKind.KNIGHT,
}


def parse_san(p: Position, token: str) -> Move:
    """Resolve a SAN token to the unique matching legal move."""
    text = token.rstrip("+#!?").replace("e.p.", "")
    if not text:
        raise SanError(f"empty SAN token {token!r}")

    if text in ("O-O", "0-0"):
        for m in legal_moves(p):
            if m.flags & CASTLE_KINGSIDE:
                return m
        raise SanError(f"castling {token!r} is not legal here")
    if text in ("O-O-O", "0-0-0"):
        for m in legal_moves(p):
            if m.flags & CASTLE_QUEENSIDE:
                return m
        raise SanError(f"castling {token!r} is not legal here")

    match = _SAN_RE.match(text)
    if not match:
        raise SanError(f"unrecognised SAN token {token!r}")
    kind = _PIECE_KINDS.get(match.group("piece"), PieceKind.PAWN)
    to_file = "abcdefgh".index(match.group("to")[0])
    to_rank = int(match.group("to")[1]) - 1
    to_sq = to_rank * 8 + to_file
    from_file = match.group("from_file")
    from_rank = match.group("from_rank")
    promo = _PIECE_KINDS[match.group("promo")] if match.group("promo") else None
    is_capture = match.group("capture") is not None

    candidates = []
    for m in legal_moves(p):
        if m.to_sq != to_sq or m.promotion != promo:
            continue
        piece = p.piece_at(m.from_sq)
        if piece.kind is not kind:
            continue
        if from_file is not None and square_file(m.from_sq) != "abcdefgh".index(from_file):
            continue
        if from_rank is not None and square_rank(m.from_sq) != int(from_rank) - 1:
            continue
        if is_capture and not m.flags & CAPTURE:
            continue
        if kind is PieceKind.PAWN and from_file is None and square_file(m.from_sq) != to_file:
            continue  # a plain pawn push never changes file
        candidates.append(m)

    if not candidates:
        raise SanError(f"no legal move matches {token!r}")
    if len(candidates) > 1:
        raise SanError(f"ambiguous SAN {token!r}: {[m.uci() for m in candidates]}")
    return candidates[0]


@dataclass
class GameRecord:
    """One parsed game: ordered headers, resolved mainline moves, start position."""

    headers: List[Tuple[str, str]] = field(default_factory=list)
    moves: List[Move] = field(default_factory=list)
    initial: Position = field(default_factory=startpos)

    def header(self, key: str, default: Optional[str] = None) -> Optional[str]:
        for k, v in self.headers:
            if k == key:
                return v
        return default

    @property
    def game_id(self) -> str:
        """Stable slug from White, Black, and the date's year."""
        parts = []
        for key in ("White", "Black"):
            value = self.header(key, "")
            surname = value.split(",")[0].strip() if value else ""
            if surname:
                parts.append(re.sub(r"[^a-z0-9]+", "_", surname.lower()).strip("_"))
        date = self.header("Date", "")
        year = date[:4] if date[:4].isdigit() else ""
        if year:
            parts.append(year)
        return "_".join(p for p in parts if p) or "game"

    def positions(self) -> Iterator[Position]:
        """Yield the initial position and every successor (moves + 1 items)."""
        p = self.initial
        yield p
        for m in self.moves:
            p = apply_move(p, m)
            yield p

    def final_position(self) -> Position:
        p = self.initial
        for m in self.moves:
            p = apply_move(p, m)
        return p


_RESULT_TOKENS = ("1-0", "0-1", "1/2-1/2", "*")
_TAG_RE = re.compile(r'\[\s*(?P<key>[A-Za-z0-9_]+)\s+"(?P<value>(?:[^"\\]|\\.)*)"\s*\]')


def _tokenize(text: str) -> Iterator[tuple]:
    """Yield (kind, value, line, col); kinds: tag, san, result, movenum, nag, open, close."""
    i = 0
    line = 1
    col = 1
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "%" and col == 1:  # escape line
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch == ";":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch == "{":
            start_line, start_col = line, col
            i += 1
            col += 1
            while i < n and text[i] != "}":
                if text[i] == "\n":
                    line += 1
                    col = 1
                else:
                    col += 1
                i += 1
            if i >= n:
                raise PgnError("unterminated comment", start_line, start_col)
            i += 1
            col += 1
            continue
        if ch == "[":
            match = _TAG_RE.match(text, i)
            if not match:
                raise PgnError("malformed tag pair", line, col)
            value = re.sub(r"\\(.)", r"\1", match.group("value"))
            yield ("tag", (match.group("key"), value), line, col)
            consumed = match.end() - i
            col += consumed
            i = match.end()
            continue
        if ch == "(":
            yield ("open", "(", line, col)
            i += 1
            col += 1
            continue
        if ch == ")":
            yield ("close", ")", line, col)
            i += 1
            col += 1
            continue
        if ch == "$":
            j = i + 1
            while j < n and text[j].isdigit():
                j += 1
            if j == i + 1:
                raise PgnError("malformed NAG", line, col)
            yield ("nag", text[i:j], line, col)
            col += j - i
            i = j
            continue
        # word token: SAN, move number, or result
        j = i
        while j < n and text[j] not in " \t\r\n{}()[];":
            j += 1
        word = text[i:j]
        if word in _RESULT_TOKENS:
            yield ("result", word, line, col)
        elif re.fullmatch(r"\d+\.*", word):
            yield ("movenum", word, line, col)
        elif re.fullmatch(r"\.+", word):
            pass  # stray continuation dots
        else:
            yield ("san", word, line, col)
        col += j - i
        i = j
    return


def parse_pgn(text: str) -> List[GameRecord]:
    """Parse PGN text into GameRecords (multi-game input supported)."""
    games: List[GameRecord] = []
    headers: List[Tuple[str, str]] = []
    moves: List[Move] = []
    position: Optional[Position] = None
    in_movetext = False
    variation_depth = 0

    def start_movetext() -> None:
        nonlocal position, in_movetext
        if position is None:
            fen = None
            for k, v in headers:
                if k == "FEN":
                    fen = v
            try:
                position = parse_fen(fen) if fen else startpos()
            except ValueError as exc:
                raise PgnError(f"game {len(games) + 1}: bad FEN header: {exc}") from exc
            in_movetext = True

    def finish_game(result_token: Optional[str]) -> None:
        nonlocal headers, moves, position, in_movetext, variation_depth
        if not headers and not moves and result_token is None:
            return
        record = GameRecord(headers=headers, moves=moves, initial=_initial(headers))
        _check_result(record, result_token, len(games) + 1)
        games.append(record)
        headers = []
        moves = []
        position = None
        in_movetext = False
        variation_depth = 0

    def _initial(hdrs: List[Tuple[str, str]]) -> Position:
        for k, v in hdrs:
            if k == "FEN":
                return parse_fen(v)
        return startpos()

    for kind, value, line, col in _tokenize(text):
        if kind == "tag":
            if in_movetext or moves:
                finish_game(None)
            headers.append(value)
            continue
        if kind == "open":
            start_movetext()
            variation_depth += 1
            continue
        if kind == "close":
            if variation_depth == 0:
                raise PgnError("unmatched ')'", line, col)
            variation_depth -= 1
            continue
        if variation_depth > 0:
            continue  # mainline only
        if kind in ("movenum", "nag"):
            start_movetext()
            continue
        if kind == "san":
            start_movetext()
            try:
                move = parse_san(position, value)
            except SanError as exc:
                raise PgnError(
                    f"game {len(games) + 1}, move {position.fullmove_number}: {exc}",
                    line,
                    col,
                ) from exc
            moves.append(move)
            position = apply_move(position, move)
            continue
        if kind == "result":
            start_movetext()
            finish_game(value)

    if headers or moves:
        finish_game(None)
    return games


def _check_result(record: GameRecord, token: Optional[str], index: int) -> None:
    if token is None:
        return
    final = record.final_position()
    outcome = game_result(final)
    expected = None
    if outcome == "checkmate":
        expected = "0-1" if final.side_to_move is Color.WHITE else "1-0"
    elif outcome in ("stalemate", "draw"):
        expected = "1/2-1/2"
    if expected is not None and token != expected and token != "*":
        warnings.warn(
            f"game {index}: result token {token} but final position is {outcome}",
            ResultMismatchWarning,
            stacklevel=2,
        )
    header_result = record.header("Result")
    if header_result and header_result != token:
        warnings.warn(
            f"game {index}: Result header {header_result} differs from movetext token {token}",
            ResultMismatchWarning,
            stacklevel=2,
        )


def read_pgn(path) -> List[GameRecord]:
    with open(path, "r", encoding="utf-8", errors="replace") as fh:
        return parse_pgn(fh.read())

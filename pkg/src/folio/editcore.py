"""A headless modal edit engine.

Scripts use a small vi-like command language: ``w``/``b``/``e`` motions,
``d`` followed by a motion, ``P``/``p`` pastes from the kill ring, and ``u``
for recursive undo. Any command may carry a count; ``2d3w`` deletes six
words.

Undo never rewinds history. Each ``u`` applies the inverse of an earlier
record and appends that inverse as a new record, so after any other command
breaks the chain, further ``u`` presses undo the undos.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

__all__ = [
    "KILL_RING_SIZE",
    "Buffer",
    "Delete",
    "EditGroup",
    "EditRecord",
    "Motion",
    "ParseError",
    "PasteAfter",
    "PasteBefore",
    "Undo",
    "apply_command",
    "apply_script",
    "motion_target",
    "parse_script",
    "rect_cut",
    "rect_paste",
]

KILL_RING_SIZE = 16
MOTIONS = "wbe"

_SPACE, _WORD, _PUNCT = 0, 1, 2


def _kind(ch: str) -> int:
    if ch.isspace():
        return _SPACE
    if ch.isalnum() or ch == "_":
        return _WORD
    return _PUNCT


class ParseError(ValueError):
    def __init__(self, position: int, message: str):
        super().__init__(f"{message} at position {position}")
        self.position = position


# -- commands -----------------------------------------------------------------


@dataclass(frozen=True)
class Motion:
    kind: str
    count: int = 1

    def __post_init__(self) -> None:
        if self.kind not in MOTIONS or self.count < 1:
            raise ValueError(f"bad motion {self.kind!r} x{self.count}")


@dataclass(frozen=True)
class Delete:
    kind: str
    count: int = 1

    def __post_init__(self) -> None:
        if self.kind not in MOTIONS or self.count < 1:
            raise ValueError(f"bad delete {self.kind!r} x{self.count}")


@dataclass(frozen=True)
class PasteBefore:
    pass


@dataclass(frozen=True)
class PasteAfter:
    pass


@dataclass(frozen=True)
class Undo:
    pass


Command = Union[Motion, Delete, PasteBefore, PasteAfter, Undo]
_SIMPLE = {"P": PasteBefore, "p": PasteAfter, "u": Undo}


def _count(s: str, i: int) -> tuple[int, int]:
    """Parse an optional count at ``i``; returns (count, next index)."""
    j = i
    while j < len(s) and s[j].isdigit():
        j += 1
    if j == i:
        return 1, i
    if s[i] == "0":
        raise ParseError(i, "count may not start with 0")
    return int(s[i:j]), j


def parse_script(s: str) -> list[Command]:
    out: list[Command] = []
    i = 0
    while i < len(s):
        count, i = _count(s, i)
        if i >= len(s):
            raise ParseError(i, "dangling count")
        ch = s[i]
        if ch in MOTIONS:
            out.append(Motion(ch, count))
        elif ch in _SIMPLE:
            out.extend(_SIMPLE[ch]() for _ in range(count))
        elif ch == "d":
            inner, i = _count(s, i + 1)
            if i >= len(s) or s[i] not in MOTIONS:
                raise ParseError(i, "d needs a motion")
            out.append(Delete(s[i], count * inner))
        else:
            raise ParseError(i, f"unknown command {ch!r}")
        i += 1
    return out


# -- history ------------------------------------------------------------------


@dataclass(frozen=True)
class EditRecord:
    kind: str  # "insert" | "delete"
    offset: int
    text: str
    cursor_before: int
    cursor_after: int

    def __post_init__(self) -> None:
        if self.kind not in ("insert", "delete"):
            raise ValueError(f"unknown edit kind {self.kind!r}")

    def apply(self, text: str) -> str:
        if self.kind == "insert":
            return text[: self.offset] + self.text + text[self.offset :]
        end = self.offset + len(self.text)
        if text[self.offset : end] != self.text:
            raise ValueError("record does not match the buffer")
        return text[: self.offset] + text[end:]

    def inverse(self) -> EditRecord:
        kind = "delete" if self.kind == "insert" else "insert"
        return EditRecord(kind, self.offset, self.text, self.cursor_after, self.cursor_before)


@dataclass(frozen=True)
class EditGroup:
    """Several records that undo as one step (rectangle operations)."""

    records: tuple[EditRecord, ...]
    cursor_before: int
    cursor_after: int

    def apply(self, text: str) -> str:
        for rec in self.records:
            text = rec.apply(text)
        return text

    def inverse(self) -> EditGroup:
        inv = tuple(r.inverse() for r in reversed(self.records))
        return EditGroup(inv, self.cursor_after, self.cursor_before)


Edit = Union[EditRecord, EditGroup]


@dataclass
class Buffer:
    """Text plus cursor, kill ring and edit history.

    Commands mutate the buffer in place; ``warning`` holds the reason the
    most recent command was a no-op, if it was one.
    """

    text: str = ""
    cursor: int = 0
    kill_ring: deque[str] = field(default_factory=lambda: deque(maxlen=KILL_RING_SIZE))
    history: list[Edit] = field(default_factory=list)
    undo_walk: int | None = None
    warning: str | None = None

    def __post_init__(self) -> None:
        if not isinstance(self.kill_ring, deque) or self.kill_ring.maxlen != KILL_RING_SIZE:
            self.kill_ring = deque(self.kill_ring, maxlen=KILL_RING_SIZE)
        self.cursor = self.clamp(self.cursor)

    def clamp(self, pos: int) -> int:
        return max(0, min(pos, len(self.text) - 1))

    def kill(self, text: str) -> None:
        # newest at the left; deque(maxlen) drops the oldest on the right
        if text:
            self.kill_ring.appendleft(text)

    def record(self, edit: Edit) -> None:
        self.text = edit.apply(self.text)
        self.cursor = self.clamp(edit.cursor_after)
        self.history.append(edit)

    @property
    def lines(self) -> list[str]:
        return self.text.split("\n")


def motion_target(buffer: Buffer, kind: str, count: int = 1) -> int:
    """Offset reached by ``count`` small-word motions from the cursor.

    ``w`` may return ``len(text)`` at the end of the buffer; the caller
    clamps when moving the cursor.
    """
    text = buffer.text
    n = len(text)
    pos = buffer.cursor
    if n == 0:
        return 0
    for _ in range(count):
        if kind == "w":
            if pos >= n:
                break
            k = _kind(text[pos])
            if k != _SPACE:
                while pos < n and _kind(text[pos]) == k:
                    pos += 1
            while pos < n and _kind(text[pos]) == _SPACE:
                pos += 1
        elif kind == "b":
            if pos <= 0:
                break
            pos -= 1
            while pos > 0 and _kind(text[pos]) == _SPACE:
                pos -= 1
            k = _kind(text[pos])
            while pos > 0 and _kind(text[pos - 1]) == k:
                pos -= 1
        elif kind == "e":
            if pos >= n - 1:
                break
            pos += 1
            while pos < n - 1 and _kind(text[pos]) == _SPACE:
                pos += 1
            k = _kind(text[pos])
            while pos + 1 < n and _kind(text[pos + 1]) == k:
                pos += 1
        else:
            raise ValueError(f"unknown motion {kind!r}")
    return pos


def _delete(buf: Buffer, cmd: Delete) -> None:
    c = buf.cursor
    t = motion_target(buf, cmd.kind, cmd.count)
    if cmd.kind == "w":
        start, end, after = c, t, c
    elif cmd.kind == "b":
        start, end, after = t, c, t
    else:
        start, end, after = c, min(t + 1, len(buf.text)), c
    removed = buf.text[start:end]
    buf.record(EditRecord("delete", start, removed, c, after))
    buf.kill(removed)


def _paste(buf: Buffer, after: bool) -> None:
    if not buf.kill_ring:
        buf.warning = "kill ring is empty"
        return
    head = buf.kill_ring[0]
    c = buf.cursor
    if after:
        at = c + 1 if buf.text else 0
        cursor = c + len(head)
    else:
        at = c
        cursor = c + len(head) - 1
    buf.record(EditRecord("insert", at, head, c, cursor))


def _undo(buf: Buffer) -> None:
    walk = len(buf.history) if buf.undo_walk is None else buf.undo_walk
    if walk == 0:
        buf.warning = "nothing to undo"
        return
    walk -= 1
    buf.record(buf.history[walk].inverse())
    buf.undo_walk = walk


def apply_command(buffer: Buffer, cmd: Command) -> Buffer:
    buffer.warning = None
    if isinstance(cmd, Undo):
        _undo(buffer)
        return buffer
    buffer.undo_walk = None
    if isinstance(cmd, Motion):
        buffer.cursor = buffer.clamp(motion_target(buffer, cmd.kind, cmd.count))
    elif isinstance(cmd, Delete):
        _delete(buffer, cmd)
    elif isinstance(cmd, PasteBefore):
        _paste(buffer, after=False)
    elif isinstance(cmd, PasteAfter):
        _paste(buffer, after=True)
    else:
        raise TypeError(f"not a command: {cmd!r}")
    return buffer


def apply_script(buffer: Buffer, script: str | Iterable[Command]) -> Buffer:
    commands = parse_script(script) if isinstance(script, str) else script
    for cmd in commands:
        apply_command(buffer, cmd)
    return buffer


# -- rectangles ---------------------------------------------------------------


def _line_starts(text: str) -> list[int]:
    starts = [0]
    for i, ch in enumerate(text):
        if ch == "\n":
            starts.append(i + 1)
    return starts


def rect_cut(
    buffer: Buffer, top_left: tuple[int, int], bottom_right: tuple[int, int]
) -> tuple[Buffer, list[str]]:
    """Remove the inclusive character rectangle; short lines lose what they have."""
    (l0, c0), (l1, c1) = top_left, bottom_right
    lines = buffer.lines
    if not (0 <= l0 <= l1 < len(lines)) or not (0 <= c0 <= c1):
        raise IndexError(f"rectangle {top_left}-{bottom_right} outside {len(lines)} lines")
    buffer.warning = None
    buffer.undo_walk = None
    text, cursor = buffer.text, buffer.cursor
    records, rect = [], []
    for line in range(l0, l1 + 1):
        start = _line_starts(text)[line]
        piece = lines[line][c0 : c1 + 1]
        rect.append(piece)
        if piece:
            rec = EditRecord("delete", start + c0, piece, cursor, cursor)
            text = rec.apply(text)
            records.append(rec)
    buffer.record(EditGroup(tuple(records), cursor, cursor))
    return buffer, rect


def rect_paste(buffer: Buffer, at: tuple[int, int], rectangle: Sequence[str]) -> Buffer:
    """Insert rectangle row i at (line + i, col), padding and appending lines."""
    line0, col = at
    if not 0 <= line0 < len(buffer.lines) or col < 0:
        raise IndexError(f"paste position {at} outside {len(buffer.lines)} lines")
    buffer.warning = None
    buffer.undo_walk = None
    text, cursor = buffer.text, buffer.cursor
    records: list[EditRecord] = []

    def do(rec: EditRecord) -> None:
        nonlocal text
        text = rec.apply(text)
        records.append(rec)

    for i, piece in enumerate(rectangle):
        if not piece:
            continue
        line = line0 + i
        missing = line - (text.count("\n") + 1) + 1
        if missing > 0:
            do(EditRecord("insert", len(text), "\n" * missing, cursor, cursor))
        start = _line_starts(text)[line]
        end = text.find("\n", start)
        length = (len(text) if end == -1 else end) - start
        if length < col:
            do(EditRecord("insert", start + length, " " * (col - length), cursor, cursor))
        do(EditRecord("insert", start + col, piece, cursor, cursor))
    if records:
        buffer.record(EditGroup(tuple(records), cursor, cursor))
    return buffer

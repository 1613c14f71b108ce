"""Book-style page layout for source code.

Everything is measured in character cells. A page has real margins, an
optional ISO 216 shape (height = width x sqrt(2)), a configurable line
spacing, and an optional comment column on the left where comments are set
beside the code they annotate.

Layout never loses a byte: every token piece ends up in exactly one
:class:`StyledSpan` of exactly one row, including the newlines and the
indentation of moved comment lines, which travel as hidden spans.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

from .faces import face_for_token, find_markers
from .tokens import (
    CommentBlock,
    StructureItem,
    Token,
    extract_structure,
    group_comments,
    language_for_path,
    tokenize,
)

__all__ = [
    "Book",
    "Document",
    "HeaderBlock",
    "LayoutConfig",
    "LayoutError",
    "Page",
    "PageGeometry",
    "Row",
    "StyledSpan",
    "VisualRow",
    "build_book",
    "compute_page_geometry",
    "paginate",
    "reassemble",
    "split_comment_column",
    "wrap_long_line",
]

GUTTER = 2  # blank cells between the comment column and the code
ISO216 = math.sqrt(2.0)


class LayoutError(ValueError):
    pass


@dataclass(frozen=True)
class LayoutConfig:
    columns: int = 80
    ratio: str = "iso216"
    margin: int = 4
    line_spacing: float = 1.25
    comment_column: bool = True
    comment_fraction: float = 0.35
    cell: tuple[int, int] = (8, 16)
    rows: int | None = None  # text rows when ratio is "none"
    ligatures: bool = False

    def __post_init__(self) -> None:
        if not 40 <= self.columns <= 200:
            raise LayoutError(f"columns must lie in 40..200, got {self.columns}")
        if self.ratio not in ("iso216", "none"):
            raise LayoutError(f"ratio must be 'iso216' or 'none', got {self.ratio!r}")
        if self.margin < 0:
            raise LayoutError("margin must be non-negative")
        if not 1.0 <= self.line_spacing <= 3.0:
            raise LayoutError(f"line spacing must lie in 1.0..3.0, got {self.line_spacing}")
        if not 0.2 <= self.comment_fraction <= 0.5:
            raise LayoutError(f"comment fraction must lie in 0.2..0.5, got {self.comment_fraction}")
        if min(self.cell) <= 0:
            raise LayoutError("cell size must be positive")

    @classmethod
    def neutral(cls, **overrides) -> LayoutConfig:
        """No ligatures, no comment column, no margins, no page shape."""
        base = dict(ligatures=False, comment_column=False, margin=0, ratio="none")
        base.update(overrides)
        return cls(**base)


@dataclass(frozen=True)
class PageGeometry:
    page_width_px: float
    page_height_px: float
    text_columns: int
    text_rows: int
    margin_px: float
    row_height_px: float
    margin_chars: int = 0
    comment_columns: int = 0  # 0 when there is no comment column

    @property
    def code_columns(self) -> int:
        if not self.comment_columns:
            return self.text_columns
        return self.text_columns - self.comment_columns - GUTTER

    @property
    def page_columns(self) -> int:
        return self.text_columns + 2 * self.margin_chars


def compute_page_geometry(cfg: LayoutConfig) -> PageGeometry:
    cell_w, cell_h = cfg.cell
    width = (cfg.columns + 2 * cfg.margin) * cell_w
    margin_px = cfg.margin * cell_w
    row_height = cell_h * cfg.line_spacing
    if cfg.ratio == "iso216":
        height = width * ISO216
        rows = math.floor((height - 2 * margin_px) / row_height)
    else:
        rows = cfg.rows if cfg.rows is not None else 24
        height = rows * row_height + 2 * margin_px
    if rows < 4:
        raise LayoutError(f"page too small: {rows} text rows")
    comment = int(cfg.columns * cfg.comment_fraction) if cfg.comment_column else 0
    return PageGeometry(
        page_width_px=width,
        page_height_px=height,
        text_columns=cfg.columns,
        text_rows=rows,
        margin_px=margin_px,
        row_height_px=row_height,
        margin_chars=cfg.margin,
        comment_columns=comment,
    )


@dataclass(frozen=True)
class StyledSpan:
    text: str  # source text covered
    face: str
    start: int  # byte offsets into the source
    end: int
    line: int
    category: str = "text"
    display: str | None = None  # overrides ``text`` on screen; "" hides it

    @property
    def shown(self) -> str:
        return self.text if self.display is None else self.display

    @property
    def width(self) -> int:
        return len(self.shown)

    def split(self, at: int) -> tuple[StyledSpan, StyledSpan]:
        """Split after ``at`` characters of text."""
        head, tail = self.text[:at], self.text[at:]
        mid = self.start + len(head.encode("utf-8"))
        return (
            StyledSpan(head, self.face, self.start, mid, self.line, self.category),
            StyledSpan(tail, self.face, mid, self.end, self.line, self.category),
        )

    def hidden(self) -> StyledSpan:
        return StyledSpan(self.text, self.face, self.start, self.end, self.line, self.category, "")


@dataclass(frozen=True)
class Row:
    code: tuple[StyledSpan, ...] = ()
    comment: tuple[StyledSpan, ...] = ()
    source_line: int | None = None
    continuation: bool = False
    starts_definition: bool = False

    @property
    def code_text(self) -> str:
        return "".join(s.shown for s in self.code)

    @property
    def comment_text(self) -> str:
        return "".join(s.shown for s in self.comment)

    @property
    def spans(self) -> tuple[StyledSpan, ...]:
        return self.comment + self.code


@dataclass(frozen=True)
class Page:
    number: int
    rows: tuple[Row, ...]


@dataclass(frozen=True)
class HeaderBlock:
    title: str
    branch: str | None = None
    commit: str | None = None
    stats: tuple[int, int] = (0, 0)  # (lines, definitions)

    def __post_init__(self) -> None:
        if not self.title:
            raise LayoutError("a header needs a title")


@dataclass
class Document:
    title: str
    source: str
    language: str = "plain"
    tokens: list[Token] = field(default_factory=list)

    @classmethod
    def from_source(
        cls, source: bytes | str, language: str | None = None, title: str = "untitled"
    ) -> Document:
        lang = language or language_for_path(title)
        tokens = tokenize(source, lang)
        text = "".join(t.text for t in tokens)
        return cls(title or "untitled", text, lang, tokens)


@dataclass(frozen=True)
class Book:
    preface: HeaderBlock
    toc: tuple[tuple[StructureItem, int], ...]
    pages: tuple[Page, ...]
    index: tuple[tuple[str, tuple[int, ...]], ...]
    geometry: PageGeometry
    config: LayoutConfig
    source: str = ""
    tokens: tuple[Token, ...] = ()
    annotations: dict[int, dict[str, float]] = field(default_factory=dict)

    @property
    def rows(self) -> Iterable[Row]:
        for page in self.pages:
            yield from page.rows


# -- wrapping -----------------------------------------------------------------


class VisualRow(NamedTuple):
    text: str
    continuation: bool


def _hard_cuts(total: int, width: int) -> list[int]:
    return list(range(width, total, width))


def _word_cuts(text: str, width: int) -> list[int]:
    cuts: list[int] = []
    row_start = 0
    for m in re.finditer(r"\S+\s*|\s+", text):
        s, e = m.span()
        if e - row_start > width and s > row_start:
            cuts.append(s)
            row_start = s
        while e - row_start > width:
            row_start += width
            cuts.append(row_start)
    return [c for c in cuts if c < len(text)]


def _cut(spans: Sequence[StyledSpan], cuts: Sequence[int]) -> list[list[StyledSpan]]:
    """Split ``spans`` into rows, each new row starting at a visible offset in ``cuts``."""
    rows: list[list[StyledSpan]] = [[]]
    pending = list(cuts)
    pos = 0
    for span in spans:
        while span.width and pending and pos + span.width > pending[0]:
            at = pending.pop(0) - pos
            if at > 0:
                head, span = span.split(at)
                rows[-1].append(head)
                pos += at
            rows.append([])
        rows[-1].append(span)
        pos += span.width
    return rows


def wrap_long_line(line: str, width: int) -> list[VisualRow]:
    """Hard-wrap ``line`` at ``width`` characters; no character is lost."""
    if width < 8:
        raise LayoutError(f"wrap width must be at least 8, got {width}")
    if not line:
        return [VisualRow("", False)]
    return [
        VisualRow(line[i : i + width], i > 0) for i in range(0, len(line), width)
    ]


def _hard_wrap(spans: Sequence[StyledSpan], width: int) -> list[list[StyledSpan]]:
    total = sum(s.width for s in spans)
    return _cut(spans, _hard_cuts(total, width))


def _word_wrap(spans: Sequence[StyledSpan], width: int) -> list[list[StyledSpan]]:
    text = "".join(s.shown for s in spans)
    return _cut(spans, _word_cuts(text, width))


# -- token pieces per line ----------------------------------------------------


def _styled(tok: Token) -> list[StyledSpan]:
    """Token -> spans split at newlines (hidden) and at comment markers."""
    out: list[StyledSpan] = []
    offset = tok.start
    line = tok.line
    for piece in re.split(r"(\n)", tok.text):
        if not piece:
            continue
        size = len(piece.encode("utf-8"))
        if piece == "\n":
            out.append(StyledSpan(piece, "default", offset, offset + size, line, tok.category, ""))
            line += 1
        elif tok.category == "comment":
            out.extend(_comment_spans(piece, offset, line))
        else:
            face = face_for_token(tok.category)
            out.append(StyledSpan(piece, face, offset, offset + size, line, tok.category))
        offset += size
    return out


def _comment_spans(text: str, offset: int, line: int) -> list[StyledSpan]:
    out: list[StyledSpan] = []
    pos = 0
    for s, e in find_markers(text) + [(len(text), len(text))]:
        for part, marker in ((text[pos:s], None), (text[s:e], text[s:e])):
            if part:
                size = len(part.encode("utf-8"))
                face = face_for_token("comment", marker=marker)
                out.append(StyledSpan(part, face, offset, offset + size, line, "comment"))
                offset += size
        pos = e
    return out


def _lines(tokens: Sequence[Token]) -> list[list[StyledSpan]]:
    if not tokens:
        return []
    lines: list[list[StyledSpan]] = [[]]
    for tok in tokens:
        for span in _styled(tok):
            while span.line > len(lines):
                lines.append([])
            lines[span.line - 1].append(span)
    last_line = tokens[-1].line + tokens[-1].text.count("\n")
    while len(lines) < last_line:
        lines.append([])
    return lines


def _hide_trailing_blanks(spans: list[StyledSpan]) -> list[StyledSpan]:
    out = list(spans)
    for i in range(len(out) - 1, -1, -1):
        if out[i].shown.strip():
            break
        out[i] = out[i].hidden()
    return out


def split_comment_column(
    tokens: Sequence[Token],
    blocks: Sequence[CommentBlock],
    geom: PageGeometry,
) -> list[Row]:
    """Lay source lines out as rows, moving comments into the left column.

    Lines wholly taken by header/leading blocks disappear from the code
    column; their text queues up in the comment column beside the next code
    line and flows down beside the following rows while those have no
    comment of their own. A new block or a trailing comment that would
    collide with the queue first drains it onto blank rows.
    """
    lines = _lines(tokens)
    def_lines = {t.line for t in tokens if t.category == "def-name"}
    code_width = geom.code_columns
    rows: list[Row] = []

    if not geom.comment_columns:
        for number, spans in enumerate(lines, start=1):
            for i, part in enumerate(_hard_wrap(spans, code_width)):
                rows.append(
                    Row(
                        code=tuple(part),
                        source_line=None if i else number,
                        continuation=i > 0,
                        starts_definition=i == 0 and number in def_lines,
                    )
                )
        return rows

    comment_width = geom.comment_columns
    moved: set[int] = set()
    for block in blocks:
        if block.kind != "trailing":
            first, last = block.lines
            moved.update(range(first, last + 1))

    queue: list[list[StyledSpan]] = []
    anchored = False

    def drain() -> None:
        nonlocal anchored
        rows.extend(Row(comment=tuple(cell)) for cell in queue)
        queue.clear()
        anchored = False

    for number, spans in enumerate(lines, start=1):
        if number in moved:
            if anchored:
                drain()
            visible = [s if s.category == "comment" or s.display is not None else s.hidden() for s in spans]
            queue.extend(_word_wrap(visible, comment_width))
            continue

        code = [s for s in spans if s.category != "comment"]
        notes = [s for s in spans if s.category == "comment"]
        if notes:
            code = _hide_trailing_blanks(code)
        code_rows = _hard_wrap(code, code_width)
        if notes:
            if queue:
                drain()
            cells = _word_wrap(notes, comment_width)
            height = max(len(code_rows), len(cells))
        else:
            cells = queue[: len(code_rows)]
            del queue[: len(code_rows)]
            anchored = bool(queue)
            height = len(code_rows)
        for i in range(height):
            rows.append(
                Row(
                    code=tuple(code_rows[i]) if i < len(code_rows) else (),
                    comment=tuple(cells[i]) if i < len(cells) else (),
                    source_line=number if i == 0 else None,
                    continuation=0 < i < len(code_rows),
                    starts_definition=i == 0 and number in def_lines,
                )
            )
    drain()
    return rows


def paginate(rows: Sequence[Row], geom: PageGeometry) -> list[Page]:
    """Fill pages greedily; a definition's first row never ends a page
    unless it is the last row of the document."""
    per_page = geom.text_rows
    if per_page < 4:
        raise LayoutError(f"page too small: {per_page} text rows")
    pages: list[Page] = []
    current: list[Row] = []
    i = 0
    while i < len(rows):
        current.append(rows[i])
        i += 1
        if len(current) == per_page:
            while i < len(rows) and len(current) > 1 and current[-1].starts_definition:
                current.pop()
                i -= 1
            pages.append(Page(len(pages) + 1, tuple(current)))
            current = []
    if current:
        pages.append(Page(len(pages) + 1, tuple(current)))
    return pages


def reassemble(pages: Iterable[Page]) -> str:
    """Rebuild the source from laid-out pages (spans sorted by offset)."""
    spans = sorted((s for page in pages for row in page.rows for s in row.spans), key=lambda s: s.start)
    return "".join(s.text for s in spans)


def _line_pages(pages: Sequence[Page]) -> dict[int, int]:
    where: dict[int, int] = {}
    for page in pages:
        for row in page.rows:
            for span in row.spans:
                where.setdefault(span.line, page.number)
            if row.source_line is not None:
                where.setdefault(row.source_line, page.number)
    return where


def build_book(
    doc: Document,
    structure: Sequence[StructureItem] | None = None,
    cfg: LayoutConfig | None = None,
    vcs: tuple[str | None, str | None] | None = None,
    annotations: dict[int, dict[str, float]] | None = None,
) -> Book:
    cfg = cfg or LayoutConfig()
    tokens = doc.tokens
    if structure is None:
        structure = extract_structure(tokens, doc.language)
    geom = compute_page_geometry(cfg)
    blocks = group_comments(tokens) if cfg.comment_column else []
    pages = paginate(split_comment_column(tokens, blocks, geom), geom)

    where = _line_pages(pages)
    last = len(pages) or 1
    toc = tuple((item, where.get(item.line, last)) for item in structure)

    names = {t.text for t in tokens if t.category == "def-name"}
    hits: dict[str, set[int]] = {name: set() for name in names}
    for tok in tokens:
        if tok.category in ("identifier", "def-name") and tok.text in hits:
            hits[tok.text].add(where.get(tok.line, last))
    index = tuple((name, tuple(sorted(hits[name]))) for name in sorted(names))

    branch, commit = vcs or (None, None)
    definitions = sum(1 for item in structure if item.kind in ("function", "class"))
    preface = HeaderBlock(doc.title, branch, commit, (len(doc.source.splitlines()), definitions))
    return Book(
        preface=preface,
        toc=toc,
        pages=tuple(pages),
        index=index,
        geometry=geom,
        config=cfg,
        source=doc.source,
        tokens=tuple(tokens),
        annotations=dict(annotations or {}),
    )

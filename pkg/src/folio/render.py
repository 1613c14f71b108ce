"""ANSI and HTML output for a laid-out :class:`~folio.layout.Book`.

ANSI framing, which :func:`strip_sgr` undoes exactly:

* every row is ``<margin spaces> ESC[0m <styled content> ESC[0m``, followed
  by ``↩`` when the next row continues the same source line;
* every page ends with a line made of a form feed and the centered footer,
  ``— p. N —`` for body pages and ``— preface —``, ``— contents —`` or
  ``— index —`` for the front and back matter.

Only 24-bit color, bold, faint and reset sequences are ever emitted.
"""

from __future__ import annotations

import html
import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .color import Color
from .faces import FACE_NAMES, FaceSet, age_tint, distinct_hues
from .layout import GUTTER, Book, LayoutConfig, Row, StyledSpan
from .tokens import Token

__all__ = [
    "DEFAULT_LIGATURES",
    "AnsiError",
    "Ligature",
    "StyledSpan",
    "UsageReport",
    "apply_ligatures",
    "render_ansi",
    "render_html",
    "strip_sgr",
    "usage_report",
]

ESC = "\x1b"
RESET = f"{ESC}[0m"
BOLD = f"{ESC}[1m"
FAINT = f"{ESC}[2m"
FORM_FEED = "\x0c"
WRAP_MARK = "↩"

DEFAULT_LIGATURES: dict[str, str] = {
    ">=": "≥",
    "<=": "≤",
    "!=": "≠",
    "->": "→",
    "=>": "⇒",
}

SCARCITY_LIMIT = 5.0  # percent of characters in critical + popout
MAX_FOREGROUNDS = 7


class AnsiError(ValueError):
    def __init__(self, offset: int):
        super().__init__(f"malformed escape sequence at byte offset {offset}")
        self.offset = offset


@dataclass(frozen=True)
class Ligature:
    start: int  # byte offsets of the replaced operator characters
    end: int
    text: str
    glyph: str


def apply_ligatures(
    tokens: Sequence[Token],
    table: Mapping[str, str] | None = None,
    enabled: bool = True,
) -> list[Ligature]:
    """Display substitutions for operator tokens, longest spelling first.

    The tokens themselves are never touched; the result only tells a
    renderer what to draw instead.
    """
    if not enabled:
        return []
    table = DEFAULT_LIGATURES if table is None else table
    if any(len(key) < 2 for key in table):
        raise ValueError("ligature spellings need at least two characters")
    keys = sorted(table, key=len, reverse=True)
    out: list[Ligature] = []
    for tok in tokens:
        if tok.category != "operator":
            continue
        text, i, offset = tok.text, 0, tok.start
        while i < len(text):
            for key in keys:
                if text.startswith(key, i):
                    size = len(key.encode("utf-8"))
                    out.append(Ligature(offset, offset + size, key, table[key]))
                    i += len(key)
                    offset += size
                    break
            else:
                offset += len(text[i].encode("utf-8"))
                i += 1
    return out


def _ligate(span: StyledSpan, ligatures: Mapping[int, Ligature]) -> StyledSpan:
    if span.category != "operator" or span.display is not None or not ligatures:
        return span
    out, offset, i = [], span.start, 0
    changed = False
    while i < len(span.text):
        lig = ligatures.get(offset)
        if lig is not None and lig.end <= span.end:
            out.append(lig.glyph)
            i += len(lig.text)
            offset = lig.end
            changed = True
            continue
        out.append(span.text[i])
        offset += len(span.text[i].encode("utf-8"))
        i += 1
    if not changed:
        return span
    return StyledSpan(span.text, span.face, span.start, span.end, span.line, span.category, "".join(out))


# -- styling ------------------------------------------------------------------

Style = tuple[str, Color, "Color | None"]  # (weight state, fg, bg)


class _Styler:
    """Resolves a span to its terminal/HTML style, including annotation tints."""

    def __init__(self, book: Book, faces: FaceSet, cfg: LayoutConfig):
        self.faces = faces
        self.ladder = faces.ladder
        self.base = self.ladder.index(faces["default"].weight)
        self.annotations = book.annotations
        authors = [int(a["author"]) for a in book.annotations.values() if "author" in a]
        self.author_colors = distinct_hues(max(authors) + 1) if authors else []
        lig = apply_ligatures(book.tokens, enabled=cfg.ligatures)
        self.ligatures = {l.start: l for l in lig}

    def weight_state(self, face: str) -> str:
        i = self.ladder.index(self.faces[face].weight)
        return "bold" if i > self.base else "faint" if i < self.base else ""

    def tint(self, span: StyledSpan, fg: Color) -> Color:
        note = self.annotations.get(span.line)
        if not note:
            return fg
        if "author" in note:
            fg = self.author_colors[int(note["author"])]
        if "age" in note:
            fg = age_tint(fg, self.faces.bg, float(note["age"]))
        return fg

    def style(self, span: StyledSpan, code: bool) -> Style:
        spec = self.faces[span.face]
        fg = self.tint(span, spec.fg) if code else spec.fg
        return (self.weight_state(span.face), fg, spec.bg)

    def prepare(self, spans: Iterable[StyledSpan]) -> list[StyledSpan]:
        return [_ligate(s, self.ligatures) for s in spans if s.shown]


def _sgr(style: Style) -> str:
    weight, fg, bg = style
    out = BOLD if weight == "bold" else FAINT if weight == "faint" else ""
    out += f"{ESC}[38;2;{fg.r};{fg.g};{fg.b}m"
    if bg is not None:
        out += f"{ESC}[48;2;{bg.r};{bg.g};{bg.b}m"
    return out


class _AnsiLine:
    def __init__(self) -> None:
        self.parts: list[str] = []
        self.current: Style | None = None

    def add(self, text: str, style: Style | None) -> None:
        if not text:
            return
        if style != self.current:
            if self.current is not None:
                self.parts.append(RESET)
            if style is not None:
                self.parts.append(_sgr(style))
            self.current = style
        self.parts.append(text)

    def text(self) -> str:
        return "".join(self.parts)


def _ansi_row(row: Row, styler: _Styler, book: Book) -> str:
    geom = book.geometry
    line = _AnsiLine()
    if geom.comment_columns:
        width = 0
        for span in styler.prepare(row.comment):
            line.add(span.shown, styler.style(span, code=False))
            width += span.width
        line.add(" " * (max(0, geom.comment_columns - width) + GUTTER), None)
    for span in styler.prepare(row.code):
        line.add(span.shown, styler.style(span, code=True))
    return " " * geom.margin_chars + RESET + line.text() + RESET


def _plain_row(book: Book, chunks: Sequence[tuple[str, Style | None]]) -> str:
    line = _AnsiLine()
    for text, style in chunks:
        line.add(text, style)
    return " " * book.geometry.margin_chars + RESET + line.text() + RESET


def _footer(label: str, book: Book) -> str:
    return FORM_FEED + f"— {label} —".center(book.geometry.page_columns).rstrip()


def _paged(lines: list[str], label: str, book: Book) -> list[str]:
    per_page = book.geometry.text_rows
    out = []
    for i in range(0, max(len(lines), 1), per_page):
        chunk = lines[i : i + per_page]
        out.append("\n".join(chunk) + "\n" + _footer(label, book) + "\n")
    return out


def _leader(left: str, right: str, width: int) -> tuple[str, str, str]:
    dots = max(1, width - len(left) - len(right) - 2)
    return left + " ", "." * dots, " " + right


def _toc_label(kind: str, name: str) -> str:
    return f"{name}()" if kind == "function" else name


def _front_matter(book: Book, faces: FaceSet, styler: _Styler) -> list[tuple[list[list], str]]:
    """Preface, contents and index as (rows of (text, style) chunks, footer label)."""
    strong = (styler.weight_state("strong"), faces["strong"].fg, None)
    plain = ("", faces.fg, None)
    faded = (styler.weight_state("faded"), faces["faded"].fg, None)
    width = book.geometry.text_columns
    head = book.preface

    preface = [[(head.title, strong)], []]
    if head.branch:
        preface.append([("branch ", faded), (head.branch, plain)])
    if head.commit:
        preface.append([("commit ", faded), (head.commit, plain)])
    lines, defs = head.stats
    preface.append([(f"{lines} lines, {defs} definitions", faded)])
    parts = [(preface, "preface")]

    if book.toc:
        toc = [[("Contents", strong)], []]
        for item, page in book.toc:
            left = "  " * item.depth + _toc_label(item.kind, item.name)
            a, dots, b = _leader(left, str(page), width)
            face = faded if item.kind == "section-comment" else plain
            toc.append([(a, face), (dots, faded), (b, plain)])
        parts.append((toc, "contents"))
    return parts


def _back_matter(book: Book, faces: FaceSet, styler: _Styler) -> list[tuple[list[list], str]]:
    if not book.index:
        return []
    strong = (styler.weight_state("strong"), faces["strong"].fg, None)
    plain = ("", faces.fg, None)
    faded = (styler.weight_state("faded"), faces["faded"].fg, None)
    rows = [[("Index", strong)], []]
    for name, pages in book.index:
        a, dots, b = _leader(name, ", ".join(map(str, pages)), book.geometry.text_columns)
        rows.append([(a, plain), (dots, faded), (b, plain)])
    return [(rows, "index")]


def render_ansi(book: Book, faces: FaceSet, cfg: LayoutConfig | None = None) -> bytes:
    """Typeset ``book`` for a 24-bit color terminal."""
    cfg = cfg or book.config
    styler = _Styler(book, faces, cfg)
    out: list[str] = []

    for rows, label in _front_matter(book, faces, styler):
        out += _paged([_plain_row(book, r) for r in rows], label, book)

    body = [row for page in book.pages for row in page.rows]
    rendered = []
    for i, row in enumerate(body):
        text = _ansi_row(row, styler, book)
        if i + 1 < len(body) and body[i + 1].continuation:
            text += WRAP_MARK
        rendered.append(text)
    pos = 0
    for page in book.pages:
        lines = rendered[pos : pos + len(page.rows)]
        pos += len(page.rows)
        out.append("\n".join(lines) + "\n" + _footer(f"p. {page.number}", book) + "\n")

    for rows, label in _back_matter(book, faces, styler):
        out += _paged([_plain_row(book, r) for r in rows], label, book)
    return "".join(out).encode("utf-8")


_SGR_RE = re.compile(rb"\x1b\[[0-9;]*m")
_BODY_FOOTER_RE = re.compile("— p\\. \\d+ —".encode("utf-8"))
_RESET_B = RESET.encode()
_WRAP_B = WRAP_MARK.encode("utf-8")


def _strip_row(line: bytes) -> tuple[bytes, bool]:
    joins = False
    first = line.find(_RESET_B)
    if first != -1:
        if not _SGR_RE.sub(b"", line[:first]).strip(b" "):
            line = line[first + len(_RESET_B) :]
        last = line.rfind(_RESET_B)
        if last != -1:
            tail = _SGR_RE.sub(b"", line[last + len(_RESET_B) :])
            if tail in (b"", _WRAP_B):
                joins = tail == _WRAP_B
                line = line[:last]
    return _SGR_RE.sub(b"", line), joins


def strip_sgr(data: bytes) -> bytes:
    """Undo :func:`render_ansi` framing: SGR codes, margins, wrap marks,
    front/back matter pages and page footers. Plain text passes through."""
    pos = data.find(b"\x1b")
    while pos != -1:
        m = _SGR_RE.match(data, pos)
        if m is None:
            raise AnsiError(pos)
        pos = data.find(b"\x1b", m.end())

    kept: list[tuple[bytes, bool]] = []
    page: list[tuple[bytes, bool]] = []
    saw_footer = False
    for line in data.split(b"\n"):
        if line.startswith(b"\x0c"):
            saw_footer = True
            if _BODY_FOOTER_RE.fullmatch(line[1:].strip(b" ")):
                kept += page
            page = []
        else:
            page.append(_strip_row(line))
    if not (saw_footer and page == [(b"", False)]):
        kept += page

    out = bytearray()
    for i, (text, joins) in enumerate(kept):
        out += text
        if i + 1 < len(kept) and not joins:
            out += b"\n"
    return bytes(out)


# -- HTML ---------------------------------------------------------------------


def _css_face(name: str, faces: FaceSet) -> str:
    spec = faces[name]
    rules = [f"color:{spec.fg.hex}", f"font-weight:{faces.ladder.weight(spec.weight)}"]
    if spec.bg is not None and name != "default":
        rules.append(f"background-color:{spec.bg.hex}")
    return f".face-{name}{{{';'.join(rules)}}}"


def _style_block(book: Book, faces: FaceSet) -> str:
    geom = book.geometry
    cfg = book.config
    comment = f"{geom.comment_columns}ch" if geom.comment_columns else "0"
    gutter = f"{GUTTER}ch" if geom.comment_columns else "0"
    rules = [
        f"body{{background:{faces.bg.hex};color:{faces.fg.hex};margin:0}}",
        f".page{{box-sizing:content-box;width:{geom.text_columns}ch;"
        f"padding:{geom.margin_chars}ch;margin:1em auto;"
        f"font-family:'Fira Code',monospace;line-height:{cfg.line_spacing}}}",
        ".row{white-space:pre;min-height:1lh}",
        f".margin{{display:inline-block;vertical-align:top;width:{comment};margin-right:{gutter};"
        "font-family:'Roboto Condensed',sans-serif;font-stretch:condensed;white-space:pre-wrap}",
        ".code{white-space:pre}",
        ".title{font-size:1.8em;margin:0 0 .5em 0}",
        ".preface,.toc,.index{white-space:normal}",
        ".footer{text-align:center;margin-top:1em}",
        ".pageno{float:right}",
    ]
    rules += [_css_face(name, faces) for name in FACE_NAMES]
    return "\n".join(rules)


def _html_spans(spans: Iterable[StyledSpan], styler: _Styler, code: bool) -> str:
    out = []
    for span in styler.prepare(spans):
        text = html.escape(span.shown, quote=False)
        fg = styler.tint(span, styler.faces[span.face].fg) if code else None
        tinted = fg is not None and fg != styler.faces[span.face].fg
        if span.face == "default" and not tinted:
            out.append(text)
        elif tinted:
            out.append(f'<span class="face-{span.face}" style="color:{fg.hex}">{text}</span>')
        else:
            out.append(f'<span class="face-{span.face}">{text}</span>')
    return "".join(out)


def render_html(book: Book, faces: FaceSet, cfg: LayoutConfig | None = None) -> str:
    """Self-contained HTML document with one ``.row`` per layout row."""
    cfg = cfg or book.config
    styler = _Styler(book, faces, cfg)
    esc = html.escape
    head = book.preface
    parts = [
        "<!DOCTYPE html>",
        '<html lang="en">',
        "<head>",
        '<meta charset="utf-8">',
        f"<title>{esc(head.title)}</title>",
        f"<style>\n{_style_block(book, faces)}\n</style>",
        "</head>",
        "<body>",
        '<section class="page preface" id="preface">',
        f'<h1 class="face-strong title">{esc(head.title)}</h1>',
    ]
    if head.branch:
        parts.append(f'<p><span class="face-faded">branch</span> {esc(head.branch)}</p>')
    if head.commit:
        parts.append(f'<p><span class="face-faded">commit</span> {esc(head.commit)}</p>')
    lines, defs = head.stats
    parts.append(f'<p class="face-faded">{lines} lines, {defs} definitions</p>')
    parts.append("</section>")

    if book.toc:
        parts.append('<nav class="page toc" id="contents">')
        parts.append('<h2 class="face-strong">Contents</h2>')
        parts.append("<ol>")
        for item, page in book.toc:
            face = ' class="face-faded"' if item.kind == "section-comment" else ""
            parts.append(
                f'<li style="margin-left:{2 * item.depth}ch"><a href="#page-{page}"{face}>'
                f"{esc(_toc_label(item.kind, item.name))}</a>"
                f' <span class="pageno">{page}</span></li>'
            )
        parts.append("</ol>")
        parts.append("</nav>")

    for page in book.pages:
        parts.append(f'<section class="page" id="page-{page.number}">')
        for row in page.rows:
            parts.append(
                '<div class="row"><span class="margin">'
                + _html_spans(row.comment, styler, code=False)
                + '</span><span class="code">'
                + _html_spans(row.code, styler, code=True)
                + "</span></div>"
            )
        parts.append(f'<div class="footer">— p. {page.number} —</div>')
        parts.append("</section>")

    if book.index:
        parts.append('<section class="page index" id="index">')
        parts.append('<h2 class="face-strong">Index</h2>')
        parts.append("<ul>")
        for name, pages in book.index:
            links = ", ".join(f'<a href="#page-{p}">{p}</a>' for p in pages)
            parts.append(f"<li>{esc(name)} {links}</li>")
        parts.append("</ul>")
        parts.append("</section>")
    parts += ["</body>", "</html>", ""]
    return "\n".join(parts)


# -- usage --------------------------------------------------------------------


@dataclass
class UsageReport:
    percentages: dict[str, float] = field(default_factory=dict)
    foregrounds: int = 0
    warnings: list[str] = field(default_factory=list)

    def lines(self) -> list[str]:
        out = [f"{name:<9}{pct:6.2f}%" for name, pct in self.percentages.items()]
        out.append(f"distinct foregrounds: {self.foregrounds}")
        out += [f"warning: {w}" for w in self.warnings]
        return out


def usage_report(book: Book, faces: FaceSet) -> UsageReport:
    """Share of visible characters per face, with scarcity warnings."""
    styler = _Styler(book, faces, book.config)
    counts = {name: 0 for name in FACE_NAMES}
    colors: set[Color] = set()
    for row in book.rows:
        for code, spans in ((False, row.comment), (True, row.code)):
            for span in styler.prepare(spans):
                visible = sum(1 for ch in span.shown if not ch.isspace())
                if visible:
                    counts[span.face] += visible
                    colors.add(styler.style(span, code)[1])
    total = sum(counts.values())
    report = UsageReport(foregrounds=len(colors))
    if not total:
        return report
    report.percentages = {
        name: 100.0 * n / total for name, n in counts.items() if n
    }
    loud = report.percentages.get("critical", 0.0) + report.percentages.get("popout", 0.0)
    if loud > SCARCITY_LIMIT:
        report.warnings.append(
            f"critical+popout cover {loud:.1f}% of characters (limit {SCARCITY_LIMIT:.0f}%)"
        )
    if len(colors) > MAX_FOREGROUNDS:
        report.warnings.append(
            f"{len(colors)} distinct foreground colors (limit {MAX_FOREGROUNDS})"
        )
    return report

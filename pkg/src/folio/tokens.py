"""Lexical tokenization and structure extraction for source files.

Three dialects are understood: ``python-like``, ``c-like`` and ``plain``.
The lexer is deliberately shallow (rule tables, no grammar) and never fails
on malformed code: an unterminated string or block comment simply runs to
the end of its line or of the file.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

__all__ = [
    "CATEGORIES",
    "LANGUAGES",
    "CommentBlock",
    "StructureItem",
    "Token",
    "TokenizeError",
    "extract_structure",
    "group_comments",
    "language_for_path",
    "tokenize",
]

CATEGORIES = (
    "keyword",
    "identifier",
    "def-name",
    "string",
    "number",
    "operator",
    "punctuation",
    "comment",
    "whitespace",
    "text",
)
LANGUAGES = ("python-like", "c-like", "plain")

PYTHON_KEYWORDS = frozenset(
    """False None True and as assert async await break class continue def del
    elif else except finally for from global if import in is lambda nonlocal
    not or pass raise return try while with yield""".split()
)
C_KEYWORDS = frozenset(
    """auto break case char const continue default do double else enum extern
    float for goto if inline int long register restrict return short signed
    sizeof static struct switch typedef union unsigned void volatile while
    _Bool _Complex _Imaginary""".split()
)

INDENT_UNIT = 4

_C_EXTENSIONS = {".c", ".h", ".cc", ".cpp", ".hpp", ".cxx", ".js", ".ts", ".java", ".go", ".rs", ".cs"}


class TokenizeError(ValueError):
    """Raised when the source cannot be decoded; ``offset`` is the bad byte."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at byte offset {offset}")
        self.offset = offset


@dataclass(frozen=True, slots=True)
class Token:
    category: str
    start: int  # byte offset, inclusive
    end: int  # byte offset, exclusive
    line: int  # 1-based line of ``start``
    text: str

    def __len__(self) -> int:
        return self.end - self.start


@dataclass(frozen=True, slots=True)
class StructureItem:
    kind: str  # function | class | section-comment
    name: str
    line: int
    depth: int


@dataclass(frozen=True, slots=True)
class CommentBlock:
    kind: str  # leading | trailing | header
    tokens: tuple[Token, ...]
    anchor_line: int | None

    @property
    def lines(self) -> tuple[int, int]:
        """First and last source line covered by the block's tokens."""
        first = self.tokens[0].line
        last = self.tokens[-1].line + self.tokens[-1].text.count("\n")
        return first, last


def language_for_path(path: str | None) -> str:
    if not path:
        return "plain"
    lowered = path.lower()
    if lowered.endswith((".py", ".pyi", ".pyw")):
        return "python-like"
    dot = lowered.rfind(".")
    if dot != -1 and lowered[dot:] in _C_EXTENSIONS:
        return "c-like"
    return "plain"


# -- lexing -------------------------------------------------------------------

_NUMBER = r"0[xXbBoO][0-9a-fA-F_]+|(?:\d[\d_]*(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?[jJlLuUfF]*"
_OPERATOR_CHARS = r"+\-*/%<>=!&|^~@?"
_PUNCTUATION = "()[]{},;:.\\`$"

_COMMON = [
    ("newline", r"\n"),
    ("whitespace", r"[^\S\n]+"),
]
_TAIL = [
    ("number", _NUMBER),
    ("identifier", r"[^\W\d]\w*"),
    ("operator", rf"[{_OPERATOR_CHARS}]+"),
    ("punctuation", "[" + re.escape(_PUNCTUATION) + "]"),
    ("text", r"."),
]

_PY_STRING = (
    r"(?i:[rbfu]|rb|br|fr|rf)?"
    r"(?:'''(?:\\.|[^\\])*?(?:'''|\Z)"
    r'|"""(?:\\.|[^\\])*?(?:"""|\Z)'
    r"|'(?:\\.|[^\\'\n])*(?:'|(?=\n)|\Z)"
    r'|"(?:\\.|[^\\"\n])*(?:"|(?=\n)|\Z))'
)
_C_STRING = r"'(?:\\.|[^\\'\n])*(?:'|(?=\n)|\Z)" r'|"(?:\\.|[^\\"\n])*(?:"|(?=\n)|\Z)'


def _compile(rules: Iterable[tuple[str, str]]) -> re.Pattern[str]:
    return re.compile("|".join(f"(?P<{name}>{pattern})" for name, pattern in rules), re.DOTALL)


_PATTERNS = {
    "python-like": _compile(
        _COMMON + [("comment", r"#[^\n]*"), ("string", _PY_STRING)] + _TAIL
    ),
    "c-like": _compile(
        _COMMON
        + [("comment", r"//[^\n]*|/\*.*?(?:\*/|\Z)"), ("string", _C_STRING)]
        + _TAIL
    ),
    "plain": _compile(_COMMON + [("text", r"[^\s]+")]),
}


def _decode(source: bytes | str) -> str:
    if isinstance(source, str):
        return source
    try:
        return source.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise TokenizeError("invalid UTF-8", exc.start) from None


def tokenize(source: bytes | str, language: str = "plain") -> list[Token]:
    """Split ``source`` into tokens that cover every byte exactly once.

    ``Token.start``/``Token.end`` are byte offsets into the UTF-8 encoding
    of the source, whether it was given as bytes or as text.
    """
    if language not in _PATTERNS:
        raise ValueError(f"unknown language {language!r}")
    text = _decode(source)
    pattern = _PATTERNS[language]
    keywords = PYTHON_KEYWORDS if language == "python-like" else C_KEYWORDS

    raw: list[tuple[str, str]] = []
    pos = 0
    while pos < len(text):
        m = pattern.match(text, pos)
        assert m is not None and m.end() > pos
        kind = m.lastgroup or "text"
        value = m.group()
        if kind == "newline":
            kind = "whitespace"
        elif kind == "identifier" and value in keywords:
            kind = "keyword"
        raw.append((kind, value))
        pos = m.end()

    if language == "python-like":
        _mark_python_defs(raw)
    elif language == "c-like":
        _mark_c_defs(raw)

    tokens: list[Token] = []
    offset = 0
    line = 1
    for kind, value in raw:
        size = len(value.encode("utf-8"))
        tokens.append(Token(kind, offset, offset + size, line, value))
        offset += size
        line += value.count("\n")
    return tokens


def _next_significant(raw: Sequence[tuple[str, str]], i: int) -> int | None:
    j = i + 1
    while j < len(raw) and raw[j][0] == "whitespace" and "\n" not in raw[j][1]:
        j += 1
    return j if j < len(raw) else None


def _mark_python_defs(raw: list[tuple[str, str]]) -> None:
    for i, (kind, value) in enumerate(raw):
        if kind == "keyword" and value in ("def", "class"):
            j = _next_significant(raw, i)
            if j is not None and raw[j][0] == "identifier":
                raw[j] = ("def-name", raw[j][1])


def _mark_c_defs(raw: list[tuple[str, str]]) -> None:
    # A function definition/declaration: identifier followed by "(" at brace
    # depth 0, preceded by a type-ish token (keyword, identifier, "*").
    depth = 0
    prev: tuple[str, str] | None = None
    for i, (kind, value) in enumerate(raw):
        if kind == "punctuation":
            if value == "{":
                depth += 1
            elif value == "}":
                depth = max(0, depth - 1)
        if kind == "identifier" and depth == 0 and prev is not None:
            typeish = prev[0] in ("keyword", "identifier") or (
                prev[0] == "operator" and set(prev[1]) <= {"*", "&"}
            )
            if typeish and not (prev[0] == "keyword" and prev[1] in ("return", "sizeof")):
                j = _next_significant(raw, i)
                if j is not None and raw[j] == ("punctuation", "("):
                    raw[i] = ("def-name", value)
        if kind not in ("whitespace", "comment"):
            prev = raw[i]


# -- structure ----------------------------------------------------------------


def _lines_of(tokens: Sequence[Token]) -> dict[int, list[Token]]:
    """Map each source line to the tokens (or token pieces) that touch it."""
    by_line: dict[int, list[Token]] = {}
    for tok in tokens:
        span = tok.text.count("\n")
        if tok.text.endswith("\n"):
            span -= 1
        for line in range(tok.line, tok.line + span + 1):
            by_line.setdefault(line, []).append(tok)
    return by_line


def _is_code(tok: Token) -> bool:
    return tok.category not in ("whitespace", "comment")


def _comment_body(text: str) -> str:
    body = text
    for leader in ("//", "/*", "#"):
        if body.startswith(leader):
            body = body[len(leader):]
            break
    if body.endswith("*/"):
        body = body[:-2]
    return body.strip().strip("#-=*~_ ").strip()


def _line_table(tokens: Sequence[Token]) -> tuple[dict[int, list[Token]], set[int]]:
    """Tokens starting on each line, and lines that lie inside a multi-line token."""
    starts: dict[int, list[Token]] = {}
    inside: set[int] = set()
    for tok in tokens:
        starts.setdefault(tok.line, []).append(tok)
        inner = tok.text.count("\n") - tok.text.endswith("\n")
        inside.update(range(tok.line + 1, tok.line + inner + 1))
    return starts, inside


def extract_structure(tokens: Sequence[Token], language: str = "plain") -> list[StructureItem]:
    """Return definitions and section banners in source order.

    Nesting depth comes from an indentation stack, so a child is always
    exactly one level deeper than the item that encloses it.
    """
    if language == "plain" or not tokens:
        return []
    starts, inside = _line_table(tokens)
    last_line = tokens[-1].line

    def significant(line: int) -> list[Token]:
        return [t for t in starts.get(line, ()) if t.category != "whitespace"]

    def blank(line: int) -> bool:
        return line <= last_line and line not in inside and not significant(line)

    def banner(line: int) -> Token | None:
        if line in inside:
            return None
        toks = significant(line)
        if len(toks) == 1 and toks[0].category == "comment" and "\n" not in toks[0].text:
            return toks[0]
        return None

    defs: dict[int, tuple[str, str]] = {}
    for i, tok in enumerate(tokens):
        if tok.category != "def-name" or tok.line in defs:
            continue
        kind = "function"
        if language == "python-like":
            k = i - 1
            while k >= 0 and tokens[k].category == "whitespace":
                k -= 1
            if k >= 0 and tokens[k].text == "class":
                kind = "class"
        defs[tok.line] = (kind, tok.text)

    items: list[StructureItem] = []
    stack: list[int] = []  # indent widths of the open definitions
    for line in range(1, last_line + 1):
        indent = 0
        first = starts.get(line, [None])[0]
        if first is not None and first.category == "whitespace" and "\n" not in first.text:
            indent = len(first.text.expandtabs(INDENT_UNIT))
        if language == "python-like" and significant(line) and banner(line) is None and line not in inside:
            while stack and stack[-1] >= indent:
                stack.pop()
        if line in defs:
            kind, name = defs[line]
            depth = len(stack) if language == "python-like" else 0
            items.append(StructureItem(kind, name, line, depth))
            if language == "python-like":
                stack.append(indent)
            continue
        comment = banner(line)
        if comment is None or not _comment_body(comment.text):
            continue
        if blank(line + 1) or (line + 1) in defs:
            depth = sum(1 for s in stack if s < indent) if language == "python-like" else 0
            items.append(StructureItem("section-comment", _comment_body(comment.text), line, depth))
    return items


def group_comments(tokens: Sequence[Token]) -> list[CommentBlock]:
    """Group comment tokens into header, leading and trailing blocks.

    A line holding only comments and whitespace is a comment line. Runs of
    consecutive comment lines form one block, anchored on the line right
    after the run. The run starting on line 1 is the header unless its
    anchor line holds code. A comment sharing its line with code is a
    trailing block anchored on that line.
    """
    by_line = _lines_of(tokens)
    comment_lines: set[int] = set()
    code_lines: set[int] = set()
    for line, toks in by_line.items():
        if any(_is_code(t) for t in toks):
            code_lines.add(line)
        elif any(t.category == "comment" for t in toks):
            comment_lines.add(line)

    blocks: list[CommentBlock] = []
    seen: set[int] = set()
    run: list[Token] = []
    run_end = 0

    def flush() -> None:
        nonlocal run
        if run:
            # A top-of-file run that sits directly on code annotates that
            # code; only a detached one is the file header.
            if run[0].line == 1 and run_end + 1 not in code_lines:
                blocks.append(CommentBlock("header", tuple(run), None))
            else:
                blocks.append(CommentBlock("leading", tuple(run), run_end + 1))
        run = []

    for tok in tokens:
        if tok.category != "comment" or tok.start in seen:
            continue
        seen.add(tok.start)
        last = tok.line + tok.text.count("\n")
        lines = range(tok.line, last + 1)
        if all(line in comment_lines for line in lines):
            if run and tok.line > run_end + 1:
                flush()
            run.append(tok)
            run_end = last
        else:
            flush()
            blocks.append(CommentBlock("trailing", (tok,), tok.line))
    flush()
    blocks.sort(key=lambda b: b.tokens[0].start)
    return blocks

"""``folio`` command line.

Exit codes: 0 success, 1 usage error, 2 input error (unreadable or non
UTF-8 input, bad theme or annotations file, bad edit script, impossible
palette), 3 validation failure under ``--check``.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Sequence, TextIO

from . import __version__
from .color import Color
from .editcore import Buffer, ParseError, apply_script
from .faces import FaceDerivationError, FaceOptions, FaceSet, derive_faces, validate_faces
from .layout import Book, Document, LayoutConfig, LayoutError, build_book
from .render import render_ansi, render_html, usage_report
from .tokens import LANGUAGES, TokenizeError, language_for_path

__all__ = ["InputError", "Theme", "load_annotations", "load_theme", "main", "run"]

DEFAULT_FG = Color.from_hex("#383A42")
DEFAULT_BG = Color.from_hex("#FAFAFA")
_HUE_KEYS = {"salient.hue": "salient_hue", "popout.hue": "popout_hue", "critical.hue": "critical_hue"}


class UsageError(Exception):
    pass


class InputError(Exception):
    """Bad input data; maps to exit code 2."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit 2, which we reserve
        raise UsageError(f"{self.prog}: {message}")


# -- theme and annotation files -----------------------------------------------


@dataclass
class Theme:
    fg: Color | None = None
    bg: Color | None = None
    options: FaceOptions = field(default_factory=FaceOptions)
    warnings: list[str] = field(default_factory=list)


def _key_values(text: str, source: str):
    seen: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key or not value:
            raise InputError(f"{source}:{lineno}: expected 'key = value'")
        yield lineno, key, value, seen.get(key)
        seen[key] = lineno


def load_theme(path: str | Path) -> Theme:
    """Read a ``key = value`` theme file; later duplicates win with a warning."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"cannot read theme {path}: {exc}") from None
    theme = Theme()
    changes: dict[str, float] = {}
    names = set(FaceOptions.threshold_names())
    for lineno, key, value, previous in _key_values(text, str(path)):
        if previous is not None:
            theme.warnings.append(f"{path}:{lineno}: duplicate key {key!r} overrides line {previous}")
        try:
            if key in ("default.fg", "default.bg"):
                color = Color.from_hex(value)
                if key == "default.fg":
                    theme.fg = color
                else:
                    theme.bg = color
            elif key in _HUE_KEYS:
                changes[_HUE_KEYS[key]] = float(value) % 360.0
            elif key.startswith("thresholds.") and key[11:] in names:
                changes[key[11:]] = float(value)
            else:
                raise InputError(f"{path}:{lineno}: unknown key {key!r}")
        except ValueError as exc:
            raise InputError(f"{path}:{lineno}: {exc}") from None
    if theme.fg is None or theme.bg is None:
        raise InputError(f"{path}: default.fg and default.bg are required")
    theme.options = replace(FaceOptions(), **changes)
    return theme


@dataclass
class Annotations:
    lines: dict[int, dict[str, float]] = field(default_factory=dict)
    branch: str | None = None
    commit: str | None = None


def load_annotations(path: str | Path) -> Annotations:
    """Records are ``LINE<TAB>KEY=VALUE``; ``*`` as LINE sets branch/commit."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"cannot read annotations {path}: {exc}") from None
    out = Annotations()
    for lineno, raw in enumerate(text.splitlines(), 1):
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        where, tab, record = raw.partition("\t")
        key, eq, value = record.strip().partition("=")
        if not tab or not eq:
            raise InputError(f"{path}:{lineno}: expected LINE<TAB>KEY=VALUE")
        where, key, value = where.strip(), key.strip(), value.strip()
        if where == "*":
            if key not in ("branch", "commit"):
                raise InputError(f"{path}:{lineno}: '*' records take branch or commit")
            setattr(out, key, value)
            continue
        try:
            line = int(where)
            number = float(value) if key == "age" else int(value)
        except ValueError:
            raise InputError(f"{path}:{lineno}: bad record {raw!r}") from None
        if line < 1:
            raise InputError(f"{path}:{lineno}: line numbers start at 1")
        if key == "age" and not 0.0 <= number <= 1.0:
            raise InputError(f"{path}:{lineno}: age must lie in [0, 1]")
        if key == "author" and number < 0:
            raise InputError(f"{path}:{lineno}: author ids are non-negative")
        if key not in ("age", "author"):
            raise InputError(f"{path}:{lineno}: unknown key {key!r}")
        out.lines.setdefault(line, {})[key] = number
    return out


# -- argument parsing ---------------------------------------------------------


def _on_off(value: str) -> bool:
    if value not in ("on", "off"):
        raise argparse.ArgumentTypeError("expected 'on' or 'off'")
    return value == "on"


def _palette_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--theme", metavar="PATH")
    p.add_argument("--fg", metavar="#RRGGBB", help="default foreground (overrides the theme)")
    p.add_argument("--bg", metavar="#RRGGBB", help="default background (overrides the theme)")


def _layout_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--language", choices=LANGUAGES)
    p.add_argument("--ligatures", type=_on_off, default=False, metavar="on|off")
    p.add_argument("--comment-column", type=_on_off, default=True, metavar="on|off")
    p.add_argument("--ratio", choices=("iso216", "none"), default="iso216")
    p.add_argument("--columns", type=int, default=80)
    p.add_argument("--rows", type=int, help="text rows per page when --ratio none")
    p.add_argument("--line-spacing", type=float, default=1.25)
    p.add_argument("--margin", type=int, default=4)
    p.add_argument("--neutral", action="store_true",
                   help="ligatures off, comment column off, margins 0, ratio none")
    p.add_argument("--annotations", metavar="PATH")
    p.add_argument("--branch")
    p.add_argument("--commit")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="folio", description="Typeset source code as a book.")
    parser.add_argument("--version", action="version", version=f"folio {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    render = sub.add_parser("render", help="typeset files to ANSI or HTML")
    render.add_argument("inputs", nargs="*", metavar="FILE", help="input files ('-' or none: stdin)")
    render.add_argument("--format", choices=("ansi", "html"), default="ansi")
    render.add_argument("--check", action="store_true",
                        help="fail with exit 3 on face-rule failures or usage warnings")
    _palette_flags(render)
    _layout_flags(render)

    faces = sub.add_parser("faces", help="derive and check the face family")
    _palette_flags(faces)
    faces.add_argument("--check", action="store_true", help="exit 3 if any face rule fails")

    edit = sub.add_parser("edit", help="apply a keystroke script")
    edit.add_argument("input", nargs="?", metavar="FILE")
    edit.add_argument("--script", required=True)
    edit.add_argument("--cursor", type=int, default=0)

    toc = sub.add_parser("toc", help="print contents and index as plain text")
    toc.add_argument("input", nargs="?", metavar="FILE")
    _layout_flags(toc)
    return parser


# -- subcommands --------------------------------------------------------------


def _read(path: str | None, stdin) -> tuple[bytes, str | None]:
    if path in (None, "-"):
        return stdin.read(), None
    try:
        return Path(path).read_bytes(), path
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _faces(args, err: TextIO) -> FaceSet:
    theme = load_theme(args.theme) if args.theme else Theme(DEFAULT_FG, DEFAULT_BG)
    for warning in theme.warnings:
        print(f"warning: {warning}", file=err)
    try:
        fg = Color.from_hex(args.fg) if args.fg else theme.fg
        bg = Color.from_hex(args.bg) if args.bg else theme.bg
    except ValueError as exc:
        raise InputError(str(exc)) from None
    return derive_faces(fg, bg, theme.options)


def _layout(args) -> LayoutConfig:
    cfg = LayoutConfig(
        columns=args.columns,
        ratio=args.ratio,
        margin=args.margin,
        line_spacing=args.line_spacing,
        comment_column=args.comment_column,
        rows=args.rows,
        ligatures=args.ligatures,
    )
    if args.neutral:
        cfg = replace(cfg, ligatures=False, comment_column=False, margin=0, ratio="none")
    return cfg


def _book(data: bytes, path: str | None, args) -> Book:
    notes = load_annotations(args.annotations) if args.annotations else Annotations()
    title = Path(path).name if path else "stdin"
    language = args.language or language_for_path(path)
    doc = Document.from_source(data, language, title)
    vcs = (args.branch or notes.branch, args.commit or notes.commit)
    return build_book(doc, cfg=_layout(args), vcs=vcs, annotations=notes.lines)


def _cmd_render(args, stdin, out, err) -> int:
    faces = _faces(args, err)
    failed = False
    if args.check:
        bad = [c for c in validate_faces(faces) if not c.passed]
        for c in bad:
            print(c, file=err)
        failed = bool(bad)
    for path in args.inputs or [None]:
        book = _book(*_read(path, stdin), args)
        if args.format == "html":
            out.write(render_html(book, faces).encode("utf-8"))
        else:
            out.write(render_ansi(book, faces))
        if args.check:
            for warning in usage_report(book, faces).warnings:
                print(f"warning: {book.preface.title}: {warning}", file=err)
                failed = True
    return 3 if failed else 0


def _cmd_faces(args, stdin, out, err) -> int:
    try:
        faces = _faces(args, err)
    except FaceDerivationError as exc:
        print(f"FAIL {exc}", file=err)
        return 3 if args.check else 2
    lines = [f"{'face':<9}{'fg':<9}{'bg':<9}weight"]
    for name, spec in faces.items():
        bg = spec.bg.hex if spec.bg else "-"
        lines.append(f"{name:<9}{spec.fg.hex:<9}{bg:<9}{spec.weight}")
    lines.append("")
    checks = validate_faces(faces)
    lines += [str(c) for c in checks]
    out.write(("\n".join(lines) + "\n").encode("utf-8"))
    return 3 if args.check and not all(c.passed for c in checks) else 0


def _cmd_edit(args, stdin, out, err) -> int:
    data, _ = _read(args.input, stdin)
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise InputError(f"input is not UTF-8 (byte offset {exc.start})") from None
    buf = apply_script(Buffer(text, cursor=args.cursor), args.script)
    out.write(buf.text.encode("utf-8"))
    return 0


def _cmd_toc(args, stdin, out, err) -> int:
    book = _book(*_read(args.input, stdin), args)
    lines = ["Contents"]
    for item, page in book.toc:
        lines.append(f"{'  ' * item.depth}{item.name}\t{item.kind}\t{page}")
    lines += ["", "Index"]
    for name, pages in book.index:
        lines.append(f"{name}\t{', '.join(map(str, pages))}")
    out.write(("\n".join(lines) + "\n").encode("utf-8"))
    return 0


_COMMANDS = {"render": _cmd_render, "faces": _cmd_faces, "edit": _cmd_edit, "toc": _cmd_toc}


def run(argv: Sequence[str], stdin=None, stdout=None, stderr: TextIO | None = None) -> int:
    """Run one invocation; ``stdin``/``stdout`` are binary streams."""
    stdin = stdin if stdin is not None else sys.stdin.buffer
    stdout = stdout if stdout is not None else sys.stdout.buffer
    stderr = stderr if stderr is not None else sys.stderr
    try:
        args = build_parser().parse_args(list(argv))
    except UsageError as exc:
        print(exc, file=stderr)
        return 1
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args, stdin, stdout, stderr)
    except (InputError, TokenizeError, ParseError, FaceDerivationError) as exc:
        print(f"error: {exc}", file=stderr)
        return 2
    except LayoutError as exc:
        print(f"error: {exc}", file=stderr)
        return 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()

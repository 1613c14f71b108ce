"""folio: typeset source code like a book.

The pipeline runs tokens -> faces -> layout -> render; :mod:`folio.editcore`
is an independent modal edit engine.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .color import Color, contrast_ratio, from_perceptual, to_perceptual
from .editcore import Buffer, apply_script, parse_script
from .faces import FaceOptions, FaceSet, derive_faces, validate_faces
from .layout import Book, Document, LayoutConfig, build_book
from .render import render_ansi, render_html, strip_sgr, usage_report
from .tokens import extract_structure, group_comments, tokenize

__all__ = [
    "Book",
    "Buffer",
    "Color",
    "Document",
    "FaceOptions",
    "FaceSet",
    "LayoutConfig",
    "apply_script",
    "build_book",
    "contrast_ratio",
    "derive_faces",
    "extract_structure",
    "from_perceptual",
    "group_comments",
    "parse_script",
    "render_ansi",
    "render_html",
    "strip_sgr",
    "to_perceptual",
    "tokenize",
    "usage_report",
    "validate_faces",
]

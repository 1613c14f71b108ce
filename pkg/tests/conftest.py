from __future__ import annotations

from pathlib import Path

import pytest

from folio.color import Color
from folio.faces import derive_faces

CORPUS = Path(__file__).parent / "corpus"
CORPUS_FILES = sorted(p for p in CORPUS.iterdir() if p.is_file())


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance: end-to-end acceptance criteria")


@pytest.fixture(scope="session")
def faces():
    return derive_faces(Color.from_hex("#383A42"), Color.from_hex("#FAFAFA"))


@pytest.fixture(params=CORPUS_FILES, ids=lambda p: p.name)
def corpus_file(request) -> Path:
    return request.param

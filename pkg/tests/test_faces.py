from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from folio.color import Color, contrast_ratio, from_perceptual, hue_distance, to_perceptual
from folio.faces import (
    DEFAULT_LADDER,
    FACE_NAMES,
    FaceDerivationError,
    FaceOptions,
    FaceSet,
    FaceSpec,
    WeightLadder,
    age_tint,
    derive_faces,
    distinct_hues,
    face_for_token,
    find_markers,
    hue_wheel,
    validate_faces,
)

BLACK, WHITE = Color(0, 0, 0), Color(255, 255, 255)


def failed(fs):
    return [f"{c.face}.{c.clause}" for c in validate_faces(fs) if not c.passed]


def test_ladder():
    assert DEFAULT_LADDER.names == ("thin", "light", "regular", "medium", "bold")
    assert DEFAULT_LADDER.weight("bold") == 700
    assert DEFAULT_LADDER.heavier("medium") == "bold"
    with pytest.raises(ValueError):
        WeightLadder((("a", 400), ("b", 300)))
    with pytest.raises(FaceDerivationError):
        DEFAULT_LADDER.heavier("bold")


def test_black_on_white_strong_is_bold():
    fs = derive_faces(BLACK, WHITE)
    assert fs["strong"].fg.hex == "#000000"
    assert fs["strong"].weight == "bold"
    assert set(fs) == set(FACE_NAMES)
    assert failed(fs) == []


def test_reference_palette_passes_oracle():
    fs = derive_faces(Color.from_hex("#383A42"), Color.from_hex("#FAFAFA"))
    clauses = oracles.face_clauses(fs)
    assert all(clauses.values()), clauses
    assert failed(fs) == []


def test_low_contrast_rejected():
    with pytest.raises(FaceDerivationError) as info:
        derive_faces(Color.from_hex("#AAAAAA"), Color.from_hex("#BBBBBB"))
    assert info.value.clause == "default.contrast"
    assert info.value.measured == pytest.approx(oracles.wcag("#AAAAAA", "#BBBBBB"))
    assert info.value.measured < 4.5


def test_unsatisfiable_threshold_names_clause():
    opts = FaceOptions(popout_min_chroma=180.0)
    with pytest.raises(FaceDerivationError) as info:
        derive_faces(BLACK, WHITE, opts)
    assert info.value.clause.startswith("popout")


def test_validate_flags_strong_fg():
    fs = derive_faces(BLACK, WHITE)
    bad = fs.replace("strong", fg=Color(1, 1, 1))
    assert "strong.fg" in failed(bad)


def test_validate_measures_salient_dL():
    fg = Color.from_hex("#383A42")
    fs = derive_faces(fg, Color.from_hex("#FAFAFA"))
    L, _, _ = to_perceptual(fg)
    target = from_perceptual(L + 12, 0, 0)  # grays stay in gamut
    bad = fs.replace("salient", fg=target)
    check = next(c for c in validate_faces(bad) if c.clause == "dL" and c.face == "salient")
    oracle_dL = abs(oracles.lch(target.hex)[0] - oracles.lch(fg.hex)[0])
    assert not check.passed
    assert check.measured == pytest.approx(oracle_dL, abs=0.01)
    assert check.measured == pytest.approx(12, abs=0.5)


def test_faceset_needs_all_faces():
    fs = derive_faces(BLACK, WHITE)
    with pytest.raises(ValueError):
        FaceSet({k: v for k, v in fs.items() if k != "subtle"})
    with pytest.raises(ValueError):
        FaceSet({**fs.faces, "default": FaceSpec("default", BLACK, None)})


def test_face_for_token():
    assert face_for_token("comment") == "faded"
    assert face_for_token("keyword") == "strong"
    assert face_for_token("identifier") == "default"
    assert face_for_token("string") == "salient"
    assert face_for_token("comment", marker="TODO") == "popout"
    assert face_for_token("def-name", in_header=True) == "strong"
    assert "critical" not in {face_for_token(c) for c in ("keyword", "number", "text", "operator")}
    assert find_markers("# TODO: x FIXME") == [(2, 6), (10, 15)]


def test_distinct_hues_examples():
    assert hue_wheel(1) == [0.0]
    assert hue_wheel(2) == [0.0, 180.0]
    assert hue_wheel(6) == [0.0, 60.0, 120.0, 180.0, 240.0, 300.0]
    for n in (1, 2, 6):
        for want, c in zip(hue_wheel(n), distinct_hues(n)):
            assert oracles.hue_gap(oracles.lch(c.hex)[2], want) < 0.5
    with pytest.raises(ValueError):
        distinct_hues(0)


@pytest.mark.parametrize("n", range(2, 25))
def test_distinct_hues_spacing(n):
    nominal = hue_wheel(n)
    gaps = [hue_distance(a, b) for a, b in itertools.combinations(nominal, 2)]
    assert min(gaps) == pytest.approx(360 / n, abs=0.1)
    # 8-bit output cannot hit every hue exactly; allow quantization error
    measured = [oracles.lch(c.hex)[2] for c in distinct_hues(n)]
    gaps = [oracles.hue_gap(a, b) for a, b in itertools.combinations(measured, 2)]
    assert min(gaps) == pytest.approx(360 / n, abs=1.0)


def test_age_tint_examples():
    base, bg = Color.from_hex("#C0392B"), Color.from_hex("#FAFAFA")
    assert age_tint(base, bg, 1.0) == base
    old = age_tint(base, bg, 0.0)
    assert oracles.wcag(old.hex, bg.hex) <= 1.5
    L_new = oracles.lch(base.hex)[0]
    L_old = oracles.lch(old.hex)[0]
    mid = oracles.lch(age_tint(base, bg, 0.5).hex)[0]
    assert mid == pytest.approx((L_new + L_old) / 2, abs=1.0)
    for bad in (-0.1, 1.5):
        with pytest.raises(ValueError):
            age_tint(base, bg, bad)


channels = st.integers(0, 255)
colors = st.builds(Color, channels, channels, channels)


@settings(max_examples=60, deadline=None)
@given(colors, colors)
def test_age_tint_monotone(base, bg):
    Ls = [to_perceptual(age_tint(base, bg, a))[0] for a in np.linspace(0, 1, 11)]
    diffs = np.diff(Ls)
    Lb, L = to_perceptual(bg)[0], to_perceptual(base)[0]
    slack = 0.6  # one 8-bit rounding step in L*
    if L >= Lb:
        assert np.all(diffs >= -slack)
    else:
        assert np.all(diffs <= slack)


@st.composite
def palettes(draw):
    fg = draw(colors)
    bg = draw(colors)
    if contrast_ratio(fg, bg) < 4.5:
        bg = WHITE if contrast_ratio(fg, WHITE) >= contrast_ratio(fg, BLACK) else BLACK
    return fg, bg


@settings(max_examples=150, deadline=None)
@given(palettes())
def test_random_palettes_hold(palette):
    fs = derive_faces(*palette)
    assert fs["strong"].fg.hex == fs.fg.hex
    assert failed(fs) == []
    clauses = oracles.face_clauses(fs)
    assert all(clauses.values()), {k: v for k, v in clauses.items() if not v}

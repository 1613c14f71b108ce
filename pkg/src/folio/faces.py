"""Six cognitive faces derived from a two-color base palette.

Beyond the default face, every face answers a perceptual role: *critical*
demands action, *popout* grabs attention through hue, *strong* marks
structure through weight alone, *salient* flags an ordinary element that
matters more through a hue change at equal lightness, *faded* recedes toward
the background, and *subtle* tints an area.

Each rule is read in CIE LCh(ab), with lightness as L* and hue as the LCh angle.
:func:`derive_faces` searches a small candidate grid per face and keeps the
best 8-bit color whose *measured* coordinates satisfy the rule, so what it
returns is what :func:`validate_faces` will accept.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field, fields, replace
from functools import lru_cache
from typing import Iterator, Mapping

import numpy as np

from .color import (
    Color,
    contrast_ratio,
    from_perceptual,
    hue_distance,
    lch_to_srgb,
    max_chroma,
    relative_luminance,
    srgb_to_lch,
    to_perceptual,
)

__all__ = [
    "DEFAULT_LADDER",
    "FACE_NAMES",
    "ClauseCheck",
    "FaceDerivationError",
    "FaceOptions",
    "FaceSet",
    "FaceSpec",
    "WeightLadder",
    "age_tint",
    "derive_faces",
    "distinct_hues",
    "face_for_token",
    "find_markers",
    "validate_faces",
]

FACE_NAMES = ("default", "critical", "popout", "strong", "salient", "faded", "subtle")
MARKERS = ("TODO", "FIXME")
_MARKER_RE = re.compile(r"\b(?:%s)\b" % "|".join(MARKERS))

# Safety margin applied while searching so that measured values clear the
# thresholds even under a slightly different conversion.
_EPS = 0.25

WHITE = Color(255, 255, 255)
BLACK = Color(0, 0, 0)


class FaceDerivationError(ValueError):
    """A face rule could not be met; ``clause`` names the first failure."""

    def __init__(self, clause: str, message: str, measured: float | None = None):
        super().__init__(f"{clause}: {message}")
        self.clause = clause
        self.measured = measured


@dataclass(frozen=True)
class WeightLadder:
    entries: tuple[tuple[str, int], ...] = (
        ("thin", 100),
        ("light", 300),
        ("regular", 400),
        ("medium", 500),
        ("bold", 700),
    )

    def __post_init__(self) -> None:
        weights = [w for _, w in self.entries]
        if not weights or any(b <= a for a, b in zip(weights, weights[1:])):
            raise ValueError("ladder weights must strictly increase")
        if any(not 100 <= w <= 900 for w in weights):
            raise ValueError("ladder weights must lie in 100..900")

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.entries)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"weight {name!r} not on the ladder") from None

    def weight(self, name: str) -> int:
        return self.entries[self.index(name)][1]

    def heavier(self, name: str) -> str:
        i = self.index(name)
        if i + 1 >= len(self.entries):
            raise FaceDerivationError("strong.weight", f"no weight heavier than {name!r}")
        return self.entries[i + 1][0]


DEFAULT_LADDER = WeightLadder()


@dataclass(frozen=True)
class FaceOptions:
    """Every tunable threshold of the face rules, with their defaults.

    Hue preferences only steer the search; the threshold fields are hard
    constraints checked by :func:`validate_faces`.
    """

    base_weight: str = "medium"
    salient_hue: float = 260.0
    popout_hue: float = 50.0
    critical_hue: float = 25.0
    base_contrast: float = 4.5
    achromatic_chroma: float = 10.0
    salient_dL: float = 5.0
    salient_dh: float = 30.0
    salient_min_chroma: float = 30.0
    faded_factor: float = 0.55
    faded_tol: float = 2.0
    faded_dh: float = 5.0
    subtle_dL_min: float = 2.0
    subtle_dL_max: float = 8.0
    subtle_dh: float = 10.0
    popout_dh: float = 60.0
    popout_min_chroma: float = 40.0
    critical_hue_min: float = 10.0
    critical_hue_max: float = 45.0
    critical_contrast: float = 4.5
    ladder: WeightLadder = DEFAULT_LADDER

    @classmethod
    def threshold_names(cls) -> tuple[str, ...]:
        skip = {"ladder", "base_weight", "salient_hue", "popout_hue", "critical_hue"}
        return tuple(f.name for f in fields(cls) if f.name not in skip)


@dataclass(frozen=True)
class FaceSpec:
    name: str
    fg: Color
    bg: Color | None = None  # None inherits the default background
    weight: str = "regular"


@dataclass(frozen=True)
class FaceSet(Mapping[str, FaceSpec]):
    faces: dict[str, FaceSpec]
    options: FaceOptions = field(default_factory=FaceOptions)

    def __post_init__(self) -> None:
        if set(self.faces) != set(FACE_NAMES):
            raise ValueError(f"a face set needs exactly {FACE_NAMES}")
        if self.faces["default"].bg is None:
            raise ValueError("the default face needs a concrete background")

    def __getitem__(self, name: str) -> FaceSpec:
        return self.faces[name]

    def __iter__(self) -> Iterator[str]:
        return iter(FACE_NAMES)

    def __len__(self) -> int:
        return len(FACE_NAMES)

    @property
    def fg(self) -> Color:
        return self.faces["default"].fg

    @property
    def bg(self) -> Color:
        bg = self.faces["default"].bg
        assert bg is not None
        return bg

    @property
    def ladder(self) -> WeightLadder:
        return self.options.ladder

    def replace(self, name: str, **changes) -> FaceSet:
        faces = dict(self.faces)
        faces[name] = replace(faces[name], **changes)
        return FaceSet(faces, self.options)


@dataclass(frozen=True)
class ClauseCheck:
    face: str
    clause: str
    passed: bool
    measured: float | str

    def __str__(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        value = f"{self.measured:.2f}" if isinstance(self.measured, float) else self.measured
        return f"{status} {self.face}.{self.clause} measured={value}"


# -- candidate search ---------------------------------------------------------


class _Candidates:
    """Quantized colors from an LCh grid, with their measured LCh."""

    def __init__(self, L, C, h):
        grid = np.stack(np.meshgrid(L, C, h, indexing="ij"), axis=-1).reshape(-1, 3)
        rgb = np.round(np.clip(lch_to_srgb(grid), 0.0, 1.0) * 255.0).astype(np.int64)
        keys = np.unique(rgb[:, 0] << 16 | rgb[:, 1] << 8 | rgb[:, 2])
        self.rgb8 = np.stack([keys >> 16, (keys >> 8) & 255, keys & 255], axis=-1)
        measured = srgb_to_lch(self.rgb8 / 255.0)
        self.L, self.C, self.h = measured[:, 0], measured[:, 1], measured[:, 2]
        self.luminance = relative_luminance(self.rgb8)

    def pick(self, clauses: list[tuple[str, np.ndarray]], cost: np.ndarray) -> Color:
        mask = np.ones(len(self.rgb8), dtype=bool)
        for clause, ok in clauses:
            mask &= ok
            if not mask.any():
                raise FaceDerivationError(clause, "no sRGB color satisfies this rule")
        best = np.flatnonzero(mask)[np.argmin(cost[mask])]
        r, g, b = (int(v) for v in self.rgb8[best])
        return Color(r, g, b)


def _contrast(lum: np.ndarray, other: Color) -> np.ndarray:
    lo = relative_luminance(other)
    return (np.maximum(lum, lo) + 0.05) / (np.minimum(lum, lo) + 0.05)


def _derive_salient(fg, opts: FaceOptions) -> Color:
    Lf, Cf, hf = fg
    cand = _Candidates(
        np.clip(Lf + np.arange(-4.0, 4.01, 1.0), 0, 100),
        np.array([15, 25, 35, 45, 60, 75, 90]),
        np.arange(0, 360, 5.0),
    )
    dL = np.abs(cand.L - Lf)
    clauses = [("salient.dL", dL <= opts.salient_dL - _EPS)]
    if Cf >= opts.achromatic_chroma:
        clauses.append(("salient.hue", hue_distance(cand.h, hf) >= opts.salient_dh + _EPS))
        clauses.append(("salient.chroma", cand.C >= opts.achromatic_chroma + _EPS))
    else:
        clauses.append(("salient.chroma", cand.C >= opts.salient_min_chroma + _EPS))
    cost = hue_distance(cand.h, opts.salient_hue) + 0.3 * np.abs(cand.C - 50) + 2 * dL
    return cand.pick(clauses, cost)


def _derive_faded(fg, bg, opts: FaceOptions) -> Color:
    Lf, Cf, hf = fg
    Lb = bg[0]
    gap = opts.faded_factor * abs(Lf - Lb)
    target = Lb + np.sign(Lf - Lb) * gap
    chromatic = Cf >= opts.achromatic_chroma
    hues = hf + (np.arange(-4.0, 4.01, 0.5) if chromatic else np.arange(-20.0, 20.1, 5.0))
    cand = _Candidates(
        np.clip(target + np.arange(-1.5, 1.51, 0.25), 0, 100),
        Cf * np.linspace(0.2, 1.0, 9),
        hues % 360,
    )
    clauses = [("faded.dL", np.abs(np.abs(cand.L - Lb) - gap) <= opts.faded_tol - _EPS)]
    if chromatic:
        clauses.append(("faded.hue", hue_distance(cand.h, hf) <= opts.faded_dh - _EPS))
    cost = np.abs(cand.L - target) + 0.05 * np.abs(cand.C - Cf) + 0.2 * hue_distance(cand.h, hf)
    return cand.pick(clauses, cost)


def _derive_subtle(fg, bg, opts: FaceOptions) -> Color:
    Lf = fg[0]
    Lb, Cb, hb = bg
    toward = 1.0 if Lf >= Lb else -1.0
    steps = np.arange(opts.subtle_dL_min + 0.5, opts.subtle_dL_max - 0.49, 0.5)
    chromatic = Cb >= opts.achromatic_chroma
    hues = hb + (np.arange(-8.0, 8.1, 1.0) if chromatic else np.array([0.0]))
    cand = _Candidates(
        np.clip(np.concatenate([Lb + toward * steps, Lb - toward * steps]), 0, 100),
        Cb * np.linspace(0.5, 1.2, 8),
        hues % 360,
    )
    dL = np.abs(cand.L - Lb)
    clauses = [
        ("subtle.dL", (dL >= opts.subtle_dL_min + _EPS) & (dL <= opts.subtle_dL_max - _EPS))
    ]
    if chromatic:
        clauses.append(("subtle.hue", hue_distance(cand.h, hb) <= opts.subtle_dh - _EPS))
    wrong_side = np.sign(cand.L - Lb) != toward
    mid = (opts.subtle_dL_min + opts.subtle_dL_max) / 2
    cost = (
        np.abs(dL - mid)
        + 10.0 * wrong_side
        + 0.05 * np.abs(cand.C - Cb)
        + 0.2 * hue_distance(cand.h, hb)
    )
    return cand.pick(clauses, cost)


@lru_cache(maxsize=8)
def _popout_grid(min_chroma: float) -> _Candidates:
    return _Candidates(
        np.arange(10.0, 91.0, 5.0),
        np.arange(min_chroma, 131.0, 10.0),
        np.arange(0, 360, 5.0),
    )


@lru_cache(maxsize=8)
def _critical_grid(lo: float, hi: float) -> _Candidates:
    return _Candidates(
        np.arange(20.0, 71.0, 2.5),
        np.arange(30.0, 121.0, 10.0),
        np.arange(lo + 1.0, hi - 0.99, 1.0),
    )


def _derive_popout(fg, salient, bg: Color, opts: FaceOptions) -> Color:
    cand = _popout_grid(opts.popout_min_chroma)
    clauses = [("popout.chroma", cand.C >= opts.popout_min_chroma + _EPS)]
    if fg[1] >= opts.achromatic_chroma:
        clauses.append(("popout.hue_default", hue_distance(cand.h, fg[2]) >= opts.popout_dh + _EPS))
    if salient[1] >= opts.achromatic_chroma:
        clauses.append(
            ("popout.hue_salient", hue_distance(cand.h, salient[2]) >= opts.popout_dh + _EPS)
        )
    readable = _contrast(cand.luminance, bg)
    cost = (
        hue_distance(cand.h, opts.popout_hue)
        + 40.0 * np.maximum(0.0, 3.0 - readable)
        - 0.1 * cand.C
    )
    return cand.pick(clauses, cost)


def _derive_critical(fg: Color, bg: Color, opts: FaceOptions) -> tuple[Color, Color]:
    lo, hi = opts.critical_hue_min, opts.critical_hue_max
    cand = _critical_grid(lo, hi)
    options = [bg, fg, WHITE, BLACK]
    ratios = np.stack([_contrast(cand.luminance, c) for c in options])
    passing = ratios >= opts.critical_contrast + 0.05
    first = np.where(passing.any(axis=0), passing.argmax(axis=0), len(options))
    clauses = [
        ("critical.hue", (cand.h >= lo + _EPS) & (cand.h <= hi - _EPS)),
        ("critical.contrast", passing.any(axis=0)),
    ]
    cost = hue_distance(cand.h, opts.critical_hue) + 5.0 * first - 0.1 * cand.C
    critical_bg = cand.pick(clauses, cost)
    for option in options:
        if contrast_ratio(option, critical_bg) >= opts.critical_contrast + 0.05:
            return option, critical_bg
    raise FaceDerivationError("critical.contrast", "no readable foreground")  # pragma: no cover


def derive_faces(
    default_fg: Color, default_bg: Color, options: FaceOptions | None = None
) -> FaceSet:
    """Build the seven-face family from a foreground/background pair."""
    opts = options or FaceOptions()
    ratio = contrast_ratio(default_fg, default_bg)
    if ratio < opts.base_contrast:
        raise FaceDerivationError(
            "default.contrast",
            f"base contrast {ratio:.2f} is below {opts.base_contrast}",
            measured=ratio,
        )
    base = opts.base_weight
    ladder = opts.ladder
    ladder.index(base)
    fg, bg = to_perceptual(default_fg), to_perceptual(default_bg)

    salient = _derive_salient(fg, opts)
    faded = _derive_faded(fg, bg, opts)
    subtle = _derive_subtle(fg, bg, opts)
    popout = _derive_popout(fg, to_perceptual(salient), default_bg, opts)
    critical_fg, critical_bg = _derive_critical(default_fg, default_bg, opts)

    faces = {
        "default": FaceSpec("default", default_fg, default_bg, base),
        "critical": FaceSpec("critical", critical_fg, critical_bg, base),
        "popout": FaceSpec("popout", popout, None, base),
        "strong": FaceSpec("strong", default_fg, None, ladder.heavier(base)),
        "salient": FaceSpec("salient", salient, None, base),
        "faded": FaceSpec("faded", faded, None, base),
        "subtle": FaceSpec("subtle", default_fg, subtle, base),
    }
    return FaceSet(faces, opts)


def validate_faces(fs: FaceSet) -> list[ClauseCheck]:
    """Measure every face rule on ``fs``; one entry per clause."""
    opts = fs.options
    ach = opts.achromatic_chroma
    fg, bg = to_perceptual(fs.fg), to_perceptual(fs.bg)
    out: list[ClauseCheck] = []

    def check(face: str, clause: str, passed: bool, measured) -> None:
        if isinstance(measured, (float, np.floating)):
            measured = float(measured)
        out.append(ClauseCheck(face, clause, bool(passed), measured))

    ratio = contrast_ratio(fs.fg, fs.bg)
    check("default", "contrast", ratio >= opts.base_contrast, ratio)

    strong = fs["strong"]
    check("strong", "fg", strong.fg == fs.fg, strong.fg.hex)
    try:
        expected = fs.ladder.heavier(fs["default"].weight)
    except (KeyError, FaceDerivationError):
        expected = None
    check("strong", "weight", strong.weight == expected, strong.weight)

    sal = to_perceptual(fs["salient"].fg)
    dL = abs(sal[0] - fg[0])
    check("salient", "dL", dL <= opts.salient_dL, dL)
    if fg[1] >= ach:
        dh = hue_distance(sal[2], fg[2])
        check("salient", "hue", dh >= opts.salient_dh, dh)
    else:
        check("salient", "chroma", sal[1] >= opts.salient_min_chroma, sal[1])

    fad = to_perceptual(fs["faded"].fg)
    if fg[1] >= ach:
        dh = hue_distance(fad[2], fg[2])
        check("faded", "hue", dh <= opts.faded_dh, dh)
    gap = abs(fad[0] - bg[0])
    want = opts.faded_factor * abs(fg[0] - bg[0])
    check("faded", "dL", abs(gap - want) <= opts.faded_tol, gap)

    subtle_bg = fs["subtle"].bg
    if subtle_bg is None:
        check("subtle", "dL", False, "no background")
    else:
        sub = to_perceptual(subtle_bg)
        dL = abs(sub[0] - bg[0])
        check("subtle", "dL", opts.subtle_dL_min <= dL <= opts.subtle_dL_max, dL)
        if bg[1] >= ach:
            dh = hue_distance(sub[2], bg[2])
            check("subtle", "hue", dh <= opts.subtle_dh, dh)

    pop = to_perceptual(fs["popout"].fg)
    if fg[1] >= ach:
        dh = hue_distance(pop[2], fg[2])
        check("popout", "hue_default", dh >= opts.popout_dh, dh)
    if sal[1] >= ach:
        dh = hue_distance(pop[2], sal[2])
        check("popout", "hue_salient", dh >= opts.popout_dh, dh)
    check("popout", "chroma", pop[1] >= opts.popout_min_chroma, pop[1])

    crit = fs["critical"]
    if crit.bg is None:
        check("critical", "hue", False, "no background")
    else:
        hue = to_perceptual(crit.bg)[2]
        check("critical", "hue", opts.critical_hue_min <= hue <= opts.critical_hue_max, hue)
        ratio = contrast_ratio(crit.fg, crit.bg)
        check("critical", "contrast", ratio >= opts.critical_contrast, ratio)
    return out


# -- assignment ---------------------------------------------------------------

_TOKEN_FACES = {
    "comment": "faded",
    "keyword": "strong",
    "def-name": "strong",
    "string": "salient",
}


def face_for_token(category: str, *, in_header: bool = False, marker: str | None = None) -> str:
    """Face name for a token category; ``critical`` is never chosen here."""
    if marker in MARKERS and category == "comment":
        return "popout"
    if in_header and category == "def-name":
        return "strong"
    return _TOKEN_FACES.get(category, "default")


def find_markers(text: str) -> list[tuple[int, int]]:
    """Character ranges of TODO/FIXME markers inside a comment."""
    return [m.span() for m in _MARKER_RE.finditer(text)]


def hue_wheel(n: int) -> list[float]:
    if n < 1:
        raise ValueError("need at least one hue")
    return [i * 360.0 / n for i in range(n)]


_NEIGHBOURS = np.array(list(itertools.product(range(-2, 3), repeat=3)))


def _hue_true(L: float, C: float, h: float) -> Color:
    """8-bit color near (L, C, h) whose measured hue is closest to ``h``.

    Chroma is first lowered to the gamut boundary, which keeps the hue that
    a per-channel clamp would shift; a 5x5x5 neighbourhood then absorbs most
    of the rounding error.
    """
    C = min(C, max_chroma(L, h))
    seed = np.array(from_perceptual(L, C, h).rgb)
    cand = np.clip(seed + _NEIGHBOURS, 0, 255)
    lch = srgb_to_lch(cand / 255.0)
    err = hue_distance(lch[:, 2], h) + 0.01 * (np.abs(lch[:, 0] - L) + np.abs(lch[:, 1] - C))
    return Color(*(int(v) for v in cand[int(np.argmin(err))]))


def distinct_hues(n: int, lightness: float = 65.0, chroma: float = 45.0) -> list[Color]:
    """``n`` colors evenly spaced in hue from 0°, at fixed L* and C*."""
    return [_hue_true(lightness, chroma, h) for h in hue_wheel(n)]


def age_tint(base: Color, bg: Color, age: float) -> Color:
    """Tint ``base`` by edit age: 1 is fresh (``base``), 0 fades toward ``bg``.

    L* moves linearly from the base down to a point 10% of the way from the
    background to the base; hue is kept and chroma is reduced only as far as
    the gamut requires.
    """
    if not 0.0 <= age <= 1.0:
        raise ValueError(f"age must lie in [0, 1], got {age}")
    L, C, h = to_perceptual(base)
    Lb = to_perceptual(bg)[0]
    old = Lb + 0.10 * (L - Lb)
    target = old + age * (L - old)
    if age == 1.0:
        return base
    return from_perceptual(target, min(C, max_chroma(target, h)), h)

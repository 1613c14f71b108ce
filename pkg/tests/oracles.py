"""Independent reference computations used by the tests.

Color math goes through scikit-image, and the WCAG formula is re-typed by
hand here; neither shares code with :mod:`folio.color`.
"""

from __future__ import annotations

import math
import warnings

import numpy as np
from skimage import color as skcolor


def lch(hex_color: str) -> tuple[float, float, float]:
    rgb = np.array([[[int(hex_color[i : i + 2], 16) / 255.0 for i in (1, 3, 5)]]])
    L, a, b = skcolor.rgb2lab(rgb, illuminant="D65", observer="2")[0, 0]
    return float(L), float(math.hypot(a, b)), float(math.degrees(math.atan2(b, a)) % 360.0)


def lab_to_hex_clamped(L: float, a: float, b: float) -> str:
    with warnings.catch_warnings():  # out-of-gamut input is the point here
        warnings.simplefilter("ignore", UserWarning)
        rgb = skcolor.lab2rgb(np.array([[[L, a, b]]]), illuminant="D65", observer="2")[0, 0]
    r, g, bl = (int(round(min(1.0, max(0.0, c)) * 255)) for c in rgb)
    return f"#{r:02X}{g:02X}{bl:02X}"


def hue_gap(a: float, b: float) -> float:
    d = abs(a - b) % 360.0
    return min(d, 360.0 - d)


def _channel(v: int) -> float:
    c = v / 255.0
    return c / 12.92 if c <= 0.04045 else ((c + 0.055) / 1.055) ** 2.4


def luminance(hex_color: str) -> float:
    r, g, b = (_channel(int(hex_color[i : i + 2], 16)) for i in (1, 3, 5))
    return 0.2126 * r + 0.7152 * g + 0.0722 * b


def wcag(a: str, b: str) -> float:
    la, lb = luminance(a), luminance(b)
    return (max(la, lb) + 0.05) / (min(la, lb) + 0.05)


def face_clauses(fs) -> dict[str, bool]:
    """Every face rule re-measured with the oracle conversion.

    Hue clauses whose reference color is achromatic (C* < 10) are skipped,
    since the hue angle of a gray is numerical noise.
    """
    o = fs.options
    fg, bg = lch(fs.fg.hex), lch(fs.bg.hex)
    sal = lch(fs["salient"].fg.hex)
    fad = lch(fs["faded"].fg.hex)
    sub = lch(fs["subtle"].bg.hex)
    pop = lch(fs["popout"].fg.hex)
    crit_bg = lch(fs["critical"].bg.hex)
    chromatic_fg = fg[1] >= o.achromatic_chroma
    out = {
        "default.contrast": wcag(fs.fg.hex, fs.bg.hex) >= 4.5,
        "strong.fg": fs["strong"].fg.hex == fs.fg.hex,
        "strong.weight": fs.ladder.index(fs["strong"].weight)
        == fs.ladder.index(fs["default"].weight) + 1,
        "salient.dL": abs(sal[0] - fg[0]) <= 5.0 + 0.05,
        "faded.dL": abs(abs(fad[0] - bg[0]) - 0.55 * abs(fg[0] - bg[0])) <= 2.0 + 0.05,
        "subtle.dL": 2.0 - 0.05 <= abs(sub[0] - bg[0]) <= 8.0 + 0.05,
        "popout.chroma": pop[1] >= 40.0 - 0.05,
        "critical.hue": 10.0 - 0.05 <= crit_bg[2] <= 45.0 + 0.05,
        "critical.contrast": wcag(fs["critical"].fg.hex, fs["critical"].bg.hex) >= 4.5,
    }
    if chromatic_fg:
        out["salient.hue"] = hue_gap(sal[2], fg[2]) >= 30.0 - 0.05
        out["faded.hue"] = hue_gap(fad[2], fg[2]) <= 5.0 + 0.05
        out["popout.hue_default"] = hue_gap(pop[2], fg[2]) >= 60.0 - 0.05
    else:
        out["salient.chroma"] = sal[1] >= 30.0 - 0.05
    if bg[1] >= o.achromatic_chroma:
        out["subtle.hue"] = hue_gap(sub[2], bg[2]) <= 10.0 + 0.05
    if sal[1] >= o.achromatic_chroma:
        out["popout.hue_salient"] = hue_gap(pop[2], sal[2]) >= 60.0 - 0.05
    return out

"""sRGB colors, CIE L*a*b* / LCh(ab) under D65, and WCAG contrast.

The array functions accept any leading shape so that callers can evaluate
whole candidate grids at once; :class:`Color` wraps a single 8-bit triplet.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "Color",
    "contrast_ratio",
    "from_perceptual",
    "hue_distance",
    "lab_to_srgb",
    "lch_to_srgb",
    "max_chroma",
    "relative_luminance",
    "srgb_to_lab",
    "srgb_to_lch",
    "to_perceptual",
]

# IEC 61966-2-1 linear sRGB -> XYZ, D65 white.
_RGB_TO_XYZ = np.array(
    [
        [0.4124564, 0.3575761, 0.1804375],
        [0.2126729, 0.7151522, 0.0721750],
        [0.0193339, 0.1191920, 0.9503041],
    ]
)
_XYZ_TO_RGB = np.linalg.inv(_RGB_TO_XYZ)
_WHITE = np.array([0.95047, 1.0, 1.08883])
_EPSILON = 216 / 24389
_KAPPA = 24389 / 27


def _to_linear(c: np.ndarray) -> np.ndarray:
    return np.where(c <= 0.04045, c / 12.92, ((c + 0.055) / 1.055) ** 2.4)


def _from_linear(c: np.ndarray) -> np.ndarray:
    c = np.asarray(c, dtype=float)
    safe = np.maximum(c, 0.0)
    return np.where(c <= 0.0031308, 12.92 * c, 1.055 * safe ** (1 / 2.4) - 0.055)


def srgb_to_lab(rgb: np.ndarray) -> np.ndarray:
    """``rgb`` in [0, 1], shape (..., 3) -> L*a*b*, same shape."""
    xyz = _to_linear(np.asarray(rgb, dtype=float)) @ _RGB_TO_XYZ.T / _WHITE
    f = np.where(xyz > _EPSILON, np.cbrt(xyz), (_KAPPA * xyz + 16) / 116)
    return np.stack(
        [116 * f[..., 1] - 16, 500 * (f[..., 0] - f[..., 1]), 200 * (f[..., 1] - f[..., 2])],
        axis=-1,
    )


def lab_to_srgb(lab: np.ndarray) -> np.ndarray:
    """Inverse of :func:`srgb_to_lab`; the result is *not* clamped."""
    lab = np.asarray(lab, dtype=float)
    fy = (lab[..., 0] + 16) / 116
    fx = fy + lab[..., 1] / 500
    fz = fy - lab[..., 2] / 200
    f = np.stack([fx, fy, fz], axis=-1)
    f3 = f**3
    xyz = np.where(f3 > _EPSILON, f3, (116 * f - 16) / _KAPPA)
    return _from_linear((xyz * _WHITE) @ _XYZ_TO_RGB.T)


def _lab_to_lch(lab: np.ndarray) -> np.ndarray:
    chroma = np.hypot(lab[..., 1], lab[..., 2])
    hue = np.degrees(np.arctan2(lab[..., 2], lab[..., 1])) % 360.0
    return np.stack([lab[..., 0], chroma, hue], axis=-1)


def _lch_to_lab(lch: np.ndarray) -> np.ndarray:
    lch = np.asarray(lch, dtype=float)
    rad = np.radians(lch[..., 2])
    return np.stack([lch[..., 0], lch[..., 1] * np.cos(rad), lch[..., 1] * np.sin(rad)], axis=-1)


def srgb_to_lch(rgb: np.ndarray) -> np.ndarray:
    return _lab_to_lch(srgb_to_lab(rgb))


def lch_to_srgb(lch: np.ndarray) -> np.ndarray:
    return lab_to_srgb(_lch_to_lab(lch))


def hue_distance(a, b):
    """Shortest angular distance between hues, in degrees (0..180)."""
    d = np.abs(np.asarray(a, dtype=float) - np.asarray(b, dtype=float)) % 360.0
    out = np.minimum(d, 360.0 - d)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True, slots=True)
class Color:
    r: int
    g: int
    b: int

    def __post_init__(self) -> None:
        for channel in (self.r, self.g, self.b):
            if not 0 <= channel <= 255:
                raise ValueError(f"channel out of range: {channel}")

    @classmethod
    def from_hex(cls, value: str) -> Color:
        text = value.strip().lstrip("#")
        if len(text) != 6:
            raise ValueError(f"expected #RRGGBB, got {value!r}")
        try:
            return cls(int(text[0:2], 16), int(text[2:4], 16), int(text[4:6], 16))
        except ValueError:
            raise ValueError(f"expected #RRGGBB, got {value!r}") from None

    @classmethod
    def from_unit(cls, rgb) -> Color:
        """Round a float triplet in [0, 1], clamping each channel."""
        r, g, b = (int(round(min(1.0, max(0.0, float(c))) * 255)) for c in rgb)
        return cls(r, g, b)

    @property
    def hex(self) -> str:
        return f"#{self.r:02X}{self.g:02X}{self.b:02X}"

    @property
    def rgb(self) -> tuple[int, int, int]:
        return (self.r, self.g, self.b)

    @property
    def unit(self) -> np.ndarray:
        return np.array([self.r, self.g, self.b], dtype=float) / 255.0

    @property
    def lch(self) -> tuple[float, float, float]:
        return to_perceptual(self)

    def __str__(self) -> str:
        return self.hex


def to_perceptual(c: Color) -> tuple[float, float, float]:
    """Return (L*, C*, h) with h in degrees [0, 360)."""
    L, C, h = srgb_to_lch(c.unit)
    return float(L), float(C), float(h)


def from_perceptual(L: float, C: float, h: float) -> Color:
    """Inverse conversion; out-of-gamut channels are clamped."""
    return Color.from_unit(lch_to_srgb(np.array([L, C, h])))


def in_gamut(L: float, C: float, h: float, tol: float = 1e-9) -> bool:
    rgb = lch_to_srgb(np.array([L, C, h]))
    return bool(np.all(rgb >= -tol) and np.all(rgb <= 1 + tol))


def max_chroma(L: float, h: float, limit: float = 150.0) -> float:
    """Largest chroma at (L*, h) that stays inside the sRGB gamut."""
    if not in_gamut(L, 0.0, h):
        return 0.0
    lo, hi = 0.0, limit
    for _ in range(24):
        mid = (lo + hi) / 2
        if in_gamut(L, mid, h):
            lo = mid
        else:
            hi = mid
    return lo


def relative_luminance(c: Color | np.ndarray) -> float | np.ndarray:
    """WCAG 2.x relative luminance; arrays are 8-bit channel values (..., 3)."""
    rgb = c.unit if isinstance(c, Color) else np.asarray(c, dtype=float) / 255.0
    lum = _to_linear(rgb) @ np.array([0.2126, 0.7152, 0.0722])
    return float(lum) if np.ndim(lum) == 0 else lum


def contrast_ratio(a: Color, b: Color) -> float:
    la, lb = relative_luminance(a), relative_luminance(b)
    hi, lo = max(la, lb), min(la, lb)
    return (hi + 0.05) / (lo + 0.05)

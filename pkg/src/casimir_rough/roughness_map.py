"""Height maps: CSV I/O, three-level segmentation and a synthetic generator.

CSV format: plain text, one row of nm heights per line, comma separated,
with an optional first line ``# pitch_nm=<float>``.
"""

from __future__ import annotations

import io
import math
import os
import re
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .roughness import RoughnessLevels


MIN_SIDE = 8
_PITCH_RE = re.compile(r"^#\s*pitch_nm\s*=\s*([^\s]+)\s*$")


class MapParseError(ValueError):
    def __init__(self, message, row=None, column=None):
        where = ""
        if row is not None:
            where = f" (row {row}" + (f", column {column}" if column is not None else "") + ")"
        super().__init__(message + where)
        self.row = row
        self.column = column


class DegenerateClassWarning(UserWarning):
    pass


@dataclass(frozen=True)
class HeightMap:
    heights: np.ndarray  # (rows, cols) in nm
    pitch: float = 1.0  # nm per pixel

    def __post_init__(self):
        h = np.asarray(self.heights, dtype=float)
        if h.ndim != 2:
            raise ValueError("height map must be two-dimensional")
        if not self.pitch > 0:
            raise ValueError("pitch must be positive")
        if not np.all(np.isfinite(h)):
            raise ValueError("height map contains non-finite values")
        h.flags.writeable = False
        object.__setattr__(self, "heights", h)

    @property
    def height(self) -> int:
        return self.heights.shape[0]

    @property
    def width(self) -> int:
        return self.heights.shape[1]

    def validate_size(self, min_side: int = MIN_SIDE) -> None:
        if self.width < min_side or self.height < min_side:
            raise ValueError(f"height map must be at least {min_side}x{min_side}, got {self.height}x{self.width}")


def parse_height_map(text: str, pitch: float | None = None, min_side: int = 0) -> HeightMap:
    """Parse CSV text. ``pitch`` overrides the header value (default 1 nm).

    Any rectangular grid parses; the minimum analysable size is checked by
    :func:`segment_three_levels` or by passing ``min_side``.
    """
    rows = []
    header_pitch = None
    width = None
    for lineno, line in enumerate(io.StringIO(text)):
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            m = _PITCH_RE.match(line)
            if m and not rows:
                try:
                    header_pitch = float(m.group(1))
                except ValueError:
                    raise MapParseError(f"bad pitch value {m.group(1)!r}", lineno) from None
            continue
        cells = line.split(",")
        row = []
        for col, cell in enumerate(cells):
            try:
                row.append(float(cell))
            except ValueError:
                raise MapParseError(f"non-numeric cell {cell.strip()!r}", len(rows), col) from None
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise MapParseError(f"ragged row: expected {width} cells, got {len(row)}", len(rows))
        rows.append(row)
    if not rows:
        raise MapParseError("empty height map")
    pitch = pitch if pitch is not None else (header_pitch if header_pitch is not None else 1.0)
    hm = HeightMap(np.array(rows), pitch)
    if min_side:
        hm.validate_size(min_side)
    return hm


def load_height_map(source, pitch: float | None = None, min_side: int = 0) -> HeightMap:
    return parse_height_map(Path(source).read_text(encoding="utf-8"), pitch, min_side)


def format_height_map(hm: HeightMap) -> str:
    lines = [f"# pitch_nm={hm.pitch!r}"]
    lines += [",".join(repr(float(v)) for v in row) for row in hm.heights]
    return "\n".join(lines) + "\n"


def save_height_map(hm: HeightMap, path) -> None:
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(format_height_map(hm), encoding="utf-8")
    os.replace(tmp, path)


def default_thresholds(hm: HeightMap) -> tuple[float, float]:
    """Thresholds when nominal class heights are unknown.

    The nominal midpoints 15 and 30 nm sit at 3/8 and 3/4 of the 0..40 nm
    span; the same fractions of the 1st..99.9th percentile range are used.
    """
    lo, hi = np.percentile(hm.heights, [1.0, 99.9])
    span = hi - lo
    return lo + 0.375 * span, lo + 0.75 * span


def segment_three_levels(hm: HeightMap, thresholds: tuple[float, float] | None = None) -> RoughnessLevels:
    """Split pixels into tall (h >= t_high), intermediate and background.

    Class heights are the class means, except the background, which is
    reported as h0 = 2 * mean because it enters the model as h0/2. An empty
    class collapses onto the next lower level with a warning.
    """
    hm.validate_size()
    t_low, t_high = thresholds if thresholds is not None else default_thresholds(hm)
    if not t_low < t_high:
        raise ValueError("thresholds must satisfy t_low < t_high")
    h = hm.heights.ravel()
    n = h.size
    top = h >= t_high
    mid = (h >= t_low) & ~top
    bg = ~(top | mid)
    counts = [int(top.sum()), int(mid.sum()), int(bg.sum())]
    v1, v2 = counts[0] / n, counts[1] / n
    v0 = 1.0 - v1 - v2

    def mean(mask):
        # correctly rounded, hence independent of pixel order
        return math.fsum(h[mask]) / int(mask.sum())

    if counts[2]:
        half_h0 = mean(bg)
    else:
        half_h0 = mean(mid) if counts[1] else mean(top)
    h2 = mean(mid) if counts[1] else half_h0
    h1 = mean(top) if counts[0] else h2
    if 0 in counts:
        names = ("tall", "intermediate", "background")
        empty = [nm for nm, c in zip(names, counts) if c == 0]
        warnings.warn(f"empty roughness class(es): {', '.join(empty)}", DegenerateClassWarning, stacklevel=2)
    return RoughnessLevels(h1=h1, h2=h2, h0=2.0 * half_h0, v1=v1, v2=v2, v0=v0)


def _place_level(canvas, occupied, target, side, rng, max_attempts):
    """Paint ``target`` pixels as non-overlapping squares of ``side`` px.

    The last crystal is a partial rectangle so the pixel count is exact.
    Returns the boolean mask of painted pixels.
    """
    rows, cols = canvas.shape
    mask = np.zeros_like(occupied)
    remaining = target
    attempts = 0
    while remaining > 0:
        if attempts >= max_attempts:
            raise ValueError("requested area fractions are unachievable at this resolution")
        attempts += 1
        h = min(side, -(-remaining // side))  # rows needed, capped at a full square
        w = side
        r = int(rng.integers(0, rows - h + 1))
        c = int(rng.integers(0, cols - w + 1))
        # one-pixel gap to the neighbours keeps crystals separate
        r0, r1 = max(r - 1, 0), min(r + h + 1, rows)
        c0, c1 = max(c - 1, 0), min(c + w + 1, cols)
        if occupied[r0:r1, c0:c1].any():
            continue
        block = np.zeros((h, w), dtype=bool)
        take = min(remaining, h * w)
        block.flat[:take] = True
        mask[r:r + h, c:c + w] |= block
        occupied[r:r + h, c:c + w] |= block
        remaining -= take
    return mask


def generate_synthetic_map(levels: RoughnessLevels, lateral_feature_nm: float = 250.0, size: int = 256,
                           pitch: float = 4.0, seed: int = 0, max_attempts: int = 100_000) -> HeightMap:
    """Rectangular crystals of heights h1, h2 on a uniform [0, h0] background.

    Pixel counts of both crystal classes match round(v * size^2) exactly.
    """
    side = int(round(lateral_feature_nm / pitch))
    if side < 2:
        raise ValueError("feature size must span at least 2 pixels")
    if side > size:
        raise ValueError("feature size exceeds the map")
    rng = np.random.default_rng(seed)
    n = size * size
    canvas = rng.uniform(0.0, levels.h0, size=(size, size))
    occupied = np.zeros((size, size), dtype=bool)
    # tallest first: large squares are hardest to fit
    for frac, height in ((levels.v1, levels.h1), (levels.v2, levels.h2)):
        target = int(round(frac * n))
        if target == 0:
            continue
        mask = _place_level(canvas, occupied, target, side, rng, max_attempts)
        canvas[mask] = height
    return HeightMap(canvas, pitch)

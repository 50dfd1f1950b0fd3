"""Layout of plant-like vertical charts as resolved 2-D geometry.

A chart is a vertical trunk with one anchor per displayed hour, carrying
decorations whose extent encodes the hour's position (0..10).  The design
space has four axes:

* trunk form -- straight, or curvy (a sinusoidal horizontal offset);
* anchoring -- one-sided, two-sided (mirrored), or alternated sides;
* decoration -- bar, bamboo stick, plant leaf, or expanding ring;
* animation -- growth (length scaling) or unfurl (a spiral curl that
  flattens as the extent grows).

Scene coordinates are centimeters, x to the right, y upward, origin at the
trunk base.  Leaves are drawn with the blade hanging below the midrib, so a
fully unfurled leaf never rises above the horizontal through its anchor.
Layout is pure: scenes are immutable values.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .encoder import POSITION_MAX, POSITION_MIN, LeafPosition
from .series import MAX_SAMPLES, MIN_SAMPLES, HourSlot


class TrunkForm(enum.Enum):
    STRAIGHT = "straight"
    CURVY = "curvy"


class Anchoring(enum.Enum):
    ONE_SIDED = "one-sided"
    TWO_SIDED = "two-sided"
    ALTERNATED = "alternated"


class Decoration(enum.Enum):
    BAR = "bar"
    BAMBOO = "bamboo"
    LEAF = "leaf"
    RING = "ring"


class Animation(enum.Enum):
    GROWTH = "growth"
    UNFURL = "unfurl"


class UnsupportedStyleError(ValueError):
    pass


@dataclass(frozen=True)
class ChartStyle:
    trunk: TrunkForm
    anchoring: Anchoring
    decoration: Decoration
    animation: Animation

    def __post_init__(self):
        if self.decoration is Decoration.RING and self.anchoring is not Anchoring.TWO_SIDED:
            raise UnsupportedStyleError(
                "ring decorations expand concentrically and require two-sided anchoring"
            )

    def label(self) -> str:
        return "-".join(
            (self.decoration.value, self.anchoring.value, self.trunk.value,
             self.animation.value)
        )


@dataclass(frozen=True)
class ChartDimensions:
    chart_height: float  # cm, first to last hour
    glyph_min_extent: float  # cm at position 0
    glyph_max_extent: float  # cm at position 10

    def __post_init__(self):
        if self.chart_height <= 0:
            raise ValueError("chart_height must be positive")
        if not self.glyph_min_extent < self.glyph_max_extent:
            raise ValueError("glyph_min_extent must be smaller than glyph_max_extent")

    def extent_cm(self, extent: float) -> float:
        return self.glyph_min_extent + (self.glyph_max_extent - self.glyph_min_extent) * extent


# Measured glyph sizes of the four study devices (height, extent at
# position 0, extent at position 10, all in centimeters).
DEVICE_DIMENSIONS = {
    "plantscreen": ChartDimensions(75.5, 4.7, 10.3),
    "plantform": ChartDimensions(69.0, 6.5, 13.7),
    "cairnscreen": ChartDimensions(73.7, 0.0, 25.0),
    "cairnform": ChartDimensions(92.5, 35.0, 62.0),
}
DEFAULT_DIMENSIONS = DEVICE_DIMENSIONS["plantform"]

CURVE_PERIODS = 1.5  # sine periods of a curvy trunk over the chart height
CURVE_AMPLITUDE_RATIO = 0.06
TRUNK_SAMPLES = 96
LEAF_MAX_CURL = 3 * math.pi  # total curl angle when fully furled
LEAF_WIDTH_RATIO = 0.30  # blade width relative to midrib length
LEAF_SAMPLES = 48
RING_SAMPLES = 64
BAR_THICKNESS_RATIO = 0.55  # of the per-hour slot height
RING_THICKNESS_RATIO = 0.45
BAMBOO_LEAFLET_SIZE = 0.9  # cm, static whatever the extent

LEFT = "left"
RIGHT = "right"

Point = tuple[float, float]


@dataclass(frozen=True)
class GlyphPath:
    points: tuple[Point, ...]
    closed: bool = False

    def arc_length(self) -> float:
        pts = self.points + ((self.points[0],) if self.closed else ())
        return sum(math.dist(pts[i - 1], pts[i]) for i in range(1, len(pts)))


@dataclass(frozen=True)
class Anchor:
    hour: HourSlot
    point: Point
    side: str


@dataclass(frozen=True)
class Glyph:
    """One decoration; ``paths[0]`` is the data-carrying outline."""

    anchor_index: int
    decoration: Decoration
    extent: float
    side: str
    paths: tuple[GlyphPath, ...]


@dataclass(frozen=True)
class ChartScene:
    style: ChartStyle
    dims: ChartDimensions
    hours: tuple[HourSlot, ...]
    extents: tuple[float, ...]
    trunk: GlyphPath
    anchors: tuple[Anchor, ...]
    glyphs: tuple[Glyph, ...]
    slot: float  # vertical spacing between anchors, cm


def trunk_x(style: ChartStyle, dims: ChartDimensions, t: float) -> float:
    """Horizontal trunk offset at relative height ``t`` in [0, 1]."""
    if style.trunk is TrunkForm.STRAIGHT:
        return 0.0
    amplitude = CURVE_AMPLITUDE_RATIO * dims.chart_height
    return amplitude * math.sin(2 * math.pi * CURVE_PERIODS * t)


def layout(
    positions: list[LeafPosition],
    hours: list[HourSlot],
    style: ChartStyle,
    dims: ChartDimensions = DEFAULT_DIMENSIONS,
) -> ChartScene:
    """Resolve one chart: anchors evenly spaced bottom-to-top in hour order,
    glyph extents proportional to positions."""
    for p in positions:
        if not POSITION_MIN <= p <= POSITION_MAX:
            raise ValueError(f"position {p} out of range [0, 10]")
    return layout_extents([p / 10 for p in positions], hours, style, dims)


def layout_extents(
    extents: list[float],
    hours: list[HourSlot],
    style: ChartStyle,
    dims: ChartDimensions = DEFAULT_DIMENSIONS,
) -> ChartScene:
    """Continuous-extent variant of :func:`layout` (used for animation
    frames; extents in [0, 1])."""
    if len(extents) != len(hours):
        raise ValueError(
            f"positions and hours differ in length: {len(extents)} != {len(hours)}"
        )
    if not MIN_SAMPLES <= len(hours) <= MAX_SAMPLES:
        raise ValueError(
            f"a chart displays {MIN_SAMPLES}..{MAX_SAMPLES} hours, got {len(hours)}"
        )
    for e in extents:
        if not 0.0 <= e <= 1.0 + 1e-9:
            raise ValueError(f"extent {e} out of range [0, 1]")

    n = len(hours)
    height = dims.chart_height
    slot = height / n
    trunk = GlyphPath(
        tuple(
            (trunk_x(style, dims, k / TRUNK_SAMPLES), height * k / TRUNK_SAMPLES)
            for k in range(TRUNK_SAMPLES + 1)
        )
    )

    anchors = []
    glyphs = []
    for i, (hour, extent) in enumerate(zip(hours, extents)):
        t = (i + 0.5) / n
        point = (trunk_x(style, dims, t), height * t)
        if style.anchoring is Anchoring.ALTERNATED:
            side = LEFT if i % 2 == 0 else RIGHT
        else:
            side = RIGHT
        anchors.append(Anchor(hour, point, side))
        if style.decoration is Decoration.RING:
            glyphs.append(_ring_glyph(i, point, extent, style, dims, slot))
            continue
        sides = (RIGHT, LEFT) if style.anchoring is Anchoring.TWO_SIDED else (side,)
        for glyph_side in sides:
            glyphs.append(_side_glyph(i, point, extent, glyph_side, style, dims, slot))

    return ChartScene(
        style=style,
        dims=dims,
        hours=tuple(hours),
        extents=tuple(extents),
        trunk=trunk,
        anchors=tuple(anchors),
        glyphs=tuple(glyphs),
        slot=slot,
    )


def glyph_extent_measure(scene: ChartScene, glyph: Glyph) -> float:
    """The geometric quantity that encodes the data: outline arc length for
    leaves, reach from the anchor for bars and bamboo, diameter for rings."""
    primary = glyph.paths[0]
    if glyph.decoration is Decoration.LEAF:
        return primary.arc_length()
    if glyph.decoration is Decoration.RING:
        xs = [p[0] for p in primary.points]
        return max(xs) - min(xs)
    ax = scene.anchors[glyph.anchor_index].point[0]
    return max(abs(x - ax) for x, _ in primary.points)


def _side_glyph(index, point, extent, side, style, dims, slot) -> Glyph:
    if style.decoration is Decoration.LEAF:
        paths = _leaf_paths(point, extent, style, dims)
    elif style.decoration is Decoration.BAMBOO:
        paths = _bamboo_paths(point, extent, dims, slot)
    else:
        paths = _bar_paths(point, extent, dims, slot)
    if side == LEFT:
        paths = tuple(_mirror(path, point[0]) for path in paths)
    return Glyph(index, style.decoration, extent, side, paths)


def _mirror(path: GlyphPath, axis_x: float) -> GlyphPath:
    return GlyphPath(tuple((2 * axis_x - x, y) for x, y in path.points), path.closed)


def _bar_paths(point, extent, dims, slot) -> tuple[GlyphPath, ...]:
    ax, ay = point
    length = dims.extent_cm(extent)
    half = BAR_THICKNESS_RATIO * slot / 2
    rect = GlyphPath(
        ((ax, ay - half), (ax + length, ay - half), (ax + length, ay + half), (ax, ay + half)),
        closed=True,
    )
    return (rect,)


def _bamboo_paths(point, extent, dims, slot) -> tuple[GlyphPath, ...]:
    """A growing stick with node ticks and small static leaflets; only the
    stick encodes the value."""
    ax, ay = point
    length = dims.extent_cm(extent)
    half = BAR_THICKNESS_RATIO * slot * 0.35
    stick = GlyphPath(
        ((ax, ay - half), (ax + length, ay - half), (ax + length, ay + half), (ax, ay + half)),
        closed=True,
    )
    paths = [stick]
    tick = half * 0.45
    for u in (1 / 3, 2 / 3):
        x = ax + length * u
        paths.append(GlyphPath(((x, ay - half - tick), (x, ay + half + tick))))
    size = BAMBOO_LEAFLET_SIZE
    for u, direction in ((0.35, 1.0), (0.7, -1.0)):
        x = ax + length * u
        base = ay + direction * half
        paths.append(
            GlyphPath(
                (
                    (x, base),
                    (x + 0.45 * size, base + direction * size),
                    (x - 0.2 * size, base + direction * 0.6 * size),
                ),
                closed=True,
            )
        )
    return tuple(paths)


def _leaf_paths(point, extent, style, dims) -> tuple[GlyphPath, ...]:
    """Midrib plus blade.  The midrib starts horizontal at the anchor and
    curls downward along an Archimedean-style spiral whose total curl angle
    shrinks linearly to zero at full extent; under growth animation there is
    no curl and only the length scales."""
    ax, ay = point
    length = dims.extent_cm(extent)
    if style.animation is Animation.UNFURL:
        curl = LEAF_MAX_CURL * (1.0 - extent)
    else:
        curl = 0.0

    n = LEAF_SAMPLES
    ds = length / n
    midrib = [(ax, ay)]
    x, y = ax, ay
    for k in range(n):
        u_mid = (k + 0.5) / n
        angle = -curl * u_mid * u_mid
        x += ds * math.cos(angle)
        y += ds * math.sin(angle)
        midrib.append((x, y))

    width = LEAF_WIDTH_RATIO * length
    blade_lower = []
    for k, (mx, my) in enumerate(midrib):
        u = k / n
        angle = -curl * u * u
        w = width * math.sin(math.pi * u)
        blade_lower.append((mx + w * math.sin(angle), my - w * math.cos(angle)))
    blade = GlyphPath(tuple(midrib) + tuple(reversed(blade_lower)), closed=True)
    return (GlyphPath(tuple(midrib)), blade)


def _ring_glyph(index, point, extent, style, dims, slot) -> Glyph:
    """An expanding ring, drawn concentric with the trunk so the scene stays
    symmetric about the anchor."""
    ax, ay = point
    rx = dims.extent_cm(extent) / 2
    ry = RING_THICKNESS_RATIO * slot / 2
    pts = tuple(
        (
            ax + rx * math.cos(2 * math.pi * k / RING_SAMPLES),
            ay + ry * math.sin(2 * math.pi * k / RING_SAMPLES),
        )
        for k in range(RING_SAMPLES)
    )
    return Glyph(index, Decoration.RING, extent, RIGHT, (GlyphPath(pts, closed=True),))


def parse_style(spec: str) -> ChartStyle:
    """Parse ``decoration,anchoring,trunk[,animation]``; the animation
    defaults to unfurl for leaves and growth otherwise."""
    parts = [p.strip().lower() for p in spec.split(",")]
    if len(parts) not in (3, 4):
        raise UnsupportedStyleError(
            f"style must be 'decoration,anchoring,trunk[,animation]', got {spec!r}"
        )
    try:
        decoration = Decoration(parts[0])
        anchoring = Anchoring(parts[1])
        trunk = TrunkForm(parts[2])
        if len(parts) == 4:
            animation = Animation(parts[3])
        else:
            animation = Animation.UNFURL if decoration is Decoration.LEAF else Animation.GROWTH
    except ValueError as exc:
        raise UnsupportedStyleError(f"unknown style component in {spec!r}: {exc}") from None
    return ChartStyle(trunk, anchoring, decoration, animation)

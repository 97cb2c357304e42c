"""Quadrilateral geometry for detected text lines.

Covers the per-line preprocessing plan (rotation snapping, crop rectangles,
aspect-preserving splits for the recognizer), exact IoU between convex
quads, and the integer box translation used when boxes are emitted into
prompts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

Point = tuple[float, float]


class GeometryError(ValueError):
    """Degenerate geometry: zero-length edges, collapsed crops, empty input."""


@dataclass(frozen=True)
class AlignedRect:
    """Axis-aligned rectangle in pixel coordinates."""

    x_min: float
    y_min: float
    x_max: float
    y_max: float

    def __post_init__(self) -> None:
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise GeometryError(f"empty rectangle: {self}")

    @property
    def width(self) -> float:
        return self.x_max - self.x_min

    @property
    def height(self) -> float:
        return self.y_max - self.y_min

    @property
    def center(self) -> Point:
        return ((self.x_min + self.x_max) / 2, (self.y_min + self.y_max) / 2)


@dataclass(frozen=True)
class RecognizerSpec:
    """Input geometry of the line recognizer (height x width in pixels)."""

    input_height: int = 32
    input_width: int = 128

    def __post_init__(self) -> None:
        if self.input_height <= 0 or self.input_width <= 0:
            raise ValueError("recognizer input dimensions must be positive")

    @property
    def aspect(self) -> float:
        return self.input_width / self.input_height


def polygon_area(vertices: Sequence[Point]) -> float:
    """Signed shoelace area; positive for counter-clockwise winding."""
    area = 0.0
    n = len(vertices)
    for i in range(n):
        x0, y0 = vertices[i]
        x1, y1 = vertices[(i + 1) % n]
        area += x0 * y1 - x1 * y0
    return area / 2


def quad_bounds(vertices: Sequence[Point]) -> AlignedRect:
    """Axis-aligned bounding rectangle of a polygon."""
    xs = [p[0] for p in vertices]
    ys = [p[1] for p in vertices]
    return AlignedRect(min(xs), min(ys), max(xs), max(ys))


def snap_rotation(vertices: Sequence[Point]) -> float:
    """Angle in degrees that axis-aligns the quad's dominant edge.

    The dominant axis is the direction of the longest edge, mapped to
    (-90, 90]; among equally long edges the one closest to horizontal wins
    (positive angle on an exact tie).  Boxes tilted by at most 45 degrees
    are rotated back to the x-axis, steeper ones to the y-axis, so the
    returned angle always satisfies abs(angle) <= 45.
    """
    n = len(vertices)
    best_angle: float | None = None
    best_len = 0.0
    for i in range(n):
        x0, y0 = vertices[i]
        x1, y1 = vertices[(i + 1) % n]
        dx, dy = x1 - x0, y1 - y0
        length = math.hypot(dx, dy)
        if length < 1e-9:
            continue
        angle = math.degrees(math.atan2(dy, dx))
        if angle <= -90.0:
            angle += 180.0
        elif angle > 90.0:
            angle -= 180.0
        better = length > best_len + 1e-9
        if not better and abs(length - best_len) <= 1e-9 and best_angle is not None:
            better = (abs(angle), -angle) < (abs(best_angle), -best_angle)
        if better or best_angle is None:
            best_len = length
            best_angle = angle
    if best_angle is None:
        raise GeometryError("degenerate quad: all edges have zero length")
    if abs(best_angle) <= 45.0:
        return -best_angle
    return math.copysign(90.0, best_angle) - best_angle


def rotate_point(p: Point, theta_degrees: float) -> Point:
    """Rotate a point about the origin by theta (counter-clockwise)."""
    t = math.radians(theta_degrees)
    c, s = math.cos(t), math.sin(t)
    x, y = p
    return (x * c - y * s, x * s + y * c)


def crop_rect(vertices: Sequence[Point], theta_degrees: float) -> AlignedRect:
    """Bounding rectangle of the quad after rotating it by theta.

    This is the crop window a recognizer would see once the image is
    rotated to axis-align the line.
    """
    rotated = [rotate_point(p, theta_degrees) for p in vertices]
    rect = quad_bounds(rotated)
    if rect.width < 1.0 - 1e-9 or rect.height < 1.0 - 1e-9:
        raise GeometryError(f"crop smaller than one pixel: {rect}")
    return rect


def split_for_recognizer(rect: AlignedRect, spec: RecognizerSpec | None = None) -> list[AlignedRect]:
    """Cut a crop into equal-width parts that keep the recognizer's aspect.

    Returns ceil(width / (height * aspect)) parts tiling the rectangle
    left to right; a single part when the crop is already at or below the
    target aspect ratio.
    """
    if spec is None:
        spec = RecognizerSpec()
    n = max(1, math.ceil(rect.width / (rect.height * spec.aspect) - 1e-12))
    if n == 1:
        return [rect]
    edges = [rect.x_min + rect.width * i / n for i in range(n)]
    edges.append(rect.x_max)
    return [
        AlignedRect(edges[i], rect.y_min, edges[i + 1], rect.y_max) for i in range(n)
    ]


def _clip_left_of(subject: list[Point], a: Point, b: Point) -> list[Point]:
    """Keep the part of ``subject`` on or left of the directed edge a->b."""
    ax, ay = a
    ex, ey = b[0] - ax, b[1] - ay
    out: list[Point] = []
    n = len(subject)
    for i in range(n):
        px, py = subject[i]
        qx, qy = subject[(i + 1) % n]
        p_side = ex * (py - ay) - ey * (px - ax)
        q_side = ex * (qy - ay) - ey * (qx - ax)
        if p_side >= 0.0:
            out.append((px, py))
        if (p_side < 0.0 < q_side) or (q_side < 0.0 < p_side):
            t = p_side / (p_side - q_side)
            out.append((px + t * (qx - px), py + t * (qy - py)))
    return out


def _ccw(vertices: Sequence[Point]) -> list[Point]:
    pts = list(vertices)
    if polygon_area(pts) < 0:
        pts.reverse()
    return pts


def convex_intersection_area(a: Sequence[Point], b: Sequence[Point]) -> float:
    """Area of the intersection of two convex polygons (any winding).

    Sutherland-Hodgman clipping: the subject is cut by each edge of the
    (counter-clockwise) clipper, whose interior lies left of its edges.
    """
    poly = _ccw(a)
    clipper = _ccw(b)
    for i in range(len(clipper)):
        poly = _clip_left_of(poly, clipper[i], clipper[(i + 1) % len(clipper)])
        if len(poly) < 3:
            return 0.0
    return abs(polygon_area(poly))


def iou(a: Sequence[Point], b: Sequence[Point]) -> float:
    """Intersection over union of two convex quads, in [0, 1]."""
    inter = convex_intersection_area(a, b)
    if inter <= 0.0:
        return 0.0
    union = abs(polygon_area(a)) + abs(polygon_area(b)) - inter
    if union <= 0.0:
        return 0.0
    return min(1.0, inter / union)


def round_half_away_from_zero(x: float) -> int:
    if x >= 0:
        return int(math.floor(x + 0.5))
    return int(math.ceil(x - 0.5))


def translate_block_boxes(quads: Iterable[Sequence[Point]]) -> list[AlignedRect]:
    """Reduce quads to integer boxes anchored at the block origin.

    Each quad becomes its axis-aligned bounds, all boxes are shifted so the
    block-wide minimum x and y are 0, and coordinates are rounded half away
    from zero.  Boxes thinner than a pixel after rounding are widened to 1
    so the result stays a valid rectangle.
    """
    bounds = [quad_bounds(q) for q in quads]
    if not bounds:
        raise GeometryError("no boxes to translate")
    off_x = min(r.x_min for r in bounds)
    off_y = min(r.y_min for r in bounds)
    out = []
    for r in bounds:
        x0 = round_half_away_from_zero(r.x_min - off_x)
        y0 = round_half_away_from_zero(r.y_min - off_y)
        x1 = round_half_away_from_zero(r.x_max - off_x)
        y1 = round_half_away_from_zero(r.y_max - off_y)
        out.append(AlignedRect(x0, y0, max(x1, x0 + 1), max(y1, y0 + 1)))
    return out

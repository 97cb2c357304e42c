"""Domain types and the JSON document schema.

A document is a set of detected text lines (quadrilateral box + recognized
text) grouped into blocks.  The same schema serves predictions and ground
truth; in ground-truth files the order of ``line_ids`` inside a block is
the gold reading order and a block's ``text`` is the gold block string.

Schema (UTF-8 JSON)::

    {
      "image_width": int,
      "image_height": int,
      "lines": [
        {"id": int, "vertices": [[x, y], [x, y], [x, y], [x, y]],
         "text": str, "confidence": float?}
      ],
      "blocks": [
        {"line_ids": [int, ...], "text": str?}
      ]
    }

Documents are immutable after parsing and safe to share between workers.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Iterable

from .geometry import polygon_area, quad_bounds

BOX_MARGIN_PX = 5.0


class DocumentError(ValueError):
    """A document failed schema or invariant validation."""

    def __init__(self, message: str, *, source: str = "<memory>"):
        super().__init__(f"{source}: {message}")
        self.source = source
        self.reason = message


class DocumentKind(enum.Enum):
    PREDICTION = "prediction"
    GROUND_TRUTH = "ground_truth"


@dataclass(frozen=True)
class Quad:
    """Convex quadrilateral, counter-clockwise winding, positive area."""

    vertices: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        if len(self.vertices) != 4:
            raise ValueError(f"quad needs 4 vertices, got {len(self.vertices)}")
        for x, y in self.vertices:
            if not (_finite(x) and _finite(y)):
                raise ValueError(f"non-finite vertex ({x}, {y})")
        if polygon_area(self.vertices) <= 0:
            raise ValueError("quad vertices must wind counter-clockwise with area > 0")
        if not _is_convex(self.vertices):
            raise ValueError("quad is not convex")

    @classmethod
    def from_points(cls, points: Iterable[Iterable[float]]) -> "Quad":
        """Build a quad, flipping clockwise input to the canonical winding."""
        pts = tuple((float(x), float(y)) for x, y in points)
        if len(pts) == 4 and polygon_area(pts) < 0:
            pts = (pts[0], pts[3], pts[2], pts[1])
        return cls(pts)


def _finite(v: float) -> bool:
    return isinstance(v, (int, float)) and v == v and abs(v) != float("inf")


def _is_convex(vertices: tuple[tuple[float, float], ...]) -> bool:
    crosses = []
    n = len(vertices)
    for i in range(n):
        ax, ay = vertices[i]
        bx, by = vertices[(i + 1) % n]
        cx, cy = vertices[(i + 2) % n]
        crosses.append((bx - ax) * (cy - by) - (by - ay) * (cx - bx))
    scale = max(abs(c) for c in crosses) or 1.0
    return all(c >= -1e-9 * scale for c in crosses)


@dataclass(frozen=True)
class Line:
    """One detected text line."""

    id: int
    box: Quad
    text: str = ""
    recognizer_confidence: float | None = None

    def __post_init__(self) -> None:
        if any(ord(c) < 32 or ord(c) == 127 for c in self.text):
            raise ValueError(f"line {self.id}: text contains control characters")
        if self.recognizer_confidence is not None and not 0.0 <= self.recognizer_confidence <= 1.0:
            raise ValueError(f"line {self.id}: confidence outside [0, 1]")


@dataclass(frozen=True)
class Block:
    """An ordered group of line ids, with the block text once ordered."""

    line_ids: tuple[int, ...]
    text: str | None = None

    def __post_init__(self) -> None:
        if not self.line_ids:
            raise ValueError("block has no lines")
        if len(set(self.line_ids)) != len(self.line_ids):
            raise ValueError(f"block repeats line ids: {self.line_ids}")


@dataclass(frozen=True)
class Document:
    """Image dimensions plus detected lines and their block grouping."""

    image_width: int
    image_height: int
    lines: tuple[Line, ...] = ()
    blocks: tuple[Block, ...] = ()
    is_ground_truth: bool = False

    def line_by_id(self, line_id: int) -> Line:
        for line in self.lines:
            if line.id == line_id:
                return line
        raise KeyError(f"unknown line id {line_id}")

    def ungrouped_line_ids(self) -> list[int]:
        grouped = {lid for block in self.blocks for lid in block.line_ids}
        return [line.id for line in self.lines if line.id not in grouped]

    def with_blocks(self, blocks: Iterable[Block]) -> "Document":
        return replace(self, blocks=tuple(blocks))


def validate_document(doc: Document, *, source: str = "<memory>", margin: float = BOX_MARGIN_PX) -> None:
    """Check cross-object invariants; raises DocumentError on the first hit."""
    if doc.image_width <= 0 or doc.image_height <= 0:
        raise DocumentError(
            f"image dimensions must be positive, got {doc.image_width}x{doc.image_height}",
            source=source,
        )
    seen_ids: set[int] = set()
    for line in doc.lines:
        if line.id in seen_ids:
            raise DocumentError(f"duplicate line id {line.id}", source=source)
        seen_ids.add(line.id)
        rect = quad_bounds(line.box.vertices)
        if (
            rect.x_min < -margin
            or rect.y_min < -margin
            or rect.x_max > doc.image_width + margin
            or rect.y_max > doc.image_height + margin
        ):
            raise DocumentError(
                f"line {line.id} box leaves the image by more than {margin}px",
                source=source,
            )
    claimed: set[int] = set()
    for i, block in enumerate(doc.blocks):
        for lid in block.line_ids:
            if lid not in seen_ids:
                raise DocumentError(f"block {i}: unknown line id {lid}", source=source)
            if lid in claimed:
                raise DocumentError(f"line {lid} appears in multiple blocks", source=source)
            claimed.add(lid)


def parse_document(
    raw: bytes | str,
    kind: DocumentKind | str = DocumentKind.PREDICTION,
    *,
    source: str = "<memory>",
    margin: float = BOX_MARGIN_PX,
) -> Document:
    """Parse and validate a document from JSON bytes or text.

    Line order inside each block is preserved exactly as given; for
    ground-truth documents that order is the gold reading order.
    """
    if isinstance(kind, str):
        kind = DocumentKind(kind)
    if isinstance(raw, bytes):
        try:
            raw = raw.decode("utf-8")
        except UnicodeDecodeError as e:
            raise DocumentError(f"not valid UTF-8: {e}", source=source) from e
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as e:
        raise DocumentError(f"malformed JSON: {e}", source=source) from e
    if not isinstance(data, dict):
        raise DocumentError("top level must be a JSON object", source=source)

    try:
        width = _expect_int(data, "image_width")
        height = _expect_int(data, "image_height")
        lines = tuple(_parse_line(obj, i, source) for i, obj in enumerate(_expect_list(data, "lines")))
        blocks = tuple(_parse_block(obj, i, source) for i, obj in enumerate(_expect_list(data, "blocks")))
    except DocumentError:
        raise
    except (KeyError, TypeError, ValueError) as e:
        raise DocumentError(str(e), source=source) from e

    doc = Document(
        image_width=width,
        image_height=height,
        lines=lines,
        blocks=blocks,
        is_ground_truth=kind is DocumentKind.GROUND_TRUTH,
    )
    validate_document(doc, source=source, margin=margin)
    return doc


def load_document(
    path: str | Path,
    kind: DocumentKind | str = DocumentKind.PREDICTION,
    *,
    margin: float = BOX_MARGIN_PX,
) -> Document:
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as e:
        raise DocumentError(f"cannot read file: {e}", source=str(path)) from e
    return parse_document(raw, kind, source=str(path), margin=margin)


def serialize_document(doc: Document) -> bytes:
    """Deterministic UTF-8 JSON; parse(serialize(doc)) equals doc."""
    data: dict[str, Any] = {
        "image_width": doc.image_width,
        "image_height": doc.image_height,
        "lines": [
            _strip_nones(
                {
                    "id": line.id,
                    "vertices": [[x, y] for x, y in line.box.vertices],
                    "text": line.text,
                    "confidence": line.recognizer_confidence,
                }
            )
            for line in doc.lines
        ],
        "blocks": [
            _strip_nones({"line_ids": list(block.line_ids), "text": block.text})
            for block in doc.blocks
        ],
    }
    return json.dumps(data, ensure_ascii=False, indent=1).encode("utf-8")


def save_document(doc: Document, path: str | Path) -> None:
    Path(path).write_bytes(serialize_document(doc) + b"\n")


def _strip_nones(obj: dict[str, Any]) -> dict[str, Any]:
    return {k: v for k, v in obj.items() if v is not None}


def _expect_int(data: dict, key: str) -> int:
    v = data[key]
    if not isinstance(v, int) or isinstance(v, bool):
        raise ValueError(f"{key!r} must be an integer, got {v!r}")
    return v


def _expect_list(data: dict, key: str) -> list:
    v = data[key]
    if not isinstance(v, list):
        raise ValueError(f"{key!r} must be a list")
    return v


def _parse_line(obj: Any, index: int, source: str) -> Line:
    if not isinstance(obj, dict):
        raise DocumentError(f"lines[{index}] must be an object", source=source)
    try:
        line_id = _expect_int(obj, "id")
        vertices = obj["vertices"]
        text = obj.get("text", "")
        confidence = obj.get("confidence")
        if not isinstance(text, str):
            raise ValueError(f"line {line_id}: text must be a string")
        if confidence is not None:
            confidence = float(confidence)
        box = Quad.from_points(vertices)
        return Line(id=line_id, box=box, text=text, recognizer_confidence=confidence)
    except (KeyError, TypeError, ValueError) as e:
        raise DocumentError(f"lines[{index}]: {e}", source=source) from e


def _parse_block(obj: Any, index: int, source: str) -> Block:
    if not isinstance(obj, dict):
        raise DocumentError(f"blocks[{index}] must be an object", source=source)
    try:
        line_ids = obj["line_ids"]
        if not isinstance(line_ids, list) or not all(
            isinstance(v, int) and not isinstance(v, bool) for v in line_ids
        ):
            raise ValueError("line_ids must be a list of integers")
        text = obj.get("text")
        if text is not None and not isinstance(text, str):
            raise ValueError("block text must be a string")
        return Block(line_ids=tuple(line_ids), text=text)
    except (KeyError, TypeError, ValueError) as e:
        raise DocumentError(f"blocks[{index}]: {e}", source=source) from e

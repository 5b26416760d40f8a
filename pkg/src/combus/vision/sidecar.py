"""Image sidecar files: the fixture replacement for real detectors.

A sidecar `<image>.meta.json` next to an image file lists the objects and
faces a detector would have found, so the vision components stay
deterministic while keeping the real event contract.
"""

import json
import math
from pathlib import Path

EMBEDDING_DIM = 32
UNIT_TOLERANCE = 1e-6


class SidecarInvalid(Exception):
    pass


def _check_bbox(bbox, dims, what):
    if len(bbox) != 4:
        raise SidecarInvalid(f"{what}: bbox must have 4 coordinates: {bbox}")
    x0, y0, x1, y1 = bbox
    if not (x0 < x1 and y0 < y1):
        raise SidecarInvalid(f"{what}: degenerate bbox {bbox}")
    if dims is not None:
        width, height = dims
        if not (0 <= x0 and x1 <= width and 0 <= y0 and y1 <= height):
            raise SidecarInvalid(f"{what}: bbox {bbox} outside image {dims}")


def validate_sidecar(data: dict, dims=None) -> dict:
    dims = dims or data.get("dims")
    for i, obj in enumerate(data.get("objects", [])):
        if not obj.get("label"):
            raise SidecarInvalid(f"object {i}: label required")
        _check_bbox(obj.get("bbox", []), dims, f"object {i}")
    for i, face in enumerate(data.get("faces", [])):
        _check_bbox(face.get("bbox", []), dims, f"face {i}")
        embedding = face.get("embedding", [])
        if len(embedding) != EMBEDDING_DIM:
            raise SidecarInvalid(
                f"face {i}: embedding dim {len(embedding)} != {EMBEDDING_DIM}")
        norm = math.sqrt(sum(x * x for x in embedding))
        if abs(norm - 1.0) > UNIT_TOLERANCE:
            raise SidecarInvalid(f"face {i}: embedding not unit norm: {norm}")
    return data


def load_sidecar(image_path, dims=None) -> dict:
    """Read and validate the sidecar for an image; no sidecar means no detections."""
    path = Path(f"{image_path}.meta.json")
    if not path.exists():
        return {"objects": [], "faces": []}
    try:
        data = json.loads(path.read_text("utf-8"))
    except json.JSONDecodeError as e:
        raise SidecarInvalid(f"{path}: {e}") from e
    return validate_sidecar(data, dims)

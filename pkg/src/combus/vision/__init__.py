"""Fixture-driven vision components: objects, faces, identification."""

from combus.vision.registry import FaceRegistry, IdentityResult, identify_face, rename_identity
from combus.vision.sidecar import SidecarInvalid, load_sidecar, validate_sidecar
from combus.vision.detect import detect_faces, detect_objects

__all__ = [
    "FaceRegistry", "IdentityResult", "SidecarInvalid", "detect_faces",
    "detect_objects", "identify_face", "load_sidecar", "rename_identity",
    "validate_sidecar",
]

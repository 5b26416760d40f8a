"""Object and face detection over image signals, driven by sidecar data."""

from combus.ekg.capsules import PerceptionCapsule
from combus.emissor.model import Annotation, BoundingBox, Mention

DEFAULT_CERTAINTY = 0.8


def detect_objects(sidecar: dict, signal_id: str, *, source: str, timestamp: int,
                   context_id: str, ids) -> tuple[list, list]:
    """One mention and one perception capsule per sidecar object."""
    mentions = []
    capsules = []
    for obj in sidecar.get("objects", []):
        bbox = obj["bbox"]
        certainty = obj.get("certainty", DEFAULT_CERTAINTY)
        mentions.append(Mention(
            id=ids.new_id(),
            segments=[BoundingBox(signal_id, *bbox)],
            annotations=[Annotation("object", {"label": obj["label"],
                                               "certainty": certainty},
                                    source, timestamp)],
        ))
        capsules.append(PerceptionCapsule(
            label=obj["label"], type="object", certainty=certainty,
            region={"signal_id": signal_id, "bbox": list(bbox)},
            context_id=context_id, timestamp=timestamp, source=source,
        ))
    return mentions, capsules


def detect_faces(sidecar: dict, signal_id: str, *, source: str, timestamp: int,
                 context_id: str, ids) -> tuple[list, list]:
    """One mention per sidecar face, annotated with estimated age and gender."""
    mentions = []
    capsules = []
    for i, face in enumerate(sidecar.get("faces", [])):
        bbox = face["bbox"]
        certainty = face.get("certainty", DEFAULT_CERTAINTY)
        mentions.append(Mention(
            id=ids.new_id(),
            segments=[BoundingBox(signal_id, *bbox)],
            annotations=[Annotation("face", {"age": face.get("age"),
                                             "gender": face.get("gender"),
                                             "certainty": certainty},
                                    source, timestamp)],
        ))
        capsules.append(PerceptionCapsule(
            label=face.get("label", f"face-{i}"), type="person", certainty=certainty,
            region={"signal_id": signal_id, "bbox": list(bbox)},
            context_id=context_id, timestamp=timestamp, source=source,
        ))
    return mentions, capsules

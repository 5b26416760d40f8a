"""Vision components: sidecar validation, detection, face identification."""

import json
import math

import pytest

from combus.ekg.graph import EpisodicKnowledgeGraph
from combus.ids import IdGenerator
from combus.vision import (
    FaceRegistry,
    SidecarInvalid,
    detect_faces,
    detect_objects,
    identify_face,
    load_sidecar,
    rename_identity,
    validate_sidecar,
)

DIMS = [640, 480]


def unit(axis=0, value=1.0):
    vec = [0.0] * 32
    vec[axis] = value
    rest = 1.0 - value * value
    if rest > 1e-12:
        vec[(axis + 1) % 32] = math.sqrt(rest)
    return vec


def make_sidecar(objects=(), faces=()):
    return validate_sidecar({"dims": DIMS, "objects": list(objects),
                             "faces": list(faces)})


def detection_kwargs():
    return dict(source="object-recognition", timestamp=1_700_000_000_000,
                context_id="leolaniContext:context_s1", ids=IdGenerator(deterministic=True))


def test_objects_chair_and_table():
    sidecar = make_sidecar(objects=[{"label": "chair", "bbox": [0, 0, 100, 100]},
                                    {"label": "table", "bbox": [200, 50, 400, 300]}])
    mentions, capsules = detect_objects(sidecar, "img1", **detection_kwargs())
    assert len(mentions) == 2 and len(capsules) == 2
    assert [c.label for c in capsules] == ["chair", "table"]
    assert all(c.certainty == 0.8 for c in capsules)
    for mention, capsule in zip(mentions, capsules):
        [segment] = mention.segments
        assert segment.signal_id == "img1"
        assert capsule.region["signal_id"] == "img1"
        assert capsule.region["bbox"] == [segment.x0, segment.y0, segment.x1, segment.y1]


def test_objects_certainty_override():
    sidecar = make_sidecar(objects=[{"label": "chair", "bbox": [0, 0, 10, 10],
                                     "certainty": 0.6}])
    _, [capsule] = detect_objects(sidecar, "img1", **detection_kwargs())
    assert capsule.certainty == 0.6


def test_empty_sidecar_no_detections():
    mentions, capsules = detect_objects(make_sidecar(), "img1", **detection_kwargs())
    assert mentions == [] and capsules == []


def test_bbox_outside_image_rejected():
    with pytest.raises(SidecarInvalid):
        make_sidecar(objects=[{"label": "chair", "bbox": [0, 0, 700, 100]}])


def test_degenerate_bbox_rejected():
    with pytest.raises(SidecarInvalid):
        make_sidecar(objects=[{"label": "chair", "bbox": [10, 10, 10, 40]}])


def test_bad_embedding_rejected():
    with pytest.raises(SidecarInvalid):
        make_sidecar(faces=[{"bbox": [0, 0, 10, 10], "embedding": [1.0] * 32}])
    with pytest.raises(SidecarInvalid):
        make_sidecar(faces=[{"bbox": [0, 0, 10, 10], "embedding": [1.0] * 8}])


def test_face_mention_carries_age_and_gender():
    sidecar = make_sidecar(faces=[{"bbox": [50, 50, 150, 150], "age": 34,
                                   "gender": "F", "embedding": unit(0)}])
    [mention], [capsule] = detect_faces(sidecar, "img1", **detection_kwargs())
    [annotation] = mention.annotations
    assert annotation.type == "face"
    assert annotation.value["age"] == 34
    assert annotation.value["gender"] == "F"
    assert capsule.type == "person"


def test_two_faces_distinct_bboxes():
    sidecar = make_sidecar(faces=[
        {"bbox": [0, 0, 100, 100], "age": 34, "gender": "F", "embedding": unit(0)},
        {"bbox": [200, 0, 300, 100], "age": 60, "gender": "M", "embedding": unit(1)},
    ])
    mentions, _ = detect_faces(sidecar, "img1", **detection_kwargs())
    boxes = {(m.segments[0].x0, m.segments[0].y0) for m in mentions}
    assert len(boxes) == 2


def test_load_sidecar_missing_file(tmp_path):
    assert load_sidecar(tmp_path / "nothing.png") == {"objects": [], "faces": []}


def test_load_sidecar_roundtrip(tmp_path):
    image = tmp_path / "cam.png"
    sidecar = {"dims": DIMS, "objects": [{"label": "cup", "bbox": [1, 2, 30, 40]}],
               "faces": []}
    (tmp_path / "cam.png.meta.json").write_text(json.dumps(sidecar))
    assert load_sidecar(image)["objects"][0]["label"] == "cup"


def test_identify_registered_face():
    registry = FaceRegistry.load()
    result = identify_face({"embedding": unit(0)}, registry)
    assert (result.label, result.iri, result.new) == ("Carl", "leolaniWorld:carl", False)
    assert result.score == pytest.approx(1.0)


def test_identify_threshold_is_closed():
    registry = FaceRegistry.load()
    exactly = [0.0] * 32
    exactly[0] = 0.85
    exactly[2] = math.sqrt(1.0 - 0.85 * 0.85)
    result = identify_face({"embedding": exactly}, registry)
    assert result.label == "Carl" and not result.new


def test_identify_cosine_09():
    registry = FaceRegistry.load()
    close = [0.0] * 32
    close[0] = 0.9
    close[2] = math.sqrt(1.0 - 0.81)
    result = identify_face({"embedding": close}, registry)
    assert result.label == "Carl" and not result.new


def test_identify_unknown_mints_new_identity():
    registry = FaceRegistry.load()
    ekg = EpisodicKnowledgeGraph()
    ids = IdGenerator(deterministic=True)
    face = {"embedding": unit(7), "age": 34, "gender": "F"}
    result = identify_face(face, registry, ekg=ekg, ids=ids)
    assert result.new
    assert result.label in registry.faces
    ages = ekg.store.match(s=result.iri, p="n2mu:age")
    genders = ekg.store.match(s=result.iri, p="n2mu:gender")
    assert [q.o.value for q in ages] == ["34"]
    assert [q.o.value for q in genders] == ["F"]
    # the same face seen again is now known
    again = identify_face(face, registry, ekg=ekg, ids=ids)
    assert not again.new and again.iri == result.iri


def test_rename_identity_rebinds_label():
    registry = FaceRegistry.load()
    ekg = EpisodicKnowledgeGraph()
    result = identify_face({"embedding": unit(5)}, registry, ekg=ekg,
                           ids=IdGenerator(deterministic=True))
    rename_identity(result.iri, "Selene", ekg, registry, old_label=result.label)
    labels = [q.o.value for q in ekg.store.match(s=result.iri, p="rdfs:label")]
    assert "Selene" in labels
    assert "Selene" in registry.faces and result.label not in registry.faces

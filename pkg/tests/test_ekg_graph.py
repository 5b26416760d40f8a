import random

import pytest

from combus.ekg import (
    ClaimCapsule,
    EpisodicKnowledgeGraph,
    Literal,
    MalformedCapsule,
    PerceptionCapsule,
    Perspective,
    UnknownContext,
)
from combus.ekg.capsules import TripleTerm
from combus.ekg.graph import (
    ATTRIBUTED_TO,
    ATTRIBUTION_FOR,
    DENOTED_BY,
    HAS_DETECTION,
    INSTANCE_GRAPH,
    PERSPECTIVE_PREDICATES,
)
from tests.thought_oracle import ClaimRecord, oracle_thoughts


def claim(ekg_ctx, subject, pred, obj, *, author=None, polarity=1, certainty=0.9,
          turn=0, utterance=None, stype="person", otype="location", ts=1000):
    author = author or subject
    utterance = utterance or f"{subject} {pred} {obj}"
    return ClaimCapsule(
        chat_id="1",
        turn_id=turn,
        author=TripleTerm(author, "person"),
        utterance=utterance,
        utterance_type="STATEMENT",
        position=(0, len(utterance)),
        subject=TripleTerm(subject, stype),
        predicate=TripleTerm(pred),
        object=TripleTerm(obj, otype),
        perspective=Perspective(certainty=certainty, polarity=polarity),
        context_id=ekg_ctx,
        timestamp=ts,
    )


@pytest.fixture
def ekg():
    return EpisodicKnowledgeGraph()


@pytest.fixture
def ctx(ekg):
    return ekg.init_context("scenario_1", 1000, None)


class TestContext:
    def test_init_context_time_only(self, ekg):
        ctx = ekg.init_context("s1", 1234, None)
        quads = ekg.store.match(s=ctx)
        assert {q.p for q in quads} == {"rdf:type", "sem:hasTime"}

    def test_two_scenarios_distinct_contexts(self, ekg):
        assert ekg.init_context("s1", 1, None) != ekg.init_context("s2", 1, None)

    def test_place_recorded_when_known(self, ekg):
        ctx = ekg.init_context("s1", 1, "office")
        assert any(q.p == "sem:hasPlace" for q in ekg.store.match(s=ctx))


class TestAssertClaim:
    def test_carl_from_amsterdam(self, ekg, ctx):
        result = ekg.assert_claim(claim(ctx, "Carl", "be-from", "Amsterdam",
                                        utterance="I am from Amsterdam"))
        g = result["claim_graph"]
        assert ekg.store.match(g=g), "claim named graph holds the triple"
        [attributed] = ekg.store.match(s=g, p=ATTRIBUTED_TO)
        assert attributed.o == "leolaniWorld:carl"
        [attr] = [q.s for q in ekg.store.match(p=ATTRIBUTION_FOR, o=g)]
        values = {p: ekg.store.match(s=attr, p=pred)
                  for p, pred in PERSPECTIVE_PREDICATES.items()}
        assert all(len(v) == 1 for v in values.values()), "four perspective values"
        assert any(q.p == DENOTED_BY for q in ekg.store.match(s=g))

    def test_question_capsule_rejected(self, ekg, ctx):
        c = ClaimCapsule(
            chat_id="1", turn_id=0, author=TripleTerm("Carl", "person"),
            utterance="Where do I live?", utterance_type="QUESTION", position=(0, 5),
            subject=TripleTerm("Carl", "person"), predicate=TripleTerm("live-in"),
            object=None, perspective=Perspective(), context_id=ctx, timestamp=0,
        )
        with pytest.raises(MalformedCapsule):
            ekg.assert_claim(c)

    def test_two_unbound_slots_rejected(self, ctx):
        with pytest.raises(MalformedCapsule):
            ClaimCapsule(
                chat_id="1", turn_id=0, author=TripleTerm("Carl", "person"),
                utterance="what?", utterance_type="QUESTION", position=(0, 2),
                subject=TripleTerm("Carl", "person"), predicate=None,
                object=None, perspective=Perspective(), context_id=ctx, timestamp=0,
            )

    def test_unknown_context(self, ekg):
        with pytest.raises(UnknownContext):
            ekg.assert_claim(claim("leolaniContext:context_ghost", "Carl", "like", "pizza"))

    def test_idempotent_same_graph_no_novelty(self, ekg, ctx):
        first = ekg.assert_claim(claim(ctx, "Carl", "be-from", "Amsterdam"))
        again = ekg.assert_claim(claim(ctx, "Carl", "be-from", "Amsterdam"))
        assert again["claim_graph"] == first["claim_graph"]
        assert any(t.kind == "novelty" for t in first["thoughts"])
        assert not any(t.kind == "novelty" for t in again["thoughts"])

    def test_cardinality_conflict(self, ekg, ctx):
        ekg.assert_claim(claim(ctx, "Carl", "live-in", "Amsterdam"))
        result = ekg.assert_claim(claim(ctx, "Carl", "live-in", "Utrecht", turn=1))
        conflicts = [t for t in result["thoughts"] if t.kind == "conflict"]
        assert len(conflicts) == 1
        assert conflicts[0].get("conflict") == "cardinality"
        assert conflicts[0].get("objects") == ("leolaniWorld:amsterdam", "leolaniWorld:utrecht")

    def test_polarity_conflict(self, ekg, ctx):
        ekg.assert_claim(claim(ctx, "Carl", "be-from", "Amsterdam", polarity=1))
        result = ekg.assert_claim(claim(ctx, "Carl", "be-from", "Amsterdam",
                                        polarity=-1, turn=1))
        kinds = {(t.kind, t.get("conflict")) for t in result["thoughts"]}
        assert ("conflict", "polarity") in kinds

    def test_overlap_shared_object(self, ekg, ctx):
        ekg.assert_claim(claim(ctx, "Carl", "like", "pizza", otype="object"))
        result = ekg.assert_claim(claim(ctx, "Carla", "like", "pizza",
                                        otype="object", turn=1))
        overlaps = [t for t in result["thoughts"] if t.kind == "overlap"
                    and t.get("shared")[0] == "po"]
        assert overlaps and overlaps[0].get("instances") == (
            "leolaniWorld:carl", "leolaniWorld:carla")

    def test_trust_thought_on_low_certainty(self, ekg, ctx):
        result = ekg.assert_claim(claim(ctx, "Carl", "like", "pizza",
                                        otype="object", certainty=0.3))
        trusts = [t for t in result["thoughts"] if t.kind == "trust"]
        assert trusts and trusts[0].get("certainty") == 0.3

    def test_first_claim_novelty(self, ekg, ctx):
        result = ekg.assert_claim(claim(ctx, "Carl", "be-from", "Amsterdam"))
        novelties = {t.get("iri") for t in result["thoughts"] if t.kind == "novelty"}
        assert novelties == {"leolaniWorld:carl", "leolaniWorld:amsterdam"}

    def test_query_after_claim(self, ekg, ctx):
        ekg.assert_claim(claim(ctx, "Carl", "live-in", "Amsterdam"))
        result = ekg.query([("?s", "n2mu:live-in", "leolaniWorld:amsterdam")])
        assert result == [{"?s": "leolaniWorld:carl"}]


class TestPerception:
    def capsule(self, ctx, label, type_="object", certainty=0.8, signal="img1", ts=5):
        return PerceptionCapsule(
            label=label, type=type_, certainty=certainty,
            region={"signal_id": signal, "bbox": [0, 0, 10, 10]},
            context_id=ctx, timestamp=ts, source="object-recognition",
        )

    def test_chair_detection_attributed_to_sensor(self, ekg, ctx):
        g = ekg.assert_perception(self.capsule(ctx, "chair"))
        [attributed] = ekg.store.match(s=g, p=ATTRIBUTED_TO)
        labels = ekg.store.match(s=attributed.o, p="rdfs:label")
        assert labels[0].o == Literal("object-recognition")
        # attribution restricted to certainty only
        [attr] = [q.s for q in ekg.store.match(p=ATTRIBUTION_FOR, o=g)]
        perspective_quads = [q for q in ekg.store.match(s=attr)
                             if q.p in PERSPECTIVE_PREDICATES.values()]
        assert [q.p for q in perspective_quads] == [PERSPECTIVE_PREDICATES["certainty"]]

    def test_person_detection_typed_person(self, ekg, ctx):
        ekg.assert_perception(self.capsule(ctx, "Carl", type_="person"))
        assert ekg.store.match(s="leolaniWorld:carl", p="rdf:type", o="n2mu:person",
                               g=INSTANCE_GRAPH)

    def test_five_detections_one_visual(self, ekg, ctx):
        for i, label in enumerate(["chair", "table", "cup", "plant", "book"]):
            ekg.assert_perception(self.capsule(ctx, label, signal="img7", ts=i))
        visuals = {q.s for q in ekg.store.match(p=HAS_DETECTION)}
        assert visuals == {"leolaniTalk:visual_img7"}
        assert len(ekg.store.match(s="leolaniTalk:visual_img7", p=HAS_DETECTION)) == 5


class TestDeleteContext:
    def test_single_context_store_emptied(self, ekg, ctx):
        ekg.assert_claim(claim(ctx, "Carl", "be-from", "Amsterdam"))
        ekg.assert_perception(PerceptionCapsule(
            label="chair", type="object", certainty=0.8,
            region={"signal_id": "img1"}, context_id=ctx, timestamp=1,
            source="object-recognition"))
        removed = ekg.delete_context(ctx)
        assert removed > 0
        assert len(ekg.store) == 0

    def test_shared_instance_survives(self, ekg):
        ctx1 = ekg.init_context("s1", 1, None)
        ctx2 = ekg.init_context("s2", 2, None)
        ekg.assert_claim(claim(ctx1, "Carl", "be-from", "Amsterdam"))
        ekg.assert_claim(ClaimCapsule(
            chat_id="2", turn_id=0, author=TripleTerm("Carl", "person"),
            utterance="I like pizza", utterance_type="STATEMENT", position=(0, 12),
            subject=TripleTerm("Carl", "person"), predicate=TripleTerm("like"),
            object=TripleTerm("pizza", "object"), perspective=Perspective(),
            context_id=ctx2, timestamp=3,
        ))
        ekg.delete_context(ctx1)
        # Carl remains, the deleted context's claim is gone
        assert ekg.store.match(s="leolaniWorld:carl", p="rdf:type", g=INSTANCE_GRAPH)
        assert not ekg.store.match(s="leolaniWorld:carl", p="n2mu:be-from")
        assert ekg.store.match(s="leolaniWorld:carl", p="n2mu:like")
        # no dangling: every remaining quad's graph and subject still exist
        graphs = ekg.store.graphs()
        assert "leolaniWorld:claim_carl_be-from_amsterdam" not in graphs

    def test_delete_twice_returns_zero(self, ekg, ctx):
        ekg.assert_claim(claim(ctx, "Carl", "be-from", "Amsterdam"))
        assert ekg.delete_context(ctx) > 0
        assert ekg.delete_context(ctx) == 0

    def test_unknown_context_raises(self, ekg):
        with pytest.raises(UnknownContext):
            ekg.delete_context("leolaniContext:context_never")


ENTITIES = [
    ("carl", "person"), ("carla", "person"), ("piek", "person"),
    ("selene", "person"), ("thomas", "person"),
    ("amsterdam", "location"), ("utrecht", "location"),
    ("pizza", "object"), ("sushi", "object"),
]
PREDICATES = ["live-in", "be-from", "like", "have"]


def random_claim_records(rng, max_claims=30):
    subjects = [e for e in ENTITIES if e[1] == "person"][:5]
    records = []
    for i in range(rng.randrange(1, max_claims + 1)):
        s, stype = rng.choice(subjects)
        p = rng.choice(PREDICATES)
        o, otype = rng.choice([e for e in ENTITIES if e[0] != s])
        records.append(ClaimRecord(
            s=f"leolaniWorld:{s}", p=p, o=f"leolaniWorld:{o}",
            stype=stype, otype=otype,
            polarity=rng.choice([1, 1, 1, -1]),
            certainty=rng.choice([0.9, 0.9, 0.5, 0.3]),
            ts=1000 + i,
        ))
    return records


def run_equivalence(seed_count, seed_base=0):
    for seed in range(seed_base, seed_base + seed_count):
        rng = random.Random(seed)
        records = random_claim_records(rng)
        ekg = EpisodicKnowledgeGraph()
        ctx = ekg.init_context(f"seq{seed}", 0, None)
        for i, r in enumerate(records):
            capsule = ClaimCapsule(
                chat_id="1", turn_id=i, author=TripleTerm("tester", "person"),
                utterance=f"{r.s} {r.p} {r.o}", utterance_type="STATEMENT",
                position=(0, 5),
                subject=TripleTerm(r.s.split(":")[1], r.stype),
                predicate=TripleTerm(r.p),
                object=TripleTerm(r.o.split(":")[1], r.otype),
                perspective=Perspective(certainty=r.certainty, polarity=r.polarity),
                context_id=ctx, timestamp=r.ts,
            )
            got = ekg.assert_claim(capsule)["thoughts"]
            want = oracle_thoughts(records, i, ekg.ontology)
            assert got == want, (
                f"seed {seed} claim {i}: {[t.to_dict() for t in got]} != "
                f"{[t.to_dict() for t in want]}"
            )


def test_thought_equivalence_small():
    run_equivalence(20)

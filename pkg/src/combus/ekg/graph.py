"""Episodic knowledge graph: contexts, attributed claims, perceptions, thoughts.

Conversation claims live in named claim graphs attributed to their speaker
with a four-value perspective (certainty, polarity, sentiment, emotion);
perception claims are attributed to sensors with certainty only. Contexts
tie everything to one recorded scenario and can be deleted wholesale.
"""

import json
from importlib import resources

from combus.ekg.capsules import ClaimCapsule, MalformedCapsule, PerceptionCapsule, Perspective
from combus.ekg.iri import Literal, PrefixTable, XSD_DOUBLE, XSD_INTEGER, XSD_LONG, sanitize_label
from combus.ekg.store import Quad, QuadStore
from combus.ekg.thoughts import Thought, order_thoughts

INSTANCE_GRAPH = "leolaniWorld:Instances"
PERSPECTIVE_GRAPH = "leolaniTalk:Perspectives"
CONTEXT_GRAPH = "leolaniContext:Contexts"
SYSTEM_GRAPHS = {INSTANCE_GRAPH, PERSPECTIVE_GRAPH, CONTEXT_GRAPH}

RDF_TYPE = "rdf:type"
RDFS_LABEL = "rdfs:label"
HAS_EVENT = "sem:hasEvent"
HAS_SUBEVENT = "sem:hasSubEvent"
HAS_TIME = "sem:hasTime"
HAS_PLACE = "sem:hasPlace"
ATTRIBUTED_TO = "grasp:wasAttributedTo"
DENOTED_BY = "gaf:denotedBy"
HAS_ATTRIBUTION = "grasp:hasAttribution"
ATTRIBUTION_FOR = "grasp:isAttributionFor"
HAS_DETECTION = "grasp:hasDetection"
PERCEIVED_IN = "eps:perceivedIn"

PERSPECTIVE_PREDICATES = {
    "certainty": "grasp:hasCertaintyValue",
    "polarity": "grasp:hasPolarityValue",
    "sentiment": "grasp:hasSentimentValue",
    "emotion": "grasp:hasEmotionValue",
}

# predicates followed when collecting everything owned by a context
TRAVERSAL_PREDICATES = (HAS_EVENT, HAS_SUBEVENT, HAS_ATTRIBUTION, ATTRIBUTION_FOR, HAS_DETECTION)


class UnknownContext(Exception):
    pass


class Ontology:
    def __init__(self, data: dict | None = None):
        if data is None:
            with resources.files("combus.data.config").joinpath("ontology.json").open() as f:
                data = json.load(f)
        self.cardinality_one = set(data.get("cardinality_one", []))
        self.expected_predicates = {
            t: list(preds) for t, preds in data.get("expected_predicates", {}).items()
        }
        self.emotions = list(data.get("emotions", []))
        self.trust_threshold = data.get("trust_certainty_threshold", 0.5)

    @classmethod
    def load(cls, path) -> "Ontology":
        with open(path) as f:
            return cls(json.load(f))


class EpisodicKnowledgeGraph:
    def __init__(self, ontology: Ontology | None = None, prefixes: PrefixTable | None = None):
        self.ontology = ontology or Ontology()
        self.store = QuadStore(prefixes)
        self._contexts: set[str] = set()
        self._deleted_contexts: set[str] = set()
        self._minted: dict[str, tuple[str, str]] = {}  # label -> (iri, type)
        # claim graph -> (s_iri, p_iri, o_iri); predicates keep their bare label too
        self._claims: dict[str, tuple] = {}
        self._first_seen: dict[str, tuple] = {}  # iri -> (claim_graph, timestamp)

    # -- contexts --------------------------------------------------------
    def init_context(self, scenario_id: str, time_ms: int, place: str | None = None) -> str:
        ctx = f"leolaniContext:context_{sanitize_label(scenario_id)}"
        self.store.add(ctx, RDF_TYPE, "eps:Context", CONTEXT_GRAPH)
        self.store.add(ctx, HAS_TIME, Literal(str(time_ms), XSD_LONG), CONTEXT_GRAPH)
        if place and place != "unknown":
            self.store.add(ctx, HAS_PLACE, Literal(place), CONTEXT_GRAPH)
        self._contexts.add(ctx)
        self._deleted_contexts.discard(ctx)
        return ctx

    def _require_context(self, context_id: str) -> str:
        if context_id not in self._contexts:
            raise UnknownContext(context_id)
        return context_id

    # -- instance minting ------------------------------------------------
    def mint_instance(self, label: str, entity_type: str) -> str:
        """leolaniWorld:<sanitized-label>, disambiguated only on a type clash."""
        clean = sanitize_label(label)
        key = clean
        suffix = 0
        while key in self._minted and self._minted[key][1] != entity_type:
            suffix += 1
            key = f"{clean}_{suffix:04x}"
        if key not in self._minted:
            self._minted[key] = (f"leolaniWorld:{key}", entity_type)
        return self._minted[key][0]

    def find_instances_by_label(self, label: str) -> list:
        """All (iri, type) minted for a label, case-insensitive exact match."""
        clean = sanitize_label(label)
        return [
            (iri, etype) for key, (iri, etype) in sorted(self._minted.items())
            if key == clean or key.startswith(clean + "_")
        ]

    def _add_instance(self, term) -> str:
        iri = term.iri or self.mint_instance(term.label, term.type or "thing")
        self.store.add(iri, RDF_TYPE, f"n2mu:{sanitize_label(term.type or 'thing')}",
                       INSTANCE_GRAPH)
        self.store.add(iri, RDFS_LABEL, Literal(term.label), INSTANCE_GRAPH)
        return iri

    # -- claims ----------------------------------------------------------
    def assert_claim(self, capsule: ClaimCapsule) -> dict:
        if capsule.utterance_type != "STATEMENT":
            raise MalformedCapsule("assert_claim requires a STATEMENT capsule")
        ctx = self._require_context(capsule.context_id)

        subject_iri = self._add_instance(capsule.subject)
        object_iri = self._add_instance(capsule.object)
        predicate_label = sanitize_label(capsule.predicate.label)
        predicate_iri = f"n2mu:{predicate_label}"

        novel = [iri for iri in dict.fromkeys((subject_iri, object_iri))
                 if iri not in self._first_seen]

        claim_graph = self._claim_graph_name(subject_iri, predicate_label, object_iri)
        self.store.add(subject_iri, predicate_iri, object_iri, INSTANCE_GRAPH)
        self.store.add(subject_iri, predicate_iri, object_iri, claim_graph)
        self._claims[claim_graph] = (subject_iri, predicate_iri, object_iri)
        for iri in novel:
            self._first_seen[iri] = (claim_graph, capsule.timestamp)

        author_iri = self._add_instance(capsule.author)
        self.store.add(claim_graph, ATTRIBUTED_TO, author_iri, PERSPECTIVE_GRAPH)

        chat, utterance = self._record_utterance(ctx, capsule)
        start, stop = capsule.position
        mention = f"{utterance}#{start}-{stop}"
        self.store.add(claim_graph, DENOTED_BY, mention, PERSPECTIVE_GRAPH)

        attribution = f"leolaniTalk:attribution_{claim_graph.split(':', 1)[1]}" \
                      f"_{sanitize_label(capsule.chat_id)}_{capsule.turn_id}"
        self.store.add(utterance, HAS_ATTRIBUTION, attribution, PERSPECTIVE_GRAPH)
        self.store.add(attribution, RDF_TYPE, "grasp:Attribution", PERSPECTIVE_GRAPH)
        self.store.add(attribution, ATTRIBUTION_FOR, claim_graph, PERSPECTIVE_GRAPH)
        p = capsule.perspective
        self._add_perspective_value(attribution, "certainty", p.certainty)
        self._add_perspective_value(attribution, "polarity", p.polarity)
        self._add_perspective_value(attribution, "sentiment", p.sentiment)
        self._add_perspective_value(attribution, "emotion", p.emotion or "neutral")

        thoughts = self._thoughts_for(claim_graph, novel, p.certainty, capsule.timestamp)
        return {"claim_graph": claim_graph, "thoughts": thoughts}

    def record_question(self, capsule: ClaimCapsule) -> str:
        """Register a QUESTION utterance under its chat; no claim is created."""
        if capsule.utterance_type != "QUESTION":
            raise MalformedCapsule("record_question requires a QUESTION capsule")
        ctx = self._require_context(capsule.context_id)
        _, utterance = self._record_utterance(ctx, capsule)
        return utterance

    def _record_utterance(self, ctx: str, capsule: ClaimCapsule) -> tuple:
        chat = f"leolaniTalk:chat{sanitize_label(capsule.chat_id)}"
        self.store.add(chat, RDF_TYPE, "grasp:Chat", PERSPECTIVE_GRAPH)
        self.store.add(ctx, HAS_EVENT, chat, PERSPECTIVE_GRAPH)
        utterance = f"{chat}_utterance{capsule.turn_id}"
        self.store.add(chat, HAS_SUBEVENT, utterance, PERSPECTIVE_GRAPH)
        self.store.add(utterance, RDF_TYPE, "grasp:Utterance", PERSPECTIVE_GRAPH)
        self.store.add(utterance, HAS_TIME, Literal(str(capsule.timestamp), XSD_LONG),
                       PERSPECTIVE_GRAPH)
        self.store.add(utterance, RDFS_LABEL, Literal(capsule.utterance), PERSPECTIVE_GRAPH)
        return chat, utterance

    def _add_perspective_value(self, attribution: str, which: str, value) -> None:
        if which == "polarity":
            literal = Literal(str(int(value)), XSD_INTEGER)
        elif which in ("certainty", "sentiment"):
            literal = Literal(repr(float(value)), XSD_DOUBLE)
        else:
            literal = Literal(str(value))
        self.store.add(attribution, PERSPECTIVE_PREDICATES[which], literal, PERSPECTIVE_GRAPH)

    def _claim_graph_name(self, subject_iri, predicate_label, object_iri) -> str:
        s_local = subject_iri.split(":", 1)[1]
        o_local = object_iri.split(":", 1)[1]
        return f"leolaniWorld:claim_{s_local}_{predicate_label}_{o_local}"

    # -- perceptions -----------------------------------------------------
    def assert_perception(self, capsule: PerceptionCapsule) -> str:
        ctx = self._require_context(capsule.context_id)
        detection_iri = self._add_instance_for_perception(capsule)

        signal_id = sanitize_label(str(capsule.region.get("signal_id", "sensor")))
        visual = f"leolaniTalk:visual_{signal_id}"
        self.store.add(visual, RDF_TYPE, "grasp:Visual", PERSPECTIVE_GRAPH)
        self.store.add(ctx, HAS_EVENT, visual, PERSPECTIVE_GRAPH)
        index = len(self.store.match(s=visual, p=HAS_DETECTION))
        detection_node = f"{visual}#d{index}"
        self.store.add(visual, HAS_DETECTION, detection_node, PERSPECTIVE_GRAPH)
        self.store.add(detection_node, RDF_TYPE, "grasp:Detection", PERSPECTIVE_GRAPH)
        self.store.add(detection_node, RDF_TYPE, "grasp:Experience", PERSPECTIVE_GRAPH)
        self.store.add(detection_node, HAS_TIME, Literal(str(capsule.timestamp), XSD_LONG),
                       PERSPECTIVE_GRAPH)

        ctx_local = ctx.split(":", 1)[1]
        claim_graph = f"leolaniWorld:claim_{detection_iri.split(':', 1)[1]}" \
                      f"_perceived-in_{ctx_local}"
        self.store.add(detection_iri, PERCEIVED_IN, ctx, claim_graph)
        self._claims.setdefault(claim_graph, (detection_iri, PERCEIVED_IN, ctx))

        sensor_iri = self.mint_instance(capsule.source, "sensor")
        self.store.add(sensor_iri, RDFS_LABEL, Literal(capsule.source), INSTANCE_GRAPH)
        self.store.add(sensor_iri, RDF_TYPE, "n2mu:sensor", INSTANCE_GRAPH)
        self.store.add(claim_graph, ATTRIBUTED_TO, sensor_iri, PERSPECTIVE_GRAPH)
        self.store.add(claim_graph, DENOTED_BY, detection_node, PERSPECTIVE_GRAPH)

        attribution = f"leolaniTalk:attribution_{claim_graph.split(':', 1)[1]}_{signal_id}_d{index}"
        self.store.add(detection_node, HAS_ATTRIBUTION, attribution, PERSPECTIVE_GRAPH)
        self.store.add(attribution, RDF_TYPE, "grasp:Attribution", PERSPECTIVE_GRAPH)
        self.store.add(attribution, ATTRIBUTION_FOR, claim_graph, PERSPECTIVE_GRAPH)
        self._add_perspective_value(attribution, "certainty", capsule.certainty)

        if detection_iri not in self._first_seen:
            self._first_seen[detection_iri] = (claim_graph, capsule.timestamp)
        return claim_graph

    def _add_instance_for_perception(self, capsule: PerceptionCapsule) -> str:
        iri = capsule.iri or self.mint_instance(capsule.label, capsule.type)
        self.store.add(iri, RDF_TYPE, f"n2mu:{capsule.type}", INSTANCE_GRAPH)
        self.store.add(iri, RDFS_LABEL, Literal(capsule.label), INSTANCE_GRAPH)
        return iri

    # -- queries ---------------------------------------------------------
    def query(self, patterns) -> list:
        return self.store.query(patterns)

    def claim_info(self, claim_graph: str) -> dict | None:
        """Source label, timestamp, and perspective for one claim graph."""
        if claim_graph not in self._claims:
            return None
        attributed = self.store.match(s=claim_graph, p=ATTRIBUTED_TO)
        source_label = None
        if attributed:
            source_iri = sorted(q.o for q in attributed)[0]
            labels = self.store.match(s=source_iri, p=RDFS_LABEL, g=INSTANCE_GRAPH)
            source_label = labels[0].o.value if labels else source_iri.split(":", 1)[1]
        info = {"source": source_label, "timestamp": None, "certainty": None,
                "polarity": None, "sentiment": None, "emotion": None}
        attrs = sorted(q.s for q in self.store.match(p=ATTRIBUTION_FOR, o=claim_graph))
        if attrs:
            attr = attrs[0]
            for which, predicate in PERSPECTIVE_PREDICATES.items():
                values = self.store.match(s=attr, p=predicate)
                if values:
                    raw = values[0].o.value
                    info[which] = (
                        int(raw) if which == "polarity"
                        else float(raw) if which in ("certainty", "sentiment")
                        else raw
                    )
            holders = [q.s for q in self.store.match(p=HAS_ATTRIBUTION, o=attr)]
            if holders:
                times = self.store.match(s=holders[0], p=HAS_TIME)
                if times:
                    info["timestamp"] = int(times[0].o.value)
        return info

    def claim_for_triple(self, subject_iri, predicate_label, object_iri) -> str | None:
        name = self._claim_graph_name(subject_iri, sanitize_label(predicate_label), object_iri)
        return name if name in self._claims else None

    # -- thoughts --------------------------------------------------------
    def compute_thoughts(self, claim_graph: str) -> list:
        """Recompute thoughts for an existing claim from store state alone."""
        if claim_graph not in self._claims:
            raise MalformedCapsule(f"no such claim graph: {claim_graph}")
        s, p, o = self._claims[claim_graph]
        novel = [iri for iri in dict.fromkeys((s, o))
                 if self._first_seen.get(iri, (None,))[0] == claim_graph]
        certainties = self._certainties_for(claim_graph)
        certainty = min(certainties) if certainties else 1.0
        first_seen = self._first_seen.get(s, (None, 0))[1]
        return self._thoughts_for(claim_graph, novel, certainty, first_seen)

    def _certainties_for(self, claim_graph) -> list:
        values = []
        for q in self.store.match(p=ATTRIBUTION_FOR, o=claim_graph):
            for v in self.store.match(s=q.s, p=PERSPECTIVE_PREDICATES["certainty"]):
                values.append(float(v.o.value))
        return values

    def _polarities_for(self, claim_graph) -> set:
        values = set()
        for q in self.store.match(p=ATTRIBUTION_FOR, o=claim_graph):
            for v in self.store.match(s=q.s, p=PERSPECTIVE_PREDICATES["polarity"]):
                values.add(int(v.o.value))
        return values

    def _thoughts_for(self, claim_graph, novel_iris, certainty, timestamp) -> list:
        s, p, o = self._claims[claim_graph]
        predicate_label = p.split(":", 1)[1]
        thoughts = []

        for iri in novel_iris:
            thoughts.append(Thought.of("novelty", iri=iri, first_seen=timestamp))

        for entity in dict.fromkeys((s, o)):
            for expected in self._expected_predicates(entity):
                if not self._has_claim_with(entity, f"n2mu:{expected}"):
                    thoughts.append(Thought.of("gap", iri=entity, missing_predicate=expected))

        if predicate_label in self.ontology.cardinality_one:
            objects = sorted({
                triple[2] for triple in self._claims.values()
                if triple[0] == s and triple[1] == p
            })
            if len(objects) >= 2:
                thoughts.append(Thought.of(
                    "conflict", subject=s, predicate=predicate_label,
                    objects=objects, conflict="cardinality",
                ))
        if len(self._polarities_for(claim_graph)) >= 2:
            thoughts.append(Thought.of(
                "conflict", subject=s, predicate=predicate_label,
                objects=[o], conflict="polarity",
            ))

        sharers = sorted({
            triple[0] for triple in self._claims.values()
            if triple[1] == p and triple[2] == o
        })
        if len(sharers) >= 2:
            thoughts.append(Thought.of(
                "overlap", shared=["po", predicate_label, o], instances=sharers,
            ))
        if predicate_label not in self.ontology.cardinality_one:
            objects = sorted({
                triple[2] for triple in self._claims.values()
                if triple[0] == s and triple[1] == p
            })
            if len(objects) >= 2:
                thoughts.append(Thought.of(
                    "overlap", shared=["sp", s, predicate_label], instances=objects,
                ))

        if certainty < self.ontology.trust_threshold:
            thoughts.append(Thought.of("trust", claim_graph=claim_graph, certainty=certainty))

        return order_thoughts(thoughts)

    def _expected_predicates(self, entity_iri) -> list:
        expected = []
        for q in self.store.match(s=entity_iri, p=RDF_TYPE, g=INSTANCE_GRAPH):
            type_label = q.o.split(":", 1)[1]
            expected.extend(self.ontology.expected_predicates.get(type_label, []))
        return sorted(set(expected))

    def _has_claim_with(self, subject, predicate_iri) -> bool:
        return any(triple[0] == subject and triple[1] == predicate_iri
                   for triple in self._claims.values())

    # -- deletion --------------------------------------------------------
    def delete_context(self, context_iri: str) -> int:
        if context_iri not in self._contexts:
            if context_iri in self._deleted_contexts:
                return 0
            raise UnknownContext(context_iri)

        # everything owned by the context: chats, utterances, visuals,
        # detections, attributions
        owned = {context_iri}
        frontier = [context_iri]
        touched_claims = set()
        while frontier:
            node = frontier.pop()
            for q in self.store.match(s=node):
                if q.p == ATTRIBUTION_FOR:
                    touched_claims.add(q.o)
                    continue
                if q.p in TRAVERSAL_PREDICATES and isinstance(q.o, str) and q.o not in owned:
                    owned.add(q.o)
                    frontier.append(q.o)

        removed = 0
        removed += self.store.remove_all(
            q for q in list(self.store) if q.s in owned or q.g in owned
        )
        # mention links into the context's utterances/detections
        removed += self.store.remove_all(
            q for q in list(self.store)
            if q.p == DENOTED_BY and isinstance(q.o, str)
            and (q.o in owned or q.o.split("#", 1)[0] in owned)
        )

        # claims kept alive only by this context lose their named graph
        for claim_graph in sorted(touched_claims):
            if self.store.match(p=ATTRIBUTION_FOR, o=claim_graph):
                continue
            removed += self.store.remove_all(self.store.match(g=claim_graph))
            removed += self.store.remove_all(self.store.match(s=claim_graph))
            triple = self._claims.pop(claim_graph, None)
            if triple is not None:
                s, p, o = triple
                removed += self.store.remove_all(
                    self.store.match(s=s, p=p, o=o, g=INSTANCE_GRAPH)
                )

        # orphaned instance nodes: no reference left outside the instance
        # graph and no surviving instance triple using them
        referenced = set()
        for q in self.store:
            if q.g != INSTANCE_GRAPH:
                referenced.add(q.s)
                if isinstance(q.o, str):
                    referenced.add(q.o)
            elif q.p not in (RDF_TYPE, RDFS_LABEL):
                referenced.add(q.s)
                if isinstance(q.o, str):
                    referenced.add(q.o)
        orphans = [
            q for q in list(self.store)
            if q.g == INSTANCE_GRAPH and q.p in (RDF_TYPE, RDFS_LABEL)
            and q.s not in referenced
        ]
        removed += self.store.remove_all(orphans)

        self._contexts.discard(context_iri)
        self._deleted_contexts.add(context_iri)
        self._first_seen = {
            iri: seen for iri, seen in self._first_seen.items()
            if seen[0] in self._claims
        }
        surviving = set()
        for q in self.store:
            surviving.add(q.s)
            if isinstance(q.o, str):
                surviving.add(q.o)
        self._minted = {
            label: (iri, t) for label, (iri, t) in self._minted.items() if iri in surviving
        }
        return removed

    # -- serialization ---------------------------------------------------
    def serialize(self) -> str:
        return self.store.serialize()

    def deserialize(self, text: str) -> None:
        self.store.deserialize(text)
        self._rebuild_derived()

    def _rebuild_derived(self) -> None:
        self._contexts = {
            q.s for q in self.store.match(p=RDF_TYPE, o="eps:Context")
        }
        self._claims = {}
        for g in self.store.graphs():
            if g in SYSTEM_GRAPHS:
                continue
            quads = self.store.match(g=g)
            if len(quads) == 1 and not isinstance(quads[0].o, Literal):
                q = quads[0]
                self._claims[g] = (q.s, q.p, q.o)
        for q in self.store.match(p=RDF_TYPE, g=INSTANCE_GRAPH):
            if q.s.startswith("leolaniWorld:"):
                label = q.s.split(":", 1)[1]
                self._minted.setdefault(label, (q.s, q.o.split(":", 1)[1]))
        for g, (s, p, o) in self._claims.items():
            self._first_seen.setdefault(s, (g, 0))
            if isinstance(o, str):
                self._first_seen.setdefault(o, (g, 0))

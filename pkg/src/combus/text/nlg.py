"""Natural-language generation for query answers and thought responses."""

from datetime import datetime, timezone

from combus.ekg.graph import INSTANCE_GRAPH, RDFS_LABEL
from combus.ekg.thoughts import Thought

# third-person singular surface forms, positive and negated
_SURFACE = {
    "be-from": ("is from", "is not from"),
    "live-in": ("lives in", "does not live in"),
    "like": ("likes", "does not like"),
    "have": ("has", "does not have"),
    "perceived-in": ("was seen in", "was not seen in"),
}
_SURFACE_PLURAL = {
    "be-from": "are from",
    "live-in": "live in",
    "like": "like",
    "have": "have",
    "perceived-in": "were seen in",
}
_GAP_QUESTION = {
    "live-in": "Where does {x} live?",
    "be-from": "Where is {x} from?",
    "like": "What does {x} like?",
    "have": "What does {x} have?",
    "located-in": "Where is {x}?",
}


def label_for(ekg, iri: str) -> str:
    """Human-readable label for an instance IRI."""
    labels = ekg.store.match(s=iri, p=RDFS_LABEL, g=INSTANCE_GRAPH)
    if labels:
        return sorted(q.o.value for q in labels)[0]
    local = iri.split(":", 1)[-1].split("#", 1)[-1]
    return local.replace("-", " ")


def verbalize_claim(subject: str, predicate: str, obj: str,
                    polarity: int = 1, hedge: bool = False) -> str:
    """One clause like "Carl is from Amsterdam", re-parseable by the extractor."""
    surface = _SURFACE.get(predicate)
    phrase = (surface[0] if polarity >= 0 else surface[1]) if surface \
        else predicate.replace("-", " ")
    if hedge:
        phrase = f"probably {phrase}"
    return f"{subject} {phrase} {obj}"


def answer_query(query, ekg) -> list[tuple]:
    """Resolve a query pattern against the eKG; returns (s_iri, o_iri) pairs."""
    def resolve(term, var):
        if term is None:
            return var
        matches = ekg.find_instances_by_label(term)
        return matches[0][0] if matches else None

    s = resolve(query.subject, "?s")
    o = resolve(query.object, "?o")
    if s is None or o is None:
        return []
    bindings = ekg.query([(s, f"n2mu:{query.predicate}", o, INSTANCE_GRAPH)])
    return [(b.get("?s", s), b.get("?o", o)) for b in bindings]


def verbalize_answer(results: list[tuple], query, ekg) -> str:
    """Templates by result count, with source, date, and certainty hedging."""
    if not results:
        return "I don't know."
    clauses = []
    infos = []
    for s_iri, o_iri in results:
        claim_graph = ekg.claim_for_triple(s_iri, query.predicate, o_iri)
        info = ekg.claim_info(claim_graph) if claim_graph else None
        infos.append(info)
        polarity = (info or {}).get("polarity") or 1
        certainty = (info or {}).get("certainty")
        clauses.append(verbalize_claim(
            label_for(ekg, s_iri), query.predicate, label_for(ekg, o_iri),
            polarity=polarity, hedge=certainty is not None and certainty < 0.7,
        ))
    if len(results) == 1:
        info = infos[0]
        if info and info.get("source") and info.get("timestamp") is not None:
            date = datetime.fromtimestamp(
                info["timestamp"] / 1000, tz=timezone.utc).date().isoformat()
            return f"{info['source']} told me on {date} that {clauses[0]}."
        return f"I know that {clauses[0]}."
    listed = ", and ".join(clauses)
    return f"I know {len(results)} things: {listed}."


def verbalize_thoughts(thoughts, ekg=None) -> str | None:
    """Verbalize the single highest-priority thought, or None when empty."""
    if not thoughts:
        return None
    thought = thoughts[0]
    if isinstance(thought, dict):
        thought = Thought.from_dict(thought)

    def label(iri):
        return label_for(ekg, iri) if ekg else str(iri).split(":", 1)[-1]

    if thought.kind == "novelty":
        return f"I never heard about {label(thought.get('iri'))} before."
    if thought.kind == "gap":
        x = label(thought.get("iri"))
        predicate = thought.get("missing_predicate")
        template = _GAP_QUESTION.get(predicate)
        if template:
            return template.format(x=x)
        return f"What about {x} and {predicate.replace('-', ' ')}?"
    if thought.kind == "conflict":
        objects = [label(o) for o in thought.get("objects")]
        if len(objects) >= 2:
            return f"Earlier I heard {objects[0]}, now {objects[-1]}. Which is true?"
        clause = verbalize_claim(label(thought.get("subject")),
                                 thought.get("predicate"), objects[0])
        return f"Earlier I heard that {clause}, now the opposite. Which is true?"
    if thought.kind == "overlap":
        shared = thought.get("shared")
        instances = [label(i) for i in thought.get("instances")]
        if shared[0] == "po":
            phrase = _SURFACE_PLURAL.get(shared[1], shared[1].replace("-", " "))
            return (f"Interesting, {instances[0]} and {instances[1]} both "
                    f"{phrase} {label(shared[2])}.")
        surface = _SURFACE.get(shared[2], (shared[2].replace("-", " "),))[0]
        return (f"Interesting, {label(shared[1])} {surface} both "
                f"{instances[0]} and {instances[1]}.")
    if thought.kind == "trust":
        claim_graph = thought.get("claim_graph")
        clause = claim_graph.split(":", 1)[-1].replace("_", " ")
        if ekg is not None and claim_graph in ekg._claims:
            s, p, o = ekg._claims[claim_graph]
            clause = verbalize_claim(label(s), p.split(":", 1)[-1], label(o))
        return f"Are you sure that {clause}?"
    return None

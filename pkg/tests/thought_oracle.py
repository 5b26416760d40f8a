"""Brute-force oracle for reflective thought detection.

Operates on a plain chronological list of claim records, scanning all
pairs, with no access to the graph implementation's indexes or state.
"""

from dataclasses import dataclass

from combus.ekg.thoughts import Thought, order_thoughts


@dataclass(frozen=True)
class ClaimRecord:
    s: str            # subject IRI
    p: str            # bare predicate label
    o: str            # object IRI
    stype: str
    otype: str
    polarity: int
    certainty: float
    ts: int


def oracle_thoughts(claims, i, ontology):
    """Thoughts expected for claims[i], judged against claims[:i+1]."""
    c = claims[i]
    prev = claims[:i]
    upto = claims[: i + 1]
    thoughts = []

    known = set()
    for pc in prev:
        known.add(pc.s)
        known.add(pc.o)
    for iri in dict.fromkeys((c.s, c.o)):
        if iri not in known:
            thoughts.append(Thought.of("novelty", iri=iri, first_seen=c.ts))

    types = {}
    for pc in upto:
        types.setdefault(pc.s, set()).add(pc.stype)
        types.setdefault(pc.o, set()).add(pc.otype)
    for entity in dict.fromkeys((c.s, c.o)):
        expected = set()
        for t in types.get(entity, ()):
            expected.update(ontology.expected_predicates.get(t, []))
        for pred in sorted(expected):
            if not any(pc.s == entity and pc.p == pred for pc in upto):
                thoughts.append(Thought.of("gap", iri=entity, missing_predicate=pred))

    if c.p in ontology.cardinality_one:
        objects = sorted({pc.o for pc in upto if pc.s == c.s and pc.p == c.p})
        if len(objects) >= 2:
            thoughts.append(Thought.of(
                "conflict", subject=c.s, predicate=c.p,
                objects=objects, conflict="cardinality",
            ))
    polarities = {pc.polarity for pc in upto
                  if (pc.s, pc.p, pc.o) == (c.s, c.p, c.o)}
    if len(polarities) >= 2:
        thoughts.append(Thought.of(
            "conflict", subject=c.s, predicate=c.p, objects=[c.o], conflict="polarity",
        ))

    sharers = sorted({pc.s for pc in upto if pc.p == c.p and pc.o == c.o})
    if len(sharers) >= 2:
        thoughts.append(Thought.of("overlap", shared=["po", c.p, c.o], instances=sharers))
    if c.p not in ontology.cardinality_one:
        objects = sorted({pc.o for pc in upto if pc.s == c.s and pc.p == c.p})
        if len(objects) >= 2:
            thoughts.append(Thought.of("overlap", shared=["sp", c.s, c.p], instances=objects))

    if c.certainty < ontology.trust_threshold:
        claim_graph = f"leolaniWorld:claim_{c.s.split(':', 1)[1]}_{c.p}_{c.o.split(':', 1)[1]}"
        thoughts.append(Thought.of("trust", claim_graph=claim_graph, certainty=c.certainty))

    return order_thoughts(thoughts)

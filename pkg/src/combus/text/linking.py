"""Resolving text mentions to eKG instances."""

from dataclasses import dataclass

from combus.ekg.graph import DENOTED_BY, INSTANCE_GRAPH


class AmbiguousReferent(Exception):
    def __init__(self, label, candidates):
        super().__init__(f"ambiguous referent {label!r}: {candidates}")
        self.label = label
        self.candidates = candidates


@dataclass(frozen=True)
class LinkResult:
    label: str
    type: str
    start: int
    stop: int
    iri: str | None = None            # set when resolved
    clarification: str | None = None  # set instead of iri when ambiguous


def link_mentions(mentions, speaker: str, ekg, agent: str = "Leolani",
                  utterance_iri: str | None = None) -> list[LinkResult]:
    """Resolve each mention to an instance IRI, minting when unknown.

    "I" maps to the speaker and "you" to the agent. Names are matched
    case-insensitively against instance labels; two same-type matches make
    the referent ambiguous and yield a clarification question instead of a
    link. Resolutions are grounded with a denotedBy quad when the owning
    utterance is known.
    """
    results = []
    for m in mentions:
        word = m.label.lower()
        if word in ("i", "me", "my"):
            iri = ekg.mint_instance(speaker, "person")
        elif word in ("you", "your"):
            iri = ekg.mint_instance(agent, "person")
        else:
            matches = [(iri, t) for iri, t in ekg.find_instances_by_label(m.label)
                       if t == m.type]
            if len(matches) > 1:
                results.append(LinkResult(m.label, m.type, m.start, m.stop,
                                          clarification=f"Which {m.label}?"))
                continue
            iri = matches[0][0] if matches else ekg.mint_instance(m.label, m.type)
        if utterance_iri:
            ekg.store.add(iri, DENOTED_BY, f"{utterance_iri}#{m.start}-{m.stop}",
                          INSTANCE_GRAPH)
        results.append(LinkResult(m.label, m.type, m.start, m.stop, iri=iri))
    return results

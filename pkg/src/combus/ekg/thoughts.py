"""Reflective findings over the graph, used to drive agent responses."""

import json
from dataclasses import dataclass, field

KIND_ORDER = {"novelty": 0, "gap": 1, "conflict": 2, "overlap": 3, "trust": 4}


@dataclass(frozen=True)
class Thought:
    kind: str  # novelty | gap | conflict | overlap | trust
    body: tuple  # sorted (key, value) pairs; values JSON-ready

    def __post_init__(self):
        if self.kind not in KIND_ORDER:
            raise ValueError(f"unknown thought kind: {self.kind}")

    @classmethod
    def of(cls, kind: str, **body) -> "Thought":
        frozen = tuple(sorted(
            (k, tuple(v) if isinstance(v, list) else v) for k, v in body.items()
        ))
        return cls(kind, frozen)

    def get(self, key, default=None):
        for k, v in self.body:
            if k == key:
                return v
        return default

    def to_dict(self) -> dict:
        out = {"kind": self.kind}
        for k, v in self.body:
            out[k] = list(v) if isinstance(v, tuple) else v
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "Thought":
        return cls.of(d["kind"], **{k: v for k, v in d.items() if k != "kind"})

    def sort_key(self):
        return (KIND_ORDER[self.kind], json.dumps(self.to_dict(), sort_keys=True))


def order_thoughts(thoughts) -> list:
    """Dedupe and order: novelty < gap < conflict < overlap < trust, then lexicographic."""
    return sorted(set(thoughts), key=Thought.sort_key)

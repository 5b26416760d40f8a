"""Keyword-and-wildcard chatbot with response rotation and pronoun reflection."""

import json
import re
from dataclasses import dataclass, field
from importlib import resources

from combus.text.tokenize import tokenize


def _load_default():
    with resources.files("combus.data.config").joinpath("eliza_rules.json").open() as f:
        return json.load(f)


@dataclass
class ElizaRule:
    pattern: str
    rank: int
    responses: list
    regex: re.Pattern = field(init=False)
    rotation: int = field(default=0, init=False)

    def __post_init__(self):
        if not self.responses:
            raise ValueError(f"rule {self.pattern!r} has no responses")
        # joining whitespace next to a wildcard is optional so that the
        # wildcard may match nothing
        tokens = self.pattern.split()
        pattern = ""
        prev = None
        for t in tokens:
            if prev is not None:
                pattern += r"\s*" if "*" in (t, prev) else r"\s+"
            pattern += "(.*?)" if t == "*" else re.escape(t)
            prev = t
        self.regex = re.compile(f"^{pattern}$")

    def match(self, normalized: str):
        return self.regex.match(normalized)


class ElizaEngine:
    """Highest-rank rule wins; each rule rotates its responses in turn."""

    def __init__(self, config: dict | None = None):
        config = config or _load_default()
        self.reflections = {k.lower(): v for k, v in config.get("reflections", {}).items()}
        self.rules = sorted(
            (ElizaRule(r["pattern"], r.get("rank", 0), list(r["responses"]))
             for r in config.get("rules", [])),
            key=lambda r: -r.rank,
        )
        self.default = ElizaRule("*", -1, list(config.get("default_responses",
                                                          ["Please tell me more."])))

    @classmethod
    def load(cls, path) -> "ElizaEngine":
        with open(path) as f:
            return cls(json.load(f))

    def reflect(self, fragment: str) -> str:
        words = [t.text for t in tokenize(fragment)]
        return " ".join(self.reflections.get(w, w) for w in words)

    def respond(self, text: str) -> str:
        normalized = " ".join(t.text for t in tokenize(text))
        for rule in self.rules:
            m = rule.match(normalized)
            if m is None:
                continue
            response = rule.responses[rule.rotation % len(rule.responses)]
            rule.rotation += 1
            for i, group in enumerate(m.groups(), start=1):
                response = response.replace("{%d}" % i, self.reflect(group or ""))
            return response
        response = self.default.responses[self.default.rotation % len(self.default.responses)]
        self.default.rotation += 1
        return response

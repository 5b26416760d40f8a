"""In-memory quad store with hash indexes, pattern queries and N-Quads IO."""

import re
from dataclasses import dataclass
from collections import defaultdict

from combus.ekg.iri import (
    InvalidIri,
    Literal,
    PrefixTable,
    UnboundPredicateNamespace,
)

MAX_PATTERNS = 8
MAX_VARIABLES = 8


@dataclass(frozen=True)
class Quad:
    s: str
    p: str
    o: object  # IRI string or Literal
    g: str


def is_var(term) -> bool:
    return isinstance(term, str) and term.startswith("?")


def term_key(term):
    if isinstance(term, Literal):
        return term.sort_key()
    return ("iri", "", term)


class QuadStore:
    """Set-semantics quad storage; duplicates are ignored."""

    def __init__(self, prefixes: PrefixTable | None = None):
        self.prefixes = prefixes or PrefixTable()
        self._quads: set[Quad] = set()
        # three hash indexes: by subject, by (p, o), by graph
        self._by_s: dict[str, set] = defaultdict(set)
        self._by_po: dict[tuple, set] = defaultdict(set)
        self._by_g: dict[str, set] = defaultdict(set)

    def __len__(self):
        return len(self._quads)

    def __contains__(self, quad: Quad):
        return quad in self._quads

    def __iter__(self):
        return iter(self._quads)

    def add(self, s, p, o, g) -> Quad:
        self.prefixes.check(s)
        self.prefixes.check(p)
        self.prefixes.check(g)
        if not isinstance(o, Literal):
            self.prefixes.check(o)
        quad = Quad(s, p, o, g)
        if quad not in self._quads:
            self._quads.add(quad)
            self._by_s[s].add(quad)
            self._by_po[(p, o)].add(quad)
            self._by_g[g].add(quad)
        return quad

    def remove(self, quad: Quad) -> None:
        if quad in self._quads:
            self._quads.discard(quad)
            self._by_s[quad.s].discard(quad)
            self._by_po[(quad.p, quad.o)].discard(quad)
            self._by_g[quad.g].discard(quad)

    def remove_all(self, quads) -> int:
        count = 0
        for quad in list(quads):
            if quad in self._quads:
                self.remove(quad)
                count += 1
        return count

    # -- lookup helpers --------------------------------------------------
    def match(self, s=None, p=None, o=None, g=None):
        """All quads matching the given constants (None = wildcard)."""
        if s is not None:
            candidates = self._by_s.get(s, set())
        elif p is not None and o is not None:
            candidates = self._by_po.get((p, o), set())
        elif g is not None:
            candidates = self._by_g.get(g, set())
        else:
            candidates = self._quads
        return [
            q for q in candidates
            if (s is None or q.s == s)
            and (p is None or q.p == p)
            and (o is None or q.o == o)
            and (g is None or q.g == g)
        ]

    def graphs(self) -> set:
        return {g for g, quads in self._by_g.items() if quads}

    def nodes(self) -> set:
        nodes = set()
        for q in self._quads:
            nodes.add(q.s)
            if not isinstance(q.o, Literal):
                nodes.add(q.o)
        return nodes

    # -- basic graph pattern query ---------------------------------------
    def query(self, patterns) -> list:
        """Exhaustive join over ≤8 quad patterns with ≤8 variables.

        Each pattern is a (s, p, o) or (s, p, o, g) tuple whose terms are
        constants (IRI string or Literal) or variables ("?name"). Returns
        bindings sorted by their value tuple for deterministic output.
        """
        if len(patterns) > MAX_PATTERNS:
            raise ValueError(f"too many patterns: {len(patterns)} > {MAX_PATTERNS}")
        normalized = []
        variables = set()
        for pattern in patterns:
            if len(pattern) == 3:
                pattern = (*pattern, None)
            s, p, o, g = pattern
            for term in (s, p, o, g):
                if is_var(term):
                    variables.add(term)
            if not is_var(p) and p is not None:
                try:
                    self.prefixes.check(p)
                except InvalidIri as e:
                    raise UnboundPredicateNamespace(str(e)) from e
            normalized.append((s, p, o, g))
        if len(variables) > MAX_VARIABLES:
            raise ValueError(f"too many variables: {len(variables)} > {MAX_VARIABLES}")

        solutions = [dict()]
        for s, p, o, g in normalized:
            next_solutions = []
            for binding in solutions:
                bs = _resolve(s, binding)
                bp = _resolve(p, binding)
                bo = _resolve(o, binding)
                bg = _resolve(g, binding)
                for quad in self.match(
                    s=None if bs is None or is_var(bs) else bs,
                    p=None if bp is None or is_var(bp) else bp,
                    o=None if bo is None or is_var(bo) else bo,
                    g=None if bg is None or is_var(bg) else bg,
                ):
                    extended = dict(binding)
                    if _bind(extended, bs, quad.s) and _bind(extended, bp, quad.p) \
                            and _bind(extended, bo, quad.o) and _bind(extended, bg, quad.g):
                        next_solutions.append(extended)
            solutions = next_solutions
            if not solutions:
                break
        unique = {tuple(sorted((k, term_key(v)) for k, v in sol.items())): sol
                  for sol in solutions}
        return [unique[key] for key in sorted(unique)]

    # -- serialization ---------------------------------------------------
    def serialize(self) -> str:
        """Line-oriented N-Quads-style text, one quad per sorted line."""
        lines = []
        for quad in self._quads:
            s = f"<{self.prefixes.expand(quad.s)}>"
            p = f"<{self.prefixes.expand(quad.p)}>"
            if isinstance(quad.o, Literal):
                value = quad.o.value.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
                o = f'"{value}"^^<{self.prefixes.expand(quad.o.datatype)}>'
            else:
                o = f"<{self.prefixes.expand(quad.o)}>"
            g = f"<{self.prefixes.expand(quad.g)}>"
            lines.append(f"{s} {p} {o} {g} .")
        return "\n".join(sorted(lines)) + ("\n" if lines else "")

    _LINE_RE = re.compile(
        r'^<([^>]*)> <([^>]*)> (?:<([^>]*)>|"((?:[^"\\]|\\.)*)"\^\^<([^>]*)>) <([^>]*)> \.$'
    )

    def deserialize(self, text: str) -> None:
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            m = self._LINE_RE.match(line)
            if m is None:
                raise ValueError(f"line {lineno}: not a valid quad line: {line!r}")
            s_full, p_full, o_iri, o_val, o_dt, g_full = m.groups()
            s = self.prefixes.compress(s_full)
            p = self.prefixes.compress(p_full)
            g = self.prefixes.compress(g_full)
            if o_iri is not None:
                o = self.prefixes.compress(o_iri)
            else:
                value = o_val.replace("\\n", "\n").replace('\\"', '"').replace("\\\\", "\\")
                o = Literal(value, self.prefixes.compress(o_dt))
            self.add(s, p, o, g)


def _resolve(term, binding):
    if is_var(term) and term in binding:
        return binding[term]
    return term


def _bind(binding, term, value) -> bool:
    if term is None:
        return True
    if is_var(term):
        if term in binding:
            return binding[term] == value
        binding[term] = value
        return True
    return term == value

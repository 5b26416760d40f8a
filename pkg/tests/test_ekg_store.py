import itertools
import random

import pytest

from combus.ekg import Literal, QuadStore, UnboundPredicateNamespace
from combus.ekg.iri import InvalidIri, PrefixTable, sanitize_label


class TestPrefixes:
    def test_known_prefixes_roundtrip(self):
        table = PrefixTable()
        for iri in ("leolaniWorld:carl", "n2mu:live-in", "gaf:denotedBy", "eps:Context"):
            assert table.compress(table.expand(iri)) == iri

    def test_unknown_prefix_rejected(self):
        table = PrefixTable()
        with pytest.raises(InvalidIri):
            table.check("nope:thing")
        with pytest.raises(InvalidIri):
            table.check("leolaniWorld:has space")

    def test_sanitize_label(self):
        assert sanitize_label("Amsterdam") == "amsterdam"
        assert sanitize_label("The Waiter!") == "the-waiter"
        assert sanitize_label("") == "unnamed"


class TestQuadStore:
    def test_set_semantics(self):
        store = QuadStore()
        store.add("leolaniWorld:carl", "n2mu:live-in", "leolaniWorld:amsterdam", "leolaniWorld:g1")
        store.add("leolaniWorld:carl", "n2mu:live-in", "leolaniWorld:amsterdam", "leolaniWorld:g1")
        assert len(store) == 1

    def test_match_by_indexes(self):
        store = QuadStore()
        store.add("leolaniWorld:carl", "n2mu:live-in", "leolaniWorld:amsterdam", "leolaniWorld:g1")
        store.add("leolaniWorld:carla", "n2mu:live-in", "leolaniWorld:utrecht", "leolaniWorld:g2")
        assert len(store.match(s="leolaniWorld:carl")) == 1
        assert len(store.match(p="n2mu:live-in")) == 2
        assert len(store.match(g="leolaniWorld:g2")) == 1
        assert store.match(p="n2mu:live-in", o="leolaniWorld:utrecht")[0].s == "leolaniWorld:carla"


class TestQuery:
    def test_carl_binding(self):
        store = QuadStore()
        store.add("leolaniWorld:carl", "n2mu:live-in", "leolaniWorld:amsterdam", "leolaniWorld:g1")
        result = store.query([("?s", "n2mu:live-in", "leolaniWorld:amsterdam")])
        assert result == [{"?s": "leolaniWorld:carl"}]

    def test_empty_store_empty_bindings(self):
        assert QuadStore().query([("?s", "?p", "?o")]) == []

    def test_unbound_predicate_namespace(self):
        store = QuadStore()
        with pytest.raises(UnboundPredicateNamespace):
            store.query([("?s", "unknownns:pred", "?o")])

    def test_join_matches_nested_loop_oracle(self):
        rng = random.Random(99)
        store = QuadStore()
        nodes = [f"leolaniWorld:n{i}" for i in range(8)]
        preds = [f"n2mu:p{i}" for i in range(3)]
        graphs = [f"leolaniWorld:g{i}" for i in range(2)]
        quads = set()
        while len(quads) < 50:
            quads.add((rng.choice(nodes), rng.choice(preds), rng.choice(nodes), rng.choice(graphs)))
        for s, p, o, g in quads:
            store.add(s, p, o, g)

        patterns = [("?a", "n2mu:p0", "?b"), ("?b", "n2mu:p1", "?c"), ("?c", "?p", "?a")]

        # independent nested-loop oracle over the raw quad tuples
        oracle = set()
        for q1, q2, q3 in itertools.product(quads, repeat=3):
            if q1[1] != "n2mu:p0" or q2[1] != "n2mu:p1":
                continue
            if q1[2] != q2[0] or q2[2] != q3[0] or q3[2] != q1[0]:
                continue
            oracle.add((q1[0], q1[2], q2[2], q3[1]))

        got = {
            (b["?a"], b["?b"], b["?c"], b["?p"])
            for b in store.query(patterns)
        }
        assert got == oracle

    def test_limits_enforced(self):
        store = QuadStore()
        with pytest.raises(ValueError):
            store.query([("?s", "?p", "?o")] * 9)
        with pytest.raises(ValueError):
            store.query([(f"?v{i}", f"?w{i}", "?x") for i in range(4)] + [("?y", "?z", "?q")])


class TestSerialization:
    def test_roundtrip_empty(self):
        store = QuadStore()
        assert store.serialize() == ""
        other = QuadStore()
        other.deserialize("")
        assert len(other) == 0

    def test_roundtrip_one_quad(self):
        store = QuadStore()
        store.add("leolaniWorld:carl", "rdfs:label", Literal('Ca"rl\n'), "leolaniWorld:Instances")
        text = store.serialize()
        other = QuadStore()
        other.deserialize(text)
        assert set(other) == set(store)
        assert other.serialize() == text

    def test_roundtrip_500_random_quads(self):
        rng = random.Random(5)
        store = QuadStore()
        for _ in range(500):
            if rng.random() < 0.3:
                o = Literal(f"value {rng.randrange(1000)}")
            else:
                o = f"leolaniWorld:n{rng.randrange(100)}"
            store.add(
                f"leolaniWorld:n{rng.randrange(100)}",
                f"n2mu:p{rng.randrange(10)}",
                o,
                f"leolaniWorld:g{rng.randrange(10)}",
            )
        other = QuadStore()
        other.deserialize(store.serialize())
        assert set(other) == set(store)

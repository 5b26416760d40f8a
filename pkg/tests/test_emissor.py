import json
import random

import pytest

from combus.clock import ManualClock
from combus.emissor import (
    Annotation,
    Mention,
    ScenarioClosed,
    ScenarioStore,
    SegmentOutOfBounds,
    Signal,
    TemporalRuler,
    TextIndex,
    UnknownSignal,
)
from tests.generators import make_store, random_scenario


@pytest.fixture
def store(tmp_path):
    return make_store(tmp_path)


def text_signal(scenario, sid, text, at, source="chat-ui"):
    return Signal(id=sid, modality="text",
                  time=TemporalRuler(scenario.id, at, at), source=source, text=text)


class TestLifecycle:
    def test_start_scenario_open_ruler(self, store):
        scenario = store.start_scenario("eliza")
        assert scenario.ruler.start_ms == 1_700_000_000_000
        assert scenario.ruler.end_ms is None
        assert scenario.ruler.container_id == scenario.id
        assert store.scenario_dir(scenario.id).is_dir()

    def test_same_clock_distinct_ids(self, store):
        a = store.start_scenario("eliza")
        b = store.start_scenario("eliza")
        assert a.id != b.id

    def test_empty_scenario_validates(self, store):
        scenario = store.start_scenario("eliza")
        store.finish_scenario(scenario)
        assert store.validate_scenario(scenario.id) == []

    def test_finish_then_validate_clean(self, store):
        scenario = store.start_scenario("eliza")
        signal = text_signal(scenario, "s1", "I am from Amsterdam", scenario.ruler.start_ms)
        store.add_signal(scenario, signal)
        store.add_mention(
            scenario, "s1",
            Mention("m1", [TextIndex("s1", 0, 19)],
                    [Annotation("entity", "statement", "ner", scenario.ruler.start_ms)]),
        )
        store.finish_scenario(scenario)
        assert store.validate_scenario(scenario.id) == []


class TestMentions:
    def test_amsterdam_mention_persisted_under_text(self, store):
        scenario = store.start_scenario("leolani")
        t1 = scenario.ruler.start_ms
        store.add_signal(scenario, text_signal(scenario, "s1", "I am from Amsterdam", t1))
        store.add_mention(
            scenario, "s1",
            Mention("m1", [TextIndex("s1", 10, 19)],
                    [Annotation("entity", {"label": "Amsterdam", "type": "location"}, "ner", t1)]),
        )
        store.finish_scenario(scenario)
        loaded = store.load_scenario(scenario.id)
        [signal] = loaded.signals["text"]
        assert signal.text[10:19] == "Amsterdam"
        assert signal.mentions[0].annotations[0].value["label"] == "Amsterdam"

    def test_empty_text_segment_rejected(self, store):
        scenario = store.start_scenario("leolani")
        store.add_signal(scenario, text_signal(scenario, "s1", "hello", scenario.ruler.start_ms))
        with pytest.raises(SegmentOutOfBounds):
            store.add_mention(
                scenario, "s1",
                Mention("m1", [TextIndex("s1", 5, 5)],
                        [Annotation("entity", "x", "ner", 0)]),
            )

    def test_unknown_signal(self, store):
        scenario = store.start_scenario("leolani")
        with pytest.raises(UnknownSignal):
            store.add_mention(scenario, "ghost",
                              Mention("m1", [], [Annotation("entity", "x", "ner", 0)]))

    def test_closed_scenario_rejects_mutation(self, store):
        scenario = store.start_scenario("leolani")
        store.finish_scenario(scenario)
        with pytest.raises(ScenarioClosed):
            store.add_signal(scenario, text_signal(scenario, "s1", "late", scenario.ruler.start_ms))


class TestRoundTrip:
    def test_three_signals_five_mentions_reload_identical(self, store):
        scenario = store.start_scenario("leolani")
        t = scenario.ruler.start_ms
        for i in range(3):
            store.add_signal(scenario, text_signal(scenario, f"s{i}", f"utterance {i} text", t + i))
        for j in range(5):
            sid = f"s{j % 3}"
            store.add_mention(
                scenario, sid,
                Mention(f"m{j}", [TextIndex(sid, 0, 9)],
                        [Annotation("entity", f"v{j}", "ner", t + j)]),
            )
        store.finish_scenario(scenario)
        assert store.load_scenario(scenario.id) == scenario

    def test_property_roundtrip_over_generated_scenarios(self, tmp_path):
        rng = random.Random(1234)
        store = make_store(tmp_path)
        for _ in range(50):
            scenario = random_scenario(rng, store)
            assert store.load_scenario(scenario.id) == scenario
            assert store.validate_scenario(scenario.id) == []


class TestValidation:
    def test_dangling_segment_detected(self, store):
        scenario = store.start_scenario("leolani")
        store.add_signal(scenario, text_signal(scenario, "s1", "hello there", scenario.ruler.start_ms))
        store.add_mention(
            scenario, "s1",
            Mention("m1", [TextIndex("s1", 0, 5)], [Annotation("entity", "x", "ner", 0)]),
        )
        store.finish_scenario(scenario)
        # hand-break the file: point the segment at an absent signal
        path = store.scenario_dir(scenario.id) / "text.json"
        body = json.loads(path.read_text())
        body[0]["mentions"][0]["segments"][0]["signal_id"] = "absent"
        path.write_text(json.dumps(body))
        codes = [v["code"] for v in store.validate_scenario(scenario.id)]
        assert "dangling-segment" in codes

    def test_corrupt_file_reported(self, store):
        scenario = store.start_scenario("leolani")
        store.finish_scenario(scenario)
        (store.scenario_dir(scenario.id) / "text.json").write_text("{nope")
        codes = [v["code"] for v in store.validate_scenario(scenario.id)]
        assert codes == ["corrupt-file"]


class TestDelete:
    def test_delete_removes_directory(self, store):
        scenario = store.start_scenario("leolani")
        store.finish_scenario(scenario)
        removed = store.delete_scenario(scenario.id)
        assert not store.scenario_dir(scenario.id).exists()
        assert any(name.endswith(".json") for name in removed)

    def test_delete_twice_idempotent(self, store):
        scenario = store.start_scenario("leolani")
        store.finish_scenario(scenario)
        store.delete_scenario(scenario.id)
        assert store.delete_scenario(scenario.id) == []


class TestDeterminism:
    def test_fixed_clock_runs_are_byte_identical(self, tmp_path):
        def run(base):
            store = make_store(base)
            scenario = store.start_scenario("eliza", speaker="carl")
            t = scenario.ruler.start_ms
            store.add_signal(scenario, text_signal(scenario, "s1", "hello", t))
            store.finish_scenario(scenario)
            d = store.scenario_dir(scenario.id)
            return {p.name: p.read_bytes() for p in sorted(d.glob("*.json"))}

        assert run(tmp_path / "a") == run(tmp_path / "b")

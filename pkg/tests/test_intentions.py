"""Intention manager: activation, completion, gating, priorities."""

import pytest

from combus.eventbus.events import ControlCommand, Event, MentionCreated, TextSignalEvent
from combus.intentions import (
    IntentionManager,
    IntentionSpec,
    UnknownIntentionReference,
    load_intention_config,
    register_builtin_intentions,
)

_n = 0


def ev(topic, payload):
    global _n
    _n += 1
    return Event(id=f"{_n:032x}", topic=topic, source="test",
                 timestamp=1_700_000_000_000 + _n, payload=payload, seq=_n)


def text_event(text, topic="text-in"):
    return ev(topic, TextSignalEvent(signal={"id": "s", "text": text}))


def new_identity_event():
    mention = {"id": "m1", "segments": [],
               "annotations": [{"type": "identity",
                                "value": {"label": "stranger-0001", "new": True}}]}
    return ev("mentions", MentionCreated(mention=mention))


def test_builtin_priorities():
    manager = register_builtin_intentions()
    priorities = {name: spec.priority for name, spec in manager.specs.items()}
    assert priorities["Goodbye"] == 100
    assert priorities["GivingConsent"] == 95
    assert priorities["Greeting"] == 90
    assert priorities["AboutAgent"] == 60
    assert priorities["WhatDoYouSee"] == 60
    assert priorities["Leolani"] == 50
    assert priorities["Eliza"] == 10


def test_blenderbot_slot_binds_eliza():
    manager = register_builtin_intentions()
    assert manager.specs["Blenderbot"].bindings == (("eliza", ("text-in",)),)


def test_initial_active():
    manager = register_builtin_intentions()
    assert manager.active() == ["Leolani"]


def test_new_identity_activates_greeting():
    manager = register_builtin_intentions()
    changed = manager.evaluate(new_identity_event())
    assert [c.intention for c in changed] == ["Greeting"]
    assert "Greeting" in manager.active()


def test_goodbye_cue_activates_goodbye():
    manager = register_builtin_intentions()
    changed = manager.evaluate(text_event("ok goodbye then"))
    assert [c.intention for c in changed] == ["Goodbye"]
    assert manager.active()[0] == "Goodbye"


def test_consent_command_is_one_shot():
    manager = register_builtin_intentions()
    changed = manager.evaluate(ev("control", ControlCommand(command="consent-denied")))
    assert [c.intention for c in changed] == ["GivingConsent"]
    assert "GivingConsent" not in manager.active()


def test_gating_follows_active_bindings():
    manager = register_builtin_intentions()
    assert manager.gate("mention-detector", "text-in")
    assert manager.gate("knowledge-rep", "triples")
    assert not manager.gate("eliza", "text-in")
    # components not named in any intention binding are never gated
    assert manager.gate("vad", "mic")
    assert manager.gate("storage-writer", "text-in")


def test_enabled_bindings_union_invariant():
    manager = register_builtin_intentions()
    manager.evaluate(new_identity_event())
    top = max(manager.specs[n].priority for n in manager.active())
    expected = set()
    for name in manager.active():
        spec = manager.specs[name]
        if spec.dialog and spec.priority < top:
            continue  # preempted by a higher-priority intention
        for component, topics in spec.bindings:
            expected |= {(component, t) for t in topics}
    assert manager.enabled_bindings() == expected


def test_high_priority_intention_preempts_dialog():
    manager = register_builtin_intentions()
    assert manager.gate("mention-detector", "text-in")
    manager.evaluate(text_event("ok goodbye then"))
    # while Goodbye is active the Leolani dialog pipeline is suspended
    assert not manager.gate("mention-detector", "text-in")
    assert manager.gate("farewell", "text-in")


def test_dialog_group_is_exclusive():
    manager = register_builtin_intentions()
    manager.evaluate(text_event("who are you?"))
    active = manager.active()
    assert "AboutAgent" in active and "Leolani" not in active
    # completion on the agent's reply chains back to Leolani
    manager.evaluate(text_event("I am Leolani.", topic="text-out"))
    active = manager.active()
    assert "Leolani" in active and "AboutAgent" not in active


def test_same_priority_breaks_by_registration_order():
    manager = register_builtin_intentions()
    manager.evaluate(text_event("who are you and what do you see"))
    assert "AboutAgent" in manager.active()
    assert "WhatDoYouSee" not in manager.active()


def test_what_do_you_see_activates():
    manager = register_builtin_intentions()
    changed = manager.evaluate(text_event("What do you see?"))
    assert [c.intention for c in changed] == ["WhatDoYouSee"]
    assert manager.gate("scene-describer", "text-in")


def test_replay_reproduces_history():
    events = [text_event("who are you?"),
              text_event("I am Leolani.", topic="text-out"),
              text_event("goodbye"),
              new_identity_event()]

    def run():
        manager = register_builtin_intentions()
        for event in events:
            manager.evaluate(event)
        return manager.history

    assert run() == run()


def test_unknown_chained_intention_rejected():
    spec = IntentionSpec(name="A", priority=1, bindings=(("x", ("t",)),),
                         on_complete=("Missing",))
    with pytest.raises(UnknownIntentionReference):
        IntentionManager([spec])


def test_recency_window_in_config():
    assert load_intention_config()["recency_window_ms"] == 120_000

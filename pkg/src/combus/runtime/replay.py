"""Deterministic replay of recorded input-event logs.

An event log is JSONL: one canonical event object per line, in the order
the feeder topics received them. Replaying the same log against the same
config yields byte-identical scenario files and eKG serialization because
the clock is driven from the logged timestamps and ids are minted from a
deterministic counter.
"""

import json
from pathlib import Path

from combus.clock import ManualClock
from combus.eventbus.events import Event, event_from_json, event_to_json
from combus.ids import IdGenerator
from combus.runtime.config import AgentConfig


def write_event_log(path, events) -> Path:
    """Write events (Event objects or canonical dicts) as JSONL."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        for event in events:
            obj = event_to_json(event) if isinstance(event, Event) else event
            f.write(json.dumps(obj, sort_keys=True, separators=(",", ":")))
            f.write("\n")
    return path


def read_event_log(path):
    with open(path, encoding="utf-8") as f:
        return [event_from_json(json.loads(line)) for line in f if line.strip()]


def replay(log_path, config: AgentConfig, storage_dir=None):
    """Run a recorded session; returns (scenario_dir, ekg_path).

    The agent is rebuilt from config with a manual clock and deterministic
    ids; each logged event is republished with its original id, source, and
    timestamp (the bus assigns fresh seqs, which match the original run
    because per-topic ordering is preserved in the log).
    """
    from combus.runtime.agent import assemble

    events = read_event_log(log_path)
    start_ms = events[0].timestamp if events else 0
    if storage_dir is not None:
        config.storage_dir = str(storage_dir)
    agent = assemble(config,
                     clock=ManualClock(start_ms),
                     ids=IdGenerator(deterministic=True))
    agent.start()
    try:
        for event in events:
            agent.clock.set(event.timestamp)
            agent.bus.publish(event.topic, Event(
                id=event.id, topic=event.topic, source=event.source,
                timestamp=event.timestamp, payload=event.payload))
        scenario_id = agent.scenario.id if agent.scenario else None
    finally:
        agent.stop()
    ekg_path = agent.save_ekg()
    scenario_dir = agent.store.scenario_dir(scenario_id) if scenario_id else None
    return scenario_dir, ekg_path

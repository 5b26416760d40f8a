"""Command-line entry points: run an agent, validate scenarios, query an eKG."""

import json
import logging
import os
import sys

import click

from combus.ekg.store import QuadStore
from combus.emissor.store import ScenarioStore
from combus.runtime import AgentConfig, assemble
from combus.runtime import replay as replay_log


@click.group()
def main():
    logging.basicConfig(
        level=os.environ.get("COMBUS_LOG", "INFO").upper(),
        format="%(asctime)s %(name)s %(levelname)s %(message)s")


@main.command()
@click.option("--config", "config_path", required=True,
              type=click.Path(exists=True), help="Agent INI config.")
@click.option("--replay", "log_path", type=click.Path(exists=True),
              help="Replay a recorded event log instead of reading stdin.")
@click.option("--scenario-dir", "storage_dir", type=click.Path(),
              help="Override the storage directory from the config.")
def run(config_path, log_path, storage_dir):
    """Run an agent session; reads utterances from stdin, one per line."""
    config = AgentConfig.load(config_path)
    if storage_dir:
        config.storage_dir = storage_dir
    if log_path:
        scenario_dir, ekg_path = replay_log(log_path, config)
        click.echo(f"scenario: {scenario_dir}")
        click.echo(f"ekg: {ekg_path}")
        return
    agent = assemble(config)
    agent.record_inputs()
    agent.start()
    agent.bus.subscribe(
        ["text-out"], "cli-printer",
        lambda e: click.echo(f"{agent.name}: {e.payload.signal.get('text', '')}"))
    try:
        for line in sys.stdin:
            line = line.strip()
            if not line:
                continue
            agent.feed_text(line, source="cli")
            if agent.shutdown_requested:
                break
    except KeyboardInterrupt:
        pass
    finally:
        agent.stop()
        ekg_path = agent.save_ekg()
        click.echo(f"ekg: {ekg_path}", err=True)
        log_out = os.environ.get("COMBUS_EVENT_LOG")
        if log_out and agent.input_log:
            from combus.runtime import write_event_log
            write_event_log(log_out, agent.input_log)
            click.echo(f"event log: {log_out}", err=True)


@main.command()
@click.argument("scenario_dir", type=click.Path(exists=True))
def validate(scenario_dir):
    """Check one scenario directory against the storage invariants."""
    from combus.emissor.schema import validate_json

    scenario_dir = os.path.abspath(scenario_dir)
    root = os.path.dirname(os.path.dirname(scenario_dir))
    store = ScenarioStore(root)
    violations = store.validate_scenario(scenario_dir)
    scenario_id = os.path.basename(scenario_dir)
    meta_path = os.path.join(scenario_dir, f"{scenario_id}.json")
    if os.path.exists(meta_path):
        with open(meta_path, encoding="utf-8") as f:
            violations += validate_json("scenario", json.load(f))
    for modality in ("text", "audio", "image", "rdf"):
        path = os.path.join(scenario_dir, f"{modality}.json")
        if not os.path.exists(path):
            continue
        with open(path, encoding="utf-8") as f:
            for signal in json.load(f):
                violations += validate_json("signal", signal)
    for violation in violations:
        click.echo(f"{violation['code']}: {violation['detail']}")
    if violations:
        raise SystemExit(1)
    click.echo("ok")


@main.command()
@click.option("--ekg", "ekg_path", required=True, type=click.Path(exists=True),
              help="N-Quads file to query.")
@click.option("--pattern", required=True,
              help='Space-separated "s p o [g]"; use ?name for variables.')
def query(ekg_path, pattern):
    """Run one basic graph pattern against a serialized eKG."""
    store = QuadStore()
    with open(ekg_path, encoding="utf-8") as f:
        store.deserialize(f.read())
    parts = pattern.split()
    if len(parts) not in (3, 4):
        raise click.BadParameter("pattern must have 3 or 4 terms")
    for binding in store.query([tuple(parts)]):
        click.echo(json.dumps(binding, sort_keys=True, default=str))


if __name__ == "__main__":
    main()

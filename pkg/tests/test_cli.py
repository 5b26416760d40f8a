"""CLI subcommands: run, validate, query."""

import json
from importlib.resources import files

from click.testing import CliRunner

from combus.cli import main


def write_config(tmp_path):
    text = files("combus.data.config").joinpath("leolani.ini").read_text()
    path = tmp_path / "leolani.ini"
    path.write_text(text)
    return path


def test_run_reads_stdin_and_writes_outputs(tmp_path):
    config = write_config(tmp_path)
    runner = CliRunner()
    result = runner.invoke(main, [
        "run", "--config", str(config), "--scenario-dir", str(tmp_path / "data"),
    ], input="I am from Amsterdam\nWhere am I from?\n")
    assert result.exit_code == 0, result.output
    assert "Amsterdam" in result.output
    assert (tmp_path / "data" / "ekg.nq").exists()
    scenarios = list((tmp_path / "data" / "scenarios").iterdir())
    assert len(scenarios) == 1


def test_validate_accepts_written_scenario(tmp_path):
    config = write_config(tmp_path)
    runner = CliRunner()
    runner.invoke(main, [
        "run", "--config", str(config), "--scenario-dir", str(tmp_path / "data"),
    ], input="I like pizza\n")
    scenario_dir = next((tmp_path / "data" / "scenarios").iterdir())
    result = runner.invoke(main, ["validate", str(scenario_dir)])
    assert result.exit_code == 0, result.output
    assert result.output.strip() == "ok"


def test_validate_flags_corruption(tmp_path):
    config = write_config(tmp_path)
    runner = CliRunner()
    runner.invoke(main, [
        "run", "--config", str(config), "--scenario-dir", str(tmp_path / "data"),
    ], input="I like pizza\n")
    scenario_dir = next((tmp_path / "data" / "scenarios").iterdir())
    text_path = scenario_dir / "text.json"
    signals = json.loads(text_path.read_text())
    signals[0]["modality"] = "smell"
    text_path.write_text(json.dumps(signals))
    result = runner.invoke(main, ["validate", str(scenario_dir)])
    assert result.exit_code == 1


def test_query_subcommand(tmp_path):
    config = write_config(tmp_path)
    runner = CliRunner()
    runner.invoke(main, [
        "run", "--config", str(config), "--scenario-dir", str(tmp_path / "data"),
    ], input="I am from Amsterdam\n")
    result = runner.invoke(main, [
        "query", "--ekg", str(tmp_path / "data" / "ekg.nq"),
        "--pattern", "?s n2mu:be-from ?o leolaniWorld:Instances",
    ])
    assert result.exit_code == 0, result.output
    row = json.loads(result.output.strip())
    assert row["?o"] == "leolaniWorld:amsterdam"


def test_replay_option_runs_log(tmp_path):
    from combus.runtime import AgentConfig, assemble, write_event_log

    config_path = write_config(tmp_path)
    config = AgentConfig.parse(config_path.read_text())
    config.storage_dir = str(tmp_path / "live")
    agent = assemble(config)
    agent.record_inputs()
    agent.start()
    agent.feed_text("I am from Amsterdam")
    agent.stop()
    log = write_event_log(tmp_path / "log.jsonl", agent.input_log)

    runner = CliRunner()
    result = runner.invoke(main, [
        "run", "--config", str(config_path), "--replay", str(log),
        "--scenario-dir", str(tmp_path / "replayed"),
    ])
    assert result.exit_code == 0, result.output
    assert (tmp_path / "replayed" / "ekg.nq").exists()

"""Agent assembly, lifecycle, feeders, storage writer, and replay."""

from combus.runtime.agent import Agent, DanglingTopic, UnknownComponent, assemble
from combus.runtime.config import AgentConfig
from combus.runtime.replay import replay, write_event_log

__all__ = ["Agent", "AgentConfig", "DanglingTopic", "UnknownComponent",
           "assemble", "replay", "write_event_log"]

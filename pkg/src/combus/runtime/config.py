"""INI-style agent configuration.

Sections: [agent], [bus], [clock], [storage], [intentions], and one
[component:<name>] per enabled component. Topic wiring defaults to the
standard flow and can be overridden per component with `in`/`out` keys.
"""

import configparser
from dataclasses import dataclass, field

# default topic wiring per component; configs override with in=/out=
DEFAULT_WIRING = {
    "vad": (["mic"], ["vad"]),
    "asr": (["vad"], ["text-in"]),
    "eliza": (["text-in"], ["text-out"]),
    "tts": (["text-out"], ["speaker"]),
    "audio-controller": (["speaker"], ["control"]),
    "mention-detector": (["text-in"], ["entities"]),
    "mention-linker": (["entities"], ["linking"]),
    "triple-extractor": (["linking"], ["triples", "chitchat"]),
    "knowledge-rep": (["triples", "identity"], ["response"]),
    "response-generator": (["response"], ["text-out"]),
    "object-recognition": (["cam"], ["object"]),
    "face-recognition": (["cam"], ["face"]),
    "speaker-id": (["mic"], ["voice"]),
    "identification": (["voice", "face", "object"], ["identity"]),
    "greeter": (["identity"], ["text-out"]),
    "about-agent": (["text-in"], ["text-out"]),
    "scene-describer": (["text-in"], ["text-out"]),
    "farewell": (["text-in"], ["text-out"]),
    "consent-handler": (["control"], []),
    "storage-writer": (["mic", "vad", "speaker", "cam", "text-in", "text-out",
                        "linking", "triples", "identity", "face", "object"], []),
    "intention-manager": (["text-in", "text-out", "control", "identity"],
                          ["intention"]),
}

# topics produced by feeders/external clients rather than components
FEEDER_TOPICS = {"mic", "cam", "text-in", "control"}


@dataclass
class ComponentConfig:
    name: str
    input_topics: list
    output_topics: list
    params: dict = field(default_factory=dict)


@dataclass
class AgentConfig:
    name: str = "agent"
    speaker: str = "unknown"
    bus_type: str = "inline"          # inline | queued | remote
    broker: str | None = None
    clock_type: str = "real"          # real | fixed
    clock_start_ms: int = 0
    clock_step_ms: int = 1
    storage_dir: str = "./data"
    consent: str = "granted"          # granted | ask
    intentions_config: str | None = None
    intentions_initial: list = field(default_factory=list)
    components: dict = field(default_factory=dict)  # name -> ComponentConfig

    @classmethod
    def parse(cls, text: str) -> "AgentConfig":
        parser = configparser.ConfigParser()
        parser.read_string(text)
        config = cls()
        if parser.has_section("agent"):
            config.name = parser.get("agent", "name", fallback=config.name)
            config.speaker = parser.get("agent", "speaker", fallback=config.speaker)
        if parser.has_section("bus"):
            config.bus_type = parser.get("bus", "type", fallback=config.bus_type)
            config.broker = parser.get("bus", "broker", fallback=None)
        if parser.has_section("clock"):
            config.clock_type = parser.get("clock", "type", fallback=config.clock_type)
            config.clock_start_ms = parser.getint("clock", "start_ms", fallback=0)
            config.clock_step_ms = parser.getint("clock", "step_ms", fallback=1)
        if parser.has_section("storage"):
            config.storage_dir = parser.get("storage", "dir",
                                            fallback=config.storage_dir)
            config.consent = parser.get("storage", "consent", fallback=config.consent)
        if parser.has_section("intentions"):
            config.intentions_config = parser.get("intentions", "config", fallback=None)
            initial = parser.get("intentions", "initial", fallback="")
            config.intentions_initial = _split(initial)
        for section in parser.sections():
            if not section.startswith("component:"):
                continue
            name = section.split(":", 1)[1]
            defaults = DEFAULT_WIRING.get(name, ([], []))
            inputs = _split(parser.get(section, "in", fallback="")) or list(defaults[0])
            outputs = _split(parser.get(section, "out", fallback="")) or list(defaults[1])
            params = {k: v for k, v in parser.items(section) if k not in ("in", "out")}
            config.components[name] = ComponentConfig(name, inputs, outputs, params)
        return config

    @classmethod
    def load(cls, path) -> "AgentConfig":
        with open(path) as f:
            return cls.parse(f.read())

    def dangling_topics(self) -> list:
        """Input topics without any producer (warnings, not errors)."""
        produced = set(FEEDER_TOPICS)
        for component in self.components.values():
            produced.update(component.output_topics)
        dangling = []
        for component in self.components.values():
            for topic in component.input_topics:
                if topic not in produced:
                    dangling.append((component.name, topic))
        return dangling


def _split(value: str) -> list:
    return [part.strip() for part in value.split(",") if part.strip()]

"""On-disk scenario persistence with canonical JSON and atomic writes.

Layout per scenario:
    scenarios/<id>/<id>.json     scenario metadata
    scenarios/<id>/text.json     text signals (inline data) + mentions
    scenarios/<id>/audio.json    audio signal metadata + mentions
    scenarios/<id>/image.json    image signal metadata + mentions
    scenarios/<id>/rdf.json      rdf signals (capsules) + mentions
    scenarios/<id>/audio/        media files <signal-id>.wav
    scenarios/<id>/image/        media files <signal-id>.png
"""

import json
import os
import shutil
from pathlib import Path

from combus.clock import SystemClock
from combus.ids import IdGenerator
from combus.emissor.model import (
    ANNOTATION_VOCABULARY,
    MODALITIES,
    BoundingBox,
    Mention,
    Scenario,
    Signal,
    TemporalRuler,
    TemporalSegment,
    TextIndex,
)

CHECKPOINT_EVERY = 10


class StorageError(Exception):
    pass


class StorageUnavailable(StorageError):
    pass


class UnknownSignal(StorageError):
    pass


class SegmentOutOfBounds(StorageError):
    pass


class ScenarioClosed(StorageError):
    pass


class CorruptFile(StorageError):
    pass


class ValidationFailure(StorageError):
    def __init__(self, violations):
        super().__init__(f"{len(violations)} violations")
        self.violations = violations


def canonical_dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def write_atomic(path: Path, data: bytes) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_bytes(data)
    os.replace(tmp, path)


class ScenarioStore:
    def __init__(self, root: str | os.PathLike, clock=None, ids: IdGenerator | None = None):
        self.root = Path(root)
        self.clock = clock or SystemClock()
        self.ids = ids or IdGenerator()
        self._dirty: dict[str, int] = {}

    # -- lifecycle -------------------------------------------------------
    def scenario_dir(self, scenario_id: str) -> Path:
        return self.root / "scenarios" / scenario_id

    def start_scenario(self, agent: str, speaker: str = "unknown",
                       context_id: str = "") -> Scenario:
        now = self.clock.timestamp()
        scenario_id = f"scenario_{now}_{self.ids.new_id()[-8:]}"
        scenario = Scenario(
            id=scenario_id,
            ruler=TemporalRuler(scenario_id, now, None),
            agent=agent,
            speaker=speaker,
            context_id=context_id,
        )
        directory = self.scenario_dir(scenario_id)
        try:
            (directory / "audio").mkdir(parents=True)
            (directory / "image").mkdir(exist_ok=True)
        except OSError as e:
            raise StorageUnavailable(str(e)) from e
        self._flush(scenario)
        return scenario

    def add_signal(self, scenario: Scenario, signal: Signal,
                   media: bytes | None = None) -> None:
        if scenario.ruler.closed:
            raise ScenarioClosed(scenario.id)
        if signal.modality not in MODALITIES:
            raise StorageError(f"unknown modality {signal.modality!r}")
        existing = scenario.find_signal(signal.id)
        if existing is not None:
            return  # idempotent on identical id
        signal.time.container_id = scenario.id
        if media is not None:
            ext = "wav" if signal.modality == "audio" else "png"
            rel = f"{signal.modality}/{signal.id}.{ext}"
            path = self.scenario_dir(scenario.id) / rel
            path.parent.mkdir(exist_ok=True)
            write_atomic(path, media)
            signal.file = rel
        scenario.signals[signal.modality].append(signal)
        self._mutated(scenario)

    def add_mention(self, scenario: Scenario, signal_id: str, mention: Mention) -> None:
        if scenario.ruler.closed:
            raise ScenarioClosed(scenario.id)
        signal = scenario.find_signal(signal_id)
        if signal is None:
            raise UnknownSignal(signal_id)
        if any(m.id == mention.id for m in signal.mentions):
            return  # idempotent on identical id
        for segment in mention.segments:
            owner = scenario.find_signal(segment.signal_id)
            if owner is None:
                raise UnknownSignal(segment.signal_id)
            problem = check_segment(segment, owner)
            if problem:
                raise SegmentOutOfBounds(problem)
        signal.mentions.append(mention)
        self._mutated(scenario)

    def finish_scenario(self, scenario: Scenario) -> None:
        if not scenario.ruler.closed:
            end = self.clock.timestamp()
            end = max(end, scenario.ruler.start_ms)
            for signal in scenario.all_signals():
                if signal.time.end_ms is not None:
                    end = max(end, signal.time.end_ms)
            scenario.ruler.end_ms = end
        self._flush(scenario)

    def delete_scenario(self, scenario_id: str) -> list:
        directory = self.scenario_dir(scenario_id)
        if not directory.exists():
            return []
        removed = sorted(str(p.relative_to(directory)) for p in directory.rglob("*"))
        try:
            shutil.rmtree(directory)
        except OSError as e:
            raise StorageUnavailable(str(e)) from e
        self._dirty.pop(scenario_id, None)
        return removed

    # -- persistence -----------------------------------------------------
    def _mutated(self, scenario: Scenario) -> None:
        count = self._dirty.get(scenario.id, 0) + 1
        if count >= CHECKPOINT_EVERY:
            self._flush(scenario)
        else:
            self._dirty[scenario.id] = count

    def checkpoint(self, scenario: Scenario) -> None:
        self._flush(scenario)

    def _flush(self, scenario: Scenario) -> None:
        directory = self.scenario_dir(scenario.id)
        directory.mkdir(parents=True, exist_ok=True)
        write_atomic(directory / f"{scenario.id}.json",
                     canonical_dumps(scenario.meta_dict()).encode("utf-8"))
        for modality in MODALITIES:
            body = [s.to_dict() for s in scenario.signals[modality]]
            write_atomic(directory / f"{modality}.json",
                         canonical_dumps(body).encode("utf-8"))
        self._dirty[scenario.id] = 0

    def load_scenario(self, scenario_id_or_dir) -> Scenario:
        directory = Path(scenario_id_or_dir)
        if not directory.exists():
            directory = self.scenario_dir(str(scenario_id_or_dir))
        if not directory.is_dir():
            raise StorageUnavailable(f"no scenario directory at {directory}")
        scenario_id = directory.name
        meta = _read_json(directory / f"{scenario_id}.json")
        scenario = Scenario.from_meta(meta)
        for modality in MODALITIES:
            path = directory / f"{modality}.json"
            if path.exists():
                scenario.signals[modality] = [Signal.from_dict(d) for d in _read_json(path)]
        return scenario

    def list_scenarios(self) -> list:
        base = self.root / "scenarios"
        if not base.is_dir():
            return []
        return sorted(p.name for p in base.iterdir() if p.is_dir())

    # -- validation ------------------------------------------------------
    def validate_scenario(self, scenario_id_or_dir) -> list:
        """Full invariant and cross-file referential-integrity check.

        Returns a list of machine-readable violations: dicts with "code"
        and "detail" keys. Empty list means the scenario is valid.
        """
        directory = Path(scenario_id_or_dir)
        if not directory.exists():
            directory = self.scenario_dir(str(scenario_id_or_dir))
        try:
            scenario = self.load_scenario(directory)
        except CorruptFile as e:
            return [{"code": "corrupt-file", "detail": str(e)}]
        return validate(scenario, directory)


def _read_json(path: Path):
    try:
        return json.loads(path.read_text("utf-8"))
    except FileNotFoundError as e:
        raise CorruptFile(f"missing file: {path}") from e
    except json.JSONDecodeError as e:
        raise CorruptFile(f"{path}: {e}") from e


def check_segment(segment, owner: Signal) -> str | None:
    """Return a violation detail if segment does not fit its owning signal."""
    if isinstance(segment, TemporalSegment):
        if segment.start_ms > segment.end_ms:
            return f"temporal segment reversed in {owner.id}"
        if segment.start_ms < owner.time.start_ms or (
            owner.time.end_ms is not None and segment.end_ms > owner.time.end_ms
        ):
            return f"temporal segment outside signal {owner.id}"
    elif isinstance(segment, TextIndex):
        if segment.start_char >= segment.stop_char:
            return f"empty text segment in {owner.id}"
        length = len(owner.text or "")
        if segment.start_char < 0 or segment.stop_char > length:
            return f"text segment beyond length {length} in {owner.id}"
    elif isinstance(segment, BoundingBox):
        if segment.x0 >= segment.x1 or segment.y0 >= segment.y1:
            return f"degenerate bounding box in {owner.id}"
        if owner.dims:
            w, h = owner.dims
            if segment.x0 < 0 or segment.y0 < 0 or segment.x1 > w or segment.y1 > h:
                return f"bounding box outside {w}x{h} image {owner.id}"
    return None


def validate(scenario: Scenario, directory: Path | None = None) -> list:
    violations = []

    def flag(code, detail):
        violations.append({"code": code, "detail": detail})

    ruler = scenario.ruler
    if ruler.container_id != scenario.id:
        flag("ruler-container-mismatch", f"{ruler.container_id} != {scenario.id}")
    if ruler.closed and ruler.start_ms > ruler.end_ms:
        flag("ruler-reversed", f"{ruler.start_ms} > {ruler.end_ms}")

    by_id = {}
    mention_ids = set()
    for modality in MODALITIES:
        for signal in scenario.signals[modality]:
            if signal.modality != modality:
                flag("modality-mismatch", signal.id)
            by_id[signal.id] = signal

    for signal in scenario.all_signals():
        if not signal.source:
            flag("missing-source", signal.id)
        if signal.time.container_id != scenario.id:
            flag("signal-container-mismatch", signal.id)
        if ruler.closed and signal.time.end_ms is not None:
            if signal.time.start_ms < ruler.start_ms or signal.time.end_ms > ruler.end_ms:
                flag("signal-outside-scenario", signal.id)
        if signal.file and directory is not None:
            target = (directory / signal.file).resolve()
            if not str(target).startswith(str(directory.resolve())):
                flag("media-escapes-scenario", signal.id)
            elif not target.is_file():
                flag("missing-media", f"{signal.id}: {signal.file}")

        for mention in signal.mentions:
            if mention.id in mention_ids:
                flag("duplicate-mention-id", mention.id)
            mention_ids.add(mention.id)
            if not mention.segments:
                flag("empty-mention", f"{mention.id}: no segments")
            if not mention.annotations:
                flag("empty-mention", f"{mention.id}: no annotations")
            for segment in mention.segments:
                owner = by_id.get(segment.signal_id)
                if owner is None:
                    flag("dangling-segment", f"{mention.id} -> {segment.signal_id}")
                    continue
                problem = check_segment(segment, owner)
                if problem:
                    flag("segment-out-of-bounds", f"{mention.id}: {problem}")
            for annotation in mention.annotations:
                if annotation.type not in ANNOTATION_VOCABULARY:
                    flag("unknown-annotation-type", f"{mention.id}: {annotation.type}")
                if not annotation.source:
                    flag("missing-source", f"annotation in {mention.id}")

    return violations

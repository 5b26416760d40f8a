from combus.emissor.model import (
    Annotation,
    BoundingBox,
    Mention,
    Scenario,
    Signal,
    TemporalRuler,
    TemporalSegment,
    TextIndex,
    segment_from_dict,
)
from combus.emissor.store import (
    CorruptFile,
    ScenarioClosed,
    ScenarioStore,
    SegmentOutOfBounds,
    StorageError,
    StorageUnavailable,
    UnknownSignal,
    ValidationFailure,
)

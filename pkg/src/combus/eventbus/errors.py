class BusError(Exception):
    """Base class for event-bus errors."""


class InvalidTopic(BusError):
    pass


class PayloadSchemaViolation(BusError):
    pass


class BusStopped(BusError):
    pass


class DuplicateHandlerOnTopic(BusError):
    pass


class ReentrancyLimitExceeded(BusError):
    """Feedback loop exceeded the inline bus re-entrancy cap."""


class FrameTooLarge(BusError):
    pass


class MalformedFrame(BusError):
    pass


class UnknownPayloadTag(BusError):
    pass

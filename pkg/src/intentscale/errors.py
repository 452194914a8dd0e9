"""Exception types shared across the package."""


class IntentScaleError(Exception):
    """Base class for all package-specific errors."""


class NonMonotonicTimestampError(IntentScaleError, ValueError):
    """A sample's timestamp is not strictly greater than the last stored one."""


class InsufficientDataError(IntentScaleError, ValueError):
    """Too few samples to perform the requested computation."""


class DegenerateDataError(IntentScaleError, ValueError):
    """All training samples are identical; no cluster structure exists."""


class AmbiguousLabelError(IntentScaleError, ValueError):
    """Cluster centroids coincide, so coarse/fine labels cannot be assigned."""


class ParamRangeError(IntentScaleError, ValueError):
    """A normalized parameter component lies outside [0, 1]."""


class ParamConstraintError(IntentScaleError, ValueError):
    """Denormalized parameters violate a controller constraint."""


class ProtocolError(IntentScaleError, ValueError):
    """Base class for wire-protocol encode/decode failures."""


class MalformedFrameError(ProtocolError):
    """A frame is not a valid JSON object."""


class UnknownMessageTypeError(ProtocolError):
    """A frame carries a type the protocol does not define."""


class SchemaError(ProtocolError):
    """A frame is missing a field or carries a field of the wrong shape."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


class LogSchemaError(IntentScaleError, ValueError):
    """A session-log line violates the record schema."""

    def __init__(self, line: int, field: str, message: str):
        super().__init__(f"line {line}, field {field!r}: {message}")
        self.line = line
        self.field = field


class SnapshotError(IntentScaleError, ValueError):
    """A model snapshot file is unreadable or structurally invalid."""


class SnapshotVersionError(SnapshotError):
    """A model snapshot was written with an unsupported format version."""

"""Error hierarchy shared by all traphub modules.

Every error carries a stable ``code`` (used verbatim in API error bodies)
and, where it makes sense, the offending ``field``.
"""

from __future__ import annotations


class TraphubError(Exception):
    """Base class; ``code`` is the wire-level error identifier."""

    code = "error"

    def __init__(self, message: str, field: str | None = None):
        super().__init__(message)
        self.message = message
        self.field = field

    def to_document(self) -> dict:
        return {"error": self.code, "field": self.field, "message": self.message}


# -- validation / ingest ----------------------------------------------------

class MissingField(TraphubError):
    code = "missing_field"


class OutOfRange(TraphubError):
    code = "out_of_range"


class MalformedTimestamp(TraphubError):
    code = "malformed_timestamp"


class MissingHeader(TraphubError):
    code = "missing_header"


class GrammarMismatch(TraphubError):
    code = "grammar_mismatch"


class InvalidDate(TraphubError):
    code = "invalid_date"


class InconsistentFields(TraphubError):
    code = "inconsistent_fields"


# -- store -------------------------------------------------------------------

class StorageFailure(TraphubError):
    code = "storage_failure"


class UnknownDevice(TraphubError):
    code = "unknown_device"


class UnknownRecording(TraphubError):
    code = "unknown_recording"


# -- analytics ---------------------------------------------------------------

class EmptyInput(TraphubError):
    code = "empty_input"


class TooFewGroups(TraphubError):
    code = "too_few_groups"


class DegenerateGroups(TraphubError):
    code = "degenerate_groups"


class ZeroVariance(TraphubError):
    code = "zero_variance"


class TooShort(TraphubError):
    code = "too_short"


class NoCommonDays(TraphubError):
    code = "no_common_days"


class NoQualifyingWeeks(TraphubError):
    code = "no_qualifying_weeks"


class InsufficientData(TraphubError):
    code = "insufficient_data"

    def __init__(self, message: str, hour: int | None = None):
        super().__init__(message, field="hour")
        self.hour = hour


# -- dsp ----------------------------------------------------------------------

class UnsupportedEncoding(TraphubError):
    code = "unsupported_encoding"


class CorruptHeader(TraphubError):
    code = "corrupt_header"


class BadParameter(TraphubError):
    """Malformed query/CLI parameter (service layer)."""

    code = "bad_parameter"

"""Exception hierarchy shared across the harness.

Data errors map to CLI exit code 1, usage/IO errors to 2, backend errors to 3.
"""
from __future__ import annotations


class DataError(Exception):
    """A problem record, split file, or manifest violated the dataset contract."""


class MalformedRecordError(DataError):
    """JSONL line is not a well-formed object or is missing a required field."""


class MissingBlankError(DataError):
    """Sentence contains no valid blank marker."""


class MultipleBlanksError(DataError):
    """Sentence contains more than one underscore; decomposition is undefined."""


class InvalidAnswerError(DataError):
    """Gold answer label is outside the accepted encoding."""


class InvalidOptionsError(DataError):
    """Options are empty or not distinct."""


class MissingAnswerError(DataError):
    """Operation requires a gold answer that the problem does not carry."""


class CountMismatchError(DataError):
    """Split file item count differs from the manifest's expected size."""


class ManifestError(DataError):
    """Dataset manifest is malformed or references an unknown split label."""


class BackendError(Exception):
    """Base class for model-backend failures."""


class TransportError(BackendError):
    """Connection-level failure that persisted through all retry attempts."""


class BackendTimeoutError(BackendError):
    """Request exceeded the configured timeout on every attempt."""


class MalformedResponseError(BackendError):
    """Service reply could not be interpreted under the wire protocol."""


class ScriptMissError(BackendError):
    """Scripted backend received a request its script does not cover."""

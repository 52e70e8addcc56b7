"""Exception types shared across the engine.

Every error raised by the library is a subclass of DiscovidError so callers
(CLI, HTTP service) can map failures to exit codes / status codes in one place.
"""


class DiscovidError(Exception):
    """Base class for all engine errors."""


# --- audio ---------------------------------------------------------------

class MalformedWav(DiscovidError):
    """Input bytes are not a well-formed RIFF/PCM WAV file."""


class UnsupportedEncoding(DiscovidError):
    """WAV uses a codec or layout the decoder does not handle."""


class ClipTooShort(DiscovidError):
    """Clip has fewer samples than one analysis window."""


class IntervalOutOfRange(DiscovidError):
    """Requested time range falls outside the clip."""


# --- timeline ------------------------------------------------------------

class Overlap(DiscovidError):
    """Interval would intersect an existing one (touching endpoints are fine)."""


class OutOfRange(DiscovidError):
    """Interval bounds are inverted or outside the audio duration."""


class UnknownInterval(DiscovidError):
    """No interval with that id in the project."""


class InvalidSpec(DiscovidError):
    """Image spec violates its invariants (empty prompt, bad dimensions...)."""


class MalformedProject(DiscovidError):
    """Project file fails structural validation."""


class SchemaVersionMismatch(DiscovidError):
    """Project file carries a version this build does not read."""


# --- generation ----------------------------------------------------------

class MissingSeed(DiscovidError):
    """Operation requires a concrete seed but the image spec has none."""


class BackendUnavailable(DiscovidError):
    """Backend endpoint could not be reached."""


class GenerationFailed(DiscovidError):
    """Backend reached but it reported an error."""


class UnparseableResponse(DiscovidError):
    """LLM reply did not contain enough suggestions."""


# --- rendering -----------------------------------------------------------

class MissingInterval(DiscovidError):
    """Stitch requires a rendered result for every interval."""


class SizeMismatch(DiscovidError):
    """Frames with differing dimensions cannot be stitched."""


class IoFailure(DiscovidError):
    """Filesystem write failed."""


class EncoderMissing(DiscovidError):
    """External video encoder binary not found on PATH."""


class EncoderFailed(DiscovidError):
    """External encoder exited nonzero; stderr is in the message."""


# --- analysis / service --------------------------------------------------

class EmptyCorpus(DiscovidError):
    """Classification report needs at least one prompt pair."""


class NoAudio(DiscovidError):
    """Session has no audio loaded yet."""

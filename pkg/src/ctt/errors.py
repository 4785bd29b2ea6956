"""Exception types shared across the pipeline."""


class CttError(Exception):
    """Base class for all toolkit errors."""


# ── ingest ──────────────────────────────────────────────────────────

class MalformedTimestamp(CttError):
    """A subtitle cue time could not be parsed."""


class EmptyInput(CttError):
    """An input file contained zero usable records."""


class HistogramLengthMismatch(CttError):
    """A frame histogram does not match the declared bin count."""


class NegativeMass(CttError):
    """A frame histogram has negative entries or is not normalizable.

    Covers both strictly negative bins and totals outside the 1e-6
    renormalization tolerance.
    """


class InvalidSignature(CttError):
    """A frame signature row has a non-mass field problem (time order, range)."""


class DuplicateBoxId(CttError):
    """Two OCR text boxes in one file share a box_id."""


class OutOfBounds(CttError):
    """An OCR text box lies outside the declared frame bounds."""


class StyleCoverageError(CttError):
    """Style spans overlap or leave gaps over the video duration."""


# ── keyphrase / segmentation ────────────────────────────────────────

class EmptyStream(CttError):
    """An operation requiring tokens received an empty stream."""


# ── slidestruct ─────────────────────────────────────────────────────

class LengthMismatch(CttError):
    """Two histograms of different length were compared."""


class UnnormalizedInput(CttError):
    """A histogram passed to a distance did not sum to 1."""


class TooFewFrames(CttError):
    """Shot detection needs at least two frame signatures."""


# ── mapstore / appserver ────────────────────────────────────────────

class ParseError(CttError):
    """Canonical JSON did not match the schema; message carries the path."""


class InvalidOp(CttError):
    """An edit operation failed its preconditions; the map is unchanged."""


class ConflictingRevision(CttError):
    """An edit carried a stale expected revision."""


class UnknownVideo(CttError):
    """The store has no entry for the requested video id."""


# ── conceptgraph provider ───────────────────────────────────────────

class ProviderTimeout(CttError):
    """The external refinement provider did not answer in time."""


class SchemaViolation(CttError):
    """The provider returned JSON outside the agreed fragment schema."""

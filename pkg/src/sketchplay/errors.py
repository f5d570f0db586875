"""Exception and warning types shared across the package."""


class SketchplayError(Exception):
    """Base class for all package-specific errors."""


class ValidationError(SketchplayError):
    """A court object violates a structural invariant (bounds, shape, flags)."""


class EncodingError(SketchplayError):
    """A play cannot be encoded to a tensor (e.g. defense missing)."""


class DecodingError(SketchplayError):
    """A tensor cannot be decoded back to a play (e.g. non-finite entries)."""


class IngestError(SketchplayError):
    """Raw tracking input cannot be ingested (bad fps, malformed records)."""


class SegmentationError(SketchplayError):
    """An event log is inconsistent with the play it describes."""


class SketchError(SketchplayError):
    """A sketch violates the carrier chain or phase structure."""


class ConfigError(SketchplayError):
    """A configuration value is out of range or unknown."""


class ShapeError(SketchplayError):
    """A tensor has the wrong shape for the requested operation."""


class SkipPlayWarning(UserWarning):
    """Raised (as a warning) when ingest drops a play, e.g. no shot event."""

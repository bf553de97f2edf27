class SSKGError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(SSKGError):
    """Input data fails a structural requirement."""


class InternalInconsistency(SSKGError):
    """Two independently computed answers disagree; indicates a bug."""

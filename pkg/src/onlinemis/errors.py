"""Exception types raised by the library.

All of them derive from ``ValueError`` so callers that only care about
"bad input" can catch that.
"""


class OnlineMISError(ValueError):
    pass


class InstanceTooLarge(OnlineMISError):
    pass


class PreconditionViolated(OnlineMISError):
    pass


class InvalidParameters(OnlineMISError):
    pass


class SimilarityViolated(OnlineMISError):
    pass


class DriftBoundViolated(OnlineMISError):
    pass


class KindMismatch(OnlineMISError):
    pass


class SizeOverflow(OnlineMISError):
    pass


class OracleTooSlow(OnlineMISError):
    pass


class ConfigInvalid(OnlineMISError):
    pass

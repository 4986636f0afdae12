"""Exception hierarchy shared by every module of the package."""


class AnosovError(Exception):
    """Base class for all errors raised by anosov_lie."""


class InvalidInputError(AnosovError, ValueError):
    """Malformed input: zero polynomial, wrong sizes, bad unit counts."""


class NotAUnitError(InvalidInputError):
    """Polynomial is not monic or its constant term is not +1 or -1."""


class NotIrreducibleError(InvalidInputError):
    """Polynomial factors over the rationals."""


class NotHyperbolicError(AnosovError):
    """Some required eigenvalue product lies on the unit circle."""


class NotNilpotentError(AnosovError):
    """Lower central series stabilizes before reaching zero."""


class PrecisionError(AnosovError):
    """Numeric stage failed to reach the requested accuracy."""


class ConstructionError(AnosovError):
    """An exact post-construction check failed (indicates a bug)."""


class ScopeExceededError(AnosovError):
    """Input is larger than the exhaustive-search scope."""


class CertificateFormatError(InvalidInputError):
    """Certificate file could not be parsed."""

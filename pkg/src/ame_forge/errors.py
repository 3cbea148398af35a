"""Exception hierarchy.

Every domain error derives from :class:`AmeForgeError` and from
``ValueError``, so callers that only care about bad input can catch the
builtin.
"""


class AmeForgeError(ValueError):
    """Base class for all domain errors raised by this package."""

    #: short machine-readable tag used in CLI error payloads
    kind = "error"


class InvalidSubsetError(AmeForgeError):
    kind = "invalid-subset"


class InvalidPairingError(AmeForgeError):
    kind = "invalid-pairing"


class ShapeMismatchError(AmeForgeError):
    kind = "shape-mismatch"


class PartyCountError(ShapeMismatchError):
    kind = "party-count"


class DimensionError(AmeForgeError):
    kind = "dimension"


class NonexistenceError(DimensionError):
    """No state with the requested property exists in the requested system."""

    kind = "nonexistence"


class ParameterError(AmeForgeError):
    kind = "parameter"


class PreconditionError(AmeForgeError):
    kind = "precondition"


class NormalizationError(PreconditionError):
    kind = "normalization"


class NullEventError(AmeForgeError):
    kind = "null-event"


class NotApplicableError(AmeForgeError):
    kind = "not-applicable"


class StructureError(AmeForgeError):
    kind = "structure"

"""Exception taxonomy shared across the package.

Everything raised on purpose derives from MakpabeError so callers can
catch one base class at the CLI boundary.
"""


class MakpabeError(Exception):
    pass


# -- group / context construction ------------------------------------------

class GroupParameterError(MakpabeError):
    pass


class NonPrimeError(GroupParameterError):
    def __init__(self, p):
        super().__init__(f"modulus is not prime: {p}")
        self.p = p


class UnknownCurveError(GroupParameterError):
    def __init__(self, curve_id):
        super().__init__(f"unknown curve id: {curve_id!r}")
        self.curve_id = curve_id


class RoleMismatchError(MakpabeError):
    pass


class ContextMismatchError(MakpabeError):
    pass


class AuditUnavailableError(MakpabeError):
    """Raised when a debug-only observer (discrete_log) is asked of a curve."""


# -- policy language --------------------------------------------------------

class PolicyError(MakpabeError):
    pass


class PolicySyntaxError(PolicyError):
    def __init__(self, message, offset):
        super().__init__(f"{message} (offset {offset})")
        self.offset = offset


class UnknownAttributeError(PolicyError):
    def __init__(self, name, offset=None):
        where = "" if offset is None else f" (offset {offset})"
        super().__init__(f"unknown attribute {name!r}{where}")
        self.name = name
        self.offset = offset


class ThresholdRangeError(PolicyError):
    def __init__(self, t, n, offset=None):
        where = "" if offset is None else f" (offset {offset})"
        super().__init__(f"threshold {t} out of range for {n} children{where}")
        self.t = t
        self.n = n
        self.offset = offset


class UniverseError(MakpabeError):
    pass


# -- secret sharing ---------------------------------------------------------

class LsssError(MakpabeError):
    pass


class UnauthorizedSetError(LsssError):
    """The attribute set cannot reconstruct the secret."""


class AuthorizedSetError(LsssError):
    """The attribute set can reconstruct, so no blocking vector exists."""


# -- scheme -----------------------------------------------------------------

class SchemeError(MakpabeError):
    pass


class MissingAuthorityKeyError(SchemeError):
    def __init__(self, authority_id):
        super().__init__(f"no user key supplied for authority {authority_id!r}")
        self.authority_id = authority_id


class NotAuthorizedError(SchemeError):
    def __init__(self, authority_id):
        super().__init__(
            f"key policy for authority {authority_id!r} is not satisfied "
            f"by the ciphertext attribute set")
        self.authority_id = authority_id


# -- serialization / envelope ------------------------------------------------

class SerializationError(MakpabeError):
    pass


class UnknownVersionError(SerializationError):
    pass


class CorruptFieldError(SerializationError):
    pass


class BackendMismatchError(SerializationError):
    pass


class AuthenticationFailedError(MakpabeError):
    """Envelope failed to open: wrong keys, unauthorized, or tampered."""


class InsecureBackendError(MakpabeError):
    """Production-marked operation attempted on the debug backend."""


# -- game harness -------------------------------------------------------------

class GameError(MakpabeError):
    pass


class HonestAuthorityRefusalError(GameError):
    """The honest authority refuses keys whose policy the target set satisfies."""


class SimulationAuditError(GameError):
    """An algebraic identity the reduction promises did not hold."""

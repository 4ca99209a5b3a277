"""Exception hierarchy for the maabe package.

Every error raised by the library derives from MaabeError so callers can
catch broadly; the CLI maps the classes below to distinct exit codes.
"""


class MaabeError(Exception):
    """Base class for all maabe errors."""


class ConfigError(MaabeError):
    """Group elements or parameters from mismatched backends were combined."""


class UnsupportedBackendOp(MaabeError):
    """An oracle-only operation (discrete log) was invoked on the curve backend."""


class TreeStructureError(MaabeError, ValueError):
    """Malformed access tree: bad threshold, empty gate, duplicate leaves."""


class UnknownAttributeError(MaabeError, ValueError):
    """An attribute index outside the registered universe was referenced."""


class JurisdictionError(MaabeError):
    """An authority was asked to issue shares for another authority's attribute."""


class ProofRejected(MaabeError):
    """A proof-of-knowledge transcript failed verification; issuance refused."""


class ProtocolError(MaabeError):
    """Key-issuance messages are inconsistent (missing authority share, wrong id)."""


class IssuanceError(MaabeError):
    """A finalized key fails its own verification equation (bad CA or transport)."""


class PolicyNotSatisfied(MaabeError):
    """The ciphertext's attribute set does not satisfy the key's access trees."""


class InvalidKeyError(MaabeError):
    """A decryption key is structurally broken or fails well-formedness."""


class UntraceableKeyError(MaabeError):
    """No registered identity matches the leaked key."""


class TableIntegrityError(MaabeError):
    """The trace table is inconsistent (duplicate rows, ambiguous trace)."""


class StorageError(MaabeError):
    """Persisting or loading the trace table failed."""


class TamperingError(MaabeError):
    """Authenticated decryption of a hybrid payload failed."""


class EnvelopeError(MaabeError):
    """Base class for serialization envelope failures."""


class CorruptionError(EnvelopeError):
    """Envelope checksum mismatch or truncated payload."""


class VersionError(EnvelopeError):
    """Envelope carries an unknown format version."""


class BackendMismatch(EnvelopeError):
    """Envelope was produced under a different group backend than requested."""


class ValidationError(EnvelopeError):
    """A decoded element is non-canonical or not on the group."""


class GameAbort(MaabeError):
    """The security-game adversary violated the query restriction."""

"""Abstract symmetric bilinear group: e: G1 x G1 -> G2 over prime order p.

Two backends implement this contract:

* ``toy_oracle`` -- elements carry their discrete logarithms, so every
  pairing identity can be checked by exact integer arithmetic mod p.
* ``production_curve`` -- a supersingular curve with a distortion map,
  where the pairing is symmetric by construction.

Scalars are plain Python ints in [0, p).  Elements are immutable and safe
to share across threads.  Group operations report into per-scope
OpCounters (one counter per logical operation under measurement; scopes
must not be shared between concurrently measured operations).
"""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass, field

from ..errors import ConfigError, UnsupportedBackendOp

ELEMENT_ENCODING_VERSION = 1

BACKEND_TOY = "toy_oracle"
BACKEND_CURVE = "production_curve"

_BACKEND_BYTES = {BACKEND_TOY: 0, BACKEND_CURVE: 1}
_BACKEND_NAMES = {v: k for k, v in _BACKEND_BYTES.items()}


def backend_byte(backend_id: str) -> int:
    return _BACKEND_BYTES[backend_id]


def backend_name(byte: int) -> str:
    try:
        return _BACKEND_NAMES[byte]
    except KeyError:
        raise ConfigError(f"unknown backend byte {byte}") from None


@dataclass(frozen=True)
class GroupDescriptor:
    """Identifies a concrete group instantiation: order p, backend, generator tag."""

    prime_order: int
    backend_id: str

    def __post_init__(self):
        if self.backend_id not in _BACKEND_BYTES:
            raise ConfigError(f"unknown backend {self.backend_id!r}")


@dataclass
class OpCounters:
    """Per-scope tally of abstract group operations."""

    source_exponentiations: int = 0
    target_exponentiations: int = 0
    pairings: int = 0
    multiplications: int = 0

    def total_exponentiations(self) -> int:
        return self.source_exponentiations + self.target_exponentiations

    def as_dict(self) -> dict:
        return {
            "source_exponentiations": self.source_exponentiations,
            "target_exponentiations": self.target_exponentiations,
            "pairings": self.pairings,
            "multiplications": self.multiplications,
        }


class SourceElement:
    """Element of G1.  Subclasses implement the actual arithmetic."""

    __slots__ = ("group",)

    def __init__(self, group: "Group"):
        self.group = group

    def _require_same(self, other, kind):
        if not isinstance(other, kind):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if other.group.descriptor != self.group.descriptor:
            raise ConfigError("elements belong to different group instantiations")

    def __mul__(self, other: "SourceElement") -> "SourceElement":
        self._require_same(other, SourceElement)
        self.group._count("multiplications")
        return self._mul(other)

    def __truediv__(self, other: "SourceElement") -> "SourceElement":
        self._require_same(other, SourceElement)
        self.group._count("multiplications")
        return self._mul(other.inverse())

    def __pow__(self, exponent: int) -> "SourceElement":
        self.group._count("source_exponentiations")
        return self._pow(exponent % self.group.order)

    def inverse(self) -> "SourceElement":
        raise NotImplementedError

    def is_identity(self) -> bool:
        raise NotImplementedError

    def to_bytes(self) -> bytes:
        raise NotImplementedError

    def _mul(self, other):
        raise NotImplementedError

    def _pow(self, exponent):
        raise NotImplementedError


class TargetElement:
    """Element of G2, the pairing codomain."""

    __slots__ = ("group",)

    def __init__(self, group: "Group"):
        self.group = group

    def _require_same(self, other):
        if not isinstance(other, TargetElement):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if other.group.descriptor != self.group.descriptor:
            raise ConfigError("elements belong to different group instantiations")

    def __mul__(self, other: "TargetElement") -> "TargetElement":
        self._require_same(other)
        self.group._count("multiplications")
        return self._mul(other)

    def __truediv__(self, other: "TargetElement") -> "TargetElement":
        self._require_same(other)
        self.group._count("multiplications")
        return self._mul(other.inverse())

    def __pow__(self, exponent: int) -> "TargetElement":
        self.group._count("target_exponentiations")
        return self._pow(exponent % self.group.order)

    def inverse(self) -> "TargetElement":
        raise NotImplementedError

    def is_identity(self) -> bool:
        raise NotImplementedError

    def to_bytes(self) -> bytes:
        raise NotImplementedError

    def _mul(self, other):
        raise NotImplementedError

    def _pow(self, exponent):
        raise NotImplementedError


class Group:
    """Shared behaviour of both backends: scalars, counters, encodings."""

    descriptor: GroupDescriptor

    def __init__(self, descriptor: GroupDescriptor):
        self.descriptor = descriptor
        self._counter_scopes: list[OpCounters] = []

    # -- scalars ---------------------------------------------------------

    @property
    def order(self) -> int:
        return self.descriptor.prime_order

    def scalar(self, value: int) -> int:
        return value % self.order

    def scalar_inv(self, value: int) -> int:
        return pow(value, -1, self.order)

    def random_scalar(self, rng) -> int:
        """Uniform over Z_p* (never zero); deterministic under a seeded rng."""
        return rng.randrange(1, self.order)

    def random_source(self, rng) -> SourceElement:
        """Uniform over the non-identity elements of G1."""
        return self.generator ** self.random_scalar(rng)

    def random_target(self, rng) -> TargetElement:
        """Uniform over the non-identity elements of G2."""
        return self.target_generator ** self.random_scalar(rng)

    # -- group surface implemented by backends ----------------------------

    @property
    def generator(self) -> SourceElement:
        raise NotImplementedError

    @property
    def identity_source(self) -> SourceElement:
        raise NotImplementedError

    @property
    def identity_target(self) -> TargetElement:
        raise NotImplementedError

    @property
    def target_generator(self) -> TargetElement:
        """pair(g, g); generates G2 by non-degeneracy."""
        raise NotImplementedError

    def pair(self, a: SourceElement, b: SourceElement) -> TargetElement:
        if not isinstance(a, SourceElement) or not isinstance(b, SourceElement):
            raise TypeError("pair() expects two source elements")
        if a.group.descriptor != self.descriptor or b.group.descriptor != self.descriptor:
            raise ConfigError("pairing arguments from a different group instantiation")
        self._count("pairings")
        return self._pair(a, b)

    def _pair(self, a, b):
        raise NotImplementedError

    def discrete_log(self, element) -> int:
        """Toy oracle only: the exponent of an element relative to g."""
        raise UnsupportedBackendOp(f"discrete_log unavailable on {self.descriptor.backend_id}")

    # -- encodings ---------------------------------------------------------

    @property
    def scalar_width(self) -> int:
        return (self.order.bit_length() + 7) // 8

    def scalar_to_bytes(self, value: int) -> bytes:
        if not 0 <= value < self.order:
            raise ValueError("scalar out of range")
        return value.to_bytes(self.scalar_width, "big")

    def scalar_from_bytes(self, data: bytes) -> int:
        from ..errors import ValidationError

        if len(data) != self.scalar_width:
            raise ValidationError("scalar encoding has wrong width")
        value = int.from_bytes(data, "big")
        if value >= self.order:
            raise ValidationError("non-canonical scalar encoding")
        return value

    def source_from_bytes(self, data: bytes) -> SourceElement:
        raise NotImplementedError

    def target_from_bytes(self, data: bytes) -> TargetElement:
        raise NotImplementedError

    def _check_envelope_prefix(self, data: bytes, expected_len: int) -> bytes:
        from ..errors import BackendMismatch, ValidationError, VersionError

        if len(data) != expected_len:
            raise ValidationError("element encoding has wrong width")
        if data[0] != ELEMENT_ENCODING_VERSION:
            raise VersionError(f"unknown element encoding version {data[0]}")
        if data[1] != backend_byte(self.descriptor.backend_id):
            raise BackendMismatch(
                f"element encoded for backend {backend_name(data[1])!r}, "
                f"group is {self.descriptor.backend_id!r}"
            )
        return data[2:]

    # -- operation counting -------------------------------------------------

    def _count(self, kind: str, n: int = 1):
        for counters in self._counter_scopes:
            setattr(counters, kind, getattr(counters, kind) + n)

    @contextmanager
    def count_ops(self):
        """Scope in which abstract group operations are tallied."""
        counters = OpCounters()
        self._counter_scopes.append(counters)
        try:
            yield counters
        finally:
            self._counter_scopes.remove(counters)

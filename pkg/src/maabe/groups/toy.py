"""Discrete-log-instrumented oracle group for algebraic verification.

Elements store their exponent relative to the generator, so

    pair(g^a, g^b) = gt^(a*b mod p)

and every pairing identity in the scheme becomes an exact integer check
via ``discrete_log``.  Intended for tests and the brute-force oracles;
it offers no security whatsoever.
"""

from __future__ import annotations

import gmpy2

from ..errors import ValidationError
from .base import (
    BACKEND_TOY,
    ELEMENT_ENCODING_VERSION,
    Group,
    GroupDescriptor,
    SourceElement,
    TargetElement,
    backend_byte,
)

# 2^61 - 1, the default modulus for property tests; unit tests use p = 101.
TOY_PRIME_61 = 2305843009213693951

_PAYLOAD_WIDTH = 8


class ToySource(SourceElement):
    __slots__ = ("log",)

    def __init__(self, group, log: int):
        super().__init__(group)
        self.log = log

    def _mul(self, other):
        return ToySource(self.group, (self.log + other.log) % self.group.order)

    def _pow(self, exponent):
        return ToySource(self.group, self.log * exponent % self.group.order)

    def inverse(self):
        return ToySource(self.group, -self.log % self.group.order)

    def is_identity(self):
        return self.log == 0

    def __eq__(self, other):
        return (
            isinstance(other, ToySource)
            and other.group.descriptor == self.group.descriptor
            and other.log == self.log
        )

    def __hash__(self):
        return hash(("toy-g1", self.group.order, self.log))

    def __repr__(self):
        return f"ToySource(g^{self.log})"

    def to_bytes(self):
        return bytes([ELEMENT_ENCODING_VERSION, backend_byte(BACKEND_TOY)]) + self.log.to_bytes(
            _PAYLOAD_WIDTH, "big"
        )


class ToyTarget(TargetElement):
    __slots__ = ("log",)

    def __init__(self, group, log: int):
        super().__init__(group)
        self.log = log

    def _mul(self, other):
        return ToyTarget(self.group, (self.log + other.log) % self.group.order)

    def _pow(self, exponent):
        return ToyTarget(self.group, self.log * exponent % self.group.order)

    def inverse(self):
        return ToyTarget(self.group, -self.log % self.group.order)

    def is_identity(self):
        return self.log == 0

    def __eq__(self, other):
        return (
            isinstance(other, ToyTarget)
            and other.group.descriptor == self.group.descriptor
            and other.log == self.log
        )

    def __hash__(self):
        return hash(("toy-g2", self.group.order, self.log))

    def __repr__(self):
        return f"ToyTarget(gt^{self.log})"

    def to_bytes(self):
        return bytes([ELEMENT_ENCODING_VERSION, backend_byte(BACKEND_TOY)]) + self.log.to_bytes(
            _PAYLOAD_WIDTH, "big"
        )


class ToyGroup(Group):
    """Oracle backend over a small prime p (default unit-test prime is 101)."""

    def __init__(self, prime_order: int = 101):
        if prime_order < 3 or prime_order.bit_length() > 8 * _PAYLOAD_WIDTH:
            raise ValidationError("toy prime must fit the 8-byte exponent encoding")
        if not gmpy2.is_prime(prime_order, 30):
            raise ValidationError(f"{prime_order} is not prime")
        super().__init__(GroupDescriptor(prime_order=prime_order, backend_id=BACKEND_TOY))
        self._g = ToySource(self, 1)
        self._gt = ToyTarget(self, 1)

    @property
    def generator(self):
        return self._g

    @property
    def identity_source(self):
        return ToySource(self, 0)

    @property
    def identity_target(self):
        return ToyTarget(self, 0)

    @property
    def target_generator(self):
        return self._gt

    def _pair(self, a, b):
        return ToyTarget(self, a.log * b.log % self.order)

    def discrete_log(self, element) -> int:
        if isinstance(element, (ToySource, ToyTarget)):
            return element.log
        raise TypeError("discrete_log expects a toy group element")

    def source_from_bytes(self, data: bytes) -> ToySource:
        payload = self._check_envelope_prefix(data, 2 + _PAYLOAD_WIDTH)
        log = int.from_bytes(payload, "big")
        if log >= self.order:
            raise ValidationError("non-canonical toy element encoding")
        return ToySource(self, log)

    def target_from_bytes(self, data: bytes) -> ToyTarget:
        payload = self._check_envelope_prefix(data, 2 + _PAYLOAD_WIDTH)
        log = int.from_bytes(payload, "big")
        if log >= self.order:
            raise ValidationError("non-canonical toy element encoding")
        return ToyTarget(self, log)

    @property
    def source_width(self) -> int:
        return 2 + _PAYLOAD_WIDTH

    @property
    def target_width(self) -> int:
        return 2 + _PAYLOAD_WIDTH

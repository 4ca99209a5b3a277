"""Bilinear group backends: the discrete-log toy oracle and the production curve."""

from .base import (
    BACKEND_CURVE,
    BACKEND_TOY,
    Group,
    GroupDescriptor,
    OpCounters,
    SourceElement,
    TargetElement,
    backend_byte,
    backend_name,
)
from .curve import CurveGroup
from .toy import TOY_PRIME_61, ToyGroup

__all__ = [
    "BACKEND_CURVE",
    "BACKEND_TOY",
    "CurveGroup",
    "Group",
    "GroupDescriptor",
    "OpCounters",
    "SourceElement",
    "TargetElement",
    "TOY_PRIME_61",
    "ToyGroup",
    "backend_byte",
    "backend_name",
    "make_group",
]


def make_group(backend: str, toy_prime: int = 101) -> Group:
    """Factory keyed by backend name: 'toy' / 'curve' (long forms accepted)."""
    if backend in ("toy", BACKEND_TOY):
        return ToyGroup(toy_prime)
    if backend in ("curve", BACKEND_CURVE):
        return CurveGroup()
    raise ValueError(f"unknown backend {backend!r}")

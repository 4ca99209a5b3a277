"""Keyed and unkeyed hash-to-scalar maps and the hybrid-mode KDF.

All scalar derivations use HMAC-SHA256 (or plain SHA-256 for unkeyed
contexts) with counter-based rejection sampling into Z_p*, which avoids
modulo bias for any prime width.  Domain-separation contexts keep the
identity map, the CA's secret map V, the per-authority PRF and the
non-interactive proof challenge independent.
"""

from __future__ import annotations

import hashlib
import hmac

CTX_ID = b"maabe/id-to-scalar"
CTX_V = b"maabe/secret-map-v"
CTX_PRF = b"maabe/authority-prf"
CTX_CHALLENGE = b"maabe/pok-challenge"
CTX_KDF = b"maabe/hybrid-kdf"


def _rejection_sample(block: callable, p: int, allow_zero: bool) -> int:
    """Draw 32-byte blocks block(counter) until one reduces into range."""
    bits = p.bit_length()
    nbytes = (bits + 7) // 8
    excess = 8 * nbytes - bits
    counter = 0
    while True:
        digest = block(counter)
        candidate = int.from_bytes(digest[:nbytes], "big") >> excess
        counter += 1
        if candidate >= p:
            continue
        if candidate == 0 and not allow_zero:
            continue
        return candidate


def _length_prefixed(*parts: bytes) -> bytes:
    out = bytearray()
    for part in parts:
        out += len(part).to_bytes(4, "big")
        out += part
    return bytes(out)


def hash_to_scalar(context: bytes, data: bytes, p: int, allow_zero: bool = False) -> int:
    """SHA-256 based map into Z_p* (or Z_p when allow_zero)."""

    def block(counter: int) -> bytes:
        return hashlib.sha256(
            _length_prefixed(context, data, counter.to_bytes(4, "big"))
        ).digest()

    return _rejection_sample(block, p, allow_zero)


def keyed_scalar(key: bytes, context: bytes, data: bytes, p: int) -> int:
    """HMAC-SHA256 based map into Z_p*, keyed by a secret."""

    def block(counter: int) -> bytes:
        return hmac.new(
            key, _length_prefixed(context, data, counter.to_bytes(4, "big")), hashlib.sha256
        ).digest()

    return _rejection_sample(block, p, allow_zero=False)


def id_to_scalar(identity: str, p: int) -> int:
    """Canonical mapping of a UTF-8 identity onto Z_p* (the exponent in g^id)."""
    return hash_to_scalar(CTX_ID, identity.encode("utf-8"), p)


def derive_seal_key(encapsulated: bytes) -> bytes:
    """32-byte symmetric key from a target element's canonical encoding."""
    return hashlib.sha256(_length_prefixed(CTX_KDF, encapsulated)).digest()

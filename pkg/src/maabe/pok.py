"""Proof of knowledge of (s0, theta) for a commitment R = h^s0 * X^theta.

The two-base sigma identification protocol:

    prover:   k1, k2 <- Z_p,  t = h^k1 * X^k2          (commit)
    verifier: c <- Z_p                                   (challenge)
    prover:   z1 = k1 + c*s0,  z2 = k2 + c*theta        (respond)
    verifier: accept iff h^z1 * X^z2 == t * R^c

It is complete, specially sound (two accepting transcripts with equal
commitment and distinct challenges yield the witness) and witness
indistinguishable: with nonces uniform over all of Z_p the transcript
distribution is exactly the same for every representation of R.

A non-interactive mode hashes (commitment, R, context) into the
challenge for the offline CLI flow; the interactive mode is the
three-move original.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ProtocolError
from .groups import SourceElement
from .hashing import CTX_CHALLENGE, hash_to_scalar


@dataclass(frozen=True)
class PokTranscript:
    commitment: SourceElement
    challenge: int
    z1: int
    z2: int


class PokProverState:
    """Single-use nonce pair; consumed by pok_respond (reuse leaks the witness)."""

    __slots__ = ("k1", "k2", "_used")

    def __init__(self, k1: int, k2: int):
        self.k1 = k1
        self.k2 = k2
        self._used = False

    def consume(self) -> tuple[int, int]:
        if self._used:
            raise ProtocolError("prover state reused; nonces are single-use")
        self._used = True
        return self.k1, self.k2


def pok_commit(mpk, rng) -> tuple[PokProverState, SourceElement]:
    """Nonces are uniform over all of Z_p (including 0) so that transcript
    distributions are witness independent."""
    p = mpk.group.order
    k1 = rng.randrange(0, p)
    k2 = rng.randrange(0, p)
    return PokProverState(k1, k2), (mpk.h ** k1) * (mpk.X ** k2)


def pok_respond(state: PokProverState, witness: tuple[int, int], challenge: int, p: int):
    s0, theta = witness
    k1, k2 = state.consume()
    return (k1 + challenge * s0) % p, (k2 + challenge * theta) % p


def pok_verify(mpk, R: SourceElement, transcript: PokTranscript) -> bool:
    lhs = (mpk.h ** transcript.z1) * (mpk.X ** transcript.z2)
    rhs = transcript.commitment * (R ** transcript.challenge)
    return lhs == rhs


def derive_challenge(mpk, commitment: SourceElement, R: SourceElement, context: bytes) -> int:
    data = commitment.to_bytes() + R.to_bytes() + context
    return hash_to_scalar(CTX_CHALLENGE, data, mpk.group.order, allow_zero=True)


def prove_noninteractive(mpk, R, witness, rng, context: bytes = b"") -> PokTranscript:
    state, commitment = pok_commit(mpk, rng)
    challenge = derive_challenge(mpk, commitment, R, context)
    z1, z2 = pok_respond(state, witness, challenge, mpk.group.order)
    return PokTranscript(commitment, challenge, z1, z2)


def verify_noninteractive(mpk, R, transcript: PokTranscript, context: bytes = b"") -> bool:
    if transcript.challenge != derive_challenge(mpk, transcript.commitment, R, context):
        return False
    return pok_verify(mpk, R, transcript)


def extract_witness(t1: PokTranscript, t2: PokTranscript, p: int) -> tuple[int, int]:
    """Special soundness: recover (s0, theta) from two accepting transcripts
    sharing a commitment with distinct challenges."""
    if t1.commitment != t2.commitment:
        raise ProtocolError("transcripts must share the same commitment")
    dc = (t1.challenge - t2.challenge) % p
    if dc == 0:
        raise ProtocolError("challenges must differ for extraction")
    dc_inv = pow(dc, -1, p)
    s0 = (t1.z1 - t2.z1) * dc_inv % p
    theta = (t1.z2 - t2.z2) * dc_inv % p
    return s0, theta

"""Top-level protocol: setup, key request/finalization, encrypt, decrypt.

Parameter layout (all exponents mod the group order p):

    X = g^x   Y = g^y   g1 = g^y0   g2 = g^w1   g3 = g^w2   g4 = g2*g3
    Y1 = g3^y0          Y0 = e(g,g)^y0          E1 = e(g,g)^y1

Y1 is deliberately g3^y0 (not g^y0): decryption splits the blinding
factor e(g, g4)^(s*y0) into a g2-half recovered from d5 plus the
per-authority reconstructions, and a g3-half recovered from the
d1-quotient, which equals e(g^s, Y1) and therefore must be
e(g,g)^(s*w2*y0).  g1 = g^y0 lets the encryptor form the blinding as
e(g1, g4)^s from public data.  Y, Y0 and E1 are published for interface
completeness but no operation consumes them.

A finalized user key is

    d1 = (Y1 * h^(s0+s1))^(1/x) * (g^id * Z)^r     r = r' + r''
    d2 = X^r
    d3 = s0 + s1
    d4 = per-authority share sets {D_{k,i}}
    d5 = g2^(y0 - sum_k y_{k,u})

where s0 stays hidden from the CA behind R = h^s0 * X^theta and the
proof of knowledge, and s1 = V(id) is the CA's trace value.

A ciphertext for attribute set A_c is

    C1 = X^s   C2 = g^s   C3 = Z^s   C4 = M * e(g1, g4)^s
    C5 = {T_{k,i}^s : (k,i) in A_c}
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from cryptography.exceptions import InvalidTag
from cryptography.hazmat.primitives.ciphers.aead import AESGCM

from .access_tree import AttributeId, reconstruct_in_target, selected_leaves
from .authority import AttributeKeyShare, AuthorityPublic
from .errors import (
    ConfigError,
    InvalidKeyError,
    IssuanceError,
    TamperingError,
    UnknownAttributeError,
)
from .groups import Group, SourceElement, TargetElement
from .hashing import derive_seal_key, id_to_scalar
from .pok import PokTranscript, prove_noninteractive

_NONCE_BYTES = 12


@dataclass
class PublicParams:
    group: Group
    K: int
    X: SourceElement
    Y: SourceElement
    Z: SourceElement
    h: SourceElement
    g1: SourceElement
    g2: SourceElement
    g3: SourceElement
    g4: SourceElement
    Y1: SourceElement
    Y0: TargetElement
    E1: TargetElement
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def g(self) -> SourceElement:
        return self.group.generator

    def pair_Y1_g(self) -> TargetElement:
        if "Y1g" not in self._cache:
            self._cache["Y1g"] = self.group.pair(self.Y1, self.g)
        return self._cache["Y1g"]

    def pair_h_g(self) -> TargetElement:
        if "hg" not in self._cache:
            self._cache["hg"] = self.group.pair(self.h, self.g)
        return self._cache["hg"]


@dataclass
class MasterSecret:
    x: int
    y: int
    y0: int
    y1: int
    w: int
    w1: int
    w2: int


@dataclass
class KeyRequest:
    """User-side key-request state: blinding s0, theta, commitment R and the
    re-randomizer r'' applied at finalization."""

    s0: int
    theta: int
    r_pp: int
    R: SourceElement


@dataclass
class PartialKey:
    """CA response d'1..d'5 before the user strips theta and re-randomizes."""

    identity: str
    d1p: SourceElement
    d2p: SourceElement
    d3p: int
    d4p: list[AttributeKeyShare]
    d5p: SourceElement


@dataclass
class UserKey:
    identity: str
    d1: SourceElement
    d2: SourceElement
    d3: int
    d4: list[AttributeKeyShare]
    d5: SourceElement

    @property
    def trees(self):
        return [share.tree for share in self.d4]

    @property
    def authorities(self) -> set[int]:
        return {share.authority for share in self.d4}


@dataclass
class Ciphertext:
    attr_set: frozenset[AttributeId]
    C1: SourceElement
    C2: SourceElement
    C3: SourceElement
    C4: TargetElement
    C5: dict[AttributeId, SourceElement]

    def __post_init__(self):
        if frozenset(self.C5) != self.attr_set:
            raise ConfigError("C5 keys must equal the ciphertext attribute set")


def global_setup(group: Group, authority_count: int, rng) -> tuple[PublicParams, MasterSecret]:
    """System parameters for K authorities.  w = w1 + w2 is resampled to stay
    nonzero so that g4 never degenerates to the identity."""
    if authority_count < 1:
        raise ValueError("authority_count must be >= 1")
    p = group.order
    g = group.generator
    x = group.random_scalar(rng)
    y = group.random_scalar(rng)
    y0 = group.random_scalar(rng)
    y1 = group.random_scalar(rng)
    w1 = group.random_scalar(rng)
    w2 = group.random_scalar(rng)
    while (w1 + w2) % p == 0:
        w2 = group.random_scalar(rng)
    w = (w1 + w2) % p
    Z = group.random_source(rng)
    h = group.random_source(rng)
    g2 = g ** w1
    g3 = g ** w2
    gt = group.target_generator
    mpk = PublicParams(
        group=group,
        K=authority_count,
        X=g ** x,
        Y=g ** y,
        Z=Z,
        h=h,
        g1=g ** y0,
        g2=g2,
        g3=g3,
        g4=g2 * g3,
        Y1=g3 ** y0,
        Y0=gt ** y0,
        E1=gt ** y1,
    )
    msk = MasterSecret(x=x, y=y, y0=y0, y1=y1, w=w, w1=w1, w2=w2)
    return mpk, msk


def request_key(mpk: PublicParams, identity: str, rng) -> tuple[KeyRequest, PokTranscript]:
    """Fresh blinding (s0, theta, r''), commitment R = h^s0 * X^theta and a
    non-interactive proof of knowledge bound to the identity."""
    s0 = mpk.group.random_scalar(rng)
    theta = mpk.group.random_scalar(rng)
    r_pp = mpk.group.random_scalar(rng)
    R = (mpk.h ** s0) * (mpk.X ** theta)
    transcript = prove_noninteractive(mpk, R, (s0, theta), rng, context=identity.encode("utf-8"))
    return KeyRequest(s0=s0, theta=theta, r_pp=r_pp, R=R), transcript


def key_wellformed(mpk: PublicParams, key: UserKey, candidate_id_scalar: int) -> bool:
    """Verification equation binding the identity into d1:

        e(d1, X) == e(Y1, g) * e(h, g)^d3 * e(g^id * Z, d2)

    True for every honestly issued key under its own identity; the id term
    shifts for any other identity, so the check fails there.  Blinding s0
    and re-randomization r'' drop out of the equation."""
    group = mpk.group
    lhs = group.pair(key.d1, mpk.X)
    rhs = (
        mpk.pair_Y1_g()
        * (mpk.pair_h_g() ** key.d3)
        * group.pair((mpk.g ** candidate_id_scalar) * mpk.Z, key.d2)
    )
    return lhs == rhs


def finalize_key(mpk: PublicParams, request: KeyRequest, partial: PartialKey, identity: str) -> UserKey:
    """Strip the theta mask from d'1, fold in the user's own re-randomizer
    r'' and unblind d3; the result must satisfy the verification equation."""
    id_scalar = id_to_scalar(identity, mpk.group.order)
    base = (mpk.g ** id_scalar) * mpk.Z
    d1 = partial.d1p / (mpk.g ** request.theta) * (base ** request.r_pp)
    d2 = partial.d2p * (mpk.X ** request.r_pp)
    d3 = (partial.d3p + request.s0) % mpk.group.order
    key = UserKey(identity=identity, d1=d1, d2=d2, d3=d3, d4=partial.d4p, d5=partial.d5p)
    if not key_wellformed(mpk, key, id_scalar):
        raise IssuanceError("finalized key fails its verification equation")
    return key


def rerandomize_key(mpk: PublicParams, key: UserKey, rng) -> UserKey:
    """User-side refresh of d1, d2 with a fresh exponent; decryption output
    and traceability are unaffected."""
    r = mpk.group.random_scalar(rng)
    id_scalar = id_to_scalar(key.identity, mpk.group.order)
    base = (mpk.g ** id_scalar) * mpk.Z
    return UserKey(
        identity=key.identity,
        d1=key.d1 * (base ** r),
        d2=key.d2 * (mpk.X ** r),
        d3=key.d3,
        d4=key.d4,
        d5=key.d5,
    )


def encrypt(
    mpk: PublicParams,
    authority_publics: Mapping[int, AuthorityPublic],
    attrs,
    message: TargetElement,
    rng,
) -> Ciphertext:
    """Encrypt a target-group message under an attribute set.

    Costs exactly 3 + |attrs| source exponentiations, one pairing and one
    target exponentiation (the blinding factor e(g1, g4)^s)."""
    attr_set = frozenset(attrs)
    if not isinstance(message, TargetElement):
        raise TypeError("message must be a target-group element")
    if message.group.descriptor != mpk.group.descriptor:
        raise ConfigError("message belongs to a different group instantiation")
    for attr in attr_set:
        public = authority_publics.get(attr.authority)
        if public is None or attr.attribute not in public.attr_keys:
            raise UnknownAttributeError(f"no published key for attribute {attr}")
    s = mpk.group.random_scalar(rng)
    blind = mpk.group.pair(mpk.g1, mpk.g4) ** s
    return Ciphertext(
        attr_set=attr_set,
        C1=mpk.X ** s,
        C2=mpk.g ** s,
        C3=mpk.Z ** s,
        C4=message * blind,
        C5={
            attr: authority_publics[attr.authority].attr_keys[attr.attribute] ** s
            for attr in attr_set
        },
    )


def decrypt_parts(mpk: PublicParams, key: UserKey, ct: Ciphertext):
    """The two decryption factors and the recovered message:

        A = e(C2, d5) * prod_k Y_{k,u}^s     (= e(g,g)^(s*y0*w1))
        B = e(d1, C1) / (e(C2, h)^d3 * e(C2^id * C3, d2))
                                              (= e(g,g)^(s*y0*w2))
        M = C4 / (A * B)

    Exposed separately so the factor identities can be checked exactly on
    the toy backend."""
    group = mpk.group
    if ct.C1.group.descriptor != group.descriptor or key.d1.group.descriptor != group.descriptor:
        raise ConfigError("key/ciphertext backend does not match the public parameters")
    if key.authorities != set(range(1, mpk.K + 1)):
        raise InvalidKeyError(
            f"key covers authorities {sorted(key.authorities)}, system has K={mpk.K}"
        )

    A = group.pair(ct.C2, key.d5)
    for share in key.d4:
        chosen = selected_leaves(share.tree, ct.attr_set)
        leaf_values = {attr: group.pair(ct.C5[attr], share.shares[attr]) for attr in chosen}
        A = A * reconstruct_in_target(share.tree, leaf_values, ct.attr_set)

    id_scalar = id_to_scalar(key.identity, group.order)
    denominator = (group.pair(ct.C2, mpk.h) ** key.d3) * group.pair(
        (ct.C2 ** id_scalar) * ct.C3, key.d2
    )
    B = group.pair(key.d1, ct.C1) / denominator
    return A, B, ct.C4 / (A * B)


def decrypt(mpk: PublicParams, key: UserKey, ct: Ciphertext, verify_key: bool = False) -> TargetElement:
    """Recover M; raises PolicyNotSatisfied when some authority's tree
    rejects the ciphertext attributes.  With verify_key=True the key's
    verification equation is checked first (four extra pairings)."""
    if verify_key and not key_wellformed(mpk, key, id_to_scalar(key.identity, mpk.group.order)):
        raise InvalidKeyError("key fails its verification equation")
    _, _, message = decrypt_parts(mpk, key, ct)
    return message


def encrypt_hybrid(
    mpk: PublicParams,
    authority_publics: Mapping[int, AuthorityPublic],
    attrs,
    plaintext: bytes,
    rng,
) -> tuple[Ciphertext, bytes]:
    """Encapsulate a fresh target element as the group message and seal the
    byte payload under AES-GCM keyed by its canonical encoding."""
    encapsulated = mpk.group.random_target(rng)
    ct = encrypt(mpk, authority_publics, attrs, encapsulated, rng)
    seal_key = derive_seal_key(encapsulated.to_bytes())
    nonce = rng.getrandbits(8 * _NONCE_BYTES).to_bytes(_NONCE_BYTES, "big")
    sealed = nonce + AESGCM(seal_key).encrypt(nonce, plaintext, None)
    return ct, sealed


def decrypt_hybrid(mpk: PublicParams, key: UserKey, ct: Ciphertext, sealed: bytes) -> bytes:
    if len(sealed) < _NONCE_BYTES + 16:
        raise TamperingError("sealed payload truncated")
    encapsulated = decrypt(mpk, key, ct)
    seal_key = derive_seal_key(encapsulated.to_bytes())
    try:
        return AESGCM(seal_key).decrypt(sealed[:_NONCE_BYTES], sealed[_NONCE_BYTES:], None)
    except InvalidTag:
        raise TamperingError("sealed payload failed authentication") from None

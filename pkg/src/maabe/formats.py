"""Versioned binary envelopes for every persisted artifact.

Layout (big-endian throughout):

    magic     12 bytes  "MAABE1-<ROLE>" NUL-padded
    version   u8        format version (currently 1)
    backend   u8        0 = toy oracle, 1 = production curve
    length    u32       payload byte count
    payload   ...       role-specific canonical encoding
    checksum  32 bytes  SHA-256 over everything above

Payloads are canonical: maps are sorted, lengths are explicit, scalars
and elements use their fixed-width encodings, and a reader must consume
the payload exactly.  Checksum mismatches, unknown versions, backend
mismatches and off-group elements are rejected before any value is
returned.  The trace table has its own line-oriented format (see
central.TraceTable); its magic is listed here for completeness.
"""

from __future__ import annotations

import hashlib

from .access_tree import AttributeId, format_tree, parse_tree
from .authority import AttributeKeyShare, AuthorityPublic, AuthoritySecret
from .errors import (
    BackendMismatch,
    CorruptionError,
    StorageError,
    ValidationError,
    VersionError,
)
from .groups import (
    BACKEND_CURVE,
    BACKEND_TOY,
    CurveGroup,
    Group,
    ToyGroup,
    backend_byte,
    backend_name,
)
from .pok import PokTranscript
from .scheme import Ciphertext, KeyRequest, MasterSecret, PartialKey, PublicParams, UserKey

ENVELOPE_VERSION = 1
MAGIC_PREFIX = b"MAABE1-"

ROLE_MPK = "MPK"
ROLE_MSK = "MSK"
ROLE_AUTH = "AUTH"
ROLE_KEY = "KEY"
ROLE_CT = "CT"
ROLE_POK = "POK"
ROLE_TBL = "TBL"

ROLES = (ROLE_MPK, ROLE_MSK, ROLE_AUTH, ROLE_KEY, ROLE_CT, ROLE_POK, ROLE_TBL)

_MAGIC_WIDTH = 12
_CHECKSUM_WIDTH = 32


def _magic(role: str) -> bytes:
    raw = MAGIC_PREFIX + role.encode("ascii")
    return raw.ljust(_MAGIC_WIDTH, b"\x00")


# ---------------------------------------------------------------------------
# canonical payload writer / reader
# ---------------------------------------------------------------------------


class Writer:
    def __init__(self, group: Group):
        self.group = group
        self.buf = bytearray()

    def u8(self, value: int):
        self.buf += value.to_bytes(1, "big")

    def u16(self, value: int):
        self.buf += value.to_bytes(2, "big")

    def u32(self, value: int):
        self.buf += value.to_bytes(4, "big")

    def var_bytes(self, data: bytes):
        self.u32(len(data))
        self.buf += data

    def text(self, value: str):
        self.var_bytes(value.encode("utf-8"))

    def scalar(self, value: int):
        self.buf += self.group.scalar_to_bytes(value)

    def source(self, element):
        self.buf += element.to_bytes()

    def target(self, element):
        self.buf += element.to_bytes()

    def attribute(self, attr: AttributeId):
        self.u16(attr.authority)
        self.u16(attr.attribute)

    def order(self):
        """The group's prime order, so the reader can rebuild the group."""
        raw = self.group.order.to_bytes((self.group.order.bit_length() + 7) // 8, "big")
        self.u16(len(raw))
        self.buf += raw


class Reader:
    """Tracks element statistics while parsing so sizes can be measured
    directly from serialized artifacts."""

    def __init__(self, group: Group, data: bytes):
        self.group = group
        self.data = data
        self.pos = 0
        self.scalars_read = 0
        self.source_read = 0
        self.target_read = 0

    def _take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise CorruptionError("payload truncated")
        chunk = self.data[self.pos : self.pos + n]
        self.pos += n
        return chunk

    def u8(self) -> int:
        return self._take(1)[0]

    def u16(self) -> int:
        return int.from_bytes(self._take(2), "big")

    def u32(self) -> int:
        return int.from_bytes(self._take(4), "big")

    def var_bytes(self) -> bytes:
        return self._take(self.u32())

    def text(self) -> str:
        return self.var_bytes().decode("utf-8")

    def scalar(self) -> int:
        self.scalars_read += 1
        return self.group.scalar_from_bytes(self._take(self.group.scalar_width))

    def source(self):
        self.source_read += 1
        return self.group.source_from_bytes(self._take(self.group.source_width))

    def target(self):
        self.target_read += 1
        return self.group.target_from_bytes(self._take(self.group.target_width))

    def attribute(self) -> AttributeId:
        return AttributeId(self.u16(), self.u16())

    def order(self) -> int:
        return int.from_bytes(self._take(self.u16()), "big")

    def finish(self):
        if self.pos != len(self.data):
            raise ValidationError("payload has trailing bytes")


# ---------------------------------------------------------------------------
# envelope framing
# ---------------------------------------------------------------------------


def seal_envelope(role: str, group: Group, payload: bytes) -> bytes:
    head = (
        _magic(role)
        + bytes([ENVELOPE_VERSION, backend_byte(group.descriptor.backend_id)])
        + len(payload).to_bytes(4, "big")
    )
    body = head + payload
    return body + hashlib.sha256(body).digest()


def open_envelope(data: bytes, role: str, group: Group | None) -> tuple[Group, bytes]:
    """Verify framing and checksum, resolve the group, return (group, payload).

    When ``group`` is given the envelope's backend and order must match it;
    otherwise a group is constructed from the envelope (the payload of every
    role starts with the prime order)."""
    min_len = _MAGIC_WIDTH + 2 + 4 + _CHECKSUM_WIDTH
    if len(data) < min_len:
        raise CorruptionError("envelope truncated")
    body, checksum = data[:-_CHECKSUM_WIDTH], data[-_CHECKSUM_WIDTH:]
    if hashlib.sha256(body).digest() != checksum:
        raise CorruptionError("envelope checksum mismatch")
    magic = body[:_MAGIC_WIDTH]
    if magic != _magic(role):
        found = magic.rstrip(b"\x00").decode("ascii", "replace")
        raise ValidationError(f"expected a {MAGIC_PREFIX.decode()}{role} file, found {found!r}")
    version, backend = body[_MAGIC_WIDTH], body[_MAGIC_WIDTH + 1]
    if version != ENVELOPE_VERSION:
        raise VersionError(f"unknown envelope version {version}")
    length = int.from_bytes(body[_MAGIC_WIDTH + 2 : _MAGIC_WIDTH + 6], "big")
    payload = body[_MAGIC_WIDTH + 6 :]
    if len(payload) != length:
        raise CorruptionError("payload length mismatch")

    if len(payload) < 2:
        raise CorruptionError("payload truncated")
    order_len = int.from_bytes(payload[:2], "big")
    if len(payload) < 2 + order_len:
        raise CorruptionError("payload truncated")
    order = int.from_bytes(payload[2 : 2 + order_len], "big")
    backend_id = backend_name(backend)
    if group is not None:
        if group.descriptor.backend_id != backend_id or group.order != order:
            raise BackendMismatch(
                f"envelope written for {backend_id} (p={order:#x}), "
                f"loaded under {group.descriptor.backend_id} (p={group.order:#x})"
            )
    else:
        group = ToyGroup(order) if backend_id == BACKEND_TOY else CurveGroup()
        if group.order != order:
            raise BackendMismatch("curve envelope carries a foreign group order")
    return group, payload


def _write_file(path: str, data: bytes):
    try:
        with open(path, "wb") as fh:
            fh.write(data)
    except OSError as exc:
        raise StorageError(f"cannot write {path}: {exc}") from exc


def _read_file(path: str) -> bytes:
    try:
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as exc:
        raise StorageError(f"cannot read {path}: {exc}") from exc


# ---------------------------------------------------------------------------
# MPK
# ---------------------------------------------------------------------------


def mpk_to_bytes(mpk: PublicParams) -> bytes:
    w = Writer(mpk.group)
    w.order()
    w.u16(mpk.K)
    for element in (mpk.X, mpk.Y, mpk.Z, mpk.h, mpk.g1, mpk.g2, mpk.g3, mpk.g4, mpk.Y1):
        w.source(element)
    w.target(mpk.Y0)
    w.target(mpk.E1)
    return seal_envelope(ROLE_MPK, mpk.group, bytes(w.buf))


def mpk_from_bytes(data: bytes, group: Group | None = None) -> PublicParams:
    group, payload = open_envelope(data, ROLE_MPK, group)
    r = Reader(group, payload)
    r.order()
    K = r.u16()
    X, Y, Z, h, g1, g2, g3, g4, Y1 = (r.source() for _ in range(9))
    Y0 = r.target()
    E1 = r.target()
    r.finish()
    return PublicParams(
        group=group, K=K, X=X, Y=Y, Z=Z, h=h, g1=g1, g2=g2, g3=g3, g4=g4, Y1=Y1, Y0=Y0, E1=E1
    )


# ---------------------------------------------------------------------------
# MSK (master secret + the CA's V key)
# ---------------------------------------------------------------------------


def msk_to_bytes(group: Group, msk: MasterSecret, v_key: bytes) -> bytes:
    w = Writer(group)
    w.order()
    for value in (msk.x, msk.y, msk.y0, msk.y1, msk.w, msk.w1, msk.w2):
        w.scalar(value)
    w.var_bytes(v_key)
    return seal_envelope(ROLE_MSK, group, bytes(w.buf))


def msk_from_bytes(data: bytes, group: Group | None = None) -> tuple[Group, MasterSecret, bytes]:
    group, payload = open_envelope(data, ROLE_MSK, group)
    r = Reader(group, payload)
    r.order()
    x, y, y0, y1, wv, w1, w2 = (r.scalar() for _ in range(7))
    v_key = r.var_bytes()
    r.finish()
    return group, MasterSecret(x=x, y=y, y0=y0, y1=y1, w=wv, w1=w1, w2=w2), v_key


# ---------------------------------------------------------------------------
# AUTH (public variant 0, secret variant 1)
# ---------------------------------------------------------------------------


def authority_public_to_bytes(group: Group, public: AuthorityPublic) -> bytes:
    w = Writer(group)
    w.order()
    w.u8(0)
    w.u16(public.index)
    w.u16(len(public.attr_keys))
    for i in sorted(public.attr_keys):
        w.u16(i)
        w.source(public.attr_keys[i])
    return seal_envelope(ROLE_AUTH, group, bytes(w.buf))


def authority_secret_to_bytes(group: Group, secret: AuthoritySecret) -> bytes:
    w = Writer(group)
    w.order()
    w.u8(1)
    w.u16(secret.index)
    w.var_bytes(secret.seed)
    w.u16(len(secret.attr_exponents))
    for i in sorted(secret.attr_exponents):
        w.u16(i)
        w.scalar(secret.attr_exponents[i])
    return seal_envelope(ROLE_AUTH, group, bytes(w.buf))


def authority_from_bytes(data: bytes, group: Group | None = None):
    """Returns (group, AuthorityPublic) or (group, AuthoritySecret)."""
    group, payload = open_envelope(data, ROLE_AUTH, group)
    r = Reader(group, payload)
    r.order()
    variant = r.u8()
    index = r.u16()
    if variant == 0:
        keys = {}
        for _ in range(r.u16()):
            i = r.u16()
            keys[i] = r.source()
        r.finish()
        return group, AuthorityPublic(index=index, attr_keys=keys)
    if variant == 1:
        seed = r.var_bytes()
        exponents = {}
        for _ in range(r.u16()):
            i = r.u16()
            exponents[i] = r.scalar()
        r.finish()
        return group, AuthoritySecret(index=index, seed=seed, attr_exponents=exponents)
    raise ValidationError(f"unknown authority file variant {variant}")


# ---------------------------------------------------------------------------
# KEY (final variant 0, partial variant 1)
# ---------------------------------------------------------------------------


def _write_shares(w: Writer, shares: list[AttributeKeyShare]):
    w.u16(len(shares))
    for share in sorted(shares, key=lambda s: s.authority):
        w.u16(share.authority)
        w.text(format_tree(share.tree))
        w.u16(len(share.shares))
        for attr in sorted(share.shares):
            w.attribute(attr)
            w.source(share.shares[attr])


def _read_shares(r: Reader) -> list[AttributeKeyShare]:
    shares = []
    for _ in range(r.u16()):
        authority = r.u16()
        tree = parse_tree(r.text())
        issued = {}
        for _ in range(r.u16()):
            attr = r.attribute()
            issued[attr] = r.source()
        shares.append(AttributeKeyShare(authority=authority, shares=issued, tree=tree))
    return shares


def user_key_to_bytes(group: Group, key: UserKey) -> bytes:
    w = Writer(group)
    w.order()
    w.u8(0)
    w.text(key.identity)
    w.source(key.d1)
    w.source(key.d2)
    w.scalar(key.d3)
    w.source(key.d5)
    _write_shares(w, key.d4)
    return seal_envelope(ROLE_KEY, group, bytes(w.buf))


def partial_key_to_bytes(group: Group, partial: PartialKey) -> bytes:
    w = Writer(group)
    w.order()
    w.u8(1)
    w.text(partial.identity)
    w.source(partial.d1p)
    w.source(partial.d2p)
    w.scalar(partial.d3p)
    w.source(partial.d5p)
    _write_shares(w, partial.d4p)
    return seal_envelope(ROLE_KEY, group, bytes(w.buf))


def _key_from_bytes(data: bytes, group: Group | None, expect_variant: int):
    group, payload = open_envelope(data, ROLE_KEY, group)
    r = Reader(group, payload)
    r.order()
    variant = r.u8()
    if variant != expect_variant:
        kind = "final" if expect_variant == 0 else "partial"
        raise ValidationError(f"expected a {kind} key file")
    identity = r.text()
    e1 = r.source()
    e2 = r.source()
    d3 = r.scalar()
    e5 = r.source()
    shares = _read_shares(r)
    r.finish()
    return group, identity, e1, e2, d3, e5, shares, r


def user_key_from_bytes(data: bytes, group: Group | None = None) -> tuple[Group, UserKey]:
    group, identity, d1, d2, d3, d5, shares, _ = _key_from_bytes(data, group, 0)
    return group, UserKey(identity=identity, d1=d1, d2=d2, d3=d3, d4=shares, d5=d5)


def partial_key_from_bytes(data: bytes, group: Group | None = None) -> tuple[Group, PartialKey]:
    group, identity, d1p, d2p, d3p, d5p, shares, _ = _key_from_bytes(data, group, 1)
    return group, PartialKey(
        identity=identity, d1p=d1p, d2p=d2p, d3p=d3p, d4p=shares, d5p=d5p
    )


def measure_key_bytes(data: bytes, group: Group | None = None) -> dict:
    """Element tallies of a serialized final key, counted while parsing."""
    group, payload = open_envelope(data, ROLE_KEY, group)
    r = Reader(group, payload)
    r.order()
    if r.u8() != 0:
        raise ValidationError("expected a final key file")
    r.text()
    r.source()
    r.source()
    r.scalar()
    r.source()
    _read_shares(r)
    r.finish()
    return {
        "scalars": r.scalars_read,
        "source_elements": r.source_read,
        "target_elements": r.target_read,
        "bytes": len(data),
    }


# ---------------------------------------------------------------------------
# CT (group ciphertext plus optional hybrid sealed payload)
# ---------------------------------------------------------------------------


def ciphertext_to_bytes(group: Group, ct: Ciphertext, sealed: bytes | None = None) -> bytes:
    w = Writer(group)
    w.order()
    attrs = sorted(ct.attr_set)
    w.u16(len(attrs))
    for attr in attrs:
        w.attribute(attr)
    w.source(ct.C1)
    w.source(ct.C2)
    w.source(ct.C3)
    w.target(ct.C4)
    for attr in attrs:
        w.source(ct.C5[attr])
    if sealed is None:
        w.u8(0)
    else:
        w.u8(1)
        w.var_bytes(sealed)
    return seal_envelope(ROLE_CT, group, bytes(w.buf))


def ciphertext_from_bytes(
    data: bytes, group: Group | None = None
) -> tuple[Group, Ciphertext, bytes | None]:
    group, payload = open_envelope(data, ROLE_CT, group)
    r = Reader(group, payload)
    r.order()
    attrs = [r.attribute() for _ in range(r.u16())]
    if sorted(attrs) != attrs or len(set(attrs)) != len(attrs):
        raise ValidationError("ciphertext attribute list is not canonical")
    C1, C2, C3 = r.source(), r.source(), r.source()
    C4 = r.target()
    C5 = {attr: r.source() for attr in attrs}
    sealed = None
    if r.u8() == 1:
        sealed = r.var_bytes()
    r.finish()
    ct = Ciphertext(attr_set=frozenset(attrs), C1=C1, C2=C2, C3=C3, C4=C4, C5=C5)
    return group, ct, sealed


def measure_ciphertext_bytes(data: bytes, group: Group | None = None) -> dict:
    group, payload = open_envelope(data, ROLE_CT, group)
    r = Reader(group, payload)
    r.order()
    n_attrs = r.u16()
    for _ in range(n_attrs):
        r.attribute()
    for _ in range(3):
        r.source()
    r.target()
    for _ in range(n_attrs):
        r.source()
    if r.u8() == 1:
        r.var_bytes()
    r.finish()
    return {
        "attribute_ids": n_attrs,
        "scalars": r.scalars_read,
        "source_elements": r.source_read,
        "target_elements": r.target_read,
        "bytes": len(data),
    }


# ---------------------------------------------------------------------------
# POK (public key request variant 0, private request state variant 1)
# ---------------------------------------------------------------------------


def key_request_public_to_bytes(group: Group, identity: str, R, transcript: PokTranscript) -> bytes:
    w = Writer(group)
    w.order()
    w.u8(0)
    w.text(identity)
    w.source(R)
    w.source(transcript.commitment)
    w.scalar(transcript.challenge)
    w.scalar(transcript.z1)
    w.scalar(transcript.z2)
    return seal_envelope(ROLE_POK, group, bytes(w.buf))


def key_request_public_from_bytes(data: bytes, group: Group | None = None):
    group, payload = open_envelope(data, ROLE_POK, group)
    r = Reader(group, payload)
    r.order()
    if r.u8() != 0:
        raise ValidationError("expected a public key-request file")
    identity = r.text()
    R = r.source()
    transcript = PokTranscript(commitment=r.source(), challenge=r.scalar(), z1=r.scalar(), z2=r.scalar())
    r.finish()
    return group, identity, R, transcript


def key_request_private_to_bytes(group: Group, identity: str, request: KeyRequest) -> bytes:
    w = Writer(group)
    w.order()
    w.u8(1)
    w.text(identity)
    w.scalar(request.s0)
    w.scalar(request.theta)
    w.scalar(request.r_pp)
    w.source(request.R)
    return seal_envelope(ROLE_POK, group, bytes(w.buf))


def key_request_private_from_bytes(data: bytes, group: Group | None = None):
    group, payload = open_envelope(data, ROLE_POK, group)
    r = Reader(group, payload)
    r.order()
    if r.u8() != 1:
        raise ValidationError("expected a private key-request state file")
    identity = r.text()
    request = KeyRequest(s0=r.scalar(), theta=r.scalar(), r_pp=r.scalar(), R=r.source())
    r.finish()
    return group, identity, request


# ---------------------------------------------------------------------------
# file helpers
# ---------------------------------------------------------------------------


def save(path: str, data: bytes):
    _write_file(path, data)


def load(path: str) -> bytes:
    return _read_file(path)

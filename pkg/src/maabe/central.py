"""Central authority: identity registration, blinded issuance, tracing.

The CA is fully trusted: it holds the master secret, the key v_key of
the secret map V and the PRF seeds of all K attribute authorities.  Its
trace table persists (id, V(id)) rows append-only with a checksum per
row.

Tracing does not read V(id) out of a leaked key (d3 = s0 + s1 hides s1
behind the user's blinding); instead it scans the registered identities
for the unique one satisfying the key's verification equation, in which
the id is bound through the (g^id * Z)^r factor of d1.  The V(id) column
remains for bookkeeping and duplicate detection.
"""

from __future__ import annotations

import fcntl
import os
from dataclasses import dataclass, field

from .authority import AttributeKeyShare, prf_eval
from .errors import (
    BackendMismatch,
    CorruptionError,
    ProofRejected,
    ProtocolError,
    StorageError,
    TableIntegrityError,
    UntraceableKeyError,
    VersionError,
)
from .groups import Group, SourceElement, backend_byte
from .hashing import CTX_V, id_to_scalar, keyed_scalar
from .pok import PokTranscript, verify_noninteractive
from .scheme import MasterSecret, PartialKey, PublicParams, UserKey, key_wellformed

TABLE_MAGIC = "MAABE1-TBL"
TABLE_VERSION = 1


@dataclass
class CASecret:
    v_key: bytes
    master: MasterSecret
    authority_seeds: list[bytes]  # seed of authority k at index k-1


def secret_map_v(v_key: bytes, identity: str, p: int) -> int:
    """V(id): deterministic keyed map of identities into Z_p*."""
    return keyed_scalar(v_key, CTX_V, identity.encode("utf-8"), p)


class TraceTable:
    """Registered identities and their V(id) values, optionally bound to an
    append-only file.  Rows are line-oriented: utf8-length, id, V(id) hex,
    checksum.  Concurrent registrations serialize via advisory locking."""

    def __init__(self, group: Group, path: str | None = None):
        self.group = group
        self.path = path
        self.rows: dict[str, int] = {}
        if path is not None and os.path.exists(path):
            self._load_file(path)
        elif path is not None:
            self._write_header(path)

    # -- persistence -------------------------------------------------------

    def _header_line(self) -> str:
        backend = backend_byte(self.group.descriptor.backend_id)
        return f"{TABLE_MAGIC}\t{TABLE_VERSION}\t{backend}\t{self.group.order:x}"

    @staticmethod
    def _row_digest(length: int, identity: str, value: int) -> str:
        import hashlib

        return hashlib.sha256(f"{length}\t{identity}\t{value:x}".encode("utf-8")).hexdigest()[:16]

    def _row_line(self, identity: str, value: int) -> str:
        length = len(identity.encode("utf-8"))
        return f"{length}\t{identity}\t{value:x}\t{self._row_digest(length, identity, value)}"

    def _write_header(self, path: str):
        try:
            with open(path, "x", encoding="utf-8") as fh:
                fh.write(self._header_line() + "\n")
        except OSError as exc:
            raise StorageError(f"cannot create trace table {path}: {exc}") from exc

    def _load_file(self, path: str):
        try:
            with open(path, encoding="utf-8") as fh:
                lines = fh.read().splitlines()
        except OSError as exc:
            raise StorageError(f"cannot read trace table {path}: {exc}") from exc
        if not lines:
            raise CorruptionError("trace table is empty")
        head = lines[0].split("\t")
        if len(head) != 4 or head[0] != TABLE_MAGIC:
            raise CorruptionError("trace table header is malformed")
        if int(head[1]) != TABLE_VERSION:
            raise VersionError(f"unknown trace table version {head[1]}")
        if int(head[2]) != backend_byte(self.group.descriptor.backend_id) or int(
            head[3], 16
        ) != self.group.order:
            raise BackendMismatch("trace table was written under a different group")
        for line in lines[1:]:
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 4:
                raise CorruptionError(f"malformed trace table row: {line!r}")
            length, identity, value_hex, digest = parts
            value = int(value_hex, 16)
            if self._row_digest(int(length), identity, value) != digest:
                raise CorruptionError(f"trace table row checksum mismatch for {identity!r}")
            if len(identity.encode("utf-8")) != int(length):
                raise CorruptionError(f"trace table row length mismatch for {identity!r}")
            if identity in self.rows:
                raise CorruptionError(f"duplicate trace table row for {identity!r}")
            self._check_value_unique(identity, value)
            self.rows[identity] = value

    def _append_row(self, identity: str, value: int):
        if self.path is None:
            return
        try:
            with open(self.path, "a", encoding="utf-8") as fh:
                fcntl.flock(fh.fileno(), fcntl.LOCK_EX)
                fh.write(self._row_line(identity, value) + "\n")
                fh.flush()
                fcntl.flock(fh.fileno(), fcntl.LOCK_UN)
        except OSError as exc:
            raise StorageError(f"cannot append to trace table: {exc}") from exc

    def save(self, path: str):
        """Rewrite the whole table (used when exporting a copy)."""
        try:
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(self._header_line() + "\n")
                for identity, value in self.rows.items():
                    fh.write(self._row_line(identity, value) + "\n")
        except OSError as exc:
            raise StorageError(f"cannot write trace table {path}: {exc}") from exc

    # -- registration ------------------------------------------------------

    def _check_value_unique(self, identity: str, value: int):
        for other, existing in self.rows.items():
            if existing == value and other != identity:
                raise TableIntegrityError(
                    f"V collision between {identity!r} and {other!r}"
                )

    def add(self, identity: str, value: int) -> None:
        if "\t" in identity or "\n" in identity:
            raise ValueError("identities must not contain tab or newline")
        if identity in self.rows:
            if self.rows[identity] != value:
                raise TableIntegrityError(f"conflicting V values for {identity!r}")
            return
        self._check_value_unique(identity, value)
        self.rows[identity] = value
        self._append_row(identity, value)


def register_user(group: Group, v_key: bytes, table: TraceTable, identity: str) -> int:
    """Compute s1 = V(id), record it in the table and return it.
    Re-registration returns the stored value."""
    if identity in table.rows:
        return table.rows[identity]
    value = secret_map_v(v_key, identity, group.order)
    table.add(identity, value)
    return value


def ca_issue(
    mpk: PublicParams,
    ca: CASecret,
    table: TraceTable,
    identity: str,
    R: SourceElement,
    proof: PokTranscript,
    shares: list[AttributeKeyShare],
    rng,
    require_all_authorities: bool = True,
) -> PartialKey:
    """Issue the blinded partial key after checking the proof for R:

        d'1 = (Y1 * R * h^s1)^(1/x) * (g^id * Z)^r'
        d'2 = X^r'        d'3 = s1 = V(id)
        d'5 = g2^(y0 - sum_{k=1..K} y_{k,u})

    d'5 always sums the PRF values of all K authorities, so a key that was
    issued over fewer authorities (require_all_authorities=False, used by
    the collusion experiments) can never decrypt."""
    if not verify_noninteractive(mpk, R, proof, context=identity.encode("utf-8")):
        raise ProofRejected("proof of knowledge for R failed verification")
    covered = [share.authority for share in shares]
    if len(set(covered)) != len(covered):
        raise ProtocolError("duplicate authority share in issuance request")
    if require_all_authorities and set(covered) != set(range(1, mpk.K + 1)):
        raise ProtocolError(
            f"issuance requires shares from all {mpk.K} authorities, got {sorted(covered)}"
        )
    if len(ca.authority_seeds) != mpk.K:
        raise ProtocolError("CA holds the wrong number of authority seeds")

    p = mpk.group.order
    s1 = register_user(mpk.group, ca.v_key, table, identity)
    r_prime = mpk.group.random_scalar(rng)
    id_scalar = id_to_scalar(identity, p)

    x_inv = pow(ca.master.x, -1, p)
    d1p = ((mpk.Y1 * R * (mpk.h ** s1)) ** x_inv) * (((mpk.g ** id_scalar) * mpk.Z) ** r_prime)
    d2p = mpk.X ** r_prime
    y_sum = sum(prf_eval(mpk.group, seed, identity) for seed in ca.authority_seeds) % p
    d5p = mpk.g2 ** ((ca.master.y0 - y_sum) % p)
    return PartialKey(identity=identity, d1p=d1p, d2p=d2p, d3p=s1, d4p=list(shares), d5p=d5p)


def trace(mpk: PublicParams, table: TraceTable, key: UserKey) -> str:
    """Scan the registered identities for the unique one under which the
    leaked key satisfies its verification equation.  The result is
    independent of the user's blinding s0 and any re-randomization."""
    group = mpk.group
    # e(d1, X) / (e(Y1, g) * e(h, g)^d3) must equal e(g^id * Z, d2)
    target = group.pair(key.d1, mpk.X) / (mpk.pair_Y1_g() * (mpk.pair_h_g() ** key.d3))
    matches = [
        identity
        for identity in table.rows
        if group.pair((mpk.g ** id_to_scalar(identity, group.order)) * mpk.Z, key.d2) == target
    ]
    if not matches:
        raise UntraceableKeyError("no registered identity matches the key")
    if len(matches) > 1:
        raise TableIntegrityError(f"multiple identities match the key: {matches}")
    return matches[0]


__all__ = [
    "CASecret",
    "TraceTable",
    "ca_issue",
    "key_wellformed",
    "register_user",
    "secret_map_v",
    "trace",
]

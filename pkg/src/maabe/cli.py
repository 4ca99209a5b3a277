"""Command-line front end.

The interactive three-party key generation is realized as offline file
exchanges:

    setup            -> mpk.bin msk.bin
    authority-setup  -> auth<k>.sec auth<k>.pub        (one per authority)
    register         -> appends (id, V(id)) to the trace table
    request-key      -> request.pub (to the CA) + request.priv (kept)
    issue-key        -> partial.bin                    (CA side)
    finalize-key     -> user.key                       (user side)
    encrypt/decrypt  -> hybrid byte-payload ciphertext files
    trace            -> prints the identity embedded in a leaked key
    bench / game     -> cost and security-game evidence

Exit codes: 0 success, 2 usage, 3 policy-not-satisfied, 4 proof-rejected,
5 untraceable-key, 6 corruption, 7 validation/backend/version, 8
tampering, 1 any other scheme error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass

from . import formats
from .access_tree import AttributeId, leaf_attributes, parse_tree
from .central import CASecret, TraceTable, ca_issue, register_user, trace
from .errors import (
    BackendMismatch,
    CorruptionError,
    MaabeError,
    PolicyNotSatisfied,
    ProofRejected,
    ProtocolError,
    TamperingError,
    UntraceableKeyError,
    ValidationError,
    VersionError,
)
from .groups import TOY_PRIME_61, make_group
from .harness import GameAdversary, bench, run_ind_ss_cpa_game
from .scheme import (
    decrypt_hybrid,
    encrypt_hybrid,
    finalize_key,
    global_setup,
)
from .authority import authority_setup, issue_attribute_keys
from .scheme import request_key as scheme_request_key


@dataclass
class SystemConfig:
    """Deployment shape: authority count and per-authority universe sizes."""

    authorities: int
    attribute_counts: list[int]

    def __post_init__(self):
        if self.authorities < 1:
            raise ValueError("need at least one authority")
        if len(self.attribute_counts) != self.authorities or any(
            n < 1 for n in self.attribute_counts
        ):
            raise ValueError("need an attribute count >= 1 per authority")


def _group_from_args(args):
    return make_group(args.backend, args.toy_prime)


def _rng_from_args(args):
    if args.seed is not None:
        return random.Random(args.seed)
    return random.SystemRandom()


def _load_group_file(loader, path, group):
    return loader(formats.load(path), group)


# ---------------------------------------------------------------------------
# subcommand implementations
# ---------------------------------------------------------------------------


def _cmd_setup(args):
    group = _group_from_args(args)
    rng = _rng_from_args(args)
    mpk, msk = global_setup(group, args.authorities, rng)
    v_key = rng.getrandbits(256).to_bytes(32, "big")
    formats.save(args.out_mpk, formats.mpk_to_bytes(mpk))
    formats.save(args.out_msk, formats.msk_to_bytes(group, msk, v_key))
    print(f"wrote {args.out_mpk} and {args.out_msk} (K={args.authorities})")
    return 0


def _cmd_authority_setup(args):
    group = _group_from_args(args)
    rng = _rng_from_args(args)
    _load_group_file(formats.mpk_from_bytes, args.mpk, group)  # backend consistency check
    secret, public = authority_setup(group, args.index, args.attributes, rng)
    formats.save(args.out_secret, formats.authority_secret_to_bytes(group, secret))
    formats.save(args.out_public, formats.authority_public_to_bytes(group, public))
    print(f"authority {args.index}: {args.attributes} attributes")
    return 0


def _cmd_register(args):
    group = _group_from_args(args)
    _, _, v_key = formats.msk_from_bytes(formats.load(args.msk), group)
    table = TraceTable(group, args.table)
    register_user(group, v_key, table, args.id)
    print(f"registered {args.id!r}")
    return 0


def _cmd_request_key(args):
    group = _group_from_args(args)
    rng = _rng_from_args(args)
    mpk = _load_group_file(formats.mpk_from_bytes, args.mpk, group)
    request, transcript = scheme_request_key(mpk, args.id, rng)
    formats.save(
        args.out_request, formats.key_request_public_to_bytes(group, args.id, request.R, transcript)
    )
    formats.save(args.out_state, formats.key_request_private_to_bytes(group, args.id, request))
    print(f"wrote {args.out_request} (send to CA) and {args.out_state} (keep private)")
    return 0


def _cmd_issue_key(args):
    group = _group_from_args(args)
    rng = _rng_from_args(args)
    mpk = _load_group_file(formats.mpk_from_bytes, args.mpk, group)
    _, msk, v_key = formats.msk_from_bytes(formats.load(args.msk), group)
    _, identity, R, transcript = formats.key_request_public_from_bytes(
        formats.load(args.request), group
    )
    if identity != args.id:
        raise ProtocolError(f"request was made for {identity!r}, not {args.id!r}")

    secrets = {}
    for path in args.auth_secret:
        _, secret = formats.authority_from_bytes(formats.load(path), group)
        if not hasattr(secret, "seed"):
            raise ValidationError(f"{path} is a public authority file")
        secrets[secret.index] = secret
    if sorted(secrets) != list(range(1, mpk.K + 1)):
        raise ProtocolError(f"need secret files for all {mpk.K} authorities")

    shares = []
    for text in args.tree:
        tree = parse_tree(text)
        owners = {attr.authority for attr in leaf_attributes(tree)}
        if len(owners) != 1:
            raise ProtocolError("each tree must stay within one authority")
        k = owners.pop()
        if k not in secrets:
            raise ProtocolError(f"no secret file for authority {k}")
        shares.append(issue_attribute_keys(mpk, secrets[k], identity, tree, rng))

    ca = CASecret(v_key=v_key, master=msk, authority_seeds=[secrets[k].seed for k in sorted(secrets)])
    table = TraceTable(group, args.table)
    partial = ca_issue(mpk, ca, table, identity, R, transcript, shares, rng)
    formats.save(args.out, formats.partial_key_to_bytes(group, partial))
    print(f"issued partial key for {identity!r} -> {args.out}")
    return 0


def _cmd_finalize_key(args):
    group = _group_from_args(args)
    mpk = _load_group_file(formats.mpk_from_bytes, args.mpk, group)
    _, identity, request = formats.key_request_private_from_bytes(formats.load(args.state), group)
    _, partial = formats.partial_key_from_bytes(formats.load(args.partial), group)
    if partial.identity != identity:
        raise ProtocolError(
            f"partial key was issued for {partial.identity!r}, state is for {identity!r}"
        )
    key = finalize_key(mpk, request, partial, identity)
    formats.save(args.out, formats.user_key_to_bytes(group, key))
    print(f"finalized key for {identity!r} -> {args.out}")
    return 0


def _parse_attrs(text: str) -> list[AttributeId]:
    return [AttributeId.parse(part) for part in text.split(",") if part]


def _cmd_encrypt(args):
    group = _group_from_args(args)
    rng = _rng_from_args(args)
    mpk = _load_group_file(formats.mpk_from_bytes, args.mpk, group)
    publics = {}
    for path in args.auth_public:
        _, public = formats.authority_from_bytes(formats.load(path), group)
        if hasattr(public, "seed"):
            raise ValidationError(f"{path} is a secret authority file; encryptors get the public one")
        publics[public.index] = public
    attrs = _parse_attrs(args.attrs)
    with open(args.infile, "rb") as fh:
        plaintext = fh.read()
    ct, sealed = encrypt_hybrid(mpk, publics, attrs, plaintext, rng)
    formats.save(args.out, formats.ciphertext_to_bytes(group, ct, sealed))
    print(f"encrypted {len(plaintext)} bytes under {{{args.attrs}}} -> {args.out}")
    return 0


def _cmd_decrypt(args):
    group = _group_from_args(args)
    mpk = _load_group_file(formats.mpk_from_bytes, args.mpk, group)
    _, key = formats.user_key_from_bytes(formats.load(args.key), group)
    _, ct, sealed = formats.ciphertext_from_bytes(formats.load(args.infile), group)
    if sealed is None:
        raise ValidationError("ciphertext carries no sealed payload")
    plaintext = decrypt_hybrid(mpk, key, ct, sealed)
    with open(args.out, "wb") as fh:
        fh.write(plaintext)
    print(f"decrypted {len(plaintext)} bytes -> {args.out}")
    return 0


def _cmd_trace(args):
    group = _group_from_args(args)
    mpk = _load_group_file(formats.mpk_from_bytes, args.mpk, group)
    _, key = formats.user_key_from_bytes(formats.load(args.key), group)
    table = TraceTable(group, args.table)
    try:
        identity = trace(mpk, table, key)
    except UntraceableKeyError:
        if args.json:
            print(json.dumps({"traced": False}))
        else:
            print("untraceable: no registered identity matches the key", file=sys.stderr)
        raise
    if args.json:
        print(json.dumps({"traced": True, "identity": identity}))
    else:
        print(identity)
    return 0


def _cmd_bench(args):
    group = _group_from_args(args)
    rng = _rng_from_args(args)
    report = bench(group, args.k1, args.k2, args.authorities, rng)
    if args.json:
        print(json.dumps(report.as_dict(), indent=2))
    else:
        print(report.render())
    return 0


def _cmd_game(args):
    group = _group_from_args(args)
    rng = _rng_from_args(args)
    target = [AttributeId(1, 1), AttributeId(2, 1)]
    adversary = GameAdversary(
        declare_target=lambda: target,
        key_queries=lambda ctx, phase: [],
        choose_messages=lambda ctx: (group.random_target(rng), group.random_target(rng)),
        guess=lambda ctx, ct: rng.randrange(2),
    )
    wins = sum(
        run_ind_ss_cpa_game(group, adversary, rng, authority_count=2, attributes_per_authority=2)
        for _ in range(args.runs)
    )
    rate = wins / args.runs
    stats = {"runs": args.runs, "wins": wins, "win_rate": rate, "seed": args.seed}
    if args.json:
        print(json.dumps(stats))
    else:
        print(
            f"uniform-guess adversary: {wins}/{args.runs} wins "
            f"(rate {rate:.3f}, seed {args.seed})"
        )
    return 0


# ---------------------------------------------------------------------------
# argument wiring
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="maabe",
        description="multi-authority attribute-based encryption with traceable keys",
    )
    parser.add_argument("--backend", choices=["curve", "toy"], default="curve")
    parser.add_argument(
        "--toy-prime", type=int, default=TOY_PRIME_61, help="group order for the toy backend"
    )
    parser.add_argument("--seed", type=int, default=None, help="deterministic randomness (tests)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("setup", help="generate public parameters and master secret")
    p.add_argument("--authorities", type=int, required=True)
    p.add_argument("--out-mpk", default="mpk.bin")
    p.add_argument("--out-msk", default="msk.bin")
    p.set_defaults(func=_cmd_setup)

    p = sub.add_parser("authority-setup", help="provision one attribute authority")
    p.add_argument("--mpk", required=True)
    p.add_argument("--index", type=int, required=True)
    p.add_argument("--attributes", type=int, required=True)
    p.add_argument("--out-secret", required=True)
    p.add_argument("--out-public", required=True)
    p.set_defaults(func=_cmd_authority_setup)

    p = sub.add_parser("register", help="register an identity in the trace table")
    p.add_argument("--msk", required=True)
    p.add_argument("--table", required=True)
    p.add_argument("--id", required=True)
    p.set_defaults(func=_cmd_register)

    p = sub.add_parser("request-key", help="user side: blinded key request")
    p.add_argument("--mpk", required=True)
    p.add_argument("--id", required=True)
    p.add_argument("--out-request", default="request.pub")
    p.add_argument("--out-state", default="request.priv")
    p.set_defaults(func=_cmd_request_key)

    p = sub.add_parser("issue-key", help="CA side: verify the request and issue a partial key")
    p.add_argument("--mpk", required=True)
    p.add_argument("--msk", required=True)
    p.add_argument("--table", required=True)
    p.add_argument("--id", required=True)
    p.add_argument("--request", required=True)
    p.add_argument("--auth-secret", action="append", required=True)
    p.add_argument("--tree", action="append", required=True, help="per-authority access tree")
    p.add_argument("--out", default="partial.bin")
    p.set_defaults(func=_cmd_issue_key)

    p = sub.add_parser("finalize-key", help="user side: unblind and re-randomize the key")
    p.add_argument("--mpk", required=True)
    p.add_argument("--state", required=True)
    p.add_argument("--partial", required=True)
    p.add_argument("--out", default="user.key")
    p.set_defaults(func=_cmd_finalize_key)

    p = sub.add_parser("encrypt", help="hybrid-encrypt a file under an attribute set")
    p.add_argument("--mpk", required=True)
    p.add_argument("--auth-public", action="append", required=True)
    p.add_argument("--attrs", required=True, help="comma-separated k:i attribute ids")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_encrypt)

    p = sub.add_parser("decrypt", help="decrypt a file with a user key")
    p.add_argument("--mpk", required=True)
    p.add_argument("--key", required=True)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_decrypt)

    p = sub.add_parser("trace", help="recover the identity behind a leaked key")
    p.add_argument("--mpk", required=True)
    p.add_argument("--table", required=True)
    p.add_argument("--key", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_trace)

    p = sub.add_parser("bench", help="operation counts vs the predicted cost model")
    p.add_argument("--k1", type=int, default=4, help="ciphertext attribute count")
    p.add_argument("--k2", type=int, default=4, help="key attribute count")
    p.add_argument("--authorities", type=int, default=2)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("game", help="selective-set indistinguishability game statistics")
    p.add_argument("--runs", type=int, default=1000)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_game)

    return parser


_EXIT_CODES = [
    (PolicyNotSatisfied, 3),
    (ProofRejected, 4),
    (UntraceableKeyError, 5),
    (CorruptionError, 6),
    (ValidationError, 7),
    (BackendMismatch, 7),
    (VersionError, 7),
    (TamperingError, 8),
]


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except MaabeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        for klass, code in _EXIT_CODES:
            if isinstance(exc, klass):
                return code
        return 1


if __name__ == "__main__":
    sys.exit(main())

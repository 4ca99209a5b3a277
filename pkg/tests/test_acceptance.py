"""Acceptance suite: one test per criterion, each at its stated tolerance.

Run with ``pytest tests/test_acceptance.py -v`` for the per-criterion
pass/fail lines; each test also prints a one-line PASS summary with the
measured numbers (visible with -s or in the captured output).
"""

import random
import time
from collections import Counter

import pytest

from maabe import formats
from maabe.access_tree import AccessGate, AccessLeaf, AttributeId
from maabe.central import TraceTable, register_user, trace
from maabe.errors import (
    BackendMismatch,
    CorruptionError,
    GameAbort,
    UntraceableKeyError,
    ValidationError,
    VersionError,
)
from maabe.groups import TOY_PRIME_61, CurveGroup, ToyGroup
from maabe.harness import (
    GameAdversary,
    bench,
    build_system,
    collusion_authority_pool_test,
    collusion_user_pool_test,
    issue_user_key,
    run_ind_ss_cpa_game,
)
from maabe.hashing import id_to_scalar
from maabe.pok import PokTranscript, extract_witness, pok_commit, pok_respond, pok_verify
from maabe.scheme import (
    decrypt,
    decrypt_parts,
    encrypt,
    global_setup,
    key_wellformed,
    rerandomize_key,
    request_key,
)


def _report(criterion: int, text: str):
    print(f"\nACCEPTANCE {criterion}: PASS — {text}")


# ---------------------------------------------------------------------------
# randomized trial machinery (criterion 1)
# ---------------------------------------------------------------------------

ATTRS_PER_AUTH = 4


def _random_tree(rng, authority: int, depth: int):
    """Random nested tree of depth <= 3 over the authority's universe."""
    indices = list(range(1, ATTRS_PER_AUTH + 1))
    rng.shuffle(indices)

    def build(avail, level):
        if level == 0 or len(avail) == 1 or rng.random() < 0.35:
            return AccessLeaf(AttributeId(authority, avail.pop()))
        arity = rng.randrange(2, min(3, len(avail)) + 1)
        children = tuple(build(avail, level - 1) for _ in range(arity))
        return AccessGate(rng.randrange(1, len(children) + 1), children)

    return build(indices, depth)


def _satisfying_attrs(tree, rng):
    if isinstance(tree, AccessLeaf):
        return {tree.attribute}
    out = set()
    for index in rng.sample(range(len(tree.children)), tree.threshold):
        out |= _satisfying_attrs(tree.children[index], rng)
    return out


def _run_trials(group, n_trials, rng):
    systems = {k: build_system(group, k, ATTRS_PER_AUTH, rng) for k in (1, 2, 3, 4)}
    failures = 0
    for trial in range(n_trials):
        K = rng.randrange(1, 5)
        system = systems[K]
        trees = [_random_tree(rng, k, depth=rng.randrange(1, 4)) for k in range(1, K + 1)]
        key = issue_user_key(system, f"trial-{trial}", trees, rng)
        attrs = set()
        for tree in trees:
            attrs |= _satisfying_attrs(tree, rng)
        for k in range(1, K + 1):  # sprinkle extra attributes beyond the witness
            for i in range(1, ATTRS_PER_AUTH + 1):
                if rng.random() < 0.25:
                    attrs.add(AttributeId(k, i))
        message = group.random_target(rng)
        ct = encrypt(system.mpk, system.authority_publics, attrs, message, rng)
        if decrypt(system.mpk, key, ct) != message:
            failures += 1
    return failures


def test_criterion_1_end_to_end_correctness():
    rng = random.Random(1001)
    start = time.perf_counter()
    toy_failures = _run_trials(ToyGroup(TOY_PRIME_61), 1000, rng)
    toy_elapsed = time.perf_counter() - start
    assert toy_failures == 0
    assert toy_elapsed < 10.0, f"toy trials took {toy_elapsed:.1f}s (limit 10s)"

    start = time.perf_counter()
    curve_failures = _run_trials(CurveGroup(), 1000, rng)
    curve_elapsed = time.perf_counter() - start
    assert curve_failures == 0
    assert curve_elapsed < 120.0, f"curve trials took {curve_elapsed:.1f}s (limit 120s)"
    _report(
        1,
        f"1000/1000 round trips on both backends "
        f"(toy {toy_elapsed:.1f}s < 10s, curve {curve_elapsed:.1f}s < 120s)",
    )


def test_criterion_2_decryption_sub_identities():
    group = ToyGroup(TOY_PRIME_61)
    rng = random.Random(1002)
    p = group.order
    for run in range(100):
        system = build_system(group, 2, 2, rng)
        key = issue_user_key(
            system,
            f"user-{run}",
            [AccessLeaf(AttributeId(1, 1)), AccessLeaf(AttributeId(2, 1))],
            rng,
        )
        message = group.random_target(rng)
        attrs = [AttributeId(1, 1), AttributeId(2, 1)]
        ct = encrypt(system.mpk, system.authority_publics, attrs, message, rng)
        A, B, got = decrypt_parts(system.mpk, key, ct)
        s = group.discrete_log(ct.C2)
        assert group.discrete_log(A) == system.msk.w1 * system.msk.y0 * s % p
        assert group.discrete_log(B) == system.msk.w2 * system.msk.y0 * s % p
        assert got == message
    _report(2, "factor logs equal w1*y0*s and w2*y0*s exactly for 100 parameter sets")


def test_criterion_3_parameter_repair_oracle():
    """Integer-arithmetic replay over the toy field: the repaired parameters
    (Y1 = g3^y0, g1 = g^y0) satisfy the encryption blinding and both
    decryption factor identities; the literal Y1 = g^y0 does not."""
    rng = random.Random(1003)
    p = 101

    def replay(y1_log, params):
        x, y0, w1, w2, zh, zz, y_ku, s1, s0, r, s, idv = params
        w = (w1 + w2) % p
        d3 = (s0 + s1) % p
        d1 = ((y1_log + zh * d3) * pow(x, -1, p) + (idv + zz) * r) % p
        d2 = x * r % p
        d5 = w1 * (y0 - y_ku) % p
        c1, c2, c3 = x * s % p, s, zz * s % p
        blind = y0 * w * s % p  # what the encryptor multiplies in: e(g1,g4)^s
        A = (c2 * d5 + w1 * y_ku * s) % p
        B = (d1 * c1 - d3 * c2 * zh - (c2 * idv + c3) * d2) % p
        return A, B, blind

    checked = 0
    for _ in range(200):
        params = [rng.randrange(1, p) for _ in range(12)]
        x, y0, w1, w2 = params[0], params[1], params[2], params[3]
        if (w1 + w2) % p == 0 or w2 == 1:
            continue
        checked += 1
        A, B, blind = replay(w2 * y0 % p, params)  # repaired: Y1 = g3^y0
        assert A == y0 * w1 * params[10] % p
        assert B == y0 * w2 * params[10] % p
        assert (A + B) % p == blind
        A, B, blind = replay(y0 % p, params)  # literal: Y1 = g^y0
        assert (A + B) % p != blind
    assert checked >= 150
    _report(3, f"repair verified and literal parameterization refuted on {checked} toy instances")


def test_criterion_4_trace_100_identities():
    group = ToyGroup(TOY_PRIME_61)
    rng = random.Random(1004)
    system = build_system(group, 1, 2, rng)
    p = group.order
    identities = [f"holder-{i:03d}" for i in range(100)]
    keys = {}
    for identity in identities:
        key = issue_user_key(system, identity, [AccessLeaf(AttributeId(1, 1))], rng)
        keys[identity] = rerandomize_key(system.mpk, key, rng)  # once-more re-randomized

    for identity in identities:
        assert trace(system.mpk, system.table, keys[identity]) == identity

    # keys of unregistered identities are untraceable
    foreign = build_system(group, 1, 2, rng)
    for i in range(5):
        stray = issue_user_key(foreign, f"stranger-{i}", [AccessLeaf(AttributeId(1, 1))], rng)
        with pytest.raises(UntraceableKeyError):
            trace(system.mpk, system.table, stray)

    # wrong-id well-formedness is false on all cross pairings
    scalars = {identity: id_to_scalar(identity, p) for identity in identities}
    cross_failures = 0
    for owner, key in keys.items():
        for candidate in identities:
            ok = key_wellformed(system.mpk, key, scalars[candidate])
            if (candidate == owner) != ok:
                cross_failures += 1
    assert cross_failures == 0
    _report(4, "100/100 traces (after re-randomization), 9900/9900 cross pairings rejected")


def test_criterion_5_collusion_suites():
    group = ToyGroup(TOY_PRIME_61)
    user_report = collusion_user_pool_test(group, random.Random(1005))
    assert user_report.verdict == "PASS"
    authority_report = collusion_authority_pool_test(group, random.Random(1006))
    assert authority_report.verdict == "PASS"
    _report(
        5,
        f"user pool: {len(user_report.strategies)} strategies blocked, controls ok; "
        f"authority pool: blinding unreachable without d5, reachable with it",
    )


def test_criterion_6_proof_of_knowledge():
    group = ToyGroup(101)
    rng = random.Random(1007)
    mpk, msk = global_setup(group, 1, rng)
    p = group.order
    h_log = group.discrete_log(mpk.h)

    class SeqRng:
        def __init__(self, values):
            self.values = list(values)

        def randrange(self, *args):
            return self.values.pop(0)

    # completeness: every challenge accepts for honest transcripts
    s0, theta = 13, 31
    R = (mpk.h ** s0) * (mpk.X ** theta)
    accepted = 0
    for c in range(p):
        state, commitment = pok_commit(mpk, SeqRng([c % p, (3 * c + 1) % p]))
        z1, z2 = pok_respond(state, (s0, theta), c, p)
        accepted += pok_verify(mpk, R, PokTranscript(commitment, c, z1, z2))
    assert accepted == p

    # special soundness: extraction over a grid of transcript pairs
    extractions = 0
    for k1, k2 in [(0, 0), (5, 9), (77, 13), (100, 100)]:
        commitment = (mpk.h ** k1) * (mpk.X ** k2)
        for c1 in range(0, p, 17):
            for c2 in range(1, p, 23):
                if c1 == c2:
                    continue
                t1 = PokTranscript(commitment, c1, (k1 + c1 * s0) % p, (k2 + c1 * theta) % p)
                t2 = PokTranscript(commitment, c2, (k1 + c2 * s0) % p, (k2 + c2 * theta) % p)
                assert extract_witness(t1, t2, p) == (s0, theta)
                extractions += 1

    # exact witness indistinguishability: full (k1, k2, c) enumeration for
    # two representations of the same R
    R_log = (s0 * h_log + theta * msk.x) % p
    s0b = (s0 + 40) % p
    thetab = (R_log - s0b * h_log) * pow(msk.x, -1, p) % p

    def transcript_set(witness):
        out = set()
        sw, tw = witness
        for k1 in range(p):
            t_base = k1 * h_log
            for k2 in range(p):
                t_log = (t_base + k2 * msk.x) % p
                packed_base = t_log * p
                for c in range(p):
                    z1 = (k1 + c * sw) % p
                    z2 = (k2 + c * tw) % p
                    out.add(((packed_base + c) * p + z1) * p + z2)
        return out

    set_a = transcript_set((s0, theta))
    set_b = transcript_set((s0b, thetab))
    assert set_a == set_b
    assert len(set_a) == p ** 3  # each (k1,k2,c) yields a distinct transcript
    _report(
        6,
        f"completeness {accepted}/{p}, {extractions} extractions exact, "
        f"WI transcript sets identical over all {p ** 3} tuples",
    )


def test_criterion_7_operation_counts():
    group = ToyGroup(TOY_PRIME_61)
    rng = random.Random(1008)
    cases = [(1, 1, 1), (4, 4, 2), (16, 16, 4)]
    for k1, k2, K in cases:
        report = bench(group, k1=k1, k2=k2, authorities=K, rng=rng)
        # encryption: exactly 3 + k1 source exps, one target exp (blinding),
        # one pairing; zero tolerance
        assert report.encrypt_measured.source_exponentiations == 3 + k1, (k1, report)
        assert report.encrypt_measured.target_exponentiations == 1
        assert report.encrypt_measured.pairings == 1
        # key size: 1 scalar + (k2 + 3) source elements, from serialized form
        assert report.key_size["scalars"] == 1
        assert report.key_size["source_elements"] == k2 + 3
        # decryption: 4 pairings plus one per reconstructed leaf, and the
        # deviation from the predicted flat count is documented
        assert report.decrypt_measured.pairings == 4 + report.leaf_pairings
        assert report.leaf_pairings == k2
        assert any("leaf" in d for d in report.deviations)
    # counts are backend independent: corroborate one case on the curve
    curve_report = bench(CurveGroup(), k1=4, k2=4, authorities=2, rng=random.Random(1009))
    assert curve_report.encrypt_measured.source_exponentiations == 7
    assert curve_report.encrypt_measured.pairings == 1
    _report(7, f"exact encryption/key-size counts for k1 in {{1,4,16}}; "
               f"decryption deviation documented ({cases[1][1]} leaf pairings at k2=4)")


def test_criterion_8_game_harness():
    group = ToyGroup(TOY_PRIME_61)
    rng = random.Random(1010)
    target = [AttributeId(1, 1), AttributeId(2, 1)]

    adversary = GameAdversary(
        declare_target=lambda: target,
        key_queries=lambda ctx, phase: [],
        choose_messages=lambda ctx: (group.random_target(rng), group.random_target(rng)),
        guess=lambda ctx, ct: rng.randrange(2),
    )
    wins = sum(run_ind_ss_cpa_game(group, adversary, rng, 2, 2) for _ in range(1000))
    rate = wins / 1000
    assert abs(rate - 0.5) <= 0.05, f"uniform-guess win rate {rate}"

    # restriction enforcement: every violating script aborts
    aborts = 0
    violations = 20
    for i in range(violations):
        bad_rng = random.Random(2000 + i)
        violating = GameAdversary(
            declare_target=lambda: target,
            key_queries=lambda ctx, phase: [
                (f"cheater-{i}", [AccessLeaf(AttributeId(1, 1)), AccessLeaf(AttributeId(2, 1))])
            ],
            choose_messages=lambda ctx: (group.random_target(bad_rng), group.random_target(bad_rng)),
            guess=lambda ctx, ct: 0,
        )
        try:
            run_ind_ss_cpa_game(group, violating, bad_rng, 2, 2)
        except GameAbort:
            aborts += 1
    assert aborts == violations

    # positive control: a planted decrypting key wins every run
    from maabe.harness import GameContext

    plant_wins = 0
    plant_runs = 25
    for i in range(plant_runs):
        system = build_system(group, 2, 2, rng)
        planted = issue_user_key(
            system, "insider", [AccessLeaf(AttributeId(1, 1)), AccessLeaf(AttributeId(2, 1))], rng
        )
        m0, m1 = group.random_target(rng), group.random_target(rng)
        coin = rng.randrange(2)
        ct = encrypt(system.mpk, system.authority_publics, target, (m0, m1)[coin], rng)
        guess = 0 if decrypt(system.mpk, planted, ct) == m0 else 1
        plant_wins += guess == coin
    assert plant_wins == plant_runs
    _report(
        8,
        f"uniform-guess rate {rate:.3f} within 0.5±0.05 over 1000 runs, "
        f"{aborts}/{violations} violations aborted, {plant_wins}/{plant_runs} planted-key wins",
    )


def test_criterion_9_serialization_round_trips():
    group = ToyGroup(TOY_PRIME_61)
    rng = random.Random(1011)
    per_role = Counter()

    for i in range(100):
        system = build_system(group, rng.randrange(1, 3), 2, rng)
        mpk = system.mpk

        loaded = formats.mpk_from_bytes(formats.mpk_to_bytes(mpk), group)
        assert loaded.X == mpk.X and loaded.Y0 == mpk.Y0 and loaded.K == mpk.K
        per_role["MPK"] += 1

        blob = formats.msk_to_bytes(group, system.msk, system.ca.v_key)
        _, msk2, v2 = formats.msk_from_bytes(blob, group)
        assert msk2 == system.msk and v2 == system.ca.v_key
        per_role["MSK"] += 1

        secret = system.authority_secrets[1]
        public = system.authority_publics[1]
        if i % 2 == 0:
            _, loaded_pub = formats.authority_from_bytes(
                formats.authority_public_to_bytes(group, public), group
            )
            assert loaded_pub.attr_keys == public.attr_keys
        else:
            _, loaded_sec = formats.authority_from_bytes(
                formats.authority_secret_to_bytes(group, secret), group
            )
            assert loaded_sec.seed == secret.seed
            assert loaded_sec.attr_exponents == secret.attr_exponents
        per_role["AUTH"] += 1

        trees = [
            AccessGate(1, (AccessLeaf(AttributeId(k, 1)), AccessLeaf(AttributeId(k, 2))))
            for k in range(1, mpk.K + 1)
        ]
        key = issue_user_key(system, f"ser-{i}", trees, rng)
        _, key2 = formats.user_key_from_bytes(formats.user_key_to_bytes(group, key), group)
        assert (key2.d1, key2.d2, key2.d3, key2.d5) == (key.d1, key.d2, key.d3, key.d5)
        assert all(a.shares == b.shares and a.tree == b.tree for a, b in zip(key2.d4, key.d4))
        per_role["KEY"] += 1

        attrs = [AttributeId(k, 1) for k in range(1, mpk.K + 1)]
        ct = encrypt(mpk, system.authority_publics, attrs, group.random_target(rng), rng)
        sealed = bytes(rng.getrandbits(8) for _ in range(rng.randrange(0, 40))) or None
        _, ct2, sealed2 = formats.ciphertext_from_bytes(
            formats.ciphertext_to_bytes(group, ct, sealed), group
        )
        assert ct2.attr_set == ct.attr_set and ct2.C4 == ct.C4 and ct2.C5 == ct.C5
        assert sealed2 == sealed
        per_role["CT"] += 1

        request, transcript = request_key(mpk, f"ser-{i}", rng)
        if i % 2 == 0:
            _, ident, R2, t2 = formats.key_request_public_from_bytes(
                formats.key_request_public_to_bytes(group, f"ser-{i}", request.R, transcript),
                group,
            )
            assert ident == f"ser-{i}" and R2 == request.R and t2 == transcript
        else:
            _, ident, req2 = formats.key_request_private_from_bytes(
                formats.key_request_private_to_bytes(group, f"ser-{i}", request), group
            )
            assert ident == f"ser-{i}" and req2 == request
        per_role["POK"] += 1

    # trace table round trips (line-oriented role)
    import tempfile, os

    for i in range(100):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "t.tbl")
            table = TraceTable(group, path)
            for j in range(rng.randrange(1, 6)):
                register_user(group, bytes([i, j]) * 16, table, f"row-{i}-{j}")
            assert TraceTable(group, path).rows == table.rows
            per_role["TBL"] += 1

    assert all(per_role[role] == 100 for role in ("MPK", "MSK", "AUTH", "KEY", "CT", "POK", "TBL"))

    # corruption and mismatch error paths
    system = build_system(group, 1, 2, rng)
    blob = bytearray(formats.mpk_to_bytes(system.mpk))
    blob[len(blob) // 2] ^= 1
    with pytest.raises(CorruptionError):
        formats.mpk_from_bytes(bytes(blob), group)

    import hashlib

    blob = bytearray(formats.mpk_to_bytes(system.mpk))[:-32]
    blob[12] = 7
    blob = bytes(blob) + hashlib.sha256(bytes(blob)).digest()
    with pytest.raises(VersionError):
        formats.mpk_from_bytes(blob, group)

    with pytest.raises(BackendMismatch):
        formats.mpk_from_bytes(formats.mpk_to_bytes(system.mpk), CurveGroup())
    with pytest.raises(ValidationError):
        formats.user_key_from_bytes(formats.mpk_to_bytes(system.mpk), group)
    _report(9, "700 round trips across the 7 envelope roles; corruption, version, "
               "backend and role mismatches all rejected")

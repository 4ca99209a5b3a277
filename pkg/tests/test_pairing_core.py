"""Bilinear group contract: both backends, oracle exactness, counters."""

import random

import pytest
from scipy import stats

from maabe.errors import (
    BackendMismatch,
    ConfigError,
    UnsupportedBackendOp,
    ValidationError,
    VersionError,
)
from maabe.groups import CurveGroup, ToyGroup
from maabe.groups.curve import COFACTOR, GEN_X, GEN_Y, Q_FIELD, R_ORDER


def test_toy_pairing_known_logs(toy101):
    g = toy101.generator
    assert toy101.discrete_log(toy101.pair(g ** 10, g ** 20)) == 200 % 101 == 99
    assert toy101.pair(g ** 2, g ** 3) == toy101.target_generator ** 6
    assert toy101.pair(g ** 0, g ** 5).is_identity()


def test_toy_discrete_log(toy101):
    g = toy101.generator
    assert toy101.discrete_log(g ** 7) == 7
    assert toy101.discrete_log(toy101.pair(g ** 3, g ** 4)) == 12
    assert toy101.discrete_log(toy101.identity_source) == 0
    assert toy101.discrete_log(toy101.identity_target) == 0


def test_discrete_log_unsupported_on_curve(curve):
    with pytest.raises(UnsupportedBackendOp):
        curve.discrete_log(curve.generator)


@pytest.mark.parametrize("backend", ["toy61", "curve"])
def test_bilinearity_and_symmetry(backend, request):
    group = request.getfixturevalue(backend)
    rng = random.Random(11)
    g = group.generator
    for _ in range(5):
        a, b = group.random_scalar(rng), group.random_scalar(rng)
        lhs = group.pair(g ** a, g ** b)
        assert lhs == group.pair(g ** (a * b % group.order), g)
        assert lhs == group.pair(g ** b, g ** a)
        assert lhs == group.target_generator ** (a * b % group.order)


def test_nondegeneracy(toy101, curve):
    assert not toy101.target_generator.is_identity()
    assert not curve.target_generator.is_identity()
    assert not toy101.generator.is_identity()
    assert not curve.generator.is_identity()


def test_target_has_prime_order(curve):
    gt = curve.target_generator
    assert (gt ** curve.order).is_identity()
    assert not (gt ** 1).is_identity()


def test_curve_constants_are_consistent():
    # q = h*r - 1, q = 3 (mod 4), generator on curve with exact order r
    import gmpy2

    assert Q_FIELD == COFACTOR * R_ORDER - 1
    assert Q_FIELD % 4 == 3
    assert gmpy2.is_prime(Q_FIELD, 30)
    assert gmpy2.is_prime(R_ORDER, 30)
    assert (GEN_Y * GEN_Y - (GEN_X ** 3 + GEN_X)) % Q_FIELD == 0
    g = CurveGroup().generator
    assert (g ** R_ORDER).is_identity()
    assert not g.is_identity()


def test_random_scalar_contract(toy101):
    rng_a, rng_b = random.Random(0), random.Random(0)
    assert [toy101.random_scalar(rng_a) for _ in range(50)] == [
        toy101.random_scalar(rng_b) for _ in range(50)
    ]
    draws = [toy101.random_scalar(random.Random(i)) for i in range(200)]
    assert all(0 < d < 101 for d in draws)


def test_random_scalar_covers_field(toy101):
    # 10^4 draws over Z_101*: every residue class appears, chi-square sane
    rng = random.Random(7)
    draws = [toy101.random_scalar(rng) for _ in range(10_000)]
    counts = [draws.count(v) for v in range(1, 101)]
    assert all(counts), "some residue class never drawn"
    result = stats.chisquare(counts)
    assert result.pvalue > 1e-4


def test_random_source_deterministic(curve, toy61):
    for group in (curve, toy61):
        a = group.random_source(random.Random(3))
        b = group.random_source(random.Random(3))
        assert a == b
        assert not a.is_identity()


def test_mismatched_groups_rejected(toy101, toy61):
    with pytest.raises(ConfigError):
        toy101.generator * toy61.generator
    with pytest.raises(ConfigError):
        toy101.pair(toy101.generator, toy61.generator)
    with pytest.raises(ConfigError):
        toy101.target_generator * toy61.target_generator


def test_source_target_types_do_not_mix(toy101):
    with pytest.raises(TypeError):
        toy101.generator * toy101.target_generator
    with pytest.raises(TypeError):
        toy101.pair(toy101.generator, toy101.target_generator)


def test_counter_scope_exact(toy101):
    g = toy101.generator
    with toy101.count_ops() as ops:
        for _ in range(3):
            toy101.pair(g, g)
        _ = g ** 5
        _ = (g * g) / g
        _ = toy101.target_generator ** 2
    assert ops.pairings == 3
    assert ops.source_exponentiations == 1
    assert ops.multiplications == 2  # one mul, one div
    assert ops.target_exponentiations == 1


def test_counter_scopes_nest(toy101):
    g = toy101.generator
    with toy101.count_ops() as outer:
        toy101.pair(g, g)
        with toy101.count_ops() as inner:
            toy101.pair(g, g)
        assert inner.pairings == 1
    assert outer.pairings == 2
    # ops outside any scope are not attributed anywhere
    toy101.pair(g, g)
    assert outer.pairings == 2


def test_toy_group_requires_prime():
    with pytest.raises(ValidationError):
        ToyGroup(100)
    with pytest.raises(ValidationError):
        ToyGroup(2 ** 70)  # does not fit the 8-byte exponent payload


# -- canonical element encodings ------------------------------------------


def test_toy_encoding_round_trip(toy61):
    rng = random.Random(5)
    for _ in range(20):
        s = toy61.random_source(rng)
        assert toy61.source_from_bytes(s.to_bytes()) == s
        t = toy61.random_target(rng)
        assert toy61.target_from_bytes(t.to_bytes()) == t


def test_toy_encoding_rejects_noncanonical(toy101):
    good = (toy101.generator ** 5).to_bytes()
    with pytest.raises(ValidationError):
        toy101.source_from_bytes(good[:2] + (101).to_bytes(8, "big"))  # log >= p
    with pytest.raises(VersionError):
        toy101.source_from_bytes(bytes([9]) + good[1:])
    with pytest.raises(BackendMismatch):
        toy101.source_from_bytes(good[:1] + bytes([1]) + good[2:])
    with pytest.raises(ValidationError):
        toy101.source_from_bytes(good + b"\x00")  # wrong width


def test_curve_encoding_round_trip(curve):
    rng = random.Random(6)
    for _ in range(5):
        s = curve.random_source(rng)
        assert curve.source_from_bytes(s.to_bytes()) == s
        t = curve.random_target(rng)
        assert curve.target_from_bytes(t.to_bytes()) == t
    ident = curve.identity_source
    assert curve.source_from_bytes(ident.to_bytes()).is_identity()


def test_curve_encoding_rejects_bad_points(curve):
    rng = random.Random(8)
    encoded = bytearray(curve.random_source(rng).to_bytes())

    # x not on the curve (x=4 gives a quadratic non-residue for this q)
    bad = bytes(encoded[:3]) + (4).to_bytes(64, "big")
    with pytest.raises(ValidationError):
        curve.source_from_bytes(bad)

    # x out of field range
    bad = bytes(encoded[:3]) + (int(Q_FIELD)).to_bytes(64, "big")
    with pytest.raises(ValidationError):
        curve.source_from_bytes(bad)

    # nonzero x with identity flag
    bad = bytes(encoded[:2]) + b"\x00" + (3).to_bytes(64, "big")
    with pytest.raises(ValidationError):
        curve.source_from_bytes(bad)

    # point on the curve but outside the order-r subgroup: the base point
    # (3, sqrt(30)) has full order q+1
    import gmpy2

    y = gmpy2.powmod(30, (Q_FIELD + 1) // 4, Q_FIELD)
    flag = 2 | (int(y) & 1)
    bad = bytes(encoded[:2]) + bytes([flag]) + (3).to_bytes(64, "big")
    with pytest.raises(ValidationError):
        curve.source_from_bytes(bad)


def test_curve_target_encoding_rejects_off_group(curve):
    # an arbitrary nonzero field pair is almost surely not in the order-r subgroup
    bad = curve.target_generator.to_bytes()[:2] + (5).to_bytes(64, "big") + (7).to_bytes(64, "big")
    with pytest.raises(ValidationError):
        curve.target_from_bytes(bad)
    zero = curve.target_generator.to_bytes()[:2] + bytes(128)
    with pytest.raises(ValidationError):
        curve.target_from_bytes(zero)


def test_inverse_and_identity(toy101, curve):
    rng = random.Random(9)
    for group in (toy101, curve):
        a = group.random_source(rng)
        assert (a * a.inverse()).is_identity()
        assert (a ** 0).is_identity()
        assert a ** -1 == a.inverse()
        t = group.random_target(rng)
        assert (t / t).is_identity()

"""Symmetric pairing over the supersingular curve y^2 = x^3 + x.

The base field F_q has a 512-bit prime q with q = 3 (mod 4), which makes
the curve supersingular with #E(F_q) = q + 1 = h * r for the 160-bit
prime r (the scheme's scalar modulus).  G1 is the order-r subgroup and
the pairing is the reduced Tate pairing composed with the distortion map
phi(x, y) = (-x, i*y), i^2 = -1 in F_q^2:

    e(P, Q) = f_{r,P}(phi(Q)) ^ ((q^2 - 1) / r)

Because phi maps into an independent eigenspace, e is non-degenerate on
G1 x G1, and e(aG, bG) = e(G, G)^(ab) in both argument orders, so the
symmetric contract holds by construction.  G2 is the order-r subgroup of
F_q^2*, represented as coefficient pairs.

r = 2^159 + 2^17 + 1 and the cofactor h were chosen with low Hamming
weight to keep the Miller loop and the final exponentiation short.
Field arithmetic uses gmpy2 integers throughout.

This backend targets roughly the 80-bit security of the classic SS512
setting; it is not constant-time and makes no side-channel claims.
"""

from __future__ import annotations

import gmpy2
from gmpy2 import mpz

from ..errors import ValidationError
from .base import (
    BACKEND_CURVE,
    ELEMENT_ENCODING_VERSION,
    Group,
    GroupDescriptor,
    SourceElement,
    TargetElement,
    backend_byte,
)

R_ORDER = 2**159 + 2**17 + 1
COFACTOR = 2**352 + 4 * 459
Q_FIELD = mpz(COFACTOR * R_ORDER - 1)

_FIELD_WIDTH = 64  # 512-bit q
_SQRT_EXP = (Q_FIELD + 1) // 4

# g = h * P0 for the base point P0 = (3, sqrt(30)); frozen, re-derived in tests.
GEN_X = mpz(0x415E338398B7E1009BABAC232162DE7E3C55A157DA8AD3CDCA68DABCBBD9D805FCAAA727EC3BCAE2A71FC16574FE79A61ED43DA2C072BA4C4C1861084012A3EA)
GEN_Y = mpz(0x739CDAD255403AD3DE5F3B9E53763FC176CAF6F75C4CB9B5C7EDA93FFC46FB048A1CB22EE269507D747A1475CBB4FE5CEF9599CBDCC8DECE96B257377132D7EA)

_R_BITS = bin(R_ORDER)[3:]  # most significant bit consumed by loop setup
_ONE = mpz(1)
_ZERO = mpz(0)


def _invert(a):
    return gmpy2.invert(a, Q_FIELD)


# ---------------------------------------------------------------------------
# affine point arithmetic; points are (x, y) mpz pairs, None is infinity
# ---------------------------------------------------------------------------


def _pt_add(p1, p2):
    if p1 is None:
        return p2
    if p2 is None:
        return p1
    x1, y1 = p1
    x2, y2 = p2
    if x1 == x2:
        if (y1 + y2) % Q_FIELD == 0:
            return None
        lam = (3 * x1 * x1 + 1) * _invert(2 * y1) % Q_FIELD
    else:
        lam = (y2 - y1) * _invert(x2 - x1) % Q_FIELD
    x3 = (lam * lam - x1 - x2) % Q_FIELD
    return (x3, (lam * (x1 - x3) - y1) % Q_FIELD)


def _pt_neg(p):
    if p is None:
        return None
    return (p[0], -p[1] % Q_FIELD)


def _pt_mul(k, p):
    """Scalar multiplication via Jacobian double-and-add; returns affine."""
    if p is None or k == 0:
        return None
    x, y = p
    X1 = Y1 = Z1 = None
    for bit in bin(k)[2:]:
        if Z1 is not None:
            # dbl-2007-bl specialised to a = 1
            XX = X1 * X1 % Q_FIELD
            YY = Y1 * Y1 % Q_FIELD
            YYYY = YY * YY % Q_FIELD
            ZZ = Z1 * Z1 % Q_FIELD
            t = X1 + YY
            S = 2 * (t * t - XX - YYYY) % Q_FIELD
            M = (3 * XX + ZZ * ZZ) % Q_FIELD
            T = (M * M - 2 * S) % Q_FIELD
            t = Y1 + Z1
            Z1 = (t * t - YY - ZZ) % Q_FIELD
            Y1 = (M * (S - T) - 8 * YYYY) % Q_FIELD
            X1 = T
        if bit == "1":
            if Z1 is None:
                X1, Y1, Z1 = mpz(x), mpz(y), _ONE
            elif Z1 == 0:
                X1, Y1, Z1 = mpz(x), mpz(y), _ONE
            else:
                # mixed addition (second point affine), madd-2007-bl
                ZZ1 = Z1 * Z1 % Q_FIELD
                U2 = x * ZZ1 % Q_FIELD
                S2 = y * Z1 % Q_FIELD * ZZ1 % Q_FIELD
                H = (U2 - X1) % Q_FIELD
                rr = 2 * (S2 - Y1) % Q_FIELD
                if H == 0:
                    if rr == 0:
                        XX = X1 * X1 % Q_FIELD
                        YY = Y1 * Y1 % Q_FIELD
                        YYYY = YY * YY % Q_FIELD
                        ZZ = ZZ1
                        t = X1 + YY
                        S = 2 * (t * t - XX - YYYY) % Q_FIELD
                        M = (3 * XX + ZZ * ZZ) % Q_FIELD
                        T = (M * M - 2 * S) % Q_FIELD
                        t = Y1 + Z1
                        Z1 = (t * t - YY - ZZ) % Q_FIELD
                        Y1 = (M * (S - T) - 8 * YYYY) % Q_FIELD
                        X1 = T
                    else:
                        X1, Y1, Z1 = _ONE, _ONE, _ZERO  # infinity
                    continue
                HH = H * H % Q_FIELD
                I = 4 * HH % Q_FIELD
                J = H * I % Q_FIELD
                V = X1 * I % Q_FIELD
                X1n = (rr * rr - J - 2 * V) % Q_FIELD
                Y1n = (rr * (V - X1n) - 2 * Y1 * J) % Q_FIELD
                t = Z1 + H
                Z1 = (t * t - ZZ1 - HH) % Q_FIELD
                X1, Y1 = X1n, Y1n
    if Z1 is None or Z1 == 0:
        return None
    zi = _invert(Z1)
    zi2 = zi * zi % Q_FIELD
    return (X1 * zi2 % Q_FIELD, Y1 * zi2 % Q_FIELD * zi % Q_FIELD)


# ---------------------------------------------------------------------------
# F_q^2 = F_q[i] / (i^2 + 1); elements are (a, b) meaning a + b*i
# ---------------------------------------------------------------------------


def _fq2_mul(a0, a1, b0, b1):
    t0 = a0 * b0
    t1 = a1 * b1
    t2 = (a0 + a1) * (b0 + b1)
    return (t0 - t1) % Q_FIELD, (t2 - t0 - t1) % Q_FIELD


def _fq2_sqr(a0, a1):
    return (a0 + a1) * (a0 - a1) % Q_FIELD, 2 * a0 * a1 % Q_FIELD


def _fq2_inv(a0, a1):
    ni = _invert(a0 * a0 + a1 * a1)
    return a0 * ni % Q_FIELD, -a1 * ni % Q_FIELD


def _fq2_pow(a0, a1, e):
    r0, r1 = _ONE, _ZERO
    while e:
        if e & 1:
            r0, r1 = _fq2_mul(r0, r1, a0, a1)
        a0, a1 = _fq2_sqr(a0, a1)
        e >>= 1
    return r0, r1


# ---------------------------------------------------------------------------
# Tate pairing with denominator elimination
# ---------------------------------------------------------------------------


def _tate(p, q):
    """f_{r,p}(phi(q)) ^ ((q^2-1)/r).  phi(q) has x-coordinate in F_q, so
    vertical lines live in the subfield and are erased by the q-1 part of
    the final exponentiation; only line numerators are accumulated."""
    if p is None or q is None:
        return (_ONE, _ZERO)
    xq, yq = q  # evaluation point is phi(q) = (-xq, i*yq)
    xp, yp = p
    f0, f1 = _ONE, _ZERO
    xt, yt = xp, yp
    for bit in _R_BITS:
        # tangent line at T evaluated at phi(q): (lam*(xq + xt) - yt) + i*yq
        lam = (3 * xt * xt + 1) * _invert(2 * yt) % Q_FIELD
        l0 = (lam * (xq + xt) - yt) % Q_FIELD
        f0, f1 = (f0 + f1) * (f0 - f1) % Q_FIELD, 2 * f0 * f1 % Q_FIELD
        t0 = f0 * l0
        t1 = f1 * yq
        t2 = (f0 + f1) * (l0 + yq)
        f0, f1 = (t0 - t1) % Q_FIELD, (t2 - t0 - t1) % Q_FIELD
        x2 = (lam * lam - 2 * xt) % Q_FIELD
        yt = (lam * (xt - x2) - yt) % Q_FIELD
        xt = x2
        if bit == "1":
            if xt == xp and (yt + yp) % Q_FIELD == 0:
                # T + P = infinity: vertical line, subfield value, skip
                continue
            lam = (yt - yp) * _invert(xt - xp) % Q_FIELD
            l0 = (lam * (xq + xt) - yt) % Q_FIELD
            t0 = f0 * l0
            t1 = f1 * yq
            t2 = (f0 + f1) * (l0 + yq)
            f0, f1 = (t0 - t1) % Q_FIELD, (t2 - t0 - t1) % Q_FIELD
            x2 = (lam * lam - xt - xp) % Q_FIELD
            yt = (lam * (xt - x2) - yt) % Q_FIELD
            xt = x2
    # final exponentiation: (q^2-1)/r = (q-1) * h.
    # z^(q-1) = conj(z) / z, then raise to the cofactor h.
    ni = _invert(f0 * f0 + f1 * f1)
    z0 = (f0 * f0 - f1 * f1) * ni % Q_FIELD
    z1 = -2 * f0 * f1 * ni % Q_FIELD
    return _fq2_pow(z0, z1, COFACTOR)


# ---------------------------------------------------------------------------
# element classes
# ---------------------------------------------------------------------------


class CurveSource(SourceElement):
    __slots__ = ("point",)

    def __init__(self, group, point):
        super().__init__(group)
        self.point = point  # affine (x, y) or None

    def _mul(self, other):
        return CurveSource(self.group, _pt_add(self.point, other.point))

    def _pow(self, exponent):
        return CurveSource(self.group, _pt_mul(exponent, self.point))

    def inverse(self):
        return CurveSource(self.group, _pt_neg(self.point))

    def is_identity(self):
        return self.point is None

    def __eq__(self, other):
        return isinstance(other, CurveSource) and other.point == self.point

    def __hash__(self):
        return hash(("ss512-g1", None if self.point is None else int(self.point[0])))

    def __repr__(self):
        if self.point is None:
            return "CurveSource(infinity)"
        return f"CurveSource(x={int(self.point[0]) % 10**8}...)"

    def to_bytes(self):
        head = bytes([ELEMENT_ENCODING_VERSION, backend_byte(BACKEND_CURVE)])
        if self.point is None:
            return head + b"\x00" + bytes(_FIELD_WIDTH)
        x, y = self.point
        flag = 2 | (int(y) & 1)
        return head + bytes([flag]) + int(x).to_bytes(_FIELD_WIDTH, "big")


class CurveTarget(TargetElement):
    __slots__ = ("value",)

    def __init__(self, group, value):
        super().__init__(group)
        self.value = value  # (a, b) in F_q^2

    def _mul(self, other):
        a0, a1 = self.value
        b0, b1 = other.value
        return CurveTarget(self.group, _fq2_mul(a0, a1, b0, b1))

    def _pow(self, exponent):
        a0, a1 = self.value
        return CurveTarget(self.group, _fq2_pow(a0, a1, exponent))

    def inverse(self):
        a0, a1 = self.value
        return CurveTarget(self.group, _fq2_inv(a0, a1))

    def is_identity(self):
        return self.value == (1, 0)

    def __eq__(self, other):
        return isinstance(other, CurveTarget) and other.value == self.value

    def __hash__(self):
        return hash(("ss512-g2", int(self.value[0])))

    def __repr__(self):
        return f"CurveTarget({int(self.value[0]) % 10**8}...)"

    def to_bytes(self):
        head = bytes([ELEMENT_ENCODING_VERSION, backend_byte(BACKEND_CURVE)])
        a, b = self.value
        return head + int(a).to_bytes(_FIELD_WIDTH, "big") + int(b).to_bytes(_FIELD_WIDTH, "big")


class CurveGroup(Group):
    """Production backend over the fixed SS512-style curve."""

    def __init__(self):
        super().__init__(GroupDescriptor(prime_order=R_ORDER, backend_id=BACKEND_CURVE))
        self._g = CurveSource(self, (GEN_X, GEN_Y))
        self._gt = None

    @property
    def generator(self):
        return self._g

    @property
    def identity_source(self):
        return CurveSource(self, None)

    @property
    def identity_target(self):
        return CurveTarget(self, (_ONE, _ZERO))

    @property
    def target_generator(self):
        if self._gt is None:
            self._gt = CurveTarget(self, _tate(self._g.point, self._g.point))
        return self._gt

    def _pair(self, a, b):
        return CurveTarget(self, _tate(a.point, b.point))

    # -- decoding with full validation -------------------------------------

    @property
    def source_width(self) -> int:
        return 2 + 1 + _FIELD_WIDTH

    @property
    def target_width(self) -> int:
        return 2 + 2 * _FIELD_WIDTH

    def source_from_bytes(self, data: bytes) -> CurveSource:
        payload = self._check_envelope_prefix(data, self.source_width)
        flag, xbytes = payload[0], payload[1:]
        if flag == 0:
            if any(xbytes):
                raise ValidationError("non-canonical identity encoding")
            return CurveSource(self, None)
        if flag not in (2, 3):
            raise ValidationError(f"unknown point compression flag {flag}")
        x = mpz(int.from_bytes(xbytes, "big"))
        if x >= Q_FIELD:
            raise ValidationError("x coordinate out of field range")
        rhs = (x * x % Q_FIELD * x + x) % Q_FIELD
        y = gmpy2.powmod(rhs, _SQRT_EXP, Q_FIELD)
        if y * y % Q_FIELD != rhs:
            raise ValidationError("x coordinate is not on the curve")
        if (int(y) & 1) != (flag & 1):
            y = -y % Q_FIELD
        point = (x, y)
        if _pt_mul(R_ORDER, point) is not None:
            raise ValidationError("point is not in the order-r subgroup")
        return CurveSource(self, point)

    def target_from_bytes(self, data: bytes) -> CurveTarget:
        payload = self._check_envelope_prefix(data, self.target_width)
        a = mpz(int.from_bytes(payload[:_FIELD_WIDTH], "big"))
        b = mpz(int.from_bytes(payload[_FIELD_WIDTH:], "big"))
        if a >= Q_FIELD or b >= Q_FIELD:
            raise ValidationError("coefficient out of field range")
        if a == 0 and b == 0:
            raise ValidationError("zero is not a group element")
        if _fq2_pow(a, b, R_ORDER) != (1, 0):
            raise ValidationError("element is not in the order-r subgroup")
        return CurveTarget(self, (a, b))

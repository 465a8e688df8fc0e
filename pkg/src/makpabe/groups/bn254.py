"""BN254 (alt_bn128) backend with the optimal ate pairing (curve id "bn254").

Asymmetric type-3 setup: KEY elements live on E(F_p): y^2 = x^3 + 3,
CIPHER elements on the sextic D-twist E'(F_p^2): y^2 = x^3 + 3/xi, and
TARGET elements in the cyclotomic subgroup of F_p^12.  The tower is
F_p^2 = F_p[i]/(i^2+1), F_p^6 = F_p^2[v]/(v^3 - xi) with xi = 9 + i,
F_p^12 = F_p^6[w]/(w^2 - v).

The Miller loop follows the classic affine recipe: untwist the G2 point
into E(F_p^12), embed the G1 point coordinatewise, run double-and-add
over the ate loop count 6x+2, then the two Frobenius adjustment lines,
then a plain final exponentiation by (p^12 - 1)/r.  Slow (fractions of
a second per pairing, it is pure Python) but straightforward to check.

Everything is affine and nothing here is constant-time; equality checks
go through canonical bytes with hmac.compare_digest, which is as far as
timing hygiene can go in this medium.
"""

from __future__ import annotations

import hmac

from . import Backend, PairingContext, Role

P = 21888242871839275222246405745257275088696311157297823662689037894645226208583
R = 21888242871839275222246405745257275088548364400416034343698204186575808495617
ATE = 29793968203157093288          # 6x + 2 for the BN parameter x
FINAL_EXP = (P**12 - 1) // R

B1 = 3                              # G1: y^2 = x^3 + 3
XI = (9, 1)

G1 = (1, 2)
G2 = (
    (10857046999023057135944570762232829481370756359578518086990519993285655852781,
     11559732032986387107991004021392285783925812861821192530917403151452391805634),
    (8495653923123431417604973247489272438418190587263600148770280649306958101930,
     4082367875863433681332203403145435568316851327593401208105741076214120093531),
)

_NB = 32                            # bytes per F_p coordinate


# -- F_p^2 ---------------------------------------------------------------------

F2_ZERO = (0, 0)
F2_ONE = (1, 0)


def f2_add(u, v):
    return ((u[0] + v[0]) % P, (u[1] + v[1]) % P)


def f2_sub(u, v):
    return ((u[0] - v[0]) % P, (u[1] - v[1]) % P)


def f2_neg(u):
    return (-u[0] % P, -u[1] % P)


def f2_mul(u, v):
    a, b = u
    c, d = v
    ac = a * c
    bd = b * d
    return ((ac - bd) % P, ((a + b) * (c + d) - ac - bd) % P)


def f2_inv(u):
    a, b = u
    n = pow((a * a + b * b) % P, -1, P)
    return (a * n % P, -b * n % P)


B2 = f2_mul((B1, 0), f2_inv(XI))    # twist constant 3/xi


# -- F_p^6 = F_p^2[v]/(v^3 - xi), elements (a0, a1, a2) --------------------------

F6_ZERO = (F2_ZERO, F2_ZERO, F2_ZERO)
F6_ONE = (F2_ONE, F2_ZERO, F2_ZERO)


def _xi_mul(u):
    return f2_mul(XI, u)


def f6_add(x, y):
    return (f2_add(x[0], y[0]), f2_add(x[1], y[1]), f2_add(x[2], y[2]))


def f6_sub(x, y):
    return (f2_sub(x[0], y[0]), f2_sub(x[1], y[1]), f2_sub(x[2], y[2]))


def f6_neg(x):
    return (f2_neg(x[0]), f2_neg(x[1]), f2_neg(x[2]))


def f6_mul(x, y):
    a0, a1, a2 = x
    b0, b1, b2 = y
    t0 = f2_mul(a0, b0)
    t1 = f2_mul(a1, b1)
    t2 = f2_mul(a2, b2)
    c0 = f2_add(t0, _xi_mul(f2_sub(f2_mul(f2_add(a1, a2), f2_add(b1, b2)), f2_add(t1, t2))))
    c1 = f2_add(f2_sub(f2_mul(f2_add(a0, a1), f2_add(b0, b1)), f2_add(t0, t1)), _xi_mul(t2))
    c2 = f2_add(f2_sub(f2_mul(f2_add(a0, a2), f2_add(b0, b2)), f2_add(t0, t2)), t1)
    return (c0, c1, c2)


def f6_mul_v(x):
    # multiply by v: (a0, a1, a2) -> (xi*a2, a0, a1)
    return (_xi_mul(x[2]), x[0], x[1])


def f6_inv(x):
    a0, a1, a2 = x
    t0 = f2_sub(f2_mul(a0, a0), _xi_mul(f2_mul(a1, a2)))
    t1 = f2_sub(_xi_mul(f2_mul(a2, a2)), f2_mul(a0, a1))
    t2 = f2_sub(f2_mul(a1, a1), f2_mul(a0, a2))
    det = f2_add(f2_mul(a0, t0), _xi_mul(f2_add(f2_mul(a2, t1), f2_mul(a1, t2))))
    d = f2_inv(det)
    return (f2_mul(t0, d), f2_mul(t1, d), f2_mul(t2, d))


# -- F_p^12 = F_p^6[w]/(w^2 - v), elements (c0, c1) ------------------------------

F12_ZERO = (F6_ZERO, F6_ZERO)
F12_ONE = (F6_ONE, F6_ZERO)


def f12_add(x, y):
    return (f6_add(x[0], y[0]), f6_add(x[1], y[1]))


def f12_sub(x, y):
    return (f6_sub(x[0], y[0]), f6_sub(x[1], y[1]))


def f12_neg(x):
    return (f6_neg(x[0]), f6_neg(x[1]))


def f12_mul(x, y):
    a0, a1 = x
    b0, b1 = y
    t0 = f6_mul(a0, b0)
    t1 = f6_mul(a1, b1)
    c1 = f6_sub(f6_mul(f6_add(a0, a1), f6_add(b0, b1)), f6_add(t0, t1))
    return (f6_add(t0, f6_mul_v(t1)), c1)


def f12_inv(x):
    a0, a1 = x
    d = f6_inv(f6_sub(f6_mul(a0, a0), f6_mul_v(f6_mul(a1, a1))))
    return (f6_mul(a0, d), f6_neg(f6_mul(a1, d)))


def f12_conj(x):
    return (x[0], f6_neg(x[1]))


def f12_pow(x, k):
    acc = F12_ONE
    base = x
    while k:
        if k & 1:
            acc = f12_mul(acc, base)
        base = f12_mul(base, base)
        k >>= 1
    return acc


# -- curve arithmetic over F_p and F_p^2 (affine, None = infinity) ----------------

def g1_on_curve(pt):
    if pt is None:
        return True
    x, y = pt
    return 0 <= x < P and 0 <= y < P and (y * y - x * x * x - B1) % P == 0


def g1_add(p1, p2):
    if p1 is None:
        return p2
    if p2 is None:
        return p1
    x1, y1 = p1
    x2, y2 = p2
    if x1 == x2:
        if (y1 + y2) % P == 0:
            return None
        m = 3 * x1 * x1 * pow(2 * y1, -1, P) % P
    else:
        m = (y2 - y1) * pow(x2 - x1, -1, P) % P
    x3 = (m * m - x1 - x2) % P
    return (x3, (m * (x1 - x3) - y1) % P)


def g1_neg(pt):
    return None if pt is None else (pt[0], -pt[1] % P)


def g1_mul(pt, k):
    acc = None
    add = pt
    while k:
        if k & 1:
            acc = g1_add(acc, add)
        add = g1_add(add, add)
        k >>= 1
    return acc


def g2_on_curve(pt):
    if pt is None:
        return True
    x, y = pt
    lhs = f2_mul(y, y)
    rhs = f2_add(f2_mul(f2_mul(x, x), x), B2)
    return lhs == rhs and all(0 <= c < P for c in (*x, *y))


def g2_add(p1, p2):
    if p1 is None:
        return p2
    if p2 is None:
        return p1
    x1, y1 = p1
    x2, y2 = p2
    if x1 == x2:
        if f2_add(y1, y2) == F2_ZERO:
            return None
        m = f2_mul(f2_mul((3, 0), f2_mul(x1, x1)), f2_inv(f2_add(y1, y1)))
    else:
        m = f2_mul(f2_sub(y2, y1), f2_inv(f2_sub(x2, x1)))
    x3 = f2_sub(f2_sub(f2_mul(m, m), x1), x2)
    return (x3, f2_sub(f2_mul(m, f2_sub(x1, x3)), y1))


def g2_neg(pt):
    return None if pt is None else (pt[0], f2_neg(pt[1]))


def g2_mul(pt, k):
    acc = None
    add = pt
    while k:
        if k & 1:
            acc = g2_add(acc, add)
        add = g2_add(add, add)
        k >>= 1
    return acc


# -- pairing ------------------------------------------------------------------

def _embed_fp(a):
    return (((a % P, 0), F2_ZERO, F2_ZERO), F6_ZERO)


def _untwist(pt):
    # E'(F_p^2) -> E(F_p^12): (x, y) -> (x*w^2, y*w^3) = (x*v, (y*v)*w)
    x, y = pt
    return (((F2_ZERO, x, F2_ZERO), F6_ZERO), (F6_ZERO, (F2_ZERO, y, F2_ZERO)))


def _linefunc(p1, p2, t):
    # line through p1 and p2 (tangent when equal) evaluated at t, in F_p^12
    x1, y1 = p1
    x2, y2 = p2
    xt, yt = t
    if x1 != x2:
        m = f12_mul(f12_sub(y2, y1), f12_inv(f12_sub(x2, x1)))
    elif y1 == y2:
        m = f12_mul(f12_mul(_embed_fp(3), f12_mul(x1, x1)), f12_inv(f12_add(y1, y1)))
    else:
        return f12_sub(xt, x1)
    return f12_sub(f12_mul(m, f12_sub(xt, x1)), f12_sub(yt, y1))


def _ec12_double(pt):
    x1, y1 = pt
    m = f12_mul(f12_mul(_embed_fp(3), f12_mul(x1, x1)), f12_inv(f12_add(y1, y1)))
    x3 = f12_sub(f12_sub(f12_mul(m, m), x1), x1)
    return (x3, f12_sub(f12_mul(m, f12_sub(x1, x3)), y1))


def _ec12_add(p1, p2):
    x1, y1 = p1
    x2, y2 = p2
    if x1 == x2 and y1 == y2:
        return _ec12_double(p1)
    m = f12_mul(f12_sub(y2, y1), f12_inv(f12_sub(x2, x1)))
    x3 = f12_sub(f12_sub(f12_mul(m, m), x1), x2)
    return (x3, f12_sub(f12_mul(m, f12_sub(x1, x3)), y1))


def pairing(g1pt, g2pt):
    """Optimal ate pairing e(g1pt, g2pt) with g1pt on E(F_p), g2pt on the twist."""
    if g1pt is None or g2pt is None:
        return F12_ONE
    q12 = _untwist(g2pt)
    p12 = (_embed_fp(g1pt[0]), _embed_fp(g1pt[1]))
    rpt = q12
    f = F12_ONE
    for bit in bin(ATE)[3:]:
        f = f12_mul(f12_mul(f, f), _linefunc(rpt, rpt, p12))
        rpt = _ec12_double(rpt)
        if bit == "1":
            f = f12_mul(f, _linefunc(rpt, q12, p12))
            rpt = _ec12_add(rpt, q12)
    # Frobenius adjustment lines: Q1 = pi(Q), nQ2 = -pi^2(Q)
    q1 = (f12_pow(q12[0], P), f12_pow(q12[1], P))
    nq2 = (f12_pow(q1[0], P), f12_neg(f12_pow(q1[1], P)))
    f = f12_mul(f, _linefunc(rpt, q1, p12))
    rpt = _ec12_add(rpt, q1)
    f = f12_mul(f, _linefunc(rpt, nq2, p12))
    return f12_pow(f, FINAL_EXP)


_GT_GEN = None  # e(G1, G2), computed once per process


class BN254Context(PairingContext):
    backend = Backend.CURVE
    symmetric = False
    production = True
    name = "bn254"
    order = R

    def _raw_generator(self, role):
        if role is Role.KEY:
            return G1
        if role is Role.CIPHER:
            return G2
        global _GT_GEN
        if _GT_GEN is None:
            _GT_GEN = pairing(G1, G2)
        return _GT_GEN

    def _raw_identity(self, role):
        return F12_ONE if role is Role.TARGET else None

    def _raw_exp(self, role, data, k):
        if role is Role.TARGET:
            return f12_pow(data, k)
        if role is Role.KEY:
            return g1_mul(data, k)
        return g2_mul(data, k)

    def _raw_combine(self, role, a, b):
        if role is Role.TARGET:
            return f12_mul(a, b)
        if role is Role.KEY:
            return g1_add(a, b)
        return g2_add(a, b)

    def _raw_invert(self, role, data):
        if role is Role.TARGET:
            # valid targets sit in the cyclotomic subgroup, where
            # conjugation is inversion
            return f12_conj(data)
        if role is Role.KEY:
            return g1_neg(data)
        return g2_neg(data)

    def _raw_eq(self, role, a, b):
        return hmac.compare_digest(self._raw_bytes(role, a), self._raw_bytes(role, b))

    def _raw_pair(self, a, b):
        return pairing(a, b)

    # serialization: fixed-width big-endian limbs, tag byte on points

    def _raw_bytes(self, role, data):
        if role is Role.TARGET:
            limbs = [c for f6 in data for f2 in f6 for c in f2]
            return b"".join(c.to_bytes(_NB, "big") for c in limbs)
        if role is Role.KEY:
            if data is None:
                return b"\x00" * (2 * _NB + 1)
            return b"\x04" + data[0].to_bytes(_NB, "big") + data[1].to_bytes(_NB, "big")
        if data is None:
            return b"\x00" * (4 * _NB + 1)
        (xa, xb), (ya, yb) = data
        return b"\x04" + b"".join(c.to_bytes(_NB, "big") for c in (xa, xb, ya, yb))

    def _raw_from_bytes(self, role, blob):
        if role is Role.TARGET:
            if len(blob) != 12 * _NB:
                raise ValueError("bad target element length")
            limbs = [int.from_bytes(blob[i * _NB:(i + 1) * _NB], "big") for i in range(12)]
            if any(c >= P for c in limbs):
                raise ValueError("target coordinate out of range")
            u = tuple(
                tuple((limbs[6 * h + 2 * j], limbs[6 * h + 2 * j + 1]) for j in range(3))
                for h in range(2))
            if u == F12_ZERO or f12_pow(u, R) != F12_ONE:
                raise ValueError("target element not in the order-r subgroup")
            return u
        if role is Role.KEY:
            if len(blob) != 2 * _NB + 1:
                raise ValueError("bad point encoding length")
            if blob[0] == 0:
                if any(blob[1:]):
                    raise ValueError("bad infinity encoding")
                return None
            if blob[0] != 4:
                raise ValueError("bad point encoding tag")
            pt = (int.from_bytes(blob[1:_NB + 1], "big"), int.from_bytes(blob[_NB + 1:], "big"))
            if not g1_on_curve(pt):
                raise ValueError("point not on curve")
            # G1 has cofactor 1, so on-curve means in-subgroup
            return pt
        if len(blob) != 4 * _NB + 1:
            raise ValueError("bad point encoding length")
        if blob[0] == 0:
            if any(blob[1:]):
                raise ValueError("bad infinity encoding")
            return None
        if blob[0] != 4:
            raise ValueError("bad point encoding tag")
        xa, xb, ya, yb = (
            int.from_bytes(blob[1 + i * _NB:1 + (i + 1) * _NB], "big") for i in range(4))
        pt = ((xa, xb), (ya, yb))
        if not g2_on_curve(pt):
            raise ValueError("point not on twist curve")
        if g2_mul(pt, R) is not None:
            raise ValueError("point not in the order-r subgroup")
        return pt

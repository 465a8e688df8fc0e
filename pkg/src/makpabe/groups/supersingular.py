"""Supersingular toy curve with a symmetric pairing (curve id "ss61").

y^2 = x^3 + x over F_q with q = 20*(2^61 - 1) - 1.  Since q = 3 (mod 4)
the curve is supersingular with trace zero, so #E(F_q) = q + 1 = 20*r
for the Mersenne prime r = 2^61 - 1, and the embedding degree is 2.

The pairing is the modified Tate pairing e(P, Q) = t(P, phi(Q)) with the
distortion map phi(x, y) = (-x, i*y) into E(F_q^2), i^2 = -1.  Vertical
lines can be dropped from the Miller loop (denominator elimination):
the final exponent (q^2 - 1)/r = (q - 1)*20 kills every F_q-rational
factor, and verticals evaluated at phi(Q) land in F_q.

This is a TEST curve.  A 61-bit subgroup has no security margin at all;
its job is to give the suite a real pairing that runs in well under a
millisecond.  Use bn254 when the parameters should resemble deployment.
"""

from __future__ import annotations

import hmac

from . import Backend, PairingContext, Role

R = 2**61 - 1            # subgroup order, Mersenne prime
COFACTOR = 20
Q = COFACTOR * R - 1     # 46116860184273879019, field prime, q = 3 mod 4

# Generator: cofactor * P0 where P0 is the curve point with the smallest
# x >= 1 such that x^3 + x is a nonzero square, taking the smaller root.
# Re-derived from scratch in the test suite.
GX = 2224278273420528617
GY = 2686199454468162702

_COORD_BYTES = 9         # q has 66 bits


# -- F_q^2 = F_q[i]/(i^2 + 1), elements (a, b) = a + b*i ----------------------

def f2_mul(u, v):
    a, b = u
    c, d = v
    return ((a * c - b * d) % Q, (a * d + b * c) % Q)


def f2_conj(u):
    return (u[0], -u[1] % Q)


def f2_inv(u):
    a, b = u
    n = pow((a * a + b * b) % Q, -1, Q)
    return (a * n % Q, -b * n % Q)


def f2_pow(u, k):
    acc = (1, 0)
    base = u
    while k:
        if k & 1:
            acc = f2_mul(acc, base)
        base = f2_mul(base, base)
        k >>= 1
    return acc


# -- affine points, None is the point at infinity ------------------------------

def on_curve(pt):
    if pt is None:
        return True
    x, y = pt
    return 0 <= x < Q and 0 <= y < Q and (y * y - (x * x * x + x)) % Q == 0


def pt_add(p1, p2):
    if p1 is None:
        return p2
    if p2 is None:
        return p1
    x1, y1 = p1
    x2, y2 = p2
    if x1 == x2:
        if (y1 + y2) % Q == 0:
            return None
        lam = (3 * x1 * x1 + 1) * pow(2 * y1, -1, Q) % Q
    else:
        lam = (y2 - y1) * pow(x2 - x1, -1, Q) % Q
    x3 = (lam * lam - x1 - x2) % Q
    return (x3, (lam * (x1 - x3) - y1) % Q)


def pt_neg(pt):
    if pt is None:
        return None
    return (pt[0], -pt[1] % Q)


def pt_mul(pt, k):
    # no reduction mod R here: subgroup checks multiply by R on purpose
    acc = None
    add = pt
    while k:
        if k & 1:
            acc = pt_add(acc, add)
        add = pt_add(add, add)
        k >>= 1
    return acc


def _miller(p, q_pt):
    """Tate pairing of two R-order points of E(F_q), q_pt passed through
    the distortion map.  Returns an element of mu_R in F_q^2."""
    if p is None or q_pt is None:
        return (1, 0)
    # evaluation point phi(q_pt) = (-xq, i*yq)
    sx = -q_pt[0] % Q
    sy = q_pt[1]

    def line(t, u):
        # line through t and u (tangent if equal) evaluated at phi(q_pt);
        # verticals are eliminated, so report them as 1
        x1, y1 = t
        if u is None:
            return (1, 0)
        x2, y2 = u
        if x1 == x2:
            if (y1 + y2) % Q == 0:
                return (1, 0)
            lam = (3 * x1 * x1 + 1) * pow(2 * y1, -1, Q) % Q
        else:
            lam = (y2 - y1) * pow(x2 - x1, -1, Q) % Q
        return ((-y1 - lam * (sx - x1)) % Q, sy)

    f = (1, 0)
    t = p
    for bit in bin(R)[3:]:
        f = f2_mul(f2_mul(f, f), line(t, t))
        t = pt_add(t, t)
        if bit == "1":
            f = f2_mul(f, line(t, p))
            t = pt_add(t, p)
    # final exponentiation (q^2 - 1)/R = (q - 1) * COFACTOR;
    # f^(q-1) = conj(f)/f since Frobenius on F_q^2 is conjugation
    f = f2_mul(f2_conj(f), f2_inv(f))
    return f2_pow(f, COFACTOR)


class SS61Context(PairingContext):
    backend = Backend.CURVE
    symmetric = True
    production = True
    name = "ss61"
    order = R

    def __init__(self):
        super().__init__()
        self._gen = (GX, GY)
        self._gt = None  # filled on first use

    def _raw_generator(self, role):
        if role is Role.TARGET:
            if self._gt is None:
                self._gt = _miller(self._gen, self._gen)
            return self._gt
        return self._gen

    def _raw_identity(self, role):
        return (1, 0) if role is Role.TARGET else None

    def _raw_exp(self, role, data, k):
        if role is Role.TARGET:
            return f2_pow(data, k)
        return pt_mul(data, k)

    def _raw_combine(self, role, a, b):
        if role is Role.TARGET:
            return f2_mul(a, b)
        return pt_add(a, b)

    def _raw_invert(self, role, data):
        if role is Role.TARGET:
            # mu_R lies in the norm-1 subgroup, so conjugation inverts
            return f2_conj(data)
        return pt_neg(data)

    def _raw_eq(self, role, a, b):
        return hmac.compare_digest(self._raw_bytes(role, a), self._raw_bytes(role, b))

    def _raw_pair(self, a, b):
        return _miller(a, b)

    def _raw_bytes(self, role, data):
        n = _COORD_BYTES
        if role is Role.TARGET:
            return data[0].to_bytes(n, "big") + data[1].to_bytes(n, "big")
        if data is None:
            return b"\x00" * (2 * n + 1)
        return b"\x04" + data[0].to_bytes(n, "big") + data[1].to_bytes(n, "big")

    def _raw_from_bytes(self, role, blob):
        n = _COORD_BYTES
        if role is Role.TARGET:
            if len(blob) != 2 * n:
                raise ValueError("bad target element length")
            u = (int.from_bytes(blob[:n], "big"), int.from_bytes(blob[n:], "big"))
            if u[0] >= Q or u[1] >= Q:
                raise ValueError("target coordinate out of range")
            if u == (0, 0) or f2_pow(u, R) != (1, 0):
                raise ValueError("target element not in mu_R")
            return u
        if len(blob) != 2 * n + 1:
            raise ValueError("bad point encoding length")
        if blob[0] == 0:
            if any(blob[1:]):
                raise ValueError("bad infinity encoding")
            return None
        if blob[0] != 4:
            raise ValueError("bad point encoding tag")
        pt = (int.from_bytes(blob[1:1 + n], "big"), int.from_bytes(blob[1 + n:], "big"))
        if not on_curve(pt):
            raise ValueError("point not on curve")
        if pt_mul(pt, R) is not None:
            raise ValueError("point not in the prime-order subgroup")
        return pt

"""Decisional BDH challenge tuples.

A challenge is (g^a, g^b, g^s, T) where T is e(g,g)^{abs} when the
real bit is set and e(g,g)^z for independent uniform z otherwise.
The exponents live in BDHSecrets, which only the auditor and an
"omniscient" sanity-check adversary may read; the simulator gets the
BDHPublic half.
"""

from __future__ import annotations

import secrets as _secrets
from dataclasses import dataclass

from ..errors import GameError
from ..groups import Backend, PairingContext, Role


@dataclass(frozen=True)
class BDHPublic:
    a_elem: object     # g^a, KEY role
    b_elem: object     # g^b
    s_elem: object     # g^s
    t_elem: object     # TARGET element


@dataclass(frozen=True)
class BDHSecrets:
    a: int
    b: int
    s: int
    z: object          # None when real
    real: bool


@dataclass(frozen=True)
class BDHChallenge:
    public: BDHPublic
    secrets: BDHSecrets


def bdh_challenge(ctx: PairingContext, rng=None, real=None,
                  a=None, b=None, s=None, z=None) -> BDHChallenge:
    """Sample a challenge.  real=None flips a coin.  The exponent keyword
    arguments pin values for hand-checked tests; left as None they are
    sampled uniformly."""
    if ctx.backend is not Backend.DEBUG_EXPONENT:
        raise GameError("the game harness needs the debug backend "
                        "(hidden exponents must be auditable)")
    r = rng if rng is not None else _secrets.SystemRandom()
    p = ctx.order
    if real is None:
        real = bool(r.getrandbits(1))
    real = bool(real)
    a = r.randrange(p) if a is None else a % p
    b = r.randrange(p) if b is None else b % p
    s = r.randrange(p) if s is None else s % p
    gt = ctx.generator(Role.TARGET)
    if real:
        z = None
        t_elem = ctx.exp(gt, a * b * s % p)
    else:
        z = r.randrange(p) if z is None else z % p
        t_elem = ctx.exp(gt, z)
    g = ctx.generator(Role.KEY)
    public = BDHPublic(
        a_elem=ctx.exp(g, a), b_elem=ctx.exp(g, b), s_elem=ctx.exp(g, s),
        t_elem=t_elem)
    return BDHChallenge(public=public, secrets=BDHSecrets(a=a, b=b, s=s, z=z, real=real))

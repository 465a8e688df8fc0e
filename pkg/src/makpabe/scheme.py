"""Multi-authority key-policy ABE over a bilinear group.

Authorities are fully independent: each one samples its own alpha and
per-attribute exponents z_i, publishes e(g,g)^alpha and g^{z_i}, and
issues keys for LSSS access structures of its choosing.  Encryption
binds a target-group message to an attribute set S under any collection
of authorities; decryption needs, from every one of those authorities,
a key whose structure is satisfied by S.

Shapes (p is the group order, M the l x n key matrix, rho its labeling):

    setup:    alpha <- Z_p, z_i <- Z_p*        (one z per universe attribute)
    keygen:   v = (alpha, v2..vn),  lambda = M v,  K_i = g^(lambda_i / z_rho(i))
    encrypt:  s <- Z_p,  C' = m * (prod_k e(g,g)^alpha_k)^s,  C_{k,i} = (g^{z_{k,i}})^s
    decrypt:  m = C' / prod_k prod_{i in I_k} e(K_i, C_{k,rho(i)})^{w_i}

Encryption performs no pairings.  Decryption performs exactly one per
reconstruction row, i.e. sum_k |I_k| pairings total.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from . import lsss
from .errors import (
    ContextMismatchError,
    MissingAuthorityKeyError,
    NotAuthorizedError,
    SchemeError,
    UnauthorizedSetError,
    UnknownAttributeError,
)
from .groups import PairingContext, Role
from .policy import Universe

__all__ = [
    "GlobalParams",
    "AuthorityPublicKey",
    "AuthorityMasterKey",
    "UserKey",
    "Ciphertext",
    "authority_setup",
    "keygen",
    "encrypt",
    "decrypt",
]


@dataclass
class GlobalParams:
    ctx: PairingContext
    universe: Universe

    @property
    def p(self) -> int:
        return self.ctx.order


@dataclass(frozen=True)
class AuthorityPublicKey:
    authority_id: str
    e_gg_alpha: object            # TARGET element
    z_pub: dict = field(repr=False)  # attr -> CIPHER element g^{z_i}


@dataclass(frozen=True)
class AuthorityMasterKey:
    authority_id: str
    alpha: int
    z: dict = field(repr=False)   # attr -> nonzero exponent


@dataclass(frozen=True)
class UserKey:
    authority_id: str
    matrix: lsss.AccessMatrix
    components: tuple             # KEY elements, one per matrix row


@dataclass(frozen=True)
class Ciphertext:
    attrs: tuple                  # sorted attribute names S
    authority_ids: tuple          # authorities whose keys are all required
    c_prime: object               # TARGET element
    components: dict = field(repr=False)  # (authority_id, attr) -> CIPHER element


def _check_id(authority_id) -> str:
    if not isinstance(authority_id, str) or not authority_id:
        raise SchemeError(f"bad authority id {authority_id!r}")
    return authority_id


def authority_setup(gp: GlobalParams, authority_id: str, rng=None):
    """Create one authority: (public key, master key)."""
    _check_id(authority_id)
    ctx = gp.ctx
    alpha = ctx.random_scalar(rng)
    z = {attr: ctx.random_scalar(rng, nonzero=True) for attr in gp.universe}
    g_c = ctx.generator(Role.CIPHER)
    pk = AuthorityPublicKey(
        authority_id=authority_id,
        e_gg_alpha=ctx.exp(ctx.generator(Role.TARGET), alpha),
        z_pub={attr: ctx.exp(g_c, zi) for attr, zi in z.items()},
    )
    return pk, AuthorityMasterKey(authority_id=authority_id, alpha=alpha, z=z)


def keygen(gp: GlobalParams, mk: AuthorityMasterKey, matrix: lsss.AccessMatrix,
           rng=None) -> UserKey:
    """Issue a key for an access matrix.  The secret being shared is the
    authority's alpha, so the key components satisfy
    prod_i e(K_i, g^{z s})^{w_i} = e(g,g)^{alpha s} for any valid plan w."""
    ctx = gp.ctx
    for attr in matrix.rho:
        if attr not in gp.universe:
            raise UnknownAttributeError(attr)
        if attr not in mk.z:
            raise SchemeError(f"master key lacks exponent for attribute {attr!r}")
    sv = lsss.share(matrix, mk.alpha, ctx.order, rng)
    g_k = ctx.generator(Role.KEY)
    comps = tuple(
        ctx.exp(g_k, lam * ctx.scalar_inv(mk.z[attr]) % ctx.order)
        for lam, attr in zip(sv.values, matrix.rho))
    return UserKey(authority_id=mk.authority_id, matrix=matrix, components=comps)


def encrypt(gp: GlobalParams, m, attrs, pks, rng=None) -> Ciphertext:
    """Encrypt a TARGET-group message under attribute set attrs and the
    given authority public keys.  Performs zero pairings."""
    ctx = gp.ctx
    ctx._check(m, Role.TARGET)
    attrs = sorted(set(attrs))
    if not attrs:
        raise SchemeError("attribute set must not be empty")
    for a in attrs:
        if a not in gp.universe:
            raise UnknownAttributeError(a)
    pks = list(pks)
    if not pks:
        raise SchemeError("need at least one authority public key")
    ids = [pk.authority_id for pk in pks]
    if len(set(ids)) != len(ids):
        raise SchemeError("duplicate authority ids among public keys")

    s = ctx.random_scalar(rng)
    agg = pks[0].e_gg_alpha
    for pk in pks[1:]:
        agg = ctx.combine(agg, pk.e_gg_alpha)
    c_prime = ctx.combine(m, ctx.exp(agg, s))

    components = {}
    for pk in pks:
        for a in attrs:
            try:
                z_elem = pk.z_pub[a]
            except KeyError:
                raise SchemeError(
                    f"public key for {pk.authority_id!r} lacks attribute {a!r}") from None
            components[(pk.authority_id, a)] = ctx.exp(z_elem, s)
    return Ciphertext(
        attrs=tuple(attrs), authority_ids=tuple(ids),
        c_prime=c_prime, components=components)


def decrypt(gp: GlobalParams, ct: Ciphertext, keys) -> object:
    """Recover the message.  keys maps authority_id -> UserKey (an iterable
    of UserKeys is also accepted).  Raises MissingAuthorityKeyError when an
    authority named by the ciphertext has no key, NotAuthorizedError when a
    key's structure is not satisfied by the ciphertext attributes."""
    ctx = gp.ctx
    if not isinstance(keys, Mapping):
        pool = {}
        for k in keys:
            if k.authority_id in pool:
                raise SchemeError(f"two keys supplied for authority {k.authority_id!r}")
            pool[k.authority_id] = k
        keys = pool
    attrs = set(ct.attrs)

    blinding = None
    for aid in ct.authority_ids:
        key = keys.get(aid)
        if key is None:
            raise MissingAuthorityKeyError(aid)
        try:
            plan = lsss.reconstruction_coefficients(key.matrix, attrs, ctx.order)
        except UnauthorizedSetError:
            raise NotAuthorizedError(aid) from None
        for i, w in zip(plan.rows, plan.coeffs):
            term = ctx.exp(ctx.pair(key.components[i], ct.components[(aid, key.matrix.rho[i])]), w)
            blinding = term if blinding is None else ctx.combine(blinding, term)
    if blinding is None:
        # every plan was empty; cannot happen for real keys (alpha shares
        # always need at least one row) but keep the algebra total
        blinding = ctx.identity(Role.TARGET)
    return ctx.combine(ct.c_prime, ctx.invert(blinding))

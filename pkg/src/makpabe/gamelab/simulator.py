"""The reduction's simulator.

Given only the public half of a BDH challenge, it plays all authorities
toward the adversary: it fabricates public keys whose implicit master
secrets are alpha_k0 = ab + b*sum(r_k) for the honest authority and
alpha_k = -r_k*b for the others, answers key queries, and assembles the
challenge ciphertext as C' = m_mu * T.

Nothing in this module touches a, b or s.  Every element is computed
from g, g^a, g^b, g^s and scalars the simulator sampled itself; the
audit module independently confirms the implicit identities.

Per-attribute exponents: z_{k,i} = z' for i in S*, b*z' otherwise, with
z' freshly random per (authority, attribute).  Keys for the honest
authority use the blocking vector y of the queried matrix (it exists
exactly because the query must not authorize S*): the implicit share
vector is u = b*(v + (a + sum(r) - v_1)*y), which has u_1 = alpha_k0,
and M_i . u is computable without a on S*-rows (where M_i . y = 0) and
needs only g^a elsewhere.
"""

from __future__ import annotations

import secrets as _secrets
from dataclasses import dataclass, field

from ..errors import GameError, HonestAuthorityRefusalError
from ..groups import Role
from ..lsss import AccessMatrix, blocking_vector, is_authorized
from ..scheme import AuthorityPublicKey, Ciphertext, GlobalParams, UserKey
from .bdh import BDHPublic


@dataclass(frozen=True)
class IssuedKey:
    authority_id: str
    matrix: AccessMatrix
    vec: tuple          # v for the honest authority, t_k otherwise
    key: UserKey


@dataclass
class SimulatorState:
    gp: GlobalParams
    public: BDHPublic
    s_star: frozenset
    authority_ids: tuple
    honest_id: str
    r: dict                      # authority_id -> r_k, for k != honest
    zprime: dict                 # (authority_id, attr) -> z'
    issued: list = field(default_factory=list)

    @property
    def r_sum(self) -> int:
        return sum(self.r.values()) % self.gp.ctx.order


def _rng(rng):
    return rng if rng is not None else _secrets.SystemRandom()


def simulator_init(gp: GlobalParams, public: BDHPublic, s_star, authority_ids,
                   honest_id, rng=None):
    """Set up all authorities against the challenge.  Returns
    (SimulatorState, {authority_id: AuthorityPublicKey})."""
    if not isinstance(public, BDHPublic):
        raise TypeError("simulator_init takes the public challenge half "
                        "(challenge.public), never the full challenge")
    ids = tuple(authority_ids)
    if not ids or len(set(ids)) != len(ids):
        raise GameError("authority ids must be nonempty and distinct")
    if honest_id not in ids:
        raise GameError(f"honest authority {honest_id!r} not in the authority set")
    s_star = frozenset(s_star)
    if not s_star:
        raise GameError("target attribute set must not be empty")
    for a in s_star:
        if a not in gp.universe:
            raise GameError(f"target attribute {a!r} outside the universe")

    ctx = gp.ctx
    r = _rng(rng)
    p = ctx.order
    rk = {k: r.randrange(p) for k in ids if k != honest_id}
    r_sum = sum(rk.values()) % p
    zprime = {(k, attr): r.randrange(1, p) for k in ids for attr in gp.universe}

    g_c = ctx.generator(Role.CIPHER)
    b_c = ctx.as_role(public.b_elem, Role.CIPHER)
    e_ab = ctx.pair(public.a_elem, b_c)         # gt^{ab}
    e_b = ctx.pair(public.b_elem, g_c)          # gt^{b}

    pks = {}
    for k in ids:
        if k == honest_id:
            e_alpha = ctx.combine(e_ab, ctx.exp(e_b, r_sum))
        else:
            e_alpha = ctx.exp(e_b, -rk[k] % p)
        z_pub = {}
        for attr in gp.universe:
            base = g_c if attr in s_star else b_c
            z_pub[attr] = ctx.exp(base, zprime[(k, attr)])
        pks[k] = AuthorityPublicKey(authority_id=k, e_gg_alpha=e_alpha, z_pub=z_pub)

    state = SimulatorState(
        gp=gp, public=public, s_star=s_star, authority_ids=ids,
        honest_id=honest_id, r=rk, zprime=zprime)
    return state, pks


def simulator_keygen(state: SimulatorState, authority_id: str,
                     matrix: AccessMatrix, rng=None) -> UserKey:
    """Answer a Phase I/II key query.  The honest authority refuses
    matrices that authorize S*."""
    gp = state.gp
    ctx = gp.ctx
    p = ctx.order
    if authority_id not in state.authority_ids:
        raise GameError(f"unknown authority {authority_id!r}")
    for attr in matrix.rho:
        if attr not in gp.universe:
            raise GameError(f"matrix label {attr!r} outside the universe")
    r = _rng(rng)
    g_k = ctx.generator(Role.KEY)
    n = matrix.ncols

    if authority_id == state.honest_id:
        if is_authorized(matrix, state.s_star, p):
            raise HonestAuthorityRefusalError(
                "honest authority refuses key queries whose structure "
                "authorizes the target set")
        y = blocking_vector(matrix, state.s_star, p)
        v = tuple(r.randrange(p) for _ in range(n))
        comps = []
        for row, attr in zip(matrix.rows, matrix.rho):
            mv = sum(c * vj for c, vj in zip(row, v)) % p
            my = sum(c * yj for c, yj in zip(row, y)) % p
            zinv = ctx.scalar_inv(state.zprime[(authority_id, attr)])
            if attr in state.s_star:
                # M_i . y = 0 here, so lambda_i = b * mv and z_i = z':
                # K_i = B^{mv/z'}
                comps.append(ctx.exp(state.public.b_elem, mv * zinv % p))
            else:
                # z_i = b z' and lambda_i = b(mv + (a + r_sum - v_1) my):
                # K_i = g^{(mv + (r_sum - v_1) my)/z'} * A^{my/z'}
                c1 = (mv + (state.r_sum - v[0]) * my) % p
                comps.append(ctx.combine(
                    ctx.exp(g_k, c1 * zinv % p),
                    ctx.exp(state.public.a_elem, my * zinv % p)))
        vec = v
    else:
        t = ((-state.r[authority_id]) % p,) + tuple(r.randrange(p) for _ in range(n - 1))
        comps = []
        for row, attr in zip(matrix.rows, matrix.rho):
            mt = sum(c * tj for c, tj in zip(row, t)) % p
            zinv = ctx.scalar_inv(state.zprime[(authority_id, attr)])
            if attr in state.s_star:
                # lambda_i = b * mt, z_i = z': K_i = B^{mt/z'}
                comps.append(ctx.exp(state.public.b_elem, mt * zinv % p))
            else:
                # lambda_i = b * mt, z_i = b z': K_i = g^{mt/z'}
                comps.append(ctx.exp(g_k, mt * zinv % p))
        vec = t

    key = UserKey(authority_id=authority_id, matrix=matrix, components=tuple(comps))
    state.issued.append(IssuedKey(
        authority_id=authority_id, matrix=matrix, vec=vec, key=key))
    return key


def simulator_challenge(state: SimulatorState, m0, m1, mu: int) -> Ciphertext:
    """Assemble the challenge ciphertext for S*: C' = m_mu * T and
    C_{k,i} = (g^s)^{z'_{k,i}}.  Structurally a normal scheme ciphertext."""
    ctx = state.gp.ctx
    if mu not in (0, 1):
        raise GameError(f"mu must be 0 or 1, got {mu!r}")
    for m in (m0, m1):
        ctx._check(m, Role.TARGET)
    s_c = ctx.as_role(state.public.s_elem, Role.CIPHER)
    attrs = tuple(sorted(state.s_star))
    components = {}
    for k in state.authority_ids:
        for attr in attrs:
            components[(k, attr)] = ctx.exp(s_c, state.zprime[(k, attr)])
    return Ciphertext(
        attrs=attrs, authority_ids=tuple(state.authority_ids),
        c_prime=ctx.combine(m1 if mu else m0, state.public.t_elem),
        components=components)

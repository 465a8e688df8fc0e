"""Adversary strategies for the selective game.

An adversary is a plug-in object the game driver calls through a fixed
protocol, one trial at a time:

    choose_target(universe, rng)      commit to S*, authorities, honest k0
    phase1(oracle, rng)               pre-challenge key queries
    choose_messages(ctx, rng)         the two challenge messages
    observe_hidden(challenge)         debug-only peek (omniscient harness)
    guess(gp, pks, ct, rng)           output the guess bit
    phase2(oracle, rng)               post-challenge queries (optional)

`mode` decides what the guess is scored against: "message" adversaries
guess the encrypted-message coin mu, "challenge" adversaries guess
whether the BDH element T was real.  Strategies may keep per-trial state
on self; the driver runs trials sequentially.
"""

from __future__ import annotations

from ..errors import GameError
from ..groups import Role
from ..lsss import AccessMatrix
from ..policy import parse_policy, to_lsss

__all__ = ["TargetChoice", "Adversary", "CoinAdversary",
           "OmniscientAdversary", "SpliceAdversary", "ADVERSARIES"]


class TargetChoice:
    """The selective commitment made before setup."""

    def __init__(self, s_star, authority_ids, honest_id):
        self.s_star = tuple(s_star)
        self.authority_ids = tuple(authority_ids)
        self.honest_id = honest_id


class Adversary:
    name = "abstract"
    mode = "message"

    def choose_target(self, universe, rng) -> TargetChoice:
        names = universe.names
        if len(names) < 2:
            raise GameError("universe too small for the default target")
        return TargetChoice(names[:2], ("k0", "k1"), "k0")

    def phase1(self, oracle, rng):
        pass

    def phase2(self, oracle, rng):
        pass

    def choose_messages(self, ctx, rng):
        m0 = ctx.random_element(Role.TARGET, rng)
        while True:
            m1 = ctx.random_element(Role.TARGET, rng)
            if not ctx.eq(m0, m1):
                break
        self._m0, self._m1 = m0, m1
        return m0, m1

    def observe_hidden(self, challenge):
        pass

    def guess(self, gp, pks, ct, rng) -> int:
        raise NotImplementedError


class CoinAdversary(Adversary):
    """Baseline: ignores everything and flips a coin."""

    name = "coin"
    mode = "message"

    def guess(self, gp, pks, ct, rng) -> int:
        return rng.getrandbits(1)


class OmniscientAdversary(Adversary):
    """Harness sanity check: reads the hidden BDH exponents, strips the
    claimed blinding gt^{abs} off C' and guesses "real" exactly when the
    leftover is one of the two submitted messages."""

    name = "omniscient"
    mode = "challenge"

    def observe_hidden(self, challenge):
        sec = challenge.secrets
        self._abs = sec.a * sec.b * sec.s

    def guess(self, gp, pks, ct, rng) -> int:
        ctx = gp.ctx
        blind = ctx.exp(ctx.generator(Role.TARGET), self._abs)
        left = ctx.combine(ct.c_prime, ctx.invert(blind))
        return int(ctx.eq(left, self._m0) or ctx.eq(left, self._m1))


class SpliceAdversary(Adversary):
    """Queries the honest authority for two legal (unauthorized) keys and
    splices their rows into a hybrid key that claims to authorize S*,
    then tries to decrypt the challenge with it."""

    name = "splice"
    mode = "message"

    def choose_target(self, universe, rng) -> TargetChoice:
        names = universe.names
        if len(names) < 3:
            raise GameError("splice adversary needs at least 3 attributes")
        self._x1, self._x2, self._x3 = names[:3]
        return TargetChoice((self._x1, self._x2), ("k0", "k1"), "k0")

    def phase1(self, oracle, rng):
        from .attacks import splice_keys

        uni = oracle.gp.universe
        x1, x2, x3 = self._x1, self._x2, self._x3
        key_a = oracle.query("k0", to_lsss(parse_policy(f"{x1} and {x3}", uni)))
        key_b = oracle.query("k0", to_lsss(parse_policy(f"{x2} and {x3}", uni)))
        hybrid_matrix = AccessMatrix(((1, 1), (1, 2)), (x1, x2))
        self._keys = {
            "k0": splice_keys(hybrid_matrix, [(key_a, 0), (key_b, 0)]),
            "k1": oracle.query("k1", to_lsss(parse_policy(f"{x1} and {x2}", uni))),
        }

    def guess(self, gp, pks, ct, rng) -> int:
        from ..scheme import decrypt

        out = decrypt(gp, ct, self._keys)
        if gp.ctx.eq(out, self._m0):
            return 0
        if gp.ctx.eq(out, self._m1):
            return 1
        return rng.getrandbits(1)


ADVERSARIES = {cls.name: cls for cls in
               (CoinAdversary, OmniscientAdversary, SpliceAdversary)}

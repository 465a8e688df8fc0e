"""Game harness tests: frozen p=13 audit vectors, the refusal rule,
distribution audits, and the behaviour of the stock adversaries."""

import random

import pytest

from makpabe.errors import (AuditUnavailableError, GameError,
                            HonestAuthorityRefusalError, RoleMismatchError,
                            SimulationAuditError)
from makpabe.gamelab.adversaries import (ADVERSARIES, Adversary, CoinAdversary,
                                         OmniscientAdversary, SpliceAdversary)
from makpabe.gamelab.audit import (audit_bdh, audit_challenge,
                                   audit_cprime_distribution,
                                   audit_key_share_distribution, audit_keys,
                                   audit_setup, honest_reference_keys,
                                   randomized_audit_instance)
from makpabe.gamelab.bdh import BDHChallenge, BDHPublic, bdh_challenge
from makpabe.gamelab.game import GameResult, run_selective_game
from makpabe.gamelab.simulator import (IssuedKey, simulator_challenge,
                                       simulator_init, simulator_keygen)
from makpabe.groups import Backend, Role, new_context
from makpabe.policy import Universe, parse_policy, to_lsss
from makpabe.scheme import Ciphertext, GlobalParams, UserKey, decrypt, encrypt
from support import SeqRng, cipher_elem, key_elem, target_elem

SETUP_SCRIPT = [4, 1, 2, 3, 4, 5, 6]   # r_k1, then z' for k0:ABC, k1:ABC


@pytest.fixture()
def world():
    """p=13 world pinned end to end: a=2 b=3 s=5, S*={A,B}, honest k0."""
    ctx = new_context(Backend.DEBUG_EXPONENT, 13)
    gp = GlobalParams(ctx, Universe(("A", "B", "C")))
    ch = bdh_challenge(ctx, real=True, a=2, b=3, s=5)
    state, pks = simulator_init(gp, ch.public, ("A", "B"), ("k0", "k1"), "k0",
                                SeqRng(list(SETUP_SCRIPT)))
    return gp, ch, state, pks


# -- BDH challenges --------------------------------------------------------------

def test_bdh_frozen_values():
    ctx = new_context(Backend.DEBUG_EXPONENT, 13)
    ch = bdh_challenge(ctx, real=True, a=2, b=3, s=5)
    assert ch.public.a_elem == key_elem(ctx, 2)
    assert ch.public.b_elem == key_elem(ctx, 3)
    assert ch.public.s_elem == key_elem(ctx, 5)
    assert ch.public.t_elem == target_elem(ctx, 4)        # abs = 30 mod 13
    assert audit_bdh(ctx, ch) == {"t_log": 4, "real": True}
    ch = bdh_challenge(ctx, real=False, a=2, b=3, s=5, z=7)
    assert ch.public.t_elem == target_elem(ctx, 7)
    assert ch.secrets.z == 7 and not ch.secrets.real


def test_bdh_audit_catches_forged_t():
    ctx = new_context(Backend.DEBUG_EXPONENT, 13)
    ch = bdh_challenge(ctx, real=True, a=2, b=3, s=5)
    forged = BDHChallenge(
        public=BDHPublic(ch.public.a_elem, ch.public.b_elem, ch.public.s_elem,
                         target_elem(ctx, 5)),
        secrets=ch.secrets)
    with pytest.raises(SimulationAuditError):
        audit_bdh(ctx, forged)


def test_bdh_needs_debug_backend():
    ctx = new_context(Backend.CURVE, "ss61")
    with pytest.raises(GameError):
        bdh_challenge(ctx)
    with pytest.raises(AuditUnavailableError):
        ctx.discrete_log(ctx.generator(Role.TARGET))


# -- simulator setup -------------------------------------------------------------

def test_simulated_public_keys_frozen(world):
    gp, ch, state, pks = world
    ctx = gp.ctx
    # alpha_k0 = ab + b*r_sum = 6 + 12 = 18 = 5, alpha_k1 = -4*3 = 1
    assert pks["k0"].e_gg_alpha == target_elem(ctx, 5)
    assert pks["k1"].e_gg_alpha == target_elem(ctx, 1)
    # S* attributes publish g^z', outside rows publish (g^b)^z'
    assert pks["k0"].z_pub == {"A": cipher_elem(ctx, 1), "B": cipher_elem(ctx, 2),
                               "C": cipher_elem(ctx, 9)}
    assert pks["k1"].z_pub == {"A": cipher_elem(ctx, 4), "B": cipher_elem(ctx, 5),
                               "C": cipher_elem(ctx, 5)}
    assert audit_setup(state, pks, ch.secrets) == {"alpha": {"k0": 5, "k1": 1}}


def test_simulator_init_rejections(world):
    gp, ch, _, _ = world
    with pytest.raises(TypeError):
        simulator_init(gp, ch, ("A",), ("k0",), "k0")     # full challenge
    pub = ch.public
    with pytest.raises(GameError):
        simulator_init(gp, pub, (), ("k0",), "k0")        # empty S*
    with pytest.raises(GameError):
        simulator_init(gp, pub, ("A",), ("k0", "k0"), "k0")
    with pytest.raises(GameError):
        simulator_init(gp, pub, ("A",), ("k0", "k1"), "k7")
    with pytest.raises(GameError):
        simulator_init(gp, pub, ("A", "zz"), ("k0",), "k0")


# -- key issue -------------------------------------------------------------------

def test_honest_key_frozen(world):
    gp, ch, state, _ = world
    ctx = gp.ctx
    matrix = to_lsss(parse_policy("A and C", gp.universe))
    key = simulator_keygen(state, "k0", matrix, SeqRng([7, 2]))
    # v=(7,2), y=(1,12), u = 3*(v + (2+4-7)y) = (5, 9): u_1 = alpha_k0
    assert key.components == (key_elem(ctx, 1), key_elem(ctx, 4))
    (report,) = audit_keys(state, ch.secrets)
    assert report == {"authority": "k0", "u1": 5, "lambda": (1, 10)}


def test_corrupted_authority_key_frozen(world):
    gp, ch, state, _ = world
    ctx = gp.ctx
    matrix = to_lsss(parse_policy("A or B", gp.universe))
    key = simulator_keygen(state, "k1", matrix, SeqRng([]))
    # t = (-r_k1,) = (9,), all rows in S*: K_i = B^{9/z'}
    assert key.components == (key_elem(ctx, 10), key_elem(ctx, 8))
    (report,) = audit_keys(state, ch.secrets)
    assert report == {"authority": "k1", "u1": 1, "lambda": (1, 1)}


def test_honest_refusal_and_query_rejections(world):
    gp, _, state, _ = world
    authorizing = to_lsss(parse_policy("A or B", gp.universe))
    with pytest.raises(HonestAuthorityRefusalError):
        simulator_keygen(state, "k0", authorizing)
    with pytest.raises(GameError):
        simulator_keygen(state, "k9", authorizing)
    assert state.issued == []          # refused queries leave no trace


def test_key_audit_catches_tampering(world):
    gp, ch, state, _ = world
    ctx = gp.ctx
    matrix = to_lsss(parse_policy("A and C", gp.universe))
    key = simulator_keygen(state, "k0", matrix, SeqRng([7, 2]))
    bogus = UserKey(key.authority_id, key.matrix,
                    (key.components[0], key_elem(ctx, 11)))
    state.issued[-1] = IssuedKey("k0", matrix, state.issued[-1].vec, bogus)
    with pytest.raises(SimulationAuditError):
        audit_keys(state, ch.secrets)


# -- challenge ciphertext --------------------------------------------------------

def test_challenge_frozen_and_audited(world):
    gp, ch, state, _ = world
    ctx = gp.ctx
    m0, m1 = target_elem(ctx, 2), target_elem(ctx, 6)
    ct = simulator_challenge(state, m0, m1, mu=1)
    assert ct.c_prime == target_elem(ctx, 10)             # 6 + abs
    assert ct.attrs == ("A", "B") and ct.authority_ids == ("k0", "k1")
    assert ct.components == {
        ("k0", "A"): cipher_elem(ctx, 5), ("k0", "B"): cipher_elem(ctx, 10),
        ("k1", "A"): cipher_elem(ctx, 7), ("k1", "B"): cipher_elem(ctx, 12),
    }
    report = audit_challenge(state, ct, ch.secrets, m0, m1, 1)
    assert report == {"shift": 4, "real": True, "decrypts_to_m_mu": True}

    refs = honest_reference_keys(state, ch.secrets)
    assert decrypt(gp, ct, refs) == m1

    tampered = dict(ct.components)
    tampered[("k0", "A")] = cipher_elem(ctx, 6)
    forged = Ciphertext(ct.attrs, ct.authority_ids, ct.c_prime, tampered)
    with pytest.raises(SimulationAuditError):
        audit_challenge(state, forged, ch.secrets, m0, m1, 1)


def test_challenge_random_t_shift():
    ctx = new_context(Backend.DEBUG_EXPONENT, 13)
    gp = GlobalParams(ctx, Universe(("A", "B", "C")))
    ch = bdh_challenge(ctx, real=False, a=2, b=3, s=5, z=7)
    state, _ = simulator_init(gp, ch.public, ("A", "B"), ("k0", "k1"), "k0",
                              SeqRng(list(SETUP_SCRIPT)))
    m0, m1 = target_elem(ctx, 2), target_elem(ctx, 6)
    ct = simulator_challenge(state, m0, m1, mu=0)
    assert audit_challenge(state, ct, ch.secrets, m0, m1, 0) == {
        "shift": 7, "real": False}


def test_challenge_rejections(world):
    gp, _, state, _ = world
    ctx = gp.ctx
    m0, m1 = target_elem(ctx, 2), target_elem(ctx, 6)
    with pytest.raises(GameError):
        simulator_challenge(state, m0, m1, mu=2)
    with pytest.raises(RoleMismatchError):
        simulator_challenge(state, ctx.generator(Role.KEY), m1, mu=0)


def test_simulated_world_is_functionally_a_scheme(world):
    """Ordinary encrypt/decrypt works across the simulated authorities,
    for ciphertexts other than the challenge."""
    gp, _, state, pks = world
    ctx = gp.ctx
    k0_key = simulator_keygen(state, "k0",
                              to_lsss(parse_policy("A and C", gp.universe)))
    k1_key = simulator_keygen(state, "k1",
                              to_lsss(parse_policy("A or B", gp.universe)))
    rng = random.Random(99)
    for _ in range(20):
        m = ctx.random_element(Role.TARGET, rng)
        ct = encrypt(gp, m, ("A", "C"), [pks["k0"], pks["k1"]], rng)
        assert decrypt(gp, ct, [k0_key, k1_key]) == m


# -- distribution audits ---------------------------------------------------------

def test_key_share_distribution_audit():
    ctx = new_context(Backend.DEBUG_EXPONENT, 13)
    gp = GlobalParams(ctx, Universe(("A", "B", "C")))
    ch = bdh_challenge(ctx, real=True, a=2, b=3, s=5)
    matrix = to_lsss(parse_policy("A and C", gp.universe))
    report = audit_key_share_distribution(
        gp, ch.public, ("A", "B"), ("k0", "k1"), "k0", matrix, SETUP_SCRIPT)
    assert report["alpha0"] == 5 and report["distinct_keys"] == 13


def test_cprime_distribution_audit():
    ctx = new_context(Backend.DEBUG_EXPONENT, 13)
    gp = GlobalParams(ctx, Universe(("A", "B", "C")))
    m0, m1 = target_elem(ctx, 2), target_elem(ctx, 6)

    def make_challenge(z, mu):
        ch = bdh_challenge(ctx, real=False, a=2, b=3, s=5, z=z)
        state, _ = simulator_init(gp, ch.public, ("A", "B"), ("k0", "k1"),
                                  "k0", SeqRng(list(SETUP_SCRIPT)))
        return simulator_challenge(state, m0, m1, mu)

    assert audit_cprime_distribution(gp, make_challenge, m0, m1) == {"support": 13}


def test_randomized_audit_instances():
    rng = random.Random(5)
    seen = set()
    for _ in range(25):
        report = randomized_audit_instance(10007, rng)
        assert report["keys_audited"] == 4
        seen.add(report["real"])
    assert seen == {False, True}


# -- the game --------------------------------------------------------------------

def test_game_determinism_and_records():
    res1 = run_selective_game(CoinAdversary(), trials=50, master_seed=0xBEEF,
                              prime=10007)
    res2 = run_selective_game(CoinAdversary(), trials=50, master_seed=0xBEEF,
                              prime=10007)
    assert res1.records == res2.records and res1.summary() == res2.summary()
    assert res1.trials == 50 and res1.violations == 0
    assert all(r.queries == () and r.mu in (0, 1) for r in res1.records)
    res3 = run_selective_game(CoinAdversary(), trials=50, master_seed=0xBEE0,
                              prime=10007)
    assert res3.records != res1.records


def test_coin_adversary_within_3sigma():
    res = run_selective_game(CoinAdversary(), trials=2000, master_seed=0xC01,
                             prime=10007)
    assert res.within_sigma(3.0) and res.violations == 0


def test_splice_adversary_no_advantage():
    res = run_selective_game(SpliceAdversary(), trials=400, master_seed=0x5711,
                             prime=10007)
    assert res.violations == 0
    assert all(len(r.queries) == 3 for r in res.records)
    assert res.within_sigma(3.0)


def test_omniscient_adversary_wins():
    res = run_selective_game(OmniscientAdversary(), trials=100,
                             master_seed=0x0517)
    assert res.mode == "challenge"
    assert res.success_rate >= 0.99


def test_protocol_violation_scores_as_loss():
    class Cheater(Adversary):
        name = "cheater"

        def phase1(self, oracle, rng):
            uni = oracle.gp.universe
            oracle.query("k0", to_lsss(parse_policy("A or B", uni)))

        def guess(self, gp, pks, ct, rng):
            return 0

    res = run_selective_game(Cheater(), trials=10, master_seed=3, prime=10007)
    assert res.violations == 10 and res.successes == 0
    assert all(r.violation and r.mu == -1 and r.guess is None
               for r in res.records)


def test_game_rejections():
    with pytest.raises(GameError):
        run_selective_game(CoinAdversary(), trials=0, master_seed=1)

    class Weird(CoinAdversary):
        mode = "telepathy"

    with pytest.raises(GameError):
        run_selective_game(Weird(), trials=1, master_seed=1)


def test_game_result_math():
    res = GameResult("x", "message", 13, 100, 80, 0, 1)
    assert res.success_rate == 0.8 and res.advantage == pytest.approx(0.3)
    assert res.sigma == pytest.approx(0.05)
    assert not res.within_sigma(3.0)
    assert GameResult("x", "message", 13, 100, 52, 0, 1).within_sigma(3.0)
    assert set(ADVERSARIES) == {"coin", "omniscient", "splice"}

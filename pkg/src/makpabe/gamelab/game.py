"""Driver for the selective-security experiment.

Each trial replays the full game against the proof simulator: the
adversary commits to (S*, authorities, honest k0), a fresh BDH challenge
is drawn, keys are issued through an oracle that enforces the honest
authority's refusal rule, and the adversary's guess is scored.  Protocol
violations abort the trial and count as a loss.

Trials are independent: trial i owns rng seeded with master_seed ^ i, so
any subset of trials can be reproduced in isolation.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field

from ..errors import GameError, HonestAuthorityRefusalError
from ..groups import Backend, DEFAULT_DEBUG_PRIME, new_context
from ..policy import Universe
from ..scheme import GlobalParams
from .adversaries import Adversary
from .bdh import bdh_challenge
from .simulator import simulator_challenge, simulator_init, simulator_keygen

__all__ = ["KeyOracle", "TrialRecord", "GameResult", "run_selective_game",
           "DEFAULT_UNIVERSE"]

DEFAULT_UNIVERSE = ("A", "B", "C", "D")


class KeyOracle:
    """Phase I/II key-issue interface handed to the adversary.

    Records every query for the transcript.  Honest-authority refusals
    propagate to the driver, which scores the trial as a loss.
    """

    def __init__(self, state, pks, rng=None):
        self._state = state
        self._rng = rng
        self.gp = state.gp
        self.pks = pks
        self.queries = []

    def query(self, authority_id, matrix):
        self.queries.append({
            "authority": authority_id,
            "rho": list(matrix.rho),
            "nrows": matrix.nrows,
        })
        return simulator_keygen(self._state, authority_id, matrix, self._rng)


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    s_star: tuple
    authority_ids: tuple
    honest_id: str
    queries: tuple
    real: bool
    mu: int
    guess: int | None
    success: bool
    violation: bool

    def to_json(self) -> dict:
        return {
            "trial": self.trial,
            "s_star": list(self.s_star),
            "authorities": list(self.authority_ids),
            "honest": self.honest_id,
            "queries": list(self.queries),
            "real": self.real,
            "mu": self.mu,
            "guess": self.guess,
            "success": self.success,
            "violation": self.violation,
        }


@dataclass
class GameResult:
    adversary: str
    mode: str
    prime: int
    trials: int
    successes: int
    violations: int
    master_seed: int
    records: tuple = field(repr=False, default=())

    @property
    def success_rate(self) -> float:
        return self.successes / self.trials if self.trials else 0.0

    @property
    def advantage(self) -> float:
        return abs(self.success_rate - 0.5)

    @property
    def sigma(self) -> float:
        # binomial std dev of the success-rate estimator at p = 1/2
        return math.sqrt(0.25 / self.trials) if self.trials else float("inf")

    def within_sigma(self, k: float = 3.0) -> bool:
        return self.advantage <= k * self.sigma

    def summary(self) -> dict:
        return {
            "adversary": self.adversary,
            "mode": self.mode,
            "prime": self.prime,
            "trials": self.trials,
            "successes": self.successes,
            "violations": self.violations,
            "success_rate": self.success_rate,
            "advantage": self.advantage,
            "sigma": self.sigma,
            "master_seed": format(self.master_seed, "x"),
        }


def run_selective_game(adversary: Adversary, trials: int, master_seed: int,
                       prime: int = DEFAULT_DEBUG_PRIME, universe=None,
                       transcript_path=None) -> GameResult:
    """Play `trials` independent games and return the aggregate result.

    The guess is scored against mu or the real-T bit depending on the
    adversary's mode.  Transcript, when requested, is JSON lines with one
    record per trial.
    """
    if trials < 1:
        raise GameError("need at least one trial")
    if adversary.mode not in ("message", "challenge"):
        raise GameError(f"unknown adversary mode {adversary.mode!r}")
    ctx = new_context(Backend.DEBUG_EXPONENT, prime)
    if universe is None:
        universe = Universe(DEFAULT_UNIVERSE)
    gp = GlobalParams(ctx, universe)

    records = []
    successes = 0
    violations = 0
    sink = open(transcript_path, "w", encoding="utf-8") if transcript_path else None
    try:
        for t in range(trials):
            rng = random.Random(master_seed ^ t)
            rec = _run_trial(adversary, gp, t, rng)
            successes += rec.success
            violations += rec.violation
            records.append(rec)
            if sink is not None:
                sink.write(json.dumps(rec.to_json()) + "\n")
    finally:
        if sink is not None:
            sink.close()
    return GameResult(
        adversary=adversary.name, mode=adversary.mode, prime=prime,
        trials=trials, successes=successes, violations=violations,
        master_seed=master_seed, records=tuple(records))


def _run_trial(adversary: Adversary, gp: GlobalParams, t: int,
               rng: random.Random) -> TrialRecord:
    choice = adversary.choose_target(gp.universe, rng)
    challenge = bdh_challenge(gp.ctx, rng)
    state, pks = simulator_init(
        gp, challenge.public, choice.s_star, choice.authority_ids,
        choice.honest_id, rng)
    oracle = KeyOracle(state, pks, rng)

    def lost(guess=None):
        return TrialRecord(
            trial=t, s_star=choice.s_star, authority_ids=choice.authority_ids,
            honest_id=choice.honest_id, queries=tuple(oracle.queries),
            real=challenge.secrets.real, mu=mu, guess=guess,
            success=False, violation=True)

    mu = -1
    try:
        adversary.phase1(oracle, rng)
    except HonestAuthorityRefusalError:
        return lost()
    m0, m1 = adversary.choose_messages(gp.ctx, rng)
    mu = rng.getrandbits(1)
    ct = simulator_challenge(state, m0, m1, mu)
    adversary.observe_hidden(challenge)
    try:
        adversary.phase2(oracle, rng)
    except HonestAuthorityRefusalError:
        return lost()
    guess = adversary.guess(gp, pks, ct, rng)
    truth = mu if adversary.mode == "message" else int(challenge.secrets.real)
    return TrialRecord(
        trial=t, s_star=choice.s_star, authority_ids=choice.authority_ids,
        honest_id=choice.honest_id, queries=tuple(oracle.queries),
        real=challenge.secrets.real, mu=mu, guess=guess,
        success=guess == truth, violation=False)

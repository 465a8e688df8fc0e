"""Executable selective-security experiment and proof simulator.

Everything here runs on the debug backend, where implicit exponents can
be read back and every identity the reduction promises is checkable.
The simulator itself only ever sees g^a, g^b, g^s; the audit module is
the one place allowed to look at the hidden exponents.
"""

from .adversaries import Adversary, CoinAdversary, OmniscientAdversary, SpliceAdversary
from .bdh import BDHChallenge, BDHPublic, BDHSecrets, bdh_challenge
from .game import GameResult, KeyOracle, TrialRecord, run_selective_game
from .simulator import SimulatorState, simulator_challenge, simulator_init, simulator_keygen

__all__ = [
    "BDHChallenge", "BDHPublic", "BDHSecrets", "bdh_challenge",
    "SimulatorState", "simulator_init", "simulator_keygen", "simulator_challenge",
    "Adversary", "CoinAdversary", "OmniscientAdversary", "SpliceAdversary",
    "KeyOracle", "GameResult", "TrialRecord", "run_selective_game",
]

"""makpabe: multi-authority key-policy attribute-based encryption.

Policies compile to linear secret sharing matrices, several independent
authorities each blind one share of the plaintext, and decryption works
exactly when the presented attribute set satisfies every key's policy.
Three pairing backends: an auditable debug group (exponents readable, no
security), a tiny supersingular curve, and a production-grade BN curve.
"""

from .errors import MakpabeError
from .groups import Backend, GroupElem, PairingMeter, Role, new_context
from .lsss import (AccessMatrix, ReconstructionPlan, blocking_vector,
                   is_authorized, reconstruction_coefficients, share)
from .policy import Gate, Leaf, Universe, evaluate, parse_policy, pretty_print, to_lsss
from .scheme import (AuthorityMasterKey, AuthorityPublicKey, Ciphertext,
                     GlobalParams, UserKey, authority_setup, decrypt, encrypt,
                     keygen)
from .toolkit import decode, encode, open_envelope, seal

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "MakpabeError",
    "Backend", "Role", "GroupElem", "PairingMeter", "new_context",
    "Universe", "Leaf", "Gate", "parse_policy", "evaluate", "pretty_print",
    "to_lsss",
    "AccessMatrix", "ReconstructionPlan", "share", "is_authorized",
    "reconstruction_coefficients", "blocking_vector",
    "GlobalParams", "AuthorityPublicKey", "AuthorityMasterKey", "UserKey",
    "Ciphertext", "authority_setup", "keygen", "encrypt", "decrypt",
    "encode", "decode", "seal", "open_envelope",
]

"""Hybrid file encryption: ABE KEM around an AEAD body.

Layout of an envelope file:

    b"MAKP1" | u32 header length (big-endian) | header JSON | body

The header is canonical JSON carrying the ABE ciphertext of a uniformly
random TARGET element m, the AEAD algorithm id, the nonce, the backend
descriptor and the universe hash.  The symmetric key is
HKDF-SHA256(canonical_bytes(m), info="MAKP1-KEM"), and the body is
AEAD(key, nonce, payload) with everything before the body as associated
data, so no header field can be modified without detection.

Debug-backend envelopes carry "insecure": true and both seal and open
refuse them unless explicitly allowed.
"""

from __future__ import annotations

import json
import secrets
from typing import Mapping

from cryptography.exceptions import InvalidTag
from cryptography.hazmat.primitives import hashes
from cryptography.hazmat.primitives.ciphers.aead import AESGCM, ChaCha20Poly1305
from cryptography.hazmat.primitives.kdf.hkdf import HKDF

from ..errors import (
    AuthenticationFailedError,
    BackendMismatchError,
    CorruptFieldError,
    InsecureBackendError,
    SerializationError,
    UnknownVersionError,
)
from ..groups import Role, context_from_descriptor
from ..scheme import GlobalParams, decrypt, encrypt
from .serialization import b64d, b64e, canonical_json, ciphertext_from_json, ciphertext_to_json

MAGIC = b"MAKP1"
VERSION = 1
KDF_INFO = b"MAKP1-KEM"
NONCE_LEN = 12

AEADS = {
    "chacha20poly1305": ChaCha20Poly1305,
    "aes-256-gcm": AESGCM,
}

__all__ = ["seal", "open_envelope", "inspect_envelope", "AEADS"]


def _kdf(kem_bytes: bytes) -> bytes:
    return HKDF(algorithm=hashes.SHA256(), length=32, salt=None, info=KDF_INFO).derive(kem_bytes)


def seal(gp: GlobalParams, payload: bytes, attrs, pks, rng=None,
         aead: str = "chacha20poly1305", allow_insecure: bool = False) -> bytes:
    """Encrypt payload bytes to the attribute set attrs under pks."""
    if aead not in AEADS:
        raise SerializationError(f"unsupported aead {aead!r}")
    if not gp.ctx.production and not allow_insecure:
        raise InsecureBackendError(
            "refusing to seal on the debug backend; pass allow_insecure / --insecure-debug")
    kem = gp.ctx.random_element(Role.TARGET, rng)
    ct = encrypt(gp, kem, attrs, pks, rng)
    nonce = rng.randbytes(NONCE_LEN) if rng is not None else secrets.token_bytes(NONCE_LEN)
    header = {
        "abe": ciphertext_to_json(gp, ct),
        "aead": aead,
        "backend": gp.ctx.descriptor(),
        "insecure": not gp.ctx.production,
        "nonce": b64e(nonce),
        "universe_hash": gp.universe.digest_hex(),
        "v": VERSION,
    }
    header_bytes = canonical_json(header)
    prefix = MAGIC + len(header_bytes).to_bytes(4, "big") + header_bytes
    key = _kdf(gp.ctx.canonical_bytes(kem))
    body = AEADS[aead](key).encrypt(nonce, payload, prefix)
    return prefix + body


def _split(blob: bytes):
    if len(blob) < len(MAGIC) + 4 or blob[:len(MAGIC)] != MAGIC:
        raise CorruptFieldError("not a makpabe envelope (bad magic)")
    hlen = int.from_bytes(blob[len(MAGIC):len(MAGIC) + 4], "big")
    header_end = len(MAGIC) + 4 + hlen
    if header_end > len(blob):
        raise CorruptFieldError("envelope truncated")
    header_bytes = blob[len(MAGIC) + 4:header_end]
    try:
        header = json.loads(header_bytes)
    except ValueError as e:
        # covers JSONDecodeError and invalid UTF-8
        raise CorruptFieldError(f"envelope header is not valid JSON: {e}") from None
    if not isinstance(header, dict):
        raise CorruptFieldError("envelope header is not an object")
    if header.get("v") != VERSION:
        raise UnknownVersionError(f"unsupported envelope version {header.get('v')!r}")
    return header, blob[:header_end], blob[header_end:]


def open_envelope(blob: bytes, keys, gp: GlobalParams | None = None,
                  allow_insecure: bool = False) -> bytes:
    """Recover the payload.  keys maps authority_id -> UserKey (or is an
    iterable of UserKeys).  Scheme-level refusals (NotAuthorized,
    MissingAuthorityKey) surface as themselves; any tampering surfaces as
    CorruptFieldError or AuthenticationFailedError."""
    header, prefix, body = _split(blob)
    if header.get("insecure") and not allow_insecure:
        raise InsecureBackendError(
            "envelope was sealed on the debug backend; pass allow_insecure / --insecure-debug")
    backend = header.get("backend")
    if gp is None:
        # borrow the context the caller's keys live on; a context rebuilt
        # from the descriptor would hold elements the keys cannot pair with
        if not isinstance(keys, Mapping):
            keys = list(keys)
        pool = list(keys.values()) if isinstance(keys, Mapping) else keys
        if pool:
            ctx = pool[0].components[0].ctx
            if ctx.descriptor() != backend:
                raise BackendMismatchError(
                    f"envelope was sealed on {backend!r}, keys live on {ctx.descriptor()!r}")
        else:
            try:
                ctx = context_from_descriptor(backend)
            except Exception as e:
                raise CorruptFieldError(f"cannot rebuild context: {e}") from None
        gp = GlobalParams(ctx, universe=None)
    else:
        if gp.ctx.descriptor() != backend:
            raise BackendMismatchError(
                f"envelope was sealed on {backend!r}, context is {gp.ctx.descriptor()!r}")
        if gp.universe is not None and header.get("universe_hash") != gp.universe.digest_hex():
            raise BackendMismatchError("envelope universe hash differs from the supplied one")
    aead = header.get("aead")
    if aead not in AEADS:
        raise SerializationError(f"unsupported aead {aead!r}")
    nonce = b64d(header.get("nonce"))
    if len(nonce) != NONCE_LEN:
        raise CorruptFieldError("bad nonce length")
    abe = header.get("abe")
    if not isinstance(abe, dict):
        raise CorruptFieldError("envelope missing abe ciphertext")
    ct = ciphertext_from_json(gp, abe)
    kem = decrypt(gp, ct, keys)
    key = _kdf(gp.ctx.canonical_bytes(kem))
    try:
        return AEADS[aead](key).decrypt(nonce, bytes(body), bytes(prefix))
    except InvalidTag:
        raise AuthenticationFailedError(
            "envelope failed to authenticate: wrong keys or corrupted file") from None


def inspect_envelope(blob: bytes) -> dict:
    """Header metadata and sizes; decodes no group elements and touches
    no key material."""
    header, prefix, body = _split(blob)
    abe = header.get("abe") if isinstance(header.get("abe"), dict) else {}
    comps = abe.get("components", {})
    n_comp = sum(len(v) for v in comps.values() if isinstance(v, dict))
    return {
        "magic": MAGIC.decode("ascii"),
        "version": header.get("v"),
        "aead": header.get("aead"),
        "backend": header.get("backend"),
        "insecure": bool(header.get("insecure")),
        "authorities": abe.get("authorities"),
        "attrs": abe.get("attrs"),
        "universe_hash": header.get("universe_hash"),
        "abe_components": n_comp + 1,  # the |A|*|S| attribute components plus C'
        "header_bytes": len(prefix),
        "body_bytes": len(body),
    }

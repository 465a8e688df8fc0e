"""JSON key-file containers.

Every artifact is wrapped the same way:

    {
      "fmt": "makpabe-keyfile",
      "version": 1,
      "kind": "authority-public" | "authority-master" | "user-key",
      "backend": {"backend": "debug", "p": ...} | {"backend": "curve", "curve": ...},
      "universe": ["A", "B", ...],
      "secret": bool,
      "body": {...},
      "digest": "<sha256 hex of the canonical container minus this field>"
    }

Encoding is canonical JSON (sorted keys, no whitespace), binary fields
are base64url, and the digest makes any byte flip detectable no matter
which field it lands in.  decode(encode(x)) == x for every kind.
"""

from __future__ import annotations

import base64
import binascii
import hashlib
import json
import os

from ..errors import (
    BackendMismatchError,
    CorruptFieldError,
    InsecureBackendError,
    SerializationError,
    UnknownVersionError,
)
from ..groups import Role, context_from_descriptor
from ..lsss import AccessMatrix
from ..policy import Universe
from ..scheme import (
    AuthorityMasterKey,
    AuthorityPublicKey,
    Ciphertext,
    GlobalParams,
    UserKey,
)

FORMAT = "makpabe-keyfile"
VERSION = 1


def canonical_json(obj) -> bytes:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")).encode("utf-8")


def b64e(blob: bytes) -> str:
    return base64.urlsafe_b64encode(blob).decode("ascii")


def b64d(text) -> bytes:
    if not isinstance(text, str):
        raise CorruptFieldError("binary field is not a string")
    try:
        return base64.urlsafe_b64decode(text.encode("ascii"))
    except (binascii.Error, ValueError) as e:
        raise CorruptFieldError(f"bad base64 field: {e}") from None


def _digest(doc: dict) -> str:
    body = {k: v for k, v in doc.items() if k != "digest"}
    return hashlib.sha256(canonical_json(body)).hexdigest()


def _elem_out(gp, x) -> str:
    return b64e(gp.ctx.canonical_bytes(x))


def _elem_in(gp, role: Role, text, field: str):
    try:
        return gp.ctx.element_from_bytes(role, b64d(text))
    except (ValueError, CorruptFieldError) as e:
        raise CorruptFieldError(f"{field}: {e}") from None


def encode(artifact, gp: GlobalParams, require_production: bool = False) -> bytes:
    """Serialize an artifact to container bytes."""
    if require_production and not gp.ctx.production:
        raise InsecureBackendError(
            "debug backend cannot produce production-marked artifacts")
    if isinstance(artifact, AuthorityPublicKey):
        kind, secret = "authority-public", False
        body = {
            "authority_id": artifact.authority_id,
            "e_gg_alpha": _elem_out(gp, artifact.e_gg_alpha),
            "z_pub": {a: _elem_out(gp, z) for a, z in artifact.z_pub.items()},
        }
    elif isinstance(artifact, AuthorityMasterKey):
        kind, secret = "authority-master", True
        body = {
            "authority_id": artifact.authority_id,
            "alpha": artifact.alpha,
            "z": dict(artifact.z),
        }
    elif isinstance(artifact, UserKey):
        kind, secret = "user-key", True
        body = {
            "authority_id": artifact.authority_id,
            "matrix": {
                "rows": [list(r) for r in artifact.matrix.rows],
                "rho": list(artifact.matrix.rho),
            },
            "components": [_elem_out(gp, c) for c in artifact.components],
        }
    else:
        raise SerializationError(f"cannot encode {type(artifact).__name__}")
    doc = {
        "fmt": FORMAT,
        "version": VERSION,
        "kind": kind,
        "backend": gp.ctx.descriptor(),
        "universe": list(gp.universe.names),
        "secret": secret,
        "body": body,
    }
    doc["digest"] = _digest(doc)
    return canonical_json(doc) + b"\n"


def _require(doc, key, types, where="container"):
    if key not in doc:
        raise CorruptFieldError(f"{where} missing field {key!r}")
    v = doc[key]
    if not isinstance(v, types):
        raise CorruptFieldError(f"{where} field {key!r} has wrong type")
    return v


def _build_gp(doc, gp: GlobalParams | None) -> GlobalParams:
    backend = _require(doc, "backend", dict)
    names = _require(doc, "universe", list)
    if gp is not None:
        if gp.ctx.descriptor() != backend:
            raise BackendMismatchError(
                f"artifact was produced on {backend!r}, context is {gp.ctx.descriptor()!r}")
        if list(gp.universe.names) != names:
            raise BackendMismatchError("artifact universe differs from the supplied one")
        return gp
    try:
        ctx = context_from_descriptor(backend)
        return GlobalParams(ctx, Universe(names))
    except (BackendMismatchError, CorruptFieldError):
        raise
    except Exception as e:
        raise CorruptFieldError(f"cannot rebuild context: {e}") from None


def decode(blob: bytes, gp: GlobalParams | None = None, expect_kind: str | None = None):
    """Parse container bytes.  Returns (gp, artifact); gp is rebuilt from
    the container unless one is supplied, in which case it must match."""
    try:
        doc = json.loads(blob)
    except ValueError as e:
        # covers JSONDecodeError and invalid UTF-8
        raise CorruptFieldError(f"container is not valid JSON: {e}") from None
    if not isinstance(doc, dict) or doc.get("fmt") != FORMAT:
        raise CorruptFieldError("not a makpabe key file")
    version = doc.get("version")
    if version != VERSION:
        raise UnknownVersionError(f"unsupported key-file version {version!r}")
    if _digest(doc) != _require(doc, "digest", str):
        raise CorruptFieldError("digest mismatch; file corrupted")
    kind = _require(doc, "kind", str)
    if expect_kind is not None and kind != expect_kind:
        raise SerializationError(f"expected a {expect_kind} file, got {kind}")
    out_gp = _build_gp(doc, gp)
    body = _require(doc, "body", dict)
    p = out_gp.ctx.order

    if kind == "authority-public":
        zp = _require(body, "z_pub", dict, "body")
        artifact = AuthorityPublicKey(
            authority_id=_require(body, "authority_id", str, "body"),
            e_gg_alpha=_elem_in(out_gp, Role.TARGET, _require(body, "e_gg_alpha", str, "body"),
                                "e_gg_alpha"),
            z_pub={a: _elem_in(out_gp, Role.CIPHER, t, f"z_pub[{a}]") for a, t in zp.items()},
        )
        for a in artifact.z_pub:
            if a not in out_gp.universe:
                raise CorruptFieldError(f"z_pub attribute {a!r} outside the universe")
    elif kind == "authority-master":
        alpha = _require(body, "alpha", int, "body")
        z = _require(body, "z", dict, "body")
        if not 0 <= alpha < p:
            raise CorruptFieldError("alpha out of range")
        for a, zi in z.items():
            if a not in out_gp.universe:
                raise CorruptFieldError(f"z attribute {a!r} outside the universe")
            if not isinstance(zi, int) or not 0 < zi < p:
                raise CorruptFieldError(f"z[{a}] out of range")
        artifact = AuthorityMasterKey(
            authority_id=_require(body, "authority_id", str, "body"),
            alpha=alpha, z=dict(z))
    elif kind == "user-key":
        mat = _require(body, "matrix", dict, "body")
        try:
            matrix = AccessMatrix(
                tuple(tuple(r) for r in _require(mat, "rows", list, "matrix")),
                tuple(_require(mat, "rho", list, "matrix")))
        except Exception as e:
            raise CorruptFieldError(f"bad access matrix: {e}") from None
        for a in matrix.rho:
            if a not in out_gp.universe:
                raise CorruptFieldError(f"matrix label {a!r} outside the universe")
        comps = _require(body, "components", list, "body")
        if len(comps) != matrix.nrows:
            raise CorruptFieldError("component count does not match matrix rows")
        artifact = UserKey(
            authority_id=_require(body, "authority_id", str, "body"),
            matrix=matrix,
            components=tuple(
                _elem_in(out_gp, Role.KEY, t, f"components[{i}]")
                for i, t in enumerate(comps)),
        )
    else:
        raise CorruptFieldError(f"unknown artifact kind {kind!r}")
    return out_gp, artifact


def write_private(path, blob: bytes):
    """Write a secret-bearing file with owner-only permissions."""
    fd = os.open(path, os.O_WRONLY | os.O_CREAT | os.O_TRUNC, 0o600)
    try:
        os.write(fd, blob)
    finally:
        os.close(fd)


# ciphertext <-> JSON fragments, shared with the envelope header

def ciphertext_to_json(gp: GlobalParams, ct: Ciphertext) -> dict:
    comps = {}
    for (aid, attr), el in ct.components.items():
        comps.setdefault(aid, {})[attr] = _elem_out(gp, el)
    return {
        "attrs": list(ct.attrs),
        "authorities": list(ct.authority_ids),
        "c_prime": _elem_out(gp, ct.c_prime),
        "components": comps,
    }


def ciphertext_from_json(gp: GlobalParams, doc: dict) -> Ciphertext:
    attrs = _require(doc, "attrs", list, "ciphertext")
    auths = _require(doc, "authorities", list, "ciphertext")
    comps_doc = _require(doc, "components", dict, "ciphertext")
    components = {}
    for aid in auths:
        per = comps_doc.get(aid)
        if not isinstance(per, dict):
            raise CorruptFieldError(f"ciphertext missing components for {aid!r}")
        for attr in attrs:
            if attr not in per:
                raise CorruptFieldError(f"ciphertext missing component ({aid!r}, {attr!r})")
            components[(aid, attr)] = _elem_in(
                gp, Role.CIPHER, per[attr], f"components[{aid}][{attr}]")
    return Ciphertext(
        attrs=tuple(attrs), authority_ids=tuple(auths),
        c_prime=_elem_in(gp, Role.TARGET, _require(doc, "c_prime", str, "ciphertext"),
                         "c_prime"),
        components=components)

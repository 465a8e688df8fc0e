"""Key-file containers and hybrid envelopes: round trips, byte-flip
detection, backend gating, and the size/shape contract."""

import json
import random
import stat

import pytest

from makpabe.errors import (AuthenticationFailedError, BackendMismatchError,
                            CorruptFieldError, InsecureBackendError,
                            MakpabeError, MissingAuthorityKeyError,
                            NotAuthorizedError, SerializationError,
                            UnknownVersionError)
from makpabe.groups import Backend, Role, new_context
from makpabe.policy import Universe, parse_policy, to_lsss
from makpabe.scheme import GlobalParams, authority_setup, encrypt, keygen
from makpabe.toolkit.envelope import (AEADS, inspect_envelope, open_envelope,
                                      seal)
from makpabe.toolkit.serialization import (ciphertext_from_json,
                                           ciphertext_to_json, decode, encode,
                                           write_private)

P = 2 ** 61 - 1
NAMES = ("A", "B", "C")


@pytest.fixture(scope="module")
def gp():
    return GlobalParams(new_context(Backend.DEBUG_EXPONENT, P), Universe(NAMES))


@pytest.fixture(scope="module")
def gp_ss61():
    return GlobalParams(new_context(Backend.CURVE, "ss61"), Universe(NAMES))


@pytest.fixture(scope="module")
def artifacts(gp):
    rng = random.Random(0x5EA1)
    pk, mk = authority_setup(gp, "auth", rng)
    key = keygen(gp, mk, to_lsss(parse_policy("A and B", gp.universe)), rng)
    return pk, mk, key


# -- key-file containers ---------------------------------------------------------

def test_encode_decode_identity_all_kinds(gp, artifacts):
    for art in artifacts:
        blob = encode(art, gp)
        _, back = decode(blob, gp)            # same context: full equality
        assert back == art
        out_gp, rebuilt = decode(blob)        # context rebuilt from the file
        assert out_gp.ctx.descriptor() == gp.ctx.descriptor()
        assert out_gp.universe.names == gp.universe.names
        assert encode(rebuilt, out_gp) == blob  # byte-level round trip


def test_container_shape(gp, artifacts):
    pk, mk, key = artifacts
    doc = json.loads(encode(mk, gp))
    assert doc["fmt"] == "makpabe-keyfile" and doc["version"] == 1
    assert doc["kind"] == "authority-master" and doc["secret"] is True
    assert doc["universe"] == list(NAMES)
    assert json.loads(encode(pk, gp))["secret"] is False
    with pytest.raises(SerializationError):
        decode(encode(key, gp), expect_kind="authority-public")


def test_every_byte_flip_is_detected(gp, artifacts):
    """Flip one byte at a time through an entire master-key file: decode
    must always fail with a controlled serialization error."""
    blob = bytearray(encode(artifacts[1], gp))
    for i in range(len(blob)):
        orig = blob[i]
        blob[i] ^= 0x20                       # stays printable for most bytes
        try:
            decode(bytes(blob))
        except SerializationError:
            pass
        else:
            raise AssertionError(f"byte flip at offset {i} went undetected")
        blob[i] = orig


def test_version_and_backend_rejections(gp, gp_ss61, artifacts):
    pk = artifacts[0]
    blob = encode(pk, gp)
    with pytest.raises(UnknownVersionError):
        decode(blob.replace(b'"version":1', b'"version":2'))
    with pytest.raises(BackendMismatchError):
        decode(blob, gp_ss61)
    other = GlobalParams(gp.ctx, Universe(("A", "B")))
    with pytest.raises(BackendMismatchError):
        decode(blob, other)
    with pytest.raises(CorruptFieldError):
        decode(b"not json at all")
    with pytest.raises(CorruptFieldError):
        decode(b'{"fmt": "something-else"}')


def test_require_production_gating(gp, artifacts):
    with pytest.raises(InsecureBackendError):
        encode(artifacts[0], gp, require_production=True)


def test_write_private_permissions(tmp_path, gp, artifacts):
    path = tmp_path / "master.json"
    write_private(path, encode(artifacts[1], gp))
    mode = stat.S_IMODE(path.stat().st_mode)
    assert mode == 0o600
    assert decode(path.read_bytes())[1] == artifacts[1]


def test_ciphertext_json_round_trip(gp, artifacts):
    pk, _, _ = artifacts
    ct = encrypt(gp, gp.ctx.random_element(Role.TARGET), ("A", "C"), [pk])
    doc = json.loads(json.dumps(ciphertext_to_json(gp, ct)))
    assert ciphertext_from_json(gp, doc) == ct
    doc["components"]["auth"].pop("A")
    with pytest.raises(CorruptFieldError):
        ciphertext_from_json(gp, doc)


# -- envelopes -------------------------------------------------------------------

def _setup_envelope(gp, policy="A and B", attrs=("A", "B"), payload=b"hello",
                    rng_seed=0xE17, **seal_kw):
    rng = random.Random(rng_seed)
    pk, mk = authority_setup(gp, "auth", rng)
    key = keygen(gp, mk, to_lsss(parse_policy(policy, gp.universe)), rng)
    blob = seal(gp, payload, attrs, [pk], rng,
                allow_insecure=not gp.ctx.production, **seal_kw)
    return blob, key


@pytest.mark.parametrize("size", [0, 1, 1024, 1024 * 1024])
def test_seal_open_round_trip_sizes(gp, size):
    payload = random.Random(size).randbytes(size)
    blob, key = _setup_envelope(gp, payload=payload)
    assert open_envelope(blob, [key], allow_insecure=True) == payload
    assert open_envelope(blob, [key], gp, allow_insecure=True) == payload


@pytest.mark.parametrize("aead", sorted(AEADS))
def test_both_aeads(gp, aead):
    blob, key = _setup_envelope(gp, payload=b"payload", aead=aead)
    assert inspect_envelope(blob)["aead"] == aead
    assert open_envelope(blob, [key], allow_insecure=True) == b"payload"


def test_envelope_bit_flips_all_detected(gp):
    """300 random single-bit corruptions: every one must surface as a
    controlled error, never as a successful open or an odd crash."""
    payload = b"the quick brown fox"
    blob, key = _setup_envelope(gp, payload=payload)
    rng = random.Random(0xF11)
    for _ in range(300):
        corrupt = bytearray(blob)
        i = rng.randrange(len(corrupt))
        corrupt[i] ^= 1 << rng.randrange(8)
        with pytest.raises(MakpabeError):
            open_envelope(bytes(corrupt), [key], allow_insecure=True)


def test_envelope_header_swap_fails_authentication(gp):
    """Rewriting a header field (here: the aead id) keeps the JSON valid
    but breaks the associated data binding."""
    blob, key = _setup_envelope(gp)
    hlen = int.from_bytes(blob[5:9], "big")
    header = json.loads(blob[9:9 + hlen])
    body = blob[9 + hlen:]
    header["aead"] = "aes-256-gcm"
    new_header = json.dumps(header, sort_keys=True, separators=(",", ":")).encode()
    forged = b"MAKP1" + len(new_header).to_bytes(4, "big") + new_header + body
    with pytest.raises(AuthenticationFailedError):
        open_envelope(forged, [key], allow_insecure=True)


def test_envelope_scheme_refusals_come_first(gp):
    rng = random.Random(0xDEC0)
    pk, mk = authority_setup(gp, "auth", rng)
    pk2, _ = authority_setup(gp, "other", rng)
    key = keygen(gp, mk, to_lsss(parse_policy("A and B", gp.universe)), rng)
    blob = seal(gp, b"x", ("A",), [pk], rng, allow_insecure=True)
    with pytest.raises(NotAuthorizedError):                 # S={A} misses the policy
        open_envelope(blob, [key], allow_insecure=True)
    blob2 = seal(gp, b"x", ("A", "B"), [pk, pk2], rng, allow_insecure=True)
    with pytest.raises(MissingAuthorityKeyError):
        open_envelope(blob2, [key], allow_insecure=True)


def test_envelope_universe_and_backend_checks(gp, gp_ss61):
    blob, key = _setup_envelope(gp)
    with pytest.raises(BackendMismatchError):
        open_envelope(blob, [key], gp_ss61, allow_insecure=True)
    shrunk = GlobalParams(gp.ctx, Universe(("A", "B")))
    with pytest.raises(BackendMismatchError):
        open_envelope(blob, [key], shrunk, allow_insecure=True)


def test_insecure_gating(gp):
    rng = random.Random(0x6A7E)
    pk, mk = authority_setup(gp, "auth", rng)
    key = keygen(gp, mk, to_lsss(parse_policy("A", gp.universe)), rng)
    with pytest.raises(InsecureBackendError):
        seal(gp, b"x", ("A",), [pk], rng)                   # no allow_insecure
    blob = seal(gp, b"x", ("A",), [pk], rng, allow_insecure=True)
    assert inspect_envelope(blob)["insecure"] is True
    with pytest.raises(InsecureBackendError):
        open_envelope(blob, [key])                          # gate on open too
    assert open_envelope(blob, [key], allow_insecure=True) == b"x"


def test_production_backend_needs_no_flag(gp_ss61):
    rng = random.Random(0x5517)
    pk, mk = authority_setup(gp_ss61, "auth", rng)
    key = keygen(gp_ss61, mk, to_lsss(parse_policy("A", gp_ss61.universe)), rng)
    blob = seal(gp_ss61, b"curve payload", ("A",), [pk], rng)
    info = inspect_envelope(blob)
    assert info["insecure"] is False and info["backend"] == {"backend": "curve", "curve": "ss61"}
    assert open_envelope(blob, [key]) == b"curve payload"


def test_envelope_size_contract(gp):
    """body = payload + 16-byte tag; header grows linearly in |A|*|S| and
    is independent of the payload."""
    rng = random.Random(0x517E)
    auths = [authority_setup(gp, aid, rng) for aid in ("k1", "k2")]
    pks = [pk for pk, _ in auths]

    def hdr(attrs, pks, payload):
        blob = seal(gp, payload, attrs, pks, rng, allow_insecure=True)
        info = inspect_envelope(blob)
        assert info["body_bytes"] == len(payload) + 16
        assert info["header_bytes"] + info["body_bytes"] == len(blob)
        assert info["abe_components"] == len(info["authorities"]) * len(attrs) + 1
        return info["header_bytes"]

    h1 = hdr(("A",), pks[:1], b"")
    h2 = hdr(("A", "B"), pks[:1], b"123")
    h3 = hdr(("A", "B", "C"), pks[:1], b"a much longer payload than before")
    assert h3 - h2 == h2 - h1                 # one more component, same delta
    assert hdr(("A",), pks[:1], b"x" * 4096) == h1   # header ignores payload

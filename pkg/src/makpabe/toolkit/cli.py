"""makpabe command-line interface.

Exit codes: 0 on success, 1 with a machine-readable JSON error on stderr
for any domain failure, 2 for usage errors (argparse).  Subcommands:

    makpabe authority setup --universe U.txt --id NAME --backend {debug|curve} \
        --out-pub pk.json --out-master mk.json [--seed HEX]
    makpabe keygen --master mk.json --policy "EXPR" --out user.key [--seed HEX]
    makpabe encrypt --attrs A,B --pub pk1.json [--pub pk2.json ...] \
        --in FILE --out FILE.makp [--aead NAME] [--insecure-debug] [--seed HEX]
    makpabe decrypt --key k1.key [--key k2.key ...] --in FILE.makp --out FILE \
        [--insecure-debug]
    makpabe inspect --in FILE.makp
    makpabe policy compile "EXPR" --universe U.txt

MAKPABE_SEED in the environment seeds the rng when --seed is absent;
with neither, system randomness is used.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys

from ..errors import MakpabeError
from ..groups import Backend, new_context
from ..policy import Universe, parse_policy, pretty_print, to_lsss
from ..scheme import GlobalParams, authority_setup, keygen
from .envelope import AEADS, inspect_envelope, open_envelope, seal
from .serialization import decode, encode, write_private


def _rng_from(args):
    seed = getattr(args, "seed", None) or os.environ.get("MAKPABE_SEED")
    if not seed:
        return None
    return random.Random(int(seed, 16))


def _read(path) -> bytes:
    with open(path, "rb") as fh:
        return fh.read()


def _write(path, blob: bytes):
    with open(path, "wb") as fh:
        fh.write(blob)


def _emit(obj):
    print(json.dumps(obj, indent=2, sort_keys=True))


def _cmd_setup(args):
    universe = Universe.from_file(args.universe)
    if args.backend == "debug":
        ctx = new_context(Backend.DEBUG_EXPONENT, args.prime)
    else:
        ctx = new_context(Backend.CURVE, args.curve)
    gp = GlobalParams(ctx, universe)
    pk, mk = authority_setup(gp, args.id, _rng_from(args))
    _write(args.out_pub, encode(pk, gp))
    write_private(args.out_master, encode(mk, gp))
    _emit({
        "authority_id": args.id,
        "backend": ctx.descriptor(),
        "attributes": len(universe),
        "public_key": args.out_pub,
        "master_key": args.out_master,
    })
    return 0


def _cmd_keygen(args):
    gp, mk = decode(_read(args.master), expect_kind="authority-master")
    ast = parse_policy(args.policy, gp.universe)
    matrix = to_lsss(ast)
    uk = keygen(gp, mk, matrix, _rng_from(args))
    write_private(args.out, encode(uk, gp))
    _emit({
        "authority_id": mk.authority_id,
        "policy": pretty_print(ast),
        "matrix_rows": matrix.nrows,
        "matrix_cols": matrix.ncols,
        "key": args.out,
    })
    return 0


def _cmd_encrypt(args):
    gp = None
    pks = []
    for path in args.pub:
        gp, pk = decode(_read(path), gp=gp, expect_kind="authority-public")
        pks.append(pk)
    attrs = [a for a in args.attrs.split(",") if a]
    payload = _read(args.infile)
    blob = seal(gp, payload, attrs, pks, _rng_from(args),
                aead=args.aead, allow_insecure=args.insecure_debug)
    _write(args.out, blob)
    _emit({
        "out": args.out,
        "attrs": sorted(set(attrs)),
        "authorities": [pk.authority_id for pk in pks],
        "payload_bytes": len(payload),
        "envelope_bytes": len(blob),
    })
    return 0


def _cmd_decrypt(args):
    gp = None
    keys = []
    for path in args.key:
        gp, uk = decode(_read(path), gp=gp, expect_kind="user-key")
        keys.append(uk)
    payload = open_envelope(_read(args.infile), keys, gp,
                            allow_insecure=args.insecure_debug)
    _write(args.out, payload)
    _emit({"out": args.out, "payload_bytes": len(payload)})
    return 0


def _cmd_inspect(args):
    _emit(inspect_envelope(_read(args.infile)))
    return 0


def _cmd_policy_compile(args):
    universe = Universe.from_file(args.universe)
    ast = parse_policy(args.expr, universe)
    matrix = to_lsss(ast)
    print(f"policy: {pretty_print(ast)}")
    print(f"matrix: {matrix.nrows} rows x {matrix.ncols} cols")
    width = max(len(str(v)) for row in matrix.rows for v in row)
    for row, label in zip(matrix.rows, matrix.rho):
        cells = " ".join(f"{v:>{width}}" for v in row)
        print(f"  [{cells}]  {label}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="makpabe", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p_auth = sub.add_parser("authority", help="authority management")
    auth_sub = p_auth.add_subparsers(dest="authority_command", required=True)
    p_setup = auth_sub.add_parser("setup", help="create one authority")
    p_setup.add_argument("--universe", required=True, help="attribute names file")
    p_setup.add_argument("--id", required=True, help="authority identifier")
    p_setup.add_argument("--backend", choices=["debug", "curve"], default="curve")
    p_setup.add_argument("--prime", type=int, default=None,
                         help="group order for the debug backend (default 2^61-1)")
    p_setup.add_argument("--curve", default=None, choices=["bn254", "ss61"],
                         help="curve id for the curve backend (default bn254)")
    p_setup.add_argument("--out-pub", required=True)
    p_setup.add_argument("--out-master", required=True)
    p_setup.add_argument("--seed", default=None, help="hex seed for deterministic output")
    p_setup.set_defaults(func=_cmd_setup)

    p_kg = sub.add_parser("keygen", help="issue a user key for a policy")
    p_kg.add_argument("--master", required=True)
    p_kg.add_argument("--policy", required=True)
    p_kg.add_argument("--out", required=True)
    p_kg.add_argument("--seed", default=None)
    p_kg.set_defaults(func=_cmd_keygen)

    p_enc = sub.add_parser("encrypt", help="seal a file to an attribute set")
    p_enc.add_argument("--attrs", required=True, help="comma-separated attribute names")
    p_enc.add_argument("--pub", action="append", required=True,
                       help="authority public key file (repeatable)")
    p_enc.add_argument("--in", dest="infile", required=True)
    p_enc.add_argument("--out", required=True)
    p_enc.add_argument("--aead", choices=sorted(AEADS), default="chacha20poly1305")
    p_enc.add_argument("--insecure-debug", action="store_true",
                       help="allow sealing on the debug backend (not secure)")
    p_enc.add_argument("--seed", default=None)
    p_enc.set_defaults(func=_cmd_encrypt)

    p_dec = sub.add_parser("decrypt", help="open a sealed file")
    p_dec.add_argument("--key", action="append", required=True,
                       help="user key file (repeatable)")
    p_dec.add_argument("--in", dest="infile", required=True)
    p_dec.add_argument("--out", required=True)
    p_dec.add_argument("--insecure-debug", action="store_true",
                       help="allow opening debug-backend envelopes")
    p_dec.set_defaults(func=_cmd_decrypt)

    p_ins = sub.add_parser("inspect", help="print envelope metadata")
    p_ins.add_argument("--in", dest="infile", required=True)
    p_ins.set_defaults(func=_cmd_inspect)

    p_pol = sub.add_parser("policy", help="policy tools")
    pol_sub = p_pol.add_subparsers(dest="policy_command", required=True)
    p_comp = pol_sub.add_parser("compile", help="compile a policy to its LSSS matrix")
    p_comp.add_argument("expr", help="policy expression")
    p_comp.add_argument("--universe", required=True)
    p_comp.set_defaults(func=_cmd_policy_compile)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except MakpabeError as e:
        print(json.dumps({"error": type(e).__name__, "detail": str(e)}), file=sys.stderr)
        return 1
    except OSError as e:
        print(json.dumps({"error": "OSError", "detail": str(e)}), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Attack building blocks: ways to abuse issued keys.

These helpers deliberately construct malformed or hybrid keys so tests
and adversaries can demonstrate that the abuse does NOT work.  Nothing
here bypasses the scheme; it just re-wires public artifacts.
"""

from __future__ import annotations

from ..groups import Role
from ..lsss import AccessMatrix
from ..scheme import Ciphertext, GlobalParams, UserKey

__all__ = ["splice_keys", "relabel_authority", "forced_pair_product"]


def splice_keys(matrix: AccessMatrix, parts) -> UserKey:
    """Assemble a hybrid key: claim `matrix` as the policy and fill each
    row's component from (key, row_index) in parts.  Keys must share an
    authority; nothing else is checked, that is the point."""
    parts = list(parts)
    if len(parts) != matrix.nrows:
        raise ValueError("need one (key, row) part per matrix row")
    ids = {key.authority_id for key, _ in parts}
    if len(ids) != 1:
        raise ValueError("spliced parts must come from one authority")
    return UserKey(
        authority_id=ids.pop(),
        matrix=matrix,
        components=tuple(key.components[i] for key, i in parts))


def relabel_authority(key: UserKey, authority_id: str) -> UserKey:
    """Present a key as if some other authority had issued it."""
    return UserKey(authority_id=authority_id, matrix=key.matrix,
                   components=key.components)


def forced_pair_product(gp: GlobalParams, ct: Ciphertext, key: UserKey,
                        rows, coeffs, attr_substitute=None):
    """Run the decryption pair-product with a chosen plan instead of a
    derived one: rows index into key.matrix, coeffs are the claimed
    reconstruction coefficients.  Rows whose attribute has no ciphertext
    component borrow the component of attr_substitute.  Returns the
    would-be blinding factor e(g,g)^{alpha s} this authority contributes."""
    ctx = gp.ctx
    acc = ctx.generator(Role.TARGET)
    acc = ctx.exp(acc, 0)
    for i, w in zip(rows, coeffs):
        attr = key.matrix.rho[i]
        comp = ct.components.get((key.authority_id, attr))
        if comp is None:
            if attr_substitute is None:
                raise ValueError(f"no ciphertext component for {attr!r} "
                                 "and no substitute given")
            comp = ct.components[(key.authority_id, attr_substitute)]
        acc = ctx.combine(acc, ctx.exp(ctx.pair(key.components[i], comp), w))
    return acc

"""Linear secret sharing: hand-checked p=13 values plus the duality and
round-trip properties that the scheme leans on."""

import random
from collections import Counter
from itertools import combinations, product

import pytest
from hypothesis import given, settings, strategies as st

from makpabe.errors import AuthorizedSetError, UnauthorizedSetError
from makpabe.lsss import (AccessMatrix, apply_plan, blocking_vector,
                          gauss_solve, is_authorized,
                          reconstruction_coefficients, share)
from makpabe.policy import Universe, attributes, evaluate, parse_policy, to_lsss
from astgen import enumerate_policies
from support import SeqRng

P = 2 ** 61 - 1
AND_M = AccessMatrix(((1, 1), (0, -1)), ("A", "B"))
OR_M = AccessMatrix(((1,), (1,)), ("A", "B"))


# -- hand-checked examples (p = 13) ----------------------------------------------

def test_share_examples():
    sv = share(AND_M, 5, 13, SeqRng([3]))
    assert sv.v == (5, 3) and sv.values == (8, 10)
    sv = share(AccessMatrix(((1,),), ("A",)), 7, 13)
    assert sv.values == (7,) and sv.v == (7,)
    sv = share(AND_M, 0, 13, SeqRng([0]))
    assert sv.values == (0, 0)


def test_is_authorized_examples():
    assert is_authorized(AND_M, {"A", "B"}, 13)
    assert not is_authorized(AND_M, {"A"}, 13)
    assert not is_authorized(AND_M, set(), 13)


def test_reconstruction_examples():
    plan = reconstruction_coefficients(AND_M, {"A", "B"}, 13)
    assert plan.rows == (0, 1) and plan.coeffs == (1, 1)
    plan = reconstruction_coefficients(OR_M, {"B"}, 13)
    assert plan.rows == (1,) and plan.coeffs == (1,)
    with pytest.raises(UnauthorizedSetError):
        reconstruction_coefficients(AND_M, {"A"}, 13)


def test_blocking_vector_examples():
    assert blocking_vector(AND_M, {"A"}, 13) == (1, 12)
    assert blocking_vector(AND_M, set(), 13) == (1, 0)
    with pytest.raises(AuthorizedSetError):
        blocking_vector(AND_M, {"A", "B"}, 13)


def test_apply_plan_examples():
    plan = reconstruction_coefficients(AND_M, {"A", "B"}, 13)
    assert apply_plan(plan, (8, 10), 13) == 5
    single = reconstruction_coefficients(OR_M, {"A"}, 13)
    assert apply_plan(single, (7, 0), 13) == 7
    from makpabe.lsss import ReconstructionPlan

    assert apply_plan(ReconstructionPlan((), ()), (1, 2), 13) == 0


# -- solver ----------------------------------------------------------------------

def test_gauss_solve_basics():
    # 2x + y = 1, x + y = 0 over Z_13 -> x = 1, y = 12
    assert gauss_solve([[2, 1], [1, 1]], [1, 0], 2, 13) == [1, 12]
    # inconsistent
    assert gauss_solve([[1, 1], [2, 2]], [1, 3], 2, 13) is None
    # underdetermined: free variable pinned to 0
    assert gauss_solve([[1, 1]], [5, ], 2, 13) == [5, 0]
    # no equations at all: everything free
    assert gauss_solve([], [], 3, 13) == [0, 0, 0]


def test_plan_and_blocking_determinism():
    uni = Universe(("A", "B", "C", "D"))
    am = to_lsss(parse_policy("2 of (A, B, C) or D", uni))
    for s in ({"A", "B"}, {"B", "C"}, {"D"}):
        assert (reconstruction_coefficients(am, s, P)
                == reconstruction_coefficients(am, s, P))
    for s in ({"A"}, {"C"}, set()):
        assert blocking_vector(am, s, P) == blocking_vector(am, s, P)


# -- properties ------------------------------------------------------------------

def test_share_reconstruct_round_trip_randomized():
    uni = Universe(("a1", "a2", "a3", "a4", "a5"))
    pols = list(enumerate_policies(uni.names, 5))
    rng = random.Random(0x15555)
    trials = 0
    while trials < 1200:
        pol = pols[rng.randrange(len(pols))]
        am = to_lsss(pol)
        attrs = sorted(attributes(pol))
        s = {a for a in attrs if rng.getrandbits(1)}
        if not evaluate(pol, s):
            continue
        secret = rng.randrange(P)
        sv = share(am, secret, P, rng)
        plan = reconstruction_coefficients(am, s, P)
        assert all(am.rho[i] in s for i in plan.rows)
        assert apply_plan(plan, sv.values, P) == secret
        trials += 1


def test_duality_exhaustive_small():
    uni = Universe(("a1", "a2", "a3", "a4"))
    for pol in enumerate_policies(uni.names, 4):
        am = to_lsss(pol)
        attrs = sorted(attributes(pol))
        for r in range(len(attrs) + 1):
            for s in combinations(attrs, r):
                plan_ok = block_ok = False
                try:
                    plan = reconstruction_coefficients(am, s, P)
                    plan_ok = True
                    # the plan really recombines to the target vector
                    tgt = [0] * am.ncols
                    for i, w in zip(plan.rows, plan.coeffs):
                        tgt = [(t + w * c) % P for t, c in zip(tgt, am.rows[i])]
                    assert tgt == [1] + [0] * (am.ncols - 1)
                except UnauthorizedSetError:
                    pass
                try:
                    y = blocking_vector(am, s, P)
                    block_ok = True
                    assert y[0] == 1
                    idx = am.rows_for(s)
                    assert all(sum(c * yj for c, yj in zip(am.rows[i], y)) % P == 0
                               for i in idx)
                except AuthorizedSetError:
                    pass
                assert plan_ok != block_ok


def test_unauthorized_shares_leak_nothing_p13():
    """Exhaustive zero-knowledge at p=13: for unauthorized S the multiset
    of S-labeled share tuples is the same for every secret."""
    uni = Universe(("A", "B", "C"))
    cases = [
        (to_lsss(parse_policy("A and B", uni)), {"A"}),
        (to_lsss(parse_policy("2 of (A, B, C)", uni)), {"B"}),
        (to_lsss(parse_policy("A and (B or C)", uni)), {"B", "C"}),
    ]
    for am, s in cases:
        idx = am.rows_for(s)
        dists = []
        for secret in range(13):
            c = Counter()
            for tail in product(range(13), repeat=am.ncols - 1):
                v = (secret,) + tail
                lam = tuple(sum(cv * vj for cv, vj in zip(row, v)) % 13
                            for row in am.rows)
                c[tuple(lam[i] for i in idx)] += 1
            dists.append(c)
        assert all(d == dists[0] for d in dists[1:])


@settings(max_examples=120, deadline=None)
@given(st.data())
def test_share_round_trip_hypothesis(data):
    uni = Universe(("a1", "a2", "a3", "a4"))
    pols = list(enumerate_policies(uni.names, 4))
    pol = data.draw(st.sampled_from(pols))
    am = to_lsss(pol)
    attrs = sorted(attributes(pol))
    s = set(data.draw(st.sets(st.sampled_from(attrs))) if attrs else ())
    secret = data.draw(st.integers(0, P - 1))
    rng = random.Random(data.draw(st.integers(0, 2 ** 32)))
    sv = share(am, secret, P, rng)
    if evaluate(pol, s):
        plan = reconstruction_coefficients(am, s, P)
        assert apply_plan(plan, sv.values, P) == secret
    else:
        with pytest.raises(UnauthorizedSetError):
            reconstruction_coefficients(am, s, P)


def test_access_matrix_validation():
    from makpabe.errors import LsssError

    with pytest.raises(LsssError):
        AccessMatrix((), ())
    with pytest.raises(LsssError):
        AccessMatrix(((1, 0), (1,)), ("A", "B"))      # ragged
    with pytest.raises(LsssError):
        AccessMatrix(((1,),), ("A", "B"))             # rho length

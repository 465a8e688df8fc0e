"""Linear secret sharing over Z_p.

An access structure is a share-generating matrix M (l rows, n columns)
together with a labeling rho of rows by attribute names.  A secret z is
shared by sampling v = (z, v2, ..., vn) and handing out lambda_i = M_i . v;
an attribute set S is authorized exactly when the rows labeled by S span
the target vector (1, 0, ..., 0).

Matrix entries are kept as plain ints and reduced mod p inside each
operation, so one matrix can serve any prime.  All row indices in plans
are 0-based positions into the matrix.
"""

from __future__ import annotations

import secrets
from dataclasses import dataclass

from .errors import AuthorizedSetError, LsssError, UnauthorizedSetError

__all__ = [
    "AccessMatrix",
    "ShareVector",
    "ReconstructionPlan",
    "share",
    "is_authorized",
    "reconstruction_coefficients",
    "blocking_vector",
    "apply_plan",
    "gauss_solve",
]


@dataclass(frozen=True)
class AccessMatrix:
    rows: tuple
    rho: tuple

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in row) for row in self.rows)
        rho = tuple(str(a) for a in self.rho)
        if not rows:
            raise LsssError("access matrix needs at least one row")
        n = len(rows[0])
        if n < 1:
            raise LsssError("access matrix needs at least one column")
        if any(len(r) != n for r in rows):
            raise LsssError("ragged access matrix")
        if len(rho) != len(rows):
            raise LsssError(f"rho labels {len(rho)} rows but matrix has {len(rows)}")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "rho", rho)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0])

    def attributes(self) -> frozenset:
        return frozenset(self.rho)

    def rows_for(self, attrs) -> list:
        """0-based indices of rows whose label is in attrs, in row order."""
        return [i for i, a in enumerate(self.rho) if a in attrs]


@dataclass(frozen=True)
class ShareVector:
    values: tuple     # lambda_i, one per matrix row
    v: tuple          # the sharing vector, v[0] is the secret


@dataclass(frozen=True)
class ReconstructionPlan:
    rows: tuple       # 0-based row indices with nonzero coefficient
    coeffs: tuple     # matching coefficients, same length


def gauss_solve(rows, rhs, n_var: int, p: int):
    """Solve the linear system rows . x = rhs over Z_p.

    Deterministic: variables are eliminated left to right and the pivot is
    always the first still-unused equation with a nonzero entry.  Free
    variables are set to 0.  Returns a list of length n_var, or None when
    the system is inconsistent.
    """
    n_eq = len(rows)
    aug = [[rows[i][j] % p for j in range(n_var)] + [rhs[i] % p] for i in range(n_eq)]
    used = [False] * n_eq
    pivots = []
    for col in range(n_var):
        piv = next((i for i in range(n_eq) if not used[i] and aug[i][col]), None)
        if piv is None:
            continue
        used[piv] = True
        inv = pow(aug[piv][col], -1, p)
        aug[piv] = [v * inv % p for v in aug[piv]]
        for i in range(n_eq):
            if i != piv and aug[i][col]:
                f = aug[i][col]
                aug[i] = [(v - f * w) % p for v, w in zip(aug[i], aug[piv])]
        pivots.append((piv, col))
    for i in range(n_eq):
        if not used[i] and aug[i][n_var]:
            return None
    x = [0] * n_var
    for piv, col in pivots:
        x[col] = aug[piv][n_var]
    return x


def share(am: AccessMatrix, secret: int, p: int, rng=None) -> ShareVector:
    """Split secret into one share per matrix row.  v[0] is the secret and
    the remaining coordinates are uniform in Z_p."""
    r = rng if rng is not None else secrets.SystemRandom()
    v = [secret % p] + [r.randrange(0, p) for _ in range(am.ncols - 1)]
    values = tuple(sum(c * vj for c, vj in zip(row, v)) % p for row in am.rows)
    return ShareVector(values=values, v=tuple(v))


def _target(n: int) -> list:
    return [1] + [0] * (n - 1)


def is_authorized(am: AccessMatrix, attrs, p: int) -> bool:
    """True when the rows labeled by attrs span (1, 0, ..., 0) mod p."""
    return _solve_recon(am, attrs, p) is not None


def _solve_recon(am: AccessMatrix, attrs, p: int):
    idx = am.rows_for(attrs)
    # unknowns are one coefficient per selected row; equations are the
    # n matrix columns
    n = am.ncols
    eqs = [[am.rows[i][j] for i in idx] for j in range(n)]
    x = gauss_solve(eqs, _target(n), len(idx), p)
    return None if x is None else (idx, x)


def reconstruction_coefficients(am: AccessMatrix, attrs, p: int) -> ReconstructionPlan:
    """Coefficients w with sum_i w_i M_i = (1, 0, ..., 0) over rows labeled
    by attrs.  Rows that receive a zero coefficient are dropped."""
    solved = _solve_recon(am, attrs, p)
    if solved is None:
        raise UnauthorizedSetError(
            f"attribute set {sorted(attrs)!r} does not satisfy the access structure")
    idx, x = solved
    pairs = [(i, w) for i, w in zip(idx, x) if w]
    return ReconstructionPlan(
        rows=tuple(i for i, _ in pairs), coeffs=tuple(w for _, w in pairs))


def blocking_vector(am: AccessMatrix, attrs, p: int) -> tuple:
    """A vector y with y[0] = 1 and M_i . y = 0 for every row labeled by
    attrs.  Exists exactly when attrs is unauthorized."""
    idx = am.rows_for(attrs)
    n = am.ncols
    eqs = [[am.rows[i][j] for j in range(1, n)] for i in idx]
    rhs = [-am.rows[i][0] for i in idx]
    x = gauss_solve(eqs, rhs, n - 1, p)
    if x is None:
        raise AuthorizedSetError(
            f"attribute set {sorted(attrs)!r} satisfies the access structure; "
            f"no blocking vector exists")
    return (1, *x)


def apply_plan(plan: ReconstructionPlan, shares, p: int) -> int:
    """Recombine shares (indexed by matrix row) under a plan.  An empty
    plan yields 0."""
    return sum(w * shares[i] for i, w in zip(plan.rows, plan.coeffs)) % p

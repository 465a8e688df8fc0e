"""Bilinear group contexts.

Two families of backend:

* DEBUG_EXPONENT -- group elements are their own discrete logs mod a prime
  p.  Exact, fast, and fully observable (discrete_log works), which is what
  the game harness audits require.  Never secure: everything is public.
* CURVE -- pairing-friendly elliptic curves.  ``ss61`` is a small
  supersingular test curve (symmetric pairing, 61-bit subgroup, breakable
  on purpose); ``bn254`` is a Barreto-Naehrig curve at a conventional
  parameter size (asymmetric, type 3).

All scheme code goes through the PairingContext interface and stays
backend-agnostic.  Elements carry a role tag (KEY, CIPHER, TARGET) so that
source-group mixups are caught even on symmetric backends.
"""

from __future__ import annotations

import enum
import random
import secrets
from abc import ABC, abstractmethod

from ..errors import (
    AuditUnavailableError,
    ContextMismatchError,
    CorruptFieldError,
    GroupParameterError,
    NonPrimeError,
    RoleMismatchError,
    UnknownCurveError,
)

__all__ = [
    "Backend",
    "Role",
    "GroupElem",
    "PairingContext",
    "PairingMeter",
    "new_context",
    "is_prime",
    "DEFAULT_DEBUG_PRIME",
    "DEFAULT_CURVE_ID",
]

DEFAULT_DEBUG_PRIME = 2**61 - 1
DEFAULT_CURVE_ID = "bn254"

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Miller-Rabin.  Deterministic for n < 3.3e24 via the fixed base set;
    larger inputs get 40 extra random rounds."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1

    def witness(a):
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            return False
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                return False
        return True

    for a in _MR_BASES:
        if witness(a):
            return False
    if n >= 3317044064679887385961981:
        rng = random.Random(0xC0FFEE ^ n)
        for _ in range(40):
            if witness(rng.randrange(2, n - 1)):
                return False
    return True


class Backend(enum.Enum):
    DEBUG_EXPONENT = "debug"
    CURVE = "curve"


class Role(enum.Enum):
    KEY = "key"
    CIPHER = "cipher"
    TARGET = "target"


class GroupElem:
    """A group element bound to a context and a role.

    Operator sugar: ``*`` combines, ``/`` combines with the inverse,
    ``**`` exponentiates by an int.  All of it delegates to the context,
    so role and context checks apply uniformly.
    """

    __slots__ = ("ctx", "role", "data")

    def __init__(self, ctx: "PairingContext", role: Role, data):
        self.ctx = ctx
        self.role = role
        self.data = data

    def __mul__(self, other):
        return self.ctx.combine(self, other)

    def __truediv__(self, other):
        return self.ctx.combine(self, self.ctx.invert(other))

    def __pow__(self, k: int):
        return self.ctx.exp(self, k)

    def __eq__(self, other):
        if not isinstance(other, GroupElem):
            return NotImplemented
        if other.ctx is not self.ctx or other.role is not self.role:
            return False
        return self.ctx.eq(self, other)

    def __hash__(self):
        return hash((id(self.ctx), self.role, self.ctx.canonical_bytes(self)))

    def __repr__(self):
        blob = self.ctx.canonical_bytes(self)
        return f"<{self.role.value} elem {blob.hex()[:16]}… {self.ctx.name}>"


class PairingMeter:
    """Snapshot of the context pairing counter; ``count`` is the delta since
    the meter was created (or last reset)."""

    def __init__(self, ctx: "PairingContext"):
        self._ctx = ctx
        self._start = ctx.pairing_count

    def reset(self):
        self._start = self._ctx.pairing_count

    @property
    def count(self) -> int:
        return self._ctx.pairing_count - self._start

    def __enter__(self):
        self.reset()
        return self

    def __exit__(self, *exc):
        return False


class PairingContext(ABC):
    """Shared machinery: role checks, the pairing counter, randomness,
    operator plumbing.  Backends fill in the _raw hooks."""

    backend: Backend
    name: str
    order: int          # prime order p of every group
    symmetric: bool     # KEY and CIPHER are the same group
    production: bool    # False means secrets are observable by design

    def __init__(self):
        self._pairing_count = 0

    # -- observers ---------------------------------------------------------

    @property
    def pairing_count(self) -> int:
        return self._pairing_count

    def meter(self) -> PairingMeter:
        return PairingMeter(self)

    def descriptor(self) -> dict:
        """JSON-safe description sufficient to rebuild an equal context."""
        if self.backend is Backend.DEBUG_EXPONENT:
            return {"backend": "debug", "p": self.order}
        return {"backend": "curve", "curve": self.name}

    # -- checks --------------------------------------------------------------

    def _check(self, x: GroupElem, role: Role | None = None) -> GroupElem:
        if not isinstance(x, GroupElem):
            raise TypeError(f"expected GroupElem, got {type(x).__name__}")
        if x.ctx is not self:
            raise ContextMismatchError("element belongs to a different context")
        if role is not None and x.role is not role:
            raise RoleMismatchError(f"expected {role.value} element, got {x.role.value}")
        return x

    def _wrap(self, role: Role, data) -> GroupElem:
        return GroupElem(self, role, data)

    # -- group operations ------------------------------------------------------

    def generator(self, role: Role) -> GroupElem:
        return self._wrap(role, self._raw_generator(role))

    def identity(self, role: Role) -> GroupElem:
        return self._wrap(role, self._raw_identity(role))

    def exp(self, x: GroupElem, k: int) -> GroupElem:
        self._check(x)
        return self._wrap(x.role, self._raw_exp(x.role, x.data, k % self.order))

    def combine(self, x: GroupElem, y: GroupElem) -> GroupElem:
        self._check(x)
        self._check(y, x.role)
        return self._wrap(x.role, self._raw_combine(x.role, x.data, y.data))

    def invert(self, x: GroupElem) -> GroupElem:
        self._check(x)
        return self._wrap(x.role, self._raw_invert(x.role, x.data))

    def eq(self, x: GroupElem, y: GroupElem) -> bool:
        self._check(x)
        self._check(y, x.role)
        return self._raw_eq(x.role, x.data, y.data)

    def pair(self, a: GroupElem, b: GroupElem) -> GroupElem:
        """e(a, b).  a must be a KEY element and b a CIPHER element.
        Increments the pairing counter by exactly one per call."""
        self._check(a, Role.KEY)
        self._check(b, Role.CIPHER)
        self._pairing_count += 1
        return self._wrap(Role.TARGET, self._raw_pair(a.data, b.data))

    def as_role(self, x: GroupElem, role: Role) -> GroupElem:
        """Retag a source-group element.  Only meaningful on symmetric
        backends where KEY and CIPHER share a representation."""
        self._check(x)
        if x.role is role:
            return x
        if Role.TARGET in (x.role, role):
            raise RoleMismatchError("cannot retag to or from the target group")
        if not self.symmetric:
            raise RoleMismatchError(
                f"{self.name} is asymmetric; {x.role.value} elements cannot "
                f"be reinterpreted as {role.value}")
        return self._wrap(role, x.data)

    # -- scalars and randomness ---------------------------------------------------

    def random_scalar(self, rng=None, nonzero: bool = False) -> int:
        r = rng if rng is not None else secrets.SystemRandom()
        lo = 1 if nonzero else 0
        return r.randrange(lo, self.order)

    def random_element(self, role: Role, rng=None) -> GroupElem:
        return self.exp(self.generator(role), self.random_scalar(rng))

    def scalar_inv(self, k: int) -> int:
        return pow(k, -1, self.order)

    # -- serialization ------------------------------------------------------------

    def canonical_bytes(self, x: GroupElem) -> bytes:
        self._check(x)
        return self._raw_bytes(x.role, x.data)

    def element_from_bytes(self, role: Role, blob: bytes) -> GroupElem:
        try:
            return self._wrap(role, self._raw_from_bytes(role, blob))
        except ValueError as e:
            raise CorruptFieldError(f"{role.value} element: {e}") from None

    # -- debug-only observer ---------------------------------------------------------

    def discrete_log(self, x: GroupElem) -> int:
        raise AuditUnavailableError(
            f"discrete_log is only available on the debug backend, not {self.name}")

    # -- backend hooks ---------------------------------------------------------------

    @abstractmethod
    def _raw_generator(self, role: Role): ...

    @abstractmethod
    def _raw_identity(self, role: Role): ...

    @abstractmethod
    def _raw_exp(self, role: Role, data, k: int): ...

    @abstractmethod
    def _raw_combine(self, role: Role, a, b): ...

    @abstractmethod
    def _raw_invert(self, role: Role, data): ...

    @abstractmethod
    def _raw_eq(self, role: Role, a, b) -> bool: ...

    @abstractmethod
    def _raw_pair(self, a, b): ...

    @abstractmethod
    def _raw_bytes(self, role: Role, data) -> bytes: ...

    @abstractmethod
    def _raw_from_bytes(self, role: Role, blob: bytes): ...


def new_context(backend, param=None) -> PairingContext:
    """Build a pairing context.

    backend == DEBUG_EXPONENT: param is the prime p (default 2^61 - 1).
    backend == CURVE: param is a curve id, "bn254" or "ss61" (default bn254).
    Strings "debug" / "curve" are accepted for the backend.
    """
    if isinstance(backend, str):
        try:
            backend = Backend(backend)
        except ValueError:
            raise GroupParameterError(f"unknown backend {backend!r}") from None
    if backend is Backend.DEBUG_EXPONENT:
        from .debug import DebugContext
        p = DEFAULT_DEBUG_PRIME if param is None else param
        if not isinstance(p, int):
            raise GroupParameterError(f"debug backend needs an integer prime, got {p!r}")
        if not is_prime(p):
            raise NonPrimeError(p)
        if p < 13:
            raise GroupParameterError(f"p must be at least 13, got {p}")
        return DebugContext(p)
    if backend is Backend.CURVE:
        curve_id = DEFAULT_CURVE_ID if param is None else param
        if curve_id == "ss61":
            from .supersingular import SS61Context
            return SS61Context()
        if curve_id == "bn254":
            from .bn254 import BN254Context
            return BN254Context()
        raise UnknownCurveError(curve_id)
    raise GroupParameterError(f"unknown backend {backend!r}")


def context_from_descriptor(desc: dict) -> PairingContext:
    """Inverse of PairingContext.descriptor()."""
    kind = desc.get("backend")
    if kind == "debug":
        return new_context(Backend.DEBUG_EXPONENT, desc.get("p"))
    if kind == "curve":
        return new_context(Backend.CURVE, desc.get("curve"))
    raise GroupParameterError(f"bad backend descriptor: {desc!r}")

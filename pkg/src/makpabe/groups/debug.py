"""Exponent-space debug backend.

An element "g^x" is stored as the integer x mod p.  Pairing multiplies
exponents, so e(g^a, g^b) = gt^(ab) exactly.  Nothing here is hidden:
discrete_log just returns the stored integer.  That is the point -- the
game harness audits need to read every exponent the simulator produced.
"""

from __future__ import annotations

from . import Backend, PairingContext, Role


class DebugContext(PairingContext):
    backend = Backend.DEBUG_EXPONENT
    symmetric = True
    production = False

    def __init__(self, p: int):
        super().__init__()
        self.order = p
        self.name = f"debug(p={p})"
        self._nbytes = (p.bit_length() + 7) // 8

    def _raw_generator(self, role):
        return 1

    def _raw_identity(self, role):
        return 0

    def _raw_exp(self, role, data, k):
        return data * k % self.order

    def _raw_combine(self, role, a, b):
        return (a + b) % self.order

    def _raw_invert(self, role, data):
        return -data % self.order

    def _raw_eq(self, role, a, b):
        return a == b

    def _raw_pair(self, a, b):
        return a * b % self.order

    def _raw_bytes(self, role, data):
        return data.to_bytes(self._nbytes, "big")

    def _raw_from_bytes(self, role, blob):
        if len(blob) != self._nbytes:
            raise ValueError(
                f"debug element must be {self._nbytes} bytes, got {len(blob)}")
        x = int.from_bytes(blob, "big")
        if x >= self.order:
            raise ValueError("debug element out of range")
        return x

    def discrete_log(self, x):
        self._check(x)
        return x.data

"""File formats and the operator CLI: JSON key containers, the hybrid
encryption envelope, and the makpabe command."""

from .envelope import open_envelope, seal
from .serialization import decode, encode, write_private

__all__ = ["encode", "decode", "write_private", "seal", "open_envelope"]

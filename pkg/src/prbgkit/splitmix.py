"""Deterministic 64-bit stream used for every seed expansion in the package.

One 64-bit seed reproduces an entire experiment: key generation, system
generation, benchmark operands and test fixtures all draw from this stream.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class SplitMix64:
    """splitmix64 with the standard finalizer constants.

    Each step adds the golden-ratio increment to the state, then scrambles
    a copy of it with two xor-shift-multiply rounds. All arithmetic is
    modulo 2^64.
    """

    __slots__ = ("state", "_buf", "_buf_bits")

    def __init__(self, seed: int) -> None:
        self.state = seed & _MASK64
        self._buf = 0
        self._buf_bits = 0

    def next_word(self) -> int:
        """Next 64-bit output."""
        self.state = (self.state + _GAMMA) & _MASK64
        t = self.state
        t = ((t ^ (t >> 30)) * _MIX1) & _MASK64
        t = ((t ^ (t >> 27)) * _MIX2) & _MASK64
        return t ^ (t >> 31)

    def next_bits(self, nbits: int) -> int:
        """Next nbits of the stream as an integer, LSB = earliest bit.

        Words are consumed least-significant bit first; leftover bits of a
        word carry over to the next call, so draws of any width tile the
        stream with no gaps.
        """
        if nbits < 0:
            raise ValueError("bit count must be nonnegative")
        while self._buf_bits < nbits:
            self._buf |= self.next_word() << self._buf_bits
            self._buf_bits += 64
        out = self._buf & ((1 << nbits) - 1)
        self._buf >>= nbits
        self._buf_bits -= nbits
        return out

    def randbelow(self, limit: int) -> int:
        """Uniform-ish value in [0, limit); bias is negligible for large limits."""
        if limit <= 0:
            raise ValueError("limit must be positive")
        nbits = limit.bit_length() + 64
        return self.next_bits(nbits) % limit

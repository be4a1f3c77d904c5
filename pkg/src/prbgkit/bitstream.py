"""Bit-string plumbing for the generators.

A bit string is an integer plus an explicit length; bit i of the integer is
the i-th bit of the stream. Serialized to bytes, bit 0 lands in bit 0 of
byte 0 (LSB-first within each byte), which is exactly the little-endian
byte encoding of the integer.
"""

from __future__ import annotations

from typing import NamedTuple


class Bits(NamedTuple):
    """An immutable bit string: `value` holds the bits, LSB = first bit."""

    value: int
    nbits: int

    def to_bytes(self) -> bytes:
        return self.value.to_bytes((self.nbits + 7) // 8, "little")

    def to01(self) -> str:
        """Render first-emitted bit first, e.g. value 1, nbits 4 -> "1000"."""
        return "".join(str((self.value >> i) & 1) for i in range(self.nbits))

    @classmethod
    def from_bytes(cls, data: bytes, nbits: int | None = None) -> "Bits":
        n = 8 * len(data) if nbits is None else nbits
        v = int.from_bytes(data, "little") & ((1 << n) - 1)
        return cls(v, n)


class BitSink:
    """Accumulates bit blocks; cheap appends, one balanced join at the end."""

    __slots__ = ("_chunks", "_nbits")

    def __init__(self) -> None:
        self._chunks: list[tuple[int, int]] = []
        self._nbits = 0

    def append(self, value: int, nbits: int) -> None:
        if nbits < 0:
            raise ValueError("bit count must be nonnegative")
        self._chunks.append((value & ((1 << nbits) - 1), nbits))
        self._nbits += nbits

    @property
    def nbits(self) -> int:
        return self._nbits

    def bits(self) -> Bits:
        # Pairwise joining keeps the total shift work O(N log N) instead of
        # O(N^2) for long streams.
        chunks = self._chunks
        if not chunks:
            return Bits(0, 0)
        while len(chunks) > 1:
            merged = []
            for i in range(0, len(chunks) - 1, 2):
                v1, n1 = chunks[i]
                v2, n2 = chunks[i + 1]
                merged.append((v1 | (v2 << n1), n1 + n2))
            if len(chunks) % 2:
                merged.append(chunks[-1])
            chunks = merged
        self._chunks = chunks
        return Bits(chunks[0][0], self._nbits)

    def to_bytes(self) -> bytes:
        return self.bits().to_bytes()

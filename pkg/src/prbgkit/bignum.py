"""Arbitrary-precision unsigned arithmetic with selectable multiplication
algorithms and leaf-multiplication accounting.

`Natural` is a normalized unsigned integer exposed as a vector of 64-bit
limbs, least significant first. The magnitude itself is carried by the host
big integer, which also serves as the base ("leaf") multiplier; the
Karatsuba and Toom-Cook routines here control how operands are split above
that base, and `MulCounter` records every leaf multiplication together with
its operand sizes. Splitting structure, not leaf speed, is what the
accounting measures.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass

LIMB_BITS = 64
_LIMB_MASK = (1 << LIMB_BITS) - 1


class UnderflowError(ArithmeticError):
    """Subtraction of naturals would produce a negative result."""


class HexFormatError(ValueError):
    """Input is not canonical lowercase hex."""


class Natural:
    """Normalized arbitrary-precision unsigned integer.

    Zero has an empty limb vector; otherwise the most significant limb is
    nonzero. Instances are immutable and safe to share across threads.
    """

    __slots__ = ("_v",)

    def __init__(self, value: int = 0) -> None:
        if not isinstance(value, int) or isinstance(value, bool):
            raise TypeError(f"Natural requires an int, got {type(value).__name__}")
        if value < 0:
            raise ValueError("Natural cannot be negative")
        self._v = value

    @classmethod
    def from_limbs(cls, limbs) -> "Natural":
        """Build from 64-bit words, least significant first."""
        v = 0
        for i, limb in enumerate(limbs):
            if not 0 <= limb <= _LIMB_MASK:
                raise ValueError(f"limb {i} out of range")
            v |= limb << (LIMB_BITS * i)
        return cls(v)

    @property
    def limbs(self) -> tuple[int, ...]:
        v = self._v
        out = []
        while v:
            out.append(v & _LIMB_MASK)
            v >>= LIMB_BITS
        return tuple(out)

    @property
    def bit_length(self) -> int:
        return self._v.bit_length()

    def __int__(self) -> int:
        return self._v

    def __index__(self) -> int:
        return self._v

    def __bool__(self) -> bool:
        return self._v != 0

    def __eq__(self, other) -> bool:
        return isinstance(other, Natural) and self._v == other._v

    def __hash__(self) -> int:
        return hash(("Natural", self._v))

    def __lt__(self, other: "Natural") -> bool:
        return self._v < other._v

    def __le__(self, other: "Natural") -> bool:
        return self._v <= other._v

    def __gt__(self, other: "Natural") -> bool:
        return self._v > other._v

    def __ge__(self, other: "Natural") -> bool:
        return self._v >= other._v

    def __repr__(self) -> str:
        return f"Natural(0x{self._v:x})"


ZERO = Natural(0)
ONE = Natural(1)


class MulAlgorithm(enum.Enum):
    """Multiplication strategy: how operands are split above the leaf base.

    SCHOOLBOOK performs a single base multiplication at full width. The
    Karatsuba variants split a fixed number of levels (three leaves per
    level per product); Toom-Cook-3 splits once into thirds (five leaves).
    """

    SCHOOLBOOK = "classical"
    KARATSUBA_1 = "karatsuba1"
    KARATSUBA_2 = "karatsuba2"
    TOOM_COOK_3 = "toomcook3"

    @property
    def levels(self) -> int:
        return {"classical": 0, "karatsuba1": 1, "karatsuba2": 2, "toomcook3": 1}[self.value]


class MulCounter:
    """Tally of base multiplications, keyed by operand bit lengths.

    Multiplications are keyed by the (larger, smaller) operand bit-length
    pair; squarings are kept in a separate tally keyed by operand bits.
    Counts only ever increase. One counter per thread.
    """

    __slots__ = ("muls", "squares")

    def __init__(self) -> None:
        self.muls: Counter[tuple[int, int]] = Counter()
        self.squares: Counter[int] = Counter()

    def record_mul(self, bits_a: int, bits_b: int) -> None:
        key = (bits_a, bits_b) if bits_a >= bits_b else (bits_b, bits_a)
        self.muls[key] += 1

    def record_square(self, bits: int) -> None:
        self.squares[bits] += 1

    def total_muls(self) -> int:
        return sum(self.muls.values())

    def total_squares(self) -> int:
        return sum(self.squares.values())

    def total(self) -> int:
        return self.total_muls() + self.total_squares()

    def max_operand_bits(self) -> int:
        m = max((k[0] for k in self.muls), default=0)
        return max(m, max(self.squares, default=0))

    def muls_with_operands_at_most(self, bits: int) -> int:
        return sum(c for (hi, _lo), c in self.muls.items() if hi <= bits)

    def snapshot(self) -> dict[str, int]:
        out = {f"mul:{hi}x{lo}": c for (hi, lo), c in sorted(self.muls.items())}
        out.update({f"sq:{b}": c for b, c in sorted(self.squares.items())})
        return out

    def __repr__(self) -> str:
        return f"MulCounter(muls={self.total_muls()}, squares={self.total_squares()})"


@dataclass(frozen=True)
class SignedNat:
    """Sign-and-magnitude integer; zero is never negative."""

    magnitude: Natural
    negative: bool = False

    def __post_init__(self):
        if not int(self.magnitude) and self.negative:
            object.__setattr__(self, "negative", False)

    @classmethod
    def from_int(cls, value: int) -> "SignedNat":
        return cls(Natural(abs(value)), value < 0)

    def to_int(self) -> int:
        v = int(self.magnitude)
        return -v if self.negative else v


# ---------------------------------------------------------------------------
# additive / comparison / shift operations


def add(a: Natural, b: Natural) -> Natural:
    return Natural(int(a) + int(b))


def sub(a: Natural, b: Natural) -> Natural:
    """a - b; raises UnderflowError when a < b."""
    av, bv = int(a), int(b)
    if av < bv:
        raise UnderflowError("subtraction underflow: a < b")
    return Natural(av - bv)


def cmp(a: Natural, b: Natural) -> int:
    """-1, 0 or 1 as a <, ==, > b."""
    av, bv = int(a), int(b)
    return (av > bv) - (av < bv)


def shift_left(a: Natural, k: int) -> Natural:
    if k < 0:
        raise ValueError("shift count must be nonnegative")
    return Natural(int(a) << k)


def shift_right(a: Natural, k: int) -> Natural:
    if k < 0:
        raise ValueError("shift count must be nonnegative")
    return Natural(int(a) >> k)


def low_bits(a: Natural, r: int) -> Natural:
    """a mod 2^r."""
    if r < 0:
        raise ValueError("bit count must be nonnegative")
    return Natural(int(a) & ((1 << r) - 1))


# ---------------------------------------------------------------------------
# multiplication

def _leaf_mul(a: int, b: int, counter: MulCounter | None) -> int:
    if counter is not None:
        counter.record_mul(a.bit_length(), b.bit_length())
    return a * b


def _leaf_square(a: int, counter: MulCounter | None) -> int:
    if counter is not None:
        counter.record_square(a.bit_length())
    return a * a


def _split_shift(a: int, b: int, parts: int) -> int:
    """Bit position of one split boundary: ceil(limbs/parts) whole limbs."""
    limbs = (max(a.bit_length(), b.bit_length()) + LIMB_BITS - 1) // LIMB_BITS
    return LIMB_BITS * ((limbs + parts - 1) // parts)


def _mul_rec(a: int, b: int, alg: MulAlgorithm, levels: int, counter: MulCounter | None) -> int:
    if a == 0 or b == 0:
        return 0
    if levels == 0:
        return _leaf_mul(a, b, counter)
    if alg is MulAlgorithm.TOOM_COOK_3:
        return _toom3(a, b, counter)
    return _karatsuba(a, b, levels, counter)


def _karatsuba(a: int, b: int, levels: int, counter: MulCounter | None) -> int:
    sh = _split_shift(a, b, 2)
    if sh >= max(a.bit_length(), b.bit_length()):
        # unsplittable at limb granularity
        return _leaf_mul(a, b, counter)
    mask = (1 << sh) - 1
    a1, a0 = a >> sh, a & mask
    b1, b0 = b >> sh, b & mask
    nxt = levels - 1
    z2 = _mul_rec(a1, b1, MulAlgorithm.KARATSUBA_1, nxt, counter)
    z0 = _mul_rec(a0, b0, MulAlgorithm.KARATSUBA_1, nxt, counter)
    # z1 = a1*b0 + a0*b1 = z2 + z0 - (a1-a0)(b1-b0); the subtractive form
    # keeps the middle leaf within half width.
    da, db = a1 - a0, b1 - b0
    m = _mul_rec(abs(da), abs(db), MulAlgorithm.KARATSUBA_1, nxt, counter)
    if (da < 0) != (db < 0):
        m = -m
    z1 = z2 + z0 - m
    return (z2 << (2 * sh)) + (z1 << sh) + z0


def _toom3(a: int, b: int, counter: MulCounter | None) -> int:
    sh = _split_shift(a, b, 3)
    if sh >= max(a.bit_length(), b.bit_length()):
        # unsplittable at limb granularity
        return _leaf_mul(a, b, counter)
    mask = (1 << sh) - 1
    a0, a1, a2 = a & mask, (a >> sh) & mask, a >> (2 * sh)
    b0, b1, b2 = b & mask, (b >> sh) & mask, b >> (2 * sh)

    def prod(x: int, y: int) -> int:
        if x == 0 or y == 0:
            return 0
        s = -1 if (x < 0) != (y < 0) else 1
        return s * _leaf_mul(abs(x), abs(y), counter)

    # evaluate the operand polynomials at 0, 1, -1, 2 and infinity
    v0 = prod(a0, b0)
    v1 = prod(a2 + a1 + a0, b2 + b1 + b0)
    vm1 = prod(a2 - a1 + a0, b2 - b1 + b0)
    v2 = prod(4 * a2 + 2 * a1 + a0, 4 * b2 + 2 * b1 + b0)
    vinf = prod(a2, b2)
    # interpolate the five product coefficients; every division is exact
    w2 = (v1 + vm1) // 2 - v0 - vinf
    s2 = (v1 - vm1) // 2                  # w1 + w3
    t = (v2 - v0 - 4 * w2 - 16 * vinf) // 2  # w1 + 4*w3
    w3 = (t - s2) // 3
    w1 = s2 - w3
    return v0 + (w1 << sh) + (w2 << (2 * sh)) + (w3 << (3 * sh)) + (vinf << (4 * sh))


def mul(a: Natural, b: Natural,
        alg: MulAlgorithm = MulAlgorithm.SCHOOLBOOK,
        counter: MulCounter | None = None) -> Natural:
    """a * b; the product is independent of the algorithm choice."""
    return Natural(_mul_rec(int(a), int(b), alg, alg.levels, counter))


def _square_rec(a: int, alg: MulAlgorithm, levels: int, counter: MulCounter | None) -> int:
    if a == 0:
        return 0
    if levels == 0:
        return _leaf_square(a, counter)
    if alg is MulAlgorithm.TOOM_COOK_3:
        sh = _split_shift(a, a, 3)
        if sh >= a.bit_length():
            return _leaf_square(a, counter)
        mask = (1 << sh) - 1
        a0, a1, a2 = a & mask, (a >> sh) & mask, a >> (2 * sh)

        def sq(x: int) -> int:
            return _leaf_square(abs(x), counter) if x else 0

        v0 = sq(a0)
        v1 = sq(a2 + a1 + a0)
        vm1 = sq(a2 - a1 + a0)
        v2 = sq(4 * a2 + 2 * a1 + a0)
        vinf = sq(a2)
        w2 = (v1 + vm1) // 2 - v0 - vinf
        s2 = (v1 - vm1) // 2
        t = (v2 - v0 - 4 * w2 - 16 * vinf) // 2
        w3 = (t - s2) // 3
        w1 = s2 - w3
        return v0 + (w1 << sh) + (w2 << (2 * sh)) + (w3 << (3 * sh)) + (vinf << (4 * sh))
    sh = _split_shift(a, a, 2)
    if sh >= a.bit_length():
        return _leaf_square(a, counter)
    a1, a0 = a >> sh, a & ((1 << sh) - 1)
    nxt = levels - 1
    z2 = _square_rec(a1, MulAlgorithm.KARATSUBA_1, nxt, counter)
    z0 = _square_rec(a0, MulAlgorithm.KARATSUBA_1, nxt, counter)
    cross = _mul_rec(a1, a0, MulAlgorithm.KARATSUBA_1, nxt, counter)
    return (z2 << (2 * sh)) + (cross << (sh + 1)) + z0


def square(a: Natural,
           alg: MulAlgorithm = MulAlgorithm.SCHOOLBOOK,
           counter: MulCounter | None = None) -> Natural:
    """a squared; cheaper than mul(a, a) in accounting because the cross
    terms of each split come in symmetric pairs."""
    return Natural(_square_rec(int(a), alg, alg.levels, counter))


# ---------------------------------------------------------------------------
# division

def divrem(a: Natural, b: Natural) -> tuple[Natural, Natural]:
    """Long division: returns (q, r) with a = q*b + r and 0 <= r < b.

    Schoolbook digit-by-digit division with a normalized divisor and the
    classic two-limb quotient-digit estimate; the estimate overshoots by at
    most two, fixed up by adding the divisor back.
    """
    bv = int(b)
    if bv == 0:
        raise ZeroDivisionError("division by zero")
    av = int(a)
    if av < bv:
        return ZERO, a
    # normalize so the divisor's top limb has its high bit set
    s = (-bv.bit_length()) % LIMB_BITS
    A = av << s
    B = bv << s
    nB = B.bit_length()  # multiple of LIMB_BITS
    top = B >> (nB - LIMB_BITS)
    m = (A.bit_length() - nB) // LIMB_BITS + 1
    q = 0
    for j in range(m - 1, -1, -1):
        shift = LIMB_BITS * j
        prefix = A >> (shift + nB - LIMB_BITS)
        qd = prefix // top
        if qd > _LIMB_MASK:
            qd = _LIMB_MASK
        if qd:
            A -= (qd * B) << shift
            while A < 0:
                qd -= 1
                A += B << shift
            q |= qd << shift
    return Natural(q), Natural(A >> s)


# ---------------------------------------------------------------------------
# signed helpers

def signed_add(a: SignedNat, b: SignedNat) -> SignedNat:
    return SignedNat.from_int(a.to_int() + b.to_int())


def signed_sub(a: SignedNat, b: SignedNat) -> SignedNat:
    return SignedNat.from_int(a.to_int() - b.to_int())


def signed_mul(a: SignedNat, b: SignedNat,
               alg: MulAlgorithm = MulAlgorithm.SCHOOLBOOK,
               counter: MulCounter | None = None) -> SignedNat:
    mag = _mul_rec(int(a.magnitude), int(b.magnitude), alg, alg.levels, counter)
    return SignedNat(Natural(mag), a.negative != b.negative)


# ---------------------------------------------------------------------------
# hex serialization

def hex_encode(a: Natural) -> str:
    """Lowercase hex, most significant digit first, no leading zeros."""
    return format(int(a), "x")


_HEX_DIGITS = set("0123456789abcdef")


def hex_decode(s: str) -> Natural:
    """Inverse of hex_encode; rejects anything non-canonical."""
    if not s or any(c not in _HEX_DIGITS for c in s):
        raise HexFormatError(f"malformed hex string: {s!r}")
    if len(s) > 1 and s[0] == "0":
        raise HexFormatError("leading zeros are not canonical")
    return Natural(int(s, 16))

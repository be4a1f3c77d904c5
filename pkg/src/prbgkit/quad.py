"""Quadratic-system stream generator over GF(2).

The public data is a system of kn random quadratic polynomials in n
variables. One iteration evaluates all kn polynomials at the current
n-bit state: the first n results become the next state, the remaining
(k-1)n bits are emitted. Evaluation XORs together coefficient columns
(one kn-bit column per monomial) selected by the state bits.

The block precomputation trades memory for speed: with the variables cut
into m = n/(2l) blocks of 2l, every block's linear and intra-block
quadratic contribution collapses into one table lookup, and every pair of
blocks contributes four half-by-half cross tables. An iteration then XORs
m + 4*C(m,2) + 1 columns regardless of the state.

Columns are stored as integers; bit h-1 of a column is that monomial's
coefficient in polynomial h. The word width d only enters the accounting
(a column XOR costs ceil(kn/d) word XORs) and the on-disk padding.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .bitstream import Bits, BitSink
from .errors import OutputBudgetExhausted
from .splitmix import SplitMix64

DEFAULT_OUTPUT_CAP = 2 ** 40

_MAGIC = b"QUAD"
_VERSION = 1


class QuadParameterError(ValueError):
    """System parameters violate a precondition."""


@dataclass(frozen=True)
class QuadParams:
    """State width n, expansion k, optional precomputation half-width, and
    the packed word width used for cost accounting."""

    n: int
    k: int = 2
    l_precomp: int | None = None
    d: int = 64

    def validate(self) -> None:
        if self.k < 2:
            raise QuadParameterError(f"k={self.k} must be >= 2")
        if self.n < 8:
            raise QuadParameterError(f"n={self.n} must be >= 8")
        if self.l_precomp is not None:
            if self.l_precomp not in (2, 4):
                raise QuadParameterError("l_precomp must be 2 or 4")
            if self.n % (2 * self.l_precomp) != 0:
                raise QuadParameterError(
                    f"n={self.n} not divisible by 2*l={2 * self.l_precomp}")
        if self.d < 1:
            raise QuadParameterError("word width must be positive")

    @property
    def out_bits_per_iteration(self) -> int:
        return (self.k - 1) * self.n

    @property
    def words_per_column(self) -> int:
        return -(-self.k * self.n // self.d)


def _pair_index(i: int, j: int, n: int) -> int:
    """Flat index of the (i, j) quadratic column, 0 <= i < j < n, lex order."""
    return i * (2 * n - i - 1) // 2 + (j - i - 1)


@dataclass(frozen=True)
class QuadSystem:
    """Packed coefficient columns: constant, linear x_i, quadratic x_i*x_j."""

    params: QuadParams
    const_col: int
    lin_cols: tuple[int, ...]
    quad_cols: tuple[int, ...]

    @property
    def column_count(self) -> int:
        n = self.params.n
        return 1 + n + n * (n - 1) // 2

    def columns(self):
        """All columns in canonical order: constant, linear, quadratic."""
        yield self.const_col
        yield from self.lin_cols
        yield from self.quad_cols


@dataclass
class QuadState:
    """Single-owner mutable state: packed bit vector plus emission budget."""

    x: int
    bits_emitted: int = 0
    L_cap: int = DEFAULT_OUTPUT_CAP


@dataclass
class XorCounter:
    """Word-XOR tally: columns folded times words per column."""

    words: int = 0
    columns: int = 0

    def note(self, columns: int, words_per_column: int) -> None:
        self.columns += columns
        self.words += columns * words_per_column


def quad_keygen(params: QuadParams, rng_seed: int) -> tuple[QuadSystem, QuadState]:
    """Random system and initial state, every bit from the seed stream.

    Coefficient bits fill the columns in canonical order (polynomial 1
    first within each column), then n bits seed the state.
    """
    params.validate()
    if params.d not in (32, 64):
        raise QuadParameterError("packed systems use d of 32 or 64")
    stream = SplitMix64(rng_seed)
    n, kn = params.n, params.k * params.n
    const_col = stream.next_bits(kn)
    lin_cols = tuple(stream.next_bits(kn) for _ in range(n))
    quad_cols = tuple(stream.next_bits(kn) for _ in range(n * (n - 1) // 2))
    x0 = stream.next_bits(n)
    system = QuadSystem(params=params, const_col=const_col,
                        lin_cols=lin_cols, quad_cols=quad_cols)
    return system, QuadState(x=x0)


def _set_bits(x: int) -> list[int]:
    out = []
    i = 0
    while x:
        if x & 1:
            out.append(i)
        x >>= 1
        i += 1
    return out


def evaluate_classical(sys: QuadSystem, x: int,
                       xors: XorCounter | None = None) -> int:
    """All kn polynomial values at x: bit h-1 of the result is P_h(x)."""
    n = sys.params.n
    if not 0 <= x < (1 << n):
        raise QuadParameterError(f"state must be an n={n} bit vector")
    acc = sys.const_col
    ones = _set_bits(x)
    lin = sys.lin_cols
    quad = sys.quad_cols
    cols = 1 + len(ones)
    for i in ones:
        acc ^= lin[i]
    for a in range(len(ones)):
        i = ones[a]
        base = i * (2 * n - i - 1) // 2 - i - 1
        for j in ones[a + 1:]:
            acc ^= quad[base + j]
        cols += len(ones) - a - 1
    if xors is not None:
        xors.note(cols, sys.params.words_per_column)
    return acc


# ---------------------------------------------------------------------------
# block precomputation

@dataclass(frozen=True)
class QuadPrecomp:
    """Lookup tables replacing per-bit column selection.

    block_tables[b][a] aggregates block b's linear columns and intra-block
    quadratic columns for the 2l-bit assignment a; index 0 is an explicit
    zero column so evaluation never branches. pair_tables[(b1, b2)] holds
    four 2^l-by-2^l sub-tables, one per half-block pairing, aggregating the
    cross quadratic columns for the two half assignments.
    """

    l: int
    m: int
    block_tables: tuple[tuple[int, ...], ...]
    pair_tables: dict[tuple[int, int], tuple[tuple[tuple[int, ...], ...], ...]]
    words_per_column: int
    d: int

    def columns_stored(self) -> int:
        """Every table entry, including the explicit zero columns."""
        npairs = self.m * (self.m - 1) // 2
        return self.m * (1 << (2 * self.l)) + npairs * 4 * (1 << (2 * self.l))

    def columns_nonzero_convention(self) -> int:
        """Counting only nonzero-index entries: (2^2l - 1) per block table
        and 4*(2^l - 1)^2 per block pair."""
        npairs = self.m * (self.m - 1) // 2
        return (self.m * ((1 << (2 * self.l)) - 1)
                + npairs * 4 * ((1 << self.l) - 1) ** 2)

    def memory_report(self) -> dict:
        stored = self.columns_stored()
        nonzero = self.columns_nonzero_convention()
        bits_per_col = self.words_per_column * self.d
        return {
            "l": self.l,
            "blocks": self.m,
            "columns_stored": stored,
            "columns_nonzero_convention": nonzero,
            "bits_stored": stored * bits_per_col,
            "bits_nonzero_convention": nonzero * bits_per_col,
            "mbit_stored": stored * bits_per_col / 1e6,
            "mbit_nonzero_convention": nonzero * bits_per_col / 1e6,
        }


def build_precomp(sys: QuadSystem, l: int) -> QuadPrecomp:
    """Build the block and pair tables for half-width l (n must divide 2l)."""
    n = sys.params.n
    if l < 1:
        raise QuadParameterError("l must be >= 1")
    if n % (2 * l) != 0:
        raise QuadParameterError(f"n={n} not divisible by 2*l={2 * l}")
    m = n // (2 * l)
    lin = sys.lin_cols
    quad = sys.quad_cols
    width = 2 * l

    block_tables = []
    for b in range(m):
        base = b * width
        tab = [0] * (1 << width)
        for a in range(1, 1 << width):
            t = (a & -a).bit_length() - 1
            rest = a ^ (1 << t)
            col = tab[rest] ^ lin[base + t]
            for u in _set_bits(rest):
                col ^= quad[_pair_index(base + t, base + u, n)]
            tab[a] = col
        block_tables.append(tuple(tab))

    pair_tables: dict[tuple[int, int], tuple] = {}
    size = 1 << l
    for b1 in range(m):
        for b2 in range(b1 + 1, m):
            subs = []
            for h1 in (0, 1):
                vars1 = [b1 * width + h1 * l + t for t in range(l)]
                for h2 in (0, 1):
                    vars2 = [b2 * width + h2 * l + t for t in range(l)]
                    # row table per left variable: XOR over the right half assignment
                    rows = []
                    for i in vars1:
                        row = [0] * size
                        for v in range(1, size):
                            t = (v & -v).bit_length() - 1
                            row[v] = row[v ^ (1 << t)] ^ quad[_pair_index(i, vars2[t], n)]
                        rows.append(row)
                    sub = [[0] * size for _ in range(size)]
                    for u in range(1, size):
                        t = (u & -u).bit_length() - 1
                        prev = sub[u ^ (1 << t)]
                        row = rows[t]
                        sub[u] = [prev[v] ^ row[v] for v in range(size)]
                    subs.append(tuple(tuple(r) for r in sub))
            pair_tables[(b1, b2)] = tuple(subs)

    return QuadPrecomp(l=l, m=m, block_tables=tuple(block_tables),
                       pair_tables=pair_tables,
                       words_per_column=sys.params.words_per_column,
                       d=sys.params.d)


def evaluate_precomp(sys: QuadSystem, pre: QuadPrecomp, x: int,
                     xors: XorCounter | None = None) -> int:
    """Table-driven evaluation; identical output to evaluate_classical."""
    n = sys.params.n
    if not 0 <= x < (1 << n):
        raise QuadParameterError(f"state must be an n={n} bit vector")
    l, m = pre.l, pre.m
    width = 2 * l
    half_mask = (1 << l) - 1
    acc = sys.const_col
    assigns = [(x >> (b * width)) & ((1 << width) - 1) for b in range(m)]
    halves = [(a & half_mask, a >> l) for a in assigns]
    for b in range(m):
        acc ^= pre.block_tables[b][assigns[b]]
    for (b1, b2), subs in pre.pair_tables.items():
        u_lo, u_hi = halves[b1]
        v_lo, v_hi = halves[b2]
        acc ^= subs[0][u_lo][v_lo]
        acc ^= subs[1][u_lo][v_hi]
        acc ^= subs[2][u_hi][v_lo]
        acc ^= subs[3][u_hi][v_hi]
    if xors is not None:
        xors.note(1 + m + 4 * (m * (m - 1) // 2), pre.words_per_column)
    return acc


# ---------------------------------------------------------------------------
# iteration

Evaluator = Callable[[int], int]


def make_classical_evaluator(sys: QuadSystem,
                             xors: XorCounter | None = None) -> Evaluator:
    return lambda x: evaluate_classical(sys, x, xors)


def make_precomp_evaluator(sys: QuadSystem, pre: QuadPrecomp,
                           xors: XorCounter | None = None) -> Evaluator:
    return lambda x: evaluate_precomp(sys, pre, x, xors)


def quad_iterate(sys: QuadSystem, state: QuadState,
                 evaluator: Evaluator | None = None) -> Bits:
    """One iteration: next state from the first n values, emit the rest.

    Mutates `state`. The emitted block has P_{n+1} first (bit 0).
    """
    params = sys.params
    out_bits = params.out_bits_per_iteration
    if state.bits_emitted + out_bits > state.L_cap:
        raise OutputBudgetExhausted(
            f"emitting {out_bits} bits would exceed the cap of {state.L_cap}")
    if evaluator is None:
        evaluator = make_classical_evaluator(sys)
    values = evaluator(state.x)
    state.x = values & ((1 << params.n) - 1)
    state.bits_emitted += out_bits
    return Bits(values >> params.n, out_bits)


def quad_generate(sys: QuadSystem, state: QuadState, nbits: int,
                  evaluator: Evaluator | None = None) -> Bits:
    """Emit exactly nbits; the final block may be consumed partially."""
    if nbits < 0:
        raise QuadParameterError("nbits must be nonnegative")
    if state.bits_emitted + nbits > state.L_cap:
        raise OutputBudgetExhausted(
            f"{nbits} more bits would exceed the cap of {state.L_cap}")
    if evaluator is None:
        evaluator = make_classical_evaluator(sys)
    params = sys.params
    block = params.out_bits_per_iteration
    sink = BitSink()
    remaining = nbits
    while remaining > 0:
        values = evaluator(state.x)
        state.x = values & ((1 << params.n) - 1)
        take = min(block, remaining)
        sink.append((values >> params.n) & ((1 << take) - 1), take)
        state.bits_emitted += take
        remaining -= take
    return sink.bits()


# ---------------------------------------------------------------------------
# cost model

def xor_cost_estimate(params: QuadParams, variant: str) -> Fraction:
    """Analytic word-XORs per output bit for a variant.

    These are the closed-form estimates; instrumented evaluators report
    measured counts alongside them, and the two need not agree for the
    precomputed variants.
    """
    n, d = params.n, params.d
    if variant == "classical":
        return Fraction(2 * n + math.comb(n, 2), 2 * d)
    if variant.startswith("l") and variant[1:].isdigit():
        l = int(variant[1:])
        if n % (2 * l) != 0:
            raise QuadParameterError(f"n={n} not divisible by 2*l={2 * l}")
        m = n // (2 * l)
        return Fraction(2 * (m + 4 * math.comb(m, 2)), d)
    raise QuadParameterError(f"unknown variant {variant!r}")


# ---------------------------------------------------------------------------
# system file format

def write_system(sys: QuadSystem, path: str) -> None:
    """Binary container: magic, version, n/k/d, then padded columns."""
    params = sys.params
    bytes_per_col = params.words_per_column * params.d // 8
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(bytes([_VERSION]))
        fh.write(struct.pack("<III", params.n, params.k, params.d))
        for col in sys.columns():
            fh.write(col.to_bytes(bytes_per_col, "little"))


def read_system(path: str) -> QuadSystem:
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != _MAGIC:
            raise QuadParameterError(f"not a system file (magic {magic!r})")
        version = fh.read(1)
        if version != bytes([_VERSION]):
            raise QuadParameterError(f"unsupported version {version!r}")
        n, k, d = struct.unpack("<III", fh.read(12))
        params = QuadParams(n=n, k=k, d=d)
        params.validate()
        bytes_per_col = params.words_per_column * d // 8
        ncols = 1 + n + n * (n - 1) // 2
        payload = fh.read(ncols * bytes_per_col)
        if len(payload) != ncols * bytes_per_col:
            raise QuadParameterError("truncated system file")
        cols = [int.from_bytes(payload[i * bytes_per_col:(i + 1) * bytes_per_col], "little")
                for i in range(ncols)]
        kn_mask = (1 << (k * n)) - 1
        if any(c & ~kn_mask for c in cols):
            raise QuadParameterError("column padding bits must be zero")
    return QuadSystem(params=params, const_col=cols[0],
                      lin_cols=tuple(cols[1:1 + n]),
                      quad_cols=tuple(cols[1 + n:]))

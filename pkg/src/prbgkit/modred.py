"""Modular reduction by a fixed modulus, five ways.

All strategies share one precomputed `ModulusContext` and agree with the
plain long-division remainder, which is the correctness oracle:

* classical: long division, no precomputation used.
* Barrett: quotient estimate from the 2n-bit reciprocal, two full-width
  leaf multiplications.
* modified Barrett: same idea for inputs shorter than 2n bits; the
  reciprocal is truncated to quotient precision plus a few guard bits, so
  both multiplications stay at quotient width.
* method 1: fold the top quarter of the input through a precomputed
  residue of 2^(3n/2), then reduce the ~3n/2-bit fold with the modified
  Barrett step. Five leaf multiplications of roughly half width.
* method 2: fold the top third through residues of 2^(5n/3) and 2^(4n/3);
  the two folds are combined with three scalar-product evaluations that
  reuse precomputed chunk products, then the ~4n/3-bit fold is reduced.
  Eight leaf multiplications of roughly third width.

Accounting convention: products of unequal widths are chunked to the small
operand's width, so every recorded leaf stays in the size class the method
is designed around.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping

from .bignum import (
    MulAlgorithm,
    MulCounter,
    Natural,
    SignedNat,
    divrem,
    mul,
    shift_left,
    signed_add,
    signed_mul,
    signed_sub,
)

# Reciprocal truncation guard. With g guard bits the quotient estimate
# undershoots by at most 4; the hard cap below is deliberately looser.
GUARD_BITS = 3

BARRETT_MAX_CORRECTIONS = 2
MODIFIED_MAX_CORRECTIONS = 8


class InvalidModulusError(ValueError):
    """Modulus unusable: even, too small, or bit length not divisible by 6."""


class ReductionInputError(ValueError):
    """Input violates a reduction precondition (too wide, bad m)."""


class CorrectionBoundError(RuntimeError):
    """The subtract-N fixup loop exceeded its hard bound; indicates a bug."""


@dataclass
class ReductionStats:
    """Mutable, single-owner record of observed correction-loop behavior."""

    max_corrections: int = 0
    reductions: int = 0

    def note(self, corrections: int) -> None:
        self.reductions += 1
        if corrections > self.max_corrections:
            self.max_corrections = corrections


class ReductionMethod(enum.Enum):
    CLASSICAL = "classical"
    BARRETT = "barrett"
    METHOD1 = "method1"
    METHOD2 = "method2"


@dataclass(frozen=True)
class ModulusContext:
    """A fixed odd modulus plus every constant the reduction methods need.

    Immutable after construction and shareable across threads. `mu_m` is
    populated up front for the two fold widths the methods use (and 2n);
    other widths are computed on the fly without touching the context.
    """

    N: Natural
    n: int
    mu: Natural                       # floor(2^(2n) / N)
    mu_m: Mapping[int, Natural]       # m -> floor(2^(m+n) / N)
    R: Natural                        # 2^(3n/2) mod N
    R1: Natural                       # 2^(5n/3) mod N
    R2: Natural                       # 2^(4n/3) mod N
    r1_chunks: tuple[Natural, Natural, Natural] = field(repr=False)  # (H, I, L)
    r2_chunks: tuple[Natural, Natural, Natural] = field(repr=False)
    chunk_products: tuple[Natural, Natural, Natural] = field(repr=False)
    m1: int = 0                       # fold width used by method 1
    m2: int = 0                       # fold width used by method 2

    def mu_for(self, m: int) -> int:
        cached = self.mu_m.get(m)
        if cached is not None:
            return int(cached)
        q, _ = divrem(shift_left(Natural(1), m + self.n), self.N)
        return int(q)


def make_context(N: Natural) -> ModulusContext:
    """Precompute every constant for modulus N.

    N must be odd, at least 3, with bit length divisible by 6 so that the
    half and third chunk boundaries fall on exact bit positions. All
    constants come out of the module's own long division.
    """
    Nv = int(N)
    n = N.bit_length
    if Nv < 3 or Nv % 2 == 0:
        raise InvalidModulusError("modulus must be odd and >= 3")
    if n % 6 != 0:
        raise InvalidModulusError(f"modulus bit length {n} not divisible by 6")

    one = Natural(1)
    mu, _ = divrem(shift_left(one, 2 * n), N)
    _, R = divrem(shift_left(one, 3 * n // 2), N)
    _, R1 = divrem(shift_left(one, 5 * n // 3), N)
    _, R2 = divrem(shift_left(one, 4 * n // 3), N)

    m1 = 3 * n // 2 + 2
    m2 = 4 * n // 3 + 2
    mu_m = {}
    for m in (m1, m2, 2 * n):
        q, _ = divrem(shift_left(one, m + n), N)
        mu_m[m] = q

    third = n // 3
    mask = (1 << third) - 1

    def chunks(r: Natural) -> tuple[Natural, Natural, Natural]:
        rv = int(r)
        return (Natural(rv >> (2 * third)), Natural((rv >> third) & mask), Natural(rv & mask))

    r1c = chunks(R1)
    r2c = chunks(R2)
    products = tuple(mul(a, b) for a, b in zip(r1c, r2c))

    return ModulusContext(
        N=N, n=n, mu=mu, mu_m=MappingProxyType(mu_m),
        R=R, R1=R1, R2=R2,
        r1_chunks=r1c, r2_chunks=r2c, chunk_products=products,
        m1=m1, m2=m2,
    )


# ---------------------------------------------------------------------------
# internals

def _leaf(a: int, b: int, counter: MulCounter | None) -> int:
    if counter is not None:
        counter.record_mul(a.bit_length(), b.bit_length())
    return a * b


def _mul_chunked(a: int, b: int, width: int, counter: MulCounter | None) -> int:
    """a*b with b cut into `width`-bit chunks; keeps leaves at a's size class."""
    acc = 0
    pos = 0
    while b:
        chunk = b & ((1 << width) - 1)
        if chunk:
            acc += _leaf(a, chunk, counter) << pos
        b >>= width
        pos += width
    return acc


def _correct(r: int, Nv: int, cap: int, what: str, stats: ReductionStats | None) -> int:
    k = 0
    while r >= Nv:
        r -= Nv
        k += 1
        if k > cap:
            raise CorrectionBoundError(
                f"{what}: correction loop exceeded {cap} iterations (modulus "
                f"bits={Nv.bit_length()})")
    if stats is not None:
        stats.note(k)
    return r


# ---------------------------------------------------------------------------
# the five strategies

def reduce_classical(x: Natural, ctx: ModulusContext,
                     counter: MulCounter | None = None,
                     stats: ReductionStats | None = None) -> Natural:
    """x mod N by long division; the oracle every other method must match.

    Performs no leaf multiplications in the accounting sense, so `counter`
    is accepted only for signature uniformity.
    """
    if stats is not None:
        stats.note(0)
    _, r = divrem(x, ctx.N)
    return r


def reduce_barrett(x: Natural, ctx: ModulusContext,
                   counter: MulCounter | None = None,
                   stats: ReductionStats | None = None) -> Natural:
    """Barrett reduction of an input up to 2n bits; at most two corrections.

    The quotient estimate keeps one extra low-order bit of x; that is what
    makes the two-subtraction bound hold for every input up to 2n bits,
    not just those below N*2^n.
    """
    n = ctx.n
    if x.bit_length > 2 * n:
        raise ReductionInputError(f"input has {x.bit_length} bits, limit {2 * n}")
    xv = int(x)
    Nv = int(ctx.N)
    if xv < Nv:
        if stats is not None:
            stats.note(0)
        return x
    qhat = _leaf(xv >> (n - 1), int(ctx.mu), counter) >> (n + 1)
    r = xv - _leaf(qhat, Nv, counter)
    return Natural(_correct(r, Nv, BARRETT_MAX_CORRECTIONS, "barrett", stats))


def reduce_barrett_modified(x: Natural, m: int, ctx: ModulusContext,
                            counter: MulCounter | None = None,
                            stats: ReductionStats | None = None) -> Natural:
    """Barrett step for an m-bit input, n < m <= 2n.

    The reciprocal floor(2^(m+n)/N) is truncated to quotient precision plus
    GUARD_BITS before the estimate multiplication, and the q*N product is
    chunked to quotient width, so both products stay in the (m-n)-bit size
    class. The estimate can undershoot by a few, never overshoot; the fixup
    loop is unconditional with a hard cap.
    """
    n = ctx.n
    if not n < m <= 2 * n:
        raise ReductionInputError(f"m={m} outside (n, 2n] for n={n}")
    if x.bit_length > m:
        raise ReductionInputError(f"input has {x.bit_length} bits, limit m={m}")
    xv = int(x)
    Nv = int(ctx.N)
    if xv < Nv:
        if stats is not None:
            stats.note(0)
        return x
    s = max(n - GUARD_BITS, 0)
    mu_t = ctx.mu_for(m) >> s
    qhat = _leaf(xv >> n, mu_t, counter) >> (m - s)
    r = xv - _mul_chunked(qhat, Nv, m - n + 1, counter) if qhat else xv
    return Natural(_correct(r, Nv, MODIFIED_MAX_CORRECTIONS, "barrett-modified", stats))


def scalar_product_trick(a: Natural, b: Natural, c: Natural, d: Natural,
                         ab: Natural, cd: Natural,
                         counter: MulCounter | None = None) -> Natural:
    """a*c + b*d using one fresh multiplication, given ab = a*b and cd = c*d.

    Identity: a*c + b*d = ab + cd - (d-a)(c-b). The single product has a
    signed intermediate; the final sum is a true scalar product and thus
    nonnegative.
    """
    t = signed_mul(signed_sub(SignedNat(d), SignedNat(a)),
                   signed_sub(SignedNat(c), SignedNat(b)),
                   counter=counter)
    out = signed_sub(signed_add(SignedNat(ab), SignedNat(cd)), t)
    if out.negative:
        raise ArithmeticError("scalar product came out negative; ab/cd inputs wrong?")
    return out.magnitude


def _finish(C: int, m: int, ctx: ModulusContext,
            counter: MulCounter | None, stats: ReductionStats | None) -> Natural:
    if C < int(ctx.N):
        if stats is not None:
            stats.note(0)
        return Natural(C)
    return reduce_barrett_modified(Natural(C), m, ctx, counter, stats)


def reduce_method1(x: Natural, ctx: ModulusContext,
                   counter: MulCounter | None = None,
                   stats: ReductionStats | None = None) -> Natural:
    """Reduction via one fold at bit 3n/2: x = x1*2^(3n/2) + rest.

    x1 has up to n/2 bits; x1 * (2^(3n/2) mod N) + rest fits in m1 bits and
    is finished with the modified Barrett step. Five leaf multiplications
    of the n/2 size class in total.
    """
    n = ctx.n
    if x.bit_length > 2 * n:
        raise ReductionInputError(f"input has {x.bit_length} bits, limit {2 * n}")
    xv = int(x)
    t = 3 * n // 2
    x1 = xv >> t
    C = xv & ((1 << t) - 1)
    if x1:
        C += _mul_chunked(x1, int(ctx.R), n // 2, counter)
    return _finish(C, ctx.m1, ctx, counter, stats)


def reduce_method2(x: Natural, ctx: ModulusContext,
                   counter: MulCounter | None = None,
                   stats: ReductionStats | None = None) -> Natural:
    """Reduction via two folds at bits 5n/3 and 4n/3.

    x = x1*2^(5n/3) + x2*2^(4n/3) + x3 with x1, x2 of up to n/3 bits. The
    fold x1*R1 + x2*R2 is evaluated as three scalar products against the
    precomputed (H, I, L) chunks of R1 and R2, sharing one x1*x2 product;
    the result fits in m2 bits and is finished with the modified Barrett
    step. Eight leaf multiplications of the n/3 size class in total.
    """
    n = ctx.n
    if x.bit_length > 2 * n:
        raise ReductionInputError(f"input has {x.bit_length} bits, limit {2 * n}")
    xv = int(x)
    third = n // 3
    x1 = xv >> (5 * third)
    x2 = (xv >> (4 * third)) & ((1 << third) - 1)
    C = xv & ((1 << (4 * third)) - 1)
    if x1 or x2:
        x1n = Natural(x1)
        x2n = Natural(x2)
        x1x2 = mul(x1n, x2n, MulAlgorithm.SCHOOLBOOK, counter)
        for i, (c1, c2, p) in enumerate(zip(ctx.r1_chunks, ctx.r2_chunks, ctx.chunk_products)):
            # chunk i of (H, I, L) sits at weight 2^((2-i)*n/3)
            term = scalar_product_trick(x1n, x2n, c1, c2, x1x2, p, counter)
            C += int(term) << ((2 - i) * third)
    return _finish(C, ctx.m2, ctx, counter, stats)


_DISPATCH = {
    ReductionMethod.CLASSICAL: reduce_classical,
    ReductionMethod.BARRETT: reduce_barrett,
    ReductionMethod.METHOD1: reduce_method1,
    ReductionMethod.METHOD2: reduce_method2,
}


def reduce(x: Natural, ctx: ModulusContext, method: ReductionMethod,
           counter: MulCounter | None = None,
           stats: ReductionStats | None = None) -> Natural:
    """Reduce x mod N with the chosen strategy; the result never depends on it."""
    return _DISPATCH[method](x, ctx, counter, stats)

"""RSA-based pseudorandom bit generator.

The state iterates x <- x^e mod N for an RSA modulus N and small odd
exponent e, emitting the r least significant bits of each new state,
LSB first, up to a hard lifetime cap of l output bits. With e = 9 each
iteration costs three squarings, one multiplication and four reductions.

Output convention: bits come from the freshly advanced state (emitting
from the pre-step state instead would be a one-line change at the marked
spot in `iterate`). Fixed here for reproducibility.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .bignum import MulAlgorithm, MulCounter, Natural, hex_decode, hex_encode, low_bits, mul, square
from .bitstream import Bits, BitSink
from .errors import OutputBudgetExhausted
from .modred import ModulusContext, ReductionMethod, ReductionStats, make_context, reduce, reduce_classical
from .splitmix import SplitMix64

DEFAULT_EXPONENT = 9
DEFAULT_OUTPUT_CAP = 2 ** 32
MILLER_RABIN_ROUNDS = 40

# (n, e) -> bits safely emitted per iteration; only the published point.
_DEFAULT_R = {(6144, 9): 2196}


class ParameterError(ValueError):
    """Generator parameters violate a precondition."""


def default_output_bits(n: int, e: int) -> int | None:
    """Per-iteration output width for parameter sets with a published value."""
    return _DEFAULT_R.get((n, e))


@dataclass
class RsaprgParams:
    """Generator parameters: modulus bits n, exponent e, r bits per
    iteration, lifetime cap l. Construction does not validate; call
    `validate` (done by the generation entry points) so that toy parameter
    sets can still be described and reported on."""

    n: int
    e: int = DEFAULT_EXPONENT
    r: int = 0
    l: int = DEFAULT_OUTPUT_CAP

    def validate(self, strict: bool = True) -> None:
        if self.n % 6 != 0:
            raise ParameterError(f"n={self.n} must be divisible by 6")
        if strict and self.n < 512:
            raise ParameterError(f"n={self.n} below the 512-bit floor")
        if self.e < 3 or self.e % 2 == 0:
            raise ParameterError(f"e={self.e} must be odd and >= 3")
        if not 0 < self.r < self.n:
            raise ParameterError(f"r={self.r} must be in (0, n)")
        if self.l <= 0:
            raise ParameterError("l must be positive")


def default_params(n: int = 6144, e: int = DEFAULT_EXPONENT) -> RsaprgParams:
    r = default_output_bits(n, e)
    if r is None:
        raise ParameterError(
            f"no published output width for (n={n}, e={e}); supply r explicitly")
    return RsaprgParams(n=n, e=e, r=r, l=DEFAULT_OUTPUT_CAP)


@dataclass(frozen=True)
class RsaprgKey:
    """RSA modulus with its private primes; keep p and q out of generator state."""

    N: Natural
    p: Natural
    q: Natural


# ---------------------------------------------------------------------------
# key generation

_SMALL_PRIME_BOUND = 1000


def _small_primes() -> list[int]:
    sieve = bytearray([1]) * _SMALL_PRIME_BOUND
    sieve[0] = sieve[1] = 0
    for i in range(2, int(_SMALL_PRIME_BOUND ** 0.5) + 1):
        if sieve[i]:
            sieve[i * i:: i] = bytearray(len(sieve[i * i:: i]))
    return [i for i, is_p in enumerate(sieve) if is_p]


_PRIMES = _small_primes()


def _is_probable_prime(cand: int, stream: SplitMix64, rounds: int = MILLER_RABIN_ROUNDS) -> bool:
    """Trial division then Miller-Rabin with bases drawn from the stream."""
    if cand < 2:
        return False
    for p in _PRIMES:
        if cand % p == 0:
            return cand == p
    d = cand - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for _ in range(rounds):
        a = 2 + stream.randbelow(cand - 3)
        x = pow(a, d, cand)
        if x == 1 or x == cand - 1:
            continue
        for _ in range(s - 1):
            x = (x * x) % cand
            if x == cand - 1:
                break
        else:
            return False
    return True


def _draw_prime(bits: int, e: int, stream: SplitMix64, avoid: int = 0) -> int:
    """Next prime candidate from the stream with its top two bits set, odd,
    coprime to e in the group order sense (gcd(e, p-1) = 1)."""
    top = 0b11 << (bits - 2)
    while True:
        cand = stream.next_bits(bits) | top | 1
        if cand == avoid:
            continue
        if math.gcd(e, cand - 1) != 1:
            continue
        if _is_probable_prime(cand, stream):
            return cand


def keygen(n: int, e: int, rng_seed: int) -> RsaprgKey:
    """Deterministic RSA modulus generation from a 64-bit seed.

    Primes have n/2 bits each with both top bits forced, so N has exactly
    n bits. gcd(e, (p-1)(q-1)) = 1 holds because each prime is drawn with
    gcd(e, prime-1) = 1; regenerating q alone could never fix a bad p.
    """
    if n % 6 != 0:
        raise ParameterError(f"n={n} must be divisible by 6")
    if n < 12:
        raise ParameterError("n too small to split into two primes")
    if e < 3 or e % 2 == 0:
        raise ParameterError(f"e={e} must be odd and >= 3")
    stream = SplitMix64(rng_seed)
    half = n // 2
    p = _draw_prime(half, e, stream)
    q = _draw_prime(half, e, stream, avoid=p)
    N = p * q
    assert N.bit_length() == n
    return RsaprgKey(N=Natural(N), p=Natural(p), q=Natural(q))


# ---------------------------------------------------------------------------
# generator state machine

@dataclass
class RsaprgState:
    """Single-owner mutable generator state over a shared immutable context."""

    ctx: ModulusContext
    params: RsaprgParams
    x: Natural
    bits_emitted: int = 0
    method: ReductionMethod = ReductionMethod.CLASSICAL
    mul_alg: MulAlgorithm = MulAlgorithm.SCHOOLBOOK


@dataclass
class IterationCounts:
    """Top-level operation tally for one or more iterations."""

    squarings: int = 0
    multiplies: int = 0
    reductions: int = 0


def seed_state(key_N: Natural, params: RsaprgParams, seed_material: Natural,
               method: ReductionMethod = ReductionMethod.CLASSICAL,
               mul_alg: MulAlgorithm = MulAlgorithm.SCHOOLBOOK) -> RsaprgState:
    """Build a generator state; the seed is reduced into [0, N)."""
    params.validate(strict=False)
    if key_N.bit_length != params.n:
        raise ParameterError(
            f"modulus has {key_N.bit_length} bits, params say n={params.n}")
    ctx = make_context(key_N)
    x = reduce_classical(seed_material, ctx)
    if int(x) <= 1:
        warnings.warn(
            f"seed reduces to {int(x)}, a fixed point; the stream will be constant",
            RuntimeWarning, stacklevel=2)
    return RsaprgState(ctx=ctx, params=params, x=x, bits_emitted=0,
                       method=method, mul_alg=mul_alg)


def exponent_schedule(e: int) -> tuple[str, ...]:
    """Left-to-right square-and-multiply step list for an odd exponent.

    'S' squares the accumulator, 'M' multiplies by the base; every step is
    followed by one modular reduction. e=9 gives ('S','S','S','M').
    """
    if e < 3 or e % 2 == 0:
        raise ParameterError(f"e={e} must be odd and >= 3")
    steps: list[str] = []
    for bit in bin(e)[3:]:
        steps.append("S")
        if bit == "1":
            steps.append("M")
    return tuple(steps)


def _step(state: RsaprgState,
          counter: MulCounter | None,
          red_stats: ReductionStats | None,
          counts: IterationCounts | None) -> None:
    """Advance the state by one x <- x^e mod N iteration."""
    y = state.x
    x = y
    for op in exponent_schedule(state.params.e):
        if op == "S":
            x = square(x, state.mul_alg, counter)
            if counts:
                counts.squarings += 1
        else:
            x = mul(x, y, state.mul_alg, counter)
            if counts:
                counts.multiplies += 1
        x = reduce(x, state.ctx, state.method, counter, red_stats)
        if counts:
            counts.reductions += 1
    state.x = x


def iterate(state: RsaprgState,
            counter: MulCounter | None = None,
            red_stats: ReductionStats | None = None,
            counts: IterationCounts | None = None) -> Bits:
    """One iteration: advance the state and emit its r low bits, LSB first.

    Mutates `state`; raises OutputBudgetExhausted if a full block would
    push past the lifetime cap.
    """
    r = state.params.r
    if state.bits_emitted + r > state.params.l:
        raise OutputBudgetExhausted(
            f"emitting {r} bits would exceed the cap of {state.params.l}")
    _step(state, counter, red_stats, counts)
    state.bits_emitted += r
    # emit from the freshly advanced state; taking low_bits of the pre-step
    # state instead is the alternative output convention
    return Bits(int(low_bits(state.x, r)), r)


def generate(state: RsaprgState, nbits: int,
             counter: MulCounter | None = None,
             red_stats: ReductionStats | None = None) -> Bits:
    """Emit exactly nbits, concatenating iteration blocks.

    The final block may be consumed partially; only consumed bits count
    against the lifetime cap.
    """
    if nbits < 0:
        raise ParameterError("nbits must be nonnegative")
    if state.bits_emitted + nbits > state.params.l:
        raise OutputBudgetExhausted(
            f"{nbits} more bits would exceed the cap of {state.params.l}")
    r = state.params.r
    sink = BitSink()
    remaining = nbits
    while remaining > 0:
        _step(state, counter, red_stats, None)
        take = min(r, remaining)
        sink.append(int(state.x) & ((1 << take) - 1), take)
        state.bits_emitted += take
        remaining -= take
    return sink.bits()


# ---------------------------------------------------------------------------
# parameter / key file schema

def key_file_dict(params: RsaprgParams, N: Natural,
                  p: Natural | None = None, q: Natural | None = None) -> dict:
    out = {"n": params.n, "e": params.e, "r": params.r, "l": params.l,
           "N": hex_encode(N)}
    if p is not None and q is not None:
        out["p"] = hex_encode(p)
        out["q"] = hex_encode(q)
    return out


def params_from_dict(data: dict) -> tuple[RsaprgParams, Natural]:
    try:
        params = RsaprgParams(n=int(data["n"]), e=int(data["e"]),
                              r=int(data["r"]), l=int(data["l"]))
        N = hex_decode(data["N"])
    except KeyError as missing:
        raise ParameterError(f"key file is missing field {missing}") from None
    params.validate(strict=False)
    if N.bit_length != params.n:
        raise ParameterError("modulus bit length disagrees with n")
    return params, N

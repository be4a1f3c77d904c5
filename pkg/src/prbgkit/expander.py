"""Pluggable output-expansion stage.

A generator's throughput can be raised by post-processing each output
block with a fast one-way function w that expands in_bits to out_bits.
No concrete w ships here; the module provides the interface, an identity
default so pipelines stay testable, and the throughput arithmetic for the
modified pipeline.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .bitstream import Bits


class LengthMismatchError(ValueError):
    """Block length does not match the expander's declared widths."""


@dataclass(frozen=True)
class ExpanderSpec:
    """Deterministic block transform contract: in_bits in, out_bits out."""

    in_bits: int
    out_bits: int
    transform: Callable[[Bits], Bits]

    def __post_init__(self):
        if self.in_bits <= 0:
            raise ValueError("in_bits must be positive")
        if self.out_bits < self.in_bits:
            raise ValueError("out_bits must be >= in_bits")

    @property
    def ratio(self) -> float:
        return self.out_bits / self.in_bits


def identity_spec(nbits: int) -> ExpanderSpec:
    """The no-op expander: pipelines with it emit the raw stream."""
    return ExpanderSpec(in_bits=nbits, out_bits=nbits, transform=lambda block: block)


def expand(spec: ExpanderSpec, block: Bits) -> Bits:
    """Apply the transform, enforcing both length contracts."""
    if block.nbits != spec.in_bits:
        raise LengthMismatchError(
            f"block has {block.nbits} bits, expander expects {spec.in_bits}")
    out = spec.transform(block)
    if out.nbits != spec.out_bits or out.value >> spec.out_bits:
        raise LengthMismatchError(
            f"transform returned {out.nbits} bits, contract says {spec.out_bits}")
    return out


_REGISTRY: dict[str, ExpanderSpec] = {}


def register_spec(name: str, spec: ExpanderSpec) -> None:
    _REGISTRY[name] = spec


def get_spec(name: str) -> ExpanderSpec:
    try:
        return _REGISTRY[name]
    except KeyError:
        raise KeyError(f"no expander registered under {name!r}") from None


def registered_specs() -> tuple[str, ...]:
    return tuple(sorted(_REGISTRY))


def modified_throughput(base_ns_per_iter: float, base_bits_per_iter: int,
                        w_ns_per_eval: float, spec: ExpanderSpec,
                        applications: int) -> float:
    """Throughput in Mbit/s of a generator whose output passes through w.

    Composition model: stages run strictly sequentially. Per generator
    iteration emitting B bits, the first application consumes B/in_bits
    evaluations of w and yields B*ratio bits; a second application
    consumes B*ratio/in_bits more evaluations and yields B*ratio^2 bits.
    Fractional evaluation counts are allowed (blocks are buffered across
    iterations).
    """
    if base_ns_per_iter <= 0 or base_bits_per_iter <= 0 or w_ns_per_eval < 0:
        raise ValueError("stage costs must be positive")
    if applications not in (1, 2):
        raise ValueError("applications must be 1 or 2")
    ratio = spec.ratio
    evals = sum(base_bits_per_iter * ratio ** t / spec.in_bits
                for t in range(applications))
    total_ns = base_ns_per_iter + evals * w_ns_per_eval
    out_bits = base_bits_per_iter * ratio ** applications
    return out_bits / total_ns * 1000.0

"""Provably-secure pseudorandom bit generators on a fast fixed-modulus
reduction kernel: arithmetic, the two generators, a security-parameter
estimator, and a benchmark harness."""

from .bignum import (
    LIMB_BITS,
    MulAlgorithm,
    MulCounter,
    Natural,
    SignedNat,
)
from .bitstream import Bits, BitSink
from .errors import OutputBudgetExhausted
from .modred import (
    ModulusContext,
    ReductionMethod,
    ReductionStats,
    make_context,
    reduce,
)
from .rsaprg import RsaprgKey, RsaprgParams, RsaprgState, keygen, seed_state
from .quad import QuadParams, QuadPrecomp, QuadState, QuadSystem, quad_keygen

__version__ = "0.1.0"

__all__ = [
    "LIMB_BITS",
    "Bits",
    "BitSink",
    "ModulusContext",
    "MulAlgorithm",
    "MulCounter",
    "Natural",
    "OutputBudgetExhausted",
    "QuadParams",
    "QuadPrecomp",
    "QuadState",
    "QuadSystem",
    "ReductionMethod",
    "ReductionStats",
    "RsaprgKey",
    "RsaprgParams",
    "RsaprgState",
    "SignedNat",
    "keygen",
    "make_context",
    "quad_keygen",
    "reduce",
    "seed_state",
    "__version__",
]

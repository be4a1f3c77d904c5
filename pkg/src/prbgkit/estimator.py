"""Security-parameter arithmetic for the two generators.

For the quadratic-system generator this is the Groebner-basis attack-time
estimate T(k, n) ~ C(n+1, D)^2.37, with the regularity-degree ratio D/n
given in closed form and by its large-k series. For the RSA generator it
is a check of a parameter tuple against the single published safe point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

ATTACK_EXPONENT = 2.37

# The one published safe parameter point for the RSA generator.
ENDORSED_RSAPRG = {"n": 6144, "e": 9, "r": 2196, "max_output_bits": 2 ** 32}


class EstimatorDomainError(ValueError):
    """The closed form is not real-valued at this k."""


@dataclass(frozen=True)
class MqEstimate:
    """Attack-time estimate for a system of kn quadratic equations in n
    unknowns over GF(2)."""

    k: float
    n: int
    D: int
    log2_time: float


def degree_ratio_exact(k: float) -> float:
    """Closed-form D/n: -k + 1/2 + sqrt(2k^2 - 10k - 1 + 2(k+2)sqrt(k(k+2)))/2."""
    if k < 0:
        raise EstimatorDomainError("k must be nonnegative")
    inner = k * (k + 2)
    radicand = 2 * k * k - 10 * k - 1 + 2 * (k + 2) * math.sqrt(inner)
    if radicand < 0:
        raise EstimatorDomainError(f"negative radicand at k={k}")
    return -k + 0.5 + 0.5 * math.sqrt(radicand)


def degree_ratio_series(k: float) -> float:
    """Three-term large-k series for D/n: 1/(8k) - 1/(16k^2) + 7/(128k^3).

    Asymptotic only; at small k it diverges from the closed form.
    """
    if k <= 0:
        raise EstimatorDomainError("k must be positive")
    return 1 / (8 * k) - 1 / (16 * k * k) + 7 / (128 * k ** 3)


def _log2_binomial(n: int, d: int) -> float:
    """log2 C(n, d) via log-gamma, overflow-free for n up to 10^6 and beyond."""
    return (math.lgamma(n + 1) - math.lgamma(d + 1) - math.lgamma(n - d + 1)) / math.log(2)


def mq_attack_log2_time(k: float, n: int) -> MqEstimate:
    """Base-2 log of the attack-time estimate C(n+1, D)^2.37.

    D is floor(n * D/n) clamped to at least 1; the estimate is an order of
    magnitude, so the rounding convention is not load-bearing.
    """
    if n < 4:
        raise EstimatorDomainError(f"n={n} must be >= 4")
    ratio = degree_ratio_exact(k)
    D = max(1, math.floor(n * ratio))
    log2_time = ATTACK_EXPONENT * _log2_binomial(n + 1, D)
    return MqEstimate(k=k, n=n, D=D, log2_time=log2_time)


def rsaprg_param_report(n: int, e: int, r: int, l: int) -> dict:
    """Compare (n, e, r, l) against the published safe point.

    Exactly (6144, 9, 2196) with a lifetime cap of at most 2^32 bits is
    endorsed; anything else is flagged as unvalidated.
    """
    point = ENDORSED_RSAPRG
    reasons = []
    if (n, e, r) != (point["n"], point["e"], point["r"]):
        reasons.append(
            f"(n={n}, e={e}, r={r}) is not the published point "
            f"(n={point['n']}, e={point['e']}, r={point['r']})")
    if l > point["max_output_bits"]:
        reasons.append(
            f"output cap {l} exceeds the published limit 2^32 = {point['max_output_bits']}")
    endorsed = not reasons
    return {
        "parameters": {"n": n, "e": e, "r": r, "l": l},
        "endorsed": endorsed,
        "endorsed_point": dict(point),
        "verdict": "endorsed" if endorsed else "unvalidated; consult the security analysis",
        "reasons": reasons,
    }

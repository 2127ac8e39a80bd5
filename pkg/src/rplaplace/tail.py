"""Tail control: Poincare bound for the tail and truncation depth M(lam).

The optimal Poincare constant of the tail beyond 2M pieces is bounded by
coeff * ratio**((3 - exponent) * M) for exponent < 3;  the Neumann
Laplacian on the tail then contributes only the trivial eigenvalue as
long as lam stays below the inverse square of that bound.  The
proportionality coefficient is not pinned down by the geometry alone and
is kept as a policy parameter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .domain import RpDomain, tail_area


@dataclass(frozen=True)
class TailPolicy:
    """coeff is the Poincare proportionality constant (default 1)."""

    coeff: float = 1.0

    def __post_init__(self):
        if self.coeff <= 0:
            raise ValueError("coeff must be > 0")


def poincare_bound(domain: RpDomain, M: int, policy: TailPolicy = TailPolicy()) -> float:
    """Upper bound coeff * ratio**((3-exponent)*M) on the tail Poincare constant."""
    params = domain.params
    if params is None:
        raise ValueError("tail control requires the geometric family")
    if params.exponent >= 3.0:
        raise ValueError(
            f"embedding not compact for exponent >= 3 (got {params.exponent})")
    if M < 0:
        raise ValueError("M must be >= 0")
    return policy.coeff * params.ratio ** ((3.0 - params.exponent) * M)


def min_M_for_lambda(domain: RpDomain, lam: float,
                     policy: TailPolicy = TailPolicy()) -> int:
    """Smallest truncation depth M with 1/poincare_bound(M)**2 > lam.

    Equivalently the smallest integer strictly greater than
    log(coeff**2 * lam) / (2 (3 - exponent) log(1/ratio)), clamped to >= 1.
    """
    params = domain.params
    if params is None:
        raise ValueError("tail control requires the geometric family")
    if params.exponent >= 3.0:
        raise ValueError(
            f"embedding not compact for exponent >= 3 (got {params.exponent})")
    if lam <= 0:
        raise ValueError("lam must be > 0")
    c = policy.coeff
    r, a = params.ratio, params.exponent
    threshold = math.log(c * c * lam) / (2.0 * (3.0 - a) * math.log(1.0 / r))
    M = max(1, math.floor(threshold) + 1)

    def admissible(m: int) -> bool:
        # the defining inequality, checked directly to be safe against
        # rounding of the log threshold
        return c * c * lam < r ** (-2.0 * (3.0 - a) * m)

    while not admissible(M):
        M += 1
    while M > 1 and admissible(M - 1):
        M -= 1
    return M


def tail_report(domain: RpDomain, lam: float,
                policy: TailPolicy = TailPolicy()) -> dict:
    """Depth, tail area and the boundedness product for one lambda.

    The product tail_area(M(lam)) * lam**(2/(3-exponent)) stays bounded
    over lambda; its value oscillates within a band of width about
    ratio**(-4) because M(lam) is an integer.
    """
    params = domain.params
    M = min_M_for_lambda(domain, lam, policy)
    area = tail_area(domain, M)
    product = area * lam ** (2.0 / (3.0 - params.exponent))
    return {"lam": lam, "M": M, "tail_area": area, "product": product,
            "poincare_bound": poincare_bound(domain, M, policy)}

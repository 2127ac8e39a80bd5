"""Dirichlet-Neumann bracketing counts for geometric R&P domains.

The Neumann counting function of the truncation (first 2M pieces) is
sandwiched between

  lower:  per room, exact counts over a five-strip partition with Neumann
          outer walls and Dirichlet interfaces (three strips for the first
          room); per passage, Dirichlet ends / Neumann sides;
  upper:  per piece, all-Neumann counts.

For the Dirichlet Laplacian the lower bound is all-Dirichlet per piece and
the upper bound takes Dirichlet on the horizontal sides with Neumann
(mixed for the first room) on the verticals.

``second_term_constants`` evaluates the closed-form constants obtained by
summing the area-plus-axes leading estimates of every piece.  Note that
those closed forms carry the full axis rows of each sub-rectangle, so they
sit above the enumerated second-order terms by the summed half-perimeter
corrections; ``enumerated_second_term_limits`` gives the sharp limits of
the enumerated normalized bounds.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .domain import GeometricParams, Piece, RpDomain, area_upto
from .rectangles import (Bc1d, RectangleSpec, count_exact,
                         count_second_order_coeff)


@dataclass(frozen=True)
class BracketReport:
    """Lower/upper counts for one lambda with normalized second terms.

    weyl is |Omega_2M| * lam / (4 pi); the normalized terms are
    (count - weyl) / (sqrt(lam)/pi).
    """

    lam: float
    M: int
    bc: str
    lower_count: int
    upper_count: int
    weyl: float
    normalized_lower: float
    normalized_upper: float

    def __post_init__(self):
        if self.lower_count > self.upper_count:
            raise ValueError("lower_count must be <= upper_count")


def room_partition(params: GeometricParams, j: int) -> list[RectangleSpec]:
    """Five-strip partition of room j >= 3 for the Neumann lower bound.

    The room (side h = ratio**j) is cut into full-width horizontal strips
    by the heights of the two adjacent passage openings, Dirichlet on the
    cuts and on the opening interfaces, Neumann on the true walls:

      I, V  outer strips, half-height (h - delta_left)/4,  (NN_x, DN_y)
      II,IV strips between the opening heights,
            half-height (delta_left - delta_right)/4,      (DN_x, DD_y)
      III   core strip at the right opening height,
            half-height delta_right/2,                     (DD_x, DD_y)
    """
    if j % 2 == 0:
        raise ValueError(f"j must be odd, got {j}")
    if j < 3:
        raise ValueError("generic partition needs j >= 3; use first_room_partition")
    h = params.room_side(j)
    a = h / 2.0
    d_left = params.passage_height(j - 1)
    d_right = params.passage_height(j + 1)
    b_outer = (h - d_left) / 4.0
    b_mid = (d_left - d_right) / 4.0
    b_core = d_right / 2.0
    specs = [
        RectangleSpec(a, b_outer, Bc1d.NN, Bc1d.DN),
        RectangleSpec(a, b_mid, Bc1d.DN, Bc1d.DD),
        RectangleSpec(a, b_core, Bc1d.DD, Bc1d.DD),
        RectangleSpec(a, b_mid, Bc1d.DN, Bc1d.DD),
        RectangleSpec(a, b_outer, Bc1d.NN, Bc1d.DN),
    ]
    total = sum(s.area for s in specs)
    assert abs(total - h * h) <= 1e-13 * h * h, "partition areas must sum to the room area"
    return specs


def first_room_partition(params: GeometricParams) -> list[RectangleSpec]:
    """Three-strip partition of the first room (solid left wall).

      I, III outer strips, half-height (h - delta)/4,  (NN_x, DN_y)
      II     core strip at the opening height delta,   (DN_x, DD_y)
    """
    h = params.room_side(1)
    a = h / 2.0
    d = params.passage_height(2)
    b_outer = (h - d) / 4.0
    b_core = d / 2.0
    specs = [
        RectangleSpec(a, b_outer, Bc1d.NN, Bc1d.DN),
        RectangleSpec(a, b_core, Bc1d.DN, Bc1d.DD),
        RectangleSpec(a, b_outer, Bc1d.NN, Bc1d.DN),
    ]
    total = sum(s.area for s in specs)
    assert abs(total - h * h) <= 1e-13 * h * h
    return specs


def passage_spec(params: GeometricParams, j: int, bc: str,
                 side: str) -> RectangleSpec:
    """RectangleSpec of passage j for one side of one bracketing."""
    if j % 2 != 0:
        raise ValueError(f"j must be even, got {j}")
    a = params.room_side(j) / 2.0
    b = params.passage_height(j) / 2.0
    table = {
        ("neumann", "lower"): (Bc1d.DD, Bc1d.NN),
        ("neumann", "upper"): (Bc1d.NN, Bc1d.NN),
        ("dirichlet", "lower"): (Bc1d.DD, Bc1d.DD),
        ("dirichlet", "upper"): (Bc1d.NN, Bc1d.DD),
    }
    bcx, bcy = table[(bc, side)]
    return RectangleSpec(a, b, bcx, bcy)


def room_lower_count(params: GeometricParams, j: int, lam: float) -> int:
    """Neumann lower-bound count of room j >= 3: sum over the five strips."""
    return sum(count_exact(s, lam) for s in room_partition(params, j))


def first_room_lower_count(params: GeometricParams, lam: float) -> int:
    return sum(count_exact(s, lam) for s in first_room_partition(params))


def room_upper_count(params: GeometricParams, j: int, lam: float) -> int:
    """Neumann upper-bound count of room j: the all-Neumann square."""
    if j % 2 == 0:
        raise ValueError(f"j must be odd, got {j}")
    a = params.room_side(j) / 2.0
    return count_exact(RectangleSpec(a, a, Bc1d.NN, Bc1d.NN), lam)


def passage_counts(params: GeometricParams, j: int, lam: float) -> tuple[int, int]:
    """(lower, upper) Neumann counts for passage j."""
    lo = count_exact(passage_spec(params, j, "neumann", "lower"), lam)
    up = count_exact(passage_spec(params, j, "neumann", "upper"), lam)
    return lo, up


def dirichlet_piece_counts(params: GeometricParams, piece: Piece,
                           lam: float) -> tuple[int, int]:
    """(lower, upper) Dirichlet counts for one piece.

    Lower: all-Dirichlet rectangle.  Upper: Dirichlet horizontals with
    Neumann verticals (mixed vertical pair for the first room).
    """
    a = piece.length / 2.0
    b = piece.half_height
    lo = count_exact(RectangleSpec(a, b, Bc1d.DD, Bc1d.DD), lam)
    bcx = Bc1d.DN if piece.index == 1 else Bc1d.NN
    up = count_exact(RectangleSpec(a, b, bcx, Bc1d.DD), lam)
    return lo, up


def assemble_bounds(domain: RpDomain, bc: str, M: int, lam: float,
                    scope: str = "omega_2M") -> BracketReport:
    """Bracket the counting function of the first-2M-piece truncation.

    scope "omega_2M" reports the truncation itself; "omega_full" adds the
    tail convention for the full domain (one extra trivial eigenvalue in
    both Neumann bounds, nothing for Dirichlet), valid once M is at least
    the tail-control depth for lam.
    """
    params = domain.params
    if params is None:
        raise ValueError("bracketing requires the geometric family")
    if bc not in ("neumann", "dirichlet"):
        raise ValueError(f"bc must be 'neumann' or 'dirichlet', got {bc!r}")
    if scope not in ("omega_2M", "omega_full"):
        raise ValueError(f"unknown scope {scope!r}")
    if M < 1 or 2 * M > domain.n_pieces:
        raise ValueError(f"M must be in [1, {domain.n_pieces // 2}], got {M}")

    lower = upper = 0
    for piece in domain.pieces[: 2 * M]:
        j = piece.index
        if bc == "neumann":
            if j % 2 == 1:
                lower += (first_room_lower_count(params, lam) if j == 1
                          else room_lower_count(params, j, lam))
                upper += room_upper_count(params, j, lam)
            else:
                lo, up = passage_counts(params, j, lam)
                lower += lo
                upper += up
        else:
            lo, up = dirichlet_piece_counts(params, piece, lam)
            lower += lo
            upper += up

    if scope == "omega_full" and bc == "neumann":
        lower += 1
        upper += 1

    weyl = area_upto(domain, 2 * M) * lam / (4.0 * math.pi)
    scale = math.sqrt(lam) / math.pi
    return BracketReport(
        lam=lam, M=M, bc=bc, lower_count=lower, upper_count=upper,
        weyl=weyl,
        normalized_lower=(lower - weyl) / scale,
        normalized_upper=(upper - weyl) / scale,
    )


def second_term_constants(params: GeometricParams,
                          M: int | None = None) -> tuple[float, float, float]:
    """Closed-form second-term constants (lower, upper, dirichlet-upper).

    Limit forms (M=None):

      C1 = (2C + C^2)/(1 - C^2) - k C^(2A)/(1 - C^(2A))
      C2 = (2C + C^2)/(1 - C^2) + k C^(2A)/(1 - C^(2A))
      CD = C(C^2 + 1)/(2(1 - C^2)) + k/(C^(-2A) - 1)

    with C = ratio, A = exponent, k = width_coeff; for finite M the
    truncated partial-sum forms of the same assemblies are returned.
    These are the area-plus-axes constants; the enumerated normalized
    bounds converge to strictly smaller limits (see
    ``enumerated_second_term_limits``).
    """
    C, A, k = params.ratio, params.exponent, params.width_coeff
    if M is None:
        common = (2.0 * C + C * C) / (1.0 - C * C)
        gap = k * C ** (2 * A) / (1.0 - C ** (2 * A))
        c1 = common - gap
        c2 = common + gap
        cd = C * (C * C + 1.0) / (2.0 * (1.0 - C * C)) + k / (C ** (-2 * A) - 1.0)
    else:
        if M < 1:
            raise ValueError("M must be >= 1")
        common = (2.0 * C + C**2 - 2.0 * C ** (2 * M + 1) - C ** (2 * M + 2)) / (1.0 - C**2)
        c1 = common - (k / 2.0) * (2.0 * C ** (2 * A) - C ** (2 * A * M)
                                   - C ** (2 * A * (M + 1))) / (1.0 - C ** (2 * A))
        c2 = common + k * (C ** (2 * A) - C ** (2 * A * (M + 1))) / (1.0 - C ** (2 * A))
        cd = (C * (1.0 - C ** (2 * M)) / (1.0 - C**2) - C / 2.0
              + k * C ** (2 * A) * (1.0 - C ** (2 * A * M)) / (1.0 - C ** (2 * A)))
    if c1 <= 0:
        warnings.warn(f"lower second-term constant is not positive: {c1}")
    return c1, c2, cd


def enumerated_second_term_limits(params: GeometricParams,
                                  M: int | None = None) -> tuple[float, float, float, float]:
    """Sharp limits of the enumerated normalized bounds.

    Sums the per-rectangle second-order coefficients of ``count_exact``
    (NN axis +halfside, DD axis -halfside, DN axis 0) over every bracketing
    piece.  Returns (neumann_lower, neumann_upper, dirichlet_lower,
    dirichlet_upper) in units sqrt(lam)/pi.
    """
    if M is None:
        M = 60  # geometric tails below double precision by this depth
    n_lo = n_up = d_lo = d_up = 0.0
    for j in range(1, 2 * M + 1):
        h = params.room_side(j)
        a = h / 2.0
        if j % 2 == 1:
            specs = (first_room_partition(params) if j == 1
                     else room_partition(params, j))
            n_lo += sum(count_second_order_coeff(s) for s in specs)
            n_up += count_second_order_coeff(
                RectangleSpec(a, a, Bc1d.NN, Bc1d.NN))
            d_lo += count_second_order_coeff(
                RectangleSpec(a, a, Bc1d.DD, Bc1d.DD))
            bcx = Bc1d.DN if j == 1 else Bc1d.NN
            d_up += count_second_order_coeff(RectangleSpec(a, a, bcx, Bc1d.DD))
        else:
            b = params.passage_height(j) / 2.0
            n_lo += count_second_order_coeff(passage_spec(params, j, "neumann", "lower"))
            n_up += count_second_order_coeff(passage_spec(params, j, "neumann", "upper"))
            d_lo += count_second_order_coeff(passage_spec(params, j, "dirichlet", "lower"))
            d_up += count_second_order_coeff(passage_spec(params, j, "dirichlet", "upper"))
    return n_lo, n_up, d_lo, d_up

"""Rooms-and-passages domain geometry.

A rooms-and-passages (R&P) domain is a chain of square rooms of side
``h_i`` (pieces with odd index) joined by thin rectangular passages of
length ``h_i`` and height ``delta_i`` (even index), all centered on the
x-axis and abutting left to right starting at x = 0.

Two constructors are provided: the geometric family

    h_i = ratio**i,   delta_i = width_coeff * ratio**(i*exponent)

with 0 < ratio < 1, exponent > 1 and width_coeff < ratio**(3 - 2*exponent)
(so every passage is narrower than both adjacent rooms), and a general
constructor taking explicit size sequences.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence


@dataclass(frozen=True)
class GeometricParams:
    """Parameters of the geometric R&P family.

    ratio       successive size ratio (0 < ratio < 1); room i has side ratio**i
    exponent    passage thinning exponent (> 1)
    width_coeff passage height coefficient; passage i has height
                width_coeff * ratio**(i*exponent)
    n_pieces    even number of pieces (rooms odd, passages even)
    """

    ratio: float
    exponent: float
    width_coeff: float
    n_pieces: int

    def __post_init__(self):
        r, a, k = self.ratio, self.exponent, self.width_coeff
        if not 0.0 < r < 1.0:
            raise ValueError(f"ratio must be in (0,1), got {r}")
        if a <= 1.0:
            raise ValueError(f"exponent must be > 1, got {a}")
        if k <= 0.0:
            raise ValueError(f"width_coeff must be > 0, got {k}")
        if k >= r ** (3.0 - 2.0 * a):
            raise ValueError(
                f"width_coeff={k} violates width_coeff < ratio**(3-2*exponent)"
                f" = {r ** (3.0 - 2.0 * a)}"
            )
        if self.n_pieces < 2 or self.n_pieces % 2 != 0:
            raise ValueError(f"n_pieces must be even and >= 2, got {self.n_pieces}")

    def room_side(self, i: int) -> float:
        return self.ratio**i

    def passage_height(self, i: int) -> float:
        return self.width_coeff * self.ratio ** (i * self.exponent)


@dataclass(frozen=True)
class Piece:
    """One room or passage rectangle.

    index        1-based position in the chain (rooms odd, passages even)
    kind         "room" or "passage"
    x_lo, x_hi   x-interval; x_hi - x_lo equals the piece length h_i
    half_height  h_i/2 for rooms, delta_i/2 for passages
    """

    index: int
    kind: str
    x_lo: float
    x_hi: float
    half_height: float

    @property
    def length(self) -> float:
        return self.x_hi - self.x_lo

    @property
    def area(self) -> float:
        return self.length * 2.0 * self.half_height


@dataclass(frozen=True)
class RpDomain:
    """An R&P domain: an ordered chain of pieces, optionally geometric."""

    pieces: tuple[Piece, ...]
    params: GeometricParams | None = None

    @property
    def n_pieces(self) -> int:
        return len(self.pieces)

    @property
    def x_max(self) -> float:
        return self.pieces[-1].x_hi


def _layout(lengths: Sequence[float], half_heights: Sequence[float]) -> tuple[Piece, ...]:
    pieces = []
    x = 0.0
    for i, (L, hh) in enumerate(zip(lengths, half_heights), start=1):
        kind = "room" if i % 2 == 1 else "passage"
        pieces.append(Piece(index=i, kind=kind, x_lo=x, x_hi=x + L, half_height=hh))
        x += L
    return tuple(pieces)


def build_geometric(ratio: float, exponent: float, width_coeff: float,
                    n_pieces: int) -> RpDomain:
    """Construct the geometric R&P family with n_pieces pieces.

    Raises ValueError naming the violated inequality if any passage would
    be at least as tall as an adjacent room.
    """
    params = GeometricParams(ratio, exponent, width_coeff, n_pieces)
    lengths = [params.room_side(i) for i in range(1, n_pieces + 1)]
    half = []
    for i in range(1, n_pieces + 1):
        if i % 2 == 1:
            half.append(params.room_side(i) / 2.0)
        else:
            d = params.passage_height(i)
            left = params.room_side(i - 1)
            right = params.room_side(i + 1)
            if d >= min(left, right):
                raise ValueError(
                    f"passage {i}: height {d} must be < min(h_{i-1}, h_{i+1})"
                    f" = {min(left, right)}"
                )
            half.append(d / 2.0)
    return RpDomain(pieces=_layout(lengths, half), params=params)


def build_general(lengths: Sequence[float],
                  passage_heights: Sequence[float]) -> RpDomain:
    """Construct a general R&P domain from explicit size sequences.

    lengths[i-1] is the x-length of piece i (its side h_i for rooms);
    passage_heights[j] is the height of the (j+1)-th passage (piece 2j+2).
    """
    n = len(lengths)
    if n < 2 or n % 2 != 0:
        raise ValueError("need an even number of pieces >= 2")
    if len(passage_heights) != n // 2:
        raise ValueError(f"expected {n // 2} passage heights, got {len(passage_heights)}")
    if any(L <= 0 for L in lengths) or any(d <= 0 for d in passage_heights):
        raise ValueError("all sizes must be positive")
    half = []
    for i in range(1, n + 1):
        if i % 2 == 1:
            half.append(lengths[i - 1] / 2.0)
        else:
            d = passage_heights[i // 2 - 1]
            neighbours = [lengths[i - 2]]
            if i < n:
                neighbours.append(lengths[i])
            if d >= min(neighbours):
                raise ValueError(
                    f"passage {i}: height {d} must be < adjacent room sides "
                    f"{neighbours}"
                )
            half.append(d / 2.0)
    return RpDomain(pieces=_layout(lengths, half), params=None)


def area_upto(domain: RpDomain, n_pieces: int) -> float:
    """Area of the union of the first n_pieces pieces."""
    if n_pieces < 0 or n_pieces > domain.n_pieces:
        raise ValueError(f"n_pieces must be in [0, {domain.n_pieces}]")
    return sum(p.area for p in domain.pieces[:n_pieces])


def total_area(domain: RpDomain) -> float:
    """Total area; for the geometric family this is the full-chain limit.

    Geometric family: ratio**2/(1-ratio**4)
    + width_coeff*ratio**(2(1+exponent))/(1 - ratio**(2(1+exponent))).
    General domains: the finite sum over their pieces.
    """
    p = domain.params
    if p is None:
        return area_upto(domain, domain.n_pieces)
    r, a, k = p.ratio, p.exponent, p.width_coeff
    rooms = r**2 / (1.0 - r**4)
    passages = k * r ** (2.0 * (1.0 + a)) / (1.0 - r ** (2.0 * (1.0 + a)))
    return rooms + passages


def tail_area(domain: RpDomain, M: int) -> float:
    """Area of the tail beyond the first 2M pieces (geometric family).

    Closed form: ratio**(2+4M)/(1-ratio**4)
    + width_coeff*ratio**(2(1+exponent)(M+1))/(1-ratio**(2(1+exponent))).
    """
    if M < 0:
        raise ValueError("M must be >= 0")
    p = domain.params
    if p is None:
        return total_area(domain) - area_upto(domain, min(2 * M, domain.n_pieces))
    r, a, k = p.ratio, p.exponent, p.width_coeff
    rooms = r ** (2 + 4 * M) / (1.0 - r**4)
    q = 2.0 * (1.0 + a)
    passages = k * r**q * r ** (q * M) / (1.0 - r**q)
    return rooms + passages


def contains(domain: RpDomain, x: float, y: float) -> bool:
    """True iff (x, y) lies in the open interior of the domain.

    Points on a shared vertical interface are interior when they lie
    strictly inside the opening (|y| below both neighbouring half-heights).
    """
    for i, p in enumerate(domain.pieces):
        if p.x_lo < x < p.x_hi and abs(y) < p.half_height:
            return True
        if x == p.x_hi and i + 1 < domain.n_pieces:
            opening = min(p.half_height, domain.pieces[i + 1].half_height)
            if abs(y) < opening:
                return True
    return False


def to_json(domain: RpDomain) -> str:
    """Serialize to JSON: {params, pieces:[{index,kind,x_lo,x_hi,half_height}]}."""
    params = None
    if domain.params is not None:
        p = domain.params
        params = {"ratio": p.ratio, "exponent": p.exponent,
                  "width_coeff": p.width_coeff, "n_pieces": p.n_pieces}
    pieces = [{"index": p.index, "kind": p.kind, "x_lo": p.x_lo,
               "x_hi": p.x_hi, "half_height": p.half_height}
              for p in domain.pieces]
    return json.dumps({"params": params, "pieces": pieces}, indent=2)


def from_json(text: str) -> RpDomain:
    data = json.loads(text)
    pieces = tuple(Piece(**p) for p in data["pieces"])
    params = GeometricParams(**data["params"]) if data["params"] else None
    return RpDomain(pieces=pieces, params=params)

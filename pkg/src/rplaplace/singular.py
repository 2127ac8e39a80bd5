"""Singular-sequence profiles witnessing essential spectrum at zero.

For a geometric R&P domain with thinning exponent > 3, the x-dependent
profiles built here are 0 up to piece 2j-1, rise from 0 to 1 across
passage 2j with a cosine ramp, stay 1 through piece 4j-1, fall back to 0
across passage 4j and vanish beyond.  Normalized in L2 they converge
weakly to zero while their gradient norms decay like
ratio**(j*(exponent-3)), so the Rayleigh quotients vanish and 0 lies in
the essential spectrum of the Neumann Laplacian.

All norms are computed by exact piecewise integration: the profile is
constant or a cosine ramp on each piece and the domain height over a
piece is constant, so every integral has a closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .domain import RpDomain

#: integral of ((1-cos(pi u))/2)**2 over [0,1]
_RAMP_SQ = 3.0 / 8.0
#: integral of ((pi/2) sin(pi u))**2 over [0,1]
_RAMP_D_SQ = math.pi**2 / 8.0


@dataclass(frozen=True)
class RampProfile:
    """Piecewise x-profile: 0 | cosine ramp up | 1 | cosine ramp down | 0."""

    j: int
    x_up_lo: float     # left edge of passage 2j (ramp 0 -> 1)
    x_up_hi: float
    x_down_lo: float   # left edge of passage 4j (ramp 1 -> 0)
    x_down_hi: float

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        up = (x - self.x_up_lo) / (self.x_up_hi - self.x_up_lo)
        down = (x - self.x_down_lo) / (self.x_down_hi - self.x_down_lo)
        val = np.where(x < self.x_up_lo, 0.0,
              np.where(x < self.x_up_hi, (1.0 - np.cos(math.pi * np.clip(up, 0, 1))) / 2.0,
              np.where(x < self.x_down_lo, 1.0,
              np.where(x < self.x_down_hi,
                       (1.0 + np.cos(math.pi * np.clip(down, 0, 1))) / 2.0, 0.0))))
        return val if val.ndim else float(val)

    def derivative(self, x):
        x = np.asarray(x, dtype=float)
        w_up = self.x_up_hi - self.x_up_lo
        w_down = self.x_down_hi - self.x_down_lo
        up = (x - self.x_up_lo) / w_up
        down = (x - self.x_down_lo) / w_down
        val = np.where((x >= self.x_up_lo) & (x < self.x_up_hi),
                       (math.pi / (2.0 * w_up)) * np.sin(math.pi * np.clip(up, 0, 1)),
              np.where((x >= self.x_down_lo) & (x < self.x_down_hi),
                       -(math.pi / (2.0 * w_down)) * np.sin(math.pi * np.clip(down, 0, 1)),
                       0.0))
        return val if val.ndim else float(val)


def build_profile(domain: RpDomain, j: int) -> RampProfile:
    """Ramp profile for index j; the domain must have at least 4j pieces."""
    if domain.params is None:
        raise ValueError("singular sequences are defined for the geometric family")
    if j < 1:
        raise ValueError("j must be >= 1")
    if domain.n_pieces < 4 * j:
        raise ValueError(
            f"domain has {domain.n_pieces} pieces; profile j={j} needs {4 * j}")
    up = domain.pieces[2 * j - 1]      # piece index 2j
    down = domain.pieces[4 * j - 1]    # piece index 4j
    return RampProfile(j=j, x_up_lo=up.x_lo, x_up_hi=up.x_hi,
                       x_down_lo=down.x_lo, x_down_hi=down.x_hi)


def rayleigh_report(domain: RpDomain, j: int) -> tuple[float, float, float]:
    """(norm_phi, norm_phi_prime, rayleigh) for the profile of index j.

    norm_phi is the L2 norm over the 2D domain (profile times piece
    height), norm_phi_prime the L2 norm of the x-derivative, and
    rayleigh their quotient, which equals the gradient norm of the
    L2-normalized profile.
    """
    profile = build_profile(domain, j)
    sq = dsq = 0.0
    for piece in domain.pieces:
        height = 2.0 * piece.half_height
        if piece.index == 2 * j:
            sq += height * piece.length * _RAMP_SQ
            dsq += height / piece.length * _RAMP_D_SQ
        elif piece.index == 4 * j:
            sq += height * piece.length * _RAMP_SQ
            dsq += height / piece.length * _RAMP_D_SQ
        elif 2 * j < piece.index < 4 * j:
            sq += height * piece.length  # profile is 1 here
        # profile vanishes on all other pieces
    norm_phi = math.sqrt(sq)
    norm_phi_prime = math.sqrt(dsq)
    return norm_phi, norm_phi_prime, norm_phi_prime / norm_phi


def decay_table(domain: RpDomain, j_values) -> np.ndarray:
    """Rows (j, norm_phi, norm_phi_prime, rayleigh) for a range of j."""
    rows = [(j, *rayleigh_report(domain, j)) for j in j_values]
    return np.array(rows)


def fitted_decay_slope(domain: RpDomain, j_values) -> float:
    """Slope of log(rayleigh) against j; tends to (exponent-3)*log(ratio)."""
    table = decay_table(domain, j_values)
    j = table[:, 0]
    log_r = np.log(table[:, 3])
    slope = np.polyfit(j, log_r, 1)[0]
    return float(slope)

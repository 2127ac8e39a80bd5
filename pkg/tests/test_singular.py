import math

import numpy as np
import pytest

import rplaplace as rp
from rplaplace.singular import fitted_decay_slope

# exponent 4 > 3: the non-compact regime where the quotients must decay
DOM = rp.build_geometric(0.5, 4.0, 1.0, 40)


def test_profile_plateau_and_support():
    prof = rp.build_profile(DOM, 2)
    mid_room5 = DOM.pieces[4]  # piece index 5 = room inside the plateau
    assert prof((mid_room5.x_lo + mid_room5.x_hi) / 2) == 1.0
    assert prof(DOM.pieces[2 * 2 - 1].x_lo) == 0.0   # left edge of passage 4
    assert prof(DOM.pieces[4 * 2 - 1].x_hi) == 0.0   # right edge of passage 8
    assert prof(0.0) == 0.0
    assert prof(DOM.x_max) == 0.0


def test_profile_derivative_bound():
    j = 2
    prof = rp.build_profile(DOM, j)
    up = DOM.pieces[2 * j - 1]
    xs = np.linspace(up.x_lo, up.x_hi, 4001)
    max_d = np.max(np.abs(prof.derivative(xs)))
    bound = (math.pi / 2) / up.length
    assert max_d <= bound * (1 + 1e-12)
    assert max_d >= 0.9 * bound  # the cosine ramp attains it mid-passage


def test_insufficient_pieces():
    small = rp.build_geometric(0.5, 4.0, 1.0, 8)
    with pytest.raises(ValueError, match="pieces"):
        rp.build_profile(small, 3)


def test_norm_lower_bound_by_plateau_area():
    for j in (2, 3, 4):
        norm_phi, _, _ = rp.rayleigh_report(DOM, j)
        plateau = rp.area_upto(DOM, 4 * j - 1) - rp.area_upto(DOM, 2 * j)
        assert norm_phi**2 >= plateau


def test_norm_scales_like_plateau():
    ratios = []
    for j in range(2, 9):
        norm_phi, _, _ = rp.rayleigh_report(DOM, j)
        ratios.append(norm_phi / 0.5 ** (2 * j))
    assert min(ratios) > 0.3
    assert max(ratios) < 3.0


def test_norms_against_quadrature():
    """Closed-form piecewise integrals vs a dense midpoint quadrature."""
    j = 2
    prof = rp.build_profile(DOM, j)
    norm_phi, norm_phi_prime, ray = rp.rayleigh_report(DOM, j)
    sq = dsq = 0.0
    for p in DOM.pieces:
        xs = np.linspace(p.x_lo, p.x_hi, 20001)
        mid = 0.5 * (xs[1:] + xs[:-1])
        w = (p.x_hi - p.x_lo) / 20000 * 2 * p.half_height
        sq += float(np.sum(prof(mid) ** 2) * w)
        dsq += float(np.sum(prof.derivative(mid) ** 2) * w)
    assert norm_phi == pytest.approx(math.sqrt(sq), rel=1e-6)
    assert norm_phi_prime == pytest.approx(math.sqrt(dsq), rel=1e-6)
    assert ray == pytest.approx(norm_phi_prime / norm_phi, rel=1e-12)


def test_rayleigh_ratio_approaches_contraction_rate():
    rays = [rp.rayleigh_report(DOM, j)[2] for j in range(3, 9)]
    target = 0.5 ** (4.0 - 3.0)
    for a, b in zip(rays, rays[1:]):
        assert b / a == pytest.approx(target, rel=0.05)


def test_decay_slope():
    slope = fitted_decay_slope(DOM, range(3, 9))
    assert slope == pytest.approx((4.0 - 3.0) * math.log(0.5), rel=0.05)
    rays = [rp.rayleigh_report(DOM, j)[2] for j in range(3, 9)]
    assert all(b < a for a, b in zip(rays, rays[1:]))


def test_growth_when_embedding_compact():
    """For exponent < 3 the same quotients grow instead (reported, not a
    theorem of the decay construction)."""
    dom = rp.build_geometric(0.5, 2.0, 1 / 16, 40)
    rays = [rp.rayleigh_report(dom, j)[2] for j in range(3, 9)]
    assert all(b > a for a, b in zip(rays, rays[1:]))

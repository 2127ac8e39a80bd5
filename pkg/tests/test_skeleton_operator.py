import math

import numpy as np
import pytest
from scipy.special import jn_zeros

import rplaplace as rp
from rplaplace.skeleton import EdgeGroup, build_room_skeleton
from rplaplace.skeleton_operator import (SkeletonFunction, richardson_pair,
                                         sl_convergence_order,
                                         t1_roundtrip_defect)

EDGES = build_room_skeleton(1.0, 0.25, 0.25)
G1 = next(e for e in EDGES if e.group == EdgeGroup.G1_ROOM)
G2 = next(e for e in EDGES if e.group == EdgeGroup.G2_DIAGONAL)
G3 = next(e for e in EDGES if e.group == EdgeGroup.G3_PARABOLIC)


def test_l2_inner_constant_on_passage_edge():
    dom = rp.build_geometric(0.5, 2.0, 0.25, 4)
    edges = [e for e in rp.domain_skeleton(dom)
             if e.group == EdgeGroup.G1_PASSAGE][:1]
    ones = SkeletonFunction.constant(edges, 1.0)
    # alpha = delta on a passage: integral is delta * length
    assert rp.l2_inner(ones, ones) == pytest.approx(
        (1 / 64) * edges[0].length, rel=1e-12)


def test_l2_inner_g2_cubic_weight():
    f = SkeletonFunction.from_callable([G2], lambda t: t)
    L = G2.length
    assert rp.l2_inner(f, f) == pytest.approx(L**4 / 4, rel=1e-10)


def test_h1_nonnegative_and_additive():
    f = SkeletonFunction.from_callable([G1, G2], lambda t: np.sin(3 * t))
    h1 = rp.h1_inner(f, f)
    l2 = rp.l2_inner(f, f)
    assert h1 >= l2 >= 0.0


def test_inner_product_requires_matching_edges():
    f = SkeletonFunction.constant([G1], 1.0)
    g = SkeletonFunction.constant([G2], 1.0)
    with pytest.raises(ValueError):
        rp.l2_inner(f, g)


def test_singular_edge_mass_in_l2():
    f = SkeletonFunction.constant([G3], 2.0)
    assert rp.l2_inner(f, f) == pytest.approx(4.0 * G3.preimage_area, rel=1e-12)


def test_assemble_sl_validation():
    with pytest.raises(ValueError, match="singular"):
        rp.assemble_sl(G3, 64)
    with pytest.raises(ValueError):
        rp.assemble_sl(G1, 4)


def test_sl_symmetric_nonnegative_constant_kernel():
    for edge in (G1, G2):
        sys_ = rp.assemble_sl(edge, 128)
        diag, off = sys_.stiffness_tridiag()
        K = np.diag(diag) + np.diag(off, 1) + np.diag(off, -1)
        assert np.max(np.abs(K - K.T)) <= 1e-12
        ones = np.ones(sys_.n + 1)
        # rows sum to zero up to roundoff of the face weights
        assert np.max(np.abs(K @ ones)) <= 1e-12 * np.abs(diag).max()
        vals = rp.sl_eigenvalues(sys_, 6)
        assert vals[0] == 0.0
        assert np.all(vals >= -1e-10)


def test_g1_eigenvalues_and_convergence_order():
    L = G1.length
    exact = [(m * math.pi / L) ** 2 for m in range(5)]
    vals = rp.sl_eigenvalues(rp.assemble_sl(G1, 512), 5)
    assert vals == pytest.approx(exact, rel=1e-3)
    order = sl_convergence_order(G1, 2, exact[2])
    assert 1.8 <= order <= 2.2
    # a unit-length constant-weight edge reproduces the values sharply
    from rplaplace.skeleton import AxisEdge
    long_edge = AxisEdge("p", 0.0, 1.0, 0.1, kind="passage")
    vals = rp.sl_eigenvalues(rp.assemble_sl(long_edge, 1024), 4)
    assert vals == pytest.approx([(m * math.pi) ** 2 for m in range(4)],
                                 rel=1e-5, abs=1e-12)


def test_g2_eigenvalues_bessel_oracle():
    """alpha = sigma, beta = 2 sigma gives a radial problem whose no-flux
    eigenvalues are 2 (z/L)^2 over extrema of the zeroth Bessel function."""
    L = G2.length
    zeros = np.concatenate([[0.0], jn_zeros(1, 4)])
    exact = 2.0 * (zeros / L) ** 2
    vals = rp.sl_eigenvalues(rp.assemble_sl(G2, 2048), 5)
    assert vals == pytest.approx(exact, rel=2e-5, abs=1e-8)


def test_g2_richardson_self_consistency():
    ext1, ext2 = richardson_pair(G2, 4)
    scale = max(1.0, float(ext2[-1]))
    assert np.max(np.abs(ext1 - ext2)) / scale <= 1e-6


def test_lift_and_constant_roundtrip():
    ones = SkeletonFunction.constant(EDGES, 1.0)
    lifted = rp.lift(ones)
    rng = np.random.default_rng(9)
    pts = []
    while len(pts) < 30:
        x, y = rng.random(), rng.random() - 0.5
        try:
            rp.locate(EDGES, x, y)
        except ValueError:
            continue
        pts.append((x, y))
    assert all(lifted(x, y) == 1.0 for x, y in pts)
    # adjoint of the lift returns the constant on every edge
    for e in (G1, G2):
        assert rp.fiber_average(e, lifted, 0.37 * e.length) == pytest.approx(
            1.0, rel=1e-10)
    assert rp.fiber_average_singular(G3, lifted) == pytest.approx(1.0, rel=1e-8)


def test_fiber_average_inverts_lift_on_g1():
    f = SkeletonFunction.from_callable([G1], lambda t: t)
    lifted = rp.lift(f)
    for frac in (0.2, 0.5, 0.8):
        sig = frac * G1.length
        assert rp.fiber_average(G1, lifted, sig) == pytest.approx(sig, abs=1e-8)


def test_fiber_average_singular_mean_value():
    # mean of 1 over the preimage is 1; mean of an odd-in-y function is 0
    assert rp.fiber_average_singular(G3, lambda x, y: 1.0) == pytest.approx(
        1.0, rel=1e-8)
    kite = next(e for e in EDGES if e.group == EdgeGroup.G3_SEGMENT)
    assert rp.fiber_average_singular(kite, lambda x, y: y) == pytest.approx(
        0.0, abs=1e-10)


CUBICS = [
    (lambda t: np.full_like(np.asarray(t, float), 2.0),
     lambda t: np.zeros_like(np.asarray(t, float))),
    (lambda t: np.asarray(t, float),
     lambda t: np.ones_like(np.asarray(t, float))),
    (lambda t: np.asarray(t, float) ** 2,
     lambda t: 2.0 * np.asarray(t, float)),
    (lambda t: np.asarray(t, float) ** 3 - 0.4 * np.asarray(t, float),
     lambda t: 3.0 * np.asarray(t, float) ** 2 - 0.4),
    (lambda t: 1.0 + 0.5 * np.asarray(t, float) ** 3,
     lambda t: 1.5 * np.asarray(t, float) ** 2),
    (lambda t: 0.2 - np.asarray(t, float) ** 2 + np.asarray(t, float) ** 3,
     lambda t: -2.0 * np.asarray(t, float) + 3.0 * np.asarray(t, float) ** 2),
]


@pytest.mark.parametrize("fn,fnp", CUBICS)
@pytest.mark.parametrize("edge", [G1, G2], ids=["G1", "G2"])
def test_isometry_defects_cubics(edge, fn, fnp):
    l2, h1 = rp.isometry_defects(edge, fn, fnp)
    assert l2 <= 1e-6
    assert h1 <= 1e-6


def test_isometry_constant_exact():
    l2, h1 = rp.isometry_defects(
        G1, lambda t: np.full_like(np.asarray(t, float), 3.0),
        lambda t: np.zeros_like(np.asarray(t, float)))
    assert l2 == 0.0 and h1 == 0.0


def test_zero_modes_orthonormal_zero_energy():
    dom = rp.build_geometric(0.5, 2.0, 1 / 16, 20)
    modes = rp.zero_modes(dom, 10)
    assert len(modes) == 10
    ids = {m.edge.edge_id for m in modes}
    assert len(ids) == 10
    for i, m in enumerate(modes):
        for j, n in enumerate(modes):
            assert m.inner(n) == (1.0 if i == j else 0.0)
        assert m.rayleigh_quotient() == 0.0


def test_zero_mode_values_on_support():
    dom = rp.build_geometric(0.5, 2.0, 1 / 16, 8)
    modes = rp.zero_modes(dom, 3)
    m = modes[0]
    sig = 0.5 * m.edge.length
    x, y = m.edge.fiber_point(sig, 0.25 * m.edge.fiber_halflength(sig))
    assert m(float(x), float(y)) == m.amplitude
    assert m(float(x), 10.0) == 0.0


def test_zero_modes_bounded_by_edge_count():
    dom = rp.build_geometric(0.5, 2.0, 1 / 16, 4)
    with pytest.raises(ValueError):
        rp.zero_modes(dom, 500)


def test_resolvent_identity_on_singular_edges():
    for value in (1.0, -2.5, 0.125):
        assert rp.resolvent_on_singular_edge(G3, value) == value
    with pytest.raises(ValueError):
        rp.resolvent_on_singular_edge(G1, 1.0)


def test_t1_roundtrip_on_lifted_functions():
    defect = t1_roundtrip_defect(G1, lambda t: np.sin(2 * np.asarray(t, float)),
                                 lambda t: 2 * np.cos(2 * np.asarray(t, float)))
    assert defect <= 1e-3
    defect2 = t1_roundtrip_defect(
        G2, lambda t: np.asarray(t, float) ** 2,
        lambda t: 2 * np.asarray(t, float))
    assert defect2 <= 1e-3

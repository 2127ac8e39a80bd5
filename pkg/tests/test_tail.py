import math

import numpy as np
import pytest

import rplaplace as rp
from rplaplace.tail import TailPolicy, tail_report

DOM = rp.build_geometric(0.5, 2.0, 1 / 16, 40)


def test_poincare_bound_values():
    assert rp.poincare_bound(DOM, 3) == pytest.approx(1 / 8, rel=1e-15)
    assert rp.poincare_bound(DOM, 3, TailPolicy(2.0)) == pytest.approx(1 / 4)
    bounds = [rp.poincare_bound(DOM, M) for M in range(12)]
    assert all(b < a for a, b in zip(bounds, bounds[1:]))


def test_exponent_three_not_compact():
    d = rp.build_geometric(0.5, 3.2, 1e-3, 4)
    with pytest.raises(ValueError, match="not compact"):
        rp.poincare_bound(d, 2)
    with pytest.raises(ValueError, match="not compact"):
        rp.min_M_for_lambda(d, 10.0)


def test_min_M_example():
    # threshold log(16)/(2 log 2) = 2, strictly-greater integer is 3
    assert rp.min_M_for_lambda(DOM, 16.0) == 3


def test_min_M_clamps_to_one():
    assert rp.min_M_for_lambda(DOM, 0.5) == 1
    assert rp.min_M_for_lambda(DOM, 1e-8) == 1


def test_min_M_defining_inequality():
    rng = np.random.default_rng(0)
    for lam in 10 ** (1 + 6 * rng.random(25)):
        for c in (0.5, 1.0, 2.0):
            policy = TailPolicy(c)
            M = rp.min_M_for_lambda(DOM, lam, policy)
            assert 1.0 / rp.poincare_bound(DOM, M, policy) ** 2 > lam
            if M > 1:
                assert 1.0 / rp.poincare_bound(DOM, M - 1, policy) ** 2 <= lam


def test_doubling_lambda_bounded_step():
    # doubling lambda moves the threshold by log2/(2(3-a)log(1/C))
    step = math.ceil(math.log(2) / (2 * (3 - 2.0) * math.log(2.0))) + 1
    for lam in 10 ** np.linspace(1, 6, 40):
        m1 = rp.min_M_for_lambda(DOM, lam)
        m2 = rp.min_M_for_lambda(DOM, 2 * lam)
        assert 0 <= m2 - m1 <= step


def test_tail_product_bounded_with_quantization_band():
    """tail_area(M(lam)) * lam^(2/(3-a)) is bounded above and below; the
    integer depth quantizes it into a band of ratio about ratio^(-4)."""
    prods = [tail_report(DOM, lam)["product"]
             for lam in np.logspace(3, 7, 60)]
    assert min(prods) > 0.01
    assert max(prods) < 0.30
    band = max(prods) / min(prods)
    assert band < 0.5 ** (-4) * 1.1  # quantization band, about 16x


def test_policy_validation():
    with pytest.raises(ValueError):
        TailPolicy(0.0)
    with pytest.raises(ValueError):
        rp.min_M_for_lambda(DOM, -1.0)

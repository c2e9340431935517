import math

import numpy as np
import pytest

from zenspace import functions as fz
from zenspace.errors import ConvergenceError
from zenspace.measure import BoundaryMeasure
from zenspace.norms import inner_product_direct, norm_via_isometry, zen_norm_direct
from zenspace.spaces import ZenSpace, closed_form_kernel, kernel_eval, kernel_norm_sq, weight_eval

MIXED = ZenSpace.from_measure(BoundaryMeasure(((0.0, 1 / (2 * math.pi)),), ((1 / math.pi, 0.0),)))


def test_weight_examples():
    assert weight_eval(ZenSpace.hardy(), 3.7) == pytest.approx(1.0)
    for alpha in (0.0, 1.0, 2.5):
        t = 0.7
        assert weight_eval(ZenSpace.bergman(alpha), t) == pytest.approx(
            2 ** -alpha * math.gamma(alpha + 1) * t ** (-alpha - 1), rel=1e-14)
    sp = ZenSpace.from_measure(BoundaryMeasure(((0.0, 1 / (2 * math.pi)), (1.0, 1.0)), ()))
    assert weight_eval(sp, 1.0) == pytest.approx(1 + 2 * math.pi * math.exp(-2))
    with pytest.raises(ValueError):
        weight_eval(sp, 0.0)


@pytest.mark.parametrize("space", [ZenSpace.hardy(), ZenSpace.bergman(0.0), MIXED])
def test_weight_positive_nonincreasing(space):
    t = np.geomspace(1e-6, 1e6, 1000)
    w = space.weight(t)
    assert np.all(w > 0)
    assert np.all(np.diff(w) <= 0)


def test_kernel_examples():
    assert kernel_eval(ZenSpace.hardy(), 1, 1) == pytest.approx(0.5)
    assert kernel_eval(ZenSpace.bergman(0), 1, 1) == pytest.approx(0.25)
    q = kernel_eval(ZenSpace.hardy(), 1 + 1j, 2, method="quadrature")
    assert abs(q - (0.3 + 0.1j)) < 1e-8 * abs(0.3 + 0.1j)


def test_kernel_norm_examples():
    assert kernel_norm_sq(ZenSpace.hardy(), 1) == pytest.approx(0.5)
    assert kernel_norm_sq(ZenSpace.bergman(1), 2) == pytest.approx(1 / 16)
    z = 0.3 + 2j
    assert kernel_norm_sq(MIXED, z) == kernel_eval(MIXED, z, z).real


def test_hermitian_symmetry():
    rng = np.random.default_rng(0)
    for _ in range(8):
        z, zeta = (complex(rng.uniform(0.1, 3), rng.uniform(-3, 3)) for _ in range(2))
        a = kernel_eval(MIXED, z, zeta)
        b = kernel_eval(MIXED, zeta, z)
        assert abs(a - b.conjugate()) <= 1e-10 * abs(a)


def test_gram_psd():
    pts = [0.2 + 1j, 1.0, 2.0 - 0.5j, 0.5 + 3j, 4.0 + 0.1j]
    g = np.array([[kernel_eval(MIXED, zi, zj) for zi in pts] for zj in pts])
    assert np.linalg.eigvalsh((g + g.conj().T) / 2).min() >= -1e-9


def test_quadrature_matches_closed_form_mixed_grid():
    z = np.array([0.01 + 0.5j, 1.0, 30 - 200j])
    zeta = np.array([2.0, 0.5 + 0.5j, 1000.0])
    for alpha in (0.0, 2.5):
        sp = ZenSpace.bergman(alpha)
        for a, b in zip(z, zeta):
            q = kernel_eval(sp, a, b, method="quadrature")
            c = closed_form_kernel(alpha, a, b)
            assert abs(q - c) < 1e-8 * abs(c)


def test_isometry_examples():
    assert norm_via_isometry(ZenSpace.hardy(), fz.power_exp(1.0, 0.0)) == pytest.approx(1 / math.sqrt(2), rel=1e-10)
    assert norm_via_isometry(ZenSpace.bergman(0), fz.power_exp(1.0, 1.0)) == pytest.approx(0.5, rel=1e-10)
    assert norm_via_isometry(ZenSpace.hardy(), lambda t: 0.0) == 0.0


def test_isometry_divergence_reported():
    with pytest.raises(ConvergenceError):
        norm_via_isometry(ZenSpace.bergman(0), fz.power_exp(1.0, 0.0))


def test_direct_norm_hardy_rational():
    est = zen_norm_direct(ZenSpace.hardy(), fz.rational([1.0], [1.0, 1.0]), eps_sweep=(1.0, 0.1, 1e-3, 1e-6))
    assert est.norm_sq == pytest.approx(0.5, rel=1e-5)
    assert est.monotone
    assert est.trend[0] < est.trend[1]


def test_direct_norm_zero():
    assert zen_norm_direct(ZenSpace.bergman(0), fz.zero()).norm == 0.0


def test_direct_norm_mixed_matches_isometry():
    f = fz.power_exp(1.0, 1.0)
    direct = zen_norm_direct(MIXED, f, eps_sweep=(1e-3, 1e-6)).norm
    assert direct == pytest.approx(norm_via_isometry(MIXED, f), rel=1e-4)


def test_reproducing_property():
    # <F, k_z> = F(z)
    sp = ZenSpace.bergman(0)
    F = fz.rational([1.0], [1.0, 2.0, 1.0])
    z = 0.7 + 0.4j
    v, _ = inner_product_direct(sp, F, fz.kernel_function(sp, z))
    assert abs(v - F(z)) < 1e-6

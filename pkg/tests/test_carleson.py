import math

import numpy as np
import pytest
from scipy import integrate

from zenspace.carleson import (PullbackMeasureSampler, carleson_square_mass, change_of_variables_check,
                               embedding_constant_estimate, pullback_mass)
from zenspace.composition import scaling_norm
from zenspace.errors import ConvergenceError
from zenspace.spaces import ZenSpace
from zenspace.symbols import Identity, Multiplier, Scaling, Sqrt

B0 = ZenSpace.bergman(0.0)


def test_pullback_mass_identity():
    s = PullbackMeasureSampler(B0, Identity(), n=200_000, window=(2.0, 2.0))
    e = pullback_mass(s, (0, 1, -1, 1))
    assert abs(e.estimate - 2 / math.pi) <= 4 * e.stderr


def test_pullback_mass_scaling_preimage():
    s = PullbackMeasureSampler(B0, Scaling(2), n=200_000, window=(2.0, 2.0))
    e = pullback_mass(s, (0, 2, -2, 2))
    assert abs(e.estimate - 2 / math.pi) <= 4 * e.stderr


def test_zero_multiplier_gives_zero():
    s = PullbackMeasureSampler(B0, Identity(), h=Multiplier.constant(0.0), n=10_000, window=(2.0, 2.0))
    assert pullback_mass(s, (0, 1, -1, 1)).estimate == 0.0


def test_empty_preimage_flagged():
    s = PullbackMeasureSampler(B0, Identity(), n=10_000, window=(1.0, 1.0))
    with pytest.raises(ConvergenceError):
        pullback_mass(s, (5, 6, -1, 1))


def test_random_rectangles_reproduce_nu_mass():
    rng = np.random.default_rng(11)
    s = PullbackMeasureSampler(B0, Identity(), n=100_000, window=(4.0, 4.0))
    for _ in range(10):
        x0, x1 = np.sort(rng.uniform(0, 4, 2))
        y0, y1 = np.sort(rng.uniform(-4, 4, 2))
        exact = (x1 - x0) * (y1 - y0) / math.pi
        e = pullback_mass(s, (x0, x1, y0, y1))
        assert abs(e.estimate - exact) <= 3 * e.stderr + 1e-12


def test_determinism():
    a = pullback_mass(PullbackMeasureSampler(B0, Identity(), seed=5, n=30_000, window=(2, 2)), (0, 1, -1, 1))
    b = pullback_mass(PullbackMeasureSampler(B0, Identity(), seed=5, n=30_000, window=(2, 2)), (0, 1, -1, 1))
    assert a == b


def test_change_of_variables_exponential():
    s = PullbackMeasureSampler(B0, Scaling(2), n=200_000, window=(10.0, 10.0))
    r = change_of_variables_check(s, lambda w: np.exp(-w.real))
    exact = 20 / math.pi * (1 - math.exp(-20)) / 2
    assert r.passed
    assert abs(r.rhs.estimate - exact) <= 4 * r.rhs.stderr


def test_change_of_variables_multiplier():
    s = PullbackMeasureSampler(B0, Identity(), h=Multiplier([1.0], [1.0, 1.0]), n=200_000, window=(3.0, 3.0))
    r = change_of_variables_check(s, lambda w: np.ones(w.shape))
    oracle = integrate.dblquad(lambda y, x: 1 / math.pi / ((x + 1) ** 2 + y ** 2), 0, 3, -3, 3)[0]
    assert r.passed
    assert abs(r.rhs.estimate - oracle) <= 4 * r.rhs.stderr


def test_embedding_identity_near_one():
    s = PullbackMeasureSampler(B0, Identity(), n=200_000, window=(20.0, 20.0))
    em = embedding_constant_estimate(s, 0.0, [1.0, 2.0])
    for _, q, se, _ in em.rows:
        assert abs(q - 1.0) <= 4 * se + 0.02


def test_embedding_scaling_against_operator_norm():
    s = PullbackMeasureSampler(B0, Scaling(2), n=200_000, window=(20.0, 20.0))
    em = embedding_constant_estimate(s, 0.0, [1.0, 2.0, 0.5 + 1j])
    bound = scaling_norm(2, B0) ** 2
    assert em.value <= bound + 4 * max(se for _, _, se, _ in em.rows)


def test_embedding_sqrt_exceeds_cap():
    s = PullbackMeasureSampler(B0, Sqrt(), n=50_000)
    em = embedding_constant_estimate(s, 0.0, [1.0, 100.0, 1e4],
                                     windows=lambda z: (4 * abs(z) ** 2, 4 * abs(z) ** 2))
    qs = [q for _, q, _, _ in em.rows]
    assert qs == sorted(qs)
    assert em.exceeded_cap


def test_embedding_rejects_low_alpha():
    s = PullbackMeasureSampler(ZenSpace.bergman(2.0), Identity(), n=1000)
    with pytest.raises(ValueError):
        embedding_constant_estimate(s, -0.9, [1.0])


def test_carleson_square_mass():
    assert carleson_square_mass(ZenSpace.hardy(), 1) == pytest.approx(1 / math.pi)
    assert carleson_square_mass(B0, 1) == pytest.approx(2 / math.pi)
    xs = np.geomspace(0.01, 100, 50)
    m = [carleson_square_mass(B0, x) for x in xs]
    assert np.all(np.diff(m) >= 0)

import math

import numpy as np
import pytest

from zenspace.causality import (CausalMatrix, DiagonalScaling, DiscreteWeight, alpha_prime_lhs,
                                alpha_prime_solve, c_empirical, c_gap, c_min_solve, conjugate_norm_check,
                                dilation_matrix, domination_check, run_trials, spectral_norm, weighted_norm,
                                write_trial_log)
from zenspace.errors import ValidationError
from zenspace.measure import BoundaryMeasure
from zenspace.spaces import ZenSpace


def _lam_max(c):
    return (2 + c * c + math.sqrt((2 + c * c) ** 2 - 4)) / 2


def test_conjugate_example():
    A = CausalMatrix(np.array([[1.0, 0], [1, 1]]))
    na, nc, ok = conjugate_norm_check(A, DiagonalScaling([1, 2]), DiscreteWeight([1, 1]))
    assert na == pytest.approx(math.sqrt(_lam_max(1.0)))
    assert nc == pytest.approx(math.sqrt(_lam_max(0.5)))
    assert ok


def test_identity_and_constant_d():
    n = 5
    w = DiscreteWeight(np.linspace(2, 1, n))
    na, nc, ok = conjugate_norm_check(CausalMatrix(np.eye(n)), DiagonalScaling(np.arange(1, n + 1)), w)
    assert na == pytest.approx(1) and nc == pytest.approx(1) and ok
    A = CausalMatrix(np.tril(np.random.default_rng(1).standard_normal((n, n))))
    na, nc, ok = conjugate_norm_check(A, DiagonalScaling(np.full(n, 3.3)), w)
    assert na == nc and ok


def test_non_causal_rejected():
    with pytest.raises(ValidationError):
        CausalMatrix(np.array([[1.0, 1.0], [0, 1]]))
    with pytest.raises(ValidationError):
        CausalMatrix(np.eye(3), band=1)


def test_scaling_and_weight_validation():
    with pytest.raises(ValidationError):
        DiagonalScaling([2, 1])
    with pytest.raises(ValidationError):
        DiagonalScaling([0, 1])
    with pytest.raises(ValidationError):
        DiscreteWeight([1, 2])


def test_power_iteration_matches_svd():
    rng = np.random.default_rng(2)
    m = np.tril(rng.standard_normal((300, 300)))
    assert spectral_norm(m) == pytest.approx(np.linalg.norm(m, 2), abs=1e-9)


def test_weighted_norm_is_similarity():
    a = np.array([[1.0, 0], [2, 1]])
    w = DiscreteWeight([4.0, 1.0])
    assert weighted_norm(a, w) == pytest.approx(np.linalg.norm(np.array([[1, 0], [1.0, 1]]), 2))


def test_dilation():
    assert np.array_equal(dilation_matrix(1, None, 4).a, np.eye(4))
    m = dilation_matrix(2, None, 4).a
    assert np.all(np.triu(m, 1) == 0)
    i, j = np.nonzero(m)
    assert np.all(np.abs((i + 1) / 2 - (j + 1)) <= 0.5)
    assert np.all(m[i, j] == 0.5)
    with pytest.raises(ValidationError):
        dilation_matrix(0.5, None, 4)
    with pytest.raises(ValueError):
        dilation_matrix(0, None, 4)


def test_dilation_conjugation_inequality():
    sp = ZenSpace.from_measure(BoundaryMeasure(((0.0, 0.2),), ((0.5, 0.0),)))
    w = DiscreteWeight.from_space(sp, 10.0, 64)
    A = dilation_matrix(3.0, w, 64)
    na, nc, ok = conjugate_norm_check(A, DiagonalScaling(np.geomspace(1, 50, 64)), w)
    assert ok


def test_random_suite(tmp_path):
    s = run_trials(200, 64, 0, seed=1)
    assert s.passed == s.trials
    write_trial_log(s, tmp_path / "log.csv")
    lines = (tmp_path / "log.csv").read_text().splitlines()
    assert lines[0] == "trial,n,norm_A,norm_conj,slack" and len(lines) == 201
    s = run_trials(100, 64, 2, seed=1)
    assert s.passed == s.trials


def test_trials_order_independent_of_threads():
    a = run_trials(20, 16, 0, seed=4, threads=1)
    b = run_trials(20, 16, 0, seed=4, threads=4)
    assert a.rows == b.rows


def test_alpha_prime():
    assert alpha_prime_solve(1).value == 0.0
    assert alpha_prime_lhs(1.0, 2) == pytest.approx(1.894, abs=1e-3)
    assert alpha_prime_lhs(2.0, 2) == pytest.approx(0.652, abs=1e-3)
    a2 = alpha_prime_solve(2)
    assert 1 < a2.value < 2
    assert a2.lhs_at <= 1 < a2.lhs_below
    assert a2.monotone
    a8 = alpha_prime_solve(8)
    assert math.isfinite(a8.value) and a8.value > a2.value
    assert a8.value > a8.floor == pytest.approx(math.log(16) - 2)


def test_alpha_prime_monotone_in_R():
    vals = [alpha_prime_solve(R).value for R in (1.5, 2, 4, 8, 16, 64)]
    assert vals == sorted(vals)


def test_c_constants():
    assert c_min_solve(1).c_sufficient == 2.0
    for R in (2, 4, 8):
        c = c_min_solve(R).c_sufficient
        assert c_gap(c, R) >= 0 and c_gap(c * (1 - 1e-6), R) < 0
    assert c_empirical(ZenSpace.hardy()) == pytest.approx(1.0)
    for alpha in (0.0, 1.0):
        assert c_empirical(ZenSpace.bergman(alpha)) == pytest.approx(2 ** (alpha + 1), rel=1e-8)


CORPUS = [
    BoundaryMeasure(((0.0, 1 / (2 * math.pi)),), ()),
    BoundaryMeasure((), ((1 / math.pi, 0.0),)),
    BoundaryMeasure((), ((1 / math.pi, 1.0),)),
    BoundaryMeasure((), ((1 / math.pi, 2.5),)),
    BoundaryMeasure(((0.0, 1 / (2 * math.pi)),), ((1 / math.pi, 0.0),)),
    BoundaryMeasure(((0.0, 1.0), (1.0, 1.0)), ()),
    BoundaryMeasure(((0.0, 0.1), (0.5, 2.0), (3.0, 1.0)), ((0.2, 0.5),)),
]


@pytest.mark.parametrize("m", CORPUS)
def test_c_empirical_below_sufficient(m):
    sp = ZenSpace.from_measure(m)
    cc = c_min_solve(sp.R, sp)
    assert cc.consistent


@pytest.mark.parametrize("m", CORPUS)
def test_domination_spot_check(m):
    sp = ZenSpace.from_measure(m)
    ap = alpha_prime_solve(sp.R).value
    for a in (1.0, 2.0, 5.0):
        rows = domination_check(sp, a, [ap, ap + 0.5, ap + 3])
        assert all(ok for *_, ok in rows)

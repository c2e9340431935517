import math

import numpy as np
import pytest

from zenspace.errors import SpecFormatError, ValidationError
from zenspace.measure import (BoundaryMeasure, bergman_measure, delta2_ratio, hardy_measure, mass_cdf,
                              validate_measure)


def test_hardy_accepted_R_one():
    m, rep = validate_measure(hardy_measure())
    assert rep.satisfied
    assert rep.ratio == 1.0


@pytest.mark.parametrize("alpha", [-0.5, 0.0, 1.0, 2.5])
def test_bergman_ratio(alpha):
    _, rep = validate_measure(bergman_measure(alpha))
    assert rep.ratio == pytest.approx(2 ** (alpha + 1), rel=1e-10)


def test_no_mass_near_zero_rejected_with_witness():
    with pytest.raises(ValidationError) as info:
        validate_measure(BoundaryMeasure(((1.0, 1.0),), ()))
    r = info.value.witness
    m = BoundaryMeasure(((1.0, 1.0),), ())
    assert mass_cdf(m, r) == 0 and mass_cdf(m, 2 * r) > 0


def test_two_atoms_ratio_two():
    rep = delta2_ratio(BoundaryMeasure(((0.0, 1.0), (1.0, 1.0)), ()))
    assert rep.ratio == pytest.approx(2.0, rel=1e-12)
    # brute-force oracle on a fine grid
    m = BoundaryMeasure(((0.0, 1.0), (1.0, 1.0)), ())
    r = np.geomspace(1e-3, 1e3, 20001)
    brute = max(mass_cdf(m, 2 * x) / mass_cdf(m, x) for x in r)
    assert brute == pytest.approx(rep.ratio)


def test_mass_cdf_examples():
    assert mass_cdf(hardy_measure(), 5.0) == pytest.approx(1 / (2 * math.pi))
    assert mass_cdf(bergman_measure(0.0), math.pi) == pytest.approx(1.0)
    assert mass_cdf(BoundaryMeasure(((0.0, 1.0),), ((1.0, 0.0),)), 2.0) == pytest.approx(3.0)


def test_mass_cdf_monotone():
    m = BoundaryMeasure(((0.0, 0.3), (0.5, 1.0), (2.0, 0.1)), ((0.2, 0.5),))
    r = np.geomspace(1e-4, 1e4, 1000)
    c = np.array([mass_cdf(m, x) for x in r])
    assert np.all(np.diff(c) >= 0)


@pytest.mark.parametrize("bad", [
    BoundaryMeasure((), ()),
    BoundaryMeasure((), ((1.0, -1.0),)),
    BoundaryMeasure(((0.0, -1.0),), ()),
    BoundaryMeasure(((0.0, 1.0), (0.0, 2.0)), ()),
])
def test_syntax_rejections(bad):
    with pytest.raises(ValidationError):
        validate_measure(bad)


def test_scaling_invariance_of_R():
    rng = np.random.default_rng(3)
    m = BoundaryMeasure(((0.0, 0.2), (1.5, 0.7)), ((0.4, 0.5),))
    base = delta2_ratio(m).ratio
    for s in rng.uniform(1e-3, 1e3, 10):
        assert delta2_ratio(m.scaled(s)).ratio == pytest.approx(base, rel=1e-10)


def test_ratio_at_least_one():
    for m in (hardy_measure(), bergman_measure(0.3), BoundaryMeasure(((0.0, 1.0), (3.0, 5.0)), ())):
        assert delta2_ratio(m).ratio >= 1.0


def test_json_round_trip():
    m = BoundaryMeasure(((0.0, 0.159154943),), ((0.318309886, 0.0),))
    assert BoundaryMeasure.from_dict(m.to_dict()) == m
    with pytest.raises(SpecFormatError):
        BoundaryMeasure.from_dict({"atoms": [{"r": 0.0}]})
    with pytest.raises(SpecFormatError):
        BoundaryMeasure.from_dict({"atoms": [{"r": "zero", "mass": 1}]})

import math

import numpy as np
import pytest
from scipy import integrate

from padic_charsums.smooth_weights import (
    DEFAULT_WEIGHT,
    ProductShift,
    ScaledBump,
    bump_eval,
    decay_constant,
    fourier_cutoff,
    fourier_transform,
    fourier_transform_many,
    mass,
)


def quad_transform(w, y):
    lo, hi = w.support
    re = integrate.quad(lambda x: float(w(x)) * math.cos(2 * math.pi * x * y), lo, hi, limit=400, epsabs=1e-14)[0]
    im = integrate.quad(lambda x: -float(w(x)) * math.sin(2 * math.pi * x * y), lo, hi, limit=400, epsabs=1e-14)[0]
    return complex(re, im)


def test_bump_values():
    assert bump_eval(0.0) == pytest.approx(math.exp(-1))
    assert bump_eval(1.0) == 0.0 and bump_eval(-1.5) == 0.0
    assert np.all(bump_eval(np.array([-1, 1, 2])) == 0)


def test_mass():
    assert mass(DEFAULT_WEIGHT) == pytest.approx(0.44399381616808, abs=1e-13)


@pytest.mark.parametrize("w", [DEFAULT_WEIGHT, ScaledBump(0.4, 0.3, 2.0), ProductShift(DEFAULT_WEIGHT, 0.5)])
@pytest.mark.parametrize("y", [0.0, 0.7, 3.2, 11.0])
def test_transform_matches_quad(w, y):
    ev = fourier_transform(w, y)
    assert abs(ev.value - quad_transform(w, y)) < 1e-10
    assert ev.abs_error <= 1e-13


def test_conjugate_symmetry():
    w = ScaledBump(0.5, -0.2)
    ys = np.array([0.3, 1.7, 6.0])
    a, _ = fourier_transform_many(w, ys)
    b, _ = fourier_transform_many(w, -ys)
    assert np.allclose(a, np.conj(b), atol=1e-14)


def test_product_shift_support():
    w = DEFAULT_WEIGHT.shifted(0.5)
    assert w.support == (-1.0, 0.5)
    assert DEFAULT_WEIGHT.shifted(3).support == (0.0, 0.0)
    assert w.sup == pytest.approx(math.exp(-2))


def test_scaled_bump_validation():
    with pytest.raises(ValueError):
        ScaledBump(0.8, 0.5)


def test_cutoff_and_decay():
    cut = fourier_cutoff(DEFAULT_WEIGHT, 1e-12)
    assert 60 < cut < 120
    ys, = [np.linspace(cut, 2 * cut, 50)]
    vals, _ = fourier_transform_many(DEFAULT_WEIGHT, ys)
    assert np.max(np.abs(vals)) < 1e-12
    # regression baseline for the power-3 decay constant
    assert decay_constant(DEFAULT_WEIGHT, 3, ymax=1e3, points=60) == pytest.approx(0.3837, rel=0.02)

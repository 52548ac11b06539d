import cmath
import random

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from padic_charsums.exceptions import DegenerateDenominator, DenominatorVanishes, HypothesisViolated
from padic_charsums.expsums import (
    IntPolynomial,
    RationalFunc,
    clz_bound,
    clz_check,
    complete_sum,
    complete_sums_multi,
    critical_points,
    ord_p_poly,
    ord_p_rat,
    root_multiplicity,
    twisted_complete_sums,
)

X = sympy.Symbol("x")


def sum_oracle(num, den, p, m, alpha):
    q = p**m
    tot = 0j
    for n in range(alpha % p, q, p):
        a = sum(c * n**i for i, c in enumerate(num))
        b = sum(c * n**i for i, c in enumerate(den))
        tot += cmath.exp(2j * cmath.pi * (a * pow(b, -1, q) % q) / q)
    return tot


def mult_oracle(coeffs, alpha, p):
    """Multiplicity of (x - alpha) in the factorisation over GF(p)."""
    poly = sympy.Poly(list(reversed(coeffs)), X, modulus=p)
    if poly.is_zero:
        raise ValueError
    for fac, e in poly.factor_list()[1]:
        if fac.degree() == 1 and fac.eval(alpha) % p == 0:
            return e
    return 0


def test_poly_basics():
    f = IntPolynomial((1, 2, 3))
    assert f(2) == 17
    assert f.deriv() == IntPolynomial((2, 6))
    assert (f * f).degree == 4
    assert IntPolynomial((0, 0)).is_zero
    assert f.compose_linear(1, 1)(0) == f(1)
    assert np.array_equal(f.eval_array(np.arange(5), 7), [f(i) % 7 for i in range(5)])


def test_orders():
    assert ord_p_poly(IntPolynomial((25, 50, 125)), 5) == 2
    assert ord_p_poly(IntPolynomial(()), 5) == float("inf")
    assert ord_p_rat(RationalFunc.from_coeffs([0, 25], [5]), 5) == 1


def test_equality_case_x_squared():
    f = RationalFunc.from_coeffs([0, 0, 1])
    s = complete_sum(f, 5, 2, 0)
    assert abs(s - 5) < 1e-12
    assert abs(complete_sum(f, 5, 2, 1)) < 1e-12
    r = clz_check(f, 5, 2, 0)
    assert r.nu == 1 and r.bound == pytest.approx(5.0) and r.passed


def test_cubic_p7():
    f = RationalFunc.from_coeffs([0, 0, 0, 1])
    r = clz_check(f, 7, 3, 0)
    assert r.abs_sum == pytest.approx(49) and r.bound == pytest.approx(98)


def test_hypothesis_violated():
    f = RationalFunc.from_coeffs([0, 5])
    with pytest.raises(HypothesisViolated):
        clz_check(f, 5, 2, 0)


def test_degenerate_denominator():
    with pytest.raises(DegenerateDenominator):
        critical_points(RationalFunc.from_coeffs([1, 1], [5, 10]), 5)
    with pytest.raises(DenominatorVanishes):
        complete_sum(RationalFunc.from_coeffs([0, 1], [-1, 1]), 5, 2, 1)


@pytest.mark.parametrize("seed", range(6))
def test_complete_sums_against_loop(seed):
    rng = random.Random(seed)
    p = [5, 7, 11][seed % 3]
    num = [rng.randint(-50, 50) for _ in range(4)]
    while True:
        den = [rng.randint(-20, 20) for _ in range(3)]
        if any(c % p for c in den):
            break
    f = RationalFunc.from_coeffs(num, den)
    multi = complete_sums_multi(f, p, [1, 2, 3])
    for m in (1, 2, 3):
        for a, s in multi[m].items():
            assert abs(s - sum_oracle(num, den, p, m, a)) < 1e-8


def test_twisted_sums_match_direct():
    f = RationalFunc.from_coeffs([3, 1, 0, 2], [1, 5])
    p, m = 5, 3
    S = twisted_complete_sums(f, p, m)
    for t in (0, 1, 7, 124):
        g = f.add_linear(t)
        direct = sum(complete_sum(g, p, m, a) for a in range(p))
        assert abs(S[t] - direct) < 1e-8


@settings(max_examples=150, deadline=None)
@given(st.lists(st.integers(-30, 30), min_size=1, max_size=6), st.sampled_from([3, 5, 7]), st.integers(0, 6))
def test_root_multiplicity_vs_factorisation(coeffs, p, alpha):
    if all(c % p == 0 for c in coeffs):
        return
    alpha %= p
    assert root_multiplicity(coeffs, alpha, p) == mult_oracle(coeffs, alpha, p)


def test_critical_points_known():
    # f = (x - 1)^3 -> f' = 3 (x - 1)^2, double critical point at 1
    f = RationalFunc.from_coeffs([-1, 3, -3, 1])
    t, pts = critical_points(f, 5)
    assert t == 0 and [(c.alpha, c.nu) for c in pts] == [(1, 2)]
    # p^2 scaled: t = 2
    t, _ = critical_points(RationalFunc.from_coeffs([0, 0, 25]), 5)
    assert t == 2


def test_bound_formula():
    assert clz_bound(0, 0, 3, 5) == 0
    assert clz_bound(2, 1, 4, 5) == pytest.approx(2 * 5 ** (1 / 3) * 5 ** (4 * 2 / 3))

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from padic_charsums.exceptions import DomainError, NotInvertible, NonResidue
from padic_charsums.padic_core import (
    PAdicInt,
    hensel_sqrt,
    inv_mod,
    log1p_series,
    ord_p_int,
    padic_log,
    sqrt_mod_p,
)


def log_oracle(x, p, n, terms=None):
    """log(1+x) mod p^n from the raw rational series, each term p-integral."""
    terms = terms or 4 * n + 10
    s = Fraction(0)
    for m in range(1, terms):
        s += Fraction((-1) ** (m + 1) * x**m, m)
    q = p**n
    return s.numerator * pow(s.denominator, -1, q) % q


def test_ord_p():
    assert ord_p_int(250, 5) == 3
    assert ord_p_int(-7, 7) == 1
    assert ord_p_int(3, 5) == 0
    assert ord_p_int(0, 5) == float("inf")


def test_inverses():
    assert inv_mod(2, 625) == 313
    assert inv_mod(3, 625) == 417
    with pytest.raises(NotInvertible):
        inv_mod(5, 625)


@pytest.mark.parametrize("p,n", [(5, 4), (7, 3), (11, 3), (3, 6)])
def test_log_matches_rational_series(p, n):
    for t in range(0, 40):
        x = p * t
        assert log1p_series(x, p, n) == log_oracle(x, p, n)


def test_log_known_value():
    # log_5(6) mod 625
    assert log1p_series(5, 5, 4) == 555
    assert padic_log(PAdicInt(5, 4, 36)) == PAdicInt(5, 4, 485)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**6), st.integers(0, 10**6), st.sampled_from([5, 7, 11]))
def test_log_is_additive(a, b, p):
    n = 6
    x, y = PAdicInt(p, n, 1 + p * a), PAdicInt(p, n, 1 + p * b)
    assert padic_log(x * y) == padic_log(x) + padic_log(y)


def test_log_domain():
    with pytest.raises(DomainError):
        padic_log(PAdicInt(5, 3, 2))


def test_padic_int_arith():
    a = PAdicInt(5, 3, 7)
    assert int(a * a.inverse()) == 1
    assert (a - 7).valuation() == float("inf")
    assert PAdicInt(5, 3, 50).valuation() == 2
    assert not PAdicInt(5, 3, 50).is_unit()
    with pytest.raises((TypeError, ValueError)):
        a + PAdicInt(7, 3, 1)


@pytest.mark.parametrize("a,p,n,expect", [(24, 5, 2, 7), (4, 5, 2, 2)])
def test_hensel_examples(a, p, n, expect):
    assert hensel_sqrt(a, p, n) == expect


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 10**9), st.sampled_from([5, 7, 11, 13]), st.integers(1, 12))
def test_hensel_roots(x, p, n):
    if x % p == 0:
        return
    a = x * x % p**n
    r = hensel_sqrt(a, p, n)
    assert (r * r - a) % p**n == 0
    assert r % p == sqrt_mod_p(a % p, p)


def test_non_residue():
    with pytest.raises(NonResidue):
        sqrt_mod_p(2, 5)

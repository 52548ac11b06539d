from fractions import Fraction as F

import pytest

from padic_charsums.bounds import (
    CSV_HEADER,
    SweepRecord,
    choose_H,
    default_grids,
    exponents,
    fit_slope,
    hb_exponents,
    log_grid,
    records_csv,
    supersede_ranges,
    sweep_main_bound,
    trivial_bound,
)
from padic_charsums.charsum_pipeline import QuadraticForm
from padic_charsums.exceptions import BadForm, Infeasible


def test_exponents_34():
    e = exponents(3, 4)
    assert (e.rho1, e.sigma, e.rho2) == (F(1, 5), F(12, 17), F(3, 34))
    assert (e.one_lo, e.one_hi, e.two_lo, e.crossover) == (F(2, 5), F(7, 10), F(3, 10), F(19, 35))
    assert e.two_N_exponent == F(29, 17)


def test_exponents_33_and_22():
    e = exponents(3, 3)
    assert (e.sigma, e.rho2, e.crossover, e.two_lo) == (F(17, 24), F(1, 12), F(14, 25), F(2, 7))
    assert e.two_N_exponent == F(41, 24)
    e = exponents(2, 2)
    assert (e.rho1, e.sigma, e.rho2) == (F(1, 6), F(5, 7), F(1, 14))


def test_hb():
    assert hb_exponents(3).optimal_lo == F(13, 24)
    assert hb_exponents(17).optimal_lo == F(47, 153)
    assert hb_exponents(25).optimal_lo == F(94, 325)
    with pytest.raises(ValueError):
        hb_exponents(2)


def test_supersede():
    assert supersede_ranges(3, 4) == {"first": [3, 4, 5], "second": list(range(4, 18))}
    assert supersede_ranges(3, 3)["second"] == list(range(4, 26))


def test_choose_H():
    h = choose_H("one-shift", 5**6, 5**10, 3, 5)
    assert h.H1 == 5**4
    with pytest.raises(Infeasible):
        choose_H("one-shift", 100, 5**10, 3, 5)
    # windows of width p hold exactly one power of p
    with pytest.raises(Infeasible):
        choose_H("two-shift", 3000, 5**12, 4, 5)  # H1 = 3125 overshoots
    for X in (700, 20000, 5**7 + 3):
        h = choose_H("two-shift", X, 5**12, 4, 5)
        x = float(X)
        L1 = x ** (7 / 17) * 5 ** (12 * 3 / 17)
        L2 = x ** (-3 / 17) * 5 ** (12 * 6 / 17)
        assert L1 <= h.H1 * (1 + 1e-12) and h.H1 < 5 * L1
        assert L2 <= h.H2 * (1 + 1e-12) and h.H2 < 5 * L2


def test_log_grid():
    g = log_grid(10, 1000, 3)
    assert g == [10, 100, 1000]
    assert log_grid(5, 6, 0) == []
    assert len(default_grids()["one-shift"]) == 12


def test_small_sweep_sane():
    recs = sweep_main_bound(5, 4, QuadraticForm(1, 1, 3), 1, [10, 20, 40], "one-shift")
    assert all(r.abs_sum <= trivial_bound(r.N) for r in recs)
    assert all(r.ratio > 0 for r in recs)
    assert records_csv(recs).splitlines()[0] == ",".join(CSV_HEADER)
    assert records_csv(recs) == records_csv(sweep_main_bound(5, 4, QuadraticForm(1, 1, 3), 1, [10, 20, 40], "one-shift"))


def test_bad_form_rejected():
    with pytest.raises(BadForm):
        sweep_main_bound(5, 4, QuadraticForm(1, 1, 5), 1, [10], "one-shift")


def test_slope_fit():
    recs = [SweepRecord(5, 4, 1, 1, 3, 1, n, n, "x", 2.0 * n**1.5, 1.0, 1.0, 0.0) for n in (10, 30, 90)]
    assert fit_slope(recs) == pytest.approx(1.5)

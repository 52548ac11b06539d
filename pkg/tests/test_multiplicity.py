import random

import pytest
import sympy as sp

from padic_charsums.exceptions import ClaimViolated, ParamViolation
from padic_charsums.multiplicity import (
    AuditParams,
    audit_case1,
    audit_case2,
    build_R1,
    build_R2,
    c_coeffs,
    d_coeffs,
    fprime_link_check,
    legendre_3_check,
    legendre_symbol,
    sweep,
)

p, a0, g1, g2, v, beta, t, r = sp.symbols("p a0 g1 g2 v beta t r")
T = v + p * r


def test_c_table_symbolic():
    P1 = sp.expand(2 * g1 * a0 * p**2 * (beta - T**2) + t * (beta + T**2) ** 2)
    table = c_coeffs(p, a0 * g1, v, beta, t)
    for i in range(5):
        assert sp.expand(P1.coeff(r, i) - table[i]) == 0


def test_d_table_symbolic_and_printed_delta():
    G = a0 * g1 * g2
    R2 = -4 * G * p**3 * T * (3 * beta - T**2) / (beta + T**2) ** 3 + t
    P2 = sp.expand(sp.cancel(R2 * (beta + T**2) ** 3))
    ours = d_coeffs(p, G, v, beta, t)
    printed = d_coeffs(p, G, v, beta, t, printed=True)
    for i in range(7):
        assert sp.expand(P2.coeff(r, i) - ours[i]) == 0
    # only the constant term of the printed table differs, by 2 t u^3
    assert sp.expand(ours[0] - printed[0] - 2 * t * (beta + v**2) ** 3) == 0
    assert all(sp.expand(ours[i] - printed[i]) == 0 for i in range(1, 7))


def test_example_c1():
    P = AuditParams(5, 2, 1, 1, 1, 1, t1=1)
    assert build_R1(P).num[1] == -960
    res = audit_case1(P)
    assert res.coeff_ords[1] == 1 and res.m <= 1


def test_t_zero_tables():
    R1 = build_R1(AuditParams(5, 2, 3, 1, 2, 2, t1=0))
    assert R1.num[3] == 0 and R1.num[4] == 0
    R2 = build_R2(AuditParams(5, 2, 3, 4, 2, 2, t2=0))
    assert R2.num[4] == R2.num[5] == R2.num[6] == 0
    assert R2.num[3] == 4 * 5**6 * 2 * 3 * 4


def test_d5_valuation_pattern():
    for j in range(4):
        R2 = build_R2(AuditParams(5, 2, 1, 1, 3, 2, t2=2 * 5**j))
        # d5 = 6 p^5 t2 v with p not dividing 6 v
        assert sp.multiplicity(5, R2.num[5]) == 5 + j


def test_seeded_table_draws():
    rng = random.Random(0)
    for _ in range(1000):
        pp = rng.choice([5, 7, 11, 13])
        units = lambda: rng.choice([x for x in range(1, pp**2) if x % pp])  # noqa: E731
        vv = units()
        bb = rng.randrange(pp**3)
        if (bb + vv * vv) % pp == 0:
            continue
        P = AuditParams(pp, units(), units(), units(), vv, bb, rng.randrange(-pp**4, pp**4), rng.randrange(-pp**4, pp**4))
        build_R1(P)
        build_R2(P)  # raise on table mismatch


def test_case_examples():
    P = AuditParams(5, 2, 1, 1, 1, 1, t1=5**3)
    res = audit_case1(P)
    assert res.case == "1.2" and res.coeff_ords[1] == 3 and res.coeff_ords[1] < min(res.coeff_ords[2:])
    res = audit_case2(AuditParams(7, 3, 1, 2, 2, 5, t2=4))
    assert res.case == "2.1" and res.m == 0 and res.degree == 0


def test_invalid_params():
    with pytest.raises(ParamViolation):
        build_R1(AuditParams(5, 5, 1, 1, 1, 1))
    with pytest.raises(ParamViolation):
        build_R1(AuditParams(5, 1, 1, 1, 2, 1))  # u = 5


def test_legendre():
    assert legendre_symbol(3, 7) == -1 and legendre_symbol(3, 11) == 1 and legendre_symbol(3, 13) == 1
    for q in (5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43):
        assert legendre_3_check(q)


def test_sweep_p5_small():
    rep = sweep(5, max_val=6)
    assert not rep["violations"]
    assert rep["max"]["m1"] <= 2 and rep["max"]["omega1"] <= 5
    assert rep["max"]["m2"] <= 2 and rep["max"]["omega2"] <= 8
    # case 1.3 never gives a cubic, 2.3 never a quartic or quintic
    assert rep["cases"]["1.3"]["max_degree"] <= 2
    assert rep["cases"]["2.3"]["max_degree"] <= 3


def test_claim_violation_reports_params(monkeypatch):
    import padic_charsums.multiplicity as mm

    monkeypatch.setitem(mm._CASE1, "1.3", (0, 0, 0))
    with pytest.raises(ClaimViolated) as ei:
        audit_case1(AuditParams(5, 2, 1, 1, 1, 1, t1=25))
    assert ei.value.params["t1"] == 25


def test_fprime_link():
    assert fprime_link_check(5, 16, 2, 1, 1, 6, g1=1, t=5**2, order=1) >= 6
    assert fprime_link_check(5, 24, 3, 2, 2, 9, g1=2, g2=3, t=5**3, order=2, samples=40) >= 9

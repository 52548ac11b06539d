"""Orders and critical-point multiplicities of the model phase derivatives.

With T(r) = v + p r and u = beta + v^2 (a unit mod p):

    R1(r) = 2 g1 a0 p^2 (beta - T^2) / (beta + T^2)^2 + t1
    R2(r) = -4 g1 g2 a0 p^3 T (3 beta - T^2) / (beta + T^2)^3 + t2

so R_i = P_i / Q_i with Q_i a power of beta + T^2.  Since Q_i(r) = u^k is a
unit mod p for every r, omega_i = ord_p(P_i), and m_i is the largest
multiplicity of a root mod p of P_i / p^omega_i.

The case claims checked here (indexed by ord_p(t_i)):

    1.1  ord t1 <= 1   m1 <= 1, omega1 <= 2
    1.2  ord t1 >= 3   m1 <= 1, omega1 <= 3
    1.3  ord t1 == 2   m1 <= 2, omega1 <= 5, reduced P1 never cubic
    2.1  ord t2 <= 2   m2 == 0, omega2 <= 2
    2.2  ord t2 >= 4   m2 <= 2, omega2 <= 5
    2.3  ord t2 == 3   m2 <= 3, omega2 <= 8, reduced P2 never quartic/quintic

plus m2 <= 2 whenever p = +-5 mod 12, i.e. (3|p) = -1.
"""

from __future__ import annotations

import itertools
import json
import math
import random
from fractions import Fraction
from collections import Counter
from dataclasses import asdict, dataclass, field

from .exceptions import ClaimViolated, ParamViolation
from .expsums import IntPolynomial, RationalFunc, root_multiplicity
from .padic_core import INF, ord_p_int


@dataclass(frozen=True)
class AuditParams:
    p: int
    a0: int
    g1: int
    g2: int
    v: int
    beta: int
    t1: int = 0
    t2: int = 0

    @property
    def u(self) -> int:
        return self.beta + self.v * self.v

    def validate(self) -> None:
        p = self.p
        if p <= 3:
            raise ParamViolation("p must be a prime > 3")
        if (self.a0 * self.g1 * self.g2 * self.u * self.v) % p == 0:
            raise ParamViolation(f"a0 g1 g2 u v must be coprime to p: {self}")

    def T(self) -> IntPolynomial:
        return IntPolynomial((self.v, self.p))


@dataclass
class AuditResult:
    case: str
    omega: float
    m: int
    degree: int  # degree of P / p^omega modulo p
    coeff_ords: list = field(default_factory=list)


# printed coefficient tables, as functions of the parameters


def c_coeffs(p, a0g1, v, beta, t1) -> list[int]:
    u = beta + v * v
    return [
        2 * p**2 * a0g1 * (beta - v * v) + t1 * u * u,
        4 * p * (-(p**2) * a0g1 * v + u * v * t1),
        2 * p**2 * (-(p**2) * a0g1 + beta * t1 + 3 * t1 * v * v),
        4 * p**3 * t1 * v,
        p**4 * t1,
    ]


def d_coeffs(p, G, v, beta, t2, printed: bool = False) -> list[int]:
    """d_0..d_6 for P2 with G = a0 g1 g2.

    d_1..d_6 agree with the printed table.  The expansion gives
    d_0 = 4 p^3 G v (v^2 - 3 beta) + t2 u^3; printed=True returns the
    printed variant with -t2 u^3 instead.
    """
    u = beta + v * v
    s = -1 if printed else 1
    return [
        4 * p**3 * G * v * (v * v - 3 * beta) + s * t2 * u**3,
        6 * p * (beta**2 * t2 * v + 2 * beta * t2 * v**3 + t2 * v**5 + 2 * p**3 * G * (v * v - beta)),
        3 * p**2 * (beta**2 * t2 + 6 * beta * t2 * v * v + 5 * t2 * v**4 + 4 * p**3 * G * v),
        4 * p**3 * (p**3 * G + 3 * beta * t2 * v + 5 * t2 * v**3),
        3 * p**4 * (5 * v * v + beta) * t2,
        6 * p**5 * t2 * v,
        p**6 * t2,
    ]


def build_R1(params: AuditParams, certify: bool = True) -> RationalFunc:
    params.validate()
    p, T, b = params.p, params.T(), params.beta
    S = T * T + b
    P = (IntPolynomial((b,)) - T * T) * (2 * params.g1 * params.a0 * p * p) + S * S * params.t1
    if certify:
        table = c_coeffs(p, params.a0 * params.g1, params.v, b, params.t1)
        if P != IntPolynomial(tuple(table)):
            raise ClaimViolated("P1 expansion disagrees with the coefficient table", asdict(params))
    return RationalFunc(P, S * S)


def build_R2(params: AuditParams, certify: bool = True) -> RationalFunc:
    params.validate()
    p, T, b = params.p, params.T(), params.beta
    S = T * T + b
    G = params.a0 * params.g1 * params.g2
    P = T * (IntPolynomial((3 * b,)) - T * T) * (-4 * G * p**3) + S * S * S * params.t2
    if certify:
        table = d_coeffs(p, G, params.v, b, params.t2)
        if P != IntPolynomial(tuple(table)):
            raise ClaimViolated("P2 expansion disagrees with the coefficient table", asdict(params))
    return RationalFunc(P, S * S * S)


def reduced_profile(coeffs, p: int):
    """(omega, reduced coefficients mod p, degree mod p, max root multiplicity)."""
    ords = [ord_p_int(c, p) for c in coeffs]
    omega = min(ords)
    if omega == INF:
        raise ParamViolation("numerator vanishes identically")
    pw = p ** int(omega)
    red = [(c // pw) % p for c in coeffs]
    deg = max(i for i, c in enumerate(red) if c)
    m = 0
    if deg > 0:
        for alpha in range(p):
            m = max(m, root_multiplicity(red, alpha, p))
    return int(omega), red, deg, m, ords


def case1_label(p, t1) -> str:
    j = ord_p_int(t1, p)
    return "1.1" if j <= 1 else ("1.3" if j == 2 else "1.2")


def case2_label(p, t2) -> str:
    j = ord_p_int(t2, p)
    return "2.1" if j <= 2 else ("2.3" if j == 3 else "2.2")


_CASE1 = {"1.1": (1, 2, None), "1.2": (1, 3, None), "1.3": (2, 5, 2)}
_CASE2 = {"2.1": (0, 2, None), "2.2": (2, 5, None), "2.3": (3, 8, 3)}


def _check(label, omega, m, deg, limits, params, extra_m=None):
    m_max, om_max, deg_max = limits
    if extra_m is not None:
        m_max = min(m_max, extra_m)
    bad = []
    if m > m_max:
        bad.append(f"m = {m} > {m_max}")
    if omega > om_max:
        bad.append(f"omega = {omega} > {om_max}")
    if deg_max is not None and deg > deg_max:
        bad.append(f"reduced degree {deg} > {deg_max}")
    if bad:
        raise ClaimViolated(f"case {label}: " + ", ".join(bad), params)


def _audit1_raw(p, a0g1, v, beta, t1):
    label = case1_label(p, t1)
    omega, _, deg, m, ords = reduced_profile(c_coeffs(p, a0g1, v, beta, t1), p)
    _check(label, omega, m, deg, _CASE1[label], dict(p=p, a0g1=a0g1, v=v, beta=beta, t1=t1))
    return AuditResult(label, omega, m, deg, ords)


def _audit2_raw(p, G, v, beta, t2, refine: bool):
    label = case2_label(p, t2)
    omega, _, deg, m, ords = reduced_profile(d_coeffs(p, G, v, beta, t2), p)
    _check(label, omega, m, deg, _CASE2[label], dict(p=p, a0g1g2=G, v=v, beta=beta, t2=t2), 2 if refine else None)
    return AuditResult(label, omega, m, deg, ords)


def audit_case1(params: AuditParams) -> AuditResult:
    params.validate()
    return _audit1_raw(params.p, params.a0 * params.g1, params.v, params.beta, params.t1)


def audit_case2(params: AuditParams, refine: bool | None = None) -> AuditResult:
    """refine defaults to (3|p) = -1, where m2 <= 2 is also asserted."""
    params.validate()
    if refine is None:
        refine = legendre_3_check(params.p) and params.p % 12 in (5, 7)
    return _audit2_raw(params.p, params.a0 * params.g1 * params.g2, params.v, params.beta, params.t2, refine)


def legendre_symbol(a: int, p: int) -> int:
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def legendre_3_check(p: int) -> bool:
    """(3|p) = -1 exactly when p = +-5 mod 12."""
    if p <= 3:
        raise ValueError("p must be a prime > 3")
    neg = legendre_symbol(3, p) == -1
    if neg != (p % 12 in (5, 7)):
        raise ClaimViolated(f"(3|{p}) disagrees with p mod 12", {"p": p})
    return True


# ------------------------------------------------------------ sweeps


def _products(p: int, k: int) -> Counter:
    """Integer products of k units in [1, p) with their multiplicities.

    The coefficient tables only involve a0 g1 (resp. a0 g1 g2), so each
    distinct product is audited once and weighted by its count.
    """
    units = range(1, p)
    return Counter(math.prod(c) for c in itertools.product(units, repeat=k))


def sweep(p: int, max_val: int = 6, assert_refinement: bool | None = None, beta_mod: int | None = None) -> dict:
    """Exhaustive audit over v, a0, g1, g2 units mod p, beta mod p^2 with
    p not | u, t = p^j * unit for j = 0..max_val.  Returns a JSON-ready report."""
    if assert_refinement is None:
        assert_refinement = p % 12 in (5, 7)
    legendre_3_check(p)
    beta_mod = beta_mod or p * p
    prod2, prod3 = _products(p, 2), _products(p, 3)
    ts = [p**j * e for j in range(max_val + 1) for e in range(1, p)]
    rep = {
        "p": p,
        "refinement_asserted": bool(assert_refinement),
        "tuples": {"case1": 0, "case2": 0},
        "cases": {},
        "max": {"m1": 0, "omega1": 0, "m2": 0, "omega2": 0},
        "m2_equals_3": 0,
        "violations": [],
    }

    def note(label, res, weight):
        c = rep["cases"].setdefault(label, {"count": 0, "max_m": 0, "max_omega": 0, "max_degree": 0})
        c["count"] += weight
        c["max_m"] = max(c["max_m"], res.m)
        c["max_omega"] = max(c["max_omega"], res.omega)
        c["max_degree"] = max(c["max_degree"], res.degree)

    for v in range(1, p):
        for beta in range(beta_mod):
            if (beta + v * v) % p == 0:
                continue
            for t in ts:
                for G, w in prod2.items():
                    try:
                        res = _audit1_raw(p, G, v, beta, t)
                    except ClaimViolated as exc:
                        rep["violations"].append({"claim": str(exc), "params": exc.params})
                        continue
                    note(res.case, res, w)
                    rep["tuples"]["case1"] += w
                    rep["max"]["m1"] = max(rep["max"]["m1"], res.m)
                    rep["max"]["omega1"] = max(rep["max"]["omega1"], res.omega)
                for G, w in prod3.items():
                    try:
                        res = _audit2_raw(p, G, v, beta, t, assert_refinement)
                    except ClaimViolated as exc:
                        rep["violations"].append({"claim": str(exc), "params": exc.params})
                        continue
                    note(res.case, res, w)
                    rep["tuples"]["case2"] += w
                    rep["max"]["m2"] = max(rep["max"]["m2"], res.m)
                    rep["max"]["omega2"] = max(rep["max"]["omega2"], res.omega)
                    if res.m == 3:
                        rep["m2_equals_3"] += w
    rep["cases"] = dict(sorted(rep["cases"].items()))
    return rep


def report_json(reports) -> str:
    return json.dumps(reports, indent=2, sort_keys=True)


# ------------------------------------------------------------ link to F_i'


def fprime_link_check(p: int, n: int, a0: int, v: int, beta: int, k: int, g1: int = 1, g2: int = 1,
                      t: int = 0, order: int = 1, samples: int = 100, seed: int = 0) -> int:
    """ord_p(F_i'(r) - R_i(r)) >= k on sampled r, computed mod p^n.

    Here F_1(r) = f_1(r) + t r with f_1 built from the exact Taylor
    expansion (shift exponents k1 = k) and F_1' its derivative, i.e.
    g1 (F'' + p^k G~') + t in the model variable.  Returns the minimum
    observed valuation (n when the difference vanishes mod p^n).
    """
    from .charsum_pipeline import F_derivative, PipelineState, taylor_G1, taylor_G2

    q = p**n
    u = beta + v * v
    state = PipelineState(None, beta, u, v, a0, Fraction(0), Fraction(1), p, n)
    rng = random.Random(seed)
    # F_1'(r) = d/dr g1 (F'(r) + p^k G_{h1}(r)) and its model R_1
    if order == 1:
        G = taylor_G1(state, k, g1)
        Fi = (F_derivative(state, 2) + G.derivative().scale(p**k)).scale(g1)
        R = build_R1(AuditParams(p, a0, g1, g2, v, beta, t1=t), certify=False)
    else:
        G = taylor_G2(state, k, k, g1, g2)
        Fi = (F_derivative(state, 3) + G.derivative().scale(p**k)).scale(g1 * g2)
        R = build_R2(AuditParams(p, a0, g1, g2, v, beta, t2=t), certify=False)
    Fi = Fi + RationalFunc(IntPolynomial((t,)), IntPolynomial((1,)))
    worst = n
    for _ in range(samples):
        r = rng.randrange(q)
        diff = (Fi.eval_mod(r, q) - R.eval_mod(r, q)) % q
        o = n if diff == 0 else ord_p_int(diff, p)
        worst = min(worst, o)
    if worst < k:
        raise ClaimViolated(f"ord(F' - R) = {worst} < {k}", dict(p=p, n=n, a0=a0, v=v, beta=beta, k=k))
    return worst

"""Exponent bookkeeping for the two estimates, shift-size choice, and the
empirical sweep of |S_Q| against N at desk scale.

All exponents are exact ``Fraction``s.  The sweep cannot test an inequality
with an unknown implied constant, so it records |S_Q| / bound ratios and the
growth rate of |S_Q| in N instead.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np

from .characters import char_construct
from .charsum_pipeline import QuadraticForm, SumParams, sum_SQ
from .exceptions import Infeasible
from .smooth_weights import DEFAULT_WEIGHT

F = Fraction

CSV_HEADER = ["p", "n", "Q_a", "Q_b", "Q_c", "chi_index", "M", "N", "branch", "abs_sum", "bound", "ratio", "seconds"]


@dataclass(frozen=True)
class ExponentSet:
    j1: int
    j2: int
    rho1: Fraction  # q-exponent, one shift
    sigma: Fraction  # N-exponent paired with M (two shifts)
    rho2: Fraction  # q-exponent, two shifts
    one_lo: Fraction
    one_hi: Fraction
    two_lo: Fraction
    two_hi: Fraction
    crossover: Fraction

    @property
    def two_N_exponent(self) -> Fraction:
        """N-exponent of the two-shift bound when M = N: 1 + sigma."""
        return 1 + self.sigma


def exponents(j1: int, j2: int) -> ExponentSet:
    if j1 < 2 or j2 < 2:
        raise ValueError("j1, j2 must be at least 2")
    return ExponentSet(
        j1,
        j2,
        rho1=F(j1 - 1, 2 * (2 * j1 - 1)),
        sigma=F(7 * j2 - 4, 2 * (5 * j2 - 3)),
        rho2=F(j2 - 1, 2 * (5 * j2 - 3)),
        one_lo=F(j1 - 1, 2 * j1 - 1),
        one_hi=F(3 * j1 - 2, 2 * (2 * j1 - 1)),
        two_lo=F(j2 - 1, 3 * j2 - 2),
        two_hi=F(2, 3),
        crossover=F(3 * j1 * j2 - j1 - 4 * j2 + 2, (2 * j1 - 1) * (2 * j2 - 1)),
    )


@dataclass(frozen=True)
class HBExponents:
    r: int
    N_exponent: Fraction
    q_exponent: Fraction
    valid_lo: Fraction
    valid_hi: Fraction
    optimal_lo: Fraction
    optimal_hi: Fraction


def hb_exponents(r: int) -> HBExponents:
    """The comparison bound N^(2-1/r) q^((r+2)/(4r^2)) for squarefree moduli."""
    if r < 3:
        raise ValueError("r must be at least 3")
    return HBExponents(
        r,
        2 - F(1, r),
        F(r + 2, 4 * r * r),
        F(1, 4) + F(1, 2 * r),
        F(5, 12) + F(1, 2 * r),
        F(r * r + 5 * r + 2, 4 * (r * r + r)),
        F(r * r + 3 * r - 2, 4 * (r * r - r)),
    )


def first_branch_threshold(j1: int, r: int) -> Fraction:
    """N >= q^this makes N^(3/2) q^rho1 <= the comparison bound."""
    return F(r * (j1 - 1), (r - 2) * (2 * j1 - 1)) - F(r + 2, 2 * r * (r - 2))


def second_branch_threshold(j2: int, r: int) -> Fraction:
    # the general display writes (j1 - 1) in the first numerator term; the
    # specialisations at j2 = 3, 4 only match with (j2 - 1)
    num = 2 * (j2 - 1) * r * r - (5 * j2 - 3) * (r + 2)
    den = 2 * (3 * j2 - 2) * r * r - 4 * (5 * j2 - 3) * r
    return F(num, den)


def supersede_ranges(j1: int, j2: int, r_range=range(3, 31)) -> dict:
    """r-values for which each branch beats the comparison bound, evaluating
    the stated inequalities literally (threshold <= optimal lower end)."""
    first, second = [], []
    for r in r_range:
        lo = hb_exponents(r).optimal_lo
        if first_branch_threshold(j1, r) <= lo:
            first.append(r)
        if second_branch_threshold(j2, r) <= lo:
            second.append(r)
    return {"first": first, "second": second}


@dataclass(frozen=True)
class HChoice:
    branch: str
    H1: int
    H2: int | None = None
    k1: int = 0
    k2: int | None = None


def _smallest_power_at_least(p: int, a: Fraction, X, b: Fraction, q: int) -> int:
    """Least k with p^k >= X^a q^b, compared exactly via a common denominator."""
    D = math.lcm(a.denominator, b.denominator)
    A, B = int(a * D), int(b * D)
    X = Fraction(X)
    rhs = X**A * Fraction(q) ** B
    # start from the float estimate and correct exactly
    k = max(0, math.floor((a * math.log(X) + b * math.log(q)) / math.log(p)) - 1) if X > 0 else 0
    while Fraction(p) ** (k * D) < rhs:
        k += 1
    while k > 0 and Fraction(p) ** ((k - 1) * D) >= rhs:
        k -= 1
    return k


def choose_H(branch: str, X, q: int, j: int, p: int) -> HChoice:
    """Powers of p in the half-open windows [L, pL) used for the shifts."""
    X = Fraction(X)
    if branch == "one-shift":
        e = F(j - 1, 2 * j - 1)
        k = _smallest_power_at_least(p, F(0), X, e, q)
        H = p**k
        if H > X:
            raise Infeasible(f"H1 = {H} exceeds X = {X}: need X >= q^({e})")
        return HChoice(branch, H, None, k)
    if branch == "two-shift":
        d = 5 * j - 3
        k1 = _smallest_power_at_least(p, F(2 * j - 1, d), X, F(j - 1, d), q)
        k2 = _smallest_power_at_least(p, F(-(j - 1), d), X, F(2 * (j - 1), d), q)
        H1, H2 = p**k1, p**k2
        if H1 > X or H2 > X:
            raise Infeasible(f"shift sizes H1 = {H1}, H2 = {H2} exceed X = {X}: need X >= q^({F(j - 1, 3 * j - 2)})")
        return HChoice(branch, H1, H2, k1, k2)
    raise ValueError(f"unknown branch {branch!r}")


# ------------------------------------------------------------ sweep


@dataclass(frozen=True)
class SweepRecord:
    p: int
    n: int
    Q_a: int
    Q_b: int
    Q_c: int
    chi_index: int
    M: int
    N: int
    branch: str
    abs_sum: float
    bound: float
    ratio: float
    seconds: float


def branch_window(branch: str, q: int, ex: ExponentSet) -> tuple[float, float]:
    if branch == "one-shift":
        return q ** float(ex.crossover), q ** float(ex.one_hi)
    if branch == "two-shift":
        return q ** float(ex.two_lo), q ** float(ex.crossover)
    raise ValueError(f"unknown branch {branch!r}")


def branch_bound(branch: str, N: float, q: int, ex: ExponentSet) -> float:
    if branch == "one-shift":
        return N**1.5 * q ** float(ex.rho1)
    return N ** float(ex.two_N_exponent) * q ** float(ex.rho2)


def log_grid(lo: float, hi: float, points: int) -> list[int]:
    """Rounded log-spaced integers, duplicates dropped, in increasing order."""
    if points <= 0:
        return []
    vals = np.rint(np.geomspace(lo, hi, points)).astype(int).tolist() if points > 1 else [int(round(lo))]
    out = []
    for v in vals:
        if not out or v != out[-1]:
            out.append(max(1, v))
    return out


def sweep_main_bound(p: int, n: int, Q: QuadraticForm, chi_index: int, grid, branch: str,
                     j1: int = 3, j2: int = 4, M=None, timing: bool = False) -> list[SweepRecord]:
    """|S_Q| over the N-grid with A = B = 0, default bumps and M = N unless given."""
    Q.check(p)
    chi = char_construct(p, n, chi_index)
    q = p**n
    ex = exponents(j1, j2)
    out = []
    for N in grid:
        Mv = N if M is None else M
        t0 = time.perf_counter()
        s = sum_SQ(Q, SumParams(chi, 0, 0, Mv, N, DEFAULT_WEIGHT, DEFAULT_WEIGHT))
        dt = time.perf_counter() - t0 if timing else 0.0
        b = branch_bound(branch, N, q, ex)
        a = abs(s)
        out.append(SweepRecord(p, n, Q.a, Q.b, Q.c, chi_index, int(Mv), int(N), branch, a, b, a / b, round(dt, 3)))
    return out


def default_grids(p: int = 5, n: int = 9, points: int = 12, j1: int = 3, j2: int = 4) -> dict[str, list[int]]:
    q = p**n
    ex = exponents(j1, j2)
    return {b: log_grid(*branch_window(b, q, ex), points) for b in ("two-shift", "one-shift")}


def fit_slope(records) -> float:
    """Least-squares slope of log|S_Q| against log N."""
    x = np.log([r.N for r in records])
    y = np.log([r.abs_sum for r in records])
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)


def trivial_bound(N, M=None) -> float:
    M = N if M is None else M
    s = DEFAULT_WEIGHT.sup
    return s * s * (2 * M + 1) * (2 * N + 1)


def records_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in records:
        d = asdict(r)
        row = []
        for k in CSV_HEADER:
            v = d[k]
            row.append(repr(v) if isinstance(v, float) else v)
        w.writerow(row)
    return buf.getvalue()


def records_json(records) -> str:
    return json.dumps([asdict(r) for r in records], indent=2, sort_keys=True) + "\n"

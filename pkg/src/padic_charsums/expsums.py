"""Complete exponential sums of rational functions modulo prime powers.

Polynomials have exact integer coefficients (ascending order).  A rational
function is a numerator/denominator pair; nothing is ever cancelled over Z,
only p-power contents are stripped when reducing modulo p.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import (
    DegenerateDenominator,
    DenominatorVanishes,
    DomainError,
    HypothesisViolated,
)
from .padic_core import INF, inv_mod, ord_p_int


@dataclass(frozen=True)
class IntPolynomial:
    coeffs: tuple[int, ...] = ()

    def __post_init__(self):
        c = [int(a) for a in self.coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def const(cls, a: int) -> IntPolynomial:
        return cls((a,))

    @property
    def degree(self) -> int | float:
        return len(self.coeffs) - 1 if self.coeffs else -INF

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __call__(self, x: int) -> int:
        acc = 0
        for a in reversed(self.coeffs):
            acc = acc * x + a
        return acc

    def eval_mod(self, x: int, m: int) -> int:
        acc = 0
        for a in reversed(self.coeffs):
            acc = (acc * x + a) % m
        return acc

    def eval_array(self, x: np.ndarray, m: int) -> np.ndarray:
        """Horner evaluation modulo m on an int64 array (needs m**2 < 2**63)."""
        acc = np.zeros_like(x, dtype=np.int64)
        for a in reversed(self.coeffs):
            acc = (acc * x + (a % m)) % m
        return acc

    def __add__(self, other):
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return IntPolynomial(tuple(self[i] + other[i] for i in range(n)))

    __radd__ = __add__

    def __neg__(self):
        return IntPolynomial(tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        other = _as_poly(other)
        if self.is_zero() or other.is_zero():
            return IntPolynomial()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPolynomial(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        out = IntPolynomial((1,))
        for _ in range(e):
            out = out * self
        return out

    def deriv(self) -> IntPolynomial:
        return IntPolynomial(tuple(i * a for i, a in enumerate(self.coeffs) if i))

    def compose_linear(self, a: int, b: int) -> IntPolynomial:
        """x -> self(a + b x)."""
        out = IntPolynomial()
        lin = IntPolynomial((a, b))
        for c in reversed(self.coeffs):
            out = out * lin + c
        return out

    def reduce(self, m: int) -> IntPolynomial:
        return IntPolynomial(tuple(a % m for a in self.coeffs))

    def exact_div(self, d: int) -> IntPolynomial:
        if any(a % d for a in self.coeffs):
            raise ValueError(f"{d} does not divide every coefficient")
        return IntPolynomial(tuple(a // d for a in self.coeffs))

    def ord_p(self, p: int) -> int | float:
        return ord_p_poly(self, p)


def _as_poly(x) -> IntPolynomial:
    return x if isinstance(x, IntPolynomial) else IntPolynomial((int(x),))


def ord_p_poly(f: IntPolynomial, p: int) -> int | float:
    """Minimum coefficient valuation (infinite for the zero polynomial)."""
    return min((ord_p_int(a, p) for a in f.coeffs if a), default=INF)


@dataclass(frozen=True)
class RationalFunc:
    num: IntPolynomial
    den: IntPolynomial = IntPolynomial((1,))

    def __post_init__(self):
        if self.den.is_zero():
            raise ZeroDivisionError("zero denominator")

    @classmethod
    def from_coeffs(cls, num, den=(1,)) -> RationalFunc:
        return cls(IntPolynomial(tuple(num)), IntPolynomial(tuple(den)))

    def derivative(self) -> RationalFunc:
        n, d = self.num, self.den
        return RationalFunc(n.deriv() * d - n * d.deriv(), d * d)

    def __add__(self, other):
        if not isinstance(other, RationalFunc):
            other = RationalFunc(_as_poly(other))
        if self.den == other.den:
            return RationalFunc(self.num + other.num, self.den)
        return RationalFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    def add_linear(self, t: int) -> RationalFunc:
        """self + t * x."""
        return RationalFunc(self.num + IntPolynomial((0, t)) * self.den, self.den)

    def scale(self, c: int) -> RationalFunc:
        return RationalFunc(self.num * c, self.den)

    def reduce(self, m: int) -> RationalFunc:
        return RationalFunc(self.num.reduce(m), self.den.reduce(m))

    def eval_mod(self, x: int, m: int) -> int:
        d = self.den.eval_mod(x, m)
        if math.gcd(d, m) != 1:
            raise DenominatorVanishes(f"denominator not a unit at x = {x} modulo {m}")
        return self.num.eval_mod(x, m) * inv_mod(d, m) % m

    def eval_array(self, x: np.ndarray, m: int) -> np.ndarray:
        """Evaluate modulo a prime power m."""
        d = self.den.eval_array(x, m)
        if m > 1 and (d % _prime_of(m) == 0).any():
            raise DenominatorVanishes(f"denominator not a unit modulo {m}")
        return self.num.eval_array(x, m) * _inverse_array(d, m) % m

    def ord_p(self, p: int) -> int | float:
        return ord_p_rat(self, p)


def ord_p_rat(f: RationalFunc, p: int) -> int | float:
    """ord_p(num) - ord_p(den); infinite when the numerator is zero."""
    on = ord_p_poly(f.num, p)
    if on == INF:
        return INF
    return on - ord_p_poly(f.den, p)


def _prime_of(m: int) -> int:
    p = 2
    while m % p:
        p += 1
    return p


@functools.lru_cache(maxsize=8)
def inverse_table(m: int) -> np.ndarray:
    """table[x] = x^-1 mod m for units x, 0 otherwise (m a prime power)."""
    p = _prime_of(m)
    x = np.arange(m, dtype=np.int64)
    table = np.zeros(m, dtype=np.int64)
    unit = x % p != 0
    # x^-1 = x^(phi - 1) by Euler; vectorized square and multiply
    e = m // p * (p - 1) - 1
    base, out = x[unit], np.ones(int(unit.sum()), dtype=np.int64)
    while e:
        if e & 1:
            out = out * base % m
        base = base * base % m
        e >>= 1
    table[unit] = out
    table.setflags(write=False)
    return table


def _inverse_array(d: np.ndarray, m: int) -> np.ndarray:
    if m == 1:
        return np.zeros_like(d)
    return inverse_table(m)[d % m]


# ---------------------------------------------------------------- roots over F_p


def poly_mod_p(coeffs, p: int) -> list[int]:
    c = [a % p for a in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return c


def root_multiplicity(coeffs: list[int], alpha: int, p: int) -> int:
    """Multiplicity of alpha as a root of a nonzero polynomial over F_p.

    Repeated synthetic division by (X - alpha).
    """
    c = poly_mod_p(coeffs, p)
    if not c:
        raise ValueError("zero polynomial has no finite root multiplicity")
    nu = 0
    while len(c) > 1:
        # divide by (X - alpha): c = q * (X - alpha) + r
        q = [0] * (len(c) - 1)
        acc = 0
        for i in range(len(c) - 1, 0, -1):
            acc = (acc * alpha + c[i]) % p
            q[i - 1] = acc
        r = (acc * alpha + c[0]) % p
        if r:
            break
        nu += 1
        c = q
    return nu


@dataclass(frozen=True)
class CriticalPoint:
    alpha: int
    nu: int


def normalized_derivative(f: RationalFunc, p: int):
    """(t, N, D) with f' = p^t N / D and N, D of unit content."""
    fd = f.derivative()
    on, od = ord_p_poly(fd.num, p), ord_p_poly(fd.den, p)
    if on == INF:
        raise DomainError("f is constant")
    return on - od, fd.num.exact_div(p**on), fd.den.exact_div(p**od)


def critical_points(f: RationalFunc, p: int) -> tuple[int, list[CriticalPoint]]:
    """t = ord_p(f') and the zeros of p^-t f' modulo p with multiplicities.

    Only residues where the denominator of f is a unit mod p are reported.
    """
    if not poly_mod_p(f.den.coeffs, p):
        raise DegenerateDenominator("denominator vanishes identically modulo p")
    t, num, den = normalized_derivative(f, p)
    out = []
    for alpha in range(p):
        if f.den.eval_mod(alpha, p) == 0 or den.eval_mod(alpha, p) == 0:
            continue
        nu = root_multiplicity(list(num.coeffs), alpha, p)
        if nu:
            out.append(CriticalPoint(alpha, nu))
    return t, out


def multiplicity_at(f: RationalFunc, p: int, alpha: int) -> int:
    _, pts = critical_points(f, p)
    for c in pts:
        if c.alpha == alpha % p:
            return c.nu
    return 0


# ------------------------------------------------------------- complete sums


@functools.lru_cache(maxsize=8)
def roots_of_unity(m: int) -> np.ndarray:
    """table[k] = e(k/m)."""
    table = np.exp(2j * np.pi * np.arange(m) / m)
    table.setflags(write=False)
    return table


def _phases(vals: np.ndarray, m: int) -> np.ndarray:
    return roots_of_unity(m)[vals % m]


def complete_sum(f: RationalFunc, p: int, m: int, alpha: int) -> complex:
    """S_alpha(f, p^m) = sum over n = alpha mod p, n mod p^m, of e(f(n)/p^m)."""
    if m < 1:
        raise ValueError("m must be positive")
    if f.den.eval_mod(alpha, p) == 0:
        raise DenominatorVanishes(f"den(f) vanishes at alpha = {alpha} modulo {p}")
    mod = p**m
    n = alpha % p + p * np.arange(p ** (m - 1), dtype=np.int64)
    return complex(_phases(f.eval_array(n, mod), mod).sum())


def complete_sums_by_class(f: RationalFunc, p: int, m: int) -> dict[int, complex]:
    """S_alpha for every alpha mod p with den(alpha) a unit, in one pass."""
    return complete_sums_multi(f, p, [m])[m]


def complete_sums_multi(f: RationalFunc, p: int, ms) -> dict[int, dict[int, complex]]:
    """{m: {alpha: S_alpha(f, p^m)}} from a single evaluation modulo p^max(ms).

    Residues n < p^m are a prefix of residues n < p^M, and f(n) mod p^m is
    f(n) mod p^M reduced, so one table serves every m.
    """
    ms = sorted(set(ms))
    if not ms:
        return {}
    good = [a for a in range(p) if f.den.eval_mod(a, p)]
    big = p ** ms[-1]
    table = roots_of_unity(big)
    n = np.arange(big, dtype=np.int64)
    ok = np.zeros(p, dtype=bool)
    ok[good] = True
    ok = ok[n % p]
    if ok.all():
        vals = f.eval_array(n, big)
    else:
        vals = np.zeros(big, dtype=np.int64)
        vals[ok] = f.eval_array(n[ok], big)
    out = {}
    for m in ms:
        mod = p**m
        # e(v / p^m) = e(v p^(M-m) / p^M); row alpha holds the class n = alpha mod p
        idx = ((vals[:mod] % mod) * (big // mod)).reshape(-1, p).T
        out[m] = {}
        for a in good:
            # contiguous rows so numpy uses pairwise summation
            out[m][a] = complex(np.ascontiguousarray(table[idx[a]]).sum())
    return out


def twisted_complete_sums(f: RationalFunc, p: int, m: int) -> np.ndarray:
    """Array over t mod p^m of sum_{r mod p^m} e((f(r) + t r) / p^m), via FFT."""
    mod = p**m
    r = np.arange(mod, dtype=np.int64)
    a = _phases(f.eval_array(r, mod), mod)
    # sum_r a_r e(t r / mod) = mod * ifft(a)[t]
    return np.fft.ifft(a) * mod


@dataclass(frozen=True)
class CLZResult:
    alpha: int
    nu: int
    t: int
    m: int
    abs_sum: float
    bound: float
    passed: bool


def clz_bound(nu: int, t: int, m: int, p: int) -> float:
    if nu == 0:
        return 0.0
    return nu * p ** (t / (nu + 1)) * p ** (m * (1 - 1 / (nu + 1)))


def clz_check(f: RationalFunc, p: int, m: int, alpha: int, slack: float = 1e-9) -> CLZResult:
    """Compare |S_alpha(f, p^m)| with nu p^(t/(nu+1)) p^(m(1-1/(nu+1)))."""
    t, pts = critical_points(f, p)
    if m < t + 2:
        raise HypothesisViolated(f"m = {m} < t + 2 = {t + 2}")
    nu = next((c.nu for c in pts if c.alpha == alpha % p), 0)
    s = abs(complete_sum(f, p, m, alpha))
    bound = clz_bound(nu, t, m, p)
    return CLZResult(alpha % p, nu, t, m, s, bound, s <= bound + slack)

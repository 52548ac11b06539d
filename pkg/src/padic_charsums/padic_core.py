"""Truncated p-adic integers: residues modulo p**prec.

Everything here is exact integer arithmetic.  The p-adic logarithm is
evaluated from its power series with the p-power of each denominator
cancelled exactly, so no rational arithmetic is needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .exceptions import DomainError, NonResidue, NotInvertible

INF = math.inf


def ord_p_int(x: int, p: int) -> int | float:
    """Largest k with p**k | x; ``math.inf`` for x = 0."""
    if x == 0:
        return INF
    x = abs(x)
    k = 0
    while x % p == 0:
        x //= p
        k += 1
    return k


def inv_mod(x: int, m: int) -> int:
    """Inverse of x modulo m, in [0, m)."""
    try:
        return pow(x, -1, m)
    except ValueError:
        raise NotInvertible(f"{x} is not invertible modulo {m}") from None


def _clog(prec: int, p: int) -> int:
    # ceil(log_p(prec + 1)) without floating point
    k, pk = 0, 1
    while pk < prec + 1:
        pk *= p
        k += 1
    return k


def log1p_series(x: int, p: int, prec: int) -> int:
    """log_p(1 + x) modulo p**prec for an integer x divisible by p.

    Terms m = 1..M with M = prec + 2*ceil(log_p(prec+1)) + 2.  Term m is
    x**m / m; with m = p**e * m' it is computed as (x**m mod p**(prec+e)) // p**e
    times the inverse of m' modulo p**prec.
    """
    if x % p:
        raise DomainError(f"log_p(1+x) needs p | x, got x = {x}")
    mod = p**prec
    n_terms = prec + 2 * _clog(prec, p) + 2
    total = 0
    for m in range(1, n_terms + 1):
        e = 0
        unit = m
        while unit % p == 0:
            unit //= p
            e += 1
        pe = p**e
        term = pow(x, m, mod * pe) // pe
        term = term * inv_mod(unit, mod) % mod
        total = total + term if m % 2 else total - term
    return total % mod


@dataclass(frozen=True)
class PAdicInt:
    """A p-adic integer known modulo p**prec."""

    p: int
    prec: int
    value: int

    def __post_init__(self) -> None:
        if self.prec < 1:
            raise ValueError("precision must be positive")
        object.__setattr__(self, "value", self.value % self.modulus)

    @property
    def modulus(self) -> int:
        return self.p**self.prec

    def _check(self, other: PAdicInt | int) -> int:
        if isinstance(other, PAdicInt):
            if (other.p, other.prec) != (self.p, self.prec):
                raise ValueError("operands carry different (p, prec)")
            return other.value
        return int(other)

    def __add__(self, other):
        return PAdicInt(self.p, self.prec, self.value + self._check(other))

    __radd__ = __add__

    def __sub__(self, other):
        return PAdicInt(self.p, self.prec, self.value - self._check(other))

    def __rsub__(self, other):
        return PAdicInt(self.p, self.prec, self._check(other) - self.value)

    def __mul__(self, other):
        return PAdicInt(self.p, self.prec, self.value * self._check(other))

    __rmul__ = __mul__

    def __neg__(self):
        return PAdicInt(self.p, self.prec, -self.value)

    def __pow__(self, e: int):
        return PAdicInt(self.p, self.prec, pow(self.value, e, self.modulus))

    def inverse(self) -> PAdicInt:
        return PAdicInt(self.p, self.prec, inv_mod(self.value, self.modulus))

    def valuation(self) -> int | float:
        """ord_p of the residue; infinite for the zero residue."""
        return ord_p_int(self.value, self.p)

    def is_unit(self) -> bool:
        return self.value % self.p != 0

    def __int__(self) -> int:
        return self.value


def padic_log(x: PAdicInt) -> PAdicInt:
    """p-adic logarithm of x, where x = 1 mod p."""
    if x.value % x.p != 1 % x.p:
        raise DomainError(f"log_p is defined on 1 + pZ_p; got {x.value} mod {x.p}")
    return PAdicInt(x.p, x.prec, log1p_series(x.value - 1, x.p, x.prec))


def sqrt_mod_p(a: int, p: int) -> int:
    """Smallest non-negative square root of a modulo p (p odd prime)."""
    a %= p
    if a == 0:
        raise DomainError("zero has no unit square root")
    for r in range(1, (p + 1) // 2 + 1):
        if r * r % p == a:
            return r
    raise NonResidue(f"{a} is not a square modulo {p}")


def hensel_sqrt(a: int, p: int, n: int) -> int:
    """Square root of a modulo p**n lifted from the smallest root mod p.

    The companion root is p**n - v.
    """
    if a % p == 0:
        raise DomainError(f"p = {p} divides a = {a}")
    v = sqrt_mod_p(a, p)
    mod = p
    for _ in range(1, n):
        mod *= p
        # Newton step v <- v - (v^2 - a) / (2v)
        v = (v - (v * v - a) * inv_mod(2 * v, mod)) % mod
    return v % p**n

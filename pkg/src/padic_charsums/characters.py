"""Dirichlet characters modulo p**n with exact root-of-unity values.

A character is stored as (generator g, index): chi(g) = e(index / phi(p**n)).
Values are ``UnitPhase`` objects, so identities between characters and
additive phases can be checked with integer comparisons only.
"""

from __future__ import annotations

import functools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .exceptions import NotPrimitive, VerificationFailed
from .padic_core import inv_mod, log1p_series


@dataclass(frozen=True, eq=False)
class UnitPhase:
    """The root of unity e(numerator / denominator)."""

    numerator: int
    denominator: int

    def __post_init__(self) -> None:
        if self.denominator < 1:
            raise ValueError("denominator must be positive")
        object.__setattr__(self, "numerator", self.numerator % self.denominator)

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def __eq__(self, other) -> bool:
        if not isinstance(other, UnitPhase):
            return NotImplemented
        return self.numerator * other.denominator == other.numerator * self.denominator

    def __hash__(self) -> int:
        return hash(self.fraction)

    def __mul__(self, other: UnitPhase) -> UnitPhase:
        d = math.lcm(self.denominator, other.denominator)
        return UnitPhase(
            self.numerator * (d // self.denominator) + other.numerator * (d // other.denominator), d
        )

    def conjugate(self) -> UnitPhase:
        return UnitPhase(-self.numerator, self.denominator)

    def __complex__(self) -> complex:
        theta = 2 * math.pi * self.numerator / self.denominator
        return complex(math.cos(theta), math.sin(theta))

    def __repr__(self) -> str:
        return f"e({self.numerator}/{self.denominator})"


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def multiplicative_order_is_full(g: int, modulus: int, phi: int) -> bool:
    if math.gcd(g, modulus) != 1:
        return False
    return all(pow(g, phi // r, modulus) != 1 for r in _prime_factors(phi))


def smallest_primitive_root(p: int, n: int) -> int:
    modulus, phi = p**n, p ** (n - 1) * (p - 1)
    for g in range(2, modulus):
        if multiplicative_order_is_full(g, modulus, phi):
            return g
    raise ValueError(f"no primitive root modulo {p}^{n}")


@functools.lru_cache(maxsize=8)
def dlog_table(p: int, n: int) -> tuple[int, np.ndarray]:
    """(g, table) where table[x] = log_g(x) for units and -1 otherwise."""
    g = smallest_primitive_root(p, n)
    modulus, phi = p**n, p ** (n - 1) * (p - 1)
    dtype = np.int32 if modulus < 2**31 else np.int64
    table = np.full(modulus, -1, dtype=dtype)
    x = 1
    for k in range(phi):
        table[x] = k
        x = x * g % modulus
    table.setflags(write=False)
    return g, table


@dataclass(frozen=True)
class DirichletCharacter:
    """chi modulo p**n with chi(g) = e(index / phi(p**n))."""

    p: int
    n: int
    index: int
    g: int = field(repr=False)
    dlog: np.ndarray = field(repr=False, compare=False)

    @property
    def modulus(self) -> int:
        return self.p**self.n

    @property
    def phi(self) -> int:
        return self.p ** (self.n - 1) * (self.p - 1)

    @property
    def is_primitive(self) -> bool:
        return self.index % self.p != 0

    def __call__(self, x: int) -> UnitPhase | None:
        return char_eval(self, x)

    def exponent(self, x: int) -> int:
        """k with chi(x) = e(k/phi), or -1 when p | x."""
        d = int(self.dlog[x % self.modulus])
        return -1 if d < 0 else self.index * d % self.phi

    def conjugate(self) -> DirichletCharacter:
        return DirichletCharacter(self.p, self.n, -self.index % self.phi, self.g, self.dlog)

    @functools.cached_property
    def values(self) -> np.ndarray:
        """Complex value table indexed by residue (0 where p | x)."""
        k = self.dlog.astype(np.int64)
        unit = k >= 0
        phase = (self.index * k[unit]) % self.phi
        vals = np.zeros(self.modulus, dtype=np.complex128)
        vals[unit] = np.exp(2j * np.pi * phase / self.phi)
        vals.setflags(write=False)
        return vals


def char_construct(p: int, n: int, index: int, primitive: bool = True) -> DirichletCharacter:
    if n < 2:
        raise ValueError("modulus exponent n must be at least 2")
    phi = p ** (n - 1) * (p - 1)
    if not 0 <= index < phi:
        raise ValueError(f"index must lie in [0, {phi})")
    if primitive and index % p == 0:
        raise NotPrimitive(f"index {index} is divisible by p = {p}")
    g, table = dlog_table(p, n)
    return DirichletCharacter(p, n, index, g, table)


def char_eval(chi: DirichletCharacter, x: int) -> UnitPhase | None:
    """chi(x) as an exact phase; None stands for the value 0 (p | x)."""
    k = chi.exponent(x)
    if k < 0:
        return None
    return UnitPhase(k, chi.phi)


def primitive_indices(p: int, n: int) -> list[int]:
    phi = p ** (n - 1) * (p - 1)
    return [i for i in range(phi) if i % p]


def sample_primitive_indices(p: int, n: int, count: int, seed: int = 0) -> list[int]:
    """All primitive indices when phi(phi(p^n)) <= 200, else a seeded sample."""
    phi = p ** (n - 1) * (p - 1)
    idx = primitive_indices(p, n)
    phiphi = sum(1 for i in range(1, phi + 1) if math.gcd(i, phi) == 1)
    if phiphi <= 200 or len(idx) <= count:
        return idx
    return sorted(random.Random(seed).sample(idx, count))


@dataclass(frozen=True)
class PostnikovConstant:
    """a0 modulo p**(n-1), normalized to its least non-negative representative."""

    a0: int
    p: int
    n: int


@functools.lru_cache(maxsize=16)
def _log_table(p: int, n: int) -> tuple[int, ...]:
    # log_p(1 + p t) mod p^n for t in [0, p^(n-1))
    return tuple(log1p_series(p * t, p, n) for t in range(p ** (n - 1)))


def postnikov_identity_holds(chi: DirichletCharacter, a0: int, t: int) -> bool:
    """chi(1 + pt) == e(a0 * log_p(1 + pt) / p^n) as exact phases."""
    p, n = chi.p, chi.n
    lhs = char_eval(chi, 1 + p * t)
    ell = _log_table(p, n)[t % p ** (n - 1)]
    return lhs == UnitPhase(a0 * ell, p**n)


def postnikov_a0(chi: DirichletCharacter, verify: bool = True) -> PostnikovConstant:
    """The unit a0 with chi(1+pt) = e(a0 log_p(1+pt) / p^n) for all t.

    Solved at t = 1 (log_p(1+p) = p * unit) and then checked on every
    t in [0, p^(n-1)).
    """
    p, n = chi.p, chi.n
    if n < 2 or not chi.is_primitive:
        raise NotPrimitive("a0 exists only for primitive characters with n >= 2")
    pn1 = p ** (n - 1)
    # chi(1+p) is a p^(n-1)-th root of unity e(j / p^(n-1))
    phase = char_eval(chi, 1 + p)
    frac = phase.fraction * pn1
    if frac.denominator != 1:
        raise VerificationFailed("chi(1+p) is not a p^(n-1)-th root of unity")
    j = int(frac)
    lam = log1p_series(p, p, n) // p
    a0 = j * inv_mod(lam, pn1) % pn1
    if verify:
        for t in range(pn1):
            if not postnikov_identity_holds(chi, a0, t):
                raise VerificationFailed(f"identity fails at t = {t} for {chi!r}")
    return PostnikovConstant(a0, p, n)

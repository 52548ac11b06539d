"""Compactly supported smooth weights and their Fourier transforms.

The default weight is the standard bump exp(1/(x^2 - 1)) on (-1, 1).
Fourier transforms use the convention

    W^(y) = integral W(x) e(-x y) dx,

evaluated by the trapezoid rule on the support.  Every derivative of a bump
vanishes at the ends of its support, so the rule with step h has error equal
to the aliasing sum over k != 0 of W^(y + k/h), which decays faster than any
power of 1/h.  The error estimate is the difference between K and 2K nodes;
K is doubled until that difference is below the requested tolerance.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import ToleranceNotMet

MAX_NODES = 2**20


def bump_eval(x):
    """exp(1/(x^2 - 1)) for |x| < 1 and 0 elsewhere (scalar or array)."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    inside = np.abs(x) < 1
    xi = x[inside]
    out[inside] = np.exp(1.0 / (xi * xi - 1.0))
    return out if out.ndim else float(out)


class SmoothWeight:
    """Non-negative smooth function with compact support.

    Subclasses implement ``__call__`` on numpy arrays and ``support``.
    """

    kind = "abstract"

    @property
    def support(self) -> tuple[float, float]:
        raise NotImplementedError

    @property
    def sup(self) -> float:
        raise NotImplementedError

    def __call__(self, x):
        raise NotImplementedError

    def shifted(self, offset: float) -> ProductShift:
        """The weight y -> W(y) W(y + offset)."""
        return ProductShift(self, offset)


@dataclass(frozen=True)
class StandardBump(SmoothWeight):
    kind = "standard_bump"

    @property
    def support(self):
        return (-1.0, 1.0)

    @property
    def sup(self):
        return math.exp(-1.0)

    def __call__(self, x):
        return bump_eval(x)


@dataclass(frozen=True)
class ScaledBump(SmoothWeight):
    """height * bump((x - center) / width), kept inside [-1, 1]."""

    width: float = 1.0
    center: float = 0.0
    height: float = 1.0
    kind = "scaled_bump"

    def __post_init__(self):
        if self.width <= 0 or abs(self.center) + self.width > 1 + 1e-15:
            raise ValueError("scaled bump must stay inside [-1, 1]")
        if self.height <= 0:
            raise ValueError("height must be positive")

    @property
    def support(self):
        return (self.center - self.width, self.center + self.width)

    @property
    def sup(self):
        return self.height * math.exp(-1.0)

    def __call__(self, x):
        return self.height * bump_eval((np.asarray(x, dtype=float) - self.center) / self.width)


@dataclass(frozen=True)
class ProductShift(SmoothWeight):
    """W_h(y) = W(y) * W(y + offset); nested instances give W_{h1,h2}."""

    base: SmoothWeight
    offset: float
    kind = "product_shift"

    @property
    def support(self):
        lo, hi = self.base.support
        lo2, hi2 = max(lo, lo - self.offset), min(hi, hi - self.offset)
        if lo2 >= hi2:
            return (0.0, 0.0)
        return (lo2, hi2)

    @property
    def sup(self):
        return self.base.sup**2

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return self.base(x) * self.base(x + self.offset)


DEFAULT_WEIGHT = StandardBump()


@dataclass(frozen=True)
class FourierEval:
    weight: SmoothWeight
    y: float
    value: complex
    abs_error: float


def _transform_fixed(weight: SmoothWeight, ys: np.ndarray, nodes: int) -> np.ndarray:
    lo, hi = weight.support
    h = (hi - lo) / nodes
    x = lo + h * np.arange(1, nodes)
    fw = weight(x) * h
    out = np.empty(len(ys), dtype=np.complex128)
    # chunk over y to bound the size of the phase matrix
    step = max(1, 2_000_000 // len(x))
    for s in range(0, len(ys), step):
        yb = ys[s : s + step]
        out[s : s + step] = np.exp(-2j * np.pi * np.outer(yb, x)) @ fw
    return out


def fourier_transform_many(weight: SmoothWeight, ys, tol: float = 1e-13):
    """Vectorized W^(y) with a common absolute error estimate <= tol.

    Returns (values, abs_error).
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    ys = np.atleast_1d(np.asarray(ys, dtype=float))
    lo, hi = weight.support
    if hi <= lo or len(ys) == 0:
        return np.zeros(len(ys), dtype=np.complex128), 0.0
    ymax = float(np.max(np.abs(ys)))
    nodes = 2 * int(math.ceil(ymax * (hi - lo))) + 32
    coarse = _transform_fixed(weight, ys, nodes)
    while nodes <= MAX_NODES:
        nodes *= 2
        fine = _transform_fixed(weight, ys, nodes)
        err = float(np.max(np.abs(fine - coarse)))
        if err <= tol:
            return fine, err
        coarse = fine
    raise ToleranceNotMet(f"Fourier quadrature did not reach tol={tol} (last error {err:.3g})")


def fourier_transform(weight: SmoothWeight, y: float, tol: float = 1e-13) -> FourierEval:
    vals, err = fourier_transform_many(weight, [y], tol)
    return FourierEval(weight, float(y), complex(vals[0]), err)


def mass(weight: SmoothWeight, tol: float = 1e-14) -> float:
    return fourier_transform(weight, 0.0, tol).value.real


def decay_constant(weight: SmoothWeight, power: int = 3, ymax: float = 1e4, points: int = 200) -> float:
    """max over a log grid in [1, ymax] of |W^(y)| (1 + |y|)**power.

    Values below the quadrature noise floor are clipped to it, so the
    constant is a conservative regression baseline, not a proof.
    """
    ys = np.logspace(0, math.log10(ymax), points)
    vals, err = fourier_transform_many(weight, ys, tol=1e-14 * max(1.0, mass(weight)))
    mags = np.maximum(np.abs(vals), err)
    return float(np.max(mags * (1 + ys) ** power))


@functools.lru_cache(maxsize=256)
def fourier_cutoff(weight: SmoothWeight, eps: float = 1e-12) -> float:
    """Smallest grid point Y such that |W^(y)| < eps on the grid over [Y, 2Y].

    For the bump-type weights used here W^ decays faster than any power,
    so checking a window of ratio 2 past the cutoff is enough in practice.
    """
    lo, hi = weight.support
    width = max(hi - lo, 1e-12)
    ymax = 400.0 / width
    y_step = 0.25 / width
    ys = np.arange(0.0, ymax + y_step, y_step)
    vals, _ = fourier_transform_many(weight, ys, tol=eps / 10)
    big = np.nonzero(np.abs(vals) >= eps)[0]
    if len(big) == 0:
        return 0.0
    cut = ys[big[-1]] + y_step
    if 2 * cut > ymax:
        raise ToleranceNotMet("weight transform does not decay within the scanned range")
    return float(cut)

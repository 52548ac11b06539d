"""Brute-force evaluators for the smoothed character sums and their transforms.

The chain implemented here:

* S_Q(x, y) = sum Psi((x-A)/M) Phi((y-B)/N) chi(Q(x, y)), split after
  completing the square, Q = c (alpha x^2 + Z^2), into the p-coprime part
  S_Q^1 and the p | Z part S_Q^2;
* the one-variable sum T(Phi, B~, N, beta) and its splitting into classes
  y = pw + v, each giving Sigma = chi(u) sum_w Phi((w-C)/X) e(F(w)/p^n) with
  F(w) = a0 log_p(1 + p u^-1 (2vw + pw^2));
* Weyl differencing, where differences of F are expanded by exact p-adic
  Taylor series, and Poisson summation of the differenced sums.

Every transformed sum is compared against the direct sum it came from.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .characters import DirichletCharacter, UnitPhase, char_eval, postnikov_a0
from .exceptions import BadForm, PrecisionLoss, ToleranceNotMet, VerificationFailed
from .expsums import IntPolynomial, RationalFunc, twisted_complete_sums
from .padic_core import hensel_sqrt, inv_mod, log1p_series, ord_p_int
from .smooth_weights import DEFAULT_WEIGHT, ScaledBump, SmoothWeight, StandardBump, fourier_cutoff, fourier_transform_many

BLOCK = 1 << 21


@dataclass(frozen=True)
class QuadraticForm:
    """a x^2 + 2 b x y + c y^2."""

    a: int
    b: int
    c: int

    @property
    def delta(self) -> int:
        return self.a * self.c - self.b * self.b

    def __call__(self, x, y):
        return self.a * x * x + 2 * self.b * x * y + self.c * y * y

    def check(self, p: int) -> None:
        if (self.c * self.delta) % p == 0:
            raise BadForm(f"p = {p} divides c * det(Q) = {self.c * self.delta}")


@dataclass(frozen=True)
class SumParams:
    chi: DirichletCharacter
    A: int = 0
    B: int = 0
    M: float = 1
    N: float = 1
    psi: SmoothWeight = DEFAULT_WEIGHT
    phi: SmoothWeight = DEFAULT_WEIGHT

    def __post_init__(self):
        if self.M < 1 or self.N < 1:
            raise ValueError("M and N must be at least 1")


def weight_window(center, length, weight: SmoothWeight):
    """Integers z with weight((z - center)/length) > 0, and those weights."""
    lo, hi = weight.support
    c = float(center)
    zs = np.arange(math.floor(c + lo * length), math.ceil(c + hi * length) + 1, dtype=np.int64)
    w = weight((zs - c) / length) if len(zs) else np.zeros(0)
    keep = w > 0
    return zs[keep], w[keep]


def _blocked_sum(xs, wx, ys, wy, block_values) -> complex:
    """sum_i wx[i] sum_j wy[j] V[i, j] with V produced row-block by row-block.

    Fixed traversal order, so repeated runs give bit-identical results.
    """
    if len(xs) == 0 or len(ys) == 0:
        return 0j
    rows = max(1, BLOCK // len(ys))
    total = 0j
    for s in range(0, len(xs), rows):
        vals = block_values(xs[s : s + rows], ys)
        total += complex(wx[s : s + rows] @ (vals @ wy))
    return total


# ------------------------------------------------------------ the 2D sums


def sum_SQ(Q: QuadraticForm, params: SumParams) -> complex:
    """Direct evaluation of S_Q(Psi, Phi, A, B, M, N; chi)."""
    chi = params.chi
    q = chi.modulus
    table = chi.values
    xs, wx = weight_window(params.A, params.M, params.psi)
    ys, wy = weight_window(params.B, params.N, params.phi)
    a, b2, c = Q.a % q, 2 * Q.b % q, Q.c % q
    yq = ys % q
    cy2 = c * (yq * yq % q) % q

    def block(xb, _ys):
        xq = xb % q
        ax2 = a * (xq * xq % q) % q
        bx = b2 * xq % q
        # bx * y < q^2 and one final reduction suffices (q^2 < 2^62 assumed)
        v = ax2[:, None] + bx[:, None] * yq[None, :] + cy2[None, :]
        v %= q
        return table[v]

    if params.A == 0 and params.B == 0 and _is_even(params.psi) and _is_even(params.phi):
        # Q(-x, -y) = Q(x, y) and both weights are even: fold x < 0 onto x > 0
        pos = xs > 0
        zero = xs == 0
        return 2 * _blocked_sum(xs[pos], wx[pos], ys, wy, block) + _blocked_sum(xs[zero], wx[zero], ys, wy, block)
    return _blocked_sum(xs, wx, ys, wy, block)


def _is_even(w: SmoothWeight) -> bool:
    return isinstance(w, StandardBump) or (isinstance(w, ScaledBump) and w.center == 0)


@dataclass(frozen=True)
class Completion:
    """Q(x, y) = c (alpha x^2 + Z^2) mod p^n with Z = b cbar x + y."""

    p: int
    n: int
    c: int
    cbar: int
    alpha: int
    bcbar: int

    def Z(self, x: int, y: int) -> int:
        return (self.bcbar * x + y) % self.p**self.n

    def certify(self, Q: QuadraticForm, points) -> None:
        q = self.p**self.n
        for x, y in points:
            lhs = Q(x, y) % q
            rhs = self.c * (self.alpha * x * x + self.Z(x, y) ** 2) % q
            if lhs != rhs:
                raise VerificationFailed(f"completion fails at ({x}, {y})")


def sample_points(q: int, seed: int = 0, samples: int = 10_000, exhaustive_limit: int = 625):
    """All pairs mod q when q <= exhaustive_limit, else seeded random pairs."""
    if q <= exhaustive_limit:
        return [(x, y) for x in range(q) for y in range(q)]
    rng = random.Random(seed)
    return [(rng.randrange(q), rng.randrange(q)) for _ in range(samples)]


def quadratic_completion(Q: QuadraticForm, p: int, n: int, certify: bool = True, seed: int = 0) -> Completion:
    Q.check(p)
    q = p**n
    cbar = inv_mod(Q.c, q)
    comp = Completion(p, n, Q.c % q, cbar, Q.delta * cbar * cbar % q, Q.b * cbar % q)
    if certify:
        comp.certify(Q, sample_points(q, seed))
    return comp


def _split_sums(Q: QuadraticForm, params: SumParams):
    chi = params.chi
    p, q = chi.p, chi.modulus
    comp = quadratic_completion(Q, p, chi.n, certify=False)
    table = chi.values
    xs, wx = weight_window(params.A, params.M, params.psi)
    js, wy = weight_window(params.B, params.N, params.phi)
    # Z - B~ = y - B, so Z runs over B~ + (y - B) for the same y-window
    alpha, alpha_bar = comp.alpha, inv_mod(comp.alpha, q)
    chi_c = complex(char_eval(chi, comp.c))
    chi_c_alpha = complex(char_eval(chi, comp.c * alpha))

    def zvals(xb, ys):
        return (comp.bcbar * (xb % q))[:, None] % q + (ys % q)[None, :]

    def block1(xb, ys):
        z = zvals(xb, ys) % q
        xq = (xb % q)[:, None]
        v = (alpha * (xq * xq % q) + z * z % q) % q
        return np.where(z % p != 0, table[v], 0)

    def block2(xb, ys):
        z = zvals(xb, ys) % q
        xq = (xb % q)[:, None]
        v = (alpha_bar * (z * z % q) % q + xq * xq % q) % q
        keep = (z % p == 0) & (xq % p != 0)
        return np.where(keep, table[v], 0)

    s1 = chi_c * _blocked_sum(xs, wx, js, wy, block1)
    s2 = chi_c_alpha * _blocked_sum(xs, wx, js, wy, block2)
    return s1, s2


def sum_SQ1(Q: QuadraticForm, params: SumParams) -> complex:
    """chi(c) sum_x Psi sum_{p not | Z} Phi((Z - B~)/N) chi(alpha x^2 + Z^2)."""
    return _split_sums(Q, params)[0]


def sum_SQ2(Q: QuadraticForm, params: SumParams) -> complex:
    """chi(c alpha) sum_{p | Z} Phi sum_{p not | x} Psi chi(alpha^-1 Z^2 + x^2)."""
    return _split_sums(Q, params)[1]


def sum_SQ_split(Q: QuadraticForm, params: SumParams) -> tuple[complex, complex]:
    return _split_sums(Q, params)


def sq_exponent_table(Q: QuadraticForm, params: SumParams, route: str = "direct") -> dict:
    """Exact phases {(x, y): k} with chi-value e(k/phi), for small instances.

    route "direct" evaluates chi(Q(x, y)); route "split" goes through the
    completed square and the S^1 / S^2 formulas.  Zero terms are omitted.
    """
    chi = params.chi
    p, q, phi = chi.p, chi.modulus, chi.phi
    xs, _ = weight_window(params.A, params.M, params.psi)
    ys, _ = weight_window(params.B, params.N, params.phi)
    out = {}
    if route == "direct":
        for x in xs.tolist():
            for y in ys.tolist():
                k = chi.exponent(Q(x, y))
                if k >= 0:
                    out[(x, y)] = k
        return out
    comp = quadratic_completion(Q, p, chi.n, certify=False)
    alpha_bar = inv_mod(comp.alpha, q)
    kc, kca = chi.exponent(comp.c), chi.exponent(comp.c * comp.alpha)
    for x in xs.tolist():
        for y in ys.tolist():
            z = comp.Z(x, y)
            if z % p:
                k = chi.exponent(comp.alpha * x * x + z * z)
                if k >= 0:
                    out[(x, y)] = (k + kc) % phi
            elif x % p:
                out[(x, y)] = (chi.exponent(alpha_bar * z * z + x * x) + kca) % phi
    return out


# ------------------------------------------------------------ one variable


def sum_T(phi_w: SmoothWeight, B_tilde, N: float, beta: int, chi: DirichletCharacter) -> complex:
    """T = sum over p not | y of Phi((y - B~)/N) chi(beta + y^2)."""
    q, p = chi.modulus, chi.p
    ys, wy = weight_window(B_tilde, N, phi_w)
    keep = ys % p != 0
    ys, wy = ys[keep], wy[keep]
    yq = ys % q
    v = (beta % q + yq * yq % q) % q
    return complex(chi.values[v] @ wy)


def residue_split(beta: int, p: int, n: int, certify: bool = True) -> list[tuple[int, int]]:
    """Pairs (u, v): u in [1, p) with u != beta mod p and u - beta a nonzero
    square mod p; both Hensel lifts v of sqrt(u - beta) modulo p^n."""
    q = p**n
    out = []
    for u in range(1, p):
        d = (u - beta) % p
        if d == 0 or pow(d, (p - 1) // 2, p) != 1:
            continue
        v = hensel_sqrt((u - beta) % q, p, n)
        for vv in sorted((v, (q - v) % q)):
            out.append((u, vv))
    if certify:
        classes = sorted(v % p for _, v in out)
        expected = [y for y in range(1, p) if (beta + y * y) % p]
        if classes != expected:
            raise VerificationFailed(f"classes {classes} do not cover {expected}")
        for u, v in out:
            if (v * v - (u - beta)) % q:
                raise VerificationFailed(f"v = {v} is not a root of v^2 = {u} - beta")
    return out


# ------------------------------------------------------------ F(w) and Sigma


@dataclass(frozen=True)
class PipelineState:
    """Data of one residue class y = p w + v of the inner sum.

    chi may be None for purely p-adic work (Taylor data at large n); then
    prime and prec give p and n.
    """

    chi: DirichletCharacter | None
    beta: int
    u: int
    v: int
    a0: int
    C: Fraction
    X: Fraction
    prime: int = 0
    prec: int = 0

    @property
    def p(self) -> int:
        return self.chi.p if self.chi is not None else self.prime

    @property
    def n(self) -> int:
        return self.chi.n if self.chi is not None else self.prec

    @property
    def u_bar(self) -> int:
        return inv_mod(self.u, self.p**self.n)

    @property
    def D(self) -> IntPolynomial:
        """u + p g(w) = u + 2 p v w + p^2 w^2."""
        p = self.p
        return IntPolynomial((self.u, 2 * p * self.v, p * p))


def make_state(chi: DirichletCharacter, beta: int, u: int, v: int, B_tilde=0, N=1, a0: int | None = None) -> PipelineState:
    p, q = chi.p, chi.modulus
    if (u * v) % p == 0:
        raise ValueError("u and v must be units modulo p")
    if (v * v - (u - beta)) % q:
        raise ValueError("v^2 = u - beta fails modulo p^n")
    if a0 is None:
        a0 = postnikov_a0(chi, verify=False).a0
    C = (Fraction(B_tilde) - v) / p
    X = Fraction(N) / p
    return PipelineState(chi, beta, u, v, a0, C, X)


def g_poly(state: PipelineState) -> IntPolynomial:
    """g(w) = 2 v w + p w^2."""
    return IntPolynomial((0, 2 * state.v, state.p))


def F_value(state: PipelineState, w: int) -> int:
    """F(w) = a0 log_p(1 + p u^-1 g(w)) modulo p^n."""
    p, n = state.p, state.n
    q = p**n
    x = p * state.u_bar * g_poly(state)(w) % q
    return state.a0 * log1p_series(x, p, n) % q


def F_table(state: PipelineState, w0: int, count: int) -> np.ndarray:
    """F(w) for w = w0, ..., w0 + count - 1 (period p^n in w is used)."""
    q = state.p**state.n
    cache = {}
    out = np.empty(count, dtype=object)
    for i in range(count):
        r = (w0 + i) % q
        if r not in cache:
            cache[r] = F_value(state, r)
        out[i] = cache[r]
    return out


def build_F(state: PipelineState):
    """(g, F) where F is the evaluator w -> F(w) mod p^n."""
    return g_poly(state), lambda w: F_value(state, w)


def F_identity_holds(state: PipelineState, w: int) -> bool:
    """chi(beta + (pw + v)^2) == chi(u) e(F(w)/p^n) as exact phases."""
    p, q = state.p, state.p**state.n
    lhs = char_eval(state.chi, state.beta + (p * w + state.v) ** 2)
    rhs = char_eval(state.chi, state.u) * UnitPhase(F_value(state, w), q)
    return lhs == rhs


def verify_F_representation(state: PipelineState, ws) -> int:
    """Check the F identity for every w in ws; returns the count checked."""
    count = 0
    for w in ws:
        if not F_identity_holds(state, w):
            raise VerificationFailed(f"F representation fails at w = {w}")
        count += 1
    return count


def sum_Sigma(state: PipelineState, phi_w: SmoothWeight = DEFAULT_WEIGHT) -> complex:
    """Sigma = sum_w Phi((w - C)/X) chi(beta + (pw + v)^2), by brute force."""
    p, q = state.p, state.p**state.n
    ws, wt = weight_window(state.C, float(state.X), phi_w)
    y = (p * ws + state.v) % q
    vals = state.chi.values[(state.beta % q + y * y % q) % q]
    return complex(vals @ wt)


def sum_Sigma_additive(state: PipelineState, phi_w: SmoothWeight = DEFAULT_WEIGHT) -> complex:
    """chi(u) sum_w Phi((w - C)/X) e(F(w)/p^n)."""
    q = state.p**state.n
    ws, wt = weight_window(state.C, float(state.X), phi_w)
    if len(ws) == 0:
        return 0j
    F = F_table(state, int(ws[0]), len(ws)).astype(np.int64)
    phases = np.exp(2j * np.pi * F / q)
    return complex(char_eval(state.chi, state.u)) * complex(phases @ wt)


# ------------------------------------------------------------ Taylor expansion


def _taylor_numerators(state: PipelineState, J: int) -> list[IntPolynomial]:
    """N_j with F^(j)(w)/j! = N_j(w) / D(w)^j for j = 1..J (index 0 unused).

    From F'(w + d) = a0 (D' + 2 p^2 d) / D(w + d) and the recursion
    1/D(w + d) = sum_i R_i d^i / D^(i+1), R_i = -(D' R_(i-1) + p^2 D R_(i-2)).
    """
    p = state.p
    D = state.D
    Dp = D.deriv()
    Y = p * p
    R = [IntPolynomial((1,))]
    for i in range(1, J):
        prev2 = R[i - 2] * D * Y if i >= 2 else IntPolynomial()
        R.append(-(Dp * R[i - 1] + prev2))
    out = [IntPolynomial()]
    for j in range(1, J + 1):
        i = j - 1
        e = Dp * R[i] + (D * R[i - 1] * (2 * Y) if i >= 1 else IntPolynomial())
        e = e * state.a0
        pe = p ** ord_p_int(j, p)
        unit = j // pe
        num = e.exact_div(pe)
        out.append(num * inv_mod(unit, p ** (state.n + 8)))
    return out


def truncation_order(p: int, n: int, k: int, max_order: int = 400) -> int:
    """Smallest J with j(k+1) - floor(log_p j) >= n for every j >= J."""
    if k < 1:
        raise ValueError("Weyl shift exponents must be at least 1")
    j = 1
    while j <= max_order:
        if j * (k + 1) - int(math.log(j, p) + 1e-12) >= n:
            return j
        j += 1
    raise PrecisionLoss(f"Taylor series does not reach valuation {n}")


def F_derivative(state: PipelineState, order: int) -> RationalFunc:
    """F^(order) as a rational function (exact integer coefficients)."""
    f = RationalFunc(state.D.deriv() * state.a0, state.D)
    for _ in range(order - 1):
        f = f.derivative()
    return f


def taylor_G1(state: PipelineState, k1: int, h1: int) -> RationalFunc:
    """G with F(w + p^k1 h1) - F(w) = p^k1 h1 (F'(w) + p^k1 G(w)) mod p^n.

    G(w) = h1 * sum_{j >= 2} (p^k1 h1)^(j-2) F^(j)(w)/j!, truncated once the
    omitted terms have valuation >= n.  Coefficients are reduced mod p^n.
    """
    p, n = state.p, state.n
    q = p**n
    J = truncation_order(p, n, k1)
    Nj = _taylor_numerators(state, max(J, 2))
    delta = p**k1 * h1
    D = state.D
    num = IntPolynomial()
    for j in range(2, max(J, 2) + 1):
        num = num + Nj[j] * D ** (max(J, 2) - j) * (h1 * delta ** (j - 2))
    return RationalFunc(num.reduce(q), (D ** max(J, 2)).reduce(q))


def taylor_G2(state: PipelineState, k1: int, k2: int, h1: int, h2: int) -> RationalFunc:
    """G with the second difference of F equal to
    p^(k1+k2) h1 h2 (F''(w) + p^k G(w)) mod p^n, k = min(k1, k2)."""
    p, n = state.p, state.n
    q = p**n
    k = min(k1, k2)
    J = max(truncation_order(p, n, k), 3)
    Nj = _taylor_numerators(state, J)
    d1, d2 = p**k1 * h1, p**k2 * h2
    D = state.D
    num = IntPolynomial()
    pk = p**k
    for j in range(3, J + 1):
        coeff = sum(math.comb(j, i) * d1 ** (i - 1) * d2 ** (j - 1 - i) for i in range(1, j))
        if coeff % pk:
            raise PrecisionLoss("difference coefficient not divisible by p^k")
        num = num + Nj[j] * D ** (J - j) * (coeff // pk)
    return RationalFunc(num.reduce(q), (D**J).reduce(q))


def first_difference_identity(state: PipelineState, k1: int, h1: int, ws, G: RationalFunc | None = None) -> bool:
    """F(w + p^k1 h1) - F(w) == p^k1 h1 (F'(w) + p^k1 G(w)) mod p^n on ws."""
    p, q = state.p, state.p**state.n
    G = G if G is not None else taylor_G1(state, k1, h1)
    Fp = RationalFunc(state.D.deriv() * state.a0, state.D)
    delta = p**k1 * h1
    for w in ws:
        lhs = (F_value(state, w + delta) - F_value(state, w)) % q
        rhs = delta * (Fp.eval_mod(w, q) + p**k1 * G.eval_mod(w, q)) % q
        if lhs != rhs:
            return False
    return True


def second_difference_identity(state: PipelineState, k1: int, k2: int, h1: int, h2: int, ws, G: RationalFunc | None = None) -> bool:
    p, q = state.p, state.p**state.n
    G = G if G is not None else taylor_G2(state, k1, k2, h1, h2)
    k = min(k1, k2)
    Fpp = F_derivative(state, 2)
    d1, d2 = p**k1 * h1, p**k2 * h2
    for w in ws:
        lhs = (F_value(state, w + d1 + d2) - F_value(state, w + d1) - F_value(state, w + d2) + F_value(state, w)) % q
        rhs = d1 * d2 * (Fpp.eval_mod(w, q) + p**k * G.eval_mod(w, q)) % q
        if lhs != rhs:
            return False
    return True


# ------------------------------------------------------------ Weyl and Poisson


@dataclass(frozen=True)
class DifferencedPhase:
    """f_i modulo p^(s_i) after one (order 1) or two (order 2) Weyl shifts."""

    order: int
    k1: int
    l1: int
    g1: int
    k2: int = 0
    l2: int = 0
    g2: int = 0
    s: int = 0
    f: RationalFunc = field(default=None, repr=False)

    @property
    def k(self) -> int:
        return min(self.k1, self.k2) if self.order == 2 else self.k1


def build_f1(state: PipelineState, k1: int, l1: int, g1: int) -> DifferencedPhase:
    """f1 = g1 (F' + p^k1 G_{p^l1 g1}) reduced modulo p^(s1), s1 = n - k1 - l1."""
    p, n = state.p, state.n
    if g1 % p == 0:
        raise ValueError("g1 must be coprime to p")
    s1 = n - k1 - l1
    if s1 < 1:
        raise PrecisionLoss("s1 = n - k1 - l1 must be positive")
    G = taylor_G1(state, k1, p**l1 * g1)
    J = G.den
    D = state.D
    # F' = a0 D'/D = a0 D' D^(J-1) / D^J
    Jdeg = len(J.coeffs) // 2  # G.den = D^J has degree 2J
    num = (state.D.deriv() * state.a0 * D ** (Jdeg - 1) + G.num * p**k1) * g1
    m = p**s1
    return DifferencedPhase(1, k1, l1, g1, s=s1, f=RationalFunc(num.reduce(m), J.reduce(m)))


def build_f2(state: PipelineState, k1: int, k2: int, l1: int, l2: int, g1: int, g2: int) -> DifferencedPhase:
    """f2 = g1 g2 (F'' + p^k G_{h1,h2}) modulo p^(s2), s2 = n - k1 - k2 - l1 - l2."""
    p, n = state.p, state.n
    if g1 % p == 0 or g2 % p == 0:
        raise ValueError("g1, g2 must be coprime to p")
    s2 = n - k1 - k2 - l1 - l2
    if s2 < 1:
        raise PrecisionLoss("s2 must be positive")
    k = min(k1, k2)
    G = taylor_G2(state, k1, k2, p**l1 * g1, p**l2 * g2)
    Jdeg = len(G.den.coeffs) // 2
    Fpp = F_derivative(state, 2)  # numerator / D^2 (unreduced D^2 denominator)
    D = state.D
    if Fpp.den != D * D:
        raise VerificationFailed("unexpected denominator for F''")
    num = (Fpp.num * D ** (Jdeg - 2) + G.num * p**k) * (g1 * g2)
    m = p**s2
    return DifferencedPhase(2, k1, l1, g1, k2, l2, g2, s2, RationalFunc(num.reduce(m), G.den.reduce(m)))


@dataclass(frozen=True)
class WeylStep:
    lhs: float
    rhs: float
    ratio: float
    shifts: int


def weyl_step(F_of, phi_w: SmoothWeight, C, X: float, p: int, n: int, kappa: int) -> WeylStep:
    """|sum_w Phi((w-C)/X) e(F(w)/p^n)|^2 against
    X H + H sum_{0 < |h| < 2X/H} |sum_w Phi_h((w-C)/X) e((F(w + H h) - F(w))/p^n)|.

    F_of maps an integer array of w to integer values F(w) mod p^n.
    """
    H = p**kappa
    X = float(X)
    if H > X:
        raise ValueError("H = p^kappa must not exceed X")
    q = p**n
    ws, wt = weight_window(C, X, phi_w)
    base = F_of(ws)
    lhs = abs(complex(np.exp(2j * np.pi * (base % q) / q) @ wt)) ** 2
    hmax = math.ceil(2 * X / H) - 1
    acc = 0.0
    count = 0
    for h in range(-hmax, hmax + 1):
        if h == 0 or abs(h) >= 2 * X / H:
            continue
        wh = phi_w.shifted(H * h / X)
        ws_h, wt_h = weight_window(C, X, wh)
        if len(ws_h) == 0:
            continue
        diff = (F_of(ws_h + H * h) - F_of(ws_h)) % q
        acc += abs(complex(np.exp(2j * np.pi * diff / q) @ wt_h))
        count += 1
    rhs = X * H + H * acc
    return WeylStep(lhs, rhs, lhs / rhs, count)


def F_evaluator(state: PipelineState):
    """Vectorized F for weyl_step, memoized on residues mod p^n."""
    q = state.p**state.n
    cache: dict[int, int] = {}

    def F_of(ws):
        out = np.empty(len(ws), dtype=np.int64)
        for i, w in enumerate(np.asarray(ws).tolist()):
            r = w % q
            if r not in cache:
                cache[r] = F_value(state, r)
            out[i] = cache[r]
        return out

    return F_of


@dataclass(frozen=True)
class PoissonCheck:
    lhs: complex
    rhs: complex
    error: float
    terms: int

    @property
    def rel_error(self) -> float:
        return self.error / max(1.0, abs(self.lhs))


def _frac_phase(t: np.ndarray, shift: Fraction, q: int) -> np.ndarray:
    """e(t * shift / q) with the fractional part taken exactly."""
    den = shift.denominator * q
    num = [(int(ti) * shift.numerator) % den for ti in t]
    return np.exp(2j * np.pi * np.array(num, dtype=float) / den)


def poisson_identity(omega: SmoothWeight, C, X: float, q: int, r: int, eps: float = 1e-13, cut_eps: float = 1e-12) -> PoissonCheck:
    """sum_{t = r mod q} Omega((t-C)/X) vs (X/q) sum_t Omega^(tX/q) e(t(r-C)/q)."""
    C = Fraction(C)
    X = float(X)
    ts, wt = weight_window(C, X, omega)
    lhs = float(wt[(ts - r) % q == 0].sum())
    cut = fourier_cutoff(omega, cut_eps)
    T = int(math.ceil(cut * q / X))
    t = np.arange(-T, T + 1)
    vals, _ = fourier_transform_many(omega, t * X / q, tol=eps)
    rhs = complex(X / q * (vals @ _frac_phase(t, Fraction(r) - C, q)))
    return PoissonCheck(complex(lhs), rhs, abs(lhs - rhs), len(t))


def differenced_weight(phi_w: SmoothWeight, state: PipelineState, dp: DifferencedPhase) -> SmoothWeight:
    p, X = state.p, float(state.X)
    w = phi_w.shifted(p**dp.k1 * p**dp.l1 * dp.g1 / X)
    if dp.order == 2:
        w = w.shifted(p**dp.k2 * p**dp.l2 * dp.g2 / X)
    return w


def differenced_sum(state: PipelineState, dp: DifferencedPhase, phi_w: SmoothWeight = DEFAULT_WEIGHT) -> complex:
    """T(l1, g1) or T(l1, l2, g1, g2) directly: sum_w Omega((w-C)/X) e(f(w)/p^s)."""
    m = state.p**dp.s
    omega = differenced_weight(phi_w, state, dp)
    ws, wt = weight_window(state.C, float(state.X), omega)
    vals = dp.f.eval_array(ws % m, m)
    return complex(np.exp(2j * np.pi * vals / m) @ wt)


def differenced_sum_from_F(state: PipelineState, dp: DifferencedPhase, phi_w: SmoothWeight = DEFAULT_WEIGHT) -> complex:
    """The same sum with the phase taken from differences of F itself."""
    p, q = state.p, state.p**state.n
    omega = differenced_weight(phi_w, state, dp)
    ws, wt = weight_window(state.C, float(state.X), omega)
    F_of = F_evaluator(state)
    d1 = p ** (dp.k1 + dp.l1) * dp.g1
    if dp.order == 1:
        diff = F_of(ws + d1) - F_of(ws)
    else:
        d2 = p ** (dp.k2 + dp.l2) * dp.g2
        diff = F_of(ws + d1 + d2) - F_of(ws + d1) - F_of(ws + d2) + F_of(ws)
    return complex(np.exp(2j * np.pi * (diff % q) / q) @ wt)


def poisson_expansion(state: PipelineState, dp: DifferencedPhase, phi_w: SmoothWeight = DEFAULT_WEIGHT, eps: float = 1e-13, cut_eps: float = 1e-12) -> PoissonCheck:
    """(X/p^s) sum_t Omega^(tX/p^s) e(-tC/p^s) sum_{r mod p^s} e((f(r) + tr)/p^s)
    against the direct sum."""
    m = state.p**dp.s
    X = float(state.X)
    omega = differenced_weight(phi_w, state, dp)
    lhs = differenced_sum(state, dp, phi_w)
    S = twisted_complete_sums(dp.f, state.p, dp.s)
    cut = fourier_cutoff(omega, cut_eps)
    T = int(math.ceil(cut * m / X))
    t = np.arange(-T, T + 1)
    vals, _ = fourier_transform_many(omega, t * X / m, tol=eps)
    rhs = complex(X / m * np.sum(vals * _frac_phase(t, -state.C, m) * S[t % m]))
    return PoissonCheck(lhs, rhs, abs(lhs - rhs), len(t))


def poisson_T1(state: PipelineState, k1: int, l1: int, g1: int, phi_w: SmoothWeight = DEFAULT_WEIGHT, tol: float = 1e-6) -> PoissonCheck:
    dp = build_f1(state, k1, l1, g1)
    if dp.s < 2:
        raise PrecisionLoss("s1 must be at least 2")
    res = poisson_expansion(state, dp, phi_w)
    if res.rel_error > tol:
        raise ToleranceNotMet(f"T1 expansion off by {res.error:.3g}")
    return res


def poisson_T2(state: PipelineState, k1: int, k2: int, l1: int, l2: int, g1: int, g2: int, phi_w: SmoothWeight = DEFAULT_WEIGHT, tol: float = 1e-6) -> PoissonCheck:
    dp = build_f2(state, k1, k2, l1, l2, g1, g2)
    if dp.s < 2:
        raise PrecisionLoss("s2 must be at least 2")
    res = poisson_expansion(state, dp, phi_w)
    if res.rel_error > tol:
        raise ToleranceNotMet(f"T2 expansion off by {res.error:.3g}")
    return res

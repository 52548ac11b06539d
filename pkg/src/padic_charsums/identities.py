"""Identity suite for the transformation chain (used by the CLI and tests).

Each check returns a small dict; ``passed`` is False on the first failure
inside that check.  Exact checks compare integers / phases, numeric ones
use the stated relative tolerance.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .characters import char_construct, postnikov_a0
from .charsum_pipeline import (
    PipelineState,
    QuadraticForm,
    SumParams,
    first_difference_identity,
    make_state,
    poisson_identity,
    poisson_T1,
    poisson_T2,
    quadratic_completion,
    residue_split,
    second_difference_identity,
    sq_exponent_table,
    sum_Sigma,
    sum_Sigma_additive,
    sum_SQ,
    sum_SQ_split,
    sum_T,
    verify_F_representation,
    weyl_step,
    F_evaluator,
)
from .exceptions import CharSumError
from .smooth_weights import DEFAULT_WEIGHT, ScaledBump

EXHAUSTIVE = 5**4


def _close(a: complex, b: complex, rel: float) -> bool:
    return abs(a - b) <= rel * max(1.0, abs(a), abs(b))


def check_completion(Q: QuadraticForm, p: int, n: int, seed: int = 0) -> dict:
    q = p**n
    try:
        comp = quadratic_completion(Q, p, n, certify=True, seed=seed)
    except CharSumError as exc:
        return {"check": "completion", "passed": False, "error": str(exc)}
    return {"check": "completion", "passed": True, "alpha": comp.alpha, "points": q * q if q <= EXHAUSTIVE else 10_000}


def check_sq_split(Q: QuadraticForm, chi, M: int = 30, N: int = 30, A: int = 0, B: int = 0, exact: bool = True) -> dict:
    prm = SumParams(chi, A, B, M, N)
    s = sum_SQ(Q, prm)
    s1, s2 = sum_SQ_split(Q, prm)
    ok = _close(s, s1 + s2, 1e-10)
    out = {"check": "sq_split", "S": repr(s), "S1+S2": repr(s1 + s2)}
    if exact:
        ok &= sq_exponent_table(Q, prm, "direct") == sq_exponent_table(Q, prm, "split")
    out["passed"] = bool(ok)
    return out


def check_splits(chi, beta: int, B_tilde: int, N: float) -> dict:
    """residue coverage and T = sum of the class sums Sigma."""
    p, n = chi.p, chi.n
    try:
        classes = residue_split(beta, p, n, certify=True)
    except CharSumError as exc:
        return {"check": "splits", "passed": False, "error": str(exc)}
    a0 = postnikov_a0(chi, verify=False).a0
    total = 0j
    ok = True
    for u, v in classes:
        st = make_state(chi, beta, u, v, B_tilde, N, a0)
        sig = sum_Sigma(st)
        ok &= _close(sig, sum_Sigma_additive(st), 1e-10)
        total += sig
    T = sum_T(DEFAULT_WEIGHT, B_tilde, N, beta, chi)
    ok &= _close(T, total, 1e-10)
    return {"check": "splits", "passed": bool(ok), "classes": len(classes), "T": repr(T)}


def check_F_representation(chi, beta: int, seed: int = 0, samples: int = 10_000) -> dict:
    p, n = chi.p, chi.n
    q = p**n
    a0 = postnikov_a0(chi, verify=False).a0
    rng = random.Random(seed)
    total = 0
    try:
        for u, v in residue_split(beta, p, n):
            st = make_state(chi, beta, u, v, 0, 1, a0)
            ws = range(q) if q <= EXHAUSTIVE else [rng.randrange(q) for _ in range(samples)]
            total += verify_F_representation(st, ws)
    except CharSumError as exc:
        return {"check": "F_representation", "passed": False, "error": str(exc)}
    return {"check": "F_representation", "passed": True, "points": total}


def check_taylor(p: int, n: int, k1: int, k2: int, samples: int = 100, seed: int = 0) -> dict:
    """Both difference identities at random (beta, u, v, a0, w, h1, h2)."""
    rng = random.Random(seed)
    q = p**n
    ok = True
    for _ in range(samples):
        beta = rng.randrange(q)
        classes = residue_split(beta, p, n, certify=False)
        u, v = rng.choice(classes)
        a0 = rng.randrange(1, p ** (n - 1))
        if a0 % p == 0:
            a0 += 1
        st = PipelineState(None, beta, u, v, a0, Fraction(0), Fraction(1), p, n)
        w = rng.randrange(q)
        h1, h2 = rng.randrange(1, q), rng.randrange(1, q)
        ok &= first_difference_identity(st, k1, h1, [w])
        ok &= second_difference_identity(st, k1, k2, h1, h2, [w])
        if not ok:
            return {"check": "taylor", "passed": False, "p": p, "n": n, "k1": k1, "k2": k2,
                    "beta": beta, "u": u, "v": v, "a0": a0, "w": w, "h1": h1, "h2": h2}
    return {"check": "taylor", "passed": True, "p": p, "n": n, "k1": k1, "k2": k2, "samples": samples}


def poisson_instances(count: int, seed: int = 0):
    """Seeded (weight, C, X, q, r) for the plain Poisson identity."""
    rng = random.Random(seed)
    for i in range(count):
        w = DEFAULT_WEIGHT if i % 2 == 0 else ScaledBump(width=rng.uniform(0.3, 0.7), center=rng.uniform(-0.25, 0.25))
        q = 5 ** rng.randint(0, 3)
        X = rng.uniform(3, 60)
        C = Fraction(rng.randint(-500, 500), rng.choice([1, 3, 7]))
        yield w, C, X, q, rng.randrange(q)


def check_poisson(count: int = 20, seed: int = 0, tol: float = 1e-8) -> dict:
    worst = 0.0
    for w, C, X, q, r in poisson_instances(count, seed):
        res = poisson_identity(w, C, X, q, r)
        worst = max(worst, res.rel_error)
    return {"check": "poisson", "passed": worst <= tol, "instances": count, "max_rel_error": worst}


def expansion_instances(count: int, seed: int = 0, p: int = 5, n_values=(6, 7, 8)):
    """Seeded one- and two-shift configurations with s_i >= 2."""
    rng = random.Random(seed)
    for i in range(count):
        n = n_values[i % len(n_values)]
        q = p**n
        beta = rng.randrange(q)
        u, v = rng.choice(residue_split(beta, p, n, certify=False))
        a0 = rng.randrange(1, p ** (n - 1))
        if a0 % p == 0:
            a0 += 1
        N = rng.uniform(40, 400) * p
        Bt = rng.randrange(q)
        if i % 2 == 0:
            k1, l1 = rng.randint(1, 2), rng.randint(0, 1)
            yield ("T1", n, beta, u, v, a0, Bt, N, dict(k1=k1, l1=l1, g1=rng.choice([1, 2, 3, 4])))
        else:
            k1, k2 = rng.randint(1, 2), rng.randint(1, 2)
            l2 = rng.randint(0, min(1, n - k1 - k2 - 2))  # keeps s2 = n - k1 - k2 - l2 >= 2
            yield ("T2", n, beta, u, v, a0, Bt, N, dict(k1=k1, k2=k2, l1=0, l2=l2,
                                                        g1=rng.choice([1, 2, 3, 4]), g2=rng.choice([1, 2, 3, 4])))


def check_expansions(count: int = 20, seed: int = 0, p: int = 5, tol: float = 1e-6) -> dict:
    worst = 0.0
    for kind, n, beta, u, v, a0, Bt, N, kw in expansion_instances(count, seed, p):
        st = PipelineState(None, beta, u, v, a0, (Fraction(Bt) - v) / p, Fraction(N).limit_denominator(1000) / p, p, n)
        try:
            if kind == "T1":
                res = poisson_T1(st, kw["k1"], kw["l1"], kw["g1"], tol=tol)
            else:
                res = poisson_T2(st, kw["k1"], kw["k2"], kw["l1"], kw["l2"], kw["g1"], kw["g2"], tol=tol)
        except CharSumError as exc:
            return {"check": "expansions", "passed": False, "error": str(exc), "instance": [kind, n, beta, u, v, a0, Bt, N, kw]}
        worst = max(worst, res.rel_error)
    return {"check": "expansions", "passed": worst <= tol, "instances": count, "max_rel_error": worst}


def check_weyl(chi, beta: int, B_tilde: int = 0, N: float = 2000, kappa: int = 1, limit: float = 100.0) -> dict:
    a0 = postnikov_a0(chi, verify=False).a0
    worst = 0.0
    for u, v in residue_split(beta, chi.p, chi.n):
        st = make_state(chi, beta, u, v, B_tilde, N, a0)
        step = weyl_step(F_evaluator(st), DEFAULT_WEIGHT, st.C, st.X, chi.p, chi.n, kappa)
        worst = max(worst, step.ratio)
    return {"check": "weyl", "passed": worst <= limit, "max_ratio": worst}


def run_identity_suite(p: int, n: int, chi_index: int, Q: QuadraticForm, seed: int = 0, tol: float = 1e-6) -> dict:
    chi = char_construct(p, n, chi_index)
    rng = random.Random(seed)
    beta = rng.randrange(p**n)
    results = [
        check_completion(Q, p, n, seed),
        check_sq_split(Q, chi),
        check_splits(chi, beta, rng.randrange(p**n), 60),
        check_F_representation(chi, beta, seed),
        check_taylor(p, max(n, 6), 2, 2, samples=20, seed=seed),
        check_poisson(10, seed),
        check_expansions(6, seed, p, tol),
    ]
    return {"p": p, "n": n, "chi_index": chi_index, "results": results, "passed": all(r["passed"] for r in results)}

"""Seeded corpus of rational functions for complete-sum checks."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .exceptions import CharSumError
from .expsums import IntPolynomial, RationalFunc, clz_bound, complete_sums_multi, critical_points, poly_mod_p

PRIMES = (5, 7, 11)


def rational_corpus(count: int = 1000, seed: int = 1, primes=PRIMES):
    """Yield (p, f) with numerator degree <= 4 and denominator degree <= 3.

    Four shapes rotate: random integers; a p-power times a high-order root
    plus a smaller perturbation (forces nu >= 1); and two draws with
    p-divisible coefficients (forces t > 0).  The denominator never
    vanishes identically mod p.
    """
    rng = random.Random(seed)
    for i in range(count):
        p = primes[i % len(primes)]
        kind = i % 4
        if kind == 0:
            num = [rng.randint(-(p**3), p**3) for _ in range(rng.randint(1, 5))]
        elif kind == 1:
            e = rng.randint(0, 3)
            a = rng.randrange(p)
            k = rng.randint(2, 4)
            base = IntPolynomial((-a, 1)) ** k * rng.choice([1, 2, 3])
            extra = IntPolynomial(tuple(rng.randint(-p, p) for _ in range(rng.randint(1, 4))))
            num = list((base * p**e + extra * p ** (e + rng.randint(1, 3))).coeffs)
        else:
            num = [rng.randint(-(p**2), p**2) * p ** rng.randint(0, 2) for _ in range(rng.randint(2, 5))]
        while True:
            den = [rng.randint(-(p**2), p**2) for _ in range(rng.randint(1, 4))]
            if poly_mod_p(den, p):
                break
        yield p, RationalFunc.from_coeffs(num, den)


@dataclass
class CorpusReport:
    functions: int = 0
    skipped: int = 0  # no admissible m (t + 2 > max_m) or degenerate derivative
    checks: int = 0
    violations: list = field(default_factory=list)
    nu_counts: dict = field(default_factory=dict)
    max_excess: float = float("-inf")

    @property
    def passed(self) -> bool:
        return not self.violations


def run_clz_corpus(count: int = 1000, seed: int = 1, max_m: int = 6, slack: float = 1e-9) -> CorpusReport:
    rep = CorpusReport()
    for p, f in rational_corpus(count, seed):
        rep.functions += 1
        try:
            t, pts = critical_points(f, p)
        except CharSumError:
            rep.skipped += 1
            continue
        ms = list(range(t + 2, max_m + 1))
        if not ms:
            rep.skipped += 1
            continue
        nu = {c.alpha: c.nu for c in pts}
        sums = complete_sums_multi(f, p, ms)
        for m in ms:
            for a, s in sums[m].items():
                v = nu.get(a, 0)
                b = clz_bound(v, t, m, p)
                rep.checks += 1
                rep.nu_counts[v] = rep.nu_counts.get(v, 0) + 1
                rep.max_excess = max(rep.max_excess, abs(s) - b)
                if abs(s) > b + slack:
                    rep.violations.append(dict(p=p, f=repr(f), t=t, m=m, alpha=a, nu=v, abs_sum=abs(s), bound=b))
    rep.nu_counts = dict(sorted(rep.nu_counts.items()))
    return rep

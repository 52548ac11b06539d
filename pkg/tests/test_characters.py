import cmath

import pytest

from padic_charsums.characters import (
    UnitPhase,
    char_construct,
    char_eval,
    postnikov_a0,
    postnikov_identity_holds,
    sample_primitive_indices,
    smallest_primitive_root,
)
from padic_charsums.exceptions import NotPrimitive


def brute_dlog(x, g, q):
    y, k = 1, 0
    while y != x % q:
        y = y * g % q
        k += 1
    return k


def test_primitive_root_mod_25():
    assert smallest_primitive_root(5, 2) == 2
    assert smallest_primitive_root(7, 3) == 3


def test_values_mod_25():
    chi = char_construct(5, 2, 1)
    assert chi(2) == UnitPhase(1, 20)
    assert chi(7) == UnitPhase(5, 20)
    assert chi(6) == UnitPhase(8, 20)
    assert chi(25) is None and chi(10) is None


@pytest.mark.parametrize("p,n,idx", [(5, 3, 7), (7, 2, 11), (11, 2, 3)])
def test_against_brute_dlog(p, n, idx):
    chi = char_construct(p, n, idx)
    q, phi = p**n, chi.phi
    for x in range(1, q):
        if x % p == 0:
            assert chi(x) is None
            continue
        k = brute_dlog(x, chi.g, q)
        assert chi(x) == UnitPhase(idx * k, phi)
        assert abs(chi.values[x] - cmath.exp(2j * cmath.pi * idx * k / phi)) < 1e-12


def test_multiplicative_and_conjugate():
    chi = char_construct(7, 3, 5)
    q = 343
    for x in range(1, 60):
        for y in (3, 10, 100):
            if x % 7 and y % 7:
                assert chi(x * y) == chi(x) * chi(y)
                assert chi.conjugate()(x) == chi(x).conjugate()


def test_unit_phase_equality_by_value():
    assert UnitPhase(2, 10) == UnitPhase(1, 5)
    assert hash(UnitPhase(2, 10)) == hash(UnitPhase(1, 5))
    assert UnitPhase(3, 4) * UnitPhase(1, 4) == UnitPhase(0, 1)


def test_construct_errors():
    with pytest.raises(ValueError):
        char_construct(5, 1, 1)
    with pytest.raises(NotPrimitive):
        char_construct(5, 3, 10)


def test_primitive_is_nontrivial_on_top_subgroup():
    # primitive <=> chi nontrivial on 1 + p^(n-1) Z
    for idx in range(20):
        chi = char_construct(5, 2, idx, primitive=False)
        nontrivial = any(chi(1 + 5 * t) != UnitPhase(0, 1) for t in range(5))
        assert nontrivial == chi.is_primitive


def test_a0_mod_25():
    chi = char_construct(5, 2, 1)
    assert postnikov_a0(chi).a0 == 2
    assert postnikov_a0(chi.conjugate()).a0 == 3  # -2 mod 5


def test_a0_identity_and_uniqueness():
    chi = char_construct(7, 3, 4)
    a0 = postnikov_a0(chi).a0
    for t in range(49):
        assert postnikov_identity_holds(chi, a0, t)
    # no other residue mod 49 works at t = 1
    assert [a for a in range(49) if postnikov_identity_holds(chi, a, 1)] == [a0]


def test_sampling():
    assert len(sample_primitive_indices(5, 2, 20)) == 16  # exhaustive
    s = sample_primitive_indices(7, 5, 20, seed=3)
    assert len(s) == 20 and s == sample_primitive_indices(7, 5, 20, seed=3)
    assert all(i % 7 for i in s)

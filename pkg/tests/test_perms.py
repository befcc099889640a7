import itertools

import pytest

from desarrange import perms
from desarrange.perms import (
    CapExceededError, InvariantError, complement, descent_composition,
    enumerate_class, first_ascent, is_derangement, is_desarrangement,
    perm_from_str, perm_to_str, pixed_factorization, standardize, statistics,
)

from reference_tables import DERANGEMENT_NUMBERS


def all_perms(n):
    return itertools.permutations(range(1, n + 1))


def test_standardize():
    assert standardize((3, 6, 8, 1, 5)) == (2, 4, 5, 1, 3)
    assert standardize(()) == ()
    assert standardize((1, 2, 3)) == (1, 2, 3)
    with pytest.raises(ValueError):
        standardize((1, 1, 2))


def test_complement():
    assert complement((3, 1, 2, 5, 4)) == (3, 5, 4, 1, 2)
    assert complement(()) == ()
    assert complement((2, 1)) == (1, 2)
    for n in range(7):
        for p in all_perms(n):
            assert complement(complement(p)) == p


def test_statistics_examples():
    assert statistics((3, 1, 2, 5, 4)).des == 2
    rec = statistics((2, 1, 4, 5, 7, 3, 6, 8, 9))
    assert (rec.pk, rec.val, rec.dasc, rec.ddes) == (1, 2, 4, 0)
    rec = statistics((4, 3, 2, 1))
    assert rec.first_ascent == 4 and rec.des == 3 and rec.asc == 1
    rec = statistics(())
    assert rec.first_ascent is None
    assert (rec.des, rec.asc, rec.pk, rec.val, rec.rval, rec.fix, rec.pix) == (0,) * 7


def test_is_desarrangement():
    assert is_desarrangement((2, 1, 3))
    assert not is_desarrangement((1, 2, 3))
    assert is_desarrangement(())
    assert not is_desarrangement((1,))
    assert is_desarrangement((4, 3, 2, 1))
    assert not is_desarrangement((5, 4, 3, 2, 1))


def test_descent_composition():
    assert descent_composition((3, 1, 7, 5, 4, 2, 6, 8, 9)) == (1, 2, 1, 1, 4)
    assert descent_composition((1, 2, 3, 4, 5)) == (5,)
    assert descent_composition((5, 4, 3, 2, 1)) == (1, 1, 1, 1, 1)
    assert descent_composition(()) == ()
    for n in range(7):
        for p in all_perms(n):
            assert sum(descent_composition(p)) == n


def test_pixed_factorization_examples():
    f = pixed_factorization((4, 6, 7, 8, 5, 2, 1, 3))
    assert f.iota_len == 3 and f.delta == (8, 5, 2, 1, 3)
    f = pixed_factorization((2, 1, 3))
    assert f.iota_len == 0 and f.delta == (2, 1, 3)
    f = pixed_factorization((1, 2, 3))
    assert f.iota_len == 3 and f.delta == ()
    assert pixed_factorization(()).iota_len == 0


def test_pixed_factorization_roundtrip_and_uniqueness():
    # the constructor itself asserts uniqueness; this is exhaustive n <= 8
    for n in range(9):
        for p in all_perms(n):
            f = pixed_factorization(p)
            assert p[: f.iota_len] + f.delta == p
            assert all(v < w for v, w in zip(p[: f.iota_len], p[1: f.iota_len]))
            assert is_desarrangement(f.delta)


def test_statistic_identities():
    for n in range(8):
        for p in all_perms(n):
            rec = statistics(p)
            assert rec.des + rec.asc == n
            assert perms.pk(p) == perms.val(complement(p))
            if n and is_desarrangement(p):
                assert rec.rval == rec.pk + 1
            assert (rec.pix == 0) == is_desarrangement(p)


def test_pix_fix_equidistributed():
    from collections import Counter
    for n in range(10):
        fixes = Counter(perms.fix(p) for p in all_perms(n))
        pixes = Counter(perms.pix(p) for p in all_perms(n))
        assert fixes == pixes


def test_enumerate_counts():
    for n in range(8):
        des_count = sum(1 for _ in enumerate_class(n, "desarrangements"))
        der_count = sum(1 for _ in enumerate_class(n, "derangements"))
        assert des_count == der_count == DERANGEMENT_NUMBERS[n]


def test_enumerate_examples():
    d4 = list(enumerate_class(4, "desarrangements"))
    assert len(d4) == 9 and d4[0] == (2, 1, 3, 4)
    assert d4 == sorted(d4)
    assert list(enumerate_class(1, "desarrangements")) == []
    assert list(enumerate_class(0, "all")) == [()]
    for p in enumerate_class(5, "derangements"):
        assert is_derangement(p)


def test_enumeration_cap(monkeypatch):
    monkeypatch.delenv(perms.CAP_ENV_VAR, raising=False)
    with pytest.raises(CapExceededError):
        next(enumerate_class(12, "all"))
    assert next(enumerate_class(12, "all", cap=12)) == tuple(range(1, 13))
    monkeypatch.setenv(perms.CAP_ENV_VAR, "3")
    with pytest.raises(CapExceededError):
        next(enumerate_class(4, "all"))


def test_pattern_primitives():
    assert perms.triple_pattern(5, 3, 4) == (3, 1, 2)
    assert perms.contains_pattern((2, 1, 5, 3, 6, 4), (3, 1, 2))  # 534 inside
    assert not perms.contains_pattern((4, 3, 2, 6, 5, 1), (3, 1, 2))
    assert not perms.contains_pattern((), (1, 2, 3))
    with pytest.raises(ValueError):
        perms.contains_pattern((1, 2, 3), (1, 2))


def test_serialization():
    assert perm_to_str((3, 1, 2, 5, 4)) == "31254"
    assert perm_to_str(()) == "e"
    long = tuple(range(10, 0, -1))
    assert perm_to_str(long) == "10,9,8,7,6,5,4,3,2,1"
    for p in [(), (1,), (3, 1, 2, 5, 4), long]:
        assert perm_from_str(perm_to_str(p)) == p
    with pytest.raises(ValueError):
        perm_from_str("122")


def test_invariant_error_is_assertion():
    assert issubclass(InvariantError, AssertionError)


def test_first_ascent_range():
    for n in range(1, 8):
        for p in all_perms(n):
            assert 1 <= first_ascent(p) <= n

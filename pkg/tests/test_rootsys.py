from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from equifocal.rootsys import (ExactVector, Root, RootSystem, RootSystemError, build_root_system,
                               check_root_system_conditions, check_weakly_root_system, decompose,
                               direct_sum, frame_subspaces, kernel_multiplicity, restrict)

E = ExactVector

# counts from enumerating the standard constructions by hand
ROOT_COUNTS = [("A", 1, 2), ("A", 2, 6), ("A", 3, 12), ("B", 2, 8), ("B", 3, 18), ("C", 3, 18),
               ("BC", 1, 4), ("BC", 2, 12), ("D", 4, 24), ("G2", None, 12), ("F4", None, 48),
               ("E6", None, 72), ("E7", None, 126), ("E8", None, 240)]


fractions = st.fractions(min_value=-10, max_value=10, max_denominator=12)


@given(st.lists(fractions, min_size=3, max_size=3), st.lists(fractions, min_size=3, max_size=3), fractions)
def test_exact_arithmetic(a, b, s):
    u, v = E(a), E(b)
    assert (u + v) - v == u
    assert (u * s).dot(v) == s * u.dot(v)
    assert u.dot(v) == sum(x * y for x, y in zip(a, b))


def test_parse_and_json():
    v = E.parse("1, -1/2,3")
    assert v.coords == (1, Fraction(-1, 2), 3)
    assert v.to_json() == [[1, 1], [-1, 2], [3, 1]]
    assert E(v.to_json()) == v


@pytest.mark.parametrize("tag,rank,count", ROOT_COUNTS)
def test_root_counts(tag, rank, count):
    rs = build_root_system(tag, rank)
    assert len(rs) == count
    assert len(rs.positive_roots()) == count // 2
    assert check_weakly_root_system(rs)
    assert check_root_system_conditions(rs).cond_iii == (tag != "BC")


def test_build_examples():
    a2 = build_root_system("A", 2)
    assert a2.ambient_dim == 3 and a2.rank() == 2
    bc1 = build_root_system("BC", 1)
    assert bc1.vectors == {E([1]), E([-1]), E([2]), E([-2])}
    assert len(build_root_system("E8").simple_roots()) == 8


def test_build_errors():
    with pytest.raises(RootSystemError):
        build_root_system("Q", 2)
    with pytest.raises(RootSystemError):
        build_root_system("F4", 3)
    with pytest.raises(RootSystemError):
        build_root_system("D", 1)


def test_root_and_system_validation():
    with pytest.raises(RootSystemError):
        Root(E([0, 0]))
    with pytest.raises(RootSystemError):
        Root(E([1, 0]), 0)
    with pytest.raises(RootSystemError):
        RootSystem(2, (Root(E([1, 0]), 2), Root(E([-1, 0]), 1)))


def test_weakly_root_system_examples():
    assert check_weakly_root_system(build_root_system("B", 2))
    assert not check_weakly_root_system(RootSystem.from_vectors([E([1, 0]), E([1, 1])]))
    assert check_weakly_root_system(RootSystem(2, ()))


def test_conditions_examples():
    f4 = check_root_system_conditions(build_root_system("F4"))
    assert (f4.cond_i, f4.cond_ii, f4.cond_iii) == (True, True, True)
    bc2 = check_root_system_conditions(build_root_system("BC", 2))
    assert (bc2.cond_i, bc2.cond_ii, bc2.cond_iii) == (True, True, False)
    one = check_root_system_conditions(RootSystem.from_vectors([E([1])]))
    assert (one.cond_i, one.cond_ii, one.cond_iii) == (True, True, True)


def test_restrict_b2_to_axis():
    out = restrict(build_root_system("B", 2), [E([1, 0])])
    assert out.vectors == {E([1, 0]), E([-1, 0])}
    assert out.multiplicity(E([1, 0])) == 3
    assert kernel_multiplicity(build_root_system("B", 2), [E([1, 0])]) == 2


def test_restrict_a2_to_root_line():
    out = restrict(build_root_system("A", 2), [E([1, -1, 0])])
    # e1-e2 projects to itself; e1-e3 and e2-e3 project to +-(e1-e2)/2
    half = E([Fraction(1, 2), Fraction(-1, 2), 0])
    assert out.multiplicity(E([1, -1, 0])) == 1
    assert out.multiplicity(half) == 2
    assert len(out) == 4 and check_weakly_root_system(out)


def test_restrict_identity_and_dependent_basis():
    b3 = build_root_system("B", 3)
    same = restrict(b3, [E.unit(3, i) for i in range(3)])
    assert same.roots == b3.roots
    with pytest.raises(RootSystemError):
        restrict(b3, [E([1, 0, 0]), E([2, 0, 0])])


def _random_basis(rng, dim, k):
    while True:
        basis = [E([rng.randint(-2, 2) for _ in range(dim)]) for _ in range(k)]
        from equifocal.rootsys import exact_rank
        if exact_rank(basis) == k:
            return basis


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([("A", 3), ("B", 3), ("C", 3), ("D", 4), ("BC", 2), ("F4", None)]),
       st.integers(0, 10**6))
def test_restrict_functorial_and_conserves_multiplicity(case, seed):
    rng = random.Random(seed)
    rs = build_root_system(*case)
    dim = rs.ambient_dim
    big = _random_basis(rng, dim, min(3, dim))
    sub = big[:2]
    assert restrict(restrict(rs, big), sub).roots == restrict(rs, sub).roots
    out = restrict(rs, big)
    assert out.total_multiplicity() + kernel_multiplicity(rs, big) == rs.total_multiplicity()


@pytest.mark.parametrize("case", [("A", 4), ("B", 3), ("C", 4), ("BC", 3), ("D", 4), ("F4", None)])
def test_frame_restrictions_are_weakly_root_systems(case):
    rs = build_root_system(*case)
    for basis in frame_subspaces(*case):
        assert check_weakly_root_system(restrict(rs, basis)), basis


def test_decompose():
    b2a1 = direct_sum(build_root_system("B", 2), build_root_system("A", 1))
    assert b2a1.ambient_dim == 4
    comps = decompose(b2a1)
    assert [len(c) for c in comps] == [2, 8] or [len(c) for c in comps] == [8, 2]
    assert len(decompose(build_root_system("F4"))) == 1
    assert decompose(RootSystem(2, ())) == []
    # disjoint union recovers the input
    assert sorted(r for c in comps for r in c.vectors) == sorted(b2a1.vectors)


def test_json_roundtrip():
    rs = restrict(build_root_system("B", 2), [E([1, 0])])
    back = RootSystem.from_json(rs.to_json())
    assert back.roots == rs.roots
    with pytest.raises(RootSystemError):
        RootSystem.from_json({"roots": [{}]})

from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from equifocal.focal import (HALF_INTEGER_PI, INTEGER_PI, FocalError, FocalHyperplane,
                             arrangement_csv, arrangement_from_offsets, arrangement_invariance,
                             arrangement_reflections, arrangement_svg, complex_focal_radii,
                             focal_residual, hermann_focal_arrangement, ideal_boundary_focal,
                             jacobi_norm_sq, lifted_spectrum, lifted_values, offset_violations,
                             real_focal_set)
from equifocal.hermann import load_hermann_catalog, to_ambient
from equifocal.reflgroup import AffineIsometry, GeneratedGroup, affine_reflection, generate_affine_ball
from equifocal.rootsys import ExactVector

E = ExactVector

# reference values evaluated with mpmath at 30 digits
ATANH_HALF = 0.549306144334054845697622618461
INV_ATANH_HALF = 1.82047845325367478722848033147
TWO_OVER_PI = 0.636619772367581343075535053490


@pytest.fixture(scope="module")
def actions():
    return {a.key: a for a in load_hermann_catalog() if a.has_split and a.root_system.rank() <= 2}


def test_focal_radii_examples():
    (z,) = complex_focal_radii(2.0, 1.0, [0])
    assert z.real == pytest.approx(ATANH_HALF, abs=1e-12) and z.imag == 0
    assert complex_focal_radii(3.0, 0.0) == [pytest.approx(1 / 3)]
    assert complex_focal_radii(1.0, 1.0) == []
    assert complex_focal_radii(0.0, 0.0) == []
    with pytest.raises(FocalError):
        complex_focal_radii(1.0, -1.0)


def test_focal_radii_branches():
    zs = complex_focal_radii(0.5, 1.5, (-1, 1))
    assert [round(z.imag * 1.5 / math.pi, 12) for z in zs] == [-0.5, 0.5, 1.5]
    assert all(focal_residual(z, 0.5, 1.5) < 1e-9 for z in zs)


def test_lifted_examples():
    assert lifted_values(2.0, -1.0, [0])[0].real == pytest.approx(INV_ATANH_HALF, abs=1e-12)
    (w,) = lifted_values(0.0, -1.0, [0])
    assert w.real == pytest.approx(0, abs=1e-15) and w.imag == pytest.approx(-TWO_OVER_PI, abs=1e-12)
    assert lifted_values(5.0, 0.0) == [5]
    assert lifted_spectrum([(5.0, 0.0)], [0]) == [0, 5]
    with pytest.raises(FocalError):
        lifted_spectrum([(1.0, -1.0)])


@settings(max_examples=200, deadline=None)
@given(st.floats(-20, 20), st.floats(0.01, 10), st.integers(-5, 5))
def test_duality(lam, beta, j):
    assume(abs(abs(lam) - beta) > 1e-6)
    (z,) = complex_focal_radii(lam, beta, [j])
    (w,) = lifted_values(lam, -beta * beta, [j])
    assert abs(w * z - 1) < 1e-9
    assert focal_residual(z, lam, beta) < 1e-9 * max(1.0, abs(lam) / beta)


def test_jacobi_norm_examples():
    for t in (0.0, 0.5, 3.0):
        assert jacobi_norm_sq([(1.0, -1.0, 1.0)], t) == pytest.approx(math.exp(-2 * t), rel=1e-9)
        assert jacobi_norm_sq([(0.0, 0.0, 1.0)], t) == 1.0
    assert jacobi_norm_sq([(2.0, 0.0, 1.0)], 0.5) == 0.0


def test_growth_dichotomy():
    assert jacobi_norm_sq([(2.0, -1.0, 1.0), (0.3, 0.0, 1.0)], 50) / 50**2 > 1e10
    decay = jacobi_norm_sq([(2.0, -4.0, 1.0)], 50)
    assert decay <= 4 * math.exp(-2 * 50 * 2 * 0.99)


def test_ideal_boundary_examples():
    r = ideal_boundary_focal([(1.0, -1.0)])
    assert (r.has_focal, r.has_non_euclidean_focal) == (True, True)
    r = ideal_boundary_focal([(2.0, -1.0)])
    assert (r.has_focal, r.has_non_euclidean_focal) == (False, False)
    r = ideal_boundary_focal([(0.0, 0.0)])
    assert (r.has_focal, r.has_non_euclidean_focal) == (True, False)
    with pytest.raises(FocalError):
        ideal_boundary_focal([(0.0, 1.0)])


def test_hermann_arrangement_isotropy(actions):
    a = actions["SO(3) on AI[n=3]"]
    xi = to_ambient(a, E([1, 2]))
    arr = hermann_focal_arrangement(a, xi, (-2, 2))
    assert {h.family for h in arr} == {INTEGER_PI}
    assert len({h.root for h in arr}) == 3
    rfs = real_focal_set(arr)
    assert rfs.common_point == -xi
    listed = hermann_focal_arrangement(a, xi, [])
    assert len(listed) == 3 and all(h.j is None and h.level is None for h in listed)


def test_hermann_arrangement_levels(actions):
    a = actions["SO0(1,3) on AIII[p=1,q=3]"]
    arr = hermann_focal_arrangement(a, E([Fraction(1, 3)]), [0])
    by_family = {(h.root, h.family): h for h in arr}
    h = by_family[(E([1]), HALF_INTEGER_PI)]
    assert h.level == pytest.approx(complex(-1 / 3, math.pi / 2))
    assert (E([2]), INTEGER_PI) not in by_family


def test_real_focal_set_generic_and_parallel():
    z = E([Fraction(1, 2), Fraction(-2, 3)])
    roots = [E([1, 0]), E([1, 1]), E([1, -1])]
    arr = arrangement_from_offsets({r: [(r.dot(z), INTEGER_PI)] for r in roots}, [0])
    assert real_focal_set(arr).common_point == z
    parallel = arrangement_from_offsets({E([1, 0]): [(Fraction(0), INTEGER_PI), (Fraction(1), INTEGER_PI)]}, [0])
    rfs = real_focal_set(parallel)
    assert rfs.common_point is None and rfs.empty_intersection
    assert offset_violations(parallel) == [E([1, 0])]
    floaty = arrangement_from_offsets({r: [(float(r.dot(z)), INTEGER_PI)] for r in roots}, [0])
    assert list(real_focal_set(floaty).common_point) == pytest.approx([0.5, -2 / 3])


def test_offsets_coincide_on_hermann_data(actions):
    for a in actions.values():
        xi = to_ambient(a, E([Fraction(3, 7), Fraction(5, 11)][: len(a.root_system.simple_roots())]))
        assert offset_violations(hermann_focal_arrangement(a, xi)) == []


def test_a1_arrangement_invariance():
    a = E([1])
    arr = [FocalHyperplane(a, INTEGER_PI, 0.0, j) for j in range(-3, 4)]
    ball = generate_affine_ball([affine_reflection(a, 0), affine_reflection(a, 1)], 4)
    assert arrangement_invariance(arr, ball)
    broken = [h for h in arr if h.j != 1]
    assert not arrangement_invariance(broken, ball)
    ident = GeneratedGroup([], frozenset({AffineIsometry.identity(1)}), True)
    assert arrangement_invariance(broken, ident)


def test_arrangement_invariance_detects_missing_family(actions):
    a = actions["SO(3) on AI[n=3]"]
    arr = hermann_focal_arrangement(a, to_ambient(a, E([1, 2])), (-2, 2))
    ball = generate_affine_ball(arrangement_reflections(arr), 3)
    assert arrangement_invariance(arr, ball)
    dropped = arr[0].root
    assert not arrangement_invariance([h for h in arr if h.root != dropped], ball)


def test_mixed_arrangement_invariance(actions):
    a = actions["SO0(2,3) on AIII[p=2,q=3]"]
    arr = hermann_focal_arrangement(a, to_ambient(a, E([Fraction(1, 3), Fraction(2, 5)])), (-3, 3))
    ball = generate_affine_ball(arrangement_reflections(arr), 4)
    assert arrangement_invariance(arr, ball, 1e-9)


def test_exports(actions):
    a = actions["SO(3) on AI[n=3]"]
    arr = hermann_focal_arrangement(a, E([1, 2]), [0])
    text = arrangement_csv(arr)
    lines = text.strip().split("\r\n")
    assert lines[0] == "root,family,base_offset,j,level_re,level_im" and len(lines) == 4
    svg = arrangement_svg(arr)
    assert svg.count("<line") == 3 and "<circle" in svg

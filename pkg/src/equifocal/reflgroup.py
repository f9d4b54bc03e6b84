"""Finite reflection groups and word-length balls of affine Weyl groups.

Group elements are exact affine isometries ``x -> L x + t`` with rational
entries; deduplication hashes the entries directly.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import sympy
from sympy.matrices.normalforms import hermite_normal_form

from .rootsys import ExactVector, RootSystem, decompose

Matrix = tuple[tuple[Fraction, ...], ...]


class GroupError(ValueError):
    pass


def _identity(n: int) -> Matrix:
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


@dataclass(frozen=True)
class AffineIsometry:
    linear: Matrix
    translation: tuple[Fraction, ...]

    @classmethod
    def identity(cls, dim: int) -> AffineIsometry:
        return cls(_identity(dim), tuple(Fraction(0) for _ in range(dim)))

    @classmethod
    def translation_by(cls, v: ExactVector) -> AffineIsometry:
        return cls(_identity(v.dim), tuple(v.coords))

    @property
    def dim(self) -> int:
        return len(self.translation)

    def __call__(self, x: ExactVector) -> ExactVector:
        return ExactVector(sum((a * b for a, b in zip(row, x.coords)), t)
                           for row, t in zip(self.linear, self.translation))

    def __matmul__(self, other: AffineIsometry) -> AffineIsometry:
        """Composition: (self @ other)(x) = self(other(x))."""
        n = self.dim
        L, M = self.linear, other.linear
        cols = list(zip(*M))
        prod = tuple(tuple(sum((a * b for a, b in zip(row, col)), Fraction(0)) for col in cols)
                     for row in L)
        t = tuple(sum((a * b for a, b in zip(row, other.translation)), self.translation[i])
                  for i, row in enumerate(L))
        assert len(t) == n
        return AffineIsometry(prod, t)

    def inverse(self) -> AffineIsometry:
        Lt = tuple(zip(*self.linear))
        t = tuple(-sum((a * b for a, b in zip(row, self.translation)), Fraction(0)) for row in Lt)
        return AffineIsometry(tuple(tuple(r) for r in Lt), t)

    def is_orthogonal(self) -> bool:
        cols = list(zip(*self.linear))
        n = self.dim
        return all(sum((a * b for a, b in zip(cols[i], cols[j])), Fraction(0)) == int(i == j)
                   for i in range(n) for j in range(n))

    def is_linear(self) -> bool:
        return not any(self.translation)

    def is_pure_translation(self) -> bool:
        return self.linear == _identity(self.dim)

    def to_json(self) -> dict:
        return {
            "matrix": [[[c.numerator, c.denominator] for c in row] for row in self.linear],
            "translation": [[c.numerator, c.denominator] for c in self.translation],
        }


def reflection(root: ExactVector) -> AffineIsometry:
    """Linear reflection in the hyperplane orthogonal to ``root``."""
    return affine_reflection(root, 0)


def affine_reflection(root: ExactVector, level) -> AffineIsometry:
    """Reflection in {x : <x, root> = level}: x -> x - (<x,root> - level) 2 root/<root,root>."""
    if root.is_zero():
        raise GroupError("cannot reflect in a zero root")
    n = root.dim
    a = root.coords
    k = 2 / root.norm2()
    lin = tuple(tuple(Fraction(int(i == j)) - k * a[i] * a[j] for j in range(n)) for i in range(n))
    lvl = Fraction(level)
    return AffineIsometry(lin, tuple(k * lvl * a[i] for i in range(n)))


@dataclass
class GeneratedGroup:
    generators: list[AffineIsometry]
    elements: frozenset[AffineIsometry]
    is_complete: bool
    diagnostic: str = field(default="")

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, g: AffineIsometry) -> bool:
        return g in self.elements

    def to_json(self) -> str:
        return json.dumps([g.to_json() for g in sorted(self.elements, key=_sort_key)])


def _sort_key(g: AffineIsometry):
    return (g.linear, g.translation)


def _require_dim(generators: Sequence[AffineIsometry], dim: int | None) -> int:
    if generators:
        return generators[0].dim
    if dim is None:
        raise GroupError("dimension needed when there are no generators")
    return dim


def generate_finite(generators: Sequence[AffineIsometry], max_order: int = 10**6,
                    dim: int | None = None) -> GeneratedGroup:
    """Breadth-first closure of linear generators; stops once ``max_order`` is exceeded."""
    for g in generators:
        if not g.is_linear():
            raise GroupError("generate_finite requires generators with zero translation")
    n = _require_dim(generators, dim)
    e = AffineIsometry.identity(n)
    seen = {e}
    queue = deque([e])
    while queue:
        x = queue.popleft()
        for g in generators:
            y = g @ x
            if y not in seen:
                seen.add(y)
                if len(seen) > max_order:
                    return GeneratedGroup(list(generators), frozenset(seen), False,
                                          f"closure exceeded max_order={max_order}")
                queue.append(y)
    return GeneratedGroup(list(generators), frozenset(seen), True)


def generate_affine_ball(generators: Sequence[AffineIsometry], word_length: int,
                         dim: int | None = None) -> GeneratedGroup:
    """All products of at most ``word_length`` generators or their inverses."""
    n = _require_dim(generators, dim)
    gens = list(generators)
    letters = list({*gens, *(g.inverse() for g in gens)})
    letters.sort(key=_sort_key)
    e = AffineIsometry.identity(n)
    seen = {e}
    frontier = [e]
    for _ in range(word_length):
        nxt = []
        for x in frontier:
            for g in letters:
                y = g @ x
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return GeneratedGroup(gens, frozenset(seen), False, f"word-length ball, radius {word_length}")


def root_reflections(rs: RootSystem, simple: bool = False) -> list[AffineIsometry]:
    vecs = rs.simple_roots() if simple else [r.vector for r in rs.positive_roots()]
    return [reflection(v) for v in vecs]


def affine_generators(rs: RootSystem, levels: Iterable[int] = (0, 1)) -> list[AffineIsometry]:
    """Affine reflections s_{alpha,j} for positive roots and the given integer levels."""
    return [affine_reflection(r.vector, j) for r in rs.positive_roots() for j in levels]


def coroot_lattice_contains(rs: RootSystem, t: ExactVector) -> bool:
    """Is ``t`` an integer combination of the coroots 2a/<a,a>?"""
    coroots = [r.vector * (Fraction(2) / r.vector.norm2()) for r in rs.positive_roots()]
    if not coroots:
        return t.is_zero()
    den = 1
    for v in coroots + [t]:
        for c in v.coords:
            den = den * c.denominator // _gcd(den, c.denominator)
    gens = sympy.Matrix([[int(c * den) for c in v.coords] for v in coroots]).T
    target = [int(c * den) for c in t.coords]
    # column-style HNF spans the same lattice as the generator columns
    H = hermite_normal_form(gens)
    basis = [list(H[:, j]) for j in range(H.cols) if any(H[:, j])]
    if not basis:
        return not any(target)
    B = sympy.Matrix(basis).T
    sol, params = _solve(B, sympy.Matrix(target))
    if sol is None:
        return False
    return all(sympy.Rational(x).q == 1 for x in sol)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _solve(B: sympy.Matrix, b: sympy.Matrix):
    try:
        sol, params = B.gauss_jordan_solve(b)
    except ValueError:
        return None, None
    return sol.subs({p: 0 for p in params}), params


def translation_lattice_check(group_ball: GeneratedGroup, rs: RootSystem) -> bool:
    """Every pure translation in the ball lies in the coroot lattice of ``rs``."""
    for g in group_ball.elements:
        if g.is_pure_translation() and not coroot_lattice_contains(rs, ExactVector(g.translation)):
            return False
    return True


def is_subgroup_of(sub_gens: Sequence[AffineIsometry], ambient: GeneratedGroup) -> bool:
    if not ambient.is_complete:
        raise GroupError("ambient group must be completely enumerated")
    if any(g not in ambient.elements for g in sub_gens):
        return False
    dim = next(iter(ambient.elements)).dim
    sub = generate_finite(sub_gens, max_order=ambient.order, dim=dim)
    if not sub.is_complete:
        return False
    return sub.elements <= ambient.elements


def is_decomposable(rs: RootSystem) -> bool:
    return len(decompose(rs)) >= 2


# |W| for irreducible types, used as a cross-check on enumerated orders
def weyl_group_order(type_tag: str, rank: int | None = None) -> int:
    from math import factorial
    tag = type_tag.strip().upper()
    fixed = {"E6": 51840, "E7": 2903040, "E8": 696729600, "F4": 1152, "G2": 12}
    if tag in fixed:
        return fixed[tag]
    n = int(rank)
    if tag == "A":
        return factorial(n + 1)
    if tag in ("B", "C", "BC"):
        return 2**n * factorial(n)
    if tag == "D":
        return 2**(n - 1) * factorial(n)
    raise GroupError(f"unknown type {type_tag!r}")

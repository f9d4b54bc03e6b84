"""Exact root systems.

Vectors carry :class:`fractions.Fraction` coordinates so that reflection
closure, axiom checks and merging of restricted roots never round.
Positivity is the lexicographic order on coordinates.
"""
from __future__ import annotations

import itertools
import json
import functools
import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import sympy


class RootSystemError(ValueError):
    """Raised for malformed or unsupported root-system input."""


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (list, tuple)) and len(x) == 2:
        return Fraction(int(x[0]), int(x[1]))
    if isinstance(x, float):
        return Fraction(x).limit_denominator()
    return Fraction(x)


@dataclass(frozen=True, order=True)
class ExactVector:
    coords: tuple[Fraction, ...]

    def __init__(self, coords: Iterable):
        object.__setattr__(self, "coords", tuple(_frac(c) for c in coords))

    @classmethod
    def zeros(cls, dim: int) -> ExactVector:
        return cls([0] * dim)

    @classmethod
    def unit(cls, dim: int, i: int, scale=1) -> ExactVector:
        c = [0] * dim
        c[i] = scale
        return cls(c)

    @classmethod
    def parse(cls, text: str) -> ExactVector:
        """Parse ``"1,-1/2,3"`` into a vector."""
        return cls(Fraction(t.strip()) for t in text.split(",") if t.strip())

    @property
    def dim(self) -> int:
        return len(self.coords)

    def __len__(self) -> int:
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def _check(self, other: ExactVector) -> None:
        if other.dim != self.dim:
            raise RootSystemError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other: ExactVector) -> ExactVector:
        self._check(other)
        return ExactVector(a + b for a, b in zip(self.coords, other.coords))

    def __sub__(self, other: ExactVector) -> ExactVector:
        self._check(other)
        return ExactVector(a - b for a, b in zip(self.coords, other.coords))

    def __neg__(self) -> ExactVector:
        return ExactVector(-a for a in self.coords)

    def __mul__(self, scalar) -> ExactVector:
        s = _frac(scalar)
        return ExactVector(s * a for a in self.coords)

    __rmul__ = __mul__

    def dot(self, other: ExactVector) -> Fraction:
        self._check(other)
        return sum((a * b for a, b in zip(self.coords, other.coords)), Fraction(0))

    def norm2(self) -> Fraction:
        return self.dot(self)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_positive(self) -> bool:
        """Lexicographic positivity: first nonzero coordinate is > 0."""
        for c in self.coords:
            if c:
                return c > 0
        return False

    def to_float(self) -> list[float]:
        return [float(c) for c in self.coords]

    def to_json(self) -> list[list[int]]:
        return [[c.numerator, c.denominator] for c in self.coords]

    def __repr__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.coords) + ")"


@dataclass(frozen=True)
class Root:
    vector: ExactVector
    multiplicity: int = 1

    def __post_init__(self):
        if self.vector.is_zero():
            raise RootSystemError("a root must be nonzero")
        if int(self.multiplicity) != self.multiplicity or self.multiplicity < 1:
            raise RootSystemError(f"multiplicity must be a positive integer, got {self.multiplicity}")


@dataclass(frozen=True)
class RootSystem:
    """Finite set of nonzero vectors, closed under negation, with multiplicities.

    ``subspace`` is set by :func:`restrict` and records the basis of the
    subspace the roots were projected onto; coordinates stay ambient.
    """

    ambient_dim: int
    roots: tuple[Root, ...]
    label: str | None = None
    subspace: tuple[ExactVector, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "roots", tuple(sorted(self.roots, key=lambda r: r.vector)))
        mult: dict[ExactVector, int] = {}
        for r in self.roots:
            if r.vector.dim != self.ambient_dim:
                raise RootSystemError(f"root {r.vector} not in dimension {self.ambient_dim}")
            if r.vector in mult:
                raise RootSystemError(f"duplicate root {r.vector}")
            mult[r.vector] = r.multiplicity
        for v, m in mult.items():
            if mult.get(-v) != m:
                raise RootSystemError(f"root {v} lacks a negative partner of equal multiplicity")
        object.__setattr__(self, "_mult", mult)

    @classmethod
    def from_vectors(cls, vectors: Iterable, ambient_dim: int | None = None,
                     label: str | None = None, multiplicity=1) -> RootSystem:
        """Build from vectors; negatives are added when missing.

        ``multiplicity`` is an int or a callable taking the vector.
        """
        vecs = [v if isinstance(v, ExactVector) else ExactVector(v) for v in vectors]
        if ambient_dim is None:
            if not vecs:
                raise RootSystemError("ambient_dim required for an empty system")
            ambient_dim = vecs[0].dim
        seen: dict[ExactVector, int] = {}
        for v in vecs:
            m = multiplicity(v) if callable(multiplicity) else multiplicity
            for w in (v, -v):
                if w not in seen:
                    seen[w] = m
        return cls(ambient_dim, tuple(Root(v, m) for v, m in seen.items()), label)

    @property
    def vectors(self) -> frozenset[ExactVector]:
        return frozenset(self._mult)

    def multiplicity(self, v: ExactVector) -> int:
        return self._mult.get(v, 0)

    def __contains__(self, v) -> bool:
        return v in self._mult

    def __len__(self) -> int:
        return len(self.roots)

    def positive_roots(self) -> list[Root]:
        """Positive roots, sorted descending in lexicographic order (stable indexing)."""
        return sorted((r for r in self.roots if r.vector.is_positive()),
                      key=lambda r: r.vector, reverse=True)

    def rank(self) -> int:
        if not self.roots:
            return 0
        return exact_rank([r.vector for r in self.roots])

    def total_multiplicity(self) -> int:
        return sum(r.multiplicity for r in self.roots)

    def simple_roots(self) -> list[ExactVector]:
        """Indecomposable positive roots of the reduced part."""
        cached = self.__dict__.get("_simple")
        if cached is not None:
            return list(cached)
        pos = [r.vector for r in self.positive_roots()]
        reduced = [v for v in pos if not any(v == 2 * w for w in pos)]
        pset = set(reduced)
        simple = []
        for v in reduced:
            if not any((v - w) in pset for w in reduced if w != v):
                simple.append(v)
        object.__setattr__(self, "_simple", tuple(simple))
        return simple

    def to_json(self) -> dict:
        return {
            "ambient_dim": self.ambient_dim,
            "label": self.label,
            "roots": [{"coords": r.vector.to_json(), "mult": r.multiplicity} for r in self.roots],
        }

    @classmethod
    def from_json(cls, data: dict | str) -> RootSystem:
        if isinstance(data, str):
            data = json.loads(data)
        try:
            roots = tuple(Root(ExactVector(r["coords"]), int(r["mult"])) for r in data["roots"])
            return cls(int(data["ambient_dim"]), roots, data.get("label"))
        except (KeyError, TypeError) as exc:
            raise RootSystemError(f"bad root-system JSON: {exc}") from exc


# ---------------------------------------------------------------- exact linear algebra

def _sym(vectors: Sequence[ExactVector]) -> sympy.Matrix:
    return sympy.Matrix([[sympy.Rational(c.numerator, c.denominator) for c in v] for v in vectors])


def _from_sym(x) -> Fraction:
    x = sympy.Rational(x)
    return Fraction(int(x.p), int(x.q))


def exact_rank(vectors: Sequence[ExactVector]) -> int:
    if not vectors:
        return 0
    return _sym(vectors).rank()


def projector(basis: Sequence[ExactVector]) -> list[list[Fraction]]:
    """Orthogonal projector onto span(basis); raises on a dependent basis."""
    if not basis:
        raise RootSystemError("empty subspace basis")
    B = _sym(basis)
    if B.rank() != len(basis):
        raise RootSystemError("subspace basis is linearly dependent")
    P = B.T * (B * B.T).inv() * B
    return [[_from_sym(P[i, j]) for j in range(P.cols)] for i in range(P.rows)]


def apply_matrix(M: Sequence[Sequence[Fraction]], v: ExactVector) -> ExactVector:
    return ExactVector(sum((a * b for a, b in zip(row, v.coords)), Fraction(0)) for row in M)


def solve_in_span(normals: Sequence[ExactVector], rhs: Sequence[Fraction]) -> ExactVector | None:
    """Point x in span(normals) with <n_k, x> = rhs_k for all k, or None if inconsistent."""
    if not normals:
        return None
    N = _sym(normals)
    G = N * N.T
    b = sympy.Matrix([sympy.Rational(r.numerator, r.denominator) for r in map(_frac, rhs)])
    # x = N^T y with G y = b
    try:
        sol, params = G.gauss_jordan_solve(b)
    except ValueError:
        return None
    sol = sol.subs({p: 0 for p in params})
    x = N.T * sol
    return ExactVector(_from_sym(c) for c in x)


# ---------------------------------------------------------------- construction

_FIXED_RANK = {"E6": 6, "E7": 7, "E8": 8, "F4": 4, "G2": 2}


def _pm_pairs(n: int) -> list[ExactVector]:
    out = []
    for i, j in itertools.combinations(range(n), 2):
        for si, sj in itertools.product((1, -1), repeat=2):
            c = [0] * n
            c[i], c[j] = si, sj
            out.append(ExactVector(c))
    return out


def _e8() -> list[ExactVector]:
    out = _pm_pairs(8)
    half = Fraction(1, 2)
    for signs in itertools.product((1, -1), repeat=8):
        if signs.count(-1) % 2 == 0:
            out.append(ExactVector(s * half for s in signs))
    return out


def build_root_system(type_tag: str, rank: int | None = None) -> RootSystem:
    """Standard-coordinate root system, all multiplicities 1.

    ``A_n`` lives in dimension n+1 (roots e_i - e_j); ``G2`` uses the
    dimension-3 integer model; ``E6``/``E7`` are sub-systems of ``E8`` in
    dimension 8.
    """
    return _build(type_tag.strip().upper(), rank)


@functools.lru_cache(maxsize=None)
def _build(type_tag: str, rank: int | None) -> RootSystem:
    tag = type_tag.strip().upper()
    if tag in _FIXED_RANK:
        if rank is not None and rank != _FIXED_RANK[tag]:
            raise RootSystemError(f"{tag} has rank {_FIXED_RANK[tag]}, not {rank}")
        rank = _FIXED_RANK[tag]
    if rank is None or int(rank) != rank or rank < 1:
        raise RootSystemError(f"rank must be a positive integer for type {type_tag!r}")
    n = int(rank)
    label = f"{tag}{n}" if tag not in _FIXED_RANK else tag

    if tag == "A":
        vecs = [ExactVector.unit(n + 1, i) - ExactVector.unit(n + 1, j)
                for i in range(n + 1) for j in range(n + 1) if i != j]
        return RootSystem.from_vectors(vecs, n + 1, label)
    if tag in ("B", "C", "BC", "D"):
        if tag == "D" and n < 2:
            raise RootSystemError("D_n needs n >= 2")
        vecs = _pm_pairs(n)
        if tag in ("B", "BC"):
            vecs += [ExactVector.unit(n, i, s) for i in range(n) for s in (1, -1)]
        if tag in ("C", "BC"):
            vecs += [ExactVector.unit(n, i, 2 * s) for i in range(n) for s in (1, -1)]
        return RootSystem.from_vectors(vecs, n, label)
    if tag == "E8":
        return RootSystem.from_vectors(_e8(), 8, label)
    if tag == "E7":
        w = ExactVector([0, 0, 0, 0, 0, 0, 1, 1])
        return RootSystem.from_vectors([v for v in _e8() if v.dot(w) == 0], 8, label)
    if tag == "E6":
        w1 = ExactVector([0, 0, 0, 0, 0, 0, 1, 1])
        w2 = ExactVector([0, 0, 0, 0, 0, 1, 0, 1])
        return RootSystem.from_vectors(
            [v for v in _e8() if v.dot(w1) == 0 and v.dot(w2) == 0], 8, label)
    if tag == "F4":
        half = Fraction(1, 2)
        vecs = _pm_pairs(4) + [ExactVector.unit(4, i, s) for i in range(4) for s in (1, -1)]
        vecs += [ExactVector(s * half for s in signs)
                 for signs in itertools.product((1, -1), repeat=4)]
        return RootSystem.from_vectors(vecs, 4, label)
    if tag == "G2":
        vecs = []
        for i, j in itertools.permutations(range(3), 2):
            vecs.append(ExactVector.unit(3, i) - ExactVector.unit(3, j))
            k = 3 - i - j
            vecs.append(ExactVector.unit(3, i, 2) - ExactVector.unit(3, j) - ExactVector.unit(3, k))
        return RootSystem.from_vectors(vecs, 3, label)
    raise RootSystemError(f"unsupported root system type {type_tag!r}")


def orbit_classifier(type_tag: str, rs: RootSystem):
    """Return ``v -> length class``: ``all`` (one length), ``short``/``long``,
    or ``short``/``middle``/``double`` for BC types."""
    tag = type_tag.strip().upper()
    if tag == "BC":
        names = {1: "short", 2: "middle", 4: "double"}
        return lambda v: names[int(v.norm2())]
    lengths = sorted({r.vector.norm2() for r in rs.roots})
    if len(lengths) == 1:
        return lambda v: "all"
    return lambda v: "short" if v.norm2() == lengths[0] else "long"


def root_orbit(type_tag: str, rs: RootSystem, v: ExactVector) -> str:
    return orbit_classifier(type_tag, rs)(v)


def with_multiplicities(rs: RootSystem, mult_fn) -> RootSystem:
    return RootSystem(rs.ambient_dim, tuple(Root(r.vector, int(mult_fn(r.vector))) for r in rs.roots),
                      rs.label)


# ---------------------------------------------------------------- axioms

def reflect(beta: ExactVector, alpha: ExactVector) -> ExactVector:
    """s_alpha(beta) = beta - 2<beta,alpha>/<alpha,alpha> alpha."""
    return beta - alpha * (2 * beta.dot(alpha) / alpha.norm2())


def _scaled_ints(vectors: Iterable[ExactVector]) -> list[tuple[int, ...]]:
    vectors = list(vectors)
    den = 1
    for v in vectors:
        for c in v.coords:
            den = den * c.denominator // math.gcd(den, c.denominator)
    return [tuple(int(c * den) for c in v.coords) for v in vectors]


def _idot(a, b) -> int:
    return sum(x * y for x, y in zip(a, b))


def check_weakly_root_system(rs: RootSystem) -> bool:
    vecs = _scaled_ints(rs.vectors)
    vset = set(vecs)
    for a in vecs:
        aa = _idot(a, a)
        for b in vecs:
            num = 2 * _idot(a, b)
            if num % aa == 0:
                c = num // aa
                img = tuple(y - c * x for x, y in zip(a, b))
            else:
                c = Fraction(num, aa)
                img = tuple(y - c * x for x, y in zip(a, b))
                if any(Fraction(t).denominator != 1 for t in img):
                    return False
                img = tuple(int(t) for t in img)
            if img not in vset:
                return False
    return True


@dataclass(frozen=True)
class RootConditions:
    cond_i: bool
    cond_ii: bool
    cond_iii: bool


def _proportional(a, b) -> bool:
    return all(a[i] * b[j] == a[j] * b[i] for i in range(len(a)) for j in range(i + 1, len(a)))


def check_root_system_conditions(rs: RootSystem) -> RootConditions:
    vecs = _scaled_ints(rs.vectors)
    cond_i = check_weakly_root_system(rs)
    cond_ii = all((2 * _idot(a, b)) % _idot(a, a) == 0 for a in vecs for b in vecs)
    cond_iii = True
    for a, b in itertools.combinations(vecs, 2):
        if b != tuple(-x for x in a) and _proportional(a, b):
            cond_iii = False
            break
    return RootConditions(cond_i, cond_ii, cond_iii)


# ---------------------------------------------------------------- restriction / decomposition

def restrict(rs: RootSystem, subspace_basis: Sequence[ExactVector]) -> RootSystem:
    """Project every root onto span(subspace_basis), drop zeros, merge equal
    projections by summing multiplicities. Coordinates remain ambient."""
    for b in subspace_basis:
        if b.dim != rs.ambient_dim:
            raise RootSystemError("subspace basis vector outside the ambient space")
    P = projector(subspace_basis)
    merged: dict[ExactVector, int] = defaultdict(int)
    for r in rs.roots:
        p = apply_matrix(P, r.vector)
        if not p.is_zero():
            merged[p] += r.multiplicity
    return RootSystem(rs.ambient_dim, tuple(Root(v, m) for v, m in merged.items()),
                      "restricted", tuple(subspace_basis))


def kernel_multiplicity(rs: RootSystem, subspace_basis: Sequence[ExactVector]) -> int:
    """Total multiplicity of roots that project to zero."""
    P = projector(subspace_basis)
    return sum(r.multiplicity for r in rs.roots if apply_matrix(P, r.vector).is_zero())


def decompose(rs: RootSystem) -> list[RootSystem]:
    """Irreducible components: connected pieces of the non-orthogonality graph."""
    vecs = [r.vector for r in rs.roots]
    parent = list(range(len(vecs)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, j in itertools.combinations(range(len(vecs)), 2):
        if vecs[i].dot(vecs[j]) != 0:
            parent[find(i)] = find(j)
    groups: dict[int, list[Root]] = defaultdict(list)
    for i, r in enumerate(rs.roots):
        groups[find(i)].append(r)
    comps = [RootSystem(rs.ambient_dim, tuple(g), None) for g in groups.values()]
    comps.sort(key=lambda c: min(r.vector for r in c.roots if r.vector.is_positive()))
    return comps


def direct_sum(*systems: RootSystem) -> RootSystem:
    """Orthogonal direct sum in the concatenated ambient space."""
    dim = sum(s.ambient_dim for s in systems)
    roots = []
    offset = 0
    for s in systems:
        for r in s.roots:
            c = [0] * dim
            c[offset:offset + s.ambient_dim] = r.vector.coords
            roots.append(Root(ExactVector(c), r.multiplicity))
        offset += s.ambient_dim
    return RootSystem(dim, tuple(roots), "+".join(s.label or "?" for s in systems))


def frame_subspaces(type_tag: str, rank: int | None = None) -> list[list[ExactVector]]:
    """Subspaces spanned by subsets of a fixed orthogonal root frame.

    Restricting to an arbitrary subspace does not give a weakly root system in
    general; these frames do (A: anti-diagonal roots e_i - e_{n+2-i}; B/C/BC/D:
    coordinate axes; F4: coordinate axes, subsets of size 1, 2 or 4).
    Exceptional simply-laced types and G2 contribute the full space only.
    """
    tag = type_tag.strip().upper()
    rs = build_root_system(tag, rank)
    d = rs.ambient_dim
    if tag == "A":
        frame = [ExactVector.unit(d, i) - ExactVector.unit(d, d - 1 - i) for i in range(d // 2)]
        sizes = range(1, len(frame) + 1)
    elif tag in ("B", "C", "BC", "D"):
        frame = [ExactVector.unit(d, i) for i in range(d)]
        sizes = range(1, d + 1)
    elif tag == "F4":
        frame = [ExactVector.unit(d, i) for i in range(d)]
        sizes = (1, 2, 4)
    else:
        simple = rs.simple_roots()
        return [simple]
    return [list(S) for k in sizes for S in itertools.combinations(frame, k)]

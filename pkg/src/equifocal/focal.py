"""Complex focal radii, lifted spectra and focal hyperplane arrangements.

Numerics are double precision; roots, offsets of Hermann arrangements and
group elements stay exact. Arrangement symmetry is tested on the imaginary
slice measured in units of pi, where hyperplane levels are exact rationals:
integer levels for vertical roots, half-integer levels for horizontal ones.
"""
from __future__ import annotations

import cmath
import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .hermann import HermannActionDescriptor, orbit_spectrum, to_ambient
from .reflgroup import AffineIsometry, GeneratedGroup, affine_reflection
from .rootsys import ExactVector, solve_in_span

INTEGER_PI = "integer_pi"
HALF_INTEGER_PI = "half_integer_pi"
_DELTA = {INTEGER_PI: Fraction(0), HALF_INTEGER_PI: Fraction(1, 2)}
DEFAULT_J_RANGE = (-3, 3)

ComplexScalar = complex


class FocalError(ValueError):
    pass


def j_values(j_range) -> list[int]:
    """``(lo, hi)`` is inclusive; any other iterable is taken literally."""
    if j_range is None:
        return []
    if isinstance(j_range, tuple) and len(j_range) == 2 and all(isinstance(x, int) for x in j_range):
        return list(range(j_range[0], j_range[1] + 1))
    return [int(j) for j in j_range]


# ---------------------------------------------------------------- spectral data

@dataclass(frozen=True)
class JacobiPair:
    lam: float
    mu: float
    weight: float = 1.0

    def __post_init__(self):
        if self.mu > 0:
            raise FocalError(f"mu must be <= 0 for non-compact type, got {self.mu}")
        if self.weight <= 0:
            raise FocalError(f"weight must be positive, got {self.weight}")


@dataclass(frozen=True)
class JacobiSpectralDatum:
    pairs: tuple[JacobiPair, ...]

    @classmethod
    def of(cls, data) -> JacobiSpectralDatum:
        if isinstance(data, JacobiSpectralDatum):
            return data
        pairs = []
        for p in data:
            pairs.append(p if isinstance(p, JacobiPair) else JacobiPair(*p))
        return cls(tuple(pairs))


def complex_focal_radii(lam: float, beta_v: float, j_range=DEFAULT_J_RANGE) -> list[complex]:
    """Solutions z of tanh(z beta_v) = beta_v / lam (or z = 1/lam when beta_v = 0)."""
    if beta_v < 0:
        raise FocalError("beta_v must be non-negative")
    if beta_v == 0:
        return [complex(1 / lam)] if lam != 0 else []
    if abs(lam) == beta_v:
        return []
    js = j_values(j_range)
    if abs(lam) > beta_v:
        a = math.atanh(beta_v / lam)
        return [complex(a, j * math.pi) / beta_v for j in js]
    a = math.atanh(lam / beta_v)
    return [complex(a, (j + 0.5) * math.pi) / beta_v for j in js]


def lifted_values(lam: float, mu: float, j_range=DEFAULT_J_RANGE) -> list[complex]:
    """Lifted principal curvatures contributed by one (lambda, mu) pair."""
    if mu == 0:
        return [complex(lam)]
    b = math.sqrt(-mu)
    if abs(lam) == b:
        raise FocalError(f"not proper complex equifocal datum: |lambda| = sqrt(-mu) = {b}")
    js = j_values(j_range)
    if abs(lam) > b:
        a = math.atanh(b / lam)
        return [b / complex(a, j * math.pi) for j in js]
    a = math.atanh(lam / b)
    return [b / complex(a, (j + 0.5) * math.pi) for j in js]


def lifted_spectrum(data, j_range=DEFAULT_J_RANGE, include_zero: bool = True) -> list[complex]:
    datum = JacobiSpectralDatum.of(data)
    out = [0j] if include_zero else []
    for p in datum.pairs:
        out.extend(lifted_values(p.lam, p.mu, j_range))
    return out


def focal_residual(z: complex, lam: float, beta_v: float) -> float:
    """|cosh(z b) - lam sinh(z b)/b|, or |1 - z lam| when b = 0."""
    if beta_v == 0:
        return abs(1 - z * lam)
    return abs(cmath.cosh(z * beta_v) - lam * cmath.sinh(z * beta_v) / beta_v)


def jacobi_norm_sq(data, t: float) -> float:
    total = 0.0
    for p in JacobiSpectralDatum.of(data).pairs:
        if p.mu == 0:
            total += (1 - t * p.lam) ** 2 * p.weight
        else:
            s = math.sqrt(-p.mu)
            total += (math.cosh(t * s) - p.lam * math.sinh(t * s) / s) ** 2 * p.weight
    return total


@dataclass(frozen=True)
class BoundaryFocal:
    has_focal: bool
    has_non_euclidean_focal: bool


def ideal_boundary_focal(data, tol: float = 1e-12) -> BoundaryFocal:
    non_euclid = False
    euclid = False
    for p in JacobiSpectralDatum.of(data).pairs:
        if p.mu == 0:
            euclid |= abs(p.lam) <= tol
        elif abs(abs(p.lam) - math.sqrt(-p.mu)) <= tol:
            non_euclid = True
    return BoundaryFocal(non_euclid or euclid, non_euclid)


# ---------------------------------------------------------------- arrangements

@dataclass(frozen=True)
class FocalHyperplane:
    """Member ``j`` of the family (beta^c)^{-1}(base_offset + (j + delta) pi i).

    ``j`` is None when the family is listed without enumerating levels.
    """

    root: ExactVector
    family: str
    base_offset: Fraction | float
    j: int | None = None
    multiplicity: int = 1

    def __post_init__(self):
        if self.family not in _DELTA:
            raise FocalError(f"unknown family {self.family!r}")

    @property
    def delta(self) -> Fraction:
        return _DELTA[self.family]

    @property
    def slice_level(self) -> Fraction | None:
        """Imaginary part of the level in units of pi."""
        return None if self.j is None else self.j + self.delta

    @property
    def level(self) -> complex | None:
        if self.j is None:
            return None
        return complex(float(self.base_offset), float(self.slice_level) * math.pi)


def hermann_focal_arrangement(action: HermannActionDescriptor, xi,
                              j_range=DEFAULT_J_RANGE) -> list[FocalHyperplane]:
    xi = to_ambient(action, xi)
    orbit_spectrum(action, xi, xi)  # principal check and split availability
    js = j_values(j_range) or [None]
    out = []
    for root, flags in action.require_split():
        b = root.vector
        offset = -b.dot(xi) if isinstance(xi, ExactVector) else -float(np.dot(b.to_float(), xi))
        for fam, on in ((INTEGER_PI, flags.in_V), (HALF_INTEGER_PI, flags.in_H)):
            if on:
                out.extend(FocalHyperplane(b, fam, offset, j, root.multiplicity) for j in js)
    return out


def arrangement_from_offsets(offsets, j_range=DEFAULT_J_RANGE) -> list[FocalHyperplane]:
    """General arrangement from per-root real offsets (e.g. arctanh c).

    ``offsets`` maps a root vector to a list of ``(offset, family)`` pairs;
    several offsets per root are allowed and reported by :func:`offset_violations`.
    """
    js = j_values(j_range) or [None]
    out = []
    for root, entries in offsets.items():
        root = root if isinstance(root, ExactVector) else ExactVector(root)
        for off, fam in entries:
            out.extend(FocalHyperplane(root, fam, off, j) for j in js)
    return out


def offset_violations(arrangement: Sequence[FocalHyperplane], tol: float = 1e-12) -> list[ExactVector]:
    """Roots carrying more than one distinct real offset."""
    seen: dict[ExactVector, list] = {}
    for h in arrangement:
        vals = seen.setdefault(_canon(h.root)[0], [])
        off = h.base_offset if h.root.is_positive() else -h.base_offset
        if not any(abs(float(off) - float(v)) <= tol for v in vals):
            vals.append(off)
    return [r for r, v in seen.items() if len(v) > 1]


@dataclass(frozen=True)
class RealFocalSet:
    hyperplanes: tuple[tuple[ExactVector, Fraction | float], ...]
    common_point: ExactVector | np.ndarray | None

    @property
    def empty_intersection(self) -> bool:
        return self.common_point is None and bool(self.hyperplanes)

    def contains(self, point, tol: float = 1e-9) -> bool:
        """Does ``point`` lie on every real hyperplane?"""
        for root, off in self.hyperplanes:
            if isinstance(point, ExactVector) and isinstance(off, (int, Fraction)):
                if root.dot(point) != off:
                    return False
            elif abs(float(np.dot(root.to_float(), np.asarray(point, dtype=float))) - float(off)) > tol:
                return False
        return True


def real_focal_set(arrangement: Sequence[FocalHyperplane], tol: float = 1e-9) -> RealFocalSet:
    """Real hyperplanes {beta = offset} of the integer families and their common point.

    The common point returned is the one lying in the span of the normals.
    """
    planes = []
    seen = set()
    for h in arrangement:
        if h.family != INTEGER_PI:
            continue
        key = (h.root, h.base_offset)
        if key not in seen:
            seen.add(key)
            planes.append(key)
    if not planes:
        return RealFocalSet((), None)
    normals = [p[0] for p in planes]
    rhs = [p[1] for p in planes]
    if all(isinstance(r, (int, Fraction)) for r in rhs):
        point = solve_in_span(normals, rhs)
        if point is not None and any(n.dot(point) != r for n, r in zip(normals, rhs)):
            point = None
        return RealFocalSet(tuple(planes), point)
    N = np.array([n.to_float() for n in normals])
    b = np.array([float(r) for r in rhs])
    x, *_ = np.linalg.lstsq(N, b, rcond=None)
    if np.max(np.abs(N @ x - b)) > tol:
        return RealFocalSet(tuple(planes), None)
    return RealFocalSet(tuple(planes), x)


def _canon(v: ExactVector) -> tuple[ExactVector, int]:
    return (v, 1) if v.is_positive() else (-v, -1)


def arrangement_reflections(arrangement: Sequence[FocalHyperplane]) -> list[AffineIsometry]:
    """Affine reflections generating the slice symmetry group.

    A root with one family uses levels delta and delta + 1; a root with both
    families uses 0 and 1/2, which already generate the other levels.
    """
    deltas: dict[ExactVector, set] = {}
    for h in arrangement:
        deltas.setdefault(_canon(h.root)[0], set()).add(h.delta)
    out = []
    for root, ds in deltas.items():
        levels = sorted(ds) if len(ds) > 1 else [min(ds), min(ds) + 1]
        out.extend(affine_reflection(root, level) for level in levels)
    return out


def arrangement_invariance(arrangement: Sequence[FocalHyperplane], group_ball: GeneratedGroup,
                           tol: float = 1e-9) -> bool:
    """Does every ball element map every enumerated slice hyperplane into the arrangement?

    Slice hyperplanes are {u : beta(u) = level / pi}. The arrangement is
    extended periodically outside its enumerated j-window; inside the window
    the image must be an enumerated member.
    """
    js = [h.j for h in arrangement if h.j is not None]
    if not js:
        return True
    lo, hi = min(js), max(js)
    families: dict[ExactVector, dict[Fraction, set]] = {}
    levels: dict[ExactVector, list[float]] = {}
    for h in arrangement:
        root, sign = _canon(h.root)
        fam = families.setdefault(root, {})
        members = fam.setdefault(h.delta if sign > 0 else (-h.delta) % 1, set())
        if h.j is not None:
            members.add(float(sign * h.slice_level))
            levels.setdefault(h.root, []).append(float(h.slice_level))
    for g in group_ball.elements:
        t = ExactVector(g.translation)
        for root, lvls in levels.items():
            image = ExactVector(sum((a * b for a, b in zip(row, root.coords)), Fraction(0))
                                for row in g.linear)
            shift = float(image.dot(t))
            target, sign = _canon(image)
            fam = families.get(target)
            for lvl in lvls:
                if not _member(fam, sign * (lvl + shift), lo, hi, tol):
                    return False
    return True


def _member(fam, level: float, lo: int, hi: int, tol: float) -> bool:
    if not fam:
        return False
    for delta, members in fam.items():
        k = level - float(delta)
        if abs(k - round(k)) > tol:
            continue
        if not lo <= round(k) <= hi:
            return True  # outside the window: periodic extension
        if any(abs(level - m) <= tol for m in members):
            return True
    return False


# ---------------------------------------------------------------- export

CSV_COLUMNS = ["root", "family", "base_offset", "j", "level_re", "level_im"]


def arrangement_csv(arrangement: Sequence[FocalHyperplane]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(CSV_COLUMNS)
    for h in arrangement:
        lvl = h.level
        w.writerow([" ".join(str(c) for c in h.root), h.family, repr(float(h.base_offset)),
                    "" if h.j is None else h.j,
                    "" if lvl is None else repr(lvl.real), "" if lvl is None else repr(lvl.imag)])
    return buf.getvalue()


def _plane_basis(normals: Sequence[ExactVector]) -> np.ndarray:
    """Orthonormal 2-frame of the span of the normals (float)."""
    N = np.array([n.to_float() for n in normals])
    u, s, vt = np.linalg.svd(N)
    if (s > 1e-12).sum() != 2:
        raise FocalError("SVG export needs a rank-2 arrangement")
    Q, _ = np.linalg.qr(vt[:2].T)
    return Q.T


def arrangement_svg(arrangement: Sequence[FocalHyperplane], size: int = 400,
                    extent: float | None = None) -> str:
    """Real-slice line drawing of a rank-2 arrangement with the common point marked."""
    rfs = real_focal_set(arrangement)
    if not rfs.hyperplanes:
        raise FocalError("no real hyperplanes to draw")
    frame = _plane_basis([p[0] for p in rfs.hyperplanes])
    center = np.zeros(2)
    if rfs.common_point is not None:
        cp = rfs.common_point
        cp = np.array(cp.to_float()) if isinstance(cp, ExactVector) else np.asarray(cp)
        center = frame @ cp
    R = extent or (2.0 + float(np.linalg.norm(center)))
    scale = size / (2 * R)

    def px(p):
        return ((p[0] + R) * scale, (R - p[1]) * scale)

    lines = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
             f'viewBox="0 0 {size} {size}">',
             f'<rect width="{size}" height="{size}" fill="white"/>']
    for root, off in rfs.hyperplanes:
        n = frame @ np.array(root.to_float())
        nn = float(n @ n)
        p0 = n * float(off) / nn
        d = np.array([-n[1], n[0]]) / math.sqrt(nn)
        a, b = px(p0 - 3 * R * d), px(p0 + 3 * R * d)
        lines.append(f'<line x1="{a[0]:.3f}" y1="{a[1]:.3f}" x2="{b[0]:.3f}" y2="{b[1]:.3f}" '
                     f'stroke="black" stroke-width="1"><title>{root}</title></line>')
    if rfs.common_point is not None:
        c = px(center)
        lines.append(f'<circle cx="{c[0]:.3f}" cy="{c[1]:.3f}" r="4" fill="red"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"

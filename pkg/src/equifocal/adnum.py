"""Matrix models of sl(n,R)/so(n) and so(p,q)/so(p)+so(q) as a numeric oracle.

Operators act on the Cartan complement p in an orthonormal basis. The
Jacobi operator is X -> -[v,[v,X]], whose spectrum on p is {-beta(v)^2}
together with 0 on the abelian part.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.linalg import expm
from scipy.optimize import brentq

from . import focal
from .rootsys import Root, RootSystem, build_root_system

MAX_SL_N = 5
MAX_SO_PQ = 6


class ModelError(ValueError):
    pass


class ModelTooLarge(ModelError):
    pass


class NotCurvatureAdapted(ModelError):
    pass


def _bracket(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


@dataclass
class MatrixModel:
    family: str
    params: tuple[int, ...]
    basis_p: list[np.ndarray]
    basis_a: list[np.ndarray]
    inner_scale: float = 1.0

    @property
    def name(self) -> str:
        return f"{self.family}({','.join(map(str, self.params))})"

    @property
    def dim_p(self) -> int:
        return len(self.basis_p)

    @property
    def rank(self) -> int:
        return len(self.basis_a)

    @property
    def coord_dim(self) -> int:
        """Length of the coordinate vectors accepted for elements of a."""
        return self.params[0]

    def inner(self, x: np.ndarray, y: np.ndarray) -> float:
        return self.inner_scale * float(np.trace(x @ y))

    def a_element(self, v) -> np.ndarray:
        """Matrix of the element of a with root-system coordinates ``v``."""
        v = np.asarray(v, dtype=float)
        if v.shape != (self.coord_dim,):
            raise ModelError(f"{self.name}: expected {self.coord_dim} coordinates, got {v.shape}")
        if self.family == "sl_n_R":
            if abs(v.sum()) > 1e-12 * max(1.0, np.abs(v).max()):
                raise ModelError("sl(n,R) coordinates must sum to zero")
            return np.diag(v)
        p, q = self.params
        m = np.zeros((p + q, p + q))
        for i in range(p):
            m[i, p + i] = m[p + i, i] = v[i]
        return m

    def random_a(self, rng: np.random.Generator) -> np.ndarray:
        v = rng.normal(size=self.coord_dim)
        if self.family == "sl_n_R":
            v -= v.mean()
        return v

    def root_system(self) -> RootSystem:
        """Restricted roots in the same coordinates as :meth:`a_element`."""
        if self.family == "sl_n_R":
            return build_root_system("A", self.params[0] - 1)
        p, q = self.params
        if p == q:
            return build_root_system("D", p)
        rs = build_root_system("B", p)
        return RootSystem(rs.ambient_dim,
                          tuple(Root(r.vector, q - p if r.vector.norm2() == 1 else 1) for r in rs.roots),
                          f"B{p}")

    def coordinates(self, x: np.ndarray) -> np.ndarray:
        return np.array([self.inner(b, x) for b in self.basis_p])

    def operator(self, fn) -> np.ndarray:
        """Matrix of a linear map p -> p given on matrices."""
        return np.column_stack([self.coordinates(fn(b)) for b in self.basis_p])


def sl_n_model(n: int) -> MatrixModel:
    if n < 2:
        raise ModelError("sl(n,R) needs n >= 2")
    if n > MAX_SL_N:
        raise ModelTooLarge(f"model too large: sl({n},R), limit n <= {MAX_SL_N}")
    basis = []
    for i, j in itertools.combinations(range(n), 2):
        m = np.zeros((n, n))
        m[i, j] = m[j, i] = 1 / math.sqrt(2)
        basis.append(m)
    # orthonormal basis of the trace-zero diagonal
    ones = np.ones((n, 1)) / math.sqrt(n)
    q, _ = np.linalg.qr(np.hstack([ones, np.eye(n)[:, : n - 1]]))
    diag = [np.diag(q[:, k]) for k in range(1, n)]
    return MatrixModel("sl_n_R", (n,), basis + diag, diag, 1.0)


def so_pq_model(p: int, q: int) -> MatrixModel:
    if p < 1 or q < p or p + q < 3:
        raise ModelError("so(p,q) needs 1 <= p <= q and p + q >= 3")
    if p + q > MAX_SO_PQ:
        raise ModelTooLarge(f"model too large: so({p},{q}), limit p + q <= {MAX_SO_PQ}")
    basis = []
    for a in range(p):
        for b in range(q):
            m = np.zeros((p + q, p + q))
            m[a, p + b] = m[p + b, a] = 1.0
            basis.append(m)
    abasis = [basis[a * q + a] for a in range(p)]
    return MatrixModel("so_p_q", (p, q), basis, abasis, 0.5)


def make_model(family: str, params: Sequence[int]) -> MatrixModel:
    if family in ("sl_n_R", "sl"):
        return sl_n_model(*params)
    if family in ("so_p_q", "so"):
        return so_pq_model(*params)
    raise ModelError(f"unsupported model family {family!r}")


# ---------------------------------------------------------------- operators

def ad_squared(model: MatrixModel, v) -> np.ndarray:
    V = model.a_element(v)
    return model.operator(lambda x: _bracket(V, _bracket(V, x)))


def jacobi_operator(model: MatrixModel, v) -> np.ndarray:
    return -ad_squared(model, v)


def _sinhc(x: np.ndarray) -> np.ndarray:
    out = np.ones_like(x)
    nz = np.abs(x) > 1e-8
    out[nz] = np.sinh(x[nz]) / x[nz]
    small = ~nz
    out[small] = 1 + x[small] ** 2 / 6
    return out


def d_operators(model: MatrixModel, v, s: float) -> tuple[np.ndarray, np.ndarray]:
    """(cosh(s ad v), sinh(s ad v)/(s ad v)) on p by even functional calculus of ad(v)^2."""
    w, U = np.linalg.eigh(ad_squared(model, v))
    beta = np.sqrt(np.clip(w, 0, None))
    co = U @ np.diag(np.cosh(s * beta)) @ U.T
    si = U @ np.diag(_sinhc(s * beta)) @ U.T
    return co, si


def d_co_by_expm(model: MatrixModel, v, s: float) -> np.ndarray:
    """cosh(s ad v) on p via matrix exponentials of ad v on all of gl(n)."""
    V = model.a_element(v)
    n = V.shape[0]
    ad = np.kron(V, np.eye(n)) - np.kron(np.eye(n), V.T)  # row-major vec of [V, X]
    c = (expm(s * ad) + expm(-s * ad)) / 2
    return model.operator(lambda x: (c @ x.reshape(-1)).reshape(n, n))


def _check_adapted(model, v, shape_op, tol=1e-9):
    J = jacobi_operator(model, v)
    A = np.asarray(shape_op, dtype=float)
    if A.shape != J.shape:
        raise ModelError(f"shape operator must be {J.shape}, got {A.shape}")
    if np.linalg.norm(A - A.T, 2) > tol * max(1.0, np.linalg.norm(A, 2)):
        raise ModelError("shape operator must be symmetric")
    if np.linalg.norm(_bracket(J, A), 2) > tol * max(1.0, np.linalg.norm(J, 2) * np.linalg.norm(A, 2)):
        raise NotCurvatureAdapted("not curvature-adapted: shape operator does not commute with R(., v)v")
    return A


def numeric_focal_sweep(model: MatrixModel, v, shape_op, t_grid: Sequence[float]) -> list[float]:
    """Smallest singular value of D^co_{tv} - t D^si_{tv} A at each grid point."""
    A = _check_adapted(model, v, shape_op)
    out = []
    for t in t_grid:
        co, si = d_operators(model, v, t)
        out.append(float(np.linalg.svd(co - t * si @ A, compute_uv=False).min()))
    return out


def joint_blocks(model: MatrixModel, v, shape_op, tol: float = 1e-7) -> list[tuple[float, float]]:
    """(beta(v), lambda) for each joint eigenvector of ad(v)^2 and A."""
    A = _check_adapted(model, v, shape_op)
    w, U = np.linalg.eigh(ad_squared(model, v))
    out = []
    i = 0
    while i < len(w):
        k = i
        while k + 1 < len(w) and abs(w[k + 1] - w[i]) <= tol * max(1.0, abs(w[i])):
            k += 1
        block = U[:, i:k + 1]
        lam = np.linalg.eigvalsh(block.T @ A @ block)
        beta = math.sqrt(max(w[i], 0.0))
        out.extend((beta if beta > tol else 0.0, float(x)) for x in lam)
        i = k + 1
    return out


def focal_radii_from_sweep(model: MatrixModel, v, shape_op, t_grid: Sequence[float],
                           threshold: float = 1e-6) -> list[float]:
    """Real focal radii in the grid interval, refined per eigen-block by root bracketing."""
    grid = np.asarray(t_grid, dtype=float)
    found = []
    for beta, lam in joint_blocks(model, v, shape_op):
        if beta == 0:
            f = lambda t, lam=lam: 1 - t * lam
        else:
            f = lambda t, b=beta, lam=lam: math.cosh(t * b) - lam * math.sinh(t * b) / b
        vals = [f(t) for t in grid]
        for a, b, fa, fb in zip(grid, grid[1:], vals, vals[1:]):
            if fa == 0:
                found.append(float(a))
            elif fa * fb < 0:
                found.append(brentq(f, a, b, xtol=1e-14))
        if vals and vals[-1] == 0:
            found.append(float(grid[-1]))
    radii = []
    for t in sorted(found):
        if t <= 0 or (radii and abs(t - radii[-1]) < 1e-9):
            continue
        if numeric_focal_sweep(model, v, shape_op, [t])[0] < threshold:
            radii.append(t)
    return radii


def commuting_family_check(model: MatrixModel, b_basis: Sequence, shape_ops: Sequence,
                           tol: float = 1e-9) -> bool:
    mats = [model.a_element(b) for b in b_basis]
    for x, y in itertools.combinations(mats, 2):
        if np.linalg.norm(_bracket(x, y), 2) >= tol:
            raise ModelError("b_basis does not span an abelian subspace")
    ops = [jacobi_operator(model, b) for b in b_basis] + [np.asarray(a, dtype=float) for a in shape_ops]
    return all(np.linalg.norm(_bracket(x, y), 2) < tol for x, y in itertools.combinations(ops, 2))


def root_space_frame(model: MatrixModel, rng: np.random.Generator) -> tuple[np.ndarray, list[list[int]]]:
    """Orthonormal eigenbasis of ad(v)^2 at a generic v, with column groups per root space."""
    v = model.random_a(rng)
    w, U = np.linalg.eigh(ad_squared(model, v))
    groups: list[list[int]] = []
    for i, x in enumerate(w):
        if groups and abs(x - w[groups[-1][0]]) <= 1e-7 * max(1.0, abs(x)):
            groups[-1].append(i)
        else:
            groups.append([i])
    return U, groups


def synthetic_shape_operator(model: MatrixModel, v, rng: np.random.Generator,
                             scale: float = 3.0) -> np.ndarray:
    """Random symmetric operator commuting with ad(v)^2, built block by block."""
    w, U = np.linalg.eigh(ad_squared(model, v))
    A = np.zeros_like(U)
    i = 0
    while i < len(w):
        k = i
        while k + 1 < len(w) and abs(w[k + 1] - w[i]) <= 1e-7 * max(1.0, abs(w[i])):
            k += 1
        block = U[:, i:k + 1]
        m = rng.normal(size=(k - i + 1, k - i + 1)) * scale
        A += block @ ((m + m.T) / 2) @ block.T
        i = k + 1
    return (A + A.T) / 2


# ---------------------------------------------------------------- oracle suite

def _expected_jacobi_spectrum(model: MatrixModel, v) -> list[float]:
    vals = []
    for r in model.root_system().positive_roots():
        b = float(np.dot(r.vector.to_float(), v))
        vals.extend([-b * b] * r.multiplicity)
    vals.extend([0.0] * model.rank)
    return sorted(vals)


def spectrum_residual(model: MatrixModel, v) -> float:
    got = np.sort(np.linalg.eigvalsh(jacobi_operator(model, v)))
    exp = np.array(_expected_jacobi_spectrum(model, v))
    if got.shape != exp.shape:
        return math.inf
    return float(np.max(np.abs(got - exp) / np.maximum(1.0, np.abs(exp))))


def functional_calculus_residual(model: MatrixModel, v, s: float) -> float:
    co, si = d_operators(model, v, s)
    A2 = ad_squared(model, v)
    ident = np.eye(model.dim_p)
    r1 = np.linalg.norm(co @ co - (s * s) * A2 @ si @ si - ident, 2)
    ref = d_co_by_expm(model, v, s)
    r2 = np.linalg.norm(co - ref, 2) / max(1.0, np.linalg.norm(ref, 2))
    return float(max(r1 / max(1.0, np.linalg.norm(co, 2) ** 2), r2))


def _expected_real_radii(blocks, t_max):
    out = []
    for beta, lam in blocks:
        for z in focal.complex_focal_radii(lam, beta, [0]):
            if abs(z.imag) < 1e-12 and 0 < z.real <= t_max:
                out.append(z.real)
    return sorted(out)


def focal_trial(model: MatrixModel, rng: np.random.Generator, t_max: float = 3.0,
                n_grid: int = 301) -> bool:
    v = model.random_a(rng)
    v *= 0.8 / max(1e-9, float(np.linalg.norm(v)))
    A = synthetic_shape_operator(model, v, rng)
    grid = np.linspace(1e-3, t_max, n_grid)
    got = focal_radii_from_sweep(model, v, A, grid)
    exp = [t for t in _expected_real_radii(joint_blocks(model, v, A), t_max) if t >= grid[0]]
    merged = []
    for t in exp:
        if not merged or abs(t - merged[-1]) > 1e-9:
            merged.append(t)
    return len(got) == len(merged) and all(abs(a - b) < 1e-6 for a, b in zip(got, merged))


def run_oracle(model: MatrixModel, trials: int = 100, seed: int = 0, focal_trials: int = 20) -> dict:
    rng = np.random.default_rng(seed)
    spec = max(spectrum_residual(model, model.random_a(rng)) for _ in range(trials))
    fc = max(functional_calculus_residual(model, model.random_a(rng), float(rng.uniform(-1.5, 1.5)))
             for _ in range(max(1, trials // 10)))
    matches = sum(focal_trial(model, rng) for _ in range(focal_trials))
    U, groups = root_space_frame(model, rng)
    shape_ops = []
    for _ in range(3):
        d = np.concatenate([rng.normal(size=len(g)) for g in groups])
        shape_ops.append(U @ np.diag(d) @ U.T)
    b_basis = [np.eye(model.coord_dim)[i] for i in range(model.coord_dim)]
    if model.family == "sl_n_R":
        n = model.coord_dim
        b_basis = [np.eye(n)[i] - np.eye(n)[i + 1] for i in range(n - 1)]
    commuting_ok = commuting_family_check(model, b_basis, shape_ops, tol=1e-9)
    perturbed = shape_ops[0] + 1e-3 * np.outer(U[:, 0], U[:, -1]) + 1e-3 * np.outer(U[:, -1], U[:, 0])
    detects = not commuting_family_check(model, b_basis, [perturbed], tol=1e-6)
    report = {
        "model": model.name,
        "trials": trials,
        "max_spectrum_residual": spec,
        "functional_calculus_residual": fc,
        "focal_matches": matches,
        "focal_trials": focal_trials,
        "commuting_ok": bool(commuting_ok),
        "perturbation_detected": bool(detects),
    }
    report["ok"] = bool(spec < 1e-8 and fc < 1e-9 and matches == focal_trials and commuting_ok and detects)
    return report

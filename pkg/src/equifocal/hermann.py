"""Hermann actions on symmetric spaces of non-compact type.

Each action carries, per positive restricted root, whether the root is
vertical (V), horizontal (H) or both. The principal-orbit shape operator
along a unit normal has the closed-form spectrum

    vertical   beta:  -beta(eta) / tanh beta(xi)
    horizontal beta:  -beta(eta) * tanh beta(xi)

so the generic number of distinct principal curvatures is
``#pos + #(V and H)``.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from ._expr import ExpressionError, evaluate
from .reflgroup import AffineIsometry, reflection
from .rootsys import ExactVector, Root, RootSystem, orbit_classifier, solve_in_span
from .symcat import (CatalogError, SymmetricSpaceDescriptor, data_path, load_families,
                     restricted_system)

ACTIONS_FILE = "hermann_actions.json"


class HermannError(ValueError):
    pass


class InsufficientSplitData(HermannError):
    """Raised by per-root operations on rows that only carry aggregate counts."""

    def __init__(self, key: str):
        super().__init__(f"{key}: insufficient split data (aggregate counts only)")


class NonPrincipal(HermannError):
    pass


@dataclass(frozen=True)
class SplitFlags:
    in_V: bool
    in_H: bool


@dataclass(frozen=True)
class HermannActionDescriptor:
    h_label: str
    space: SymmetricSpaceDescriptor
    split: tuple[tuple[Root, SplitFlags], ...] | None
    expected_max_spec: int | None = None
    aggregate: dict | None = None
    table: int | None = None
    root_system: RootSystem | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.split is None and self.aggregate is None:
            raise HermannError(f"{self.h_label}: needs per-root split or aggregate counts")
        if self.split is not None:
            for root, flags in self.split:
                if not (flags.in_V or flags.in_H):
                    raise HermannError(f"{self.key}: root {root.vector} is neither vertical nor horizontal")
        if self.root_system is None:
            object.__setattr__(self, "root_system", restricted_system(self.space))

    @property
    def key(self) -> str:
        return f"{self.h_label} on {self.space.key}"

    @property
    def has_split(self) -> bool:
        return self.split is not None

    def positive_roots(self) -> list[Root]:
        return self.root_system.positive_roots()

    def require_split(self):
        if self.split is None:
            raise InsufficientSplitData(self.key)
        return self.split

    def counts(self) -> dict:
        n_pos = len(self.positive_roots())
        if self.split is not None:
            nv = sum(1 for _, f in self.split if f.in_V)
            nh = sum(1 for _, f in self.split if f.in_H)
            nb = sum(1 for _, f in self.split if f.in_V and f.in_H)
            return {"n_pos": n_pos, "count_V": nv, "count_H": nh, "count_both": nb}
        out = {"n_pos": n_pos, "count_both": self.aggregate["count_both"]}
        for k in ("count_V", "count_H"):
            if k in self.aggregate:
                out[k] = self.aggregate[k]
        return out

    def vertical_roots(self) -> list[Root]:
        return [r for r, f in self.require_split() if f.in_V]

    def horizontal_roots(self) -> list[Root]:
        return [r for r, f in self.require_split() if f.in_H]

    def to_json(self) -> dict:
        out = {"h_label": self.h_label, "space_ref": self.space.key,
               "expected_max_spec": self.expected_max_spec}
        if self.split is not None:
            out["split"] = [{"root_index": i, "in_V": f.in_V, "in_H": f.in_H}
                            for i, (_, f) in enumerate(self.split)]
        else:
            out["split"] = dict(self.aggregate)
        return out


@dataclass(frozen=True)
class SpectrumValue:
    kind: str
    root: Root | None = None

    def __post_init__(self):
        if self.kind not in ("zero", "vertical", "horizontal"):
            raise HermannError(f"unknown spectrum kind {self.kind!r}")
        if (self.kind == "zero") != (self.root is None):
            raise HermannError("vertical/horizontal values carry a root; zero carries none")

    def evaluate(self, xi, eta) -> float:
        if self.kind == "zero":
            return 0.0
        bx = _pair(self.root.vector, xi)
        be = _pair(self.root.vector, eta)
        if self.kind == "vertical":
            return -be / math.tanh(bx)
        return -be * math.tanh(bx)


def _pair(beta: ExactVector, x) -> float:
    if isinstance(x, ExactVector):
        return float(beta.dot(x))
    return float(np.dot(beta.to_float(), np.asarray(x, dtype=float)))


# ---------------------------------------------------------------- section coordinates

def section_basis(action_or_rs) -> list[ExactVector]:
    """Simple roots; rank-many section coordinates are their values."""
    rs = action_or_rs.root_system if isinstance(action_or_rs, HermannActionDescriptor) else action_or_rs
    return rs.simple_roots()


def to_ambient(action: HermannActionDescriptor, coords) -> ExactVector | np.ndarray:
    """Accept ambient coordinates, or rank-many values alpha_i(x) on the simple roots.

    Section coordinates are resolved to the point of the root span with those
    simple-root values (coordinates along the fundamental coweights).
    """
    rs = action.root_system
    n = len(coords)
    if n == rs.ambient_dim:
        return coords if isinstance(coords, ExactVector) else np.asarray(coords, dtype=float)
    basis = section_basis(rs)
    if n != len(basis):
        raise HermannError(f"{action.key}: expected {len(basis)} section or "
                           f"{rs.ambient_dim} ambient coordinates, got {n}")
    if isinstance(coords, ExactVector):
        return solve_in_span(basis, list(coords))
    B = np.array([b.to_float() for b in basis])
    y = np.linalg.solve(B @ B.T, np.asarray(coords, dtype=float))
    return B.T @ y


# ---------------------------------------------------------------- spectrum

def orbit_spectrum(action: HermannActionDescriptor, xi, eta, tol: float = 0.0) -> list[SpectrumValue]:
    """Symbolic spectrum of the principal orbit through exp(xi) along eta.

    ``eta`` only enters at evaluation time; it is accepted here for symmetry.
    """
    split = action.require_split()
    out = []
    for root, flags in split:
        if flags.in_V:
            if abs(_pair(root.vector, xi)) <= tol:
                raise NonPrincipal(f"non-principal basepoint: beta(xi) = 0 for vertical root {root.vector}")
            out.append(SpectrumValue("vertical", root))
        if flags.in_H:
            out.append(SpectrumValue("horizontal", root))
    return out


def evaluate_spectrum(values: Sequence[SpectrumValue], xi, eta) -> list[float]:
    return [v.evaluate(xi, eta) for v in values]


def max_distinct_spec(action: HermannActionDescriptor) -> int:
    c = action.counts()
    return c["n_pos"] + c["count_both"]


def _distinct(values: Sequence[float], tol: float) -> int:
    if not values:
        return 0
    vals = sorted(values)
    count = 1
    last = vals[0]
    for v in vals[1:]:
        if v - last > tol:
            count += 1
            last = v
    return count


def numeric_distinct_count(action: HermannActionDescriptor, xi, eta, tol: float = 1e-8) -> int:
    if tol <= 0:
        raise HermannError("tol must be positive")
    xi = to_ambient(action, xi)
    eta = to_ambient(action, eta)
    values = orbit_spectrum(action, xi, eta, tol=1e-12)
    return _distinct(evaluate_spectrum(values, xi, eta), tol)


def properness_check(action_or_pairs, xi=None, eta=None, tol: float = 1e-12) -> bool:
    """No eigenvalue on a curvature eigenspace equals +-sqrt(-mu).

    Either a Hermann action with section vectors ``xi``, ``eta`` or a list of
    raw ``(lambda, mu)`` pairs. For an action ``tol`` bounds the relative gap,
    which falls below 1e-12 once beta(xi) exceeds about 14.
    """
    if not isinstance(action_or_pairs, HermannActionDescriptor):
        for lam, mu in action_or_pairs:
            if mu != 0 and abs(abs(lam) - math.sqrt(-mu)) <= tol:
                return False
        return True
    action = action_or_pairs
    xi = to_ambient(action, xi)
    eta = np.asarray(to_ambient(action, eta).to_float() if isinstance(eta, ExactVector)
                     else to_ambient(action, eta), dtype=float)
    norm = float(np.linalg.norm(eta))
    if norm == 0:
        return True
    eta = eta / norm
    for v in orbit_spectrum(action, xi, eta):
        b = abs(_pair(v.root.vector, eta))
        if b == 0:
            continue
        # relative gap | |lambda| - b | / b in closed form; subtracting tanh from 1 loses it
        x = abs(_pair(v.root.vector, xi))
        gap = 2.0 / math.expm1(2 * x) if v.kind == "vertical" else 2.0 / (math.exp(min(2 * x, 700.0)) + 1)
        if gap <= tol:
            return False
    return True


def real_coxeter_generators(action: HermannActionDescriptor) -> list[AffineIsometry]:
    return [reflection(r.vector) for r in action.vertical_roots()]


# ---------------------------------------------------------------- catalog

def _split_from_rule(rule: dict, rs: RootSystem, restricted_type: str, env: dict, key: str):
    pos = rs.positive_roots()
    kind = rule.get("rule")
    if kind == "all_V":
        return [(r, SplitFlags(True, False)) for r in pos]
    if kind == "all_both":
        return [(r, SplitFlags(True, True)) for r in pos]
    if kind == "explicit":
        return _explicit(rule["roots"], pos, key)
    if kind == "minus":
        # roots e_i - e_j vertical, everything else horizontal
        out = []
        for r in pos:
            nz = [c for c in r.vector if c]
            v = len(nz) == 2 and sorted(nz) == [-1, 1]
            out.append((r, SplitFlags(v, not v)))
        return out
    if kind == "orbits":
        classify = orbit_classifier(restricted_type, rs)
        out = []
        for r in pos:
            tag = rule["map"].get(classify(r.vector))
            if tag is None and classify(r.vector) == "all" and len(rule["map"]) == 1:
                tag = next(iter(rule["map"].values()))
            if tag not in ("V", "H", "VH"):
                raise CatalogError(f"{key}: no split for {classify(r.vector)} roots")
            out.append((r, SplitFlags("V" in tag, "H" in tag)))
        return out
    if kind == "blocks":
        sizes = [evaluate(s, env) for s in rule["sizes"]]
        if sum(sizes) != rs.ambient_dim or any(s < 0 for s in sizes):
            raise CatalogError(f"{key}: block sizes {sizes} do not partition {rs.ambient_dim} coordinates")
        block_of = list(itertools.chain.from_iterable([b] * s for b, s in enumerate(sizes)))
        short_v = None
        if "short_V_blocks" in rule:
            short_v = {evaluate(s, env) for s in rule["short_V_blocks"]}
        out = []
        for r in pos:
            support = [i for i, c in enumerate(r.vector) if c]
            blocks = {block_of[i] for i in support}
            if len(support) == 1 and r.vector.norm2() == 1 and short_v is not None:
                v = block_of[support[0]] in short_v
            else:
                v = len(blocks) == 1
            out.append((r, SplitFlags(v, not v)))
        return out
    raise CatalogError(f"{key}: unknown split rule {kind!r}")


def _explicit(entries, pos, key):
    if len(entries) != len(pos):
        raise CatalogError(f"{key}: explicit split lists {len(entries)} roots, system has {len(pos)}")
    flags = {}
    for e in entries:
        i = int(e["root_index"])
        if not 0 <= i < len(pos) or i in flags:
            raise CatalogError(f"{key}: bad root_index {i}")
        flags[i] = SplitFlags(bool(e["in_V"]), bool(e["in_H"]))
    return [(pos[i], flags[i]) for i in range(len(pos))]


def _points(params: dict, where):
    names = list(params)
    for combo in itertools.product(*(range(lo, hi + 1) for lo, hi in params.values())):
        env = dict(zip(names, combo))
        if where is None or evaluate(where, env):
            yield env


def load_hermann_catalog(source=None, spaces_source=None) -> list[HermannActionDescriptor]:
    """Materialize every Hermann action in the catalog file."""
    if source is None:
        source = data_path(ACTIONS_FILE)
    if isinstance(source, (dict, list)):
        data = source
    else:
        path = Path(source)
        try:
            text = path.read_text()
        except OSError as exc:
            raise CatalogError(f"cannot read catalog {path}: {exc}") from exc
        if not text.strip():
            return []
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise CatalogError(f"{path}: invalid JSON ({exc})") from exc
    entries = data["actions"] if isinstance(data, dict) else data
    families = {f.label: f for f in load_families(spaces_source)}
    out = []
    for raw in entries:
        try:
            out.extend(_materialize(raw, families))
        except (KeyError, TypeError) as exc:
            raise CatalogError(f"malformed Hermann entry {raw.get('h_label', '?')!r}: {exc}") from exc
        except ExpressionError as exc:
            raise CatalogError(f"{raw.get('h_label', '?')}: {exc}") from exc
    return out


def _materialize(raw: dict, families: dict) -> list[HermannActionDescriptor]:
    ref = raw["space_ref"]
    if isinstance(ref, str):
        ref = {"label": ref}
    fam = families.get(ref["label"])
    if fam is None:
        raise CatalogError(f"{raw['h_label']}: unknown space {ref['label']!r}")
    params = {k: tuple(v) for k, v in (raw.get("params") or {}).items()}
    out = []
    for env in _points(params, raw.get("where")):
        for name, expr in (raw.get("let") or {}).items():
            env[name] = evaluate(expr, env)
        space_params = {k: evaluate(v, env) for k, v in (ref.get("params") or {}).items()}
        space = fam.instantiate(**space_params)
        label = raw["h_label"].format(**env)
        rs = restricted_system(space)
        expected = raw.get("expected_max_spec")
        if expected is not None:
            expected = evaluate(expected, env)
        split_raw = raw["split"]
        key = f"{label} on {space.key}"
        if isinstance(split_raw, list):
            split = _explicit(split_raw, rs.positive_roots(), key)
            aggregate = None
        elif "rule" in split_raw:
            split = _split_from_rule(split_raw, rs, space.restricted_type, env, key)
            aggregate = None
        else:
            split = None
            aggregate = {k: evaluate(v, env) for k, v in split_raw.items()}
            if "count_both" not in aggregate:
                raise CatalogError(f"{key}: aggregate split needs count_both")
        out.append(HermannActionDescriptor(label, space, tuple(split) if split else None,
                                           expected, aggregate, raw.get("table"), rs))
    return out


def hermann_rows(actions: Sequence[HermannActionDescriptor]) -> list[dict]:
    rows = []
    for a in actions:
        got = max_distinct_spec(a)
        exp = a.expected_max_spec
        rows.append({"h_label": a.h_label, "space": a.space.key, "computed": got,
                     "expected": "" if exp is None else exp,
                     "match": exp is not None and got == exp, "table": a.table})
    return rows

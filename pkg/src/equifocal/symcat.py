"""Irreducible symmetric spaces of non-compact type: restricted root data and m_{G/K}.

Multiplicities are catalog data (``data/symmetric_spaces.json``); this module
turns them into root systems and counts positive roots of multiplicity one.
"""
from __future__ import annotations

import functools
import itertools
import json
import os
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from ._expr import ExpressionError, evaluate
from .rootsys import RootSystem, build_root_system, orbit_classifier, with_multiplicities

CATALOG_ENV = "EQUIFOCAL_CATALOG_DIR"
SPACES_FILE = "symmetric_spaces.json"


class CatalogError(ValueError):
    pass


def data_path(filename: str) -> Path:
    """Catalog file location; ``$EQUIFOCAL_CATALOG_DIR`` overrides the shipped data."""
    override = os.environ.get(CATALOG_ENV)
    if override:
        return Path(override) / filename
    return Path(str(resources.files("equifocal") / "data" / filename))


@dataclass(frozen=True)
class MInvariant:
    n_pos: int
    n_mult1: int
    m: int

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.n_pos, self.n_mult1, self.m)


@dataclass(frozen=True)
class SymmetricSpaceDescriptor:
    label: str
    name: str
    rank: int
    restricted_type: str
    multiplicity_fn: dict[str, int]
    params: dict[str, int] = field(default_factory=dict)
    expected: tuple | None = None

    @property
    def key(self) -> str:
        if not self.params:
            return self.label
        inner = ",".join(f"{k}={v}" for k, v in self.params.items())
        return f"{self.label}[{inner}]"

    def __hash__(self):
        return hash(self.key)


@dataclass(frozen=True)
class SpaceFamily:
    """One row of the catalog file, possibly parametrised."""

    label: str
    name: str
    rank: str | int
    restricted_type: str
    multiplicities: dict
    param_ranges: dict[str, tuple]
    where: str | None
    expected: dict | None

    def instantiate(self, **params) -> SymmetricSpaceDescriptor:
        try:
            rank = evaluate(self.rank, params)
            mult = {k: evaluate(v, params) for k, v in self.multiplicities.items()}
            expected = None
            if self.expected:
                expected = tuple(evaluate(self.expected[k], params) for k in ("n_pos", "n_mult1", "m"))
        except ExpressionError as exc:
            raise CatalogError(f"{self.label}: {exc}") from exc
        if not isinstance(rank, int) or rank < 1:
            raise CatalogError(f"{self.label}{params}: rank evaluates to {rank!r}")
        for k, v in mult.items():
            if not isinstance(v, int) or v < 1:
                raise CatalogError(f"{self.label}{params}: multiplicity {k}={v!r} is not a positive integer")
        fixed = {"E6": 6, "E7": 7, "E8": 8, "F4": 4, "G2": 2}
        tag = self.restricted_type.upper()
        if tag in fixed and fixed[tag] != rank:
            raise CatalogError(f"{self.label}: rank {rank} inconsistent with restricted type {tag}")
        return SymmetricSpaceDescriptor(self.label, self.name.format(**params), rank,
                                        self.restricted_type, mult, dict(params), expected)

    def parameter_points(self):
        names = list(self.param_ranges)
        if not names:
            yield {}
            return
        ranges = [range(lo, hi + 1) for lo, hi in self.param_ranges.values()]
        for combo in itertools.product(*ranges):
            env = dict(zip(names, combo))
            if self.where is None or evaluate(self.where, env):
                yield env

    def materialize(self) -> list[SymmetricSpaceDescriptor]:
        return [self.instantiate(**env) for env in self.parameter_points()]


_REQUIRED = ("label", "name", "rank", "restricted_type", "multiplicities")


def _parse_family(raw: dict) -> SpaceFamily:
    missing = [k for k in _REQUIRED if k not in raw]
    if missing:
        raise CatalogError(f"catalog entry {raw.get('label', '?')!r} missing fields {missing}")
    if not isinstance(raw["multiplicities"], dict) or not raw["multiplicities"]:
        raise CatalogError(f"{raw['label']}: multiplicities must be a non-empty object")
    ranges = {}
    for name, bounds in (raw.get("params") or {}).items():
        if not (isinstance(bounds, list) and len(bounds) == 2 and all(isinstance(b, int) for b in bounds)):
            raise CatalogError(f"{raw['label']}: parameter {name!r} needs [min, max] integers")
        ranges[name] = tuple(bounds)
    return SpaceFamily(raw["label"], raw["name"], raw["rank"], raw["restricted_type"],
                       dict(raw["multiplicities"]), ranges, raw.get("where"), raw.get("table1"))


def load_families(source=None) -> list[SpaceFamily]:
    if source is None:
        source = data_path(SPACES_FILE)
    if isinstance(source, dict):
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
    if isinstance(data, list):
        entries = data
    elif isinstance(data, dict) and isinstance(data.get("spaces"), list):
        entries = data["spaces"]
    else:
        raise CatalogError("catalog must be a list or an object with a 'spaces' list")
    return [_parse_family(e) for e in entries]


def catalog_load(source=None) -> list[SymmetricSpaceDescriptor]:
    """All descriptors in the catalog, classical families expanded over their parameter ranges."""
    out = []
    for fam in load_families(source):
        out.extend(fam.materialize())
    return out


def find_family(label: str, families=None) -> SpaceFamily:
    for fam in families if families is not None else load_families():
        if fam.label == label:
            return fam
    raise CatalogError(f"no symmetric space with label {label!r}")


def restricted_system(desc: SymmetricSpaceDescriptor) -> RootSystem:
    items = tuple(sorted(desc.multiplicity_fn.items()))
    return _restricted(desc.restricted_type, desc.rank, items, desc.key)


@functools.lru_cache(maxsize=4096)
def _restricted(restricted_type: str, rank: int, mult_items: tuple, key: str) -> RootSystem:
    rs = build_root_system(restricted_type, rank)
    classify = orbit_classifier(restricted_type, rs)
    mult_fn = dict(mult_items)

    def mult(v):
        orbit = classify(v)
        if orbit not in mult_fn:
            # one-length systems may name their orbit "long" or "short"
            if orbit == "all" and len(mult_fn) == 1:
                return next(iter(mult_fn.values()))
            raise CatalogError(f"{key}: no multiplicity for {orbit} roots")
        return mult_fn[orbit]

    out = with_multiplicities(rs, mult)
    return RootSystem(out.ambient_dim, out.roots, key)


def root_counts(rs: RootSystem) -> MInvariant:
    pos = rs.positive_roots()
    n_pos = len(pos)
    n1 = sum(1 for r in pos if r.multiplicity == 1)
    return MInvariant(n_pos, n1, 2 * (n_pos - n1) + n1)


def m_invariant(desc: SymmetricSpaceDescriptor) -> MInvariant:
    return root_counts(restricted_system(desc))


def theorem_c_bound(datum, codim: int, dim_centralizer: int) -> int:
    """Upper bound on the number of distinct principal curvatures.

    ``datum`` is a descriptor (full-rank case) or a restricted root system.
    """
    rs = restricted_system(datum) if isinstance(datum, SymmetricSpaceDescriptor) else datum
    return root_counts(rs).m + dim_centralizer - codim


def table1_rows(descriptors) -> list[dict]:
    rows = []
    for d in descriptors:
        got = m_invariant(d)
        exp = d.expected
        row = {
            "label": d.key, "name": d.name,
            "n_pos": got.n_pos, "n_mult1": got.n_mult1, "m": got.m,
            "expected_n_pos": exp[0] if exp else "", "expected_n_mult1": exp[1] if exp else "",
            "expected_m": exp[2] if exp else "",
        }
        row["match"] = bool(exp) and got.as_tuple() == tuple(exp)
        rows.append(row)
    return rows


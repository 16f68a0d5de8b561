"""Problem specs in, reports out.

Problem JSON schema (vertex indices follow the breadth-first order of
``treelip.tree``)::

    {
      "tree":   {"kind": "homogeneous", "branching": 2, "root_degree": 2, "depth": 64}
              | {"kind": "explicit", "parents": [0, 0, 1, ...]},   # parent of vertex 1, 2, 3, ...
      "symbol": {"kind": "radial", "expr": "1/(n+1)", "overrides": {"0": 0.5}}
              | {"kind": "table", "values": [1.0, [0.5, -0.5], ...]},
      "pair":   "Lw->L" | "L->Lw" | "Lw->Linf" | "Linf->Lw",
      "little": false,
      "search": {"budget": 10000, "seed": 0, "strategy": "coordinate_ascent"},
      "tolerances": {"inversion_slack": 1e-9},
      "witness": {"family": "capped_log", "params": {"level": 8}}
    }

Complex table entries are ``[re, im]`` pairs. Emitted floats carry 17
significant digits; infinities are the strings ``"inf"``/``"-inf"``.
"""
from __future__ import annotations

import csv
import io as _io
import json
import math
from dataclasses import dataclass, field, fields
from typing import Any

import numpy as np

from .diagnostics import LABEL_PAIRS, PAIR_LABELS, SpacePair
from .expr import ExprSyntaxError, parse_expr
from .functions import QUANTITIES, Radial, Tabulated, level_profile, radial
from .operators import STRATEGIES, SearchConfig
from .tree import CapacityError, Tree, build_explicit, build_homogeneous, build_spine, homogeneous_count, max_vertices
from .witnesses import FAMILIES, WitnessSpec

DEFAULT_DEPTH = 64
DEFAULT_BRANCHING = 2
DEFAULT_ROOT_DEGREE = 2
TOLERANCE_DEFAULTS = {"inversion_slack": 1e-9, "witness_rtol": 1e-12, "lemma_rtol": 1e-12}
_RAW_COLUMNS = ("sup_diff", "sup_abs", "inf_abs", "sup_pair")
PROFILE_COLUMNS = ("n",) + _RAW_COLUMNS + tuple(q for q in QUANTITIES if q not in _RAW_COLUMNS)


class SchemaError(ValueError):
    """Problem JSON does not match the schema; ``path`` is a JSON path like ``$.tree.depth``."""

    def __init__(self, path: str, message: str, column: int | None = None):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.column = column


# ------------------------------------------------------------------ spec types

@dataclass(frozen=True)
class TreeSpec:
    kind: str
    branching: int = DEFAULT_BRANCHING
    root_degree: int = DEFAULT_ROOT_DEGREE
    depth: int = DEFAULT_DEPTH
    parents: tuple[int, ...] = ()

    def to_json(self) -> dict:
        if self.kind == "explicit":
            return {"kind": "explicit", "parents": list(self.parents)}
        return {"kind": "homogeneous", "branching": self.branching,
                "root_degree": self.root_degree, "depth": self.depth}


@dataclass(frozen=True)
class SymbolSpec:
    kind: str
    expr: str = ""
    overrides: tuple[tuple[int, float], ...] = ()
    values: tuple[complex, ...] = ()

    def to_json(self) -> dict:
        if self.kind == "radial":
            out: dict[str, Any] = {"kind": "radial", "expr": self.expr}
            if self.overrides:
                out["overrides"] = {str(k): v for k, v in self.overrides}
            return out
        return {"kind": "table",
                "values": [v.real if v.imag == 0 else [v.real, v.imag] for v in self.values]}


@dataclass(frozen=True)
class ProblemSpec:
    tree: TreeSpec
    symbol: SymbolSpec
    pair: str
    little: bool = False
    search: SearchConfig = field(default_factory=SearchConfig)
    tolerances: tuple[tuple[str, float], ...] = ()
    witness: WitnessSpec | None = None

    @property
    def space_pair(self) -> SpacePair:
        return SpacePair.from_label(self.pair, self.little)

    def tolerance(self, name: str) -> float:
        return dict(self.tolerances).get(name, TOLERANCE_DEFAULTS[name])

    def to_json(self) -> dict:
        out = {"tree": self.tree.to_json(), "symbol": self.symbol.to_json(), "pair": self.pair,
               "little": self.little,
               "search": {"budget": self.search.budget, "seed": self.search.seed,
                          "strategy": self.search.strategy}}
        if self.tolerances:
            out["tolerances"] = dict(self.tolerances)
        if self.witness is not None:
            out["witness"] = self.witness.to_dict()
        return out

    def replace(self, **changes) -> "ProblemSpec":
        kw = {f.name: getattr(self, f.name) for f in fields(self)}
        kw.update(changes)
        return ProblemSpec(**kw)


# --------------------------------------------------------------------- parsing

def _expect(obj, kind, path, what):
    if not isinstance(obj, kind) or (kind in (int, float) and isinstance(obj, bool)):
        raise SchemaError(path, f"expected {what}, got {type(obj).__name__}")
    return obj


def _int(obj, path, lo=None):
    if isinstance(obj, bool) or not isinstance(obj, int):
        raise SchemaError(path, f"expected an integer, got {obj!r}")
    if lo is not None and obj < lo:
        raise SchemaError(path, f"must be >= {lo}, got {obj}")
    return obj


def _real(obj, path):
    if isinstance(obj, bool) or not isinstance(obj, (int, float)):
        raise SchemaError(path, f"expected a number, got {obj!r}")
    val = float(obj)
    if not math.isfinite(val):
        raise SchemaError(path, "must be finite")
    return val


def _known_keys(obj: dict, allowed, path):
    for key in obj:
        if key not in allowed:
            raise SchemaError(f"{path}.{key}", "unknown field")


def _required(obj: dict, key, path):
    if key not in obj:
        raise SchemaError(f"{path}.{key}", "required field missing")
    return obj[key]


def _parse_tree(obj, path="$.tree") -> TreeSpec:
    _expect(obj, dict, path, "an object")
    kind = _required(obj, "kind", path)
    if kind == "homogeneous":
        _known_keys(obj, ("kind", "branching", "root_degree", "depth"), path)
        return TreeSpec("homogeneous",
                        _int(obj.get("branching", DEFAULT_BRANCHING), f"{path}.branching", 1),
                        _int(obj.get("root_degree", DEFAULT_ROOT_DEGREE), f"{path}.root_degree", 1),
                        _int(obj.get("depth", DEFAULT_DEPTH), f"{path}.depth", 0))
    if kind == "explicit":
        _known_keys(obj, ("kind", "parents"), path)
        parents = _expect(_required(obj, "parents", path), list, f"{path}.parents", "a list")
        vals = tuple(_int(p, f"{path}.parents[{i}]", 0) for i, p in enumerate(parents))
        for i, p in enumerate(vals):
            if p > i:
                raise SchemaError(f"{path}.parents[{i}]", f"vertex {i + 1} must come after its parent {p}")
        return TreeSpec("explicit", parents=vals, depth=0)
    raise SchemaError(f"{path}.kind", f"expected 'homogeneous' or 'explicit', got {kind!r}")


def _parse_symbol(obj, path="$.symbol") -> SymbolSpec:
    _expect(obj, dict, path, "an object")
    kind = _required(obj, "kind", path)
    if kind == "radial":
        _known_keys(obj, ("kind", "expr", "overrides"), path)
        text = _expect(_required(obj, "expr", path), str, f"{path}.expr", "a string")
        try:
            parse_expr(text)
        except ExprSyntaxError as exc:
            raise SchemaError(f"{path}.expr", str(exc), exc.column) from exc
        raw = _expect(obj.get("overrides", {}), dict, f"{path}.overrides", "an object")
        over = []
        for key, val in raw.items():
            if not key.isdigit():
                raise SchemaError(f"{path}.overrides.{key}", "keys are nonnegative level numbers")
            over.append((int(key), _real(val, f"{path}.overrides.{key}")))
        return SymbolSpec("radial", expr=text, overrides=tuple(sorted(over)))
    if kind == "table":
        _known_keys(obj, ("kind", "values"), path)
        vals = _expect(_required(obj, "values", path), list, f"{path}.values", "a list")
        out = []
        for i, v in enumerate(vals):
            p = f"{path}.values[{i}]"
            if isinstance(v, list):
                if len(v) != 2:
                    raise SchemaError(p, "complex entries are [re, im]")
                out.append(complex(_real(v[0], p + "[0]"), _real(v[1], p + "[1]")))
            else:
                out.append(complex(_real(v, p), 0.0))
        return SymbolSpec("table", values=tuple(out))
    raise SchemaError(f"{path}.kind", f"expected 'radial' or 'table', got {kind!r}")


def _parse_search(obj, path="$.search") -> SearchConfig:
    _expect(obj, dict, path, "an object")
    _known_keys(obj, ("budget", "seed", "strategy"), path)
    strategy = obj.get("strategy", "coordinate_ascent")
    if strategy not in STRATEGIES:
        raise SchemaError(f"{path}.strategy", f"expected one of {STRATEGIES}, got {strategy!r}")
    return SearchConfig(_int(obj.get("budget", 10000), f"{path}.budget", 1),
                        _int(obj.get("seed", 0), f"{path}.seed"), strategy)


def _parse_witness(obj, path="$.witness") -> WitnessSpec:
    _expect(obj, dict, path, "an object")
    _known_keys(obj, ("family", "params"), path)
    fam = _required(obj, "family", path)
    if fam not in FAMILIES:
        raise SchemaError(f"{path}.family", f"unknown family {fam!r}")
    params = _expect(obj.get("params", {}), dict, f"{path}.params", "an object")
    return WitnessSpec(fam, params)


def problem_from_dict(obj: Any) -> ProblemSpec:
    _expect(obj, dict, "$", "an object")
    _known_keys(obj, ("tree", "symbol", "pair", "little", "search", "tolerances", "witness"), "$")
    tree = _parse_tree(_required(obj, "tree", "$"))
    symbol = _parse_symbol(_required(obj, "symbol", "$"))
    pair = _required(obj, "pair", "$")
    if pair not in LABEL_PAIRS:
        raise SchemaError("$.pair", f"expected one of {sorted(LABEL_PAIRS)}, got {pair!r}")
    little = obj.get("little", False)
    if not isinstance(little, bool):
        raise SchemaError("$.little", "expected a boolean")
    tol = _expect(obj.get("tolerances", {}), dict, "$.tolerances", "an object")
    for key in tol:
        if key not in TOLERANCE_DEFAULTS:
            raise SchemaError(f"$.tolerances.{key}", f"unknown tolerance; known: {sorted(TOLERANCE_DEFAULTS)}")
    tolerances = tuple(sorted((k, _real(v, f"$.tolerances.{k}")) for k, v in tol.items()))
    witness = _parse_witness(obj["witness"]) if "witness" in obj else None
    spec = ProblemSpec(tree, symbol, pair, little, _parse_search(obj.get("search", {})), tolerances, witness)
    if symbol.kind == "table":
        count = _vertex_count(tree)
        if count != len(symbol.values):
            raise SchemaError("$.symbol.values", f"{len(symbol.values)} values for a tree with {count} vertices")
    return spec


def parse_problem(data: bytes | str) -> ProblemSpec:
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise SchemaError("$", f"not UTF-8: {exc}") from exc
    try:
        obj = json.loads(data)
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return problem_from_dict(obj)


def _vertex_count(tree: TreeSpec) -> int:
    if tree.kind == "explicit":
        return len(tree.parents) + 1
    return homogeneous_count(tree.branching, tree.root_degree, tree.depth)


# ----------------------------------------------------------- realizing specs

@dataclass(frozen=True)
class Realized:
    tree: Tree
    symbol: Radial | Tabulated
    spine_substitute: bool


def realize(spec: ProblemSpec, max_vertices_override: int | None = None) -> Realized:
    """Build the tree and symbol.

    A homogeneous tree past the vertex cap is replaced by a unary spine of
    the same depth when the symbol is radial: every quantity is a per-level
    extremum and every truncation vertex above the last level has a child,
    so the two trees give identical numbers.
    """
    t = spec.tree
    if t.kind == "explicit":
        tree = build_explicit(list(t.parents), max_vertices_override=max_vertices_override)
        spine = False
    else:
        count = homogeneous_count(t.branching, t.root_degree, t.depth)
        cap = max_vertices(max_vertices_override)
        if count > cap and spec.symbol.kind == "radial":
            tree, spine = build_spine(t.depth), True
        elif count > cap:
            raise CapacityError(f"homogeneous tree has {count} vertices, above the cap {cap}")
        else:
            tree = build_homogeneous(t.branching, t.root_degree, t.depth, max_vertices_override)
            spine = False
    s = spec.symbol
    if s.kind == "radial":
        sym = radial(s.expr, dict(s.overrides))
    else:
        sym = Tabulated(tree, np.array(s.values, dtype=np.complex128))
    return Realized(tree, sym, spine)


# -------------------------------------------------------------------- emitting

def _fmt_float(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return format(x, ".17g")


def _plain(obj):
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    return obj


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON with every float written to 17 significant digits."""
    obj = _plain(obj)
    pad, inner = " " * (indent * _level), " " * (indent * (_level + 1))
    if obj is None or isinstance(obj, bool) or isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(_plain(v), (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(dumps(v, indent, _level + 1) for v in obj) + "]"
        return "[\n" + ",\n".join(inner + dumps(v, indent, _level + 1) for v in obj) + "\n" + pad + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def emit_problem(spec: ProblemSpec) -> bytes:
    return (dumps(spec.to_json()) + "\n").encode("utf-8")


# ---------------------------------------------------------------- level profile

def level_profile_rows(psi, tree: Tree) -> list[dict[str, float]]:
    """One row per level: raw extrema and every weighted level quantity.

    Entries below a quantity's first level are ``nan`` (the quantity is not
    defined there).
    """
    prof = level_profile(psi, tree)
    columns = {"sup_diff": prof.diffmax, "sup_abs": prof.absmax, "inf_abs": prof.absmin, "sup_pair": prof.pairmax}
    for name, q in QUANTITIES.items():
        col = np.array(prof.weighted(q), dtype=np.float64)
        col[: q.first_level] = np.nan
        columns[name] = col
    rows = []
    for n in range(tree.depth + 1):
        row = {"n": n}
        row.update({k: float(v[n]) for k, v in columns.items()})
        rows.append(row)
    return rows


def profile_csv(rows: list[dict[str, float]]) -> bytes:
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(PROFILE_COLUMNS)
    for row in rows:
        writer.writerow([row["n"]] + ["" if math.isnan(row[c]) else format(row[c], ".17g")
                                      for c in PROFILE_COLUMNS[1:]])
    return buf.getvalue().encode("utf-8")


def read_profile_csv(data: bytes) -> list[dict[str, float]]:
    rows = []
    for rec in csv.DictReader(_io.StringIO(data.decode("utf-8"))):
        rows.append({k: (int(v) if k == "n" else (float(v) if v != "" else math.nan)) for k, v in rec.items()})
    return rows


__all__ = ["SchemaError", "TreeSpec", "SymbolSpec", "ProblemSpec", "parse_problem", "problem_from_dict",
           "emit_problem", "dumps", "realize", "Realized", "level_profile_rows", "profile_csv",
           "read_profile_csv", "PAIR_LABELS"]

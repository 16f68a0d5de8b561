"""Functions on trees, differences, norms, and level quantities.

Two representations:

* ``Radial``: a closed-form expression in the level ``n = |v|``, optionally
  with per-level overrides (``{0: 0.5}`` pins the root value). Radial
  functions are defined on the whole infinite tree, so their sups combine a
  dense scan of the first levels with the tail ladder of ``treelip.tail``.
* ``Tabulated``: one complex value per vertex of a given truncation. All sups
  are exact over the truncation; limits are never claimed.

Every sup-type quantity used anywhere in the package is a ``LevelQuantity``:
a base per vertex (``abs`` = ``|f(v)|``, ``diff`` = ``Df(v)``, ``pair`` =
``|f(v)| + |f(v^-)|``) combined with a weight in ``n``. The per-level path
reduces the base first and then applies the weight; since every combiner is
monotone in the base this equals the per-vertex computation exactly.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Callable, Mapping, Union

import mpmath
import numpy as np

from . import tail as tl
from .expr import ExprDomainError, RadialExpr, parse_expr
from .tree import Tree

SPACES = ("L", "L0", "Lw", "Lw0", "Linf")
EULER_GAMMA = 0.57721566490153286061
_HARMONIC_TABLE_SIZE = 1 << 16


class FunctionError(ValueError):
    pass


@dataclass(frozen=True)
class Radial:
    expr: RadialExpr
    overrides: tuple[tuple[int, float], ...] = ()

    @property
    def text(self) -> str:
        return self.expr.text

    def override_map(self) -> dict[int, float]:
        return dict(self.overrides)

    def level_values(self, n) -> np.ndarray:
        n = np.asarray(n, dtype=np.int64)
        out = np.empty(n.shape, dtype=np.float64)
        mask = np.ones(n.shape, dtype=bool)
        for lvl, val in self.overrides:
            hit = n == lvl
            out[hit] = val
            mask &= ~hit
        if mask.any():
            out[mask] = self.expr(n[mask])
        return out

    def mp_value(self, n: int):
        for lvl, val in self.overrides:
            if lvl == n:
                return mpmath.mpf(val)
        return self.expr.mp(n)


@dataclass(frozen=True, eq=False)
class Tabulated:
    tree: Tree
    values: np.ndarray

    def __post_init__(self):
        vals = np.array(self.values, dtype=np.complex128)
        if vals.shape != (self.tree.vertex_count,):
            raise FunctionError(
                f"table has {vals.size} values but the tree has {self.tree.vertex_count} vertices")
        if not np.all(np.isfinite(vals)):
            bad = int(np.flatnonzero(~np.isfinite(vals))[0])
            raise FunctionError(f"table value at vertex {bad} is not finite")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)


TreeFunction = Union[Radial, Tabulated]


def radial(text: str, overrides: Mapping[int, float] | None = None) -> Radial:
    items = tuple(sorted((int(k), float(v)) for k, v in (overrides or {}).items()))
    for lvl, val in items:
        if lvl < 0:
            raise FunctionError(f"override level {lvl} is negative")
        if not np.isfinite(val):
            raise FunctionError(f"override at level {lvl} is not finite")
    return Radial(parse_expr(text), items)


def constant(c: float) -> Radial:
    return radial(repr(float(c)))


def tabulated(tree: Tree, values) -> Tabulated:
    return Tabulated(tree, np.asarray(values))


def indicator(tree: Tree, v: int, scale: complex = 1.0) -> Tabulated:
    tree._check(v)
    vals = np.zeros(tree.vertex_count, dtype=np.complex128)
    vals[v] = scale
    return Tabulated(tree, vals)


def _check_tree(f: TreeFunction, tree: Tree) -> None:
    if isinstance(f, Tabulated) and f.tree is not tree:
        if f.tree.vertex_count != tree.vertex_count or not np.array_equal(f.tree.parent, tree.parent):
            raise FunctionError("tabulated function belongs to a different tree")


def level_values(f: Radial, depth: int) -> np.ndarray:
    return _dense(f, depth)


def _dense(f: Radial, depth: int) -> np.ndarray:
    # always evaluate the same level range so values never depend on the caller's depth
    return _dense_block(f, max(tl.DENSE_DEPTH, depth))[: depth + 1]


@functools.lru_cache(maxsize=256)
def _dense_block(f: Radial, depth: int) -> np.ndarray:
    vals = f.level_values(np.arange(depth + 1))
    vals.setflags(write=False)
    return vals


def values_on(f: TreeFunction, tree: Tree) -> np.ndarray:
    """Values per vertex (float for radial, complex for tabulated)."""
    _check_tree(f, tree)
    if isinstance(f, Tabulated):
        return f.values
    return _dense(f, tree.depth)[tree.level]


def materialize(f: TreeFunction, tree: Tree) -> Tabulated:
    return f if isinstance(f, Tabulated) else Tabulated(tree, values_on(f, tree))


def evaluate(f: TreeFunction, tree: Tree, v: int) -> complex:
    tree._check(v)
    if isinstance(f, Tabulated):
        _check_tree(f, tree)
        return complex(f.values[v])
    n = int(tree.level[v])
    try:
        return complex(f.level_values(np.array([n]))[0])
    except ExprDomainError as exc:
        raise ExprDomainError(f"{exc} (vertex {v})", n) from exc


def difference(f: TreeFunction, tree: Tree, v: int) -> float:
    tree._check(v)
    if v == 0:
        raise FunctionError("Df is undefined at the root")
    return abs(evaluate(f, tree, v) - evaluate(f, tree, int(tree.parent[v])))


def differences(f: TreeFunction, tree: Tree) -> np.ndarray:
    """``Df`` per vertex; the root entry is 0 by convention."""
    vals = values_on(f, tree)
    out = np.zeros(tree.vertex_count, dtype=np.float64)
    out[1:] = np.abs(vals[1:] - vals[tree.parent[1:]])
    return out


def vertex_bases(f: TreeFunction, tree: Tree) -> dict[str, np.ndarray]:
    vals = values_on(f, tree)
    absv = np.abs(vals).astype(np.float64)
    pair = np.zeros(tree.vertex_count, dtype=np.float64)
    pair[1:] = absv[1:] + absv[tree.parent[1:]]
    return {"abs": absv, "diff": differences(f, tree), "pair": pair}


# ---------------------------------------------------------------- quantities

def harmonic_numbers(n) -> np.ndarray:
    """``H_n`` for integer levels; table below 2**16, asymptotic series above."""
    n = np.asarray(n, dtype=np.int64)
    out = np.empty(n.shape, dtype=np.float64)
    small = n < _HARMONIC_TABLE_SIZE
    out[small] = _harmonic_table()[n[small]]
    big = n[~small].astype(np.float64)
    out[~small] = np.log(big) + EULER_GAMMA + 1 / (2 * big) - 1 / (12 * big**2) + 1 / (120 * big**4)
    return out


@functools.lru_cache(maxsize=1)
def _harmonic_table() -> np.ndarray:
    return np.concatenate(([0.0], np.cumsum(1.0 / np.arange(1, _HARMONIC_TABLE_SIZE))))


def _log_or_zero(n: np.ndarray) -> np.ndarray:
    return np.log(np.maximum(n, 1.0))


@dataclass(frozen=True)
class LevelQuantity:
    name: str
    base: str
    combine: Callable[[np.ndarray, np.ndarray], np.ndarray]
    first_level: int
    mode: str = "sup"

    def __call__(self, n, base) -> np.ndarray:
        return self.combine(np.asarray(n, dtype=np.float64), np.asarray(base, dtype=np.float64))


def _q(name, base, combine, first, mode="sup"):
    return LevelQuantity(name, base, combine, first, mode)


QUANTITIES: dict[str, LevelQuantity] = {q.name: q for q in (
    _q("sup_abs", "abs", lambda n, b: b, 0),
    _q("lip", "diff", lambda n, b: b, 1),
    _q("wlip", "diff", lambda n, b: n * b, 1),
    _q("tau", "diff", lambda n, b: np.log1p(n) * b, 1),
    _q("tau_hat", "diff", lambda n, b: (1 + _log_or_zero(n)) * b, 1),
    _q("sigma", "abs", lambda n, b: b / (n + 1), 0),
    _q("theta", "diff", lambda n, b: n * n * b, 1),
    _q("omega", "abs", lambda n, b: (n + 1) * b, 0),
    _q("gamma_star", "abs", lambda n, b: (1 + _log_or_zero(n)) * b, 1),
    _q("log1p_abs", "abs", lambda n, b: np.log1p(n) * b, 1),
    _q("harmonic_abs", "abs", lambda n, b: harmonic_numbers(n.astype(np.int64)) * b, 1),
    _q("eta_star", "pair", lambda n, b: n * b, 1),
    _q("B2", "diff", lambda n, b: _log_or_zero(n) * b, 2),
    _q("A3", "abs", lambda n, b: n * b, 1),
    _q("A4", "abs", lambda n, b: _log_or_zero(n) * b, 2),
    _q("sigma_inf", "abs", lambda n, b: b / (n + 1), 0, "inf"),
)}
# limit quantities that share a weight with a global sup
TAIL_ALIASES = {"A2": "sigma", "B3": "theta", "B5": "eta_star", "L0": "lip", "Lw0": "wlip"}


def quantity(name: str) -> LevelQuantity:
    try:
        return QUANTITIES[TAIL_ALIASES.get(name, name)]
    except KeyError:
        raise FunctionError(f"unknown level quantity {name!r}") from None


@dataclass(frozen=True)
class LevelProfile:
    """Per-level extrema of the vertex bases (``diff`` and ``pair`` are 0 at the root)."""

    absmax: np.ndarray
    absmin: np.ndarray
    diffmax: np.ndarray
    pairmax: np.ndarray

    @property
    def depth(self) -> int:
        return self.absmax.size - 1

    def base(self, name: str, mode: str = "sup") -> np.ndarray:
        if mode == "inf":
            if name != "abs":
                raise FunctionError("infimum profiles exist only for |f|")
            return self.absmin
        return {"abs": self.absmax, "diff": self.diffmax, "pair": self.pairmax}[name]

    def weighted(self, q: LevelQuantity) -> np.ndarray:
        return q(np.arange(self.depth + 1), self.base(q.base, q.mode))


def level_profile(f: TreeFunction, tree: Tree) -> LevelProfile:
    _check_tree(f, tree)
    if isinstance(f, Radial):
        vals = np.abs(_dense(f, tree.depth))
        d = np.zeros_like(vals)
        pair = np.zeros_like(vals)
        raw = _dense(f, tree.depth)
        d[1:] = np.abs(raw[1:] - raw[:-1])
        pair[1:] = vals[1:] + vals[:-1]
        return LevelProfile(vals, vals.copy(), d, pair)
    bases = vertex_bases(f, tree)
    return LevelProfile(level_reduce(bases["abs"], tree), level_reduce(bases["abs"], tree, np.minimum),
                        level_reduce(bases["diff"], tree), level_reduce(bases["pair"], tree))


def level_reduce(arr: np.ndarray, tree: Tree, op=np.maximum) -> np.ndarray:
    """Reduce a per-vertex array to one value per level."""
    order = np.concatenate(tree.levels)
    starts = np.concatenate(([0], np.cumsum(tree.level_sizes())[:-1]))
    return op.reduceat(np.asarray(arr)[order], starts)


# ------------------------------------------------------------- tail ladders

@dataclass(frozen=True)
class _Windows:
    abs: np.ndarray  # shape (len(LADDER_EXPONENTS), WINDOW)
    diff: np.ndarray
    pair: np.ndarray
    levels: np.ndarray


@functools.lru_cache(maxsize=256)
def _windows(f: Radial) -> _Windows:
    ks = tl.LADDER_EXPONENTS
    levels = np.array([tl.window_levels(k) for k in ks])
    absv = np.empty(levels.shape)
    diff = np.empty(levels.shape)
    pair = np.empty(levels.shape)
    with mpmath.workdps(80):
        for i in range(levels.shape[0]):
            prev = f.mp_value(int(levels[i, 0]) - 1)
            for j in range(levels.shape[1]):
                cur = f.mp_value(int(levels[i, j]))
                absv[i, j] = float(abs(cur))
                diff[i, j] = float(abs(cur - prev))
                pair[i, j] = float(abs(cur) + abs(prev))
                prev = cur
    return _Windows(absv, diff, pair, levels)


def _window_q(f: Radial, q: LevelQuantity) -> tuple[np.ndarray, np.ndarray]:
    """Per-window extremum of ``q`` and the level attaining it."""
    w = _windows(f)
    vals = q(w.levels, getattr(w, q.base))
    idx = np.argmax(vals, axis=1) if q.mode == "sup" else np.argmin(vals, axis=1)
    rows = np.arange(vals.shape[0])
    return vals[rows, idx], w.levels[rows, idx]


def _tail_moves_away(win_q: np.ndarray, value: float, mode: str) -> bool:
    steps = np.diff(win_q[-6:])
    if mode == "sup":
        return bool(np.all(steps < 0) and win_q[-1] < value)
    return bool(np.all(steps > 0) and win_q[-1] > value)


def _radial_estimate(f: Radial, q: LevelQuantity, tree: Tree | None, limit_only: bool) -> tl.TailEstimate:
    mode = q.mode
    pick = np.max if mode == "sup" else np.min
    arg = np.argmax if mode == "sup" else np.argmin
    depth = tree.depth if tree is not None else 0
    dense_depth = max(tl.DENSE_DEPTH, depth)
    vals = _dense(f, dense_depth)
    absv = np.abs(vals)
    base = {"abs": absv, "diff": np.concatenate(([0.0], np.abs(np.diff(vals)))),
            "pair": np.concatenate(([0.0], absv[1:] + absv[:-1]))}[q.base]
    dense_q = q(np.arange(dense_depth + 1), base)[q.first_level:]
    win_q, win_lvl = _window_q(f, q)
    limit, status = tl.limit_of(win_q, mode)

    truncation = None
    if tree is not None and depth >= q.first_level:
        truncation = float(pick(dense_q[: depth - q.first_level + 1]))

    # partial extrema over {|v| >= 2^k}, merged from dense scan and windows
    ladder = []
    part = tl.partial_extrema(win_q, mode)
    dense_part = tl.partial_extrema(dense_q, mode)
    for i, k in enumerate(tl.LADDER_EXPONENTS):
        n = 2**k
        v = part[i]
        if n - q.first_level < dense_part.size:
            v = pick([v, dense_part[max(n - q.first_level, 0)]])
        if status == tl.DIVERGED:
            v = np.inf if mode == "sup" else v
        elif status == tl.CONVERGED:
            v = pick([v, limit])
        ladder.append((n, float(v)))
    ladder = tuple(ladder)

    if limit_only:
        return tl.TailEstimate(float(limit), status, ladder, truncation, None)

    i_dense, i_win = int(arg(dense_q)), int(arg(win_q))
    cands = [(float(dense_q[i_dense]), i_dense + q.first_level), (float(win_q[i_win]), int(win_lvl[i_win]))]
    if status == tl.DIVERGED and mode == "sup":
        return tl.TailEstimate(np.inf, tl.DIVERGED, ladder, truncation, None)
    best = max(cands) if mode == "sup" else min(cands)
    value, at_level = best
    if status == tl.CONVERGED and ((mode == "sup" and limit > value) or (mode == "inf" and limit < value)):
        value, at_level = float(limit), None
    elif status == tl.INCONCLUSIVE and _tail_moves_away(win_q, value, mode):
        # the limit is unknown but cannot beat an extremum the tail is moving away from
        status = tl.CONVERGED
    # a global extremum is settled once the tail is settled
    return tl.TailEstimate(value, status if status != tl.DIVERGED else tl.CONVERGED, ladder,
                           truncation, at_level)


def _table_estimate(f: Tabulated, q: LevelQuantity, tree: Tree, limit_only: bool) -> tl.TailEstimate:
    prof = level_profile(f, tree)
    level_q = prof.weighted(q)
    pick = np.max if q.mode == "sup" else np.min
    if tree.depth < q.first_level:
        return tl.TailEstimate(0.0, tl.CONVERGED if not limit_only else tl.INCONCLUSIVE, (), 0.0, None)
    body = level_q[q.first_level:]
    ladder = tl.finite_ladder(level_q, q.mode, q.first_level)
    value = float(pick(body))
    at = int((np.argmax(body) if q.mode == "sup" else np.argmin(body)) + q.first_level)
    if limit_only:
        return tl.TailEstimate(float(body[-1]), tl.INCONCLUSIVE, ladder, value, tree.depth)
    return tl.TailEstimate(value, tl.CONVERGED, ladder, value, at)


def sup_estimate(f: TreeFunction, tree: Tree | None, name: str) -> tl.TailEstimate:
    """Global sup (or inf) of a level quantity over its levels."""
    q = quantity(name)
    if isinstance(f, Radial):
        return _radial_estimate(f, q, tree, limit_only=False)
    if tree is None:
        raise FunctionError("tabulated functions need their tree")
    _check_tree(f, tree)
    return _table_estimate(f, q, tree, limit_only=False)


def limit_estimate(f: TreeFunction, tree: Tree | None, name: str) -> tl.TailEstimate:
    """``lim_n sup_{|v| >= n}`` of a level quantity (``inf`` for infimum quantities)."""
    q = quantity(name)
    if isinstance(f, Radial):
        return _radial_estimate(f, q, tree, limit_only=True)
    if tree is None:
        raise FunctionError("tabulated functions need their tree")
    _check_tree(f, tree)
    return _table_estimate(f, q, tree, limit_only=True)


def truncation_sup(f: TreeFunction, tree: Tree, name: str) -> float:
    q = quantity(name)
    level_q = level_profile(f, tree).weighted(q)[q.first_level:]
    if level_q.size == 0:
        return 0.0
    return float(np.max(level_q) if q.mode == "sup" else np.min(level_q))


# -------------------------------------------------------------------- norms

def _sup(f: TreeFunction, tree: Tree, name: str, tail: bool) -> float:
    if isinstance(f, Radial) and tail:
        est = sup_estimate(f, tree, name)
        return float(est.value) if est.status != tl.DIVERGED else np.inf
    return truncation_sup(f, tree, name)


def _root_abs(f: TreeFunction, tree: Tree) -> float:
    return abs(evaluate(f, tree, 0))


def lipschitz_norm(f: TreeFunction, tree: Tree, tail: bool = True) -> float:
    """``|f(o)| + sup Df``; radial functions include the tail unless ``tail=False``."""
    return _root_abs(f, tree) + _sup(f, tree, "lip", tail)


def weighted_seminorm(f: TreeFunction, tree: Tree, tail: bool = True) -> float:
    return _sup(f, tree, "wlip", tail)


def weighted_norm(f: TreeFunction, tree: Tree, tail: bool = True) -> float:
    return _root_abs(f, tree) + weighted_seminorm(f, tree, tail)


def sup_norm(f: TreeFunction, tree: Tree, tail: bool = True) -> float:
    return _sup(f, tree, "sup_abs", tail)


NORMS = {"L": lipschitz_norm, "Lw": weighted_norm, "Linf": sup_norm}


def norm(space: str, f: TreeFunction, tree: Tree, tail: bool = True) -> float:
    return NORMS[space](f, tree, tail)


# --------------------------------------------------------------- membership

@dataclass(frozen=True)
class MembershipVerdict:
    space: str
    status: str  # in | out | inconclusive | finite-sample-only
    evidence: tl.TailEstimate

    def to_dict(self) -> dict:
        return {"space": self.space, "status": self.status, "evidence": self.evidence.to_dict()}


_SPACE_QUANTITY = {"L": "lip", "Lw": "wlip", "Linf": "sup_abs", "L0": "L0", "Lw0": "Lw0"}


def membership(f: TreeFunction, tree: Tree, space: str) -> MembershipVerdict:
    if space not in SPACES:
        raise FunctionError(f"unknown space {space!r}; expected one of {SPACES}")
    little = space in ("L0", "Lw0")
    name = _SPACE_QUANTITY[space]
    if isinstance(f, Tabulated):
        return MembershipVerdict(space, "finite-sample-only", sup_estimate(f, tree, name))
    est = limit_estimate(f, tree, name) if little else sup_estimate(f, tree, name)
    if est.status == tl.DIVERGED:
        status = "out"
    elif est.status == tl.INCONCLUSIVE:
        status = "inconclusive"
    elif little:
        status = "in" if est.is_zero() else "out"
    else:
        status = "in"
    return MembershipVerdict(space, status, est)

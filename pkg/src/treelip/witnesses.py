"""Extremal test functions for lower bounds on multiplication operators.

Each family builds a tabulated function on a truncation together with its
norm in the family's source space. Radial families are written as level
profiles (value depends on ``|v|`` only) and then spread over the tree.

Anchor levels are written ``m`` (the level of the anchor vertex). Families
with a closed-form norm report it next to the truncation norm.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Mapping

import numpy as np

from .functions import (Tabulated, TreeFunction, harmonic_numbers, norm, values_on)
from .tree import Tree, ancestor_at

FAMILIES = (
    "point_mass", "capped_log", "log_power", "squared_log_ramp", "sqrt_window_ramp",
    "log_ramp_p", "radial_cap", "quadratic_ramp", "half_window_ramp", "parity_annulus",
    "sign_alternating", "tail_sign",
    # extra probes
    "indicator", "capped_harmonic", "ball_indicator", "constant", "bent_cap",
)
NEEDS_SYMBOL = ("sign_alternating", "tail_sign")

SOURCE_SPACE = {
    "point_mass": "Lw", "capped_log": "Lw", "log_power": "Lw", "squared_log_ramp": "Lw",
    "sqrt_window_ramp": "Lw", "log_ramp_p": "Lw", "capped_harmonic": "Lw",
    "radial_cap": "L", "quadratic_ramp": "L", "half_window_ramp": "L", "parity_annulus": "L",
    "indicator": "L", "bent_cap": "L",
    "sign_alternating": "Linf", "tail_sign": "Linf", "ball_indicator": "Linf", "constant": "Linf",
}


class WitnessError(ValueError):
    pass


@dataclass(frozen=True)
class WitnessSpec:
    family: str
    params: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise WitnessError(f"unknown witness family {self.family!r}")
        object.__setattr__(self, "params", dict(self.params))

    def label(self) -> str:
        if not self.params:
            return self.family
        inner = ",".join(f"{k}={self.params[k]}" for k in sorted(self.params))
        return f"{self.family}({inner})"

    def to_dict(self) -> dict:
        return {"family": self.family, "params": dict(self.params)}


@dataclass(frozen=True)
class Witness:
    spec: WitnessSpec
    function: Tabulated
    space: str
    norm: float  # on the truncation
    closed_form: float | None = None  # closed-form value, when the truncation reaches the anchor
    limit_norm: float | None = None  # value as the anchor level grows

    def to_dict(self, include_values: bool = True) -> dict:
        out = {"witness": self.spec.to_dict(), "label": self.spec.label(), "space": self.space,
               "norm": self.norm, "closed_form": self.closed_form, "limit_norm": self.limit_norm}
        if include_values:
            vals = self.function.values
            out["values"] = [float(v.real) for v in vals] if not np.any(vals.imag) else \
                [[float(v.real), float(v.imag)] for v in vals]
        return out


# ------------------------------------------------------------ level profiles

def _levels(depth: int) -> np.ndarray:
    return np.arange(depth + 1, dtype=np.float64)


def capped_log_profile(m: int, depth: int) -> np.ndarray:
    n = _levels(depth)
    return np.log1p(np.minimum(n, m))


def capped_harmonic_profile(m: int, depth: int) -> np.ndarray:
    return harmonic_numbers(np.minimum(np.arange(depth + 1), m))


def log_power_profile(alpha: float, depth: int) -> np.ndarray:
    return np.log1p(_levels(depth)) ** alpha


def squared_log_ramp_profile(m: int, depth: int) -> np.ndarray:
    n = _levels(depth)
    return np.where(n < m, np.log(n + 1) ** 2 / math.log(m), math.log(m))


def sqrt_window_ramp_profile(m: int, depth: int) -> np.ndarray:
    k = np.arange(depth + 1)
    out = np.zeros(depth + 1)
    middle = (k * k >= m) & (k < m - 1)  # sqrt(m) <= |v| < m - 1, compared in integers
    out[middle] = 2 * np.log(k[middle]) - math.log(m)
    out[k >= m - 1] = math.log(m)
    return out


def log_ramp_p_profile(m: int, p: float, depth: int) -> np.ndarray:
    k = np.arange(depth + 1)
    out = np.zeros(depth + 1)
    mid = (k >= 1) & (k < m)
    out[mid] = np.log(k[mid]) ** (p + 1) / math.log(m) ** p
    out[k >= m] = math.log(m)
    return out


def radial_cap_profile(m: int, depth: int) -> np.ndarray:
    return np.minimum(_levels(depth), m)


def bent_cap_profile(m: int, depth: int) -> np.ndarray:
    """Climb one per level up to ``m - 1``, then step back down by one."""
    lv = _levels(depth)
    return np.where(lv < m, lv, m - 2.0)


def quadratic_ramp_profile(m: int, depth: int) -> np.ndarray:
    k = np.arange(depth + 1)
    out = np.where(k < m, (k + 1.0) ** 2 / m, float(m))
    out[0] = 0.0
    return out


def half_window_ramp_profile(m: int, depth: int) -> np.ndarray:
    k = np.arange(depth + 1)
    lo = m // 2
    out = np.zeros(depth + 1)
    mid = (k >= lo) & (k < m)
    out[mid] = 2.0 * k[mid] - m + 2
    out[k >= m] = float(m)
    return out


def parity_annulus_profile(n: int, k: int, parity: str, depth: int) -> np.ndarray:
    lv = np.arange(depth + 1)
    want = 0 if parity == "even" else 1
    return ((lv >= n) & (lv <= k * n) & (lv % 2 == want)).astype(np.float64)


# -------------------------------------------------------- closed-form norms

def capped_log_norm(m: int) -> float:
    """``m (log(1+m) - log m)``: the weighted seminorm is attained at level ``m``."""
    return m * (math.log1p(m) - math.log(m))


def squared_log_ramp_norm(m: int) -> float:
    return (m - 1) * math.log(m / (m - 1)) * math.log((m - 1) * m) / math.log(m)


def quadratic_ramp_norm(m: int) -> float:
    return (2 * m - 1) / m


def log_ramp_p_norm(m: int, p: float) -> float:
    return m / math.log(m) ** p * (math.log(m) ** (p + 1) - math.log(m - 1) ** (p + 1))


SQRT_WINDOW_BOUND = 6 * math.log(2)  # attained at m = 4, level 3


# ----------------------------------------------------------------- helpers

def _int_param(spec: WitnessSpec, name: str, lo: int, tree: Tree, anchor: bool = True) -> int:
    if name not in spec.params:
        raise WitnessError(f"{spec.family} needs parameter {name!r}")
    val = spec.params[name]
    if isinstance(val, bool) or not isinstance(val, (int, np.integer)):
        raise WitnessError(f"{spec.family}: {name} must be an integer, got {val!r}")
    val = int(val)
    if val < lo:
        raise WitnessError(f"{spec.family}: {name} must be >= {lo}, got {val}")
    if anchor and val > tree.depth:
        raise WitnessError(f"{spec.family}: anchor level {val} lies outside the truncation (depth {tree.depth})")
    return val


def _float_param(spec: WitnessSpec, name: str, lo: float, hi: float, hi_closed: bool) -> float:
    if name not in spec.params:
        raise WitnessError(f"{spec.family} needs parameter {name!r}")
    val = float(spec.params[name])
    ok = lo < val and (val <= hi if hi_closed else val < hi)
    if not ok:
        raise WitnessError(f"{spec.family}: {name}={val} outside its range")
    return val


def _anchor_vertex(spec: WitnessSpec, tree: Tree) -> int:
    if "vertex" in spec.params:
        v = spec.params["vertex"]
        if isinstance(v, bool) or not isinstance(v, (int, np.integer)) or not 0 <= v < tree.vertex_count:
            raise WitnessError(f"{spec.family}: vertex {v!r} not in the tree")
        return int(v)
    level = _int_param(spec, "level", 0, tree)
    return int(tree.levels[level][0])


def _spread(profile: np.ndarray, tree: Tree) -> Tabulated:
    return Tabulated(tree, profile[tree.level])


def _sign_values(psi: TreeFunction, tree: Tree, start: int) -> np.ndarray:
    vals = np.asarray(values_on(psi, tree), dtype=np.complex128)
    mag = np.abs(vals)
    out = np.zeros(tree.vertex_count, dtype=np.complex128)
    nz = (mag > 0) & (tree.level >= start)
    sign = np.where(tree.level % 2 == 0, 1.0, -1.0)
    out[nz] = sign[nz] * np.conj(vals[nz]) / mag[nz]
    return out


# ------------------------------------------------------------------ builder

def make_witness(spec: WitnessSpec, tree: Tree, psi: TreeFunction | None = None) -> Witness:
    fam = spec.family
    depth = tree.depth
    closed = limit = None
    if fam in NEEDS_SYMBOL and psi is None:
        raise WitnessError(f"{fam} needs the symbol psi")

    if fam == "point_mass":
        v = _anchor_vertex(spec, tree)
        n = int(tree.level[v])
        scale = 0.5 if v == 0 else 1.0 / (n + 1)
        vals = np.zeros(tree.vertex_count)
        vals[v] = scale
        f = Tabulated(tree, vals)
        closed = 1.0 if (v == 0 or tree.has_children()[v]) else None
    elif fam == "indicator":
        v = _anchor_vertex(spec, tree)
        vals = np.zeros(tree.vertex_count)
        vals[v] = 1.0
        f = Tabulated(tree, vals)
        closed = 2.0 if v == 0 else 1.0
    elif fam == "capped_log":
        m = _int_param(spec, "level", 1, tree)
        f = _spread(capped_log_profile(m, depth), tree)
        closed, limit = capped_log_norm(m), 1.0
    elif fam == "capped_harmonic":
        m = _int_param(spec, "level", 0, tree)
        f = _spread(capped_harmonic_profile(m, depth), tree)
        closed = 1.0 if m >= 1 else 0.0
    elif fam == "log_power":
        a = _float_param(spec, "alpha", 0.0, 1.0, True)
        f = _spread(log_power_profile(a, depth), tree)
        limit = 1.0 if a == 1.0 else None
    elif fam == "squared_log_ramp":
        m = _int_param(spec, "level", 2, tree)
        f = _spread(squared_log_ramp_profile(m, depth), tree)
        closed, limit = squared_log_ramp_norm(m), 1.0
    elif fam == "sqrt_window_ramp":
        m = _int_param(spec, "level", 4, tree)
        f = _spread(sqrt_window_ramp_profile(m, depth), tree)
    elif fam == "log_ramp_p":
        m = _int_param(spec, "level", 2, tree)
        p = _float_param(spec, "p", 0.0, 1.0, False)
        f = _spread(log_ramp_p_profile(m, p, depth), tree)
        closed = log_ramp_p_norm(m, p)
    elif fam == "radial_cap":
        m = _int_param(spec, "level", 1, tree)
        f = _spread(radial_cap_profile(m, depth), tree)
        closed = 1.0
    elif fam == "bent_cap":
        m = _int_param(spec, "level", 1, tree)
        f = _spread(bent_cap_profile(m, depth), tree)
        closed = 1.0
    elif fam == "quadratic_ramp":
        m = _int_param(spec, "level", 3, tree)
        f = _spread(quadratic_ramp_profile(m, depth), tree)
        closed, limit = quadratic_ramp_norm(m), 2.0
    elif fam == "half_window_ramp":
        m = _int_param(spec, "level", 2, tree)
        f = _spread(half_window_ramp_profile(m, depth), tree)
        closed = 2.0
    elif fam == "parity_annulus":
        n = _int_param(spec, "n", 1, tree)
        k = _int_param(spec, "k", 1, tree, anchor=False)
        parity = spec.params.get("parity", "even")
        if parity not in ("even", "odd"):
            raise WitnessError("parity_annulus: parity must be 'even' or 'odd'")
        prof = parity_annulus_profile(n, k, parity, depth)
        f = _spread(prof, tree)
        closed = 1.0 if prof.any() else 0.0
    elif fam == "sign_alternating":
        f = Tabulated(tree, _sign_values(psi, tree, 0))
    elif fam == "tail_sign":
        m = _int_param(spec, "level", 0, tree)
        f = Tabulated(tree, _sign_values(psi, tree, m))
    elif fam == "ball_indicator":
        r = _int_param(spec, "radius", 0, tree, anchor=False)
        f = _spread((np.arange(depth + 1) <= r).astype(np.float64), tree)
        closed = 1.0
    else:  # constant
        c = float(spec.params.get("value", 1.0))
        f = _spread(np.full(depth + 1, c), tree)
        closed = abs(c)
    space = spec.params.get("space", SOURCE_SPACE[fam])
    return Witness(spec, f, space, norm(space, f, tree, tail=False), closed, limit)


# ------------------------------------------------------------ K_n and J_n

def level_truncate(f: TreeFunction, tree: Tree, n: int) -> Tabulated:
    """``K_n f``: keep ``f`` up to level ``n``, then freeze it along each sector."""
    if not 0 <= n <= tree.depth:
        raise WitnessError(f"truncation level {n} outside 0..{tree.depth}")
    vals = np.asarray(values_on(f, tree), dtype=np.complex128)
    return Tabulated(tree, vals[ancestor_at(tree, n)])


def tail_part(f: TreeFunction, tree: Tree, n: int) -> Tabulated:
    """``J_n f = f - K_n f``; vanishes on levels ``<= n``."""
    vals = np.asarray(values_on(f, tree), dtype=np.complex128)
    return Tabulated(tree, vals - level_truncate(f, tree, n).values)

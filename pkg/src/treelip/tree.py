"""Finite truncations of rooted trees without terminal vertices.

Vertices are integers ``0..N-1`` with ``0`` the root. Builders store vertices
in breadth-first order, so every parent index is smaller than its children's
and each level of a homogeneous tree is a contiguous index range.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

DEFAULT_MAX_VERTICES = 10**8
MAX_VERTICES_ENV = "TREELIP_MAX_VERTICES"


class TreeError(ValueError):
    """Malformed tree description."""


class CapacityError(TreeError):
    """Requested truncation exceeds the configured vertex cap."""


def max_vertices(override: int | None = None) -> int:
    if override is not None:
        return int(override)
    env = os.environ.get(MAX_VERTICES_ENV)
    if env:
        try:
            return int(float(env))
        except ValueError as exc:
            raise TreeError(f"{MAX_VERTICES_ENV}={env!r} is not an integer") from exc
    return DEFAULT_MAX_VERTICES


@dataclass(frozen=True, eq=False)
class Tree:
    parent: np.ndarray  # parent[0] == -1
    level: np.ndarray
    child_ptr: np.ndarray  # CSR offsets into child_idx
    child_idx: np.ndarray
    levels: tuple[np.ndarray, ...] = field(repr=False)

    @property
    def depth(self) -> int:
        return len(self.levels) - 1

    @property
    def vertex_count(self) -> int:
        return int(self.parent.shape[0])

    def __len__(self) -> int:
        return self.vertex_count

    def children(self, v: int) -> np.ndarray:
        self._check(v)
        return self.child_idx[self.child_ptr[v]:self.child_ptr[v + 1]]

    def has_children(self) -> np.ndarray:
        """Boolean mask of vertices with at least one child in the truncation."""
        return np.diff(self.child_ptr) > 0

    def level_sizes(self) -> np.ndarray:
        return np.array([lv.size for lv in self.levels], dtype=np.int64)

    def is_unary(self) -> bool:
        return bool(np.all(self.level_sizes() == 1))

    def _check(self, v: int) -> None:
        if not 0 <= v < self.vertex_count:
            raise TreeError(f"vertex {v} not in tree with {self.vertex_count} vertices")


def _from_parents(parent: np.ndarray) -> Tree:
    n = parent.shape[0]
    level = np.zeros(n, dtype=np.int64)
    # parent < child, so one forward pass fixes every level
    for v in range(1, n):
        level[v] = level[parent[v]] + 1
    depth = int(level.max()) if n else 0
    order = np.argsort(level, kind="stable")
    bounds = np.searchsorted(level[order], np.arange(depth + 2))
    levels = tuple(order[bounds[k]:bounds[k + 1]] for k in range(depth + 1))
    return _assemble(parent, level, levels)


def _assemble(parent: np.ndarray, level: np.ndarray, levels) -> Tree:
    n = parent.shape[0]
    counts = np.bincount(parent[1:], minlength=n) if n > 1 else np.zeros(n, dtype=np.int64)
    child_ptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=child_ptr[1:])
    child_idx = np.argsort(parent[1:], kind="stable").astype(np.int64) + 1
    for arr in (parent, level, child_ptr, child_idx, *levels):
        arr.setflags(write=False)
    return Tree(parent, level, child_ptr, child_idx, tuple(levels))


def homogeneous_count(branching: int, root_degree: int, depth: int) -> int:
    total, width = 1, 1
    for k in range(1, depth + 1):
        width = root_degree if k == 1 else width * branching
        total += width
    return total


def build_homogeneous(branching: int, root_degree: int, depth: int,
                      max_vertices_override: int | None = None) -> Tree:
    """Truncation at ``depth`` of the tree whose root has ``root_degree``
    children and every other vertex ``branching`` children."""
    if branching < 1 or root_degree < 1:
        raise TreeError("branching and root_degree must be >= 1")
    if depth < 0:
        raise TreeError("depth must be >= 0")
    cap = max_vertices(max_vertices_override)
    # width grows geometrically; check before allocating anything
    total, width = 1, 1
    for k in range(1, depth + 1):
        width = root_degree if k == 1 else width * branching
        total += width
        if total > cap:
            raise CapacityError(
                f"homogeneous tree (branching={branching}, root_degree={root_degree}, "
                f"depth={depth}) exceeds the vertex cap {cap}")
    parent = np.empty(total, dtype=np.int64)
    level = np.empty(total, dtype=np.int64)
    parent[0], level[0] = -1, 0
    levels = [np.arange(0, 1, dtype=np.int64)]
    start, width = 1, 1
    for k in range(1, depth + 1):
        deg = root_degree if k == 1 else branching
        prev = levels[-1]
        new_width = prev.size * deg
        idx = np.arange(start, start + new_width, dtype=np.int64)
        parent[idx] = np.repeat(prev, deg)
        level[idx] = k
        levels.append(idx)
        start += new_width
    return _assemble(parent, level, levels)


def build_spine(depth: int) -> Tree:
    """Unary path ``o = 0 - 1 - ... - depth``."""
    return build_homogeneous(1, 1, depth)


def build_explicit(parents: Sequence[int], max_vertices_override: int | None = None) -> Tree:
    """Tree from a parent list: ``parents[i]`` is the parent of vertex ``i+1``.

    Parents must precede their children. Vertices below the maximal level may
    be leaves; such trees are accepted as finite data.
    """
    cap = max_vertices(max_vertices_override)
    n = len(parents) + 1
    if n > cap:
        raise CapacityError(f"{n} vertices exceed the vertex cap {cap}")
    parent = np.empty(n, dtype=np.int64)
    parent[0] = -1
    for i, p in enumerate(parents, start=1):
        if isinstance(p, bool) or not isinstance(p, (int, np.integer)):
            raise TreeError(f"parent of vertex {i} must be an integer, got {p!r}")
        if p < 0:
            raise TreeError(f"parent of vertex {i} is negative ({p})")
        if p >= i:
            raise TreeError(f"vertex {i} references parent {p} which does not precede it")
        parent[i] = p
    return _from_parents(parent)


def sector(tree: Tree, v: int) -> np.ndarray:
    """``v`` together with all its descendants in the truncation (sorted ids)."""
    tree._check(v)
    mask = np.zeros(tree.vertex_count, dtype=bool)
    mask[v] = True
    for k in range(int(tree.level[v]) + 1, tree.depth + 1):
        lv = tree.levels[k]
        mask[lv] = mask[tree.parent[lv]]
    return np.flatnonzero(mask)


def ancestor_at(tree: Tree, n: int) -> np.ndarray:
    """For each vertex, its ancestor of length ``n`` (itself if ``|v| <= n``)."""
    anc = np.arange(tree.vertex_count, dtype=np.int64)
    for k in range(n + 1, tree.depth + 1):
        lv = tree.levels[k]
        anc[lv] = anc[tree.parent[lv]]
    return anc

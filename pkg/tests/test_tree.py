import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from treelip.tree import (CapacityError, TreeError, ancestor_at, build_explicit, build_homogeneous, build_spine,
                          homogeneous_count, max_vertices, sector)

from conftest import parent_lists


def brute_sector(parents, v):
    """Descendants by walking every vertex up to the root."""
    out = []
    for u in range(len(parents) + 1):
        w = u
        while w > 0 and w != v:
            w = parents[w - 1]
        if w == v:
            out.append(u)
    return out


@pytest.mark.parametrize("args,count,depth", [((1, 1, 5), 6, 5), ((2, 3, 2), 10, 2), ((2, 2, 0), 1, 0)])
def test_homogeneous_examples(args, count, depth):
    t = build_homogeneous(*args)
    assert t.vertex_count == count == homogeneous_count(*args)
    assert t.depth == depth


def test_homogeneous_shape():
    t = build_homogeneous(2, 3, 4)
    assert len(t.children(0)) == 3
    for v in range(1, t.vertex_count):
        assert len(t.children(v)) == (2 if t.level[v] < 4 else 0)


@pytest.mark.parametrize("parents,depth", [([0, 0, 1], 2), ([], 0), ([0, 1, 2, 3], 4)])
def test_explicit_examples(parents, depth):
    t = build_explicit(parents)
    assert t.depth == depth
    assert t.vertex_count == len(parents) + 1


def test_explicit_children_of_small_example():
    t = build_explicit([0, 0, 1])
    assert sorted(t.children(0)) == [1, 2]
    assert list(t.children(1)) == [3]


@pytest.mark.parametrize("parents", [[1], [0, 5], [-1], [0, 2]])
def test_explicit_rejects_bad_parents(parents):
    with pytest.raises(TreeError):
        build_explicit(parents)


def test_sector_examples():
    t = build_homogeneous(2, 2, 3)
    assert sector(t, 0).size == t.vertex_count
    leaf = int(t.levels[3][0])
    assert list(sector(t, leaf)) == [leaf]
    assert sector(t, int(t.levels[1][0])).size == 7


def test_capacity_cap(monkeypatch):
    with pytest.raises(CapacityError):
        build_homogeneous(3, 3, 30)
    monkeypatch.setenv("TREELIP_MAX_VERTICES", "5")
    assert max_vertices() == 5
    with pytest.raises(CapacityError):
        build_homogeneous(2, 2, 2)
    assert build_spine(4).vertex_count == 5


def test_invalid_vertex_id():
    with pytest.raises(TreeError):
        sector(build_spine(2), 7)


@given(parent_lists())
def test_levels_are_parent_plus_one(parents):
    t = build_explicit(parents)
    v = np.arange(1, t.vertex_count)
    assert np.all(t.level[v] - t.level[t.parent[v]] == 1)
    assert t.level[0] == 0
    assert sum(lv.size for lv in t.levels) == t.vertex_count
    assert np.array_equal(np.sort(np.concatenate(t.levels)), np.arange(t.vertex_count))


@given(parent_lists())
def test_parent_children_consistent(parents):
    t = build_explicit(parents)
    for v in range(t.vertex_count):
        for c in t.children(v):
            assert t.parent[c] == v
    assert sum(len(t.children(v)) for v in range(t.vertex_count)) == t.vertex_count - 1


@given(parent_lists(max_vertices=30), st.data())
def test_sector_matches_brute_force_and_is_monotone(parents, data):
    t = build_explicit(parents)
    v = data.draw(st.integers(0, t.vertex_count - 1))
    s = sector(t, v)
    assert list(s) == brute_sector(parents, v)
    for u in s:
        if u != v:
            assert sector(t, int(u)).size < s.size


@given(parent_lists(max_vertices=30), st.data())
def test_ancestor_at_level(parents, data):
    t = build_explicit(parents)
    n = data.draw(st.integers(0, t.depth))
    anc = ancestor_at(t, n)
    for v in range(t.vertex_count):
        w = v
        while t.level[w] > n:
            w = t.parent[w]
        assert anc[v] == w

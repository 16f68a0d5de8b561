import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from treelip import diagnostics as dg
from treelip.corpus import radial_corpus, tabulated_corpus
from treelip.diagnostics import SpacePair
from treelip.functions import Tabulated, constant, indicator, norm, radial, values_on, weighted_norm
from treelip.operators import (SearchConfig, UnboundedOperatorError, apply, certify,
                               essential_norm_bracket, isometry_defect, norm_bracket, probe_defect)
from treelip.tree import build_homogeneous, build_spine
from treelip.witnesses import WitnessSpec, tail_part

T = build_homogeneous(2, 2, 8)
SPINE = build_spine(64)
FAST = SearchConfig(budget=300)


def test_apply_examples():
    f = Tabulated(T, np.arange(T.vertex_count, dtype=float))
    assert np.array_equal(values_on(apply(constant(1.0), f, T), T), f.values)
    chi = apply(indicator(T, 0), constant(1.0), T)
    assert np.array_equal(values_on(chi, T), indicator(T, 0).values)
    both = apply(radial("n"), radial("1/(n+1)", {0: 3.0}))
    assert list(values_on(both, build_spine(2))) == [0.0, 0.5, 2 / 3]


@given(st.integers(0, 2**31 - 1))
def test_apply_difference_matches_definition(seed):
    rng = np.random.default_rng(seed)
    psi = Tabulated(T, rng.normal(size=T.vertex_count) + 1j * rng.normal(size=T.vertex_count))
    f = Tabulated(T, rng.normal(size=T.vertex_count))
    prod = values_on(apply(psi, f, T), T)
    for v in rng.integers(1, T.vertex_count, 10):
        p = T.parent[v]
        assert abs(prod[v] - prod[p]) == abs(psi.values[v] * f.values[v] - psi.values[p] * f.values[p])


@pytest.mark.parametrize("c", [1.0, -2.5, 0.3])
def test_constant_symbol_weighted_to_lipschitz(c):
    b = norm_bracket(SpacePair("LwToL"), constant(c), T, FAST)
    assert b.lower.value == pytest.approx(abs(c), rel=1e-14)
    assert b.upper.value == pytest.approx(abs(c), rel=1e-14)


def test_root_indicator_bounded_into_weighted():
    b = norm_bracket(SpacePair("LinfToLw"), indicator(T, 0), T, FAST)
    assert (b.lower.value, b.upper.value) == (2.0, 2.0)


def test_log_reciprocal_into_bounded():
    spine = build_spine(2**12)
    b = norm_bracket(SpacePair("LwToLinf"), radial("1/(1+log(n))", {0: 0.5}), spine, FAST)
    assert b.upper.value == pytest.approx(1.0, rel=1e-14)
    assert 0.99 <= b.lower.value <= 1.0 + 1e-9
    # the log(1+|v|) probe alone falls well short of 1 at this depth, so the lower side comes from elsewhere
    assert b.notes["log1p_sup_truncation"] == pytest.approx(math.log(4097) / (1 + math.log(4096)), rel=1e-14)
    assert b.notes["log1p_sup_truncation"] < 0.9
    assert b.notes["gamma_gap_flag"] is False


def test_weighted_to_lipschitz_beats_tau_plus_sigma():
    psi = radial("0-1", {0: 1.0})
    b = norm_bracket(SpacePair("LwToL"), psi, T, FAST)
    assert b.lower.value == pytest.approx(3.0, rel=1e-14)
    assert b.notes["tau_plus_sigma"] == pytest.approx(2 * math.log(2) + 1, rel=1e-14)
    assert b.notes["tau_plus_sigma_exceeded"]
    assert b.lower.value <= b.upper.value


def exact_lipschitz_to_weighted(psi, depth):
    """Closed form for a real radial symbol on a path:
    max(||psi||_w, sup_n n[(n-1) Dpsi(n) + |psi(n)|])."""
    p = [float(x) for x in values_on(psi, build_spine(depth))]
    w = abs(p[0]) + max(n * abs(p[n] - p[n - 1]) for n in range(1, depth + 1))
    ramp = max(n * ((n - 1) * abs(p[n] - p[n - 1]) + abs(p[n])) for n in range(1, depth + 1))
    return max(w, ramp)


@pytest.mark.parametrize("text,over", [("1/(n+1)^2", {}), ("1/(n+1)", {1: 0.8}), ("2/(n+1)^1.5", {0: -1.0}),
                                       ("0", {1: 1.0}), ("(1+0.5*(n - 2*floor(n/2)))/(n+1)^2", {})])
def test_lipschitz_to_weighted_matches_exact(text, over):
    psi = radial(text, over)
    b = norm_bracket(SpacePair("LToLw"), psi, SPINE, FAST)
    assert b.lower.value == pytest.approx(exact_lipschitz_to_weighted(psi, 64), rel=1e-9)


def test_unbounded_symbol_gives_one_sided_bracket():
    b = norm_bracket(SpacePair("LToLw"), constant(1.0), T, FAST)
    assert b.upper.value == math.inf and b.upper.status == "diverged"
    assert math.isfinite(b.lower.value) and b.lower.value > 0


def test_search_config_validation():
    with pytest.raises(ValueError):
        SearchConfig(budget=0)
    with pytest.raises(ValueError):
        SearchConfig(strategy="annealing")


@pytest.mark.parametrize("strategy", ["witness_only", "coordinate_ascent", "random_ball"])
def test_search_is_deterministic(strategy):
    psi = tabulated_corpus("LwToL", T, 1, seed=9)[0].function
    cfg = SearchConfig(budget=200, seed=4, strategy=strategy)
    a = norm_bracket(SpacePair("LwToL"), psi, T, cfg).to_dict()
    b = norm_bracket(SpacePair("LwToL"), psi, T, cfg).to_dict()
    assert a == b


# ------------------------------------------------------------------ essential norms

def test_essential_examples():
    inv_log = radial("1/log(n)", {0: 0.0, 1: 0.0})
    e = essential_norm_bracket(SpacePair("LwToLinf"), inv_log, T)
    assert e.lower.value == pytest.approx(1.0, abs=1e-9) and e.upper.value == pytest.approx(1.0, abs=1e-9)
    inv_level = radial("1/n", {0: 1.0})
    e = essential_norm_bracket(SpacePair("LinfToLw"), inv_level, T)
    assert e.lower.value == pytest.approx(2.0, abs=1e-9) == e.upper.value
    assert norm_bracket(SpacePair("LinfToLw"), inv_level, T, FAST).upper.value == pytest.approx(4.0)
    e = essential_norm_bracket(SpacePair("LwToL"), radial("1/((1+n)*(1+log(1+n)))"), T)
    assert (e.lower.value, e.upper.value) == (0.0, 0.0)


def test_essential_rejects_unbounded():
    with pytest.raises(UnboundedOperatorError):
        essential_norm_bracket(SpacePair("LToLw"), constant(1.0), T)


# ------------------------------------------------------------------ isometry

def test_isometry_examples():
    one = constant(1.0)
    d = probe_defect(SpacePair("LwToL"), one, T, WitnessSpec("point_mass", {"level": 3}))
    assert d.value == pytest.approx(0.75, rel=1e-15)
    d = probe_defect(SpacePair("LToLw"), one, T, WitnessSpec("indicator", {"level": 2}))
    assert d.value == pytest.approx(2.0, rel=1e-15)
    d = isometry_defect(SpacePair("LinfToLw"), constant(0.0), T)
    assert d.value == 1.0 and d.probe.startswith("constant")


@given(st.sampled_from(dg.PAIRS), st.floats(0, 2 * math.pi))
def test_unimodular_constants_are_not_isometries(pair, phase):
    psi = Tabulated(T, np.full(T.vertex_count, np.exp(1j * phase)))
    assert isometry_defect(SpacePair(pair), psi, T).value > 0.1


# ------------------------------------------------------------------ properties

CORPUS = {pair: [s.function for s in radial_corpus(pair, 10, seed=5)] + [s.function for s in
                                                                           tabulated_corpus(pair, T, 4, seed=5)]
          for pair in dg.PAIRS}


@settings(max_examples=30)
@given(st.sampled_from(dg.PAIRS), st.data())
def test_bracket_valid_and_lower_recomputes(pair, data):
    psi = data.draw(st.sampled_from(CORPUS[pair]))
    b = norm_bracket(SpacePair(pair), psi, T, FAST)
    assert b.lower.value <= b.upper.value + 1e-9
    sp = SpacePair(pair)
    f = b.witness
    ratio = norm(sp.target, apply(psi, f, T), T, tail=False) / norm(sp.source, f, T, tail=False)
    assert b.lower.value == pytest.approx(ratio, rel=1e-12)
    assert certify(sp, psi, f, T) == pytest.approx(ratio, rel=1e-12)


@given(st.sampled_from(dg.PAIRS), st.data())
def test_essential_below_norm(pair, data):
    psi = data.draw(st.sampled_from(CORPUS[pair][:10]))
    try:
        e = essential_norm_bracket(SpacePair(pair), psi, T)
    except UnboundedOperatorError:
        return
    b = norm_bracket(SpacePair(pair), psi, T, SearchConfig(strategy="witness_only"))
    assert e.lower.value <= e.upper.value + 1e-9
    if math.isfinite(b.upper.value):
        assert e.upper.value <= b.upper.value + 1e-9


@given(st.integers(0, 2**31 - 1), st.integers(1, 7), st.sampled_from(CORPUS["LwToL"]))
def test_tail_part_chain_bound(seed, n, psi):
    """||psi J_n f||_L <= ||f||_w sup_{|v|>n} [log|v| Dpsi(v) + |psi(v)|/|v|]."""
    rng = np.random.default_rng(seed)
    f = Tabulated(T, rng.normal(size=T.vertex_count) + 1j * rng.normal(size=T.vertex_count))
    lhs = norm("L", apply(psi, tail_part(f, T, n), T), T, tail=False)
    pv = values_on(psi, T)
    v = np.arange(1, T.vertex_count)
    lvl = T.level[v].astype(float)
    weight = np.log(lvl) * np.abs(pv[v] - pv[T.parent[v]]) + np.abs(pv[v]) / lvl
    rhs = weighted_norm(f, T) * float(weight[lvl > n].max())
    assert lhs <= rhs * (1 + 1e-12)

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from treelip.functions import Tabulated, differences, norm, radial, values_on, weighted_norm
from treelip.operators import apply
from treelip.tree import build_homogeneous, build_spine
from treelip.witnesses import (FAMILIES, SQRT_WINDOW_BOUND, WitnessError, WitnessSpec, capped_log_norm,
                               level_truncate, log_ramp_p_norm, make_witness, tail_part)

T = build_homogeneous(2, 2, 7)
SPINE = build_spine(200)

# (|v_n|, s_n, (log 2)^2 / log|v_n|) from 40-digit mpmath evaluation of the closed form
SQUARED_LOG_RAMP = [
    (4, 1.5469941628040720819, 0.34657359027997265471),
    (10, 1.8530999866347457655, 0.2086580927584611271),
    (100, 1.9877950448619102111, 0.10432904637923056355),
]


def W(family, tree=T, psi=None, **params):
    return make_witness(WitnessSpec(family, params), tree, psi)


def test_point_mass_example():
    w = W("point_mass", level=3)
    nz = np.flatnonzero(w.function.values)
    assert len(nz) == 1 and w.function.values[nz[0]] == 0.25
    assert w.norm == 1.0 and w.space == "Lw"
    assert W("point_mass", level=0).norm == 1.0


def test_indicator_lipschitz_norm():
    assert W("indicator", level=4).norm == 1.0


@pytest.mark.parametrize("m,s_n,lower", SQUARED_LOG_RAMP)
def test_squared_log_ramp_closed_form(m, s_n, lower):
    w = W("squared_log_ramp", SPINE, level=m)
    assert w.closed_form == pytest.approx(s_n, abs=1e-12)
    assert w.norm == pytest.approx(s_n, abs=1e-12)
    assert lower <= w.norm < 2


def test_quadratic_ramp_example():
    w = W("quadratic_ramp", SPINE, level=5)
    assert w.norm == pytest.approx(1.8, abs=1e-12) and w.closed_form == 1.8


@pytest.mark.parametrize("m", [1, 2, 5, 30, 150])
def test_capped_log_norm_exact(m):
    w = W("capped_log", SPINE, level=m)
    assert w.norm == pytest.approx(m * math.log((m + 1) / m), rel=1e-13)
    assert w.norm == pytest.approx(capped_log_norm(m), rel=1e-13)
    assert w.norm < 1


@pytest.mark.parametrize("alpha", [0.1, 0.5, 0.9, 1.0])
def test_log_power(alpha):
    w = W("log_power", SPINE, alpha=alpha)
    assert w.norm <= 1 + 1e-15
    d_alpha = differences(w.function, SPINE)
    d_one = differences(radial("log(1+n)"), SPINE)
    # the comparison Df_alpha <= Df_1 holds from level 2 on; level 1 is the exception
    assert np.all(d_alpha[2:] <= d_one[2:] + 1e-15)
    if alpha < 1:
        assert d_alpha[1] > d_one[1]


def test_sqrt_window_ramp_bound():
    worst = []
    for m in range(4, 120):
        w = W("sqrt_window_ramp", SPINE, level=m)
        worst.append(w.norm)
    assert max(worst) == pytest.approx(SQRT_WINDOW_BOUND, rel=1e-13)
    assert int(np.argmax(worst)) + 4 == 4
    assert max(worst) > 4  # the weight bound 4 is too small by 6 log 2 - 4


@pytest.mark.parametrize("p", [0.05, 0.3, 0.7, 0.95])
def test_log_ramp_p_tends_to_p_plus_one_from_above(p):
    norms = [W("log_ramp_p", SPINE, level=m, p=p).norm for m in (3, 10, 50, 200)]
    assert all(x > p + 1 for x in norms)
    assert norms[-1] - (p + 1) < max(norms) - (p + 1)
    assert W("log_ramp_p", SPINE, level=200, p=p).closed_form == pytest.approx(log_ramp_p_norm(200, p))


@pytest.mark.parametrize("family,params,value", [
    ("radial_cap", {"level": 4}, 1.0), ("bent_cap", {"level": 4}, 1.0), ("half_window_ramp", {"level": 6}, 2.0),
    ("parity_annulus", {"n": 2, "k": 2}, 1.0), ("ball_indicator", {"radius": 2}, 1.0),
    ("constant", {"value": -3.0}, 3.0), ("capped_harmonic", {"level": 5}, 1.0),
])
def test_unit_norm_families(family, params, value):
    w = W(family, **params)
    assert w.norm == pytest.approx(value, rel=1e-14)


def test_sign_alternating_attains_pair_sum():
    rng = np.random.default_rng(1)
    psi = Tabulated(T, rng.normal(size=T.vertex_count) + 1j * rng.normal(size=T.vertex_count))
    w = W("sign_alternating", psi=psi)
    prod = values_on(apply(psi, w.function, T), T)
    v = np.arange(1, T.vertex_count)
    pv = np.abs(psi.values)
    assert np.allclose(np.abs(prod[v] - prod[T.parent[v]]), pv[v] + pv[T.parent[v]], rtol=1e-14, atol=0)
    assert w.norm == pytest.approx(1.0, rel=1e-15)


def test_sign_alternating_zero_where_symbol_vanishes():
    psi = radial("n - 2*floor(n/2)")
    w = W("sign_alternating", psi=psi)
    assert np.all(w.function.values[T.level % 2 == 0] == 0)


def test_tail_sign_starts_at_anchor():
    w = W("tail_sign", psi=radial("1/(n+1)"), level=3)
    assert np.all(w.function.values[T.level < 3] == 0)
    assert np.all(np.abs(w.function.values[T.level >= 3]) == 1)


@pytest.mark.parametrize("family,params", [
    ("squared_log_ramp", {"level": 1}), ("sqrt_window_ramp", {"level": 3}), ("point_mass", {"level": 99}),
    ("log_power", {"alpha": 1.5}), ("log_ramp_p", {"level": 3, "p": 1.0}), ("sign_alternating", {}),
])
def test_domain_errors(family, params):
    with pytest.raises(WitnessError):
        W(family, **params)


def test_unknown_family():
    with pytest.raises(WitnessError):
        WitnessSpec("nope")


def test_level_truncate_examples():
    f = radial("log(1+n)")
    assert np.array_equal(level_truncate(f, T, T.depth).values, values_on(f, T))
    assert np.all(level_truncate(f, T, 0).values == 0)
    k3 = level_truncate(f, T, 3).values
    cap = W("capped_log", level=3).function.values
    assert np.allclose(k3, cap, rtol=1e-15, atol=0)
    assert np.allclose(k3[T.level >= 3], math.log(4), rtol=1e-15)


def test_tail_part_examples():
    f = Tabulated(T, np.random.default_rng(2).normal(size=T.vertex_count))
    assert tail_part(f, T, 2).values[0] == 0
    assert np.all(tail_part(f, T, T.depth).values == 0)


# ------------------------------------------------------------------ properties

@given(st.integers(0, 2**31 - 1), st.integers(0, 7))
def test_tail_part_weighted_differences(seed, n):
    rng = np.random.default_rng(seed)
    f = Tabulated(T, rng.normal(size=T.vertex_count) + 1j * rng.normal(size=T.vertex_count))
    j = tail_part(f, T, n)
    assert np.all(j.values[T.level <= n] == 0)
    assert np.max(T.level * differences(j, T)) <= weighted_norm(f, T) * (1 + 1e-12)


@given(st.sampled_from([f for f in FAMILIES if f not in ("sign_alternating", "tail_sign")]), st.integers(1, 7))
def test_reported_norm_recomputes(family, level):
    params = {"point_mass": {"level": level}, "indicator": {"level": level}, "log_power": {"alpha": 0.5},
              "squared_log_ramp": {"level": max(level, 2)}, "sqrt_window_ramp": {"level": max(level, 4)},
              "log_ramp_p": {"level": max(level, 2), "p": 0.5}, "quadratic_ramp": {"level": max(level, 3)},
              "half_window_ramp": {"level": max(level, 2)}, "parity_annulus": {"n": level, "k": 2},
              "ball_indicator": {"radius": level}, "constant": {"value": 2.0}}.get(family, {"level": level})
    w = W(family, **params)
    assert w.norm == pytest.approx(norm(w.space, Tabulated(T, np.array(w.function.values)), T), rel=1e-12)

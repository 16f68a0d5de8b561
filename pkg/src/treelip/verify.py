"""Numerical invariant suites for every module.

Each check compares a left side with a right side over many samples and
reports the largest excess ``lhs - rhs`` (relative where that is the
natural scale). A check passes when no excess goes past its tolerance.
Commonly quoted constants that are known to be too small are run as
advisories: they are reported but never fail the suite.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import diagnostics as dg
from . import operators as op
from . import tail as tl
from .diagnostics import PAIRS, SpacePair
from .functions import (Radial, Tabulated, TreeFunction, norm, sup_estimate, values_on)
from .tree import Tree, build_homogeneous, sector
from .witnesses import (SQRT_WINDOW_BOUND, WitnessSpec, capped_log_norm, log_power_profile,
                        make_witness, sqrt_window_ramp_profile, tail_part)

LEMMA_RTOL = 1e-12
SLACK = 1e-9


@dataclass(frozen=True)
class InvariantResult:
    name: str
    module: str
    passed: bool
    max_violation: float
    checks: int
    detail: str = ""

    def to_dict(self) -> dict:
        return {"name": self.name, "module": self.module, "passed": self.passed,
                "max_violation": self.max_violation, "checks": self.checks, "detail": self.detail}


@dataclass(frozen=True)
class VerifyConfig:
    seed: int = 0
    random_functions: int = 400
    lemma_branching: int = 3
    lemma_depth: int = 6
    rtol: float = LEMMA_RTOL
    slack: float = SLACK
    search: op.SearchConfig = field(default_factory=lambda: op.SearchConfig(budget=200, strategy="coordinate_ascent"))


@dataclass(frozen=True)
class VerifyReport:
    results: tuple[InvariantResult, ...]
    advisories: tuple[InvariantResult, ...]
    seconds: float

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_dict(self) -> dict:
        # timing is left out so reports are byte-reproducible
        return {"passed": self.passed,
                "invariants": [r.to_dict() for r in self.results],
                "advisories": [r.to_dict() for r in self.advisories]}


def _result(name, module, excess, tol, detail="") -> InvariantResult:
    excess = np.atleast_1d(np.asarray(excess, dtype=np.float64))
    worst = float(np.max(excess)) if excess.size else 0.0
    if np.isnan(worst):
        return InvariantResult(name, module, False, math.nan, int(excess.size), detail or "nan encountered")
    return InvariantResult(name, module, worst <= tol, max(worst, 0.0), int(excess.size), detail)


# ------------------------------------------------------------- random functions

def random_functions(tree: Tree, count: int, rng: np.random.Generator) -> np.ndarray:
    """Batch of complex functions, one per row, mixing shapes that stress the growth lemmas.

    Rows cycle through: iid values, random walks with level-scaled steps
    (near-extremal for the weighted bounds), unit-step walks (extremal for
    the Lipschitz bound), and sparse spikes.
    """
    nv = tree.vertex_count
    lv = tree.level.astype(np.float64)
    out = np.empty((count, nv), dtype=np.complex128)
    order = np.concatenate(tree.levels)
    par = tree.parent[order]
    for i in range(count):
        kind = i % 4
        if kind == 0:
            out[i] = rng.standard_normal(nv) + 1j * rng.standard_normal(nv)
            continue
        if kind == 1:
            steps = rng.uniform(0.5, 1.0, nv) / np.maximum(lv, 1.0)
        elif kind == 2:
            steps = np.ones(nv)
        else:
            steps = np.where(rng.random(nv) < 0.05, rng.standard_normal(nv) * 10, 0.0)
        phase = np.exp(1j * rng.uniform(0, 2 * np.pi, nv)) if i % 8 < 4 else np.sign(rng.standard_normal(nv))
        inc = steps * phase
        f = np.zeros(nv, dtype=np.complex128)
        f[0] = rng.standard_normal() + 1j * rng.standard_normal() if kind != 2 else 0.0
        for v, p in zip(order[1:], par[1:]):
            f[v] = f[p] + inc[v]
        out[i] = f
    return out


def batch_norms(batch: np.ndarray, tree: Tree) -> dict[str, np.ndarray]:
    """Truncation norms of every row (vectorized; cross-checked against ``functions.norm``)."""
    par = tree.parent[1:]
    d = np.abs(batch[:, 1:] - batch[:, par])
    w = tree.level[1:].astype(np.float64)
    root = np.abs(batch[:, 0])
    lip = d.max(axis=1) if d.shape[1] else np.zeros(batch.shape[0])
    sw = (w * d).max(axis=1) if d.shape[1] else np.zeros(batch.shape[0])
    return {"root": root, "lip_sup": lip, "L": root + lip, "seminorm": sw, "Lw": root + sw,
            "Linf": np.abs(batch).max(axis=1)}


# ---------------------------------------------------------------- tree_core

def tree_suite(tree: Tree) -> list[InvariantResult]:
    par = tree.parent[1:]
    jumps = np.abs(tree.level[1:] - tree.level[par] - 1)
    sizes = np.ones(tree.vertex_count, dtype=np.int64)
    for lvl in reversed(tree.levels[1:]):
        np.add.at(sizes, tree.parent[lvl], sizes[lvl])
    # |S_u| < |S_v| for u a proper descendant of v: enough to check child against parent
    mono = sizes[1:] - sizes[par] + 1
    spot = [int(v) for v in np.linspace(0, tree.vertex_count - 1, min(tree.vertex_count, 5)).astype(int)]
    spot_err = [abs(sector(tree, v).size - sizes[v]) for v in spot]
    return [
        _result("level_step_is_one", "tree_core", jumps, 0),
        _result("level_sizes_sum", "tree_core", abs(sum(l.size for l in tree.levels) - tree.vertex_count), 0),
        _result("sector_sizes_monotone", "tree_core", mono, 0),
        _result("sector_matches_subtree_count", "tree_core", spot_err, 0),
    ]


# ------------------------------------------------------------ tree_function

def lemma_suite(tree: Tree, batch: np.ndarray, rtol: float = LEMMA_RTOL) -> tuple[list[InvariantResult],
                                                                                  list[InvariantResult]]:
    """Growth lemmas and the sup-norm comparison on a batch of functions.

    The comparison ``||f||_L <= 2||f||_inf`` fails whenever ``f(o)`` and a
    neighbour have opposite signs (``f = 1`` at the root, ``-1`` elsewhere
    gives 3); the sharp constant is 3, which is the invariant, and the
    factor 2 is reported as an advisory.
    """
    nrm = batch_norms(batch, tree)
    lv = tree.level.astype(np.float64)
    absf = np.abs(batch)
    star = tree.level >= 1

    def rel(lhs, rhs):
        scale = np.maximum(np.abs(rhs), 1.0)
        return (lhs - rhs) / scale

    old = rel(absf, nrm["root"][:, None] + lv[None, :] * nrm["lip_sup"][:, None])
    new = rel(absf[:, star], (1 + np.log(lv[star]))[None, :] * nrm["Lw"][:, None])
    variant = rel(absf, nrm["root"][:, None] + 2 * np.log1p(lv)[None, :] * nrm["seminorm"][:, None])
    return [
        _result("growth_bound_lipschitz", "tree_function", old, rtol),
        _result("growth_bound_weighted", "tree_function", new, rtol),
        _result("growth_bound_seminorm", "tree_function", variant, rtol),
        _result("lipschitz_le_three_sup", "tree_function", rel(nrm["L"], 3 * nrm["Linf"]), rtol),
    ], [
        _result("lipschitz_le_twice_sup", "tree_function", rel(nrm["L"], 2 * nrm["Linf"]), rtol,
                "claimed constant 2; sharp constant is 3"),
    ]


def norm_algebra_suite(tree: Tree, batch: np.ndarray, rng: np.random.Generator,
                       rtol: float = LEMMA_RTOL) -> list[InvariantResult]:
    half = batch.shape[0] // 2
    f, g = batch[:half], batch[half:2 * half]
    scal = rng.standard_normal(half) + 1j * rng.standard_normal(half)
    nf, ng = batch_norms(f, tree), batch_norms(g, tree)
    nsum, nscaled = batch_norms(f + g, tree), batch_norms(scal[:, None] * f, tree)
    homog, tri = [], []
    for space in ("L", "Lw", "Linf"):
        homog.append(np.abs(nscaled[space] - np.abs(scal) * nf[space]) / np.maximum(np.abs(scal) * nf[space], 1e-300))
        tri.append((nsum[space] - nf[space] - ng[space]) / np.maximum(nf[space] + ng[space], 1e-300))
    # batch norms agree with the library's norm routine
    lib = []
    for row in batch[: min(20, batch.shape[0])]:
        t = Tabulated(tree, row)
        b = batch_norms(row[None, :], tree)
        for space in ("L", "Lw", "Linf"):
            lib.append(abs(norm(space, t, tree, tail=False) - b[space][0]) / max(b[space][0], 1e-300))
    return [
        _result("norms_absolutely_homogeneous", "tree_function", np.concatenate(homog), 4 * rtol),
        _result("norms_triangle_inequality", "tree_function", np.concatenate(tri), 4 * rtol),
        _result("batch_norms_match_library", "tree_function", lib, 1e-14),
    ]


# ------------------------------------------------------- brute-force oracle

def _python_values(psi: TreeFunction, tree: Tree) -> list[complex]:
    """Per-vertex values through scalar evaluation, one vertex at a time."""
    if isinstance(psi, Radial):
        return [complex(psi.level_values(np.array([int(tree.level[v])]))[0]) for v in range(tree.vertex_count)]
    return [complex(x) for x in psi.values]


_WEIGHTS = {
    "tau": ("diff", lambda n: math.log1p(n), 1),
    "tau_hat": ("diff", lambda n: 1 + math.log(max(n, 1)), 1),
    "sigma": ("abs", lambda n: 1.0 / (n + 1), 0),
    "theta": ("diff", lambda n: float(n * n), 1),
    "omega": ("abs", lambda n: float(n + 1), 0),
    "gamma_star": ("abs", lambda n: 1 + math.log(max(n, 1)), 1),
    "eta_star": ("pair", lambda n: float(n), 1),
    "lip": ("diff", lambda n: 1.0, 1),
    "wlip": ("diff", lambda n: float(n), 1),
    "sup_abs": ("abs", lambda n: 1.0, 0),
    "A3": ("abs", lambda n: float(n), 1),
    "A4": ("abs", lambda n: math.log(max(n, 1)), 2),
    "B2": ("diff", lambda n: math.log(max(n, 1)), 2),
}


def brute_force_sup(values: list[complex], tree: Tree, name: str) -> float:
    """``sup`` of a weighted vertex quantity by a plain loop over vertices."""
    base, weight, first = _WEIGHTS[name]
    parent = tree.parent.tolist()
    level = tree.level.tolist()
    best = -math.inf
    for v in range(tree.vertex_count):
        n = level[v]
        if n < first:
            continue
        if base == "abs":
            b = abs(values[v])
        elif base == "diff":
            b = abs(values[v] - values[parent[v]])
        else:
            b = abs(values[v]) + abs(values[parent[v]])
        # same association as the vectorized combine: weight * base (or base / (n+1))
        val = b / (n + 1) if name == "sigma" else weight(n) * b
        best = max(best, val)
    return best


def oracle_suite(psi: TreeFunction, tree: Tree, rtol: float = 1e-14) -> list[InvariantResult]:
    """Fast per-level path against a per-vertex Python loop."""
    vals = _python_values(psi, tree)
    errs, names = [], []
    for name in _WEIGHTS:
        if tree.depth < _WEIGHTS[name][2]:
            continue
        fast = sup_estimate(psi, tree, name).truncation
        slow = brute_force_sup(vals, tree, name)
        errs.append(abs(fast - slow) / max(abs(slow), 1e-300))
        names.append(name)
    root = abs(vals[0])
    for space, base in (("L", "lip"), ("Lw", "wlip")):
        if tree.depth >= 1:
            slow = root + brute_force_sup(vals, tree, base)
            fast = norm(space, psi, tree, tail=False)
            errs.append(abs(fast - slow) / max(slow, 1e-300))
    slow = brute_force_sup(vals, tree, "sup_abs")
    errs.append(abs(norm("Linf", psi, tree, tail=False) - slow) / max(slow, 1e-300))
    return [_result("radial_fast_path_matches_brute_force", "tree_function", errs, rtol,
                    f"{len(errs)} quantities")]


# --------------------------------------------------------- symbol_diagnostics

_TAIL_VS_SUP = {"A2": "sigma", "B2": "tau", "A3": "omega", "B3": "theta", "A4": "gamma", "B5": "eta"}


def diagnostics_suite(psi: TreeFunction, tree: Tree) -> list[InvariantResult]:
    mono, below = [], []
    for kind, sup_name in _TAIL_VS_SUP.items():
        est = dg.tail_quantity(kind, psi, tree)
        vals = np.array([v for _, v in est.ladder], dtype=np.float64)
        finite = vals[np.isfinite(vals)]
        if finite.size > 1:
            mono.append(float(np.max(np.diff(finite))))
        glob = getattr(dg, sup_name)(psi, tree)
        if est.status != tl.DIVERGED and np.isfinite(glob.value):
            below.append(est.value - glob.value - 1e-12 * max(glob.value, 1.0))
    out = [_result("tail_ladder_nonincreasing", "symbol_diagnostics", mono, 0),
           _result("tail_below_global_sup", "symbol_diagnostics", below, 0)]

    reports = {p: dg.classify(SpacePair(p), psi, tree) for p in PAIRS}
    implication = [1.0 if r.compact.value == dg.YES and r.bounded.value != dg.YES else 0.0
                   for r in reports.values()]
    out.append(_result("compact_implies_bounded", "symbol_diagnostics", implication, 0))
    if isinstance(psi, Radial):
        a3 = dg.tail_quantity("A3", psi, tree)
        if a3.status != tl.INCONCLUSIVE:
            little = dg.classify(SpacePair("LinfToLw", little=True), psi, tree).bounded.value
            compact = reports["LinfToLw"].compact.value
            zero = dg.YES if a3.is_zero() else dg.NO
            out.append(_result("bounded_little_equals_compact", "symbol_diagnostics",
                               float(not (little == compact == zero)), 0,
                               f"little={little} compact={compact} A3_zero={zero}"))
        mat = Tabulated(tree, np.asarray(values_on(psi, tree)))
        agree = []
        for name in ("tau", "sigma", "theta", "omega", "gamma", "eta"):
            r = getattr(dg, name)(psi, tree).truncation
            t = getattr(dg, name)(mat, tree).truncation
            if r is not None and t is not None:
                agree.append(abs(r - t))
        out.append(_result("radial_matches_tabulated_truncation", "symbol_diagnostics", agree, 0))
    return out


# ------------------------------------------------------------------ witnesses

def witness_suite(tree: Tree, psi: TreeFunction, rtol: float = 1e-12) -> tuple[list[InvariantResult],
                                                                               list[InvariantResult]]:
    depth = tree.depth
    out, advisory = [], []
    if depth >= 2:
        err = []
        for m in range(1, depth):  # the anchor needs a child for the closed form
            w = make_witness(WitnessSpec("capped_log", {"level": m}), tree)
            err.append(abs(w.norm - capped_log_norm(m)) / capped_log_norm(m))
        out.append(_result("capped_log_closed_form", "witnesses", err, rtol))
    alphas = (0.1, 0.3, 0.5, 0.7, 0.9)
    base = np.abs(np.diff(log_power_profile(1.0, depth)))
    diffs = [np.abs(np.diff(log_power_profile(a, depth))) for a in alphas]
    # (log 2)**a > log 2, so the comparison starts at level 2
    out.append(_result("log_power_difference_below_log_from_level_2", "witnesses",
                       [np.max(d[1:] - base[1:]) for d in diffs] if depth >= 2 else [], 0))
    out.append(_result("log_power_weighted_norm_le_1", "witnesses",
                       [np.max(np.arange(1, depth + 1) * d) - 1 for d in diffs] if depth else [], 1e-12))
    advisory.append(_result("log_power_difference_below_log", "witnesses",
                            [np.max(d - base) for d in diffs] if depth else [], 0,
                            "claimed for every vertex; fails at level 1"))
    sqrt_excess, sqrt_claim = [], []
    for m in range(4, max(5, min(depth, 512) + 1)):
        prof = sqrt_window_ramp_profile(m, max(depth, m + 1))
        wd = np.arange(1, prof.size) * np.abs(np.diff(prof))
        sqrt_excess.append(float(wd.max()) - SQRT_WINDOW_BOUND)
        sqrt_claim.append(float(wd.max()) - 4.0)
    out.append(_result("sqrt_window_ramp_bound", "witnesses", sqrt_excess, 1e-12,
                       "bound 6 log 2, attained at anchor 4"))
    advisory.append(_result("sqrt_window_ramp_below_4", "witnesses", sqrt_claim, 0,
                            "the claimed bound 4 fails at level m-1 for every m >= 4"))
    if depth >= 2:
        ramp, exact = [], []
        for m in range(2, depth + 1):
            for p in (0.1, 0.5, 0.9):
                w = make_witness(WitnessSpec("log_ramp_p", {"level": m, "p": p}), tree)
                ramp.append(w.norm - (p + 1))
                # sup over 2 <= |v| <= m of |v|[(log|v|)^(p+1) - (log(|v|-1))^(p+1)] / (log m)^p
                terms = [k * (math.log(k) ** (p + 1) - (math.log(k - 1) ** (p + 1) if k > 2 else 0.0))
                         / math.log(m) ** p for k in range(2, m + 1)]
                if m < depth:  # level m+1 exists and contributes 0
                    exact.append(abs(w.norm - max(terms)) / max(terms))
        out.append(_result("log_ramp_p_norm_matches_level_sup", "witnesses", exact, 1e-12))
        advisory.append(_result("log_ramp_p_below_p_plus_1", "witnesses", ramp, 1e-12,
                                "the norm tends to p+1 from above; the anchor term exceeds p+1 for every m"))
    pv = np.asarray(values_on(psi, tree), dtype=np.complex128)
    f = make_witness(WitnessSpec("sign_alternating"), tree, psi).function.values
    par = tree.parent[1:]
    prod = pv * f
    lhs = np.abs(prod[1:] - prod[par])
    rhs = np.abs(pv[1:]) + np.abs(pv[par])
    out.append(_result("sign_alternating_attains_pair_sum", "witnesses",
                       np.abs(lhs - rhs) / np.maximum(rhs, 1.0), 1e-12))
    recompute = []
    specs = [WitnessSpec("point_mass", {"vertex": v}) for v in range(min(tree.vertex_count, 50))]
    specs += [WitnessSpec("indicator", {"vertex": v}) for v in range(1, min(tree.vertex_count, 50))]
    if depth >= 1:
        specs += [WitnessSpec("radial_cap", {"level": m}) for m in range(1, depth + 1)]
        specs += [WitnessSpec("half_window_ramp", {"level": m}) for m in range(2, depth + 1)]
    if depth >= 3:
        specs += [WitnessSpec("quadratic_ramp", {"level": m}) for m in range(3, depth)]
    for spec in specs:
        w = make_witness(spec, tree)
        fresh = norm(w.space, Tabulated(tree, np.array(w.function.values)), tree, tail=False)
        recompute.append(abs(fresh - w.norm) / max(fresh, 1e-300))
        anchored = spec.family != "point_mass" or tree.has_children()[spec.params["vertex"]]
        if w.closed_form is not None and anchored and spec.family != "quadratic_ramp":
            recompute.append(abs(w.closed_form - w.norm) / max(w.closed_form, 1e-300))
    out.append(_result("witness_norms_recompute", "witnesses", recompute, rtol))
    return out, advisory


# ---------------------------------------------------------- operator_analysis

def operator_suite(psi: TreeFunction, tree: Tree, cfg: VerifyConfig,
                   rng: np.random.Generator) -> tuple[list[InvariantResult], list[InvariantResult]]:
    valid, sound, ess, claimed_upper = [], [], [], []
    exact4, exact5 = [], []
    for p in PAIRS:
        pair = SpacePair(p)
        b = op.norm_bracket(pair, psi, tree, cfg.search)
        valid.append(b.lower.value - b.upper.value)
        if b.witness is not None:
            again = op.certify(pair, psi, Tabulated(tree, np.array(b.witness.values)), tree)
            sound.append(abs(again - b.lower.value) / max(again, 1e-300))
        if p == "LwToL":
            claimed_upper.append(b.lower.value - b.notes["tau_plus_sigma"])
        try:
            e = op.essential_norm_bracket(pair, psi, tree)
            if np.isfinite(e.upper.value) and np.isfinite(b.upper.value):
                ess.append(e.upper.value - b.upper.value)
        except op.UnboundedOperatorError:
            pass
        if p == "LwToLinf":
            exact4.extend(_log_probe_gap(psi, tree))
        if p == "LinfToLw":
            eta = dg.eta(psi, tree)
            if eta.at_level is not None and eta.at_level <= tree.depth - 1 and np.isfinite(eta.value):
                spec = WitnessSpec("sign_alternating")
                f = make_witness(spec, tree, psi).function
                exact5.append(abs(op.certify(pair, psi, f, tree) - eta.value))
    out = [
        _result("bracket_lower_le_upper", "operator_analysis", valid, cfg.slack),
        _result("lower_bound_recomputes", "operator_analysis", sound, 1e-12),
        _result("essential_upper_le_norm_upper", "operator_analysis", ess, cfg.slack),
        _result("log_probe_reaches_log1p_sup", "operator_analysis", exact4, 1e-9),
        _result("sign_alternating_attains_eta", "operator_analysis", exact5, 1e-9),
        _result("tail_chain_bound", "operator_analysis", _tail_chain(psi, tree, rng), 1e-12),
    ]
    advisory = [_result("lower_le_tau_plus_sigma", "operator_analysis", claimed_upper, cfg.slack,
                        "claimed tau+sigma upper bound for Lw->L; see tau_hat")]
    return out, advisory


def _log_probe_gap(psi: TreeFunction, tree: Tree) -> list[float]:
    """capped log probe at the attaining level must reach ``sup log(1+|v|)|psi|`` (minus slack)."""
    if tree.depth < 1:
        return []
    absv = np.abs(np.asarray(values_on(psi, tree)))
    weighted = np.log1p(tree.level) * absv
    v = int(np.argmax(weighted))
    m = int(tree.level[v])
    if m < 1:
        return []
    f = make_witness(WitnessSpec("capped_log", {"level": m}), tree).function
    got = op.certify(SpacePair("LwToLinf"), psi, f, tree)
    return [float(weighted[v]) - got]


def _tail_chain(psi: TreeFunction, tree: Tree, rng: np.random.Generator, count: int = 20) -> list[float]:
    """``||psi J_n f||_L <= ||f||_w sup_{|v|>n} [log|v| Dpsi(v) + |psi(v)|/|v|]``.

    ``J_n f`` vanishes up to level ``n``; ``|J_n f(v-)| <= ||f||_w log|v|`` by
    summing ``Df <= ||f||_w/|w|`` along the path, and ``D(J_n f)(v) = Df(v)``.
    """
    if tree.depth < 3:
        return []
    pv = np.asarray(values_on(psi, tree), dtype=np.complex128)
    lv = tree.level
    dpsi = np.zeros(tree.vertex_count)
    dpsi[1:] = np.abs(pv[1:] - pv[tree.parent[1:]])
    batch = random_functions(tree, count, rng)
    out = []
    for i in range(count):
        n = int(rng.integers(1, tree.depth))
        f = Tabulated(tree, batch[i])
        sel = lv > n
        bound = float(np.max(np.log(lv[sel]) * dpsi[sel] + np.abs(pv[sel]) / lv[sel]))
        rhs = bound * norm("Lw", f, tree, tail=False)
        lhs = norm("L", op.apply(psi, tail_part(f, tree, n), tree), tree, tail=False)
        out.append((lhs - rhs) / max(rhs, 1.0))
    return out


# --------------------------------------------------------------------- driver

def run_all(psi: TreeFunction, tree: Tree, cfg: VerifyConfig | None = None) -> VerifyReport:
    cfg = cfg or VerifyConfig()
    start = time.perf_counter()
    rng = np.random.default_rng(cfg.seed)
    lemma_tree = build_homogeneous(cfg.lemma_branching, cfg.lemma_branching, cfg.lemma_depth)
    batch = random_functions(lemma_tree, cfg.random_functions, rng)
    results = tree_suite(tree) + tree_suite(lemma_tree)
    l_res, l_adv = lemma_suite(lemma_tree, batch, cfg.rtol)
    results += l_res
    results += norm_algebra_suite(lemma_tree, batch, rng, cfg.rtol)
    results += oracle_suite(psi, tree)
    results += diagnostics_suite(psi, tree)
    w_res, w_adv = witness_suite(tree, psi)
    o_res, o_adv = operator_suite(psi, tree, cfg, rng)
    results += w_res + o_res
    return VerifyReport(tuple(results), tuple(l_adv + w_adv + o_adv), time.perf_counter() - start)

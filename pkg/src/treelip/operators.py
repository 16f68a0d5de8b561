"""Multiplication operators ``M_psi f = psi f`` between the tree function spaces.

Norm brackets pair a formula upper bound with a certified lower bound. The
lower bound always comes from an explicit function ``f`` on the truncation:
``||psi f||_target / ||f||_source``, recomputed from scratch by
``treelip.functions``. Candidates are scored in closed form first, which
keeps every anchor level and vertex affordable; only the best few are built
and certified. An optional seeded search then tries to improve the winner.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import diagnostics as dg
from . import tail as tl
from .diagnostics import SpacePair
from .functions import (Radial, Tabulated, TreeFunction, harmonic_numbers, level_reduce, norm,
                        radial, values_on)
from .tree import Tree
from .witnesses import WitnessSpec, make_witness

STRATEGIES = ("witness_only", "coordinate_ascent", "random_ball")
INVERSION_SLACK = 1e-9
CERTIFY_TOP = 3


class BracketInversionError(ArithmeticError):
    """Certified lower bound above the formula upper bound."""


class UnboundedOperatorError(ValueError):
    pass


@dataclass(frozen=True)
class SearchConfig:
    budget: int = 10000
    seed: int = 0
    strategy: str = "coordinate_ascent"

    def __post_init__(self):
        if isinstance(self.budget, bool) or not isinstance(self.budget, int) or self.budget < 1:
            raise ValueError(f"search budget must be an integer >= 1, got {self.budget!r}")
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown search strategy {self.strategy!r}; expected one of {STRATEGIES}")


@dataclass(frozen=True)
class Bound:
    value: float
    provenance: str
    status: str = "certified"

    def to_dict(self) -> dict:
        return {"value": self.value, "provenance": self.provenance, "status": self.status}


@dataclass(frozen=True)
class Bracket:
    pair: SpacePair
    lower: Bound
    upper: Bound
    depth: int
    notes: dict = field(default_factory=dict)
    witness: Tabulated | None = field(default=None, compare=False, repr=False)

    def to_dict(self) -> dict:
        return {"pair": self.pair.label, "little": self.pair.little, "depth": self.depth,
                "lower": self.lower.value, "upper": self.upper.value,
                "lower_bound": self.lower.to_dict(), "upper_bound": self.upper.to_dict(),
                "notes": dict(self.notes)}


# ------------------------------------------------------------------- apply

def apply(psi: TreeFunction, f: TreeFunction, tree: Tree | None = None) -> TreeFunction:
    """Pointwise product. Two radial factors stay radial; anything else is tabulated."""
    if isinstance(psi, Radial) and isinstance(f, Radial):
        levels = sorted(set(psi.override_map()) | set(f.override_map()))
        lv = np.array(levels, dtype=np.int64)
        prod = psi.level_values(lv) * f.level_values(lv) if levels else []
        return radial(f"({psi.text})*({f.text})", dict(zip(levels, map(float, prod))))
    if tree is None:
        raise ValueError("a tree is needed to multiply tabulated functions")
    return Tabulated(tree, np.asarray(values_on(psi, tree), dtype=np.complex128)
                     * np.asarray(values_on(f, tree), dtype=np.complex128))


def array_norm(space: str, vals: np.ndarray, tree: Tree) -> float:
    """Truncation norm of a per-vertex array (search inner loop)."""
    if space == "Linf":
        return float(np.max(np.abs(vals)))
    d = np.abs(vals[1:] - vals[tree.parent[1:]])
    if space == "Lw":
        d = tree.level[1:] * d
    return float(abs(vals[0]) + (d.max() if d.size else 0.0))


# ------------------------------------------------------- candidate scoring

@dataclass
class _Candidate:
    score: float
    spec: WitnessSpec


def _prefix_max(a):
    return np.maximum.accumulate(a)


def _suffix_max_after(a):
    """``out[m] = max(a[m+1:])`` (0 past the end)."""
    out = np.zeros_like(a)
    if a.size > 1:
        out[:-1] = np.maximum.accumulate(a[::-1])[::-1][1:]
    return out


class _Context:
    def __init__(self, psi: TreeFunction, tree: Tree):
        self.tree = tree
        self.psi = np.asarray(values_on(psi, tree), dtype=np.complex128)
        self.abs = np.abs(self.psi)
        self.n = tree.level.astype(np.float64)
        self.has_children = tree.has_children()
        self.depth = tree.depth
        self.par = tree.parent.copy()
        self.par[0] = 0
        self.dpsi = np.abs(self.psi - self.psi[self.par])
        self.dmax = level_reduce(self.dpsi, tree)
        self.absmax = level_reduce(self.abs, tree)

    def step_profile(self, base: np.ndarray) -> np.ndarray:
        """Per-level max of ``|psi(v) b(|v|) - psi(v^-) b(|v|-1)|`` for a radial ``b``."""
        lv = self.tree.level
        cur = self.psi * base[lv]
        prev = self.psi[self.par] * base[np.maximum(lv - 1, 0)]
        e = np.abs(cur - prev)
        e[0] = 0.0
        return level_reduce(e, self.tree)

    def single_vertex_norms(self, space: str, amp: np.ndarray) -> np.ndarray:
        """Norm of ``amp[v] * chi_v`` for every vertex ``v``."""
        a = np.abs(amp)
        if space == "Linf":
            return a
        kids = self.has_children
        if space == "L":
            out = a.copy()
            out[0] = a[0] + a[0] * kids[0]
            return out
        out = np.maximum(self.n * a, (self.n + 1) * a * kids)
        out[0] = a[0] + a[0] * kids[0]
        return out


def _point_candidates(ctx: _Context, pair: str) -> list[_Candidate]:
    src, tgt = dg.SOURCE_TARGET[pair]
    if src == "Lw":
        amp = 1.0 / (ctx.n + 1)
        amp[0] = 0.5
        family = "point_mass"
    else:
        amp = np.ones_like(ctx.n)
        if src == "L":
            amp[0] = 0.5
        family = None if src == "L" else "indicator"
    s = ctx.single_vertex_norms(src, amp)
    t = ctx.single_vertex_norms(tgt, amp * ctx.abs)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(s > 0, t / s, 0.0)
    out = []
    for v in np.argsort(-ratio, kind="stable")[:CERTIFY_TOP]:
        v = int(v)
        if family is None:  # L source: half indicator at the root, indicators elsewhere
            spec = WitnessSpec("point_mass", {"vertex": 0, "space": "L"}) if v == 0 else \
                WitnessSpec("indicator", {"vertex": v})
        else:
            params = {"vertex": v}
            if family == "indicator":
                params["space"] = "Linf"
            spec = WitnessSpec(family, params)
        out.append(_Candidate(float(ratio[v]), spec))
    return out


def _capped_candidates(ctx: _Context, pair: str) -> list[_Candidate]:
    """Radial ``f = b(min(|v|, m))`` for ``b`` in (log(1+n), H_n) and every ``m``."""
    if ctx.depth < 1:
        return []
    levels = np.arange(ctx.depth + 1, dtype=np.float64)
    out = []
    for family, base in (("capped_log", np.log1p(levels)),
                         ("capped_harmonic", harmonic_numbers(np.arange(ctx.depth + 1)))):
        src = np.zeros(ctx.depth + 1)
        src[1:] = _prefix_max(levels[1:] * np.diff(base))
        if pair == "LwToL":
            reach = _prefix_max(ctx.step_profile(base))
            beyond = base * _suffix_max_after(ctx.dmax)
        else:  # LwToLinf
            reach = _prefix_max(base * ctx.absmax)
            beyond = base * _suffix_max_after(ctx.absmax)
        tgt = np.maximum(reach, beyond)
        ratio = tgt[1:] / src[1:]
        for i in np.argsort(-ratio, kind="stable")[:CERTIFY_TOP]:
            out.append(_Candidate(float(ratio[i]), WitnessSpec(family, {"level": int(i) + 1})))
    return out


def _cap_candidates(ctx: _Context) -> list[_Candidate]:
    """Source L, target Lw: ``min(|v|, m)`` and its variant whose last step turns back."""
    if ctx.depth < 1:
        return []
    levels = np.arange(ctx.depth + 1, dtype=np.float64)
    lin = ctx.step_profile(levels)
    reach = _prefix_max(levels * lin)
    tail_w = _suffix_max_after(levels * ctx.dmax)
    out = []
    cap = np.maximum(reach, levels * tail_w)
    for i in np.argsort(-cap[1:], kind="stable")[:CERTIFY_TOP]:
        out.append(_Candidate(float(cap[i + 1]), WitnessSpec("radial_cap", {"level": int(i) + 1})))
    # bent cap: f = min(|v|, m-1) - [|v| >= m]
    lv = ctx.tree.level
    g = np.abs((lv - 1) * (ctx.psi - ctx.psi[ctx.par]) - ctx.psi)
    g[0] = 0.0
    at = levels * level_reduce(g, ctx.tree)
    before = np.zeros_like(reach)
    before[1:] = reach[:-1]
    bent = np.maximum(np.maximum(before, at), np.abs(levels - 2) * tail_w)
    for i in np.argsort(-bent[1:], kind="stable")[:CERTIFY_TOP]:
        out.append(_Candidate(float(bent[i + 1]), WitnessSpec("bent_cap", {"level": int(i) + 1})))
    return out


def _whole_candidates(ctx: _Context, pair: str) -> list[_Candidate]:
    src, tgt = dg.SOURCE_TARGET[pair]
    out = [_Candidate(array_norm(tgt, ctx.psi, ctx.tree), WitnessSpec("constant", {"value": 1.0}))]
    if pair == "LinfToLw":
        spec = WitnessSpec("sign_alternating")
        f = make_witness(spec, ctx.tree, Tabulated(ctx.tree, ctx.psi)).function.values
        s = array_norm("Linf", f, ctx.tree)
        out.append(_Candidate(array_norm("Lw", ctx.psi * f, ctx.tree) / s if s else 0.0, spec))
    return out


def _build(spec: WitnessSpec, ctx: _Context) -> np.ndarray:
    psi = Tabulated(ctx.tree, ctx.psi)
    return make_witness(spec, ctx.tree, psi).function.values.astype(np.complex128)


def _candidates(ctx: _Context, pair: str) -> list[_Candidate]:
    cands = _whole_candidates(ctx, pair) + _point_candidates(ctx, pair)
    if pair in ("LwToL", "LwToLinf"):
        cands += _capped_candidates(ctx, pair)
    elif pair == "LToLw":
        cands += _cap_candidates(ctx)
    return cands


def certify(pair: SpacePair, psi: TreeFunction, f: Tabulated, tree: Tree) -> float:
    """``||psi f||_target / ||f||_source`` on the truncation, via the norm routines."""
    src = norm(pair.source, f, tree, tail=False)
    if src == 0:
        return 0.0
    return norm(pair.target, apply(psi, f, tree), tree, tail=False) / src


# --------------------------------------------------------------- searches

def _edge_weights(space: str, tree: Tree) -> np.ndarray:
    w = np.ones(tree.vertex_count) if space == "L" else tree.level.astype(np.float64)
    w[0] = 0.0
    return w


class _NormState:
    """A truncation norm kept up to date under single-vertex changes.

    ``terms[v]`` is the contribution of vertex ``v`` to the sup (weighted
    difference to the parent, or ``|value|`` for the sup norm). Changing the
    value at ``u`` touches only ``u`` and its children.
    """

    def __init__(self, space: str, vals: np.ndarray, tree: Tree):
        self.space, self.tree = space, tree
        self.vals = np.array(vals, dtype=np.complex128)
        self.par = tree.parent.copy()
        self.par[0] = 0
        self.w = _edge_weights(space, tree)
        if space == "Linf":
            self.terms = np.abs(self.vals)
        else:
            self.terms = self.w * np.abs(self.vals - self.vals[self.par])
            self.terms[0] = 0.0

    def _local(self, u: int) -> np.ndarray:
        if self.space == "Linf":
            return np.array([u])
        kids = self.tree.children(u)
        return np.concatenate(([u], kids)) if u != 0 else kids

    def rest(self, u: int) -> float:
        """Sup of the terms that do not depend on the value at ``u``."""
        local = self._local(u)
        saved = self.terms[local].copy()
        self.terms[local] = 0.0
        out = float(self.terms.max())
        self.terms[local] = saved
        return out

    def value_with(self, u: int, x: complex, rest: float) -> float:
        """Norm after setting the value at ``u`` to ``x``."""
        if self.space == "Linf":
            return max(rest, abs(x))
        kids = self.tree.children(u)
        loc = float(np.max(self.w[kids] * np.abs(self.vals[kids] - x))) if kids.size else 0.0
        if u == 0:
            return abs(x) + max(rest, loc)
        loc = max(loc, self.w[u] * abs(x - self.vals[self.par[u]]))
        return abs(self.vals[0]) + max(rest, loc)

    def set(self, u: int, x: complex) -> None:
        self.vals[u] = x
        if self.space == "Linf":
            self.terms[u] = abs(x)
            return
        kids = self.tree.children(u)
        self.terms[kids] = self.w[kids] * np.abs(self.vals[kids] - x)
        if u != 0:
            self.terms[u] = self.w[u] * abs(x - self.vals[self.par[u]])


def _boundary(ball, base: complex, direction: complex, sign: float) -> float:
    """Largest ``t >= 0`` with ``ball(base + sign t direction) <= 1`` (bisection)."""
    if ball(base) > 1 + 1e-15:
        return 0.0
    hi = 1.0
    while ball(base + sign * hi * direction) <= 1 and hi < 2.0**60:
        hi *= 2
    lo = 0.0
    for _ in range(64):
        mid = 0.5 * (lo + hi)
        if ball(base + sign * mid * direction) <= 1:
            lo = mid
        else:
            hi = mid
    return lo


def coordinate_ascent(pair: SpacePair, psi_vals: np.ndarray, tree: Tree, start: np.ndarray,
                      cfg: SearchConfig) -> tuple[np.ndarray, float, int]:
    """Move one vertex at a time to the end of its feasible segment along ``conj(psi)/|psi|``.

    The target norm is convex in each coordinate, so its maximum over the
    feasible segment sits at an endpoint. Returns ``(f, value, steps)``.
    """
    src, tgt = pair.source, pair.target
    s0 = array_norm(src, start, tree)
    f = start / s0 if s0 > 0 else start.copy()
    source = _NormState(src, f, tree)
    target = _NormState(tgt, psi_vals * f, tree)
    best = array_norm(tgt, psi_vals * f, tree)
    order = np.random.default_rng(cfg.seed).permutation(tree.vertex_count)
    steps = 0
    while steps < cfg.budget:
        improved = False
        for u in order:
            if steps >= cfg.budget:
                break
            steps += 1
            u = int(u)
            mag = abs(psi_vals[u])
            if mag == 0:
                continue
            direction = np.conj(psi_vals[u]) / mag
            src_rest, tgt_rest = source.rest(u), target.rest(u)

            def ball(x, u=u, src_rest=src_rest):
                return source.value_with(u, x, src_rest)

            cand_best, cand_val = best, None
            for sign in (1.0, -1.0):
                t = _boundary(ball, source.vals[u], direction, sign)
                if t == 0.0:
                    continue
                val = source.vals[u] + sign * t * direction
                score = target.value_with(u, psi_vals[u] * val, tgt_rest)
                if score > cand_best + 1e-15:
                    cand_best, cand_val = score, val
            if cand_val is not None:
                source.set(u, cand_val)
                target.set(u, psi_vals[u] * cand_val)
                best = cand_best
                improved = True
        if not improved:
            break
    return source.vals.copy(), best, steps


def _integrate(increments: np.ndarray, tree: Tree) -> np.ndarray:
    """Function whose value at ``v`` sums the increments along the path from the root."""
    out = increments.copy()
    for lvl in tree.levels[1:]:
        out[lvl] += out[tree.parent[lvl]]
    return out


def random_ball(pair: SpacePair, psi_vals: np.ndarray, tree: Tree, start: np.ndarray,
                cfg: SearchConfig) -> tuple[np.ndarray, float, int]:
    rng = np.random.default_rng(cfg.seed)
    s0 = array_norm(pair.source, start, tree)
    best_f = start / s0 if s0 > 0 else start.copy()
    best = array_norm(pair.target, psi_vals * best_f, tree)
    complex_psi = bool(np.any(psi_vals.imag))
    for _ in range(cfg.budget):
        g = rng.standard_normal(tree.vertex_count)
        if complex_psi:
            g = g + 1j * rng.standard_normal(tree.vertex_count)
        if pair.source != "Linf":
            g = _integrate(g, tree)
        s = array_norm(pair.source, g, tree)
        if s == 0:
            continue
        g = g / s
        val = array_norm(pair.target, psi_vals * g, tree)
        if val > best:
            best, best_f = val, g
    return best_f, best, cfg.budget


# ------------------------------------------------------------ norm bracket

def _upper(pair: SpacePair, psi: TreeFunction, tree: Tree) -> tuple[Bound, dict]:
    def fin(est):
        return np.inf if est.status == tl.DIVERGED else est.value

    def worst(*ests):
        st = [e.status for e in ests]
        return tl.DIVERGED if tl.DIVERGED in st else tl.INCONCLUSIVE if tl.INCONCLUSIVE in st else tl.CONVERGED

    if pair.pair == "LwToL":
        a, b, h = dg.tau(psi, tree), dg.sigma(psi, tree), dg.tau_hat(psi, tree)
        notes = {"tau": fin(a), "sigma": fin(b), "tau_hat": fin(h), "tau_plus_sigma": fin(a) + fin(b)}
        return Bound(fin(h) + fin(b), "formula:tau_hat+sigma", worst(h, b)), notes
    if pair.pair == "LToLw":
        a, b = dg.theta(psi, tree), dg.omega(psi, tree)
        return Bound(fin(a) + fin(b), "formula:theta+omega", worst(a, b)), {"theta": fin(a), "omega": fin(b)}
    if pair.pair == "LwToLinf":
        g = dg.gamma(psi, tree)
        return Bound(fin(g), "formula:gamma", g.status), {"gamma": fin(g)}
    e = dg.eta(psi, tree)
    return Bound(fin(e), "formula:eta", e.status), {"eta": fin(e)}


def _gap_notes(psi: TreeFunction, tree: Tree, lower: float, upper: float) -> dict:
    """Weighted sups that qualify the gamma formula for weighted Lipschitz into bounded."""
    ctx_abs = np.abs(np.asarray(values_on(psi, tree)))
    lv = tree.level
    root = float(ctx_abs[0])
    star = lv >= 1
    trunc = {
        "log1p_sup_truncation": float(np.max(np.log1p(lv[star]) * ctx_abs[star], initial=0.0)),
        "one_plus_log_sup_truncation": max(root, float(np.max((1 + np.log(np.maximum(lv[star], 1))) * ctx_abs[star],
                                                               initial=0.0))),
        "harmonic_norm_truncation": max(root, float(np.max(harmonic_numbers(lv[star]) * ctx_abs[star],
                                                           initial=0.0))),
    }
    extras = dg.supplementary(psi, tree)
    hs, ls = extras["harmonic_sup"], extras["log1p_sup"]
    notes = dict(trunc)
    notes["log1p_sup"] = np.inf if ls.status == tl.DIVERGED else ls.value
    notes["harmonic_norm"] = np.inf if hs.status == tl.DIVERGED else hs.value
    notes["gamma_gap"] = float(upper - lower) if np.isfinite(upper) else np.inf
    notes["gamma_gap_flag"] = bool(not np.isfinite(upper) or upper - lower > 1e-6)
    return notes


def norm_bracket(pair: SpacePair, psi: TreeFunction, tree: Tree, cfg: SearchConfig | None = None) -> Bracket:
    cfg = cfg or SearchConfig()
    upper, upper_notes = _upper(pair, psi, tree)
    ctx = _Context(psi, tree)
    cands = sorted(_candidates(ctx, pair.pair), key=lambda c: -c.score)
    best_val, best_f, best_label = -1.0, None, ""
    for cand in cands[:CERTIFY_TOP]:
        vals = _build(cand.spec, ctx)
        f = Tabulated(tree, vals)
        val = certify(pair, psi, f, tree)
        if val > best_val:
            best_val, best_f, best_label = val, f, "witness:" + cand.spec.label()
    notes = {"candidates": len(cands), "search": cfg.strategy, **upper_notes}
    if cfg.strategy != "witness_only" and best_f is not None:
        runner = coordinate_ascent if cfg.strategy == "coordinate_ascent" else random_ball
        g, _, steps = runner(pair, ctx.psi, tree, best_f.values.astype(np.complex128), cfg)
        found = Tabulated(tree, g)
        val = certify(pair, psi, found, tree)
        notes["search_steps"] = steps
        if val > best_val + 1e-15:
            best_val, best_f = val, found
            best_label = f"search:{cfg.strategy}(seed={cfg.seed},from={best_label.split(':', 1)[1]})"
    lower = Bound(max(best_val, 0.0), best_label)
    if pair.pair == "LwToL":
        # tau + sigma alone is not always an upper bound; record when a witness beats it
        notes["tau_plus_sigma_exceeded"] = bool(lower.value > notes["tau_plus_sigma"] + INVERSION_SLACK)
    if pair.pair == "LwToLinf":
        notes.update(_gap_notes(psi, tree, lower.value, upper.value))
    if lower.value > upper.value + INVERSION_SLACK:
        raise BracketInversionError(
            f"{pair.label}: certified lower {lower.value!r} exceeds upper {upper.value!r} ({best_label})")
    return Bracket(pair, lower, upper, tree.depth, notes, best_f)


# -------------------------------------------------------- essential norms

def essential_norm_bracket(pair: SpacePair, psi: TreeFunction, tree: Tree | None = None) -> Bracket:
    report = dg.classify(pair, psi, tree)
    if report.bounded.value == dg.NO:
        raise UnboundedOperatorError(f"M_psi is unbounded for {pair.label}: {report.bounded.reason}")
    t = report.tails

    def v(name):
        e = t[name]
        return np.inf if e.status == tl.DIVERGED else (0.0 if e.is_zero() else e.value)

    def st(*names):
        ss = [t[n].status for n in names]
        return tl.INCONCLUSIVE if tl.INCONCLUSIVE in ss or tl.DIVERGED in ss else tl.CONVERGED

    if pair.pair == "LwToL":
        lo = Bound(max(v("A2"), v("B2")), "formula:max(A2,B2)", st("A2", "B2"))
        hi = Bound(v("A2") + v("B2"), "formula:A2+B2", st("A2", "B2"))
    elif pair.pair == "LToLw":
        lo = Bound(max(v("A3"), 0.5 * v("B3")), "formula:max(A3,B3/2)", st("A3", "B3"))
        hi = Bound(v("A3") + v("B3"), "formula:A3+B3", st("A3", "B3"))
    elif pair.pair == "LwToLinf":
        lo = hi = Bound(v("A4"), "formula:A4", st("A4"))
    else:
        lo = hi = Bound(v("B5"), "formula:B5", st("B5"))
    if lo.value > hi.value + INVERSION_SLACK:
        raise BracketInversionError(f"essential bracket inverted for {pair.label}")
    depth = tree.depth if tree is not None else 0
    return Bracket(pair, lo, hi, depth, {"compact": report.compact.value})


# --------------------------------------------------------- isometry probes

@dataclass(frozen=True)
class IsometryDefect:
    value: float
    probe: str
    source_norm: float
    target_norm: float

    def to_dict(self) -> dict:
        return {"value": self.value, "probe": self.probe,
                "source_norm": self.source_norm, "target_norm": self.target_norm}


def isometry_probes(pair: SpacePair, tree: Tree) -> list[WitnessSpec]:
    """The probe set of the no-isometry arguments, one per vertex where it applies."""
    verts = range(tree.vertex_count)
    probes = [WitnessSpec("constant", {"value": 1.0})]
    if pair.pair in ("LwToL", "LwToLinf"):
        probes += [WitnessSpec("point_mass", {"vertex": v}) for v in verts]
    elif pair.pair == "LToLw":
        probes.append(WitnessSpec("point_mass", {"vertex": 0, "space": "L"}))
        probes += [WitnessSpec("indicator", {"vertex": v}) for v in verts if v != 0]
    else:
        probes += [WitnessSpec("indicator", {"vertex": v, "space": "Linf"}) for v in verts]
        if tree.depth >= 1:
            probes.append(WitnessSpec("ball_indicator", {"radius": 1}))
    return probes


def isometry_defect(pair: SpacePair, psi: TreeFunction, tree: Tree) -> IsometryDefect:
    """``max | ||M_psi p||_target - ||p||_source |`` over the probe set."""
    ctx = _Context(psi, tree)
    src, tgt = pair.source, pair.target
    # single-vertex probes in closed form, then the winner recomputed from scratch
    if pair.pair in ("LwToL", "LwToLinf"):
        amp = 1.0 / (ctx.n + 1)
        amp[0] = 0.5
    else:
        amp = np.ones_like(ctx.n)
        if pair.pair == "LToLw":
            amp[0] = 0.5
    gaps = np.abs(ctx.single_vertex_norms(tgt, amp * ctx.abs) - ctx.single_vertex_norms(src, amp))
    probes = isometry_probes(pair, tree)
    vertex_probe = {int(p.params["vertex"]): p for p in probes if "vertex" in p.params}
    shortlist = [p for p in probes if "vertex" not in p.params]
    shortlist.append(vertex_probe[int(np.argmax(gaps))])
    best = None
    psi_t = Tabulated(tree, ctx.psi)
    for spec in shortlist:
        cand = probe_defect(pair, psi_t, tree, spec)
        if best is None or cand.value > best.value:
            best = cand
    return best


def probe_defect(pair: SpacePair, psi: TreeFunction, tree: Tree, probe: WitnessSpec) -> IsometryDefect:
    """Defect ``| ||M_psi p|| - ||p|| |`` of one named probe."""
    w = make_witness(probe, tree)
    s = norm(pair.source, w.function, tree, tail=False)
    t = norm(pair.target, apply(psi, w.function, tree), tree, tail=False)
    return IsometryDefect(abs(t - s), probe.label(), s, t)

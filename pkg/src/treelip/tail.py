"""Tail ladders: estimating sups and limits of level quantities.

A level quantity ``q(n)`` is sampled on windows of ``WINDOW`` consecutive
levels starting at ``2**k`` for ``k = 1..50``. The window maxima (or minima)
``q_k`` drive the limit estimate; the reported ladder holds the partial sups
``max_{j >= k} q_j`` (partial infs for ``mode="inf"``), which are monotone by
construction.

Limit rules, applied in order:

1. non-finite samples: diverged;
2. the last five ``q_k`` agree to ``1e-12`` relative: converged;
3. increasing and above ``1e12``: diverged;
4. strictly decreasing and below ``1e-12`` of the ladder maximum: converged;
5. two Aitken extrapolations on geometrically spaced ``k`` (exact for
   ``L + C k**-p``, i.e. logarithmic tails in ``n``): growth when the
   increments do not shrink, otherwise converged to the extrapolated limit
   if the two estimates agree;
6. the same with equally spaced ``k`` (exact for ``L + C r**k``, i.e.
   power-law tails ``n**-a`` with small ``a``), convergence only;
7. a fourth-order Levin u-transform on two overlapping end windows
   (shifted logarithmic tails such as ``log n / (1 + log n)``),
   convergence only;
8. inconclusive otherwise.

Each extrapolation model is accepted only when its two estimates agree to
``EXTRAP_RTOL`` of the ladder scale; a looser test lets a biased model
through, because both estimates then share the same bias.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

LADDER_EXPONENTS = tuple(range(1, 51))
WINDOW = 4
DENSE_DEPTH = 4096

AGREE_RTOL = 1e-12
ABS_FLOOR = 1e-300
DIVERGE_LEVEL = 1e12
ZERO_RTOL = 1e-12
AITKEN_TRIPLES = ((16, 28, 49), (18, 30, 50))  # exact for L + C k**-p
GEOMETRIC_TRIPLES = ((36, 43, 50), (38, 44, 50))  # exact for L + C r**k (power laws in n)
EXTRAP_RTOL = 1e-7
LEVIN_ORDER = 4
LEVIN_ENDS = (50, 48)

CONVERGED, DIVERGED, INCONCLUSIVE = "converged", "diverged", "inconclusive"


@dataclass(frozen=True)
class TailEstimate:
    value: float
    status: str
    ladder: tuple[tuple[int, float], ...] = ()
    truncation: float | None = None  # same quantity over the given finite tree
    at_level: int | None = None  # level attaining the observed extremum

    @property
    def scale(self) -> float:
        vals = [v for _, v in self.ladder if np.isfinite(v)]
        return max(vals + [abs(self.value) if np.isfinite(self.value) else 0.0])

    def is_zero(self) -> bool:
        return self.status == CONVERGED and self.value <= ZERO_RTOL * self.scale

    def is_finite(self) -> bool:
        return self.status != DIVERGED and bool(np.isfinite(self.value))

    def to_dict(self) -> dict:
        return {"value": self.value, "status": self.status,
                "truncation": self.truncation, "at_level": self.at_level,
                "ladder": [[n, v] for n, v in self.ladder]}


def window_levels(k: int) -> np.ndarray:
    return np.arange(2**k, 2**k + WINDOW, dtype=np.int64)


def partial_extrema(q: np.ndarray, mode: str = "sup") -> np.ndarray:
    op = np.maximum if mode == "sup" else np.minimum
    return op.accumulate(q[::-1])[::-1]


def _aitken(q: np.ndarray, triple: tuple[int, int, int]):
    q1, q2, q3 = (q[k - 1] for k in triple)
    d1, d2 = q2 - q1, q3 - q2
    if d1 == 0 or (d1 > 0) != (d2 > 0) and d2 != 0:
        return None
    r = d2 / d1
    if r >= 1:
        return np.inf if d1 > 0 else -np.inf, r
    return q3 + d2 * r / (1 - r), r


def _levin(q: np.ndarray, end: int, order: int = LEVIN_ORDER):
    """Levin u-transform of ``q_{end-order} .. q_end`` (``q`` indexed from k = 1)."""
    ks = np.arange(end - order, end + 1)
    vals = q[ks - 1]
    steps = vals - q[ks - 2]
    if np.any(steps == 0) or not (np.all(steps > 0) or np.all(steps < 0)):
        return None
    j = np.arange(order + 1)
    coef = (-1.0) ** j * np.array([math.comb(order, i) for i in j]) * (ks / float(ks[-1])) ** (order - 1)
    omega = ks * steps
    den = float(np.sum(coef / omega))
    if den == 0:
        return None
    return float(np.sum(coef * vals / omega)) / den, 0.0


def _accept(vals: list[float], scale: float):
    spread = abs(vals[0] - vals[1])
    if spread > EXTRAP_RTOL * scale:
        return None
    lim = 0.5 * (vals[0] + vals[1])
    if abs(lim) <= 10 * spread + ZERO_RTOL * scale:
        lim = 0.0
    return max(lim, 0.0)


def limit_of(q: np.ndarray, mode: str = "sup") -> tuple[float, str]:
    """Estimate ``lim q_k`` (``q`` indexed by ``LADDER_EXPONENTS``)."""
    q = np.asarray(q, dtype=np.float64)
    if not np.all(np.isfinite(q)):
        return np.inf, DIVERGED
    scale = float(np.max(np.abs(q)))
    if scale == 0.0:
        return 0.0, CONVERGED
    last = q[-5:]
    spread = float(last.max() - last.min())
    if spread <= max(AGREE_RTOL * float(np.max(np.abs(last))), ABS_FLOOR):
        return float(q[-1]), CONVERGED
    steps = np.diff(q[-6:])
    increasing, decreasing = bool(np.all(steps > 0)), bool(np.all(steps < 0))
    if increasing and q[-1] > DIVERGE_LEVEL:
        return np.inf, DIVERGED
    if decreasing and q[-1] <= ZERO_RTOL * scale:
        return float(q[-1]), CONVERGED
    for triples, may_diverge in ((AITKEN_TRIPLES, True), (GEOMETRIC_TRIPLES, False)):
        ests = [_aitken(q, t) for t in triples]
        if not all(e is not None for e in ests):
            continue
        if may_diverge and increasing and all(e[1] >= 1 for e in ests):
            return np.inf, DIVERGED
        if (increasing or decreasing) and all(0 <= e[1] < 1 for e in ests):
            lim = _accept([e[0] for e in ests], scale)
            if lim is not None:
                return lim, CONVERGED
    if increasing or decreasing:
        ests = [_levin(q, end) for end in LEVIN_ENDS]
        if all(e is not None for e in ests):
            lim = _accept([e[0] for e in ests], scale)
            if lim is not None:
                return lim, CONVERGED
    part = partial_extrema(q, mode)
    return float(part[-1]), INCONCLUSIVE


def ladder_pairs(q: np.ndarray, mode: str = "sup") -> tuple[tuple[int, float], ...]:
    part = partial_extrema(np.asarray(q, dtype=np.float64), mode)
    return tuple((2**k, float(v)) for k, v in zip(LADDER_EXPONENTS, part))


def finite_ladder(level_q: np.ndarray, mode: str = "sup", start: int = 0) -> tuple[tuple[int, float], ...]:
    """Partial extrema over ``{|v| >= n}`` for data known only up to a finite depth.

    ``level_q[n]`` is the per-level extremum; rungs at ``n = 2**k`` plus the
    deepest level.
    """
    depth = len(level_q) - 1
    if depth < start:
        return ()
    part = partial_extrema(np.asarray(level_q[start:], dtype=np.float64), mode)
    rungs, k = [], 0
    while 2**k <= depth:
        if 2**k >= start:
            rungs.append(2**k)
        k += 1
    if start == 0:
        rungs.insert(0, 0)
    if not rungs or rungs[-1] != depth:
        rungs.append(depth)
    return tuple((n, float(part[n - start])) for n in rungs)

"""Seeded random symbol families for each space pair.

Radial families are chosen so that the operator is bounded for the pair they
are drawn for (finite formula upper bound), with a mix of compact and
non-compact members. Tabulated symbols are random complex values shaped by a
level profile of the same decay class.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .diagnostics import PAIRS
from .functions import Radial, Tabulated, radial
from .tree import Tree

PARITY = "(n - 2*floor(n/2))"


@dataclass(frozen=True)
class Symbol:
    name: str
    function: Radial | Tabulated


def _num(x: float) -> str:
    return f"{x:.6g}" if x >= 0 else f"(0-{-x:.6g})"


def _overrides(rng: np.random.Generator) -> dict[int, float]:
    out = {}
    if rng.random() < 0.3:
        out[0] = float(np.round(rng.uniform(-2, 2), 4))
    if rng.random() < 0.2:
        out[1] = float(np.round(rng.uniform(-2, 2), 4))
    return out


def _slow_exponent(rng: np.random.Generator, exact: float, lo: float, hi: float) -> float:
    """Either the boundary exponent or one far enough above it for the tail ladder to settle.

    Log-power tails ``k**-p`` with ``p`` near 0 cannot be decided on levels up to ``2**50``.
    """
    return exact if rng.random() < 0.3 else float(rng.uniform(lo, hi))


def _radial_templates(pair: str):
    """Expression templates ``(name, draw(rng) -> text)`` bounded for ``pair``."""
    if pair == "LwToL":
        return [
            ("power", lambda r: f"{_num(r.uniform(0.2, 3))}*(n+1)^{_num(r.uniform(-2, 0.6))}"),
            ("logpower", lambda r: f"{_num(r.uniform(0.2, 3))}*log(n+2)^{_num(r.uniform(-1, 1.5))}"),
            ("shifted", lambda r: f"{_num(r.uniform(-2, 2))} + {_num(r.uniform(0.1, 3))}/(n+1)^{_num(r.uniform(0.5, 2))}"),
            ("parity", lambda r: f"{_num(r.uniform(0.2, 2))}*(1 + {_num(r.uniform(-0.9, 0.9))}*{PARITY})/(n+1)"),
            ("compact", lambda r: f"{_num(r.uniform(0.2, 3))}/((n+1)*(1+log(n+1))^{_num(r.uniform(0.5, 2))})"),
        ]
    if pair == "LToLw":
        return [
            ("power", lambda r: f"{_num(r.uniform(0.2, 3))}/(n+1)^{_num(r.uniform(1, 3))}"),
            ("loglinear", lambda r: f"{_num(r.uniform(0.2, 3))}/((n+1)*log(n+2)^{_num(_slow_exponent(r, 0.0, 0.8, 2.0))})"),
            ("parity", lambda r: f"{_num(r.uniform(0.2, 2))}*(1 + {_num(r.uniform(-0.9, 0.9))}*{PARITY})/(n+1)^2"),
            ("mixed", lambda r: f"{_num(r.uniform(0.2, 2))}/(n+1) + {_num(r.uniform(-2, 2))}/(n+1)^2"),
        ]
    if pair == "LwToLinf":
        return [
            ("invlog", lambda r: f"{_num(r.uniform(0.2, 3))}/(1+log(n+1))^{_num(_slow_exponent(r, 1.0, 2.5, 3.5))}"),
            ("power", lambda r: f"{_num(r.uniform(0.2, 3))}/(n+1)^{_num(r.uniform(0.3, 2))}"),
            ("bump", lambda r: f"{_num(r.uniform(0.2, 3))}*n/(n^2 + {_num(r.uniform(1, 40))})"),
            ("parity", lambda r: f"{_num(r.uniform(0.2, 2))}*(1 + {_num(r.uniform(-0.9, 0.9))}*{PARITY})/(1+log(n+1))"),
        ]
    return [
        ("power", lambda r: f"{_num(r.uniform(0.2, 3))}/(n+1)^{_num(r.uniform(1, 3))}"),
        ("loglinear", lambda r: f"{_num(r.uniform(0.2, 3))}/((n+1)*log(n+2)^{_num(_slow_exponent(r, 0.0, 0.8, 2.0))})"),
        ("parity", lambda r: f"{_num(r.uniform(0.2, 2))}*(1 + {_num(r.uniform(-0.9, 0.9))}*{PARITY})/(n+1)"),
        ("bump", lambda r: f"{_num(r.uniform(0.2, 3))}*n/(n^2 + {_num(r.uniform(1, 40))})"),
    ]


def radial_corpus(pair: str, count: int, seed: int = 0) -> list[Symbol]:
    if pair not in PAIRS:
        raise ValueError(f"unknown pair {pair!r}")
    rng = np.random.default_rng(seed)
    templates = _radial_templates(pair)
    out = []
    for i in range(count):
        name, draw = templates[i % len(templates)]
        text = draw(rng)
        out.append(Symbol(f"{pair}/{name}/{i}", radial(text, _overrides(rng))))
    return out


def _decay(pair: str, levels: np.ndarray) -> np.ndarray:
    n = levels.astype(np.float64)
    if pair == "LwToL":
        return 1.0 / (1.0 + np.log1p(n))
    if pair == "LwToLinf":
        return 1.0 / (1.0 + np.log1p(n)) ** 1.5
    return 1.0 / (n + 1.0)


def tabulated_corpus(pair: str, tree: Tree, count: int, seed: int = 0,
                     complex_values: bool = True) -> list[Symbol]:
    if pair not in PAIRS:
        raise ValueError(f"unknown pair {pair!r}")
    rng = np.random.default_rng(seed)
    shape = _decay(pair, tree.level)
    out = []
    for i in range(count):
        vals = rng.uniform(-1, 1, tree.vertex_count)
        if complex_values and i % 2:
            vals = vals + 1j * rng.uniform(-1, 1, tree.vertex_count)
        out.append(Symbol(f"{pair}/table/{i}", Tabulated(tree, rng.uniform(0.2, 3) * shape * vals)))
    return out


def isometry_corpus(tree: Tree, count: int, seed: int = 0) -> list[Symbol]:
    """Unimodular constants first, then random radial and tabulated symbols."""
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        kind = i % 4
        if kind == 0:
            phase = np.exp(2j * np.pi * rng.random())
            out.append(Symbol(f"unimodular/{i}", Tabulated(tree, np.full(tree.vertex_count, phase))))
        elif kind == 1:
            out.append(Symbol(f"constant/{i}", radial(_num(rng.uniform(-3, 3)))))
        elif kind == 2:
            pair = PAIRS[int(rng.integers(len(PAIRS)))]
            out.extend(radial_corpus(pair, 1, int(rng.integers(2**31))))
        else:
            vals = rng.uniform(-2, 2, tree.vertex_count) + 1j * rng.uniform(-2, 2, tree.vertex_count)
            out.append(Symbol(f"table/{i}", Tabulated(tree, vals)))
    return out

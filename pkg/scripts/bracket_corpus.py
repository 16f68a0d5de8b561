"""Norm brackets and formula diagnostics over a seeded radial corpus, as CSV.

    python3 scripts/bracket_corpus.py --pair LwToL --count 60 --seed 11 > brackets.csv
"""
import argparse
import csv
import sys
from dataclasses import dataclass

from treelip import diagnostics as dg
from treelip.corpus import radial_corpus
from treelip.diagnostics import SpacePair
from treelip.operators import SearchConfig, norm_bracket
from treelip.tree import build_spine

FORMULAS = {"LwToL": ("tau", "sigma"), "LToLw": ("theta", "omega"),
            "LwToLinf": ("gamma", "gamma"), "LinfToLw": ("eta", "eta")}


@dataclass
class Config:
    pair: str = "LwToL"
    count: int = 60
    seed: int = 11
    depth: int = 64
    budget: int = 10_000


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    for name, default in vars(Config()).items():
        ap.add_argument(f"--{name}", type=type(default), default=default)
    cfg = Config(**vars(ap.parse_args()))
    tree = build_spine(cfg.depth)
    lo_name, hi_name = FORMULAS[cfg.pair]
    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["symbol", "expr", "overrides", lo_name, hi_name, "lower", "upper", "lower_over_max"])
    for sym in radial_corpus(cfg.pair, cfg.count, cfg.seed):
        psi = sym.function
        a, b = getattr(dg, lo_name)(psi).value, getattr(dg, hi_name)(psi).value
        br = norm_bracket(SpacePair(cfg.pair), psi, tree, SearchConfig(cfg.budget, cfg.seed))
        m = max(a, b)
        out.writerow([sym.name, psi.expr.text, dict(psi.overrides), f"{a:.10g}", f"{b:.10g}",
                      f"{br.lower.value:.10g}", f"{br.upper.value:.10g}", f"{br.lower.value / m:.6f}" if m else ""])


if __name__ == "__main__":
    main()

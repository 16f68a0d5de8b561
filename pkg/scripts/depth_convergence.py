"""Truncated diagnostics versus depth, next to the tail-ladder limit.

Shows how slowly logarithmic quantities approach their supremum, which is
why limits are taken from the level ladder rather than from deep trees.

    python3 scripts/depth_convergence.py --expr "1/log(n)" --overrides 0:0,1:0
"""
import argparse

from treelip import diagnostics as dg
from treelip.functions import radial
from treelip.tree import build_spine

QUANTITIES = ("tau", "tau_hat", "sigma", "theta", "omega", "gamma", "eta")


def parse_overrides(text: str) -> dict[int, float]:
    return {int(k): float(v) for k, v in (item.split(":") for item in text.split(",") if item)}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--expr", default="1/((1+n)*(1+log(1+n)))")
    ap.add_argument("--overrides", default="", help="comma list level:value")
    ap.add_argument("--max-power", type=int, default=16, help="deepest spine is 2**max_power")
    args = ap.parse_args()
    psi = radial(args.expr, parse_overrides(args.overrides))
    limits = {q: getattr(dg, q)(psi) for q in QUANTITIES}
    print(f"{'depth':>8} " + " ".join(f"{q:>12}" for q in QUANTITIES))
    for p in range(2, args.max_power + 1, 2):
        tree = build_spine(2 ** p)
        row = [getattr(dg, q)(psi, tree).truncation for q in QUANTITIES]
        print(f"{2 ** p:>8} " + " ".join(f"{x:>12.6g}" for x in row))
    print(f"{'limit':>8} " + " ".join(f"{limits[q].value:>12.6g}" for q in QUANTITIES))
    print(f"{'status':>8} " + " ".join(f"{limits[q].status:>12}" for q in QUANTITIES))


if __name__ == "__main__":
    main()

"""Symbol functionals and boundedness/compactness classification.

Every functional is a ``TailEstimate``. Sups run over ``T*`` for the
difference-based quantities and over all of ``T`` for ``sigma``/``omega``;
``gamma`` and ``eta`` add the root term by hand.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import tail as tl
from .functions import Radial, Tabulated, TreeFunction, evaluate, limit_estimate, sup_estimate
from .tree import Tree

PAIRS = ("LwToL", "LToLw", "LwToLinf", "LinfToLw")
PAIR_LABELS = {"LwToL": "Lw->L", "LToLw": "L->Lw", "LwToLinf": "Lw->Linf", "LinfToLw": "Linf->Lw"}
LABEL_PAIRS = {v: k for k, v in PAIR_LABELS.items()}
SOURCE_TARGET = {"LwToL": ("Lw", "L"), "LToLw": ("L", "Lw"),
                 "LwToLinf": ("Lw", "Linf"), "LinfToLw": ("Linf", "Lw")}
TAIL_KINDS = ("A2", "B2", "A3", "B3", "A4", "B5")
YES, NO, INCONCLUSIVE = "yes", "no", "inconclusive"


@dataclass(frozen=True)
class SpacePair:
    pair: str
    little: bool = False

    def __post_init__(self):
        if self.pair not in PAIRS:
            raise ValueError(f"unknown pair {self.pair!r}; expected one of {PAIRS}")

    @classmethod
    def from_label(cls, label: str, little: bool = False) -> "SpacePair":
        if label in LABEL_PAIRS:
            return cls(LABEL_PAIRS[label], little)
        return cls(label, little)

    @property
    def label(self) -> str:
        return PAIR_LABELS[self.pair]

    @property
    def source(self) -> str:
        return SOURCE_TARGET[self.pair][0]

    @property
    def target(self) -> str:
        return SOURCE_TARGET[self.pair][1]


@dataclass(frozen=True)
class Verdict:
    value: str
    reason: str
    quantities: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {"value": self.value, "reason": self.reason, "quantities": list(self.quantities)}


def _with_root(est: tl.TailEstimate, root: float, combine) -> tl.TailEstimate:
    if est.status == tl.DIVERGED:
        return tl.TailEstimate(np.inf, tl.DIVERGED, est.ladder, _opt(combine, root, est.truncation), None)
    value = combine(root, est.value)
    at = est.at_level
    if value == root and root > est.value:
        at = 0
    return tl.TailEstimate(float(value), est.status, est.ladder, _opt(combine, root, est.truncation), at)


def _opt(combine, root, trunc):
    return None if trunc is None else float(combine(root, trunc))


def _root_abs(psi: TreeFunction, tree: Tree | None) -> float:
    if isinstance(psi, Radial):
        return float(abs(psi.level_values(np.array([0]))[0]))
    return abs(evaluate(psi, tree, 0))


def tau(psi: TreeFunction, tree: Tree | None = None) -> tl.TailEstimate:
    """``sup_{T*} Dpsi(v) log(1+|v|)``."""
    return sup_estimate(psi, tree, "tau")


def tau_hat(psi: TreeFunction, tree: Tree | None = None) -> tl.TailEstimate:
    """``sup_{T*} Dpsi(v)(1 + log|v|)``: the weight the growth lemma actually delivers.

    Differs from ``tau`` only by ``(1 + log n) - log(1 + n)``, which vanishes
    as ``n`` grows, so tails agree; ``tau_hat + sigma`` is a valid upper bound
    for the weighted Lipschitz to Lipschitz norm while ``tau + sigma`` can
    undershoot when ``Dpsi`` is concentrated on the first levels.
    """
    return sup_estimate(psi, tree, "tau_hat")


def sigma(psi: TreeFunction, tree: Tree | None = None) -> tl.TailEstimate:
    return sup_estimate(psi, tree, "sigma")


def theta(psi: TreeFunction, tree: Tree | None = None) -> tl.TailEstimate:
    return sup_estimate(psi, tree, "theta")


def omega(psi: TreeFunction, tree: Tree | None = None) -> tl.TailEstimate:
    return sup_estimate(psi, tree, "omega")


def gamma(psi: TreeFunction, tree: Tree | None = None) -> tl.TailEstimate:
    """``max(|psi(o)|, sup_{T*} (1 + log|v|)|psi(v)|)``; nonzero constants give +inf."""
    return _with_root(sup_estimate(psi, tree, "gamma_star"), _root_abs(psi, tree), max)


def eta(psi: TreeFunction, tree: Tree | None = None) -> tl.TailEstimate:
    return _with_root(sup_estimate(psi, tree, "eta_star"), _root_abs(psi, tree), lambda a, b: a + b)


def tail_quantity(kind: str, psi: TreeFunction, tree: Tree | None = None) -> tl.TailEstimate:
    if kind not in TAIL_KINDS:
        raise ValueError(f"unknown tail quantity {kind!r}; expected one of {TAIL_KINDS}")
    return limit_estimate(psi, tree, kind)


def supplementary(psi: TreeFunction, tree: Tree | None = None) -> dict[str, tl.TailEstimate]:
    """Sups that qualify the other functionals.

    ``tau_hat`` is the corrected difference weight (see ``tau_hat``).
    ``log1p_sup`` and ``harmonic_sup`` bracket the norm of ``psi`` from the
    weighted Lipschitz space into bounded functions from below; ``log_sup``
    and ``linear_sup`` are the finiteness conditions of the bounded-function
    settings.
    """
    root = _root_abs(psi, tree)
    return {
        "tau_hat": tau_hat(psi, tree),
        "log1p_sup": _with_root(sup_estimate(psi, tree, "log1p_abs"), root, max),
        "harmonic_sup": _with_root(sup_estimate(psi, tree, "harmonic_abs"), root, max),
        "log_sup": sup_estimate(psi, tree, "A4"),
        "linear_sup": sup_estimate(psi, tree, "A3"),
    }


@dataclass(frozen=True)
class BelowVerdict:
    verdict: Verdict
    infimum: tl.TailEstimate

    def to_dict(self) -> dict:
        return {"verdict": self.verdict.to_dict(), "infimum": self.infimum.to_dict()}


def bounded_below(psi: TreeFunction, tree: Tree | None = None) -> BelowVerdict:
    """Criterion ``inf_v |psi(v)|/(|v|+1) > 0`` (weighted Lipschitz into bounded functions)."""
    est = sup_estimate(psi, tree, "sigma_inf")
    scale = sigma(psi, tree).value
    zero = est.value <= tl.ZERO_RTOL * scale if np.isfinite(scale) and scale > 0 else est.value == 0
    if zero:
        v = Verdict(NO, "inf |psi|/(n+1) is 0", ("sigma_inf",))
    elif isinstance(psi, Tabulated) or est.status == tl.INCONCLUSIVE:
        v = Verdict(INCONCLUSIVE, "positive infimum on finite data only", ("sigma_inf",))
    else:
        v = Verdict(YES, "inf |psi|/(n+1) > 0", ("sigma_inf",))
    return BelowVerdict(v, est)


def _finite(ests: dict[str, tl.TailEstimate], tabulated: bool) -> Verdict:
    names = tuple(ests)
    bad = [k for k, e in ests.items() if e.status == tl.DIVERGED]
    if bad:
        return Verdict(NO, f"{', '.join(bad)} infinite", names)
    if tabulated:
        return Verdict(INCONCLUSIVE, "finite on the truncation; tabulated data cannot certify the tail", names)
    if all(e.status == tl.CONVERGED for e in ests.values()):
        return Verdict(YES, f"{', '.join(names)} finite", names)
    return Verdict(INCONCLUSIVE, "tail ladder did not settle", names)


def _vanish(ests: dict[str, tl.TailEstimate], tabulated: bool) -> Verdict:
    names = tuple(ests)
    if tabulated:
        return Verdict(INCONCLUSIVE, "limits are not decidable on tabulated data", names)
    nonzero = [k for k, e in ests.items()
               if e.status == tl.DIVERGED or (e.status == tl.CONVERGED and not e.is_zero())]
    if nonzero:
        return Verdict(NO, f"{', '.join(nonzero)} nonzero", names)
    if all(e.is_zero() for e in ests.values()):
        return Verdict(YES, f"{', '.join(names)} vanish", names)
    return Verdict(INCONCLUSIVE, "tail ladder did not settle", names)


@dataclass(frozen=True)
class DiagnosticsReport:
    pair: SpacePair
    tau: tl.TailEstimate
    sigma: tl.TailEstimate
    theta: tl.TailEstimate
    omega: tl.TailEstimate
    gamma: tl.TailEstimate
    eta: tl.TailEstimate
    tails: dict[str, tl.TailEstimate]
    extras: dict[str, tl.TailEstimate]
    bounded: Verdict
    compact: Verdict
    bounded_below: BelowVerdict | None = None

    def functional(self, name: str) -> tl.TailEstimate:
        if name in self.tails:
            return self.tails[name]
        if name in self.extras:
            return self.extras[name]
        return getattr(self, name)

    def to_dict(self) -> dict:
        out = {"pair": self.pair.label, "little": self.pair.little}
        for name in ("tau", "sigma", "theta", "omega", "gamma", "eta"):
            out[name] = getattr(self, name).to_dict()
        out.update({k: v.to_dict() for k, v in self.tails.items()})
        out["supplementary"] = {k: v.to_dict() for k, v in self.extras.items()}
        out["bounded"] = self.bounded.to_dict()
        out["compact"] = self.compact.to_dict()
        out["bounded_below"] = None if self.bounded_below is None else self.bounded_below.to_dict()
        return out


def classify(pair: SpacePair, psi: TreeFunction, tree: Tree | None = None) -> DiagnosticsReport:
    tabulated = isinstance(psi, Tabulated)
    f = {"tau": tau(psi, tree), "sigma": sigma(psi, tree), "theta": theta(psi, tree),
         "omega": omega(psi, tree), "gamma": gamma(psi, tree), "eta": eta(psi, tree)}
    tails = {k: tail_quantity(k, psi, tree) for k in TAIL_KINDS}
    extras = supplementary(psi, tree)
    below = None
    if pair.pair == "LwToL":
        bounded = _finite({"tau": f["tau"], "sigma": f["sigma"]}, tabulated)
        compact = _vanish({"A2": tails["A2"], "B2": tails["B2"]}, tabulated)
    elif pair.pair == "LToLw":
        bounded = _finite({"theta": f["theta"], "omega": f["omega"]}, tabulated)
        compact = _vanish({"A3": tails["A3"], "B3": tails["B3"]}, tabulated)
    elif pair.pair == "LwToLinf":
        bounded = _finite({"log_sup": extras["log_sup"]}, tabulated)
        compact = _vanish({"A4": tails["A4"]}, tabulated)
        below = bounded_below(psi, tree)
    else:
        compact = _vanish({"A3": tails["A3"]}, tabulated)
        if pair.little:
            # bounded into the little space iff |v||psi(v)| -> 0
            bounded = Verdict(compact.value, compact.reason, compact.quantities)
        else:
            bounded = _finite({"linear_sup": extras["linear_sup"]}, tabulated)
    if bounded.value == NO and compact.value != NO:
        compact = Verdict(NO, "operator is unbounded", compact.quantities)
    return DiagnosticsReport(pair, tails=tails, extras=extras, bounded=bounded, compact=compact,
                             bounded_below=below, **f)

"""Multiplication operators between Lipschitz, weighted Lipschitz and bounded
function spaces on rooted trees: symbol diagnostics, operator norm brackets,
essential norms and extremal test functions."""
from .diagnostics import PAIRS, SpacePair, classify
from .functions import Tabulated, norm, radial
from .io import ProblemSpec, parse_problem, realize
from .operators import (BracketInversionError, SearchConfig, UnboundedOperatorError, essential_norm_bracket,
                        isometry_defect, norm_bracket)
from .tree import Tree, build_explicit, build_homogeneous, build_spine
from .witnesses import WitnessSpec, make_witness

__all__ = [
    "PAIRS", "SpacePair", "classify", "Tabulated", "norm", "radial", "ProblemSpec", "parse_problem", "realize",
    "BracketInversionError", "SearchConfig", "UnboundedOperatorError", "essential_norm_bracket",
    "isometry_defect", "norm_bracket", "Tree", "build_explicit", "build_homogeneous", "build_spine",
    "WitnessSpec", "make_witness",
]
__version__ = "0.1.0"

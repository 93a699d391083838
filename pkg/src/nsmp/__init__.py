"""Exact tests of the non-symmetric strong multiplicity property (nSMP) and
classification of sign patterns that allow or require it."""

from __future__ import annotations

from .algebra import (
    Polynomial,
    RationalMatrix,
    char_poly,
    is_squarefree,
    nullspace,
    parse_matrix,
    parse_rational,
    poly_gcd,
    rank,
)
from .classifier import (
    Allow,
    Classification,
    RefutationBudget,
    Require,
    allows_nsmp,
    classify,
    classify_all,
    construct_distinct_realization,
    find_refutation,
    requires_nsmp,
)
from .constructions import build_figure_construction
from .digraph import (
    max_composite_cycle,
    recognize_cycle,
    recognize_hollow,
    recognize_proper_hessenberg,
    recognize_star,
    scc_decompose,
)
from .engine import (
    NsmpVerdict,
    Outcome,
    Property,
    check,
    check_via_blocks,
    star_witness,
    verify_witness,
)
from .patterns import (
    PatternTransform,
    Sign,
    SignPattern,
    SPattern,
    apply_transform,
    canonical_form,
    parse_pattern,
    parse_spattern,
    sample_realization,
)

__version__ = "0.1.0"

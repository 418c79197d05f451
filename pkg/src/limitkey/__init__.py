"""Exact engine for valuations on polynomial rings over valued fields.

The package computes truncated valuations, level functions, Newton polygons,
and cuts in finite-rank ordered abelian groups, and analyzes increasing
families of valuations to classify limit key polynomials.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .cuts import (
    BallCut,
    Classification,
    CutDescriptor,
    LabeledCut,
    SequenceCut,
    ValueSequence,
    ball_minus,
    ball_plus,
    cut_leq,
    cut_lt,
    principal_minus,
    principal_plus,
    sequence_cut,
    standard_cut_catalog,
)
from .family import (
    DEFAULT_HORIZON,
    BetaTable,
    ClassifyResult,
    Family,
    FamilyAnalysis,
    FamilyValidationError,
    HorizonInconclusive,
    analyze,
    beta_table,
    build_family,
    classify_BJ,
    defect,
    delta_cut,
    gamma_cut,
    invariance_subgroup,
    is_vb,
    minimal_lkp,
    polygon_rows,
    s_infinity,
    stability_certificate,
    verify_minimality,
)
from .fields import (
    CompositeRank2,
    MonomialField,
    PadicRationals,
    field_from_config,
)
from .ordgroup import (
    INFINITY,
    NEG_INFINITY,
    ConvexSubgroup,
    GroupElement,
    RankMismatch,
)
from .parse import ParseError, parse_element, parse_poly
from .polyring import Poly, linear_from_root
from .valuation import (
    LevelData,
    MonomialValuation,
    NewtonPolygon,
    level,
    nu_degree,
    s_set,
)

__all__ = [
    "BallCut",
    "BetaTable",
    "Classification",
    "ClassifyResult",
    "CompositeRank2",
    "ConvexSubgroup",
    "CutDescriptor",
    "DEFAULT_HORIZON",
    "Family",
    "FamilyAnalysis",
    "FamilyValidationError",
    "GroupElement",
    "HorizonInconclusive",
    "INFINITY",
    "LabeledCut",
    "LevelData",
    "MonomialField",
    "MonomialValuation",
    "NEG_INFINITY",
    "NewtonPolygon",
    "PadicRationals",
    "ParseError",
    "Poly",
    "RankMismatch",
    "SequenceCut",
    "ValueSequence",
    "__version__",
    "analyze",
    "ball_minus",
    "ball_plus",
    "beta_table",
    "build_family",
    "classify_BJ",
    "cut_leq",
    "cut_lt",
    "defect",
    "delta_cut",
    "field_from_config",
    "gamma_cut",
    "invariance_subgroup",
    "is_vb",
    "level",
    "linear_from_root",
    "minimal_lkp",
    "nu_degree",
    "parse_element",
    "parse_poly",
    "polygon_rows",
    "principal_minus",
    "principal_plus",
    "s_infinity",
    "s_set",
    "sequence_cut",
    "stability_certificate",
    "standard_cut_catalog",
    "verify_minimality",
]

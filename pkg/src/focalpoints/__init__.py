"""Exact zeta and Möbius transforms on focal points, with belief-function tooling."""

from .dst import (
    CommonalityFunction,
    ImplicabilityFunction,
    MassFunction,
    WeightFunction,
    WeightKind,
    belief,
    commonality_to_conjunctive_weights,
    commonality_to_mass,
    implicability_to_disjunctive_weights,
    implicability_to_mass,
    lossless_coarsen,
    mass_to_commonality,
    mass_to_implicability,
    plausibility,
    weights_to_commonality,
    weights_to_implicability,
    weights_to_mass,
)
from .focal import FocalPointSet, closure, efficient_mobius, efficient_mobius_multiplicative, extend_zeta
from .fusion import (
    DiscountSpec,
    cautious_combine,
    cautious_fusion,
    conjunctive_combine,
    dempster_combine,
    disjunctive_combine,
    discount,
    generalized_conjunctive_decomposition,
    project_mass,
)
from .lattice import SUBSET, SUPERSET, Frame, OrderDirection, SetFunction

__all__ = [
    "belief",
    "cautious_combine",
    "cautious_fusion",
    "closure",
    "commonality_to_conjunctive_weights",
    "commonality_to_mass",
    "CommonalityFunction",
    "conjunctive_combine",
    "dempster_combine",
    "discount",
    "DiscountSpec",
    "disjunctive_combine",
    "efficient_mobius",
    "efficient_mobius_multiplicative",
    "extend_zeta",
    "FocalPointSet",
    "Frame",
    "generalized_conjunctive_decomposition",
    "implicability_to_disjunctive_weights",
    "implicability_to_mass",
    "ImplicabilityFunction",
    "lossless_coarsen",
    "mass_to_commonality",
    "mass_to_implicability",
    "MassFunction",
    "OrderDirection",
    "plausibility",
    "project_mass",
    "SetFunction",
    "SUBSET",
    "SUPERSET",
    "WeightFunction",
    "WeightKind",
    "weights_to_commonality",
    "weights_to_implicability",
    "weights_to_mass",
]

__version__ = "0.1.0"

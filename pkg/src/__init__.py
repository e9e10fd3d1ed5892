"""
Category Lab - Source Package
"""

from src.config import Config
from src.zlin import FpAbGroup, MatrixZ, kernel_lattice, snf, solve_left, subquotient
from src.fincat import (
    LocalisedCategory,
    PathCategory,
    Quiver,
    compose_paths,
    hom_paths,
    localisation_functor,
    localised_hom,
    paper_quiver,
    reduce_word,
)
from src.addhull import AdditiveHull, AddMorphism, AddObject, add_compose, add_hom_group, biproduct
from src.freyd import AbelianHull, FreydCategory, abelian_hull, freyd_compose, freyd_hom, opposite
from src.serre import SerreQuotient, induced_functor, serre_generators, verify_equivalence
from src.lambda_ext import ext1_group, in_category_A, is_split, trivial_module

__all__ = [
    "Config",
    "FpAbGroup",
    "MatrixZ",
    "kernel_lattice",
    "snf",
    "solve_left",
    "subquotient",
    "LocalisedCategory",
    "PathCategory",
    "Quiver",
    "compose_paths",
    "hom_paths",
    "localisation_functor",
    "localised_hom",
    "paper_quiver",
    "reduce_word",
    "AdditiveHull",
    "AddMorphism",
    "AddObject",
    "add_compose",
    "add_hom_group",
    "biproduct",
    "AbelianHull",
    "FreydCategory",
    "abelian_hull",
    "freyd_compose",
    "freyd_hom",
    "opposite",
    "SerreQuotient",
    "induced_functor",
    "serre_generators",
    "verify_equivalence",
    "ext1_group",
    "in_category_A",
    "is_split",
    "trivial_module",
]

__version__ = "1.0.0"

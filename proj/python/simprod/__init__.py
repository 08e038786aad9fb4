"""Simple products of finite relational structures."""

from ._core import (
    Error,
    Formula,
    Language,
    SimLanguage,
    Structure,
    build_t_sim,
    build_tp2_witness,
    check_equivalent,
    check_sentences,
    check_tp2_array,
    decompose,
    isomorphic,
    product,
    realize,
    run_selftest,
    semi_simplify,
    standard_conversion,
    vc_dim,
)

__all__ = [
    "Error",
    "Formula",
    "Language",
    "SimLanguage",
    "Structure",
    "build_t_sim",
    "build_tp2_witness",
    "check_equivalent",
    "check_sentences",
    "check_tp2_array",
    "decompose",
    "isomorphic",
    "product",
    "realize",
    "run_selftest",
    "semi_simplify",
    "standard_conversion",
    "vc_dim",
]

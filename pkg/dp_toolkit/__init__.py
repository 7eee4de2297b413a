"""DP Toolkit

Checks NJp natural-deduction derivations in intuitionistic propositional logic and extracts
disjunction-property witnesses with checkable certificates, including the choice-vector
generalization and an executable Turing machine reduction.
"""

from .syntax import (
    Atom,
    Cedent,
    ChoiceVector,
    Conj,
    Disj,
    Formula,
    Impl,
    Sequent,
    BOTTOM,
    parse_formula,
    parse_sequent,
    print_formula,
    spd_enumerate,
    strengthen,
)
from .deduction import NjDerivation, check_derivation, graft, derive_dk
from .horn import CutDeduction, HornClause, HornClauseSet, horn_satisfiability, id_check
from .normalize import harrop_normalize, find_harrop_maximal
from .slash import slash_eval, build_ida_base
from .extract import ExtractionResult, extract_bm, extract_slash, extract_choice
from .oracle import ipc_valid
from .tmreduce import TmSpec, TmEncoding, encode, build_dp_derivation, decide, check_jl7, simulate
from .exceptions import (
    ToolkitError,
    BoundednessViolation,
    DerivationCheckError,
    FuelExhaustedError,
    PreconditionError,
)

__version__ = "0.3.0"
__author__ = "DP Toolkit Development Team"

__all__ = [
    "Atom",
    "Cedent",
    "ChoiceVector",
    "Conj",
    "Disj",
    "Formula",
    "Impl",
    "Sequent",
    "BOTTOM",
    "parse_formula",
    "parse_sequent",
    "print_formula",
    "spd_enumerate",
    "strengthen",
    "NjDerivation",
    "check_derivation",
    "graft",
    "derive_dk",
    "CutDeduction",
    "HornClause",
    "HornClauseSet",
    "horn_satisfiability",
    "id_check",
    "harrop_normalize",
    "find_harrop_maximal",
    "slash_eval",
    "build_ida_base",
    "ExtractionResult",
    "extract_bm",
    "extract_slash",
    "extract_choice",
    "ipc_valid",
    "TmSpec",
    "TmEncoding",
    "encode",
    "build_dp_derivation",
    "decide",
    "check_jl7",
    "simulate",
    "ToolkitError",
    "BoundednessViolation",
    "DerivationCheckError",
    "FuelExhaustedError",
    "PreconditionError",
]

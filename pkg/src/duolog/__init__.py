"""Toolkit for propositional logics combining a classical and an
intuitionistic conditional: parsing, Kripke-model evaluation, Hilbert proof
checking, translations, and bounded countermodel search."""

from .syntax import (
    And,
    Atom,
    BOT,
    Bottom,
    Box,
    ClsImp,
    Formula,
    FRAGMENTS,
    FragmentError,
    IntImp,
    Or,
    ParseError,
    Schema,
    atoms,
    check_fragment,
    depth,
    iff,
    imp_neg,
    instantiate,
    match_schema,
    parse_formula,
    parse_schema,
    render_formula,
    substitute,
    sup_neg,
)
from .semantics import (
    EvalError,
    KripkeModel,
    ModelError,
    VARIANTS,
    Variant,
    build_model,
    check_persistence,
    consequence_on_model,
    evaluate,
    holds_everywhere,
    load_model,
    model_from_dict,
    model_to_dict,
    truth_set,
    valid_on_model,
)
from .matrix3 import chain2_correspondence, eval3, valid3
from .systems import SYSTEMS, ProofSystem, get_system
from .proof import (
    DeductionError,
    ImpDerivation,
    Proof,
    ProofBuilder,
    ProofError,
    Verdict,
    check_proof,
    deduction_transform,
    dump_proof,
    load_proof,
    proof_from_dict,
    proof_to_dict,
    to_concrete_system,
)
from .corpus import CorpusError, build_corpus, load_corpus
from .translate import add_base, add_fresh_root_mpc, box_translate, sup_translate, truncate
from .search import (
    SearchBounds,
    SearchResult,
    bounded_consequence,
    bounded_valid,
    enumerate_models,
    models_isomorphic,
)
from .claims import ClaimResult, format_report, run_claims

__version__ = "0.1.0"

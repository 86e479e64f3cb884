"""Exact-arithmetic construction of ideal lattices in prime cyclotomic
fields, their invariants, and verification of finite-order isometries."""

from .cyclotomic import (
    CycElem,
    EmbeddingValue,
    RealElem,
    cyclotomic_polynomial,
    embedding_signs,
    eval_embeddings,
    minimal_poly_mu,
)
from .exact_linalg import (
    Matrix,
    SNFResult,
    charpoly,
    companion_matrix,
    congruent_diag,
    det,
    hnf_columns,
    hnf_rows,
    int_kernel,
    matrix_from_text,
    matrix_to_text,
    rational_inverse,
    snf,
)
from .ideal_lattice import (
    IdealLatticeSpec,
    Obstruction,
    PropertyReport,
    check_properties,
    ideal_gram,
    load_ideal_spec,
    unimodular_obstruction,
)
from .lattice_core import (
    DiscForm,
    GlueSpec,
    IsometryReport,
    Lattice,
    LatticeError,
    Overlattice,
    cyclic_q_matches,
    cyclotomic_isometry,
    direct_sum,
    discriminant_form,
    extend_isometry,
    invariant_report,
    invariant_triple,
    is_p_elementary,
    lattice_from_text,
    lattice_to_text,
    orthogonal_complement,
    overlattice,
    saturate,
    signature,
    standard_lattice,
    verify_isometry,
)
from .scenarios import CASES, CaseReport, fixtures_dir, period_checks, reproduce
from .unit_search import (
    SearchSpec,
    SearchTarget,
    Solution,
    UnitSystem,
    load_search_spec,
    load_units,
    search,
)

__version__ = "0.1.0"

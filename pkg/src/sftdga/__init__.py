"""Exact symbolic engine for the graded differential algebras attached to
contact data: supercommutative and Weyl variants with or without marked-point
variables, structural validation of differentials, bounded decision of
unit-exactness, and constructive projection/lift maps between the flavors."""

from .algebra import (
    Element,
    Flavor,
    Monomial,
    TruncationPolicy,
    embedding_defined,
    filtration_weight,
    mul_super,
    mul_weyl,
    normalize,
    projection_defined,
    truncate,
)
from .corpus import (
    CorpusEntry,
    bracket_images,
    corpus_entry,
    hbar_quotient,
    random_layered_spec,
    spec_from_hamiltonian,
    standard_corpus,
    toy_overtwisted,
    toy_tight,
)
from .differential import (
    CheckItem,
    CheckReport,
    DifferentialSpec,
    apply_d,
    check_d_squared,
    embed,
    full_check,
    project,
    restrict_spec,
    validate_structure,
    verify_chain_map,
)
from .errors import (
    BoundsError,
    FlavorError,
    LiftError,
    MissingImageError,
    ParseError,
    SeriesWeightError,
    SftdgaError,
    SignatureError,
    SignatureMismatchError,
    UnknownVariableError,
    WeylOrderError,
)
from .indexcalc import (
    PunctureProfile,
    combinatorial_factor,
    degree_drop_check,
    enumerate_admissible_profiles,
    moduli_dimension,
    profile_dimension,
)
from .signature import AlgebraSignature, OrbitRecord, TFormRecord, generator_degree
from .vanishing import (
    CONVENTIONS,
    SEMIDECISION_CAVEAT,
    ClassifyEntry,
    ClassifyReport,
    PrimitiveCertificate,
    SearchBounds,
    SearchResult,
    classify,
    find_unit_primitive,
    formal_inverse,
    lift_primitive,
    project_primitive,
    search_unit_primitive,
)

__version__ = "0.1.0"

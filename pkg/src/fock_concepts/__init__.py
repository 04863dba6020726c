"""Classicality diagnostics and two-sector Fock-space modeling of concept combinations."""

from .classicality import (
    ClassicalityVerdict,
    Condition,
    ConjunctionDiagnostics,
    KolmogorovAtoms,
    NegationDiagnostics,
    check_theorem1,
    check_theorem2,
    conjunction_diagnostics,
    construct_atoms_conjunction,
    construct_atoms_negation,
    feasibility_oracle,
    negation_diagnostics,
)
from .data import (
    Dataset,
    FittedRow,
    Kind,
    Label,
    MembershipRow,
    Pair,
    Rating,
    aggregate,
    load_bundled_dataset,
    load_bundled_fitted,
    parse_ratings,
    ratings_to_weight,
    simulate_ratings,
)
from .errors import (
    DegenerateAngleRequired,
    DegenerateMismatch,
    EmptyInput,
    FockConceptsError,
    Infeasible,
    InputError,
    InvalidRating,
    KeyMismatch,
    MalformedLine,
    MissingCombination,
    ModelError,
    NegativeAtom,
    NonOrthogonalInputs,
    OutOfRangeValue,
    UnknownLabel,
)
from .fock import (
    ConceptVectorPair,
    Connective,
    FockParameters,
    FockState,
    ModelRangeError,
    Projector,
    Regime,
    RegimeParams,
    Strategy,
    assemble_fock_state,
    attainable_range,
    build_vectors,
    eval_conjunction,
    eval_disjunction,
    evaluate_fock,
    fit_parameters,
    interference_term,
    projector_for_regime,
    regime_params,
    required_cosine,
    solve_theta,
)

__version__ = "0.1.0"

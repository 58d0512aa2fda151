"""Exact computer algebra for relative Sullivan models of fibrewise H-spaces.

The package represents a relative model B -> B (x) Lambda(W) and a
fibrewise comultiplication of models over exact rationals, and normalizes
them constructively: the `hopf` pipeline removes the differential from the
fiber generators, the `ls` pipeline reduces an associative comultiplication
to the standard one C0(w) = w + w'.  Each run emits either a
machine-checkable equivalence certificate or a precise obstruction class.
"""

from .algebra import (
    AlgebraError,
    GeneratorTable,
    GradedBasis,
    Generator,
    Monomial,
    Polynomial,
    basis_of_degree,
    multiply,
    normalize_monomial,
)
from .certify import (
    CertificateStep,
    ChangeOfGenerators,
    DGHomotopy,
    EquivalenceCertificate,
    conjugate,
    emit_triviality_report,
    evaluate_interval,
    invert,
    verify_equivalence,
    verify_homotopy,
)
from .dga import (
    CohomologySlice,
    EngineError,
    FreeCDGA,
    Morphism,
    Verdict,
    check_d_squared,
    check_dg_map,
    cohomology_in_degree,
    extend_leibniz,
    solve_preimage,
    split_cycles,
)
from .model import (
    AssociativityReport,
    Comultiplication,
    HypothesisReport,
    RelativeModel,
    associativity_defect,
    check_homotopy_associative,
    check_hypotheses,
    validate_comultiplication,
    validate_relative_model,
)
from .normalize import (
    InvalidModelError,
    NormalizationResult,
    Obstruction,
    hopf_normalize,
    hopf_stage_higher,
    hopf_stage_linear,
    ls_even_step,
    ls_normalize,
    ls_odd_step,
)
from .perturb import PerturbationError, PerturbationSpec, perturb
from .propsolver import (
    BasicFormError,
    MixedTensor,
    apply_map,
    basic_form_element,
    brute_force_solution_space,
    lemma_kernel,
    solve_basic_form,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"

"""Exact algebraic-number-theory kernels with a qubit-count estimator for
S-unit, class-group, and principal-ideal quantum algorithms."""

from .linalg import (
    HNFResult,
    IntMatrix,
    PrincipalLogError,
    RankError,
    RealMatrix,
    SNFResult,
    ascending_divisors,
    det,
    frobenius_norm,
    hnf,
    lll_reduce,
    principal_log,
    snf,
)
from .numberfield import (
    EmbeddingData,
    FieldElement,
    FieldSpecError,
    GroupPoint,
    NumberField,
    PrecisionError,
    completed_u,
    elem_inv,
    elem_mul,
    elem_norm,
    embed_element,
    field_discriminant,
    fundamental_unit_real_quadratic,
    parse_field,
    phi_map,
    poly_discriminant,
    real_quadratic_field,
    signature,
)
from .ideals import (
    FactoringEffortError,
    Factorization,
    FractionalIdeal,
    IdealError,
    IndexDivisorError,
    PrimeIdeal,
    class_group_bruteforce,
    factor_ideal,
    factor_integer,
    ideal_from_spec,
    ideal_inv,
    ideal_mul,
    ideal_norm,
    ideal_pow,
    is_s_unit,
    primes_above,
    prime_ideal_lattice,
    principal_ideal,
    reassemble,
    ring_of_integers,
    valuation,
)
from .elattice import (
    ELattice,
    LatticeError,
    LemmaReport,
    SContext,
    check_periodicity,
    dist_g_upper,
    dist_ideal,
    dist_quotient_group,
    dual_lambda1_lower,
    group_image,
    ideal_minkowski_basis,
    lattices_equal,
    oracle_lattice,
    quotient_elementary_divisors,
    verify_lemma1,
    verify_lemma2,
)
from .estimator import (
    CostModel,
    EstimatorError,
    HSPOracleParams,
    ResourceEstimate,
    SCGPReport,
    build_scgp,
    class_group_structure,
    estimate_Q,
    estimate_cgp,
    estimate_pip,
    estimate_sunit,
    estimate_unit,
    lip_log_bound,
    prime_power_count,
    register_counts,
)

__version__ = "0.1.0"

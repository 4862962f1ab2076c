//! Dense numeric cross-checks: amplitude vectors, local-rank fingerprints,
//! product vectors in two-qubit ranges and random local operators.

mod dense;
mod ilo;
mod range;

pub use dense::{
    expand, expand_capped, expand_exact, max_qubits, rank_fingerprint, DenseState, RankFingerprint,
    DEFAULT_MAX_QUBITS, DEFAULT_TOLERANCE,
};
pub use ilo::{
    apply_ops, apply_random_grouped_ilo, apply_random_ilo, condition_number, random_ops, IloKind,
    MAX_CONDITION,
};
pub use range::{
    classify_ghz_w, product_vector_quadratic, two_qubit_range_type, two_qubit_range_type_exact,
    GhzWClass, RangeType,
};

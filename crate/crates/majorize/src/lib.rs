//! Exact majorization machinery for finitely supported rational vectors
//! over countable index sets, with certificate-producing decisions,
//! doubly stochastic window operators, and order-preserving operator
//! analysis.
//!
//! Everything is computed in exact rational arithmetic; the only floating
//! point in the crate appears where a norm with a non-integer exponent
//! forces it, and such values are tagged [`NormValue::Approx`].
//!
//! # Orientation
//!
//! - [`sparse::SparseVec`] — finitely supported vectors keyed by
//!   [`label::IndexLabel`]; zeros are never stored.
//! - [`majorization::majorizes`] — decides the order and returns a
//!   [`MajorizationCertificate`]: a doubly stochastic witness mapping the
//!   larger vector onto the smaller, or a machine-checkable refutation.
//! - [`stochastic::WindowOperator`] — doubly stochastic operators acting
//!   on a finite window with an explicit identity or zero tail.
//! - [`preserver::PreserverSpec`] — weighted sums of disjoint-image
//!   relabelings, with [`preserver::build_preserver`] /
//!   [`preserver::decompose`] converting between the spec and its column
//!   form and structure checks characterizing when an operator has that
//!   form.
//! - [`cli`] — the file-driven front end behind the `majorize` binary.
//!
//! # Runnable examples
//!
//! Each major capability has a self-verifying example under `examples/`;
//! run one with `cargo run --example <name>`:
//!
//! - `check_majorization` — certified order decisions and refutations.
//! - `permutation_equivalence` — relabeling detection and level sets.
//! - `convex_test_functions` — hinge functions and order-monotone sums.
//! - `stochastic_operators` — validation, composition, contraction.
//! - `injections_and_conjugation` — index relabelings and exact
//!   intertwining.
//! - `preserver_roundtrip` — build, verify, and decompose an
//!   order-preserving operator.
//! - `shift_truncation` — truncated geometric pairs related by the shift.
//! - `sum_of_preservers` — how overlapping images break preservation.
//! - `l1_trace_operator` — order preservation without the structural
//!   form at exponent one.

pub mod cli;
pub mod demo;
pub mod format;
pub mod label;
pub mod majorization;
pub mod preserver;
pub mod scalar;
pub mod sparse;
pub mod stochastic;

pub use format::FormatError;
pub use label::IndexLabel;
pub use majorization::{
    build_ds_witness, check_convex_inequality, equivalent_by_permutation, majorizes,
    ConvexComparison, ConvexTestFn, ConvexTestFnError, HingeSide, MajorizationCertificate,
    MajorizationError, PermutationWitness, Refutation,
};
pub use preserver::{
    apply_preserver, build_preserver, check_columns_equivalent, check_row_structure, decompose,
    replication_norm, replication_operator, replication_spec, trace_operator_l1,
    verify_preserver_on_samples, OperatorColumns, PreservationFailure, PreservationReport,
    PreserverError, PreserverSpec, ViolationReport,
};
pub use scalar::{NormValue, PNorm, PNormError, Scalar, ScalarError};
pub use sparse::{Level, LevelSetPartition, SparseVec};
pub use stochastic::{
    contraction_check, ContractionReport, IndexInjection, InjectionError, OperatorError,
    StochasticVerdict, StochasticViolation, Tail, WindowOperator,
};

//! Highest-weight representations of `sl(2)` and three of its quantum
//! deformations: `U_q[sl(2)]` and the two-parameter algebras
//! `U^(1)_pq[sl(2)]` and `U^(2)_pq[sl(2)]`.
//!
//! The crate builds truncated ladder-operator matrices in the weight basis,
//! checks them against the defining relations, and locates the
//! finite-dimensional invariant subspaces of the `U^(2)_pq` modules, which
//! are infinite-dimensional for generic parameters.
//!
//! ```
//! use qdeform::{build_rep, verify_relations, DeformationVariant, Params, RhsConvention};
//!
//! let j = "1".parse().unwrap();
//! let params = Params::real(1.8, 1.3);
//! let rep = build_rep(DeformationVariant::TwoParamV2, j, &params, 40, RhsConvention::default())?;
//! let report = verify_relations(&rep, RhsConvention::default())?;
//! assert!(report.residual_ladder < 1e-10);
//! # Ok::<(), qdeform::Error>(())
//! ```

pub mod algebra;
pub mod error;
pub mod io;
pub mod numbers;
pub mod reducibility;
pub mod rep;
pub mod verify;

pub use algebra::{
    commutator_rhs, weight_rule, BracketArgument, DeformationVariant, ExponentOrientation,
    HighestWeight, Ladder, RhsConvention, Weight,
};
pub use error::{Error, Result};
pub use numbers::{pq_bracket, q_bracket, Params};
pub use reducibility::{
    extract_subrep, f_eval, integer_roots, locus_solve, FValue, LocusSolution, RootScanResult,
};
pub use rep::{
    build_rep, lower_coeff, monomial_norm, normalization_coeff, raise_coeff, RepMatrices,
    WeightState,
};
pub use verify::{
    hermiticity_report, resolve_convention, verify_relations, RadicandViolation,
    VerificationReport,
};

pub use num_complex::Complex64;

//! Fuzzy real numbers and the sequence spaces they generate.
//!
//! The crate is organised in layers:
//!
//! - [`fuzzy`] — fuzzy real numbers as piecewise-linear level sets, interval
//!   arithmetic on level cuts, the supremum metric `d`, a partial order, and
//!   a fuzzy absolute value;
//! - [`weighted`] — weight schemes `(u, v)` (generalized weighted means) and
//!   the transformed series `t_k = |u_k Σ_{i≤k} v_i d(X_i, B_i)|`;
//! - [`modulus`] — a closed algebra of modulus functions together with axiom
//!   checking and growth-rate estimation;
//! - [`spaces`] — exponent sequences, the scalar series
//!   `s_k = [f(t_k)]^{r_k}`, the sup/sum sequence metrics, and finite-horizon
//!   membership diagnostics for `l_p`, `c_0`, `c`, and `l_∞`;
//! - [`dsl`] — a small expression language for index-dependent scalars, fuzzy
//!   terms, and modulus functions, evaluated in both binary floating point
//!   and exact rational arithmetic;
//! - [`casefile`] — a line-oriented file format bundling a scheme, modulus,
//!   exponents, and named sequences;
//! - [`harness`] — a catalog of named constructions and counterexamples,
//!   each carrying machine-checkable claims, cross-validated against an
//!   exact-rational brute-force oracle and rendered into report trees.
//!
//! Finite-horizon verdicts produced by [`spaces::diagnose`] are numerical
//! surrogates for membership in the underlying sequence classes; they are
//! evidence, never proofs, and every report is stamped with the horizon and
//! tolerances that produced it.

pub mod casefile;
pub mod dsl;
pub mod fuzzy;
pub mod harness;
pub mod modulus;
pub mod spaces;
pub mod tol;
pub mod weighted;

pub use fuzzy::{AlphaLevel, FuzzyNumber, OrderVerdict};
pub use modulus::ModulusFn;
pub use spaces::{SpaceTarget, SpaceVerdict, Verdict};
pub use weighted::{TransformSeries, WeightScheme};

/// Error produced when a sequence generator fails at a particular index.
///
/// Generators are total over the index ranges used by the shipped catalog;
/// this error surfaces division by zero, domain errors, and similar failures
/// for user-supplied expressions, always naming the offending index.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("generator failed at k = {index}: {message}")]
pub struct GenError {
    pub index: u64,
    pub message: String,
}

impl GenError {
    pub fn new(index: u64, message: impl Into<String>) -> Self {
        GenError { index, message: message.into() }
    }
}

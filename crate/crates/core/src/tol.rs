//! Centralized numeric tolerances.
//!
//! Every comparison tolerance used by the library lives here so that the
//! trade-offs are visible in one place and tests can assert their ordering.

/// Absolute tolerance for comparing level-set endpoints (partial order,
/// equality of fuzzy numbers, duplicate-level merging).
///
/// Endpoints in the shipped constructions are O(1)–O(10⁶); 1e-12 absorbs a
/// few ulps of interval-arithmetic rounding while staying far below any
/// meaningful endpoint gap.
pub const ENDPOINT_ABS: f64 = 1e-12;

/// Tolerance for triangle-inequality checks on the metrics.
///
/// The sup metric over merged breakpoints is exact up to a handful of
/// rounding errors; 1e-9 leaves three orders of magnitude of headroom over
/// the worst accumulated error observed in the randomized suites.
pub const TRIANGLE: f64 = 1e-9;

/// Relative tolerance for agreement between the floating-point pipeline and
/// the exact-rational oracle on transformed series values.
pub const ORACLE_REL: f64 = 1e-12;

/// Tolerance for agreement between the breakpoint-based supremum metric and
/// a dense-grid brute force evaluation.
pub const DENSE_GRID: f64 = 1e-9;

/// Default plateau / oscillation tolerance for finite-horizon membership
/// diagnostics (see `spaces::DiagnoseConfig`).
pub const PLATEAU: f64 = 1e-3;

/// Default divergence witness: partial sums exceeding this multiple of the
/// first-quartile partial sum (with positive trend) are flagged as divergent.
pub const DIVERGENCE_FACTOR: f64 = 10.0;

/// Relative tolerance for matching a transformed series against an exactly
/// representable closed form evaluated in floating point.
///
/// Both sides are computed with a handful of correctly-rounded operations on
/// exactly representable integers, so they agree to a few ulps.
pub const CLOSED_FORM_REL: f64 = 1e-15;

/// Largest interval-arithmetic wobble the normalizing constructor will clamp
/// when rebuilding a level set from computed endpoints. Anything larger
/// indicates a logic error and is reported instead of being hidden.
pub const NORMALIZE_ABS: f64 = 1e-9;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerances_are_positive_and_ordered() {
        assert!(ENDPOINT_ABS > 0.0);
        assert!(ORACLE_REL > 0.0);
        assert!(CLOSED_FORM_REL > 0.0);
        // The coarse diagnostic tolerance must dominate the fine metric ones.
        assert!(PLATEAU > TRIANGLE);
        assert!(TRIANGLE > ENDPOINT_ABS);
        assert!(ORACLE_REL >= ENDPOINT_ABS);
        assert!(DIVERGENCE_FACTOR > 1.0);
    }
}

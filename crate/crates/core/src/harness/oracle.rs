//! Exact-rational recomputation of transform values, fully independent of
//! the floating-point pipeline.
//!
//! The oracle re-derives each `t_k = |u_k · Σ_{i ≤ k} v_i · d(X_i, 0̄)|`
//! from the generator expressions using [`BigRational`] arithmetic: support
//! endpoints are evaluated structurally (never through `f64`), the distance
//! to zero is the larger endpoint magnitude, and the prefix sum is carried
//! by an accumulator that only extends its denominator by the factor each
//! term actually requires. Comparisons against pipeline values happen in
//! rational arithmetic as well — an `f64` converts to a rational exactly,
//! so no rounding enters on the oracle side.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::dsl::{self, EvalError, EvalErrorKind, Expr};
use crate::weighted::TransformSeries;

use super::HarnessError;

/// What the oracle recomputes a sequence from.
pub enum OracleSource<'a> {
    /// A single generator expression.
    Expr(&'a Expr),
    /// The termwise product of two generator expressions; supports multiply
    /// as intervals (extremes over the four endpoint products).
    Product(&'a Expr, &'a Expr),
}

/// Outcome of one pipeline-versus-oracle sweep.
#[derive(Debug, Clone)]
pub struct Agreement {
    pub pass: bool,
    /// Largest relative deviation seen (infinite when the oracle value is
    /// zero but the pipeline value is not).
    pub worst_rel: f64,
    pub worst_k: u64,
    pub checked: u64,
}

/// A reduced rational from small integers; panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// The exact support interval `[lo, hi]` of a generator expression at
/// index `k`. Mirrors the pipeline's fuzzy evaluation structurally:
/// crisp and triangular constructors, selections between them, and bare
/// scalars (which embed as crisp numbers). Anything else is rejected, as
/// the pipeline rejects it too.
pub fn exact_support(e: &Expr, k: u64) -> Result<(BigRational, BigRational), EvalError> {
    match e {
        Expr::Crisp(inner) => {
            let v = dsl::eval_scalar_exact(inner, k)?;
            Ok((v.clone(), v))
        }
        Expr::Tri(a, b, c) => {
            let lo = dsl::eval_scalar_exact(a, k)?;
            let mid = dsl::eval_scalar_exact(b, k)?;
            let hi = dsl::eval_scalar_exact(c, k)?;
            if lo > mid || mid > hi {
                return Err(EvalError {
                    k,
                    kind: EvalErrorKind::BadTriangle {
                        a: lo.to_f64().unwrap_or(f64::NAN),
                        b: mid.to_f64().unwrap_or(f64::NAN),
                        c: hi.to_f64().unwrap_or(f64::NAN),
                    },
                });
            }
            Ok((lo, hi))
        }
        Expr::Select { pred, then, otherwise } => {
            exact_support(if dsl::pred_holds(*pred, k) { then } else { otherwise }, k)
        }
        scalar => {
            let v = dsl::eval_scalar_exact(scalar, k)?;
            Ok((v.clone(), v))
        }
    }
}

fn support_of(source: &OracleSource<'_>, k: u64) -> Result<(BigRational, BigRational), EvalError> {
    match source {
        OracleSource::Expr(e) => exact_support(e, k),
        OracleSource::Product(a, b) => {
            let (alo, ahi) = exact_support(a, k)?;
            let (blo, bhi) = exact_support(b, k)?;
            let candidates = [&alo * &blo, &alo * &bhi, &ahi * &blo, &ahi * &bhi];
            let mut lo = candidates[0].clone();
            let mut hi = candidates[0].clone();
            for c in &candidates[1..] {
                if *c < lo {
                    lo = c.clone();
                }
                if *c > hi {
                    hi = c.clone();
                }
            }
            Ok((lo, hi))
        }
    }
}

/// `d(X, 0̄)` for a support interval: the metric over nested cuts is
/// attained at the outermost level, so it is the larger endpoint magnitude.
pub fn exact_distance(lo: &BigRational, hi: &BigRational) -> BigRational {
    let (alo, ahi) = (lo.abs(), hi.abs());
    if alo > ahi {
        alo
    } else {
        ahi
    }
}

/// Euclid's algorithm on nonnegative inputs.
fn gcd(mut a: BigInt, mut b: BigInt) -> BigInt {
    while !b.is_zero() {
        let r = &a % &b;
        a = b;
        b = r;
    }
    a
}

/// An unreduced rational prefix-sum accumulator. Incoming terms arrive
/// reduced with small denominators, so each addition extends the running
/// denominator only by the factor the term's denominator actually
/// contributes (the lcm step, found with one cheap `mod`-then-gcd on small
/// operands). Skipping full normalization keeps every addition linear in
/// the accumulator's length instead of paying a large-gcd reduction per
/// step.
struct Accumulator {
    num: BigInt,
    /// Always positive.
    den: BigInt,
}

impl Accumulator {
    fn zero() -> Self {
        Accumulator { num: BigInt::from(0), den: BigInt::from(1) }
    }

    fn add(&mut self, term: &BigRational) {
        let (tn, td) = (term.numer(), term.denom());
        // gcd(den, td) == gcd(den mod td, td); the mod keeps both gcd
        // operands no larger than the (small) term denominator.
        let g = gcd(td.clone(), &self.den % td);
        let growth = td / &g;
        let scale = &self.den / &g;
        self.num = &self.num * &growth + tn * &scale;
        self.den = &self.den * &growth;
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

/// `|u_k · acc|` as an unreduced nonnegative pair.
fn scaled_abs(acc: &Accumulator, u: &BigRational) -> (BigInt, BigInt) {
    let num = (&acc.num * u.numer()).abs();
    let den = &acc.den * u.denom();
    (num, den)
}

/// A nonnegative rational `num/den` as `f64`, robust to operands far
/// beyond `f64` range: the quotient is computed in integers under a
/// 128-bit left shift, then scaled back.
fn fraction_to_f64(num: &BigInt, den: &BigInt) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let shifted: BigInt = (num << 128_u32) / den;
    shifted.to_f64().map_or(f64::INFINITY, |q| q / 2f64.powi(128))
}

/// Sweeps `k` from the series start to `check_horizon`, recomputing each
/// `t_k` exactly and comparing the stored pipeline value against it in
/// rational arithmetic. Passes when every index satisfies
/// `|pipeline − exact| ≤ rel_tol · exact`, with an exact-zero oracle value
/// requiring an exactly zero pipeline value.
pub fn compare_series(
    ts: &TransformSeries,
    u: &Expr,
    v: &Expr,
    source: OracleSource<'_>,
    check_horizon: u64,
    rel_tol: f64,
) -> Result<Agreement, HarnessError> {
    let tol = BigRational::from_float(rel_tol)
        .ok_or_else(|| HarnessError::Unsupported(format!("non-finite tolerance {rel_tol}")))?;
    let mut acc = Accumulator::zero();
    let mut worst_rel = 0.0_f64;
    let mut worst_k = ts.start();
    let mut pass = true;
    let mut checked = 0_u64;
    for k in ts.start()..=check_horizon.min(ts.horizon()) {
        let (lo, hi) = support_of(&source, k)?;
        let vk = dsl::eval_scalar_exact(v, k)?;
        acc.add(&(vk * exact_distance(&lo, &hi)));
        let uk = dsl::eval_scalar_exact(u, k)?;
        let (exact_num, exact_den) = scaled_abs(&acc, &uk);

        let pipe = BigRational::from_float(ts.t(k))
            .ok_or_else(|| HarnessError::Unsupported(format!("non-finite t at k = {k}")))?;
        checked += 1;

        if exact_num.is_zero() {
            if !pipe.is_zero() {
                pass = false;
                worst_rel = f64::INFINITY;
                worst_k = k;
            }
            continue;
        }
        // |pipe − exact| ≤ tol · exact, cross-multiplied to integers:
        // tol_den · |P_n·E_d − E_n·P_d| ≤ tol_num · E_n · P_d.
        let diff = (pipe.numer() * &exact_den - &exact_num * pipe.denom()).abs();
        let lhs = tol.denom() * &diff;
        let rhs = tol.numer() * &exact_num * pipe.denom();
        if lhs > rhs {
            pass = false;
        }
        let rel = fraction_to_f64(&diff, &(&exact_num * pipe.denom()));
        if rel > worst_rel {
            worst_rel = rel;
            worst_k = k;
        }
    }
    Ok(Agreement { pass, worst_rel, worst_k, checked })
}

/// The exact value of `t_k` at a single index, as a reduced rational.
pub fn exact_value_at(
    u: &Expr,
    v: &Expr,
    source: OracleSource<'_>,
    start: u64,
    k: u64,
) -> Result<BigRational, EvalError> {
    let mut acc = Accumulator::zero();
    for i in start..=k {
        let (lo, hi) = support_of(&source, i)?;
        let vi = dsl::eval_scalar_exact(v, i)?;
        acc.add(&(vi * exact_distance(&lo, &hi)));
    }
    let uk = dsl::eval_scalar_exact(u, k)?;
    if acc.is_zero() {
        return Ok(BigRational::zero());
    }
    let (num, den) = scaled_abs(&acc, &uk);
    Ok(BigRational::new(num, den))
}

/// Every exact value `t_start, …, t_horizon` as reduced rationals, from a
/// single incremental sweep (`O(horizon)` accumulator steps in total).
pub fn exact_values(
    u: &Expr,
    v: &Expr,
    source: OracleSource<'_>,
    start: u64,
    horizon: u64,
) -> Result<Vec<BigRational>, EvalError> {
    let mut acc = Accumulator::zero();
    let mut out = Vec::with_capacity(horizon.saturating_sub(start) as usize + 1);
    for k in start..=horizon {
        let (lo, hi) = support_of(&source, k)?;
        let vk = dsl::eval_scalar_exact(v, k)?;
        acc.add(&(vk * exact_distance(&lo, &hi)));
        if acc.is_zero() {
            out.push(BigRational::zero());
        } else {
            let uk = dsl::eval_scalar_exact(u, k)?;
            let (num, den) = scaled_abs(&acc, &uk);
            out.push(BigRational::new(num, den));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn expr(text: &str) -> Expr {
        dsl::parse_expr(text).expect("test expression parses")
    }

    #[test]
    fn accumulator_matches_reduced_arithmetic() {
        let mut acc = Accumulator::zero();
        let mut reference = BigRational::zero();
        for k in 1_i64..=50 {
            let term = ratio(k % 7 - 3, k);
            acc.add(&term);
            reference += &term;
        }
        let got = BigRational::new(acc.num.clone(), acc.den.clone());
        assert_eq!(got, reference);
    }

    #[test]
    fn accumulator_denominator_stays_at_lcm_scale() {
        // Harmonic terms 1/k for k ≤ 100: the unreduced denominator must
        // match lcm(1..100), not the 158-digit factorial-scale product.
        let mut acc = Accumulator::zero();
        let mut lcm = BigInt::one();
        for k in 1_i64..=100 {
            acc.add(&ratio(1, k));
            let g = gcd(BigInt::from(k), &lcm % BigInt::from(k));
            lcm = lcm * (BigInt::from(k) / g);
        }
        assert_eq!(acc.den, lcm);
    }

    #[test]
    fn support_of_product_takes_interval_extremes() {
        let a = expr("tri(-2, 0, 3)");
        let b = expr("tri(-5, 0, 1)");
        let (lo, hi) = support_of(&OracleSource::Product(&a, &b), 1).unwrap();
        // Extremes of {10, -2, -15, 3}.
        assert_eq!(lo, ratio(-15, 1));
        assert_eq!(hi, ratio(10, 1));
    }

    #[test]
    fn select_branches_exactly() {
        let e = expr("select(k even, crisp(1/k), crisp(0))");
        let (lo_even, hi_even) = exact_support(&e, 4).unwrap();
        assert_eq!(lo_even, ratio(1, 4));
        assert_eq!(hi_even, ratio(1, 4));
        let (lo_odd, _) = exact_support(&e, 5).unwrap();
        assert!(lo_odd.is_zero());
    }

    #[test]
    fn fraction_conversion_handles_huge_operands() {
        // A ratio near 1e-17 whose parts individually overflow f64.
        let big = BigInt::from(10_u32).pow(400_u32);
        let num = &big * BigInt::from(3);
        let den = &big * BigInt::from(10_u32).pow(17_u32) * BigInt::from(2);
        let got = fraction_to_f64(&num, &den);
        assert!((got - 1.5e-17).abs() < 1e-25, "got {got}");
    }

    #[test]
    fn exact_value_matches_hand_computation() {
        // u = 1/k, v = 1, X = crisp(1): t_k = 1 exactly.
        let u = expr("1/k");
        let v = expr("1");
        let x = expr("crisp(1)");
        let got = exact_value_at(&u, &v, OracleSource::Expr(&x), 1, 17).unwrap();
        assert_eq!(got, ratio(1, 1));
    }

    #[test]
    fn exact_sweep_matches_per_index_values() {
        // A square-counting mean: t_k = floor(sqrt(k)) / k exactly.
        let u = expr("1/k");
        let v = expr("1");
        let x = expr("select(k is_square, crisp(1), crisp(0))");
        let values = exact_values(&u, &v, OracleSource::Expr(&x), 1, 50).unwrap();
        assert_eq!(values.len(), 50);
        for (i, got) in values.iter().enumerate() {
            let k = i as u64 + 1;
            let expected = BigRational::new(BigInt::from(k.isqrt()), BigInt::from(k));
            assert_eq!(*got, expected, "k = {k}");
        }
    }
}

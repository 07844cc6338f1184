//! Deterministic random inputs shared by the property suites and the
//! acceptance tests: piecewise-linear fuzzy numbers, weight tables, and
//! exponent tables, all drawn from a caller-supplied stream.

use rand::Rng;

use crate::fuzzy::{AlphaLevel, FuzzyNumber};

/// A random piecewise-linear fuzzy number with 2 to 5 alpha levels and
/// support inside roughly `[-8, 8]`. Levels are built core-outward, so
/// the nesting invariant holds by construction rather than by rejection.
pub fn random_fuzzy(rng: &mut impl Rng) -> FuzzyNumber {
    let interior = rng.gen_range(0_usize..=3);
    let mut alphas = vec![0.0_f64, 1.0];
    while alphas.len() < 2 + interior {
        let a = rng.gen_range(0.05_f64..0.95);
        if alphas.iter().all(|&b| (b - a).abs() > 0.02) {
            alphas.push(a);
        }
    }
    alphas.sort_by(f64::total_cmp);

    let core_lo = rng.gen_range(-4.0_f64..4.0);
    let core_hi = core_lo + rng.gen_range(0.0_f64..1.5);
    let mut lo = core_lo;
    let mut hi = core_hi;
    let mut levels = vec![AlphaLevel::new(1.0, lo, hi)];
    for &alpha in alphas.iter().rev().skip(1) {
        lo -= rng.gen_range(0.0_f64..1.5);
        hi += rng.gen_range(0.0_f64..1.5);
        levels.push(AlphaLevel::new(alpha, lo, hi));
    }
    levels.reverse();
    FuzzyNumber::from_levels(levels).expect("core-outward levels always nest")
}

/// A weight magnitude in `[0.1, limit]`, log-uniform so small and large
/// weights are equally represented.
pub fn random_weight(rng: &mut impl Rng, limit: f64) -> f64 {
    let lo = 0.1_f64.ln();
    let hi = limit.ln();
    rng.gen_range(lo..=hi).exp()
}

/// An exponent in `[0.5, 2.0]`.
pub fn random_exponent(rng: &mut impl Rng) -> f64 {
    rng.gen_range(0.5_f64..=2.0)
}

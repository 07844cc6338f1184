//! Weight schemes and the weighted-mean transform of fuzzy sequences.
//!
//! A scheme is a pair of scalar generators `(u, v)` together with a start
//! index. It induces the lower-triangular band matrix
//! `g[n][k] = u_n · v_k` for `start ≤ k ≤ n` (0 outside the band), and the
//! transformed series of a fuzzy sequence `X` about a base sequence `B`:
//!
//! ```text
//! t_k = | u_k · Σ_{i=start..k}  v_i · d(X_i, B_i) |
//! ```
//!
//! The running sum is a single left-to-right prefix pass, so evaluation is
//! deterministic and costs one generator call per index. The classical
//! Cesàro mean is `u_k = 1/k, v_k = 1`; a weighted mean uses
//! `u_k = 1/(v_1 + … + v_k)` for positive `v`.

use std::fmt;
use std::io;
use std::sync::Arc;

use thiserror::Error;

use crate::fuzzy::{self, FuzzyNumber};
use crate::GenError;

/// Shared fallible scalar generator `k ↦ r`.
pub type ScalarFn = Arc<dyn Fn(u64) -> Result<f64, GenError> + Send + Sync>;
/// Shared fallible fuzzy-sequence generator `k ↦ X_k`.
pub type FuzzyFn = Arc<dyn Fn(u64) -> Result<FuzzyNumber, GenError> + Send + Sync>;

/// Wraps an infallible closure as a [`ScalarFn`].
pub fn scalar_fn(f: impl Fn(u64) -> f64 + Send + Sync + 'static) -> ScalarFn {
    Arc::new(move |k| Ok(f(k)))
}

/// Wraps an infallible closure as a [`FuzzyFn`].
pub fn fuzzy_fn(f: impl Fn(u64) -> FuzzyNumber + Send + Sync + 'static) -> FuzzyFn {
    Arc::new(move |k| Ok(f(k)))
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TransformError {
    #[error("horizon {horizon} is below the start index {start}")]
    HorizonBelowStart { start: u64, horizon: u64 },
    #[error(transparent)]
    Gen(#[from] GenError),
}

/// A generalized weighted-mean scheme `(u, v)` with a fixed start index.
#[derive(Clone)]
pub struct WeightScheme {
    u: ScalarFn,
    v: ScalarFn,
    start: u64,
    description: String,
}

impl fmt::Debug for WeightScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WeightScheme")
            .field("description", &self.description)
            .field("start", &self.start)
            .finish_non_exhaustive()
    }
}

impl WeightScheme {
    pub fn new(description: impl Into<String>, start: u64, u: ScalarFn, v: ScalarFn) -> Self {
        WeightScheme { u, v, start, description: description.into() }
    }

    /// Cesàro mean: `u_k = 1/k`, `v_k = 1`, starting at 1.
    pub fn cesaro() -> Self {
        WeightScheme::new(
            "cesaro: u = 1/k, v = 1",
            1,
            scalar_fn(|k| 1.0 / k as f64),
            scalar_fn(|_| 1.0),
        )
    }

    /// Weighted mean for a materialized positive weight vector:
    /// `v_k = weights[k - 1]`, `u_k = 1/(v_1 + … + v_k)`, starting at 1.
    ///
    /// # Panics
    /// If `weights` is empty or contains a non-positive or non-finite entry.
    pub fn weighted_mean(weights: Vec<f64>) -> Self {
        assert!(!weights.is_empty(), "weighted mean needs at least one weight");
        assert!(
            weights.iter().all(|w| w.is_finite() && *w > 0.0),
            "weighted mean requires positive finite weights"
        );
        let mut prefix = Vec::with_capacity(weights.len());
        let mut sum = 0.0;
        for w in &weights {
            sum += w;
            prefix.push(sum);
        }
        let weights = Arc::new(weights);
        let prefix = Arc::new(prefix);
        let n = weights.len() as u64;
        let w = Arc::clone(&weights);
        let v: ScalarFn = Arc::new(move |k| {
            if k == 0 || k > n {
                return Err(GenError::new(k, format!("weight index outside 1..={n}")));
            }
            Ok(w[(k - 1) as usize])
        });
        let u: ScalarFn = Arc::new(move |k| {
            if k == 0 || k > n {
                return Err(GenError::new(k, format!("weight index outside 1..={n}")));
            }
            Ok(1.0 / prefix[(k - 1) as usize])
        });
        WeightScheme::new("weighted mean of materialized weights", 1, u, v)
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn start_index(&self) -> u64 {
        self.start
    }

    pub fn u(&self, k: u64) -> Result<f64, GenError> {
        (self.u)(k)
    }

    pub fn v(&self, k: u64) -> Result<f64, GenError> {
        (self.v)(k)
    }

    /// Band-matrix entry `g[n][k] = u_n · v_k` for `start ≤ k ≤ n`, and 0
    /// outside the band.
    pub fn matrix_entry(&self, n: u64, k: u64) -> Result<f64, GenError> {
        if k < self.start || k > n {
            return Ok(0.0);
        }
        Ok(self.u(n)? * self.v(k)?)
    }
}

/// A materialized transformed series `t_start, …, t_horizon`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformSeries {
    start: u64,
    values: Vec<f64>,
}

impl TransformSeries {
    pub fn start(&self) -> u64 {
        self.start
    }

    pub fn horizon(&self) -> u64 {
        self.start + self.values.len() as u64 - 1
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The value `t_k`.
    ///
    /// # Panics
    /// If `k` is outside `start..=horizon`.
    pub fn t(&self, k: u64) -> f64 {
        assert!(
            k >= self.start && k <= self.horizon(),
            "index {k} outside {}..={}",
            self.start,
            self.horizon()
        );
        self.values[(k - self.start) as usize]
    }

    /// Values in index order, aligned with `start..=horizon`.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.values.iter().enumerate().map(move |(i, &t)| (self.start + i as u64, t))
    }

    /// Writes the series as CSV with header `k,t` (17 significant digits).
    pub fn write_csv(&self, mut w: impl io::Write) -> io::Result<()> {
        writeln!(w, "k,t")?;
        for (k, t) in self.iter() {
            writeln!(w, "{k},{t:.16e}")?;
        }
        Ok(())
    }
}

/// Streaming core: folds `t_k` left to right over distance values supplied
/// by `dist`, calling `sink(k, t_k)` for every `k` in `start..=horizon`.
pub fn transform_distances_with(
    scheme: &WeightScheme,
    horizon: u64,
    mut dist: impl FnMut(u64) -> Result<f64, GenError>,
    mut sink: impl FnMut(u64, f64),
) -> Result<(), TransformError> {
    let start = scheme.start;
    if horizon < start {
        return Err(TransformError::HorizonBelowStart { start, horizon });
    }
    // Neumaier-compensated running sum: the weighted prefix sums feed closed-form
    // and cross-implementation comparisons at tolerances near machine epsilon, so
    // the accumulator must not lose low-order bits over long horizons. When every
    // partial sum is exactly representable the compensation term stays zero and
    // the result is bit-identical to plain summation.
    let mut running = 0.0_f64;
    let mut compensation = 0.0_f64;
    for k in start..=horizon {
        let term = scheme.v(k)? * dist(k)?;
        let updated = running + term;
        if running.abs() >= term.abs() {
            compensation += (running - updated) + term;
        } else {
            compensation += (term - updated) + running;
        }
        running = updated;
        sink(k, (scheme.u(k)? * (running + compensation)).abs());
    }
    Ok(())
}

fn collect(
    scheme: &WeightScheme,
    horizon: u64,
    dist: impl FnMut(u64) -> Result<f64, GenError>,
) -> Result<TransformSeries, TransformError> {
    let capacity = horizon.saturating_sub(scheme.start).saturating_add(1) as usize;
    let mut values = Vec::with_capacity(capacity);
    transform_distances_with(scheme, horizon, dist, |_, t| values.push(t))?;
    Ok(TransformSeries { start: scheme.start, values })
}

/// Transformed series of `seq` about the crisp zero:
/// `t_k = |u_k Σ v_i d(X_i, 0̄)|`.
pub fn transform(
    seq: &FuzzyFn,
    scheme: &WeightScheme,
    horizon: u64,
) -> Result<TransformSeries, TransformError> {
    collect(scheme, horizon, |i| Ok(seq(i)?.distance_to_zero()))
}

/// Transformed series about a fixed base: `t_k = |u_k Σ v_i d(X_i, B)|`.
pub fn transform_about(
    seq: &FuzzyFn,
    base: &FuzzyNumber,
    scheme: &WeightScheme,
    horizon: u64,
) -> Result<TransformSeries, TransformError> {
    collect(scheme, horizon, |i| Ok(fuzzy::distance(&seq(i)?, base)))
}

/// Transformed series of the pairwise distances `d(X_i, Y_i)`; this is the
/// inner series of the sequence-space metrics.
pub fn transform_pairwise(
    xs: &FuzzyFn,
    ys: &FuzzyFn,
    scheme: &WeightScheme,
    horizon: u64,
) -> Result<TransformSeries, TransformError> {
    collect(scheme, horizon, |i| Ok(fuzzy::distance(&xs(i)?, &ys(i)?)))
}

/// Streaming variant of [`transform`] for horizons where materializing the
/// series is unnecessary; `sink` receives `(k, t_k)` in index order.
pub fn transform_stream(
    seq: &FuzzyFn,
    scheme: &WeightScheme,
    horizon: u64,
    sink: impl FnMut(u64, f64),
) -> Result<(), TransformError> {
    transform_distances_with(scheme, horizon, |i| Ok(seq(i)?.distance_to_zero()), sink)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tol;

    fn crisp(r: f64) -> FuzzyNumber {
        FuzzyNumber::crisp(r).unwrap()
    }

    fn tri(a: f64, b: f64, c: f64) -> FuzzyNumber {
        FuzzyNumber::triangular(a, b, c).unwrap()
    }

    #[test]
    fn cesaro_matrix_rows_sum_to_one() {
        let scheme = WeightScheme::cesaro();
        for n in 1..=200u64 {
            let mut row = 0.0;
            for k in 0..=n + 3 {
                row += scheme.matrix_entry(n, k).unwrap();
            }
            assert!((row - 1.0).abs() <= tol::ENDPOINT_ABS, "row {n} sums to {row}");
        }
        // Outside the band the entry is exactly zero.
        assert_eq!(scheme.matrix_entry(3, 4).unwrap(), 0.0);
        assert_eq!(scheme.matrix_entry(3, 0).unwrap(), 0.0);
    }

    #[test]
    fn cesaro_transform_of_a_constant_sequence_is_constant() {
        let seq = fuzzy_fn(|_| crisp(1.0));
        let ts = transform(&seq, &WeightScheme::cesaro(), 50).unwrap();
        assert_eq!(ts.start(), 1);
        assert_eq!(ts.horizon(), 50);
        for (_, t) in ts.iter() {
            assert!((t - 1.0).abs() <= tol::ENDPOINT_ABS);
        }
    }

    #[test]
    fn square_indicator_series_matches_counting_closed_form() {
        // X_i = 1̄ at perfect squares, 0̄ otherwise, with the Cesàro scheme:
        // t_k = ⌊√k⌋ / k. At k = 10 that is 3/10.
        let seq = fuzzy_fn(|k| {
            let r = k.isqrt();
            if r * r == k {
                crisp(1.0)
            } else {
                crisp(0.0)
            }
        });
        let ts = transform(&seq, &WeightScheme::cesaro(), 1000).unwrap();
        // The pipeline computes (1/10)·3 in two rounding steps, which lands
        // one ulp above the correctly rounded 3/10.
        assert!((ts.t(10) - 0.3).abs() <= f64::EPSILON);
        for (k, t) in ts.iter() {
            let expected = k.isqrt() as f64 / k as f64;
            let err = (t - expected).abs();
            assert!(err <= tol::CLOSED_FORM_REL * expected.max(1.0), "k = {k}: {t} vs {expected}");
        }
    }

    #[test]
    fn quartic_scheme_example_value() {
        // u_k = 1/k⁴, v_i = 1/i, X_i = [-i², 0, i²]:
        // t_k = (1/k⁴) Σ i = (1/2)(1/k² + 1/k³), so t_10 = 0.0055.
        let scheme = WeightScheme::new(
            "u = 1/k^4, v = 1/k",
            1,
            scalar_fn(|k| {
                let kf = k as f64;
                1.0 / (kf * kf * kf * kf)
            }),
            scalar_fn(|k| 1.0 / k as f64),
        );
        let seq = fuzzy_fn(|k| {
            let s = (k * k) as f64;
            tri(-s, 0.0, s)
        });
        let ts = transform(&seq, &scheme, 100).unwrap();
        let t10 = ts.t(10);
        assert!((t10 - 0.0055).abs() <= 1e-15, "t_10 = {t10}");
        for (k, t) in ts.iter() {
            let kf = k as f64;
            let expected = 0.5 * (1.0 / (kf * kf) + 1.0 / (kf * kf * kf));
            assert!(
                (t - expected).abs() <= tol::CLOSED_FORM_REL.max(1e-15) * expected,
                "k = {k}: {t} vs {expected}"
            );
        }
    }

    #[test]
    fn transform_is_homogeneous_in_the_distances() {
        let seq = fuzzy_fn(|k| tri(-(1.0 / k as f64), 0.0, 2.0 / k as f64));
        let scaled = fuzzy_fn(|k| tri(-(1.0 / k as f64), 0.0, 2.0 / k as f64).scale(2.5));
        let scheme = WeightScheme::cesaro();
        let a = transform(&seq, &scheme, 200).unwrap();
        let b = transform(&scaled, &scheme, 200).unwrap();
        for ((_, ta), (k, tb)) in a.iter().zip(b.iter()) {
            assert!((tb - 2.5 * ta).abs() <= 1e-12 * tb.abs().max(1.0), "k = {k}");
        }
    }

    #[test]
    fn prefix_consistency_across_horizons() {
        let seq = fuzzy_fn(|k| crisp(1.0 / k as f64));
        let scheme = WeightScheme::cesaro();
        let short = transform(&seq, &scheme, 100).unwrap();
        let long = transform(&seq, &scheme, 350).unwrap();
        assert_eq!(short.values(), &long.values()[..100]);
    }

    #[test]
    fn transform_about_a_base_uses_pairwise_distance() {
        // Constant sequence equal to the base: every t_k is zero.
        let seq = fuzzy_fn(|_| tri(0.0, 1.0, 2.0));
        let ts = transform_about(&seq, &tri(0.0, 1.0, 2.0), &WeightScheme::cesaro(), 40).unwrap();
        assert!(ts.values().iter().all(|&t| t == 0.0));
        // Against the zero base this reduces to `transform`.
        let a = transform_about(&seq, &FuzzyNumber::zero(), &WeightScheme::cesaro(), 40).unwrap();
        let b = transform(&seq, &WeightScheme::cesaro(), 40).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn weighted_mean_output_lies_between_distance_extremes() {
        let weights = vec![0.5, 2.0, 1.25, 3.0, 0.75, 1.0, 2.5];
        let scheme = WeightScheme::weighted_mean(weights.clone());
        let dists = [3.0, 1.0, 4.0, 1.5, 5.0, 9.0, 2.0];
        let seq = fuzzy_fn(move |k| crisp(dists[(k - 1) as usize]));
        let ts = transform(&seq, &scheme, weights.len() as u64).unwrap();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (k, t) in ts.iter() {
            lo = lo.min(dists[(k - 1) as usize]);
            hi = hi.max(dists[(k - 1) as usize]);
            assert!(
                t >= lo - tol::ENDPOINT_ABS && t <= hi + tol::ENDPOINT_ABS,
                "t_{k} = {t} outside [{lo}, {hi}]"
            );
        }
    }

    #[test]
    fn generator_failures_carry_the_index() {
        let seq: FuzzyFn = Arc::new(|k| {
            if k == 7 {
                Err(GenError::new(k, "synthetic failure"))
            } else {
                Ok(FuzzyNumber::zero())
            }
        });
        let err = transform(&seq, &WeightScheme::cesaro(), 10).unwrap_err();
        match err {
            TransformError::Gen(g) => assert_eq!(g.index, 7),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn horizon_below_start_is_rejected() {
        let seq = fuzzy_fn(|_| FuzzyNumber::zero());
        let err = transform(&seq, &WeightScheme::cesaro(), 0).unwrap_err();
        assert!(matches!(err, TransformError::HorizonBelowStart { start: 1, horizon: 0 }));
    }

    #[test]
    fn csv_export_round_trips_values() {
        let seq = fuzzy_fn(|k| crisp(1.0 / k as f64));
        let ts = transform(&seq, &WeightScheme::cesaro(), 5).unwrap();
        let mut buf = Vec::new();
        ts.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("k,t"));
        for ((k, t), line) in ts.iter().zip(lines) {
            let (lk, lt) = line.split_once(',').unwrap();
            assert_eq!(lk.parse::<u64>().unwrap(), k);
            let parsed: f64 = lt.parse().unwrap();
            assert_eq!(parsed, t, "17 significant digits round-trip f64 exactly");
        }
    }
}

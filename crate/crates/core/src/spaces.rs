//! The scalar series `s_k = [f(t_k)]^{r_k}`, the metrics `D` and `D_p`,
//! and finite-horizon membership diagnostics for `l_p`, `c_0`, `c`, `l_∞`.
//!
//! A fuzzy sequence belongs to a transformed class when the scalar series
//! built from its weighted-mean transform lands in the corresponding
//! classical space. Actual membership is a statement about infinitely many
//! terms; everything this module reports is a *finite-horizon surrogate*,
//! and the verdict names say so (`ConsistentWithMembership`, never
//! "member"). Verdicts are horizon-stamped. For series whose divergence
//! witness is monotone (growing partial sums, growing running sup),
//! extending the horizon can only preserve or strengthen an inconsistent
//! verdict; oscillation-based verdicts carry no such guarantee.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::fuzzy::distance;
use crate::modulus::{ModulusError, ModulusFn};
use crate::weighted::{
    transform_pairwise, FuzzyFn, ScalarFn, TransformError, TransformSeries, WeightScheme,
};
use crate::GenError;

// ---------------------------------------------------------------------------
// Exponent sequences
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExponentError {
    #[error("exponent r_{k} = {value} must be strictly positive")]
    NonPositive { k: u64, value: f64 },
    #[error("exponent r_{k} = {value} must be finite")]
    NonFinite { k: u64, value: f64 },
    #[error("exponent range is empty: start {start} exceeds horizon {horizon}")]
    EmptyRange { start: u64, horizon: u64 },
    #[error(transparent)]
    Gen(#[from] GenError),
}

#[derive(Debug, Clone)]
enum ExponentRepr {
    Constant(f64),
    Table(Vec<f64>),
}

/// A bounded sequence of strictly positive exponents `r_k` over a fixed
/// index window, together with the derived constants used throughout:
/// `H = sup r_k` over the window, `M = max(1, H)`, and
/// `C_H = max(1, 2^(H-1))`.
///
/// `H` is computed by scanning the active window, not analytically, so it
/// is exact for the constant and eventually-constant sequences used in
/// practice.
#[derive(Debug, Clone)]
pub struct ExponentSeq {
    start: u64,
    horizon: u64,
    repr: ExponentRepr,
    h: f64,
}

impl ExponentSeq {
    /// Validates and tabulates `gen` over `start..=horizon`.
    pub fn new(start: u64, horizon: u64, gen: &ScalarFn) -> Result<Self, ExponentError> {
        if horizon < start {
            return Err(ExponentError::EmptyRange { start, horizon });
        }
        let mut table = Vec::with_capacity((horizon - start + 1) as usize);
        let mut h = f64::NEG_INFINITY;
        for k in start..=horizon {
            let value = gen(k)?;
            if !value.is_finite() {
                return Err(ExponentError::NonFinite { k, value });
            }
            if value <= 0.0 {
                return Err(ExponentError::NonPositive { k, value });
            }
            h = h.max(value);
            table.push(value);
        }
        Ok(ExponentSeq { start, horizon, repr: ExponentRepr::Table(table), h })
    }

    /// Constant exponents `r_k = r`, stored without a table.
    pub fn constant(r: f64, start: u64, horizon: u64) -> Result<Self, ExponentError> {
        if horizon < start {
            return Err(ExponentError::EmptyRange { start, horizon });
        }
        if !r.is_finite() {
            return Err(ExponentError::NonFinite { k: start, value: r });
        }
        if r <= 0.0 {
            return Err(ExponentError::NonPositive { k: start, value: r });
        }
        Ok(ExponentSeq { start, horizon, repr: ExponentRepr::Constant(r), h: r })
    }

    pub fn start(&self) -> u64 {
        self.start
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    /// `r_k`. Panics when `k` lies outside the validated window.
    pub fn r(&self, k: u64) -> f64 {
        assert!(
            (self.start..=self.horizon).contains(&k),
            "exponent index {k} outside validated window [{}, {}]",
            self.start,
            self.horizon
        );
        match &self.repr {
            ExponentRepr::Constant(r) => *r,
            ExponentRepr::Table(t) => t[(k - self.start) as usize],
        }
    }

    /// `H`: supremum of `r_k` over the window.
    pub fn h(&self) -> f64 {
        self.h
    }

    /// `M = max(1, H)`; the outer exponent of both metrics is `1/M`.
    pub fn m(&self) -> f64 {
        self.h.max(1.0)
    }

    /// `C_H = max(1, 2^(H-1))`: the constant in the power-subadditivity
    /// inequality `[f(a+b)]^{r} ≤ C_H([f(a)]^{r} + [f(b)]^{r})`.
    pub fn c_h(&self) -> f64 {
        (2.0f64).powf(self.h - 1.0).max(1.0)
    }
}

// ---------------------------------------------------------------------------
// Scalar series
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpaceError {
    #[error("tolerance must be positive, got {tol}")]
    BadTolerance { tol: f64 },
    #[error(
        "exponent window [{r_start}, {r_horizon}] does not cover the series window [{t_start}, {t_horizon}]"
    )]
    HorizonMismatch { r_start: u64, r_horizon: u64, t_start: u64, t_horizon: u64 },
    #[error(transparent)]
    Modulus(#[from] ModulusError),
    #[error(transparent)]
    Exponent(#[from] ExponentError),
    #[error(transparent)]
    Transform(#[from] TransformError),
}

/// The nonnegative series `s_k = [f(t_k)]^{r_k}`, aligned with the
/// transform series it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarSeries {
    start: u64,
    values: Vec<f64>,
}

impl ScalarSeries {
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

    /// `s_k`. Panics when `k` lies outside the series window.
    pub fn s(&self, k: u64) -> f64 {
        assert!(
            (self.start..=self.horizon()).contains(&k),
            "series index {k} outside window [{}, {}]",
            self.start,
            self.horizon()
        );
        self.values[(k - self.start) as usize]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.values.iter().enumerate().map(move |(i, &v)| (self.start + i as u64, v))
    }

    /// Running suprema `sup_{j ≤ k} s_j`, aligned with the series.
    pub fn running_sup_track(&self) -> Vec<f64> {
        let mut sup = f64::NEG_INFINITY;
        self.values
            .iter()
            .map(|&v| {
                sup = sup.max(v);
                sup
            })
            .collect()
    }

    /// Partial sums `Σ_{j ≤ k} s_j^p`, aligned with the series. `p = 1`
    /// adds the raw values without a power round trip.
    pub fn powered_partial_sums(&self, p: f64) -> Vec<f64> {
        let mut acc = 0.0;
        self.values
            .iter()
            .map(|&v| {
                acc += if p == 1.0 { v } else { v.powf(p) };
                acc
            })
            .collect()
    }

    /// Index (0-based) where the last quartile of the series begins; the
    /// diagnostics treat `values[split..]` as the tail window.
    fn tail_split(&self) -> usize {
        let n = self.values.len();
        if n >= 4 {
            n - n / 4
        } else {
            n - 1
        }
    }
}

/// Computes `s_k = [f(t_k)]^{r_k}` elementwise. Exponents equal to 1 are
/// applied as the identity so that `f = id, r = 1` reproduces `t_k`
/// bitwise.
pub fn scalar_series(
    ts: &TransformSeries,
    f: &ModulusFn,
    r: &ExponentSeq,
) -> Result<ScalarSeries, SpaceError> {
    check_window(ts, r)?;
    let mut values = Vec::with_capacity(ts.len());
    for (k, t) in ts.iter() {
        let ft = f.evaluate(t)?;
        let rk = r.r(k);
        values.push(if rk == 1.0 { ft } else { ft.powf(rk) });
    }
    Ok(ScalarSeries { start: ts.start(), values })
}

fn check_window(ts: &TransformSeries, r: &ExponentSeq) -> Result<(), SpaceError> {
    if r.start() > ts.start() || r.horizon() < ts.horizon() {
        return Err(SpaceError::HorizonMismatch {
            r_start: r.start(),
            r_horizon: r.horizon(),
            t_start: ts.start(),
            t_horizon: ts.horizon(),
        });
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Metrics
// ---------------------------------------------------------------------------

/// Value of the sup metric `D = sup_k [f(t_k)]^{r_k/M}` over the horizon,
/// with the last-quartile sup retained so callers can judge truncation:
/// when `tail_sup` is close to `value`, the sup may still be climbing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupMetricReport {
    pub value: f64,
    pub tail_sup: f64,
}

/// Value of the sum metric `D_p = (Σ_k [f(t_k)]^{r_k})^{1/M}` with the
/// partial-sum trajectory retained.
#[derive(Debug, Clone, PartialEq)]
pub struct SumMetricReport {
    pub value: f64,
    /// The inner sum before the `1/M` root.
    pub total: f64,
    /// Partial sums of `s_k`, aligned with the series window.
    pub partial_sums: Vec<f64>,
}

/// Sup metric from an already-computed pairwise transform series.
pub fn metric_d_from_series(
    ts: &TransformSeries,
    f: &ModulusFn,
    r: &ExponentSeq,
) -> Result<SupMetricReport, SpaceError> {
    check_window(ts, r)?;
    let m = r.m();
    let split = ts.len() - ts.len() / 4;
    let mut value = 0.0f64;
    let mut tail_sup = 0.0f64;
    for (i, (k, t)) in ts.iter().enumerate() {
        let e = r.r(k) / m;
        let ft = f.evaluate(t)?;
        let s = if e == 1.0 { ft } else { ft.powf(e) };
        value = value.max(s);
        if i >= split {
            tail_sup = tail_sup.max(s);
        }
    }
    Ok(SupMetricReport { value, tail_sup })
}

/// The sup metric `D(X, Y) = sup_k [f(t_k)]^{r_k/M}` where `t_k` is the
/// weighted-mean transform of the pointwise distances `d(X_i, Y_i)`.
///
/// `D` is symmetric and vanishes at `X = Y` for any weights; the triangle
/// inequality additionally needs every `v_i > 0` (a sign-mixed `v` lets a
/// later term cancel an earlier one, and a two-term counterexample breaks
/// the inequality). The randomized metric-axiom suites therefore sample
/// positive `v`.
pub fn metric_d(
    xs: &FuzzyFn,
    ys: &FuzzyFn,
    scheme: &WeightScheme,
    f: &ModulusFn,
    r: &ExponentSeq,
    horizon: u64,
) -> Result<SupMetricReport, SpaceError> {
    let ts = transform_pairwise(xs, ys, scheme, horizon)?;
    metric_d_from_series(&ts, f, r)
}

/// Sum metric from an already-computed pairwise transform series.
pub fn metric_dp_from_series(
    ts: &TransformSeries,
    f: &ModulusFn,
    r: &ExponentSeq,
) -> Result<SumMetricReport, SpaceError> {
    let s = scalar_series(ts, f, r)?;
    let partial_sums = s.powered_partial_sums(1.0);
    let total = *partial_sums.last().expect("series is never empty");
    let m = r.m();
    let value = if m == 1.0 { total } else { total.powf(1.0 / m) };
    Ok(SumMetricReport { value, total, partial_sums })
}

/// The sum metric `D_p(X, Y) = (Σ_k [f(t_k)]^{r_k})^{1/M}` over the
/// horizon. The same positive-`v` caveat as [`metric_d`] applies.
pub fn metric_dp(
    xs: &FuzzyFn,
    ys: &FuzzyFn,
    scheme: &WeightScheme,
    f: &ModulusFn,
    r: &ExponentSeq,
    horizon: u64,
) -> Result<SumMetricReport, SpaceError> {
    let ts = transform_pairwise(xs, ys, scheme, horizon)?;
    metric_dp_from_series(&ts, f, r)
}

// ---------------------------------------------------------------------------
// Membership diagnostics
// ---------------------------------------------------------------------------

/// Target classical space for the scalar series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpaceTarget {
    /// `Σ s_k^p < ∞`, `p > 0`.
    Lp(f64),
    /// `s_k → 0`.
    C0,
    /// `s_k` convergent (see [`DiagnoseConfig::strict_c`]).
    C,
    /// `s_k` bounded.
    LInf,
}

impl fmt::Display for SpaceTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceTarget::Lp(p) => write!(f, "l_{p}"),
            SpaceTarget::C0 => write!(f, "c_0"),
            SpaceTarget::C => write!(f, "c"),
            SpaceTarget::LInf => write!(f, "l_inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("unknown space target {input:?}; expected c, c0, linf, or l<p> with p > 0")]
pub struct ParseSpaceError {
    pub input: String,
}

impl FromStr for SpaceTarget {
    type Err = ParseSpaceError;

    /// Accepts `c`, `c0`/`c_0`, `linf`/`l_inf`, and `l<p>`/`l_<p>` for
    /// positive real `p` (so `l1`, `l2`, `l0.5`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseSpaceError { input: s.to_string() };
        let norm = s.trim().to_ascii_lowercase().replace('_', "");
        match norm.as_str() {
            "c" => Ok(SpaceTarget::C),
            "c0" => Ok(SpaceTarget::C0),
            "linf" => Ok(SpaceTarget::LInf),
            _ => {
                let p = norm.strip_prefix('l').ok_or_else(err)?;
                let p: f64 = p.parse().map_err(|_| err())?;
                if p.is_finite() && p > 0.0 {
                    Ok(SpaceTarget::Lp(p))
                } else {
                    Err(err())
                }
            }
        }
    }
}

/// Finite-horizon verdict: the series either looks like a member of the
/// target space up to the horizon, or it exhibits a concrete witness
/// against membership. Neither direction is a proof.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    ConsistentWithMembership,
    InconsistentWithMembership,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::ConsistentWithMembership => write!(f, "consistent"),
            Verdict::InconsistentWithMembership => write!(f, "inconsistent"),
        }
    }
}

/// Tolerances for the membership diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagnoseConfig {
    /// Plateau / oscillation / Cauchy-increment tolerance.
    pub tol: f64,
    /// A partial-sum trajectory whose final value exceeds this multiple of
    /// its first-quartile value is annotated as a divergence witness.
    pub divergence_factor: f64,
    /// Read `c` as "converges to 0" instead of "converges": the class
    /// definition literally asks for a null sequence about some base, but
    /// the canonical examples use the convergent reading. Both are
    /// available; callers record which reading validated.
    pub strict_c: bool,
}

impl Default for DiagnoseConfig {
    fn default() -> Self {
        DiagnoseConfig { tol: crate::tol::PLATEAU, divergence_factor: crate::tol::DIVERGENCE_FACTOR, strict_c: false }
    }
}

/// Numeric evidence backing a verdict. The tail window is the last
/// quartile of the series.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostics {
    /// `sup s_k` over the tail window.
    pub tail_sup: f64,
    /// `max − min` of `s_k` over the tail window.
    pub tail_oscillation: f64,
    /// Running sup at the start of the tail window and at the horizon;
    /// equality means the sup stabilized before the tail.
    pub running_sup_mid: f64,
    pub running_sup_end: f64,
    /// Increase of `Σ s_k^p` across the tail window (`l_p` targets only).
    pub tail_increment: Option<f64>,
    /// Evenly spaced checkpoints of the partial-sum trajectory
    /// (`l_p` targets only), as `(k, Σ_{j ≤ k} s_j^p)` pairs.
    pub partial_checkpoints: Vec<(u64, f64)>,
    /// Human-readable summary of the decisive quantity, including a fitted
    /// growth slope against `ln k` for divergent partial sums.
    pub note: String,
}

/// A horizon-stamped verdict plus its evidence.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceVerdict {
    pub space: SpaceTarget,
    pub verdict: Verdict,
    pub horizon: u64,
    pub diagnostics: Diagnostics,
}

/// Applies the finite-horizon membership rules to a nonnegative series.
///
/// * `c_0`: tail sup at most `tol`.
/// * `c`: tail oscillation at most `tol` (tail sup under `strict_c`).
/// * `l_∞`: running sup grows by at most `tol` (relative) across the tail.
/// * `l_p`: partial sums of `s^p` gain at most `tol` across the tail.
///
/// # Errors
/// `BadTolerance` when `tol ≤ 0` or the divergence factor is not above 1.
pub fn diagnose(
    s: &ScalarSeries,
    space: SpaceTarget,
    cfg: &DiagnoseConfig,
) -> Result<SpaceVerdict, SpaceError> {
    if !(cfg.tol > 0.0) {
        return Err(SpaceError::BadTolerance { tol: cfg.tol });
    }
    if !(cfg.divergence_factor > 1.0) {
        return Err(SpaceError::BadTolerance { tol: cfg.divergence_factor });
    }
    debug_assert!(s.values().iter().all(|&v| v >= 0.0), "series must be nonnegative");

    let split = s.tail_split();
    let tail = &s.values()[split..];
    let tail_sup = tail.iter().copied().fold(0.0f64, f64::max);
    let tail_min = tail.iter().copied().fold(f64::INFINITY, f64::min);
    let tail_oscillation = tail_sup - tail_min;
    let running_sup_mid =
        s.values()[..split.max(1)].iter().copied().fold(0.0f64, f64::max);
    let running_sup_end = running_sup_mid.max(tail_sup);

    let mut tail_increment = None;
    let mut partial_checkpoints = Vec::new();
    let mut note;
    let verdict = match space {
        SpaceTarget::C0 => {
            note = format!("tail sup {tail_sup:.3e} vs tol {:.3e}", cfg.tol);
            if tail_sup <= cfg.tol {
                Verdict::ConsistentWithMembership
            } else {
                if tail_min > cfg.tol {
                    note.push_str(&format!(
                        "; plateau: tail min {tail_min:.3e} also above tol"
                    ));
                }
                Verdict::InconsistentWithMembership
            }
        }
        SpaceTarget::C => {
            if cfg.strict_c {
                note = format!(
                    "strict reading (null about base): tail sup {tail_sup:.3e} vs tol {:.3e}",
                    cfg.tol
                );
                if tail_sup <= cfg.tol {
                    Verdict::ConsistentWithMembership
                } else {
                    Verdict::InconsistentWithMembership
                }
            } else {
                note = format!(
                    "tail oscillation {tail_oscillation:.3e} vs tol {:.3e}",
                    cfg.tol
                );
                if tail_oscillation <= cfg.tol {
                    Verdict::ConsistentWithMembership
                } else {
                    Verdict::InconsistentWithMembership
                }
            }
        }
        SpaceTarget::LInf => {
            let growth = running_sup_end - running_sup_mid;
            let allowed = cfg.tol * running_sup_mid.max(1.0);
            note = format!(
                "running sup {running_sup_mid:.6e} -> {running_sup_end:.6e} across the tail"
            );
            if growth <= allowed {
                Verdict::ConsistentWithMembership
            } else {
                Verdict::InconsistentWithMembership
            }
        }
        SpaceTarget::Lp(p) => {
            let partials = s.powered_partial_sums(p);
            let final_sum = *partials.last().expect("series is never empty");
            let mid_sum = partials[split.max(1) - 1];
            let increment = final_sum - mid_sum;
            tail_increment = Some(increment);
            partial_checkpoints = checkpoints(s.start(), &partials, 32);
            note = format!(
                "partial sums gained {increment:.3e} across the tail (total {final_sum:.6e}) vs tol {:.3e}",
                cfg.tol
            );
            if increment <= cfg.tol {
                Verdict::ConsistentWithMembership
            } else {
                // Annotate monotone divergence witnesses: partial sums of a
                // nonnegative series can only grow, so clearing the initial
                // sum by the divergence factor with a positive fitted slope
                // against ln k survives any horizon extension.
                let initial_sum = partials[0];
                let k_mid = (s.start() + split as u64 - 1).max(1) as f64;
                let denom = ((s.horizon() as f64).ln() - k_mid.ln()).max(f64::MIN_POSITIVE);
                let slope = (final_sum - mid_sum) / denom;
                if initial_sum > 0.0 && final_sum >= cfg.divergence_factor * initial_sum {
                    note.push_str(&format!(
                        "; divergence witness: total is {:.1}x the initial partial sum, fitted slope {slope:.3e} per ln k",
                        final_sum / initial_sum
                    ));
                }
                Verdict::InconsistentWithMembership
            }
        }
    };

    Ok(SpaceVerdict {
        space,
        verdict,
        horizon: s.horizon(),
        diagnostics: Diagnostics {
            tail_sup,
            tail_oscillation,
            running_sup_mid,
            running_sup_end,
            tail_increment,
            partial_checkpoints,
            note,
        },
    })
}

/// At most `max` evenly spaced `(k, value)` checkpoints, always including
/// the final entry.
fn checkpoints(start: u64, values: &[f64], max: usize) -> Vec<(u64, f64)> {
    let stride = (values.len() / max).max(1);
    let mut out: Vec<(u64, f64)> = values
        .iter()
        .enumerate()
        .step_by(stride)
        .map(|(i, &v)| (start + i as u64, v))
        .collect();
    let last = (start + values.len() as u64 - 1, *values.last().expect("non-empty"));
    if out.last() != Some(&last) {
        out.push(last);
    }
    out
}

// ---------------------------------------------------------------------------
// Structural mechanisms: solidness, power subadditivity, projections
// ---------------------------------------------------------------------------

/// Counts indices where the dominated series exceeds the dominating one.
///
/// When `d(Y_i, 0̄) ≤ d(X_i, 0̄)` for all `i` and both weight sequences are
/// positive, every arithmetic step in the pipeline is monotone (IEEE
/// rounding preserves ≤ through sums and products, and the catalog moduli
/// evaluate through correctly-rounded monotone primitives), so the count
/// must be exactly zero — no tolerance.
pub fn count_domination_violations(dominated: &ScalarSeries, dominating: &ScalarSeries) -> u64 {
    assert_eq!(dominated.start(), dominating.start(), "series must be aligned");
    assert_eq!(dominated.len(), dominating.len(), "series must be aligned");
    dominated
        .values()
        .iter()
        .zip(dominating.values())
        .filter(|(y, x)| y > x)
        .count() as u64
}

/// Both sides of the power-subadditivity inequality
/// `[f(a+b)]^r ≤ C_H([f(a)]^r + [f(b)]^r)` for `r ≤ H`: returns
/// `(lhs, rhs)` so callers can assert with their own slack.
pub fn power_subadd_sides(
    f: &ModulusFn,
    a: f64,
    b: f64,
    r: f64,
    c_h: f64,
) -> Result<(f64, f64), ModulusError> {
    let lhs = f.evaluate(a + b)?.powf(r);
    let rhs = c_h * (f.evaluate(a)?.powf(r) + f.evaluate(b)?.powf(r));
    Ok((lhs, rhs))
}

/// Coordinate-projection evidence: for a family `X^n` converging to `0̄`
/// in the sup metric, each fixed coordinate must converge to `0̄` in the
/// base metric.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionReport {
    pub coordinate: u64,
    /// `D(X^n, 0̄)` for each family member, in family order.
    pub metric_values: Vec<f64>,
    /// `d(X^n_i, 0̄)` at the fixed coordinate, in family order.
    pub coordinate_distances: Vec<f64>,
}

impl ProjectionReport {
    pub fn metric_nonincreasing(&self) -> bool {
        self.metric_values.windows(2).all(|w| w[1] <= w[0])
    }

    pub fn coordinate_nonincreasing(&self) -> bool {
        self.coordinate_distances.windows(2).all(|w| w[1] <= w[0])
    }

    pub fn final_coordinate_distance(&self) -> f64 {
        *self.coordinate_distances.last().expect("family is non-empty")
    }
}

/// Evaluates the projection evidence for `family` (one generator per
/// member) at `coordinate`, against the zero sequence.
pub fn projection_check(
    family: &[FuzzyFn],
    coordinate: u64,
    scheme: &WeightScheme,
    f: &ModulusFn,
    r: &ExponentSeq,
    horizon: u64,
) -> Result<ProjectionReport, SpaceError> {
    assert!(!family.is_empty(), "projection family must be non-empty");
    assert!(coordinate >= scheme.start_index(), "coordinate below the scheme start index");
    let zero: FuzzyFn = crate::weighted::fuzzy_fn(|_| crate::fuzzy::FuzzyNumber::zero());
    let mut metric_values = Vec::with_capacity(family.len());
    let mut coordinate_distances = Vec::with_capacity(family.len());
    for member in family {
        let d = metric_d(member, &zero, scheme, f, r, horizon)?;
        metric_values.push(d.value);
        let xi = member(coordinate).map_err(ExponentError::Gen)?;
        coordinate_distances.push(distance(&xi, &crate::fuzzy::FuzzyNumber::zero()));
    }
    Ok(ProjectionReport { coordinate, metric_values, coordinate_distances })
}

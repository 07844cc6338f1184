//! Modulus functions as a closed expression algebra.
//!
//! A modulus function `f : [0, ∞) → [0, ∞)` satisfies
//!
//! 1. `f(t) = 0` iff `t = 0`,
//! 2. `f(a + b) ≤ f(a) + f(b)` (subadditivity),
//! 3. `f` is non-decreasing, and
//! 4. `f` is right-continuous at 0.
//!
//! The algebra is a closed expression tree — identity, fractional powers,
//! the saturating `t/(1+t)`, pointwise sums, compositions, and iterates —
//! rather than arbitrary callables, so that printing, parsing, and axiom
//! checking stay total. All four generators preserve the axioms, hence
//! every tree built from them is a modulus by construction; the checker in
//! [`check_axioms`] exists to catch user-supplied [`ModulusFn::custom`]
//! escapes (which are excluded from the printable syntax) and as an
//! executable witness for the axioms themselves.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// A user-supplied modulus escape hatch; compared and printed by name only
/// and rejected by the printable syntax.
#[derive(Clone)]
pub struct CustomModulus {
    pub name: String,
    pub f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl fmt::Debug for CustomModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CustomModulus({})", self.name)
    }
}

impl PartialEq for CustomModulus {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
    }
}

/// Expression tree over the modulus generators.
///
/// Build values with the smart constructors ([`ModulusFn::power`],
/// [`ModulusFn::iterate`], …), which validate parameters; [`evaluate`]
/// re-checks them so that hand-assembled trees cannot produce garbage
/// silently.
///
/// [`evaluate`]: ModulusFn::evaluate
#[derive(Debug, Clone, PartialEq)]
pub enum ModulusFn {
    /// `t ↦ t`.
    Identity,
    /// `t ↦ t^p` for `p ∈ (0, 1]`.
    Power(f64),
    /// `t ↦ t / (1 + t)`, bounded by 1.
    RationalSaturating,
    /// Pointwise sum `(f + g)(t) = f(t) + g(t)`.
    Sum(Box<ModulusFn>, Box<ModulusFn>),
    /// Composition `(g . f)(t) = g(f(t))`.
    Compose(Box<ModulusFn>, Box<ModulusFn>),
    /// `n`-fold iterate `f^n = f ∘ … ∘ f`, `n ≥ 1`.
    Iterate(Box<ModulusFn>, u32),
    /// Escape hatch for axiom-checker tests; not printable or parsable.
    Custom(CustomModulus),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModulusError {
    #[error("modulus argument must be a finite nonnegative real, got {t}")]
    Domain { t: f64 },
    #[error("power exponent must lie in (0, 1], got {p}")]
    BadPower { p: f64 },
    #[error("iterate count must be at least 1")]
    BadIterate,
}

impl ModulusFn {
    pub fn identity() -> Self {
        ModulusFn::Identity
    }

    /// `t ↦ t^p`.
    ///
    /// # Errors
    /// `BadPower` unless `p ∈ (0, 1]`; exponents above 1 lose subadditivity.
    pub fn power(p: f64) -> Result<Self, ModulusError> {
        if !(p.is_finite() && p > 0.0 && p <= 1.0) {
            return Err(ModulusError::BadPower { p });
        }
        Ok(ModulusFn::Power(p))
    }

    pub fn rational_saturating() -> Self {
        ModulusFn::RationalSaturating
    }

    pub fn sum(f: ModulusFn, g: ModulusFn) -> Self {
        ModulusFn::Sum(Box::new(f), Box::new(g))
    }

    /// `g ∘ f` (apply `f` first).
    pub fn compose(g: ModulusFn, f: ModulusFn) -> Self {
        ModulusFn::Compose(Box::new(g), Box::new(f))
    }

    /// # Errors
    /// `BadIterate` when `n = 0` (an empty iterate would be the identity on
    /// all of ℝ, which is not what callers mean).
    pub fn iterate(f: ModulusFn, n: u32) -> Result<Self, ModulusError> {
        if n == 0 {
            return Err(ModulusError::BadIterate);
        }
        Ok(ModulusFn::Iterate(Box::new(f), n))
    }

    pub fn custom(name: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        ModulusFn::Custom(CustomModulus { name: name.into(), f: Arc::new(f) })
    }

    /// Evaluates the modulus at `t ≥ 0`.
    pub fn evaluate(&self, t: f64) -> Result<f64, ModulusError> {
        if !(t.is_finite() && t >= 0.0) {
            return Err(ModulusError::Domain { t });
        }
        self.eval_checked(t)
    }

    fn eval_checked(&self, t: f64) -> Result<f64, ModulusError> {
        match self {
            ModulusFn::Identity => Ok(t),
            ModulusFn::Power(p) => {
                if !(p.is_finite() && *p > 0.0 && *p <= 1.0) {
                    return Err(ModulusError::BadPower { p: *p });
                }
                // sqrt is correctly rounded (hence monotone) where powf is
                // only faithful; route the common exponents through it so
                // that domination comparisons stay exact.
                if *p == 1.0 {
                    Ok(t)
                } else if *p == 0.5 {
                    Ok(t.sqrt())
                } else {
                    Ok(t.powf(*p))
                }
            }
            ModulusFn::RationalSaturating => Ok(t / (1.0 + t)),
            ModulusFn::Sum(f, g) => Ok(f.eval_checked(t)? + g.eval_checked(t)?),
            ModulusFn::Compose(g, f) => g.eval_checked(f.eval_checked(t)?),
            ModulusFn::Iterate(f, n) => {
                if *n == 0 {
                    return Err(ModulusError::BadIterate);
                }
                let mut x = t;
                for _ in 0..*n {
                    x = f.eval_checked(x)?;
                }
                Ok(x)
            }
            ModulusFn::Custom(c) => Ok((c.f)(t)),
        }
    }

    /// True when the tree contains a [`ModulusFn::Custom`] node, which the
    /// printable syntax cannot represent.
    pub fn contains_custom(&self) -> bool {
        match self {
            ModulusFn::Identity | ModulusFn::Power(_) | ModulusFn::RationalSaturating => false,
            ModulusFn::Sum(f, g) | ModulusFn::Compose(f, g) => {
                f.contains_custom() || g.contains_custom()
            }
            ModulusFn::Iterate(f, _) => f.contains_custom(),
            ModulusFn::Custom(_) => true,
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            ModulusFn::Sum(..) => 0,
            ModulusFn::Compose(..) => 1,
            ModulusFn::Iterate(..) => 2,
            _ => 3,
        }
    }
}

/// Prints in the modulus expression syntax: `id`, `pow 0.5`, `rat`,
/// `f + g`, `g . f`, `f^3`. Parenthesization preserves the tree shape, so
/// printing and reparsing is the identity on custom-free trees.
impl fmt::Display for ModulusFn {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn child(out: &mut fmt::Formatter<'_>, node: &ModulusFn, min: u8) -> fmt::Result {
            if node.precedence() < min {
                write!(out, "(")?;
                write!(out, "{node}")?;
                write!(out, ")")
            } else {
                write!(out, "{node}")
            }
        }
        match self {
            ModulusFn::Identity => write!(out, "id"),
            ModulusFn::Power(p) => write!(out, "pow {p}"),
            ModulusFn::RationalSaturating => write!(out, "rat"),
            ModulusFn::Sum(f, g) => {
                child(out, f, 0)?;
                write!(out, " + ")?;
                child(out, g, 1)
            }
            ModulusFn::Compose(g, f) => {
                child(out, g, 1)?;
                write!(out, " . ")?;
                child(out, f, 2)
            }
            ModulusFn::Iterate(f, n) => {
                child(out, f, 3)?;
                write!(out, "^{n}")
            }
            ModulusFn::Custom(c) => write!(out, "<custom {}>", c.name),
        }
    }
}

/// Sampling plan for axiom checking and growth estimation: a geometric grid
/// of `points` arguments in `[t_min, t_max]` plus `pairs` random
/// subadditivity pairs drawn from a fixed-seed generator.
#[derive(Debug, Clone)]
pub struct GridSpec {
    pub t_min: f64,
    pub t_max: f64,
    pub points: usize,
    pub pairs: usize,
    pub seed: u64,
    /// A function fails the right-continuity probe when its values stay
    /// above this threshold all the way down to the smallest representable
    /// probe argument.
    pub rc_threshold: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            t_min: 1e-9,
            t_max: 1e3,
            points: 10_000,
            pairs: 10_000,
            seed: 0x00A1_1CE5,
            rc_threshold: 1e-3,
        }
    }
}

impl GridSpec {
    /// Geometric argument ladder from `t_min` up to `t_max`.
    pub fn grid(&self) -> Vec<f64> {
        assert!(self.points >= 2 && self.t_min > 0.0 && self.t_max > self.t_min);
        let ratio = (self.t_max / self.t_min).powf(1.0 / (self.points - 1) as f64);
        let mut t = self.t_min;
        let mut out = Vec::with_capacity(self.points);
        for _ in 0..self.points - 1 {
            out.push(t);
            t *= ratio;
        }
        out.push(self.t_max);
        out
    }
}

/// A failed modulus axiom with a numeric witness.
#[derive(Debug, Clone, PartialEq)]
pub enum AxiomViolation {
    /// `f(0) ≠ 0`.
    NonzeroAtZero { value: f64 },
    /// `f(t) ≤ 0` for a sampled `t > 0`.
    NotPositive { t: f64, value: f64 },
    /// `f(a + b) > f(a) + f(b)` beyond rounding.
    NotSubadditive { a: f64, b: f64, lhs: f64, rhs: f64 },
    /// `f(t2) < f(t1)` for sampled `t1 < t2` beyond rounding.
    NotMonotone { t1: f64, t2: f64, f1: f64, f2: f64 },
    /// Values stay above the threshold arbitrarily close to 0.
    NotRightContinuous { t: f64, value: f64, threshold: f64 },
    /// Evaluation failed (invalid parameters or a custom panic guard).
    EvaluationFailed { t: f64, message: String },
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomViolation::NonzeroAtZero { value } => write!(f, "f(0) = {value}, expected 0"),
            AxiomViolation::NotPositive { t, value } => {
                write!(f, "f({t}) = {value}, expected a positive value")
            }
            AxiomViolation::NotSubadditive { a, b, lhs, rhs } => {
                write!(f, "f({a} + {b}) = {lhs} exceeds f(a) + f(b) = {rhs}")
            }
            AxiomViolation::NotMonotone { t1, t2, f1, f2 } => {
                write!(f, "f({t2}) = {f2} is below f({t1}) = {f1}")
            }
            AxiomViolation::NotRightContinuous { t, value, threshold } => {
                write!(f, "f({t}) = {value} stays above {threshold} near 0")
            }
            AxiomViolation::EvaluationFailed { t, message } => {
                write!(f, "evaluation failed at t = {t}: {message}")
            }
        }
    }
}

/// Result of sampling the modulus axioms on a grid. A clean report is
/// evidence on the sampled arguments, not a proof.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AxiomReport {
    pub violations: Vec<AxiomViolation>,
}

impl AxiomReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Relative slack granted to the sampled inequalities: the identity modulus
/// satisfies subadditivity with exact equality, so a few ulps of rounding
/// must not count as a violation.
const AXIOM_REL_SLACK: f64 = 1e-12;

/// Samples the four modulus axioms over `grid`.
pub fn check_axioms(f: &ModulusFn, grid: &GridSpec) -> AxiomReport {
    let mut violations = Vec::new();
    let eval = |t: f64, violations: &mut Vec<AxiomViolation>| -> Option<f64> {
        match f.evaluate(t) {
            Ok(v) => Some(v),
            Err(e) => {
                violations.push(AxiomViolation::EvaluationFailed { t, message: e.to_string() });
                None
            }
        }
    };

    match eval(0.0, &mut violations) {
        Some(v) if v != 0.0 => violations.push(AxiomViolation::NonzeroAtZero { value: v }),
        _ => {}
    }

    let ts = grid.grid();
    let mut prev: Option<(f64, f64)> = None;
    for &t in &ts {
        let Some(v) = eval(t, &mut violations) else { break };
        if v <= 0.0 {
            violations.push(AxiomViolation::NotPositive { t, value: v });
        }
        if let Some((t1, f1)) = prev {
            if v < f1 - AXIOM_REL_SLACK * f1.abs().max(1.0) {
                violations.push(AxiomViolation::NotMonotone { t1, t2: t, f1, f2: v });
            }
        }
        prev = Some((t, v));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(grid.seed);
    for _ in 0..grid.pairs {
        // Log-uniform pairs exercise both the small-argument and the
        // saturated regime.
        let a = grid.t_min * (grid.t_max / grid.t_min).powf(rng.gen::<f64>());
        let b = grid.t_min * (grid.t_max / grid.t_min).powf(rng.gen::<f64>());
        let (Some(lhs), Some(fa), Some(fb)) = (
            eval(a + b, &mut violations),
            eval(a, &mut violations),
            eval(b, &mut violations),
        ) else {
            break;
        };
        let rhs = fa + fb;
        if lhs > rhs + AXIOM_REL_SLACK * rhs.abs().max(1.0) {
            violations.push(AxiomViolation::NotSubadditive { a, b, lhs, rhs });
            if violations.len() > 32 {
                break;
            }
        }
    }

    // Right continuity at 0: probe geometrically below t_min until the
    // values drop under the threshold.
    let mut t = grid.t_min;
    let mut rc_ok = false;
    while t > 1e-280 {
        match eval(t, &mut violations) {
            Some(v) if v <= grid.rc_threshold => {
                rc_ok = true;
                break;
            }
            Some(_) => t *= 1e-3,
            None => break,
        }
    }
    if !rc_ok {
        if let Some(v) = eval(t.max(1e-280), &mut violations) {
            violations.push(AxiomViolation::NotRightContinuous {
                t: t.max(1e-280),
                value: v,
                threshold: grid.rc_threshold,
            });
        }
    }

    AxiomReport { violations }
}

/// Sampled growth rate of a modulus: the infimum of `f(t)/t` controls when
/// the `f`-transformed spaces coincide with the plain ones.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthReport {
    /// Smallest sampled ratio `f(t)/t` (an upper bound for the true
    /// infimum, since sampling can only miss smaller values).
    pub inf_ratio: f64,
    /// The argument attaining the sampled infimum.
    pub argmin_t: f64,
    /// Ratio at the largest sampled argument; for ratios monotone in `t`
    /// this is the best finite proxy for the `t → ∞` limit.
    pub tail_ratio: f64,
}

/// Estimates `β = inf { f(t)/t : t > 0 }` over the sample grid.
///
/// # Errors
/// Propagates evaluation failures (invalid parameters, domain errors).
pub fn growth(f: &ModulusFn, grid: &GridSpec) -> Result<GrowthReport, ModulusError> {
    let ts = grid.grid();
    let mut inf_ratio = f64::INFINITY;
    let mut argmin_t = ts[0];
    let mut tail_ratio = 0.0;
    for &t in &ts {
        let ratio = f.evaluate(t)? / t;
        if ratio < inf_ratio {
            inf_ratio = ratio;
            argmin_t = t;
        }
        tail_ratio = ratio;
    }
    Ok(GrowthReport { inf_ratio, argmin_t, tail_ratio })
}

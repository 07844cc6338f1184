//! Named, reproducible cases encoding the constructions, counterexamples,
//! and inclusion relations of the underlying theory, each paired with an
//! independent oracle and a pass/fail report.
//!
//! Every case in the catalog fixes a weighted-mean context (weights,
//! modulus, exponents, start index), declares its sequences as expression
//! text, and lists machine-checkable claims. Claims carry a provenance
//! tag: [`Provenance::Stated`] values are quoted from the construction the
//! case encodes, [`Provenance::Derived`] values were recomputed from first
//! principles (several stated constants are corrected this way; the case
//! notes record each discrepancy), and [`Provenance::Structural`] claims
//! pin implementation behavior such as exactness and oracle agreement.
//!
//! Reports are deterministic: a fixed seed yields byte-identical report
//! trees, because every randomized suite draws from a per-case stream
//! seeded by the case id, and no artifact contains timing data.

pub mod oracle;
pub mod sampling;

mod catalog;
mod report;

pub use report::{suite_summary, write_reports};

use std::collections::BTreeMap;
use std::rc::Rc;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::dsl::{self, Expr};
use crate::modulus::ModulusFn;
use crate::spaces::{
    diagnose, scalar_series, DiagnoseConfig, ExponentSeq, ScalarSeries, SpaceError, SpaceTarget,
    Verdict,
};
use crate::weighted::{transform, FuzzyFn, TransformError, TransformSeries, WeightScheme};

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("unknown case id `{0}`")]
    UnknownCase(String),
    #[error("unknown sequence `{0}` in case claims")]
    UnknownSequence(String),
    #[error("catalog expression `{text}`: {err}")]
    BadExpr { text: String, err: dsl::ParseError },
    #[error(transparent)]
    Eval(#[from] dsl::EvalError),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error(transparent)]
    Modulus(#[from] crate::modulus::ModulusError),
    #[error("{0}")]
    Unsupported(String),
}

// ---------------------------------------------------------------------------
// Case model
// ---------------------------------------------------------------------------

/// How a claim's expected value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// Quoted directly from the construction the case encodes.
    Stated,
    /// Recomputed from first principles; where a quoted constant disagrees,
    /// the claim asserts the recomputed value and the case notes record the
    /// discrepancy.
    Derived,
    /// Pins implementation behavior (exactness, agreement, determinism)
    /// rather than a mathematical statement.
    Structural,
}

impl std::fmt::Display for Provenance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Provenance::Stated => "stated",
            Provenance::Derived => "derived",
            Provenance::Structural => "structural",
        })
    }
}

/// One weighted-mean context as expression text: weights `u`, `v`, the
/// start index, a modulus, and an exponent expression in `k`.
#[derive(Debug, Clone, Copy)]
pub struct ContextSpec {
    pub u: &'static str,
    pub v: &'static str,
    pub start: u64,
    pub modulus: &'static str,
    pub exponents: &'static str,
}

/// How a named sequence is produced.
#[derive(Debug, Clone, Copy)]
pub enum SeqDef {
    /// A generator expression in `k`.
    Expr(&'static str),
    /// The termwise fuzzy product of two previously declared sequences
    /// (computed with fuzzy multiplication in the pipeline and with exact
    /// support intervals in the oracle).
    Product(&'static str, &'static str),
}

/// A declared sequence. A `context` of `None` inherits the case context;
/// cases whose witnesses need different weights override per sequence.
#[derive(Debug, Clone, Copy)]
pub struct SeqEntry {
    pub name: &'static str,
    pub def: SeqDef,
    pub context: Option<ContextSpec>,
}

/// A machine-checkable assertion. Kinds that reference a sequence operate
/// on its transform series `t_k` or its scalar series `s_k = [f(t_k)]^{r_k}`
/// as documented per variant.
pub enum ClaimKind {
    /// `|t(k) − expected| ≤ abs_tol`.
    ValueAt { seq: &'static str, k: u64, expected: f64, abs_tol: f64 },
    /// `t(k) > threshold` at one index.
    ThresholdAt { seq: &'static str, k: u64, threshold: f64 },
    /// Worst relative deviation of `t(k)` from a closed-form expression
    /// over the whole window is at most `rel_tol`.
    ClosedForm { seq: &'static str, expr: &'static str, rel_tol: f64 },
    /// `t(k) ≤ bound(k)·(1 + rel_slack)` for every `k` in the window.
    BoundedBy { seq: &'static str, expr: &'static str, rel_slack: f64 },
    /// `max_k |t(k) − limit| ≤ abs_tol` over the last quartile.
    ApproachesValue { seq: &'static str, limit: f64, abs_tol: f64 },
    /// Every `t(k)` equals `lo` or `hi` exactly, and both values occur.
    TakesExactly { seq: &'static str, lo: f64, hi: f64 },
    /// The membership diagnosis for the scalar series matches `expect`;
    /// `tol` overrides the default plateau tolerance.
    Verdict { seq: &'static str, space: SpaceTarget, expect: Verdict, tol: Option<f64> },
    /// The final partial sum of `s_k` exceeds `threshold`.
    PartialSumExceeds { seq: &'static str, threshold: f64 },
    /// The partial sums of `s_k` gain less than `eps` over `(from, to]`,
    /// evaluated by streaming (the window may extend past the stored
    /// horizon). Requires a `k`-free exponent expression.
    TailIncrementBelow { seq: &'static str, from: u64, to: u64, eps: f64 },
    /// `s_k(dominated) ≤ s_k(dominating)` for every `k`, exactly.
    Dominates { dominated: &'static str, dominating: &'static str },
    /// `d(X_k, 0̄)` of `dominated` never exceeds that of `dominating`.
    DistanceDominates { dominated: &'static str, dominating: &'static str },
    /// `d(a_k, 0̄) = 0` exactly when `d(b_k, 0̄) = 0`, for every `k`.
    ZeroPositionsMatch { a: &'static str, b: &'static str },
    /// Pipeline `t_k` agrees with the exact-rational recomputation within
    /// `rel_tol` relative error for every `k ≤ check_horizon`.
    OracleAgreement { seq: &'static str, check_horizon: u64, rel_tol: f64 },
    /// The exact-rational value of `t(k)` equals `num/den` exactly.
    OracleValueAt { seq: &'static str, k: u64, num: i64, den: i64 },
    /// A bespoke check with full access to the case context.
    Custom { run: fn(&mut CaseCtx) -> Result<CheckResult, HarnessError> },
}

pub struct Claim {
    pub description: &'static str,
    pub provenance: Provenance,
    pub kind: ClaimKind,
}

/// A catalog entry: a context, named sequences, claims, and notes.
pub struct TheoremCase {
    pub id: &'static str,
    pub title: &'static str,
    pub horizon: u64,
    pub context: ContextSpec,
    pub sequences: Vec<SeqEntry>,
    pub claims: Vec<Claim>,
    /// Free-form notes surfaced in the summary: constant corrections,
    /// reading choices, tolerance rationales.
    pub notes: Vec<&'static str>,
}

// ---------------------------------------------------------------------------
// Outcomes and reports
// ---------------------------------------------------------------------------

/// What a single check produced. Numeric fields are preformatted with 17
/// significant digits so reports round-trip exactly.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub pass: bool,
    pub measured: String,
    pub expected: String,
    pub tolerance: String,
    pub note: String,
}

impl CheckResult {
    pub fn new(pass: bool, measured: String, expected: String, tolerance: String) -> Self {
        CheckResult { pass, measured, expected, tolerance, note: String::new() }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }
}

#[derive(Debug, Clone)]
pub struct ClaimOutcome {
    pub description: &'static str,
    pub provenance: Provenance,
    pub pass: bool,
    pub measured: String,
    pub expected: String,
    pub tolerance: String,
    pub note: String,
}

/// The result of running one case. The rendered artifacts (`claims_csv`,
/// `series_csv`, `summary`) are deterministic; `runtime` is kept for
/// logging only and never serialized into them.
#[derive(Debug, Clone)]
pub struct CaseReport {
    pub id: &'static str,
    pub title: &'static str,
    pub horizon: u64,
    pub outcomes: Vec<ClaimOutcome>,
    pub notes: Vec<&'static str>,
    pub pass: bool,
    pub runtime: Duration,
    pub claims_csv: String,
    pub series_csv: String,
    pub summary: String,
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub reports: Vec<CaseReport>,
    pub pass: bool,
}

/// Options shared by every case run.
#[derive(Debug, Clone, Copy)]
pub struct RunOptions {
    /// Base seed for the randomized property suites; each case derives its
    /// own stream from this and its id.
    pub seed: u64,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { seed: 0 }
    }
}

/// Formats a float with 17 significant digits (round-trip exact).
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

// ---------------------------------------------------------------------------
// Context resolution
// ---------------------------------------------------------------------------

/// A sequence with its context resolved to ASTs and a modulus.
pub struct ResolvedSeq {
    pub name: &'static str,
    pub u: Expr,
    pub v: Expr,
    pub start: u64,
    pub modulus: ModulusFn,
    pub exponents: Expr,
    pub source: ResolvedSource,
}

pub enum ResolvedSource {
    Expr(Expr),
    Product(Expr, Expr),
}

impl ResolvedSeq {
    pub fn scheme(&self) -> WeightScheme {
        WeightScheme::new(
            format!("u = {}, v = {}", self.u, self.v),
            self.start,
            dsl::scalar_generator(self.u.clone()),
            dsl::scalar_generator(self.v.clone()),
        )
    }

    /// The fuzzy generator; products multiply their factors termwise.
    pub fn generator(&self) -> FuzzyFn {
        match &self.source {
            ResolvedSource::Expr(e) => dsl::fuzzy_generator(e.clone()),
            ResolvedSource::Product(a, b) => {
                let fa = dsl::fuzzy_generator(a.clone());
                let fb = dsl::fuzzy_generator(b.clone());
                std::sync::Arc::new(move |k: u64| Ok(fa(k)?.mul(&fb(k)?)))
            }
        }
    }

    /// The exponent sequence over `start..=horizon`; a `k`-free expression
    /// short-circuits to the constant representation.
    pub fn exponent_seq(&self, horizon: u64) -> Result<ExponentSeq, HarnessError> {
        if self.exponents_expr_is_constant() {
            let r = dsl::eval_scalar(&self.exponents, self.start)?;
            Ok(ExponentSeq::constant(r, self.start, horizon).map_err(SpaceError::Exponent)?)
        } else {
            let gen = dsl::scalar_generator(self.exponents.clone());
            Ok(ExponentSeq::new(self.start, horizon, &gen).map_err(SpaceError::Exponent)?)
        }
    }

    fn exponents_expr_is_constant(&self) -> bool {
        !self.exponents.depends_on_k()
    }
}

/// A computed series bundle for one sequence: the transform values, the
/// scalar series under the sequence's modulus and exponents, and the
/// pieces needed to recompute variants.
pub struct SeriesBundle {
    pub t: TransformSeries,
    pub s: ScalarSeries,
    pub exponents: ExponentSeq,
    pub modulus: ModulusFn,
}

fn parse(text: &str) -> Result<Expr, HarnessError> {
    dsl::parse_expr(text)
        .map_err(|err| HarnessError::BadExpr { text: text.to_string(), err })
}

fn parse_modulus(text: &str) -> Result<ModulusFn, HarnessError> {
    dsl::parse_modulus(text)
        .map_err(|err| HarnessError::BadExpr { text: text.to_string(), err })
}

fn resolve(case: &TheoremCase) -> Result<BTreeMap<&'static str, ResolvedSeq>, HarnessError> {
    let mut out = BTreeMap::new();
    for entry in &case.sequences {
        let ctx = entry.context.as_ref().unwrap_or(&case.context);
        let source = match entry.def {
            SeqDef::Expr(text) => ResolvedSource::Expr(parse(text)?),
            SeqDef::Product(a, b) => {
                let factor = |name: &'static str| -> Result<Expr, HarnessError> {
                    let e = case
                        .sequences
                        .iter()
                        .find(|s| s.name == name)
                        .ok_or_else(|| HarnessError::UnknownSequence(name.to_string()))?;
                    match e.def {
                        SeqDef::Expr(text) => parse(text),
                        SeqDef::Product(..) => Err(HarnessError::Unsupported(
                            "nested products are not supported".into(),
                        )),
                    }
                };
                ResolvedSource::Product(factor(a)?, factor(b)?)
            }
        };
        out.insert(
            entry.name,
            ResolvedSeq {
                name: entry.name,
                u: parse(ctx.u)?,
                v: parse(ctx.v)?,
                start: ctx.start,
                modulus: parse_modulus(ctx.modulus)?,
                exponents: parse(ctx.exponents)?,
                source,
            },
        );
    }
    Ok(out)
}

/// Mutable evaluation context handed to claims: resolved sequences, a
/// memoized series cache, and the case's deterministic random stream.
pub struct CaseCtx<'a> {
    pub case: &'a TheoremCase,
    pub rng: ChaCha8Rng,
    seqs: BTreeMap<&'static str, ResolvedSeq>,
    cache: BTreeMap<&'static str, Rc<SeriesBundle>>,
}

impl<'a> CaseCtx<'a> {
    fn new(case: &'a TheoremCase, opts: &RunOptions) -> Result<Self, HarnessError> {
        Ok(CaseCtx {
            case,
            rng: ChaCha8Rng::seed_from_u64(opts.seed ^ fnv1a(case.id)),
            seqs: resolve(case)?,
            cache: BTreeMap::new(),
        })
    }

    pub fn horizon(&self) -> u64 {
        self.case.horizon
    }

    pub fn resolved(&self, name: &str) -> Result<&ResolvedSeq, HarnessError> {
        self.seqs
            .get(name)
            .ok_or_else(|| HarnessError::UnknownSequence(name.to_string()))
    }

    /// The computed bundle for a named sequence, cached per case run.
    pub fn series(&mut self, name: &'static str) -> Result<Rc<SeriesBundle>, HarnessError> {
        if let Some(b) = self.cache.get(name) {
            return Ok(Rc::clone(b));
        }
        let seq = self.resolved(name)?;
        let gen = seq.generator();
        let scheme = seq.scheme();
        let t = transform(&gen, &scheme, self.case.horizon)?;
        let exponents = seq.exponent_seq(self.case.horizon)?;
        let modulus = seq.modulus.clone();
        let s = scalar_series(&t, &modulus, &exponents)?;
        let bundle = Rc::new(SeriesBundle { t, s, exponents, modulus });
        self.cache.insert(name, Rc::clone(&bundle));
        Ok(bundle)
    }
}

fn fnv1a(s: &str) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325_u64;
    for b in s.as_bytes() {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

// ---------------------------------------------------------------------------
// Claim evaluation
// ---------------------------------------------------------------------------

fn tail_start(len: usize) -> usize {
    if len >= 4 {
        len - len / 4
    } else {
        len.saturating_sub(1)
    }
}

fn evaluate_claim(ctx: &mut CaseCtx, claim: &Claim) -> Result<CheckResult, HarnessError> {
    match &claim.kind {
        ClaimKind::ValueAt { seq, k, expected, abs_tol } => {
            let b = ctx.series(seq)?;
            let got = b.t.t(*k);
            Ok(CheckResult::new(
                (got - expected).abs() <= *abs_tol,
                num(got),
                num(*expected),
                format!("abs {abs_tol:e}"),
            )
            .with_note(format!("t at k = {k}")))
        }
        ClaimKind::ThresholdAt { seq, k, threshold } => {
            let b = ctx.series(seq)?;
            let got = b.t.t(*k);
            Ok(CheckResult::new(
                got > *threshold,
                num(got),
                format!("> {}", num(*threshold)),
                "strict".into(),
            )
            .with_note(format!("t at k = {k}")))
        }
        ClaimKind::ClosedForm { seq, expr, rel_tol } => {
            let b = ctx.series(seq)?;
            let form = parse(expr)?;
            let mut worst = 0.0_f64;
            let mut worst_k = b.t.start();
            for (k, t) in b.t.iter() {
                let want = dsl::eval_scalar(&form, k)?;
                let denom = want.abs().max(f64::MIN_POSITIVE);
                let rel = (t - want).abs() / denom;
                if rel > worst {
                    worst = rel;
                    worst_k = k;
                }
            }
            Ok(CheckResult::new(
                worst <= *rel_tol,
                format!("worst rel dev {} at k = {worst_k}", num(worst)),
                format!("t_k = {expr}"),
                format!("rel {rel_tol:e}"),
            ))
        }
        ClaimKind::BoundedBy { seq, expr, rel_slack } => {
            let b = ctx.series(seq)?;
            let form = parse(expr)?;
            let mut violations = 0_u64;
            let mut tightest = f64::INFINITY;
            for (k, t) in b.t.iter() {
                let bound = dsl::eval_scalar(&form, k)?;
                if t > bound * (1.0 + rel_slack) {
                    violations += 1;
                } else {
                    tightest = tightest.min(bound - t);
                }
            }
            Ok(CheckResult::new(
                violations == 0,
                format!("{violations} violations; smallest margin {}", num(tightest)),
                format!("t_k <= {expr}"),
                format!("rel slack {rel_slack:e}"),
            ))
        }
        ClaimKind::ApproachesValue { seq, limit, abs_tol } => {
            let b = ctx.series(seq)?;
            let split = tail_start(b.t.len());
            let mut worst = 0.0_f64;
            for (i, (_, t)) in b.t.iter().enumerate() {
                if i >= split {
                    worst = worst.max((t - limit).abs());
                }
            }
            Ok(CheckResult::new(
                worst <= *abs_tol,
                format!("max tail deviation {}", num(worst)),
                format!("-> {}", num(*limit)),
                format!("abs {abs_tol:e}"),
            ))
        }
        ClaimKind::TakesExactly { seq, lo, hi } => {
            let b = ctx.series(seq)?;
            let (mut saw_lo, mut saw_hi, mut off) = (false, false, 0_u64);
            for (_, t) in b.t.iter() {
                if t == *lo {
                    saw_lo = true;
                } else if t == *hi {
                    saw_hi = true;
                } else {
                    off += 1;
                }
            }
            Ok(CheckResult::new(
                saw_lo && saw_hi && off == 0,
                format!(
                    "{off} off-value entries; {} attained {}, {} attained {}",
                    num(*lo),
                    saw_lo,
                    num(*hi),
                    saw_hi
                ),
                format!("t_k in {{{}, {}}} exactly", num(*lo), num(*hi)),
                "exact".into(),
            ))
        }
        ClaimKind::Verdict { seq, space, expect, tol } => {
            let b = ctx.series(seq)?;
            let mut cfg = DiagnoseConfig::default();
            if let Some(t) = tol {
                cfg.tol = *t;
            }
            let v = diagnose(&b.s, *space, &cfg)?;
            Ok(CheckResult::new(
                v.verdict == *expect,
                format!("{} with {space} at horizon {}", v.verdict, v.horizon),
                format!("{expect} with {space}"),
                format!("tol {:e}", cfg.tol),
            )
            .with_note(v.diagnostics.note))
        }
        ClaimKind::PartialSumExceeds { seq, threshold } => {
            let b = ctx.series(seq)?;
            let total = *b
                .s
                .powered_partial_sums(1.0)
                .last()
                .expect("series is never empty");
            Ok(CheckResult::new(
                total > *threshold,
                num(total),
                format!("> {}", num(*threshold)),
                "strict".into(),
            )
            .with_note(format!("sum of s_k to k = {}", b.s.horizon())))
        }
        ClaimKind::TailIncrementBelow { seq, from, to, eps } => {
            let r = ctx.resolved(seq)?;
            if r.exponents.depends_on_k() {
                return Err(HarnessError::Unsupported(
                    "streamed tail increments need a k-free exponent expression".into(),
                ));
            }
            let rk = dsl::eval_scalar(&r.exponents, r.start)?;
            let modulus = r.modulus.clone();
            let gen = r.generator();
            let scheme = r.scheme();
            let mut acc = 0.0_f64;
            let from = *from;
            crate::weighted::transform_stream(&gen, &scheme, *to, |k, t| {
                if k > from {
                    // t ≥ 0 by construction and the modulus was validated at
                    // parse time, so evaluation cannot fail here.
                    let ft = modulus.evaluate(t).expect("modulus total on t >= 0");
                    acc += if rk == 1.0 { ft } else { ft.powf(rk) };
                }
            })?;
            Ok(CheckResult::new(
                acc < *eps,
                num(acc),
                format!("< {}", num(*eps)),
                "strict".into(),
            )
            .with_note(format!("partial-sum gain over ({from}, {to}]")))
        }
        ClaimKind::Dominates { dominated, dominating } => {
            let a = ctx.series(dominated)?;
            let b = ctx.series(dominating)?;
            let violations = crate::spaces::count_domination_violations(&a.s, &b.s);
            Ok(CheckResult::new(
                violations == 0,
                format!("{violations} violations"),
                format!("s_k({dominated}) <= s_k({dominating})"),
                "exact".into(),
            ))
        }
        ClaimKind::DistanceDominates { dominated, dominating } => {
            let (ga, gb) = (
                ctx.resolved(dominated)?.generator(),
                ctx.resolved(dominating)?.generator(),
            );
            let start = ctx.resolved(dominated)?.start;
            let mut violations = 0_u64;
            for k in start..=ctx.horizon() {
                let da = ga(k).map_err(TransformError::Gen)?.distance_to_zero();
                let db = gb(k).map_err(TransformError::Gen)?.distance_to_zero();
                if da > db {
                    violations += 1;
                }
            }
            Ok(CheckResult::new(
                violations == 0,
                format!("{violations} violations"),
                format!("d({dominated}, 0) <= d({dominating}, 0)"),
                "exact".into(),
            ))
        }
        ClaimKind::ZeroPositionsMatch { a, b } => {
            let (ga, gb) = (ctx.resolved(a)?.generator(), ctx.resolved(b)?.generator());
            let start = ctx.resolved(a)?.start;
            let mut mismatches = 0_u64;
            for k in start..=ctx.horizon() {
                let da = ga(k).map_err(TransformError::Gen)?.distance_to_zero();
                let db = gb(k).map_err(TransformError::Gen)?.distance_to_zero();
                if (da == 0.0) != (db == 0.0) {
                    mismatches += 1;
                }
            }
            Ok(CheckResult::new(
                mismatches == 0,
                format!("{mismatches} mismatches"),
                format!("zero positions of {a} and {b} coincide"),
                "exact".into(),
            ))
        }
        ClaimKind::OracleAgreement { seq, check_horizon, rel_tol } => {
            let bundle = ctx.series(seq)?;
            let r = ctx.resolved(seq)?;
            let source = match &r.source {
                ResolvedSource::Expr(e) => oracle::OracleSource::Expr(e),
                ResolvedSource::Product(a, b) => oracle::OracleSource::Product(a, b),
            };
            let horizon = (*check_horizon).min(ctx.case.horizon);
            let agreement =
                oracle::compare_series(&bundle.t, &r.u, &r.v, source, horizon, *rel_tol)?;
            Ok(CheckResult::new(
                agreement.pass,
                format!(
                    "worst rel dev {} at k = {} over {} checks",
                    num(agreement.worst_rel),
                    agreement.worst_k,
                    agreement.checked
                ),
                "exact-rational recomputation".into(),
                format!("rel {rel_tol:e}"),
            ))
        }
        ClaimKind::OracleValueAt { seq, k, num: n, den } => {
            let r = ctx.resolved(seq)?;
            let source = match &r.source {
                ResolvedSource::Expr(e) => oracle::OracleSource::Expr(e),
                ResolvedSource::Product(a, b) => oracle::OracleSource::Product(a, b),
            };
            let got = oracle::exact_value_at(&r.u, &r.v, source, r.start, *k)?;
            let want = oracle::ratio(*n, *den);
            Ok(CheckResult::new(
                got == want,
                got.to_string(),
                format!("{n}/{den}"),
                "exact".into(),
            )
            .with_note(format!("exact t at k = {k}")))
        }
        ClaimKind::Custom { run } => run(ctx),
    }
}

// ---------------------------------------------------------------------------
// Runner
// ---------------------------------------------------------------------------

/// The ids in the shipped catalog, in catalog order.
pub fn case_ids() -> Vec<&'static str> {
    catalog::catalog().iter().map(|c| c.id).collect()
}

/// Runs one case and renders its artifacts.
pub fn run_case(id: &str, opts: &RunOptions) -> Result<CaseReport, HarnessError> {
    let cases = catalog::catalog();
    let case = cases
        .iter()
        .find(|c| c.id == id)
        .ok_or_else(|| HarnessError::UnknownCase(id.to_string()))?;
    run_resolved(case, opts)
}

fn run_resolved(case: &TheoremCase, opts: &RunOptions) -> Result<CaseReport, HarnessError> {
    let started = Instant::now();
    let mut ctx = CaseCtx::new(case, opts)?;
    let mut outcomes = Vec::with_capacity(case.claims.len());
    for claim in &case.claims {
        let r = evaluate_claim(&mut ctx, claim)?;
        outcomes.push(ClaimOutcome {
            description: claim.description,
            provenance: claim.provenance,
            pass: r.pass,
            measured: r.measured,
            expected: r.expected,
            tolerance: r.tolerance,
            note: r.note,
        });
    }
    // Make sure every declared sequence appears in the series artifact,
    // even if no claim touched it.
    for entry in &case.sequences {
        ctx.series(entry.name)?;
    }
    let pass = outcomes.iter().all(|o| o.pass);
    let runtime = started.elapsed();
    let (claims_csv, series_csv, summary) = report::render(case, &outcomes, &mut ctx, pass)?;
    Ok(CaseReport {
        id: case.id,
        title: case.title,
        horizon: case.horizon,
        outcomes,
        notes: case.notes.clone(),
        pass,
        runtime,
        claims_csv,
        series_csv,
        summary,
    })
}

/// Runs every case whose id matches `filter` (a `*` glob; `None` runs all),
/// in catalog order.
pub fn run_all(filter: Option<&str>, opts: &RunOptions) -> Result<SuiteReport, HarnessError> {
    let cases = catalog::catalog();
    let mut reports = Vec::new();
    for case in &cases {
        if filter.is_none_or(|f| glob_match(f, case.id)) {
            reports.push(run_resolved(case, opts)?);
        }
    }
    let pass = reports.iter().all(|r| r.pass);
    Ok(SuiteReport { reports, pass })
}

/// Minimal glob matcher: `*` matches any (possibly empty) run of bytes,
/// every other byte is literal.
pub fn glob_match(pattern: &str, text: &str) -> bool {
    fn rec(p: &[u8], t: &[u8]) -> bool {
        match p.first() {
            None => t.is_empty(),
            Some(b'*') => (0..=t.len()).any(|i| rec(&p[1..], &t[i..])),
            Some(c) => t.first() == Some(c) && rec(&p[1..], &t[1..]),
        }
    }
    rec(pattern.as_bytes(), text.as_bytes())
}

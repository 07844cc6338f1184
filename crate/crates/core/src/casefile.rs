//! Structured text case files: a weight scheme, a modulus, exponents, a
//! horizon, named fuzzy sequences, and optional declarative claims.
//!
//! The format is line-based `key = value`, with `#` starting a comment
//! anywhere on a line:
//!
//! ```text
//! # box-function counterexample
//! scheme.u    = 1/k
//! scheme.v    = 1
//! start_index = 1
//! modulus     = id
//! exponents   = 1
//! horizon     = 10000
//! base        = crisp(0)                   # optional, defaults to 0̄
//! sequences.X = select(k is_square, crisp(1), crisp(0))
//! claim       = value X 10000 0.01 1e-12
//! claim       = closed_form X floor(sqrt(k))/k 1e-12
//! claim       = verdict X c0 consistent
//! ```
//!
//! Values on the right of `=` are expressions in the generator language
//! (see [`crate::dsl`]); `modulus` uses the modulus sub-grammar. Claims
//! come in three forms:
//!
//! ```text
//! claim = verdict     <SEQ> <space> consistent|inconsistent
//! claim = value       <SEQ> <k> <expected> <abs-tol>
//! claim = closed_form <SEQ> <expr> <rel-tol>
//! ```
//!
//! `verdict` diagnoses the scalar series of `<SEQ>` against the space at
//! the file horizon; `value` checks a single transform value `t_k`;
//! `closed_form` compares `t_k` against the expression at every index in
//! the window. A full grammar reference ships in `docs/case-format.md`.

use std::fmt;

use thiserror::Error;

use crate::dsl::{
    self, eval_scalar, fuzzy_generator, parse_expr, parse_modulus, scalar_generator, Expr,
};
use crate::modulus::ModulusFn;
use crate::spaces::{
    diagnose, scalar_series, DiagnoseConfig, ExponentSeq, ScalarSeries, SpaceError, SpaceTarget,
    Verdict,
};
use crate::weighted::{transform, transform_about, TransformSeries, WeightScheme};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CaseError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("missing required field '{0}'")]
    MissingField(&'static str),
}

impl CaseError {
    fn parse(line: usize, message: impl Into<String>) -> Self {
        CaseError::Parse { line, message: message.into() }
    }
}

/// Errors raised while evaluating a case (as opposed to parsing one).
#[derive(Debug, Error)]
pub enum CaseRunError {
    #[error("unknown sequence '{0}'")]
    UnknownSequence(String),
    #[error("claim index k = {k} outside the window [{start}, {horizon}]")]
    ClaimIndexOutOfRange { k: u64, start: u64, horizon: u64 },
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error("expression evaluation failed: {0}")]
    Eval(#[from] dsl::EvalError),
}

/// A declarative expectation recorded in a case file.
#[derive(Debug, Clone, PartialEq)]
pub enum Claim {
    /// `tol`, when present, overrides the diagnosis tolerance for this
    /// claim only (a slowly decaying series needs a looser plateau bound
    /// at a modest horizon).
    Verdict { seq: String, space: SpaceTarget, expect: Verdict, tol: Option<f64> },
    Value { seq: String, k: u64, expected: f64, tol: f64 },
    ClosedForm { seq: String, expr: Expr, rel_tol: f64 },
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Claim::Verdict { seq, space, expect, tol } => {
                write!(f, "verdict {seq} {space} {expect}")?;
                if let Some(tol) = tol {
                    write!(f, " {tol}")?;
                }
                Ok(())
            }
            Claim::Value { seq, k, expected, tol } => {
                write!(f, "value {seq} {k} {expected} {tol}")
            }
            Claim::ClosedForm { seq, expr, rel_tol } => {
                write!(f, "closed_form {seq} {expr} {rel_tol}")
            }
        }
    }
}

/// Result of checking one claim.
#[derive(Debug, Clone, PartialEq)]
pub struct ClaimOutcome {
    pub claim: String,
    pub pass: bool,
    pub detail: String,
}

/// A parsed case file. Expressions are kept as ASTs so horizons can be
/// overridden and oracles can re-evaluate them in exact arithmetic.
#[derive(Debug, Clone)]
pub struct CaseFile {
    pub name: Option<String>,
    pub u_expr: Expr,
    pub v_expr: Expr,
    pub start_index: u64,
    pub modulus: ModulusFn,
    pub exponents_expr: Expr,
    pub horizon: u64,
    pub base_expr: Option<Expr>,
    /// Named sequence generators, in file order.
    pub sequences: Vec<(String, Expr)>,
}

/// A case file together with its claims.
#[derive(Debug, Clone)]
pub struct CaseDoc {
    pub case: CaseFile,
    pub claims: Vec<Claim>,
}

fn valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Parses a case document, reporting the offending line on failure.
pub fn parse_case(text: &str) -> Result<CaseDoc, CaseError> {
    let mut name = None;
    let mut u_expr = None;
    let mut v_expr = None;
    let mut start_index = None;
    let mut modulus = None;
    let mut exponents = None;
    let mut horizon = None;
    let mut base = None;
    let mut sequences: Vec<(String, Expr)> = Vec::new();
    let mut raw_claims: Vec<(usize, String)> = Vec::new();

    fn set<T>(slot: &mut Option<T>, value: T, line: usize, field: &str) -> Result<(), CaseError> {
        if slot.is_some() {
            return Err(CaseError::parse(line, format!("duplicate field '{field}'")));
        }
        *slot = Some(value);
        Ok(())
    }

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(CaseError::parse(line, "expected 'key = value'"));
        };
        let key = key.trim();
        let value = value.trim();
        let scalar = |what: &str| -> Result<Expr, CaseError> {
            let e = parse_expr(value).map_err(|e| CaseError::parse(line, e.to_string()))?;
            if e.is_fuzzy() {
                return Err(CaseError::parse(line, format!("{what} must be a scalar expression")));
            }
            Ok(e)
        };
        match key {
            "name" => set(&mut name, value.to_string(), line, key)?,
            "scheme.u" => {
                let e = scalar("scheme.u")?;
                set(&mut u_expr, e, line, key)?;
            }
            "scheme.v" => {
                let e = scalar("scheme.v")?;
                set(&mut v_expr, e, line, key)?;
            }
            "start_index" => {
                let v: u64 = value
                    .parse()
                    .map_err(|_| CaseError::parse(line, "start_index must be a nonnegative integer"))?;
                set(&mut start_index, v, line, key)?;
            }
            "modulus" => {
                let f =
                    parse_modulus(value).map_err(|e| CaseError::parse(line, e.to_string()))?;
                set(&mut modulus, f, line, key)?;
            }
            "exponents" => {
                let e = scalar("exponents")?;
                set(&mut exponents, e, line, key)?;
            }
            "horizon" => {
                let v: u64 = value
                    .parse()
                    .map_err(|_| CaseError::parse(line, "horizon must be a positive integer"))?;
                set(&mut horizon, v, line, key)?;
            }
            "base" => {
                let e = parse_expr(value).map_err(|e| CaseError::parse(line, e.to_string()))?;
                if e.depends_on_k() {
                    return Err(CaseError::parse(
                        line,
                        "base must be a single fuzzy number, independent of k",
                    ));
                }
                set(&mut base, e, line, key)?;
            }
            "claim" => raw_claims.push((line, value.to_string())),
            _ => {
                if let Some(seq_name) = key.strip_prefix("sequences.") {
                    if !valid_name(seq_name) {
                        return Err(CaseError::parse(
                            line,
                            format!("invalid sequence name '{seq_name}'"),
                        ));
                    }
                    if sequences.iter().any(|(n, _)| n == seq_name) {
                        return Err(CaseError::parse(
                            line,
                            format!("duplicate sequence '{seq_name}'"),
                        ));
                    }
                    let e =
                        parse_expr(value).map_err(|e| CaseError::parse(line, e.to_string()))?;
                    sequences.push((seq_name.to_string(), e));
                } else {
                    return Err(CaseError::parse(line, format!("unknown field '{key}'")));
                }
            }
        }
    }

    let case = CaseFile {
        name,
        u_expr: u_expr.ok_or(CaseError::MissingField("scheme.u"))?,
        v_expr: v_expr.ok_or(CaseError::MissingField("scheme.v"))?,
        start_index: start_index.unwrap_or(1),
        modulus: modulus.ok_or(CaseError::MissingField("modulus"))?,
        exponents_expr: exponents.ok_or(CaseError::MissingField("exponents"))?,
        horizon: horizon.ok_or(CaseError::MissingField("horizon"))?,
        base_expr: base,
        sequences,
    };
    if case.sequences.is_empty() {
        return Err(CaseError::MissingField("sequences.<name>"));
    }
    if case.horizon < case.start_index {
        return Err(CaseError::parse(
            1,
            format!("horizon {} is below start_index {}", case.horizon, case.start_index),
        ));
    }

    let mut claims = Vec::with_capacity(raw_claims.len());
    for (line, raw) in raw_claims {
        claims.push(parse_claim(&raw, &case, line)?);
    }
    Ok(CaseDoc { case, claims })
}

fn parse_claim(raw: &str, case: &CaseFile, line: usize) -> Result<Claim, CaseError> {
    let mut words = raw.split_whitespace();
    let kind = words.next().unwrap_or("");
    let seq = words
        .next()
        .ok_or_else(|| CaseError::parse(line, "claim is missing a sequence name"))?
        .to_string();
    if !case.sequences.iter().any(|(n, _)| *n == seq) {
        return Err(CaseError::parse(line, format!("claim references unknown sequence '{seq}'")));
    }
    let rest: Vec<&str> = words.collect();
    match kind {
        "verdict" => {
            let (space, expect, tol) = match rest[..] {
                [space, expect] => (space, expect, None),
                [space, expect, tol] => {
                    let tol: f64 = tol.parse().map_err(|_| {
                        CaseError::parse(line, "verdict tolerance must be a real number")
                    })?;
                    if !(tol.is_finite() && tol > 0.0) {
                        return Err(CaseError::parse(line, "verdict tolerance must be positive"));
                    }
                    (space, expect, Some(tol))
                }
                _ => {
                    return Err(CaseError::parse(
                        line,
                        "expected 'verdict <seq> <space> consistent|inconsistent [tol]'",
                    ))
                }
            };
            let space: SpaceTarget =
                space.parse().map_err(|e| CaseError::parse(line, format!("{e}")))?;
            let expect = match expect {
                "consistent" => Verdict::ConsistentWithMembership,
                "inconsistent" => Verdict::InconsistentWithMembership,
                other => {
                    return Err(CaseError::parse(
                        line,
                        format!("expected consistent or inconsistent, got '{other}'"),
                    ))
                }
            };
            Ok(Claim::Verdict { seq, space, expect, tol })
        }
        "value" => {
            let [k, expected, tol] = rest[..] else {
                return Err(CaseError::parse(
                    line,
                    "expected 'value <seq> <k> <expected> <abs-tol>'",
                ));
            };
            let k: u64 =
                k.parse().map_err(|_| CaseError::parse(line, "claim index must be an integer"))?;
            let expected: f64 = expected
                .parse()
                .map_err(|_| CaseError::parse(line, "expected value must be a real number"))?;
            let tol: f64 = tol
                .parse()
                .map_err(|_| CaseError::parse(line, "tolerance must be a real number"))?;
            if !(tol.is_finite() && tol >= 0.0) {
                return Err(CaseError::parse(line, "tolerance must be nonnegative"));
            }
            Ok(Claim::Value { seq, k, expected, tol })
        }
        "closed_form" => {
            if rest.len() < 2 {
                return Err(CaseError::parse(
                    line,
                    "expected 'closed_form <seq> <expr> <rel-tol>'",
                ));
            }
            let rel_tol: f64 = rest[rest.len() - 1]
                .parse()
                .map_err(|_| CaseError::parse(line, "tolerance must be a real number"))?;
            if !(rel_tol.is_finite() && rel_tol >= 0.0) {
                return Err(CaseError::parse(line, "tolerance must be nonnegative"));
            }
            let expr_text = rest[..rest.len() - 1].join(" ");
            let expr =
                parse_expr(&expr_text).map_err(|e| CaseError::parse(line, e.to_string()))?;
            if expr.is_fuzzy() {
                return Err(CaseError::parse(line, "closed form must be a scalar expression"));
            }
            Ok(Claim::ClosedForm { seq, expr, rel_tol })
        }
        other => Err(CaseError::parse(
            line,
            format!("unknown claim kind '{other}'; expected verdict, value, or closed_form"),
        )),
    }
}

impl CaseFile {
    /// The weight scheme, with the printed expressions as description.
    pub fn scheme(&self) -> WeightScheme {
        WeightScheme::new(
            format!("u = {}, v = {}", self.u_expr, self.v_expr),
            self.start_index,
            scalar_generator(self.u_expr.clone()),
            scalar_generator(self.v_expr.clone()),
        )
    }

    /// The exponent sequence over `start..=horizon`; a `k`-free expression
    /// short-circuits to the constant representation.
    pub fn exponent_seq(&self, horizon: u64) -> Result<ExponentSeq, SpaceError> {
        if self.exponents_expr.depends_on_k() {
            Ok(ExponentSeq::new(
                self.start_index,
                horizon,
                &scalar_generator(self.exponents_expr.clone()),
            )?)
        } else {
            let r = eval_scalar(&self.exponents_expr, self.start_index).map_err(|e| {
                SpaceError::Exponent(crate::spaces::ExponentError::Gen(crate::GenError::new(
                    self.start_index,
                    e.kind.to_string(),
                )))
            })?;
            Ok(ExponentSeq::constant(r, self.start_index, horizon)?)
        }
    }

    pub fn sequence_expr(&self, name: &str) -> Result<&Expr, CaseRunError> {
        self.sequences
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, e)| e)
            .ok_or_else(|| CaseRunError::UnknownSequence(name.to_string()))
    }

    /// Transform series `t_k` for the named sequence about the file's
    /// base (default `0̄`), up to `horizon`.
    pub fn transform_for(&self, name: &str, horizon: u64) -> Result<TransformSeries, CaseRunError> {
        let expr = self.sequence_expr(name)?.clone();
        let xs = fuzzy_generator(expr);
        let scheme = self.scheme();
        let ts = match &self.base_expr {
            None => transform(&xs, &scheme, horizon).map_err(SpaceError::Transform)?,
            Some(base) => {
                let base = dsl::eval_fuzzy(base, self.start_index)?;
                transform_about(&xs, &base, &scheme, horizon).map_err(SpaceError::Transform)?
            }
        };
        Ok(ts)
    }

    /// Transform and scalar series for the named sequence.
    pub fn series_for(
        &self,
        name: &str,
        horizon: u64,
    ) -> Result<(TransformSeries, ScalarSeries), CaseRunError> {
        let ts = self.transform_for(name, horizon)?;
        let r = self.exponent_seq(horizon)?;
        let s = scalar_series(&ts, &self.modulus, &r)?;
        Ok((ts, s))
    }
}

impl CaseDoc {
    /// Checks every claim at the file horizon. Claim failures are reported
    /// as outcomes; infrastructure failures (a generator error, a bad
    /// window) surface as errors.
    pub fn evaluate_claims(&self, cfg: &DiagnoseConfig) -> Result<Vec<ClaimOutcome>, CaseRunError> {
        let mut outcomes = Vec::with_capacity(self.claims.len());
        for claim in &self.claims {
            outcomes.push(self.evaluate_claim(claim, cfg)?);
        }
        Ok(outcomes)
    }

    fn evaluate_claim(
        &self,
        claim: &Claim,
        cfg: &DiagnoseConfig,
    ) -> Result<ClaimOutcome, CaseRunError> {
        let case = &self.case;
        match claim {
            Claim::Verdict { seq, space, expect, tol } => {
                let (_, s) = case.series_for(seq, case.horizon)?;
                let cfg = match tol {
                    Some(tol) => DiagnoseConfig { tol: *tol, ..*cfg },
                    None => *cfg,
                };
                let verdict = diagnose(&s, *space, &cfg)?;
                Ok(ClaimOutcome {
                    claim: claim.to_string(),
                    pass: verdict.verdict == *expect,
                    detail: format!(
                        "diagnosed {} at horizon {}: {}",
                        verdict.verdict, verdict.horizon, verdict.diagnostics.note
                    ),
                })
            }
            Claim::Value { seq, k, expected, tol } => {
                if !(case.start_index..=case.horizon).contains(k) {
                    return Err(CaseRunError::ClaimIndexOutOfRange {
                        k: *k,
                        start: case.start_index,
                        horizon: case.horizon,
                    });
                }
                let ts = case.transform_for(seq, case.horizon)?;
                let measured = ts.t(*k);
                Ok(ClaimOutcome {
                    claim: claim.to_string(),
                    pass: (measured - expected).abs() <= *tol,
                    detail: format!("t_{k} = {measured:.16e}, expected {expected:.16e}"),
                })
            }
            Claim::ClosedForm { seq, expr, rel_tol } => {
                let ts = case.transform_for(seq, case.horizon)?;
                let mut worst: (u64, f64) = (case.start_index, 0.0);
                for (k, t) in ts.iter() {
                    let reference = eval_scalar(expr, k)?;
                    let rel = (t - reference).abs() / reference.abs().max(f64::MIN_POSITIVE);
                    if rel > worst.1 {
                        worst = (k, rel);
                    }
                }
                Ok(ClaimOutcome {
                    claim: claim.to_string(),
                    pass: worst.1 <= *rel_tol,
                    detail: format!(
                        "worst relative deviation {:.3e} at k = {}",
                        worst.1, worst.0
                    ),
                })
            }
        }
    }
}

//! Fuzzy real numbers as piecewise-linear level sets.
//!
//! A fuzzy real number is stored as an ordered list of [`AlphaLevel`]s
//! `(α, lower, upper)` with `α` strictly increasing from 0 to 1. Between
//! grid levels the cut endpoints interpolate linearly, so every number in
//! this module is piecewise linear in `α`. The representation is valid when
//!
//! 1. `lower(α)` is non-decreasing in `α`,
//! 2. `upper(α)` is non-increasing in `α`,
//! 3. both endpoint functions are (piecewise-linear, hence right-)
//!    continuous at `α = 0`, and
//! 4. `lower(1) ≤ upper(1)`.
//!
//! Together these make the level sets a nested family of closed intervals,
//! which is exactly the classical characterisation of a fuzzy real number by
//! its α-cuts. Arithmetic is performed level-wise on the union of the two
//! operands' α grids; for addition, negation, and scaling this is exact
//! everywhere, while for multiplication the true cut endpoints are quadratic
//! in `α` between grid levels, so the product is exact at grid levels
//! (including the support at `α = 0`) and a piecewise-linear approximation
//! in between.

use smallvec::SmallVec;
use std::fmt;
use thiserror::Error;

use crate::tol;

/// One level of a fuzzy number: the cut `[lower, upper]` at height `alpha`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaLevel {
    pub alpha: f64,
    pub lower: f64,
    pub upper: f64,
}

impl AlphaLevel {
    pub fn new(alpha: f64, lower: f64, upper: f64) -> Self {
        AlphaLevel { alpha, lower, upper }
    }
}

/// Most numbers in practice are crisp or triangular (two levels); keep a
/// little headroom inline so that level-wise arithmetic rarely allocates.
type Levels = SmallVec<[AlphaLevel; 4]>;

/// A fuzzy real number with piecewise-linear α-cut endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyNumber {
    levels: Levels,
}

/// Result of comparing two fuzzy numbers level-wise (lower and upper
/// endpoints compared separately at every α).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderVerdict {
    /// Both endpoint functions coincide within tolerance.
    Equal,
    /// `lower_X ≤ lower_Y` and `upper_X ≤ upper_Y` at every α.
    LessOrEqual,
    /// The reverse inequalities hold at every α.
    GreaterOrEqual,
    /// Neither direction holds everywhere.
    Incomparable,
}

/// A single violation of the level-set representation invariants.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    Empty,
    NonFinite { index: usize },
    AlphaOutOfRange { index: usize, alpha: f64 },
    AlphaNotIncreasing { index: usize, prev: f64, next: f64 },
    MissingBottom,
    MissingTop,
    InvertedInterval { alpha: f64, lower: f64, upper: f64 },
    LowerDecreasing { alpha: f64, prev: f64, next: f64 },
    UpperIncreasing { alpha: f64, prev: f64, next: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Empty => write!(f, "level list is empty"),
            Violation::NonFinite { index } => {
                write!(f, "level {index} contains a non-finite value")
            }
            Violation::AlphaOutOfRange { index, alpha } => {
                write!(f, "level {index} has alpha = {alpha} outside [0, 1]")
            }
            Violation::AlphaNotIncreasing { index, prev, next } => write!(
                f,
                "alpha must be strictly increasing: level {index} has {next} after {prev}"
            ),
            Violation::MissingBottom => write!(f, "no level at alpha = 0 (support missing)"),
            Violation::MissingTop => write!(f, "no level at alpha = 1 (core missing)"),
            Violation::InvertedInterval { alpha, lower, upper } => {
                write!(f, "interval at alpha = {alpha} is inverted: [{lower}, {upper}]")
            }
            Violation::LowerDecreasing { alpha, prev, next } => write!(
                f,
                "lower endpoint must be non-decreasing: drops from {prev} to {next} at alpha = {alpha}"
            ),
            Violation::UpperIncreasing { alpha, prev, next } => write!(
                f,
                "upper endpoint must be non-increasing: rises from {prev} to {next} at alpha = {alpha}"
            ),
        }
    }
}

/// Outcome of checking a raw level list against the representation
/// invariants. An empty violation list means the levels form a valid fuzzy
/// number as given (no sorting or merging is applied here).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum FuzzyError {
    #[error("invalid level set:\n{0}")]
    Invalid(ValidationReport),
    #[error("conflicting duplicate levels at alpha = {alpha}: [{al}, {au}] vs [{bl}, {bu}]")]
    ConflictingDuplicate { alpha: f64, al: f64, au: f64, bl: f64, bu: f64 },
    #[error("alpha = {alpha} outside [0, 1]")]
    AlphaOutOfRange { alpha: f64 },
    #[error("non-finite input to {what}")]
    NonFinite { what: &'static str },
    #[error("triangular endpoints must satisfy a <= b <= c, got {a}, {b}, {c}")]
    BadTriangle { a: f64, b: f64, c: f64 },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Checks a raw level list against the representation invariants and
/// reports every violation found, with witnesses.
pub fn validate_levels(levels: &[AlphaLevel]) -> ValidationReport {
    let mut violations = Vec::new();
    if levels.is_empty() {
        violations.push(Violation::Empty);
        return ValidationReport { violations };
    }
    let mut all_finite = true;
    for (index, lv) in levels.iter().enumerate() {
        if !(lv.alpha.is_finite() && lv.lower.is_finite() && lv.upper.is_finite()) {
            violations.push(Violation::NonFinite { index });
            all_finite = false;
            continue;
        }
        if !(0.0..=1.0).contains(&lv.alpha) {
            violations.push(Violation::AlphaOutOfRange { index, alpha: lv.alpha });
        }
        if lv.lower > lv.upper {
            violations.push(Violation::InvertedInterval {
                alpha: lv.alpha,
                lower: lv.lower,
                upper: lv.upper,
            });
        }
    }
    if !all_finite {
        return ValidationReport { violations };
    }
    if levels.first().map(|l| l.alpha) != Some(0.0) {
        violations.push(Violation::MissingBottom);
    }
    if levels.last().map(|l| l.alpha) != Some(1.0) {
        violations.push(Violation::MissingTop);
    }
    for (index, pair) in levels.windows(2).enumerate() {
        let (a, b) = (pair[0], pair[1]);
        if b.alpha <= a.alpha {
            violations.push(Violation::AlphaNotIncreasing {
                index: index + 1,
                prev: a.alpha,
                next: b.alpha,
            });
        }
        if b.lower < a.lower {
            violations.push(Violation::LowerDecreasing {
                alpha: b.alpha,
                prev: a.lower,
                next: b.lower,
            });
        }
        if b.upper > a.upper {
            violations.push(Violation::UpperIncreasing {
                alpha: b.alpha,
                prev: a.upper,
                next: b.upper,
            });
        }
    }
    ValidationReport { violations }
}

fn lerp(a: f64, b: f64, w: f64) -> f64 {
    a + w * (b - a)
}

impl FuzzyNumber {
    /// Builds a fuzzy number from an arbitrary collection of levels.
    ///
    /// Levels are sorted by `alpha`; duplicate `alpha` entries are merged by
    /// keeping the widest interval when the duplicates are nested, and
    /// rejected as contradictory otherwise. The merged list must then pass
    /// [`validate_levels`].
    pub fn from_levels(levels: impl IntoIterator<Item = AlphaLevel>) -> Result<Self, FuzzyError> {
        let mut lv: Levels = levels.into_iter().collect();
        if lv.iter().any(|l| !(l.alpha.is_finite() && l.lower.is_finite() && l.upper.is_finite())) {
            return Err(FuzzyError::NonFinite { what: "level set" });
        }
        lv.sort_by(|a, b| a.alpha.partial_cmp(&b.alpha).expect("finite alphas"));
        let mut merged: Levels = Levels::new();
        for l in lv {
            match merged.last_mut() {
                Some(prev) if prev.alpha == l.alpha => {
                    let contains = |outer: &AlphaLevel, inner: &AlphaLevel| {
                        outer.lower <= inner.lower + tol::ENDPOINT_ABS
                            && inner.upper <= outer.upper + tol::ENDPOINT_ABS
                    };
                    if contains(prev, &l) {
                        // keep the wider existing interval
                    } else if contains(&l, prev) {
                        prev.lower = l.lower;
                        prev.upper = l.upper;
                    } else {
                        return Err(FuzzyError::ConflictingDuplicate {
                            alpha: l.alpha,
                            al: prev.lower,
                            au: prev.upper,
                            bl: l.lower,
                            bu: l.upper,
                        });
                    }
                }
                _ => merged.push(l),
            }
        }
        let report = validate_levels(&merged);
        if !report.is_valid() {
            return Err(FuzzyError::Invalid(report));
        }
        Ok(FuzzyNumber { levels: merged })
    }

    /// Rebuilds a number from endpoints computed by interval arithmetic.
    ///
    /// The exact values satisfy the representation invariants, but a few
    /// ulps of rounding can produce microscopic monotonicity wobble; this
    /// constructor clamps it away and panics if the damage exceeds
    /// [`tol::NORMALIZE_ABS`], which would indicate a logic error rather
    /// than rounding.
    fn from_computed(mut lv: Levels) -> Self {
        debug_assert!(!lv.is_empty());
        // Drop duplicate alphas introduced by breakpoint refinement.
        lv.dedup_by(|b, a| a.alpha == b.alpha);
        for i in 0..lv.len() {
            let (lower, upper) = (lv[i].lower, lv[i].upper);
            if lower > upper {
                assert!(
                    lower - upper <= tol::NORMALIZE_ABS,
                    "interval arithmetic produced an inverted cut at alpha = {}: [{lower}, {upper}]",
                    lv[i].alpha
                );
                let mid = 0.5 * (lower + upper);
                lv[i].lower = mid;
                lv[i].upper = mid;
            }
            if i > 0 {
                let (pl, pu) = (lv[i - 1].lower, lv[i - 1].upper);
                if lv[i].lower < pl {
                    assert!(
                        pl - lv[i].lower <= tol::NORMALIZE_ABS,
                        "lower endpoint dropped by more than rounding at alpha = {}",
                        lv[i].alpha
                    );
                    lv[i].lower = pl;
                }
                if lv[i].upper > pu {
                    assert!(
                        lv[i].upper - pu <= tol::NORMALIZE_ABS,
                        "upper endpoint rose by more than rounding at alpha = {}",
                        lv[i].alpha
                    );
                    lv[i].upper = pu;
                }
            }
        }
        let last = lv.len() - 1;
        if lv[last].lower > lv[last].upper {
            let mid = 0.5 * (lv[last].lower + lv[last].upper);
            lv[last].lower = mid;
            lv[last].upper = mid;
        }
        debug_assert!(validate_levels(&lv).is_valid());
        FuzzyNumber { levels: lv }
    }

    /// The crisp (classical) real number `r`: every cut is `[r, r]`.
    pub fn crisp(r: f64) -> Result<Self, FuzzyError> {
        if !r.is_finite() {
            return Err(FuzzyError::NonFinite { what: "crisp" });
        }
        Ok(FuzzyNumber {
            levels: Levels::from_slice(&[AlphaLevel::new(0.0, r, r), AlphaLevel::new(1.0, r, r)]),
        })
    }

    /// The crisp zero, written `0̄` in the series definitions.
    pub fn zero() -> Self {
        FuzzyNumber::crisp(0.0).expect("zero is finite")
    }

    /// Triangular number with support `[a, c]` and core `b`.
    pub fn triangular(a: f64, b: f64, c: f64) -> Result<Self, FuzzyError> {
        if !(a.is_finite() && b.is_finite() && c.is_finite()) {
            return Err(FuzzyError::NonFinite { what: "triangular" });
        }
        if !(a <= b && b <= c) {
            return Err(FuzzyError::BadTriangle { a, b, c });
        }
        Ok(FuzzyNumber {
            levels: Levels::from_slice(&[AlphaLevel::new(0.0, a, c), AlphaLevel::new(1.0, b, b)]),
        })
    }

    /// The stored grid levels (sorted, strictly increasing α from 0 to 1).
    pub fn levels(&self) -> &[AlphaLevel] {
        &self.levels
    }

    /// The cut `[lower(α), upper(α)]`, linearly interpolated between grid
    /// levels.
    ///
    /// # Errors
    /// `AlphaOutOfRange` when `alpha` is not in `[0, 1]`.
    pub fn alpha_cut(&self, alpha: f64) -> Result<(f64, f64), FuzzyError> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(FuzzyError::AlphaOutOfRange { alpha });
        }
        Ok(self.cut_unchecked(alpha))
    }

    fn cut_unchecked(&self, alpha: f64) -> (f64, f64) {
        let ls = &self.levels;
        match ls.binary_search_by(|lv| lv.alpha.partial_cmp(&alpha).expect("finite alpha")) {
            Ok(i) => (ls[i].lower, ls[i].upper),
            Err(i) => {
                // 0 = ls[0].alpha < alpha < ls[last].alpha = 1, so both
                // neighbours exist.
                let lo = ls[i - 1];
                let hi = ls[i];
                let w = (alpha - lo.alpha) / (hi.alpha - lo.alpha);
                (lerp(lo.lower, hi.lower, w), lerp(lo.upper, hi.upper, w))
            }
        }
    }

    /// Membership grade `X(t) = sup { α : t ∈ [lower(α), upper(α)] }`.
    ///
    /// Because `lower` is non-decreasing and `upper` non-increasing, the set
    /// of α whose cut contains `t` is an interval `[0, A]`; the supremum is
    /// found by solving the piecewise-linear crossing on each side.
    pub fn membership(&self, t: f64) -> f64 {
        let support = self.levels[0];
        if t < support.lower || t > support.upper {
            return 0.0;
        }
        let ls = &self.levels;
        // Largest α with lower(α) ≤ t.
        let a = if ls[ls.len() - 1].lower <= t {
            1.0
        } else {
            let j = ls.partition_point(|lv| lv.lower <= t);
            let (lo, hi) = (ls[j - 1], ls[j]);
            lo.alpha + (t - lo.lower) * (hi.alpha - lo.alpha) / (hi.lower - lo.lower)
        };
        // Largest α with upper(α) ≥ t.
        let b = if ls[ls.len() - 1].upper >= t {
            1.0
        } else {
            let j = ls.partition_point(|lv| lv.upper >= t);
            let (lo, hi) = (ls[j - 1], ls[j]);
            lo.alpha + (lo.upper - t) * (hi.alpha - lo.alpha) / (lo.upper - hi.upper)
        };
        a.min(b)
    }

    /// Level-wise sum: exact for piecewise-linear operands.
    pub fn add(&self, other: &FuzzyNumber) -> FuzzyNumber {
        let mut lv = Levels::new();
        for alpha in merged_alphas(self, other) {
            let (al, au) = self.cut_unchecked(alpha);
            let (bl, bu) = other.cut_unchecked(alpha);
            lv.push(AlphaLevel::new(alpha, al + bl, au + bu));
        }
        FuzzyNumber::from_computed(lv)
    }

    /// Level-wise negation `[-upper, -lower]`; exact.
    pub fn neg(&self) -> FuzzyNumber {
        let lv = self
            .levels
            .iter()
            .map(|l| AlphaLevel::new(l.alpha, -l.upper, -l.lower))
            .collect();
        FuzzyNumber::from_computed(lv)
    }

    /// Scalar multiple; the cut endpoints swap roles for negative `c`.
    ///
    /// # Panics
    /// If `c` is not finite.
    pub fn scale(&self, c: f64) -> FuzzyNumber {
        assert!(c.is_finite(), "scale factor must be finite");
        let lv = self
            .levels
            .iter()
            .map(|l| {
                if c >= 0.0 {
                    AlphaLevel::new(l.alpha, c * l.lower, c * l.upper)
                } else {
                    AlphaLevel::new(l.alpha, c * l.upper, c * l.lower)
                }
            })
            .collect();
        FuzzyNumber::from_computed(lv)
    }

    /// Level-wise interval product on the merged α grid.
    ///
    /// The true product endpoints are quadratic in α between breakpoints, so
    /// the result is exact at every grid level (in particular at the support
    /// `α = 0` and the core `α = 1`) and linearly interpolated in between.
    pub fn mul(&self, other: &FuzzyNumber) -> FuzzyNumber {
        let mut lv = Levels::new();
        for alpha in merged_alphas(self, other) {
            let (al, au) = self.cut_unchecked(alpha);
            let (bl, bu) = other.cut_unchecked(alpha);
            let candidates = [al * bl, al * bu, au * bl, au * bu];
            let lower = candidates.iter().copied().fold(f64::INFINITY, f64::min);
            let upper = candidates.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            lv.push(AlphaLevel::new(alpha, lower, upper));
        }
        FuzzyNumber::from_computed(lv)
    }

    /// Fuzzy absolute value: `|X|(t) = max(X(t), X(-t))` for `t ≥ 0` and 0
    /// below. On cuts this is
    ///
    /// ```text
    /// |X|^α = [ max(0, lower, -upper), max(-lower, upper) ]
    /// ```
    ///
    /// The endpoints are maxima of linear functions of α, so extra
    /// breakpoints are inserted wherever `lower`, `upper`, or `lower+upper`
    /// crosses zero; between the refined breakpoints the result is linear
    /// and therefore exact.
    pub fn abs(&self) -> FuzzyNumber {
        let mut alphas: SmallVec<[f64; 8]> = self.levels.iter().map(|l| l.alpha).collect();
        for pair in self.levels.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            for (fa, fb) in [
                (a.lower, b.lower),
                (a.upper, b.upper),
                (a.lower + a.upper, b.lower + b.upper),
            ] {
                if (fa < 0.0 && fb > 0.0) || (fa > 0.0 && fb < 0.0) {
                    let w = fa / (fa - fb);
                    alphas.push(lerp(a.alpha, b.alpha, w));
                }
            }
        }
        alphas.sort_by(|x, y| x.partial_cmp(y).expect("finite alphas"));
        alphas.dedup();
        let lv = alphas
            .iter()
            .map(|&alpha| {
                let (l, u) = self.cut_unchecked(alpha);
                AlphaLevel::new(alpha, l.max(-u).max(0.0), (-l).max(u))
            })
            .collect();
        FuzzyNumber::from_computed(lv)
    }

    /// Distance to the crisp zero, `max(|lower(0)|, |upper(0)|)`.
    ///
    /// The supremum over α of the endpoint deviations is attained at the
    /// support because the endpoint functions are monotone, which collapses
    /// the metric to this closed form.
    pub fn distance_to_zero(&self) -> f64 {
        let s = self.levels[0];
        s.lower.abs().max(s.upper.abs())
    }
}

/// Union of the two operands' α grids, sorted and deduplicated.
fn merged_alphas(a: &FuzzyNumber, b: &FuzzyNumber) -> SmallVec<[f64; 8]> {
    let mut out: SmallVec<[f64; 8]> = SmallVec::new();
    let (xs, ys) = (&a.levels, &b.levels);
    let (mut i, mut j) = (0, 0);
    while i < xs.len() || j < ys.len() {
        let next = match (xs.get(i), ys.get(j)) {
            (Some(x), Some(y)) => {
                if x.alpha < y.alpha {
                    i += 1;
                    x.alpha
                } else if y.alpha < x.alpha {
                    j += 1;
                    y.alpha
                } else {
                    i += 1;
                    j += 1;
                    x.alpha
                }
            }
            (Some(x), None) => {
                i += 1;
                x.alpha
            }
            (None, Some(y)) => {
                j += 1;
                y.alpha
            }
            (None, None) => unreachable!(),
        };
        out.push(next);
    }
    out
}

/// The supremum metric
/// `d(X, Y) = sup_α max(|X̲(α) − Y̲(α)|, |X̄(α) − Ȳ(α)|)`.
///
/// On the merged grid both endpoint differences are piecewise linear in α,
/// and the absolute value of a linear function attains its maximum at a
/// segment endpoint, so taking the maximum over merged breakpoints is exact.
pub fn distance(x: &FuzzyNumber, y: &FuzzyNumber) -> f64 {
    let mut sup: f64 = 0.0;
    for alpha in merged_alphas(x, y) {
        let (xl, xu) = x.cut_unchecked(alpha);
        let (yl, yu) = y.cut_unchecked(alpha);
        sup = sup.max((xl - yl).abs()).max((xu - yu).abs());
    }
    sup
}

/// Level-wise partial order: `X ⪯ Y` iff `X̲(α) ≤ Ȳ̲(α)` and
/// `X̄(α) ≤ Ȳ(α)` for every α. Comparisons allow [`tol::ENDPOINT_ABS`] of
/// slack so that numbers rebuilt by arithmetic compare as intended.
pub fn order(x: &FuzzyNumber, y: &FuzzyNumber) -> OrderVerdict {
    let mut le = true;
    let mut ge = true;
    for alpha in merged_alphas(x, y) {
        let (xl, xu) = x.cut_unchecked(alpha);
        let (yl, yu) = y.cut_unchecked(alpha);
        le &= xl <= yl + tol::ENDPOINT_ABS && xu <= yu + tol::ENDPOINT_ABS;
        ge &= yl <= xl + tol::ENDPOINT_ABS && yu <= xu + tol::ENDPOINT_ABS;
        if !le && !ge {
            return OrderVerdict::Incomparable;
        }
    }
    match (le, ge) {
        (true, true) => OrderVerdict::Equal,
        (true, false) => OrderVerdict::LessOrEqual,
        (false, true) => OrderVerdict::GreaterOrEqual,
        (false, false) => unreachable!("loop exits early in this case"),
    }
}

/// Renders a fuzzy number as a level-per-line text document.
///
/// ```text
/// 0 -1 1
/// 0.5 -0.25 0.25
/// 1 0 0
/// ```
///
/// The float formatting is shortest-round-trip, so
/// `from_text(&to_text(x)) == x` exactly.
pub fn to_text(x: &FuzzyNumber) -> String {
    use fmt::Write;
    let mut out = String::new();
    for l in x.levels() {
        writeln!(out, "{} {} {}", l.alpha, l.lower, l.upper).expect("string write");
    }
    out
}

/// Parses the textual fuzzy-number format.
///
/// Accepts the level-per-line form produced by [`to_text`] and the
/// shorthands `crisp r` and `tri a b c`. Blank lines and `#` comments are
/// ignored.
pub fn from_text(text: &str) -> Result<FuzzyNumber, FuzzyError> {
    let mut levels: Vec<AlphaLevel> = Vec::new();
    let mut shorthand: Option<FuzzyNumber> = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| FuzzyError::Parse { line: lineno + 1, message };
        if shorthand.is_some() {
            return Err(err("unexpected content after a shorthand form".into()));
        }
        let mut parts = line.split_whitespace();
        let head = parts.next().expect("line is non-empty");
        let parse_num = |s: &str| {
            s.parse::<f64>().map_err(|_| FuzzyError::Parse {
                line: lineno + 1,
                message: format!("expected a number, got {s:?}"),
            })
        };
        match head {
            "crisp" => {
                let r = parse_num(parts.next().ok_or_else(|| err("crisp needs a value".into()))?)?;
                if parts.next().is_some() {
                    return Err(err("crisp takes exactly one value".into()));
                }
                if !levels.is_empty() {
                    return Err(err("shorthand cannot follow level lines".into()));
                }
                shorthand = Some(FuzzyNumber::crisp(r)?);
            }
            "tri" => {
                let mut take = || {
                    parts
                        .next()
                        .ok_or_else(|| err("tri needs three values".into()))
                        .and_then(parse_num)
                };
                let (a, b, c) = (take()?, take()?, take()?);
                if parts.next().is_some() {
                    return Err(err("tri takes exactly three values".into()));
                }
                if !levels.is_empty() {
                    return Err(err("shorthand cannot follow level lines".into()));
                }
                shorthand = Some(FuzzyNumber::triangular(a, b, c)?);
            }
            _ => {
                let alpha = parse_num(head)?;
                let lower =
                    parse_num(parts.next().ok_or_else(|| err("level needs three numbers".into()))?)?;
                let upper =
                    parse_num(parts.next().ok_or_else(|| err("level needs three numbers".into()))?)?;
                if parts.next().is_some() {
                    return Err(err("level takes exactly three numbers".into()));
                }
                levels.push(AlphaLevel::new(alpha, lower, upper));
            }
        }
    }
    if let Some(x) = shorthand {
        return Ok(x);
    }
    FuzzyNumber::from_levels(levels)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tri(a: f64, b: f64, c: f64) -> FuzzyNumber {
        FuzzyNumber::triangular(a, b, c).unwrap()
    }

    fn crisp(r: f64) -> FuzzyNumber {
        FuzzyNumber::crisp(r).unwrap()
    }

    #[test]
    fn crisp_membership_is_an_indicator() {
        let x = crisp(2.0);
        assert_eq!(x.membership(2.0), 1.0);
        assert_eq!(x.membership(2.0 + 1e-9), 0.0);
        assert_eq!(x.membership(2.0 - 1e-9), 0.0);
    }

    #[test]
    fn triangular_cut_interpolates() {
        let x = tri(0.0, 1.0, 2.0);
        assert_eq!(x.alpha_cut(0.0).unwrap(), (0.0, 2.0));
        assert_eq!(x.alpha_cut(0.5).unwrap(), (0.5, 1.5));
        assert_eq!(x.alpha_cut(1.0).unwrap(), (1.0, 1.0));
        assert!(matches!(x.alpha_cut(1.5), Err(FuzzyError::AlphaOutOfRange { .. })));
    }

    #[test]
    fn triangular_membership_matches_hat_function() {
        let x = tri(0.0, 1.0, 2.0);
        assert_eq!(x.membership(0.5), 0.5);
        assert_eq!(x.membership(1.0), 1.0);
        assert_eq!(x.membership(1.5), 0.5);
        assert_eq!(x.membership(-0.1), 0.0);
        assert_eq!(x.membership(2.1), 0.0);
        assert_eq!(x.membership(0.0), 0.0);
    }

    #[test]
    fn membership_handles_flat_lower_runs() {
        // lower(α) is flat at 0 up to α = 0.5, then rises to 1.
        let x = FuzzyNumber::from_levels([
            AlphaLevel::new(0.0, 0.0, 3.0),
            AlphaLevel::new(0.5, 0.0, 2.0),
            AlphaLevel::new(1.0, 1.0, 1.0),
        ])
        .unwrap();
        // t = 0 is covered exactly for α ≤ 0.5.
        assert_eq!(x.membership(0.0), 0.5);
        // t = 1 is inside every cut.
        assert_eq!(x.membership(1.0), 1.0);
    }

    #[test]
    fn validate_flags_each_clause() {
        let ok = validate_levels(&[
            AlphaLevel::new(0.0, -1.0, 1.0),
            AlphaLevel::new(1.0, 0.0, 0.0),
        ]);
        assert!(ok.is_valid());

        let r = validate_levels(&[]);
        assert_eq!(r.violations, vec![Violation::Empty]);

        let r = validate_levels(&[
            AlphaLevel::new(0.0, -1.0, 1.0),
            AlphaLevel::new(0.5, -2.0, 1.0), // lower drops
            AlphaLevel::new(1.0, 0.0, 2.0),  // upper rises
        ]);
        assert!(r.violations.iter().any(|v| matches!(v, Violation::LowerDecreasing { .. })));
        assert!(r.violations.iter().any(|v| matches!(v, Violation::UpperIncreasing { .. })));

        let r = validate_levels(&[AlphaLevel::new(0.2, 0.0, 1.0), AlphaLevel::new(0.9, 0.5, 0.9)]);
        assert!(r.violations.contains(&Violation::MissingBottom));
        assert!(r.violations.contains(&Violation::MissingTop));

        let r = validate_levels(&[
            AlphaLevel::new(0.0, -1.0, 1.0),
            AlphaLevel::new(1.0, 0.5, -0.5), // crossed at the core
        ]);
        assert!(r
            .violations
            .iter()
            .any(|v| matches!(v, Violation::InvertedInterval { alpha, .. } if *alpha == 1.0)));

        let r = validate_levels(&[
            AlphaLevel::new(0.0, 0.0, 1.0),
            AlphaLevel::new(1.5, 0.0, 1.0),
        ]);
        assert!(r.violations.iter().any(|v| matches!(v, Violation::AlphaOutOfRange { .. })));

        let r = validate_levels(&[
            AlphaLevel::new(0.0, 0.0, 1.0),
            AlphaLevel::new(f64::NAN, 0.0, 1.0),
        ]);
        assert!(r.violations.iter().any(|v| matches!(v, Violation::NonFinite { .. })));
    }

    #[test]
    fn from_levels_merges_nested_duplicates_keeping_the_widest() {
        let x = FuzzyNumber::from_levels([
            AlphaLevel::new(0.0, -1.0, 1.0),
            AlphaLevel::new(0.0, -2.0, 2.0),
            AlphaLevel::new(1.0, 0.0, 0.0),
        ])
        .unwrap();
        assert_eq!(x.levels()[0], AlphaLevel::new(0.0, -2.0, 2.0));
    }

    #[test]
    fn from_levels_rejects_contradictory_duplicates() {
        let err = FuzzyNumber::from_levels([
            AlphaLevel::new(0.0, -1.0, 1.0),
            AlphaLevel::new(0.0, 0.0, 2.0), // overlaps, neither nested
            AlphaLevel::new(1.0, 0.0, 0.0),
        ])
        .unwrap_err();
        assert!(matches!(err, FuzzyError::ConflictingDuplicate { .. }));
    }

    #[test]
    fn addition_is_levelwise_and_exact() {
        let x = tri(0.0, 1.0, 2.0);
        let y = tri(1.0, 2.0, 3.0);
        let sum = x.add(&y);
        assert_eq!(sum, tri(1.0, 3.0, 5.0));
        // Merged grids: adding a three-level number keeps its breakpoint.
        let z = FuzzyNumber::from_levels([
            AlphaLevel::new(0.0, 0.0, 4.0),
            AlphaLevel::new(0.25, 0.5, 2.0),
            AlphaLevel::new(1.0, 1.0, 1.0),
        ])
        .unwrap();
        let s = x.add(&z);
        assert_eq!(s.levels().len(), 3);
        assert_eq!(s.alpha_cut(0.25).unwrap(), (0.25 + 0.5, 1.75 + 2.0));
    }

    #[test]
    fn negation_and_scaling() {
        let x = tri(-1.0, 0.0, 2.0);
        assert_eq!(x.neg(), tri(-2.0, 0.0, 1.0));
        assert_eq!(x.scale(2.0), tri(-2.0, 0.0, 4.0));
        assert_eq!(x.scale(-1.0), tri(-2.0, 0.0, 1.0));
        assert_eq!(x.scale(0.0), crisp(0.0));
    }

    #[test]
    fn product_support_is_exact() {
        // [-k², 0, k²] · [-k, 0, k] has support [-k³, k³]. Product cuts are
        // exact at the merged grid levels and interpolated linearly between
        // them, so the coarse triangles give the chord value at α = 0.5.
        let k = 2.0;
        let x = tri(-k * k, 0.0, k * k);
        let y = tri(-k, 0.0, k);
        let p = x.mul(&y);
        assert_eq!(p.alpha_cut(0.0).unwrap(), (-8.0, 8.0));
        assert_eq!(p.alpha_cut(1.0).unwrap(), (0.0, 0.0));
        assert_eq!(p.alpha_cut(0.5).unwrap(), (-4.0, 4.0));
        assert_eq!(p.distance_to_zero(), 8.0);

        // Refining the inputs with an explicit α = 0.5 level makes the
        // product exact there: the cuts are [-2, 2] · [-1, 1] = [-2, 2].
        let x = FuzzyNumber::from_levels([
            AlphaLevel { alpha: 0.0, lower: -4.0, upper: 4.0 },
            AlphaLevel { alpha: 0.5, lower: -2.0, upper: 2.0 },
            AlphaLevel { alpha: 1.0, lower: 0.0, upper: 0.0 },
        ])
        .unwrap();
        let y = FuzzyNumber::from_levels([
            AlphaLevel { alpha: 0.0, lower: -2.0, upper: 2.0 },
            AlphaLevel { alpha: 0.5, lower: -1.0, upper: 1.0 },
            AlphaLevel { alpha: 1.0, lower: 0.0, upper: 0.0 },
        ])
        .unwrap();
        let p = x.mul(&y);
        assert_eq!(p.alpha_cut(0.5).unwrap(), (-2.0, 2.0));
        assert_eq!(p.distance_to_zero(), 8.0);
    }

    #[test]
    fn abs_worked_example_with_breakpoint_refinement() {
        // X = tri(-2, -1, 3): lower(α) = -2 + α stays negative, while
        // upper(α) = 3 - 4α crosses zero at α = 3/4; the two endpoint
        // magnitudes tie (2 - α = 3 - 4α) at α = 1/3.
        let x = tri(-2.0, -1.0, 3.0);
        let a = x.abs();
        let alphas: Vec<f64> = a.levels().iter().map(|l| l.alpha).collect();
        assert!(alphas.contains(&(1.0 / 3.0)));
        assert!(alphas.contains(&0.75));
        assert_eq!(a.alpha_cut(0.0).unwrap(), (0.0, 3.0));
        assert_eq!(a.alpha_cut(0.5).unwrap(), (0.0, 1.5));
        assert_eq!(a.alpha_cut(1.0).unwrap(), (1.0, 1.0));
        // Past α = 3/4 the cut is [4α - 3, 2 - α].
        let (l, u) = a.alpha_cut(0.875).unwrap();
        assert!((l - 0.5).abs() < 1e-15);
        assert!((u - 1.125).abs() < 1e-15);
    }

    /// Brute-force membership oracle for the absolute value: evaluates
    /// `max(X(t), X(-t))` on a dense t-grid and compares with the membership
    /// function of the constructed `|X|`.
    #[test]
    fn abs_agrees_with_dense_membership_oracle() {
        let samples = [
            tri(-2.0, -1.0, 3.0),
            tri(-3.0, -2.0, -1.0),
            tri(1.0, 2.0, 4.0),
            tri(-1.0, 0.0, 1.0),
            FuzzyNumber::from_levels([
                AlphaLevel::new(0.0, -4.0, 1.0),
                AlphaLevel::new(0.3, -2.0, 0.5),
                AlphaLevel::new(1.0, -1.5, 0.25),
            ])
            .unwrap(),
        ];
        for x in &samples {
            let a = x.abs();
            let bound = x.levels()[0].lower.abs().max(x.levels()[0].upper.abs()) + 0.5;
            let n = 4001;
            for i in 0..n {
                let t = bound * (i as f64) / ((n - 1) as f64);
                let expected = x.membership(t).max(x.membership(-t));
                let got = a.membership(t);
                assert!(
                    (expected - got).abs() <= 1e-9,
                    "abs membership mismatch at t = {t}: {got} vs {expected}"
                );
                assert_eq!(a.membership(-t - 0.25), 0.0, "negative axis must be empty");
            }
        }
    }

    #[test]
    fn abs_of_signed_crisp_numbers() {
        assert_eq!(crisp(-3.0).abs(), crisp(3.0));
        assert_eq!(crisp(3.0).abs(), crisp(3.0));
        assert_eq!(crisp(0.0).abs(), crisp(0.0));
    }

    #[test]
    fn distance_examples() {
        assert_eq!(distance(&crisp(1.0), &crisp(4.0)), 3.0);
        assert_eq!(distance(&tri(0.0, 1.0, 2.0), &crisp(1.0)), 1.0);
        assert_eq!(distance(&tri(0.0, 1.0, 2.0), &tri(0.0, 1.0, 2.0)), 0.0);
        // d(crisp(1/i), 0̄) = 1/i, the distance pattern behind the
        // alternating-series construction.
        for i in 1..=10u32 {
            let v = 1.0 / f64::from(i);
            assert_eq!(distance(&crisp(v), &FuzzyNumber::zero()), v);
            assert_eq!(crisp(v).distance_to_zero(), v);
        }
    }

    #[test]
    fn distance_to_zero_matches_metric_on_mixed_shapes() {
        let samples = [
            tri(-2.0, -1.0, 3.0),
            tri(-5.0, 4.0, 4.5),
            crisp(-7.25),
            FuzzyNumber::from_levels([
                AlphaLevel::new(0.0, -4.0, 1.0),
                AlphaLevel::new(0.5, -2.0, 0.5),
                AlphaLevel::new(1.0, -1.5, 0.25),
            ])
            .unwrap(),
        ];
        let zero = FuzzyNumber::zero();
        for x in &samples {
            assert_eq!(x.distance_to_zero(), distance(x, &zero));
        }
    }

    #[test]
    fn order_examples() {
        let sym = tri(-1.0, 0.0, 1.0);
        assert_eq!(order(&sym, &FuzzyNumber::zero()), OrderVerdict::Incomparable);
        assert_eq!(order(&sym, &sym), OrderVerdict::Equal);
        assert_eq!(order(&tri(0.0, 1.0, 2.0), &tri(0.5, 1.5, 2.5)), OrderVerdict::LessOrEqual);
        assert_eq!(order(&tri(0.5, 1.5, 2.5), &tri(0.0, 1.0, 2.0)), OrderVerdict::GreaterOrEqual);
        // Domination must hold at every level, not just the support.
        let wide_low = FuzzyNumber::from_levels([
            AlphaLevel::new(0.0, -3.0, 3.0),
            AlphaLevel::new(1.0, 2.0, 2.0),
        ])
        .unwrap();
        assert_eq!(order(&wide_low, &tri(-2.0, 0.0, 4.0)), OrderVerdict::Incomparable);
    }

    #[test]
    fn text_round_trip_including_shorthands() {
        let x = FuzzyNumber::from_levels([
            AlphaLevel::new(0.0, -1.0, 1.0),
            AlphaLevel::new(0.5, -0.25, 0.25),
            AlphaLevel::new(1.0, 0.0, 0.0),
        ])
        .unwrap();
        let text = to_text(&x);
        assert_eq!(from_text(&text).unwrap(), x);

        assert_eq!(from_text("crisp 2.5").unwrap(), crisp(2.5));
        assert_eq!(from_text("# a comment\n\ntri -1 0 1\n").unwrap(), tri(-1.0, 0.0, 1.0));
        assert!(from_text("tri 1 0 -1").is_err());
        assert!(matches!(
            from_text("0 -1 1\nbogus\n1 0 0").unwrap_err(),
            FuzzyError::Parse { line: 2, .. }
        ));
    }
}

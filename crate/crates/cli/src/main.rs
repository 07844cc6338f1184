//! Command-line front door for the fuzzyseq library.
//!
//! Subcommands:
//!
//! - `validate <path>` — representation checks on a fuzzy-number file, or
//!   full claim evaluation on a case document;
//! - `dist <a> <b>` — the supremum distance between two fuzzy numbers;
//! - `transform <case>` — CSV dump of `k, t_k, s_k` for the sequences in a
//!   case document;
//! - `classify <case> --space <c0|c|linf|l1|...>` — finite-horizon verdicts
//!   for each sequence;
//! - `theorems` — run the named-case suite and optionally write its report
//!   tree.
//!
//! Exit codes: 0 success, 1 validation/claim/suite failure, 2 usage or
//! input errors. Numeric output carries 17 significant digits so CSV
//! round-trips are exact; wall-clock timing goes to stderr only, keeping
//! stdout byte-identical across identical invocations.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use fuzzyseq::casefile::{parse_case, CaseDoc};
use fuzzyseq::dsl;
use fuzzyseq::fuzzy::{distance, validate_levels, AlphaLevel, FuzzyNumber};
use fuzzyseq::harness::{self, RunOptions};
use fuzzyseq::spaces::{diagnose, DiagnoseConfig, SpaceTarget};

#[derive(Parser)]
#[command(
    name = "fuzzyseq",
    version,
    about = "Fuzzy-number sequence transforms, metrics, and the named-case suite"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    /// Comma-separated values with a header row.
    Csv,
    /// Aligned, labelled text.
    StructuredText,
}

#[derive(Subcommand)]
enum Command {
    /// Check a fuzzy-number file against the level-set representation
    /// conditions, or evaluate every claim in a case document.
    Validate {
        /// Fuzzy-number file (level rows or one expression) or case document.
        path: PathBuf,
        #[arg(long, value_enum, default_value = "structured-text")]
        format: Format,
        /// Plateau/oscillation tolerance for verdict claims.
        #[arg(long)]
        tol: Option<f64>,
        /// Read the convergent class as "vanishing" in verdict claims.
        #[arg(long)]
        strict_c: bool,
    },
    /// Print the supremum distance between two fuzzy-number files.
    Dist {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_enum, default_value = "structured-text")]
        format: Format,
    },
    /// Dump `k, t_k, s_k` for sequences in a case document.
    Transform {
        case: PathBuf,
        /// Restrict the dump to one named sequence.
        #[arg(long)]
        seq: Option<String>,
        /// Override the document horizon.
        #[arg(long)]
        horizon: Option<u64>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        /// Write to this file (atomically) instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Diagnose each sequence of a case document against a sequence class.
    Classify {
        case: PathBuf,
        /// Target class: c0, c, linf, or l<p> (l1, l2, l0.5, ...).
        #[arg(long)]
        space: String,
        /// Restrict to one named sequence.
        #[arg(long)]
        seq: Option<String>,
        /// Override the document horizon.
        #[arg(long)]
        horizon: Option<u64>,
        /// Plateau/oscillation tolerance (default 1e-3).
        #[arg(long)]
        tol: Option<f64>,
        /// Read the convergent class as "vanishing".
        #[arg(long)]
        strict_c: bool,
        #[arg(long, value_enum, default_value = "structured-text")]
        format: Format,
    },
    /// Run the named-case suite and print one PASS/FAIL line per case.
    Theorems {
        /// Glob over case ids (`*` wildcards), e.g. `modulus_*`.
        #[arg(long)]
        filter: Option<String>,
        /// Write `<out>/<case>/{claims.csv, series.csv, summary}` trees.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Base seed for the randomized property checks.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// List case ids without running anything.
        #[arg(long)]
        list: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<bool> {
    match command {
        Command::Validate { path, format, tol, strict_c } => {
            cmd_validate(&path, format, tol, strict_c)
        }
        Command::Dist { a, b, format } => cmd_dist(&a, &b, format),
        Command::Transform { case, seq, horizon, format, out } => {
            cmd_transform(&case, seq.as_deref(), horizon, format, out.as_deref())
        }
        Command::Classify { case, space, seq, horizon, tol, strict_c, format } => {
            cmd_classify(&case, &space, seq.as_deref(), horizon, tol, strict_c, format)
        }
        Command::Theorems { filter, out, seed, list } => {
            cmd_theorems(filter.as_deref(), out.as_deref(), seed, list)
        }
    }
}

/// 17 significant digits: enough to reproduce any f64 exactly.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

/// Emits `text` to stdout or atomically to `out`.
fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
        Some(path) => {
            let name = path
                .file_name()
                .and_then(|n| n.to_str())
                .ok_or_else(|| anyhow!("output path {} has no file name", path.display()))?;
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir)
                    .with_context(|| format!("cannot create {}", dir.display()))?;
            }
            let tmp = path.with_file_name(format!("{name}.tmp"));
            fs::write(&tmp, text.as_bytes())
                .with_context(|| format!("cannot write {}", tmp.display()))?;
            fs::rename(&tmp, path)
                .with_context(|| format!("cannot move {} into place", path.display()))?;
            Ok(())
        }
    }
}

// ---------------------------------------------------------------------------
// Fuzzy-number files
// ---------------------------------------------------------------------------

/// A fuzzy-number file is either one `k`-free expression line (e.g.
/// `tri(-1, 0, 1)`) or a block of `alpha lower upper` rows; `#` comments.
fn parse_fuzzy_file(text: &str, path: &Path) -> Result<Vec<AlphaLevel>> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, raw)| (i + 1, raw.split('#').next().unwrap_or("").trim()))
        .filter(|(_, s)| !s.is_empty())
        .collect();
    if lines.is_empty() {
        bail!("{} contains no levels or expression", path.display());
    }
    let triple = |s: &str| -> Option<[f64; 3]> {
        let mut it = s.split_whitespace().map(str::parse::<f64>);
        let a = it.next()?.ok()?;
        let b = it.next()?.ok()?;
        let c = it.next()?.ok()?;
        if it.next().is_some() {
            return None;
        }
        Some([a, b, c])
    };
    if lines.iter().all(|(_, s)| triple(s).is_some()) {
        return Ok(lines
            .iter()
            .map(|(_, s)| {
                let [alpha, lower, upper] = triple(s).expect("checked above");
                AlphaLevel::new(alpha, lower, upper)
            })
            .collect());
    }
    if lines.len() > 1 {
        bail!(
            "{}: expected `alpha lower upper` rows or a single expression line",
            path.display()
        );
    }
    let (line_no, src) = lines[0];
    let expr = dsl::parse_expr(src)
        .map_err(|e| anyhow!("{} line {line_no}: {e}", path.display()))?;
    if expr.depends_on_k() {
        bail!("{} line {line_no}: a stored fuzzy number cannot depend on k", path.display());
    }
    let value = dsl::eval_fuzzy(&expr, 1)
        .map_err(|e| anyhow!("{} line {line_no}: {e}", path.display()))?;
    Ok(value.levels().to_vec())
}

fn load_fuzzy_number(path: &Path) -> Result<FuzzyNumber> {
    let levels = parse_fuzzy_file(&read_text(path)?, path)?;
    let report = validate_levels(&levels);
    if !report.is_valid() {
        bail!("{} is not a valid fuzzy number:\n{report}", path.display());
    }
    FuzzyNumber::from_levels(levels)
        .map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn looks_like_case_document(text: &str) -> bool {
    text.lines()
        .map(|raw| raw.split('#').next().unwrap_or("").trim())
        .any(|s| s.contains('='))
}

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------

fn cmd_validate(path: &Path, format: Format, tol: Option<f64>, strict_c: bool) -> Result<bool> {
    let text = read_text(path)?;
    let mut rows: Vec<(String, bool, String)> = Vec::new();
    let pass = if looks_like_case_document(&text) {
        let doc = parse_case(&text).map_err(|e| anyhow!("{}: {e}", path.display()))?;
        validate_case(&doc, tol, strict_c, &mut rows)?
    } else {
        validate_fuzzy(&text, path, &mut rows)?
    };
    let mut out = String::new();
    match format {
        Format::Csv => {
            out.push_str("check,pass,detail\n");
            for (check, ok, detail) in &rows {
                writeln!(out, "{}", csv_row(&[check, if *ok { "true" } else { "false" }, detail]))
                    .expect("writing to a String cannot fail");
            }
        }
        Format::StructuredText => {
            for (check, ok, detail) in &rows {
                writeln!(out, "[{}] {check}: {detail}", if *ok { "pass" } else { "fail" })
                    .expect("writing to a String cannot fail");
            }
            writeln!(out, "status: {}", if pass { "valid" } else { "invalid" })
                .expect("writing to a String cannot fail");
        }
    }
    print!("{out}");
    Ok(pass)
}

fn validate_fuzzy(
    text: &str,
    path: &Path,
    rows: &mut Vec<(String, bool, String)>,
) -> Result<bool> {
    let levels = parse_fuzzy_file(text, path)?;
    let report = validate_levels(&levels);
    rows.push((
        "representation".into(),
        report.is_valid(),
        format!("{} level(s) checked", levels.len()),
    ));
    for v in &report.violations {
        rows.push(("violation".into(), false, v.to_string()));
    }
    if report.is_valid() {
        let x = FuzzyNumber::from_levels(levels).map_err(|e| anyhow!("{}: {e}", path.display()))?;
        let support = x.levels()[0];
        let core = x.levels()[x.levels().len() - 1];
        rows.push((
            "support".into(),
            true,
            format!("[{}, {}]", num(support.lower), num(support.upper)),
        ));
        rows.push(("core".into(), true, format!("[{}, {}]", num(core.lower), num(core.upper))));
    }
    Ok(report.is_valid())
}

fn validate_case(
    doc: &CaseDoc,
    tol: Option<f64>,
    strict_c: bool,
    rows: &mut Vec<(String, bool, String)>,
) -> Result<bool> {
    rows.push((
        "parse".into(),
        true,
        format!("{} sequence(s), {} claim(s)", doc.case.sequences.len(), doc.claims.len()),
    ));
    let mut cfg = DiagnoseConfig::default();
    if let Some(t) = tol {
        cfg.tol = t;
    }
    cfg.strict_c = strict_c;
    let outcomes = doc.evaluate_claims(&cfg)?;
    let mut pass = true;
    for o in &outcomes {
        pass &= o.pass;
        rows.push(("claim".into(), o.pass, format!("{} — {}", o.claim, o.detail)));
    }
    Ok(pass)
}

// ---------------------------------------------------------------------------
// dist
// ---------------------------------------------------------------------------

fn cmd_dist(a: &Path, b: &Path, format: Format) -> Result<bool> {
    let x = load_fuzzy_number(a)?;
    let y = load_fuzzy_number(b)?;
    let d = distance(&x, &y);
    match format {
        Format::Csv => println!("d\n{}", num(d)),
        Format::StructuredText => println!("d = {}", num(d)),
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// transform
// ---------------------------------------------------------------------------

fn selected_sequences<'a>(doc: &'a CaseDoc, seq: Option<&str>) -> Result<Vec<&'a str>> {
    match seq {
        None => Ok(doc.case.sequences.iter().map(|(n, _)| n.as_str()).collect()),
        Some(name) => {
            if doc.case.sequences.iter().any(|(n, _)| n == name) {
                Ok(vec![doc
                    .case
                    .sequences
                    .iter()
                    .find(|(n, _)| n == name)
                    .map(|(n, _)| n.as_str())
                    .expect("checked above")])
            } else {
                bail!(
                    "unknown sequence '{name}'; the document declares: {}",
                    doc.case.sequences.iter().map(|(n, _)| n.as_str()).collect::<Vec<_>>().join(", ")
                )
            }
        }
    }
}

fn load_case(path: &Path) -> Result<CaseDoc> {
    parse_case(&read_text(path)?).map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn cmd_transform(
    path: &Path,
    seq: Option<&str>,
    horizon: Option<u64>,
    format: Format,
    out: Option<&Path>,
) -> Result<bool> {
    let doc = load_case(path)?;
    let horizon = horizon.unwrap_or(doc.case.horizon);
    if horizon < doc.case.start_index {
        bail!("horizon {horizon} is below the start index {}", doc.case.start_index);
    }
    let names = selected_sequences(&doc, seq)?;
    let mut text = String::new();
    match format {
        Format::Csv => {
            text.push_str("seq,k,t,s\n");
            for name in names {
                let (ts, s) = doc.case.series_for(name, horizon)?;
                for ((k, t), sv) in ts.iter().zip(s.values()) {
                    writeln!(text, "{}", csv_row(&[name, &k.to_string(), &num(t), &num(*sv)]))
                        .expect("writing to a String cannot fail");
                }
            }
        }
        Format::StructuredText => {
            for name in names {
                let (ts, s) = doc.case.series_for(name, horizon)?;
                writeln!(text, "sequence {name} over [{}, {horizon}]", ts.start())
                    .expect("writing to a String cannot fail");
                for ((k, t), sv) in ts.iter().zip(s.values()) {
                    writeln!(text, "  k = {k:>10}  t = {:<24}  s = {}", num(t), num(*sv))
                        .expect("writing to a String cannot fail");
                }
            }
        }
    }
    emit(&text, out)?;
    Ok(true)
}

// ---------------------------------------------------------------------------
// classify
// ---------------------------------------------------------------------------

#[allow(clippy::too_many_arguments)]
fn cmd_classify(
    path: &Path,
    space: &str,
    seq: Option<&str>,
    horizon: Option<u64>,
    tol: Option<f64>,
    strict_c: bool,
    format: Format,
) -> Result<bool> {
    let doc = load_case(path)?;
    let space: SpaceTarget =
        space.parse().map_err(|e| anyhow!("--space: {e}"))?;
    let horizon = horizon.unwrap_or(doc.case.horizon);
    if horizon < doc.case.start_index {
        bail!("horizon {horizon} is below the start index {}", doc.case.start_index);
    }
    let mut cfg = DiagnoseConfig::default();
    if let Some(t) = tol {
        cfg.tol = t;
    }
    cfg.strict_c = strict_c;
    let names = selected_sequences(&doc, seq)?;
    let mut out = String::new();
    if format == Format::Csv {
        out.push_str("seq,space,verdict,horizon,note\n");
    }
    for name in names {
        let (_, s) = doc.case.series_for(name, horizon)?;
        let v = diagnose(&s, space, &cfg)?;
        match format {
            Format::Csv => writeln!(
                out,
                "{}",
                csv_row(&[
                    name,
                    &space.to_string(),
                    &v.verdict.to_string(),
                    &v.horizon.to_string(),
                    &v.diagnostics.note,
                ])
            )
            .expect("writing to a String cannot fail"),
            Format::StructuredText => writeln!(
                out,
                "{name}: {} with {} at horizon {} — {}",
                v.verdict, space, v.horizon, v.diagnostics.note
            )
            .expect("writing to a String cannot fail"),
        }
    }
    print!("{out}");
    Ok(true)
}

// ---------------------------------------------------------------------------
// theorems
// ---------------------------------------------------------------------------

fn cmd_theorems(
    filter: Option<&str>,
    out: Option<&Path>,
    seed: u64,
    list: bool,
) -> Result<bool> {
    if list {
        for id in harness::case_ids() {
            println!("{id}");
        }
        return Ok(true);
    }
    let started = Instant::now();
    let suite = harness::run_all(filter, &RunOptions { seed })
        .map_err(|e| anyhow!("suite evaluation failed: {e}"))?;
    if let Some(dir) = out {
        harness::write_reports(dir, &suite.reports)
            .with_context(|| format!("cannot write reports under {}", dir.display()))?;
    }
    print!("{}", harness::suite_summary(&suite.reports));
    eprintln!(
        "ran {} case(s) in {:.2}s",
        suite.reports.len(),
        started.elapsed().as_secs_f64()
    );
    Ok(suite.pass)
}

// ---------------------------------------------------------------------------
// CSV quoting (same dialect as the report artifacts)
// ---------------------------------------------------------------------------

fn csv_field(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') || field.contains('\r') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

fn csv_row(fields: &[&str]) -> String {
    fields.iter().map(|f| csv_field(f)).collect::<Vec<_>>().join(",")
}

//! Deterministic rendering of case artifacts and atomic writing of the
//! report tree.
//!
//! Rendered artifacts contain no timestamps, durations, or machine state,
//! so two runs with the same seed produce byte-identical files. Each file
//! is written to a sibling temporary path and renamed into place, so a
//! reader never observes a half-written artifact.

use std::fs;
use std::io;
use std::path::Path;

use super::{CaseCtx, CaseReport, ClaimOutcome, HarnessError, SeqEntry, TheoremCase};

/// Quotes a CSV field when it contains a delimiter, quote, or newline.
fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn csv_row(fields: &[&str]) -> String {
    let mut row = fields.iter().map(|f| csv_field(f)).collect::<Vec<_>>().join(",");
    row.push('\n');
    row
}

fn pass_word(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "fail"
    }
}

fn render_claims(case: &TheoremCase, outcomes: &[ClaimOutcome]) -> String {
    let mut out = String::from("case,claim,provenance,description,pass,measured,expected,tolerance,note\n");
    for (i, o) in outcomes.iter().enumerate() {
        out.push_str(&csv_row(&[
            case.id,
            &(i + 1).to_string(),
            &o.provenance.to_string(),
            o.description,
            pass_word(o.pass),
            &o.measured,
            &o.expected,
            &o.tolerance,
            &o.note,
        ]));
    }
    out
}

fn render_series(case: &TheoremCase, ctx: &mut CaseCtx) -> Result<String, HarnessError> {
    let mut out = String::from("seq,k,t,s,running_sup,partial_sum\n");
    for entry in &case.sequences {
        let bundle = ctx.series(entry.name)?;
        let len = bundle.t.len();
        let stride = (len / 10_000).max(1);
        let sups = bundle.s.running_sup_track();
        let partials = bundle.s.powered_partial_sums(1.0);
        let s = bundle.s.values();
        for (i, (k, t)) in bundle.t.iter().enumerate() {
            if i % stride != 0 && i != len - 1 {
                continue;
            }
            out.push_str(&csv_row(&[
                entry.name,
                &k.to_string(),
                &format!("{t:.16e}"),
                &format!("{:.16e}", s[i]),
                &format!("{:.16e}", sups[i]),
                &format!("{:.16e}", partials[i]),
            ]));
        }
    }
    Ok(out)
}

fn describe_entry(entry: &SeqEntry) -> String {
    let source = match entry.def {
        super::SeqDef::Expr(text) => text.to_string(),
        super::SeqDef::Product(a, b) => format!("product of {a} and {b}"),
    };
    match &entry.context {
        None => source,
        Some(c) => format!(
            "{source} [context: u = {}, v = {}, start = {}, modulus = {}, exponents = {}]",
            c.u, c.v, c.start, c.modulus, c.exponents
        ),
    }
}

fn render_summary(case: &TheoremCase, outcomes: &[ClaimOutcome], pass: bool) -> String {
    let mut out = String::new();
    out.push_str(&format!("case: {}\n", case.id));
    out.push_str(&format!("title: {}\n", case.title));
    out.push_str(&format!("status: {}\n", if pass { "PASS" } else { "FAIL" }));
    out.push_str(&format!("horizon: {}\n", case.horizon));
    out.push_str(&format!(
        "context: u = {}, v = {}, start = {}, modulus = {}, exponents = {}\n",
        case.context.u, case.context.v, case.context.start, case.context.modulus, case.context.exponents
    ));
    out.push_str("sequences:\n");
    for entry in &case.sequences {
        out.push_str(&format!("  {}: {}\n", entry.name, describe_entry(entry)));
    }
    let passed = outcomes.iter().filter(|o| o.pass).count();
    out.push_str(&format!("claims: {passed} of {} passed\n", outcomes.len()));
    for o in outcomes {
        out.push_str(&format!("  [{}] ({}) {}\n", pass_word(o.pass), o.provenance, o.description));
        out.push_str(&format!("      measured:  {}\n", o.measured));
        out.push_str(&format!("      expected:  {}\n", o.expected));
        out.push_str(&format!("      tolerance: {}\n", o.tolerance));
        if !o.note.is_empty() {
            out.push_str(&format!("      note:      {}\n", o.note));
        }
    }
    if !case.notes.is_empty() {
        out.push_str("notes:\n");
        for n in &case.notes {
            out.push_str(&format!("  - {n}\n"));
        }
    }
    out
}

/// Renders the three artifacts for one completed case.
pub(super) fn render(
    case: &TheoremCase,
    outcomes: &[ClaimOutcome],
    ctx: &mut CaseCtx,
    pass: bool,
) -> Result<(String, String, String), HarnessError> {
    Ok((
        render_claims(case, outcomes),
        render_series(case, ctx)?,
        render_summary(case, outcomes, pass),
    ))
}

/// One line per case plus a trailer; what the CLI prints for a suite run.
pub fn suite_summary(reports: &[CaseReport]) -> String {
    let mut out = String::new();
    for r in reports {
        out.push_str(&format!("{} {} — {}\n", pass_word(r.pass).to_uppercase(), r.id, r.title));
    }
    let passed = reports.iter().filter(|r| r.pass).count();
    out.push_str(&format!("{passed} of {} cases passed\n", reports.len()));
    out
}

fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let name = path
        .file_name()
        .and_then(|n| n.to_str())
        .ok_or_else(|| io::Error::new(io::ErrorKind::InvalidInput, "artifact path has no name"))?;
    let tmp = path.with_file_name(format!("{name}.tmp"));
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)
}

/// Writes `<out_dir>/<case_id>/{claims.csv, series.csv, summary}` for each
/// report, creating directories as needed. Files land atomically: a crash
/// mid-run leaves either the previous artifact or the new one, never a
/// truncated file.
pub fn write_reports(out_dir: &Path, reports: &[CaseReport]) -> io::Result<()> {
    for r in reports {
        let dir = out_dir.join(r.id);
        fs::create_dir_all(&dir)?;
        write_atomic(&dir.join("claims.csv"), r.claims_csv.as_bytes())?;
        write_atomic(&dir.join("series.csv"), r.series_csv.as_bytes())?;
        write_atomic(&dir.join("summary"), r.summary.as_bytes())?;
    }
    Ok(())
}

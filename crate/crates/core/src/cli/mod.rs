//! Command-line front end.
//!
//! Exit codes: 0 success, 2 parse error, 3 failed precondition,
//! 4 internal inconsistency.

pub mod census;
pub mod spec;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::braidzel::{Braidzel, SurfaceError};
use crate::moves::{certify_pretzel, verify_trace, Move, MoveTrace, NormalizeError};
use crate::qp::{decide, QpError};
use crate::seifert_oracle::{determinant, gs_signature_lower, intersection_determinant, seifert_matrix, signature};
use crate::slice::{braidzel_bounds, format_ratio, slice_report, SliceError};

pub use census::{census_row, run_census, CensusError, CensusOptions, CensusRow, Filter, Format, KRange};
pub use spec::{parse_surface, SourceForm, SpecError, SurfaceSpec};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(name = "qpretzel", version, about = "Quasipositivity and slice bounds for pretzel and braidzel surfaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Profile, quasipositivity verdict and slice bounds for one surface.
    Analyze {
        spec: String,
        /// Include the Seifert matrix and the certificate trace.
        #[arg(long)]
        verbose: bool,
    },
    /// Emit and verify a normalization trace for a quasipositive pretzel.
    Certify {
        spec: String,
        /// Write the JSON-lines trace here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Move operations.
    #[command(subcommand)]
    Moves(MovesCommand),
    /// Tabulate orientable pretzels in a parameter box.
    Census {
        /// Band counts, inclusive: `3`, `2..5`.
        #[arg(long)]
        k: String,
        /// Largest absolute twist.
        #[arg(long)]
        tmax: i64,
        #[arg(long)]
        odd_only: bool,
        /// Conjunction of atoms: yu_family, not_slice, qp, knot,
        /// discrepancy, orientable; `!` negates.
        #[arg(long)]
        filter: Option<String>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
        /// One row per rotation/reversal class.
        #[arg(long)]
        dedupe: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum MovesCommand {
    /// Apply moves in order and print the verified trace.
    Apply {
        spec: String,
        /// `M1`..`M6`, with `'` for the inverse.
        #[arg(required = true, allow_hyphen_values = true)]
        moves: Vec<String>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Jsonl,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Precondition(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Precondition(_) => 3,
            CliError::Internal(_) => 4,
        }
    }
}

impl From<SpecError> for CliError {
    fn from(e: SpecError) -> Self {
        match e {
            SpecError::Syntax { .. } => CliError::Parse(e.to_string()),
            SpecError::Surface(s) => CliError::Parse(s.to_string()),
        }
    }
}

impl From<SurfaceError> for CliError {
    fn from(e: SurfaceError) -> Self {
        CliError::Precondition(e.to_string())
    }
}

impl From<QpError> for CliError {
    fn from(e: QpError) -> Self {
        match e {
            QpError::Surface(s) => s.into(),
            other => CliError::Internal(other.to_string()),
        }
    }
}

impl From<SliceError> for CliError {
    fn from(e: SliceError) -> Self {
        match e {
            SliceError::Surface(s) => s.into(),
            SliceError::Qp(q) => q.into(),
            other => CliError::Internal(other.to_string()),
        }
    }
}

impl From<CensusError> for CliError {
    fn from(e: CensusError) -> Self {
        match e {
            CensusError::Range(_) | CensusError::Filter(_) => CliError::Parse(e.to_string()),
            CensusError::Surface(s) => s.into(),
            CensusError::Qp(q) => q.into(),
            CensusError::Slice(s) => s.into(),
            other => CliError::Internal(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Internal(e.to_string())
    }
}

fn to_value<T: Serialize>(x: &T) -> Result<Value, CliError> {
    serde_json::to_value(x).map_err(|e| CliError::Internal(e.to_string()))
}

fn seifert_block(twists: &[i64], verbose: bool) -> Option<Value> {
    let v = seifert_matrix(twists).ok()?;
    let mut out = json!({
        "signature": signature(&v),
        "determinant": determinant(&v),
        "gs_signature_lower": format_ratio(&gs_signature_lower(&v)),
    });
    if verbose {
        out["matrix"] = json!(v.entries);
        out["intersection_determinant"] = json!(intersection_determinant(&v).to_string());
    }
    Some(out)
}

/// The `analyze` record. Non-orientable input yields the profile and a
/// precondition error carrying the record.
pub fn analyze(spec: &SurfaceSpec, verbose: bool) -> Result<Value, (Value, CliError)> {
    let bz = &spec.braidzel;
    let mut record = json!({
        "version": VERSION,
        "input": spec.canonical(),
        "form": spec.form,
        "k": bz.k(),
        "profile": bz.profile(),
    });
    if let Err(e) = bz.require_orientable() {
        record["error"] = json!(e.to_string());
        let err = CliError::from(e);
        return Err((record, err));
    }
    let fail = |record: &Value, e: CliError| (record.clone(), e);
    let verdict = decide(bz, None).map_err(|e| fail(&record, e.into()))?;
    if !verdict.check(bz) {
        return Err(fail(&record, CliError::Internal("quasipositivity witness does not re-verify".into())));
    }
    record["qp"] = to_value(&verdict).map_err(|e| fail(&record, e))?;
    if verbose {
        if let Some(tr) = verdict.certificate_trace(bz) {
            let steps: Vec<String> = tr.steps().iter().map(|s| s.result.to_string()).collect();
            record["certificate_states"] = json!(steps);
        }
    }
    if bz.is_pretzel() {
        let report = slice_report(bz.twists()).map_err(|e| fail(&record, e.into()))?;
        record["chi_s"] = json!(report.chi_s_mirror_combined);
        record["gs_lower"] = json!(report.gs_lower.as_ref().map(format_ratio));
        record["not_slice"] = json!(report.not_slice);
        record["slice"] = to_value(&report).map_err(|e| fail(&record, e))?;
        record["yu_family"] = json!(census::is_yu_family(bz.twists()));
        if let Some(s) = seifert_block(bz.twists(), verbose) {
            record["seifert"] = s;
        }
    } else {
        let bounds = braidzel_bounds(bz).map_err(|e| fail(&record, e.into()))?;
        record["chi_s"] = json!(bounds.chi_s_best);
        record["gs_lower"] = json!(bounds.gs_lower.as_ref().map(format_ratio));
        record["not_slice"] = json!(bounds.not_slice);
        record["slice"] = to_value(&bounds).map_err(|e| fail(&record, e))?;
    }
    Ok(record)
}

fn normalize_error(e: NormalizeError) -> CliError {
    match e {
        NormalizeError::Internal(m) => CliError::Internal(m),
        other => CliError::Precondition(other.to_string()),
    }
}

/// Builds the certificate trace, round-trips it through its text form and
/// verifies the re-read copy.
pub fn certify(bz: &Braidzel) -> Result<(MoveTrace, String), CliError> {
    let tr = certify_pretzel(bz).map_err(normalize_error)?;
    let text = tr.to_jsonl();
    let reread = MoveTrace::from_jsonl(&text).map_err(|e| CliError::Internal(e.to_string()))?;
    if reread != tr || !verify_trace(&reread) {
        return Err(CliError::Internal("certificate trace failed verification".into()));
    }
    Ok((tr, text))
}

pub fn apply_moves(bz: &Braidzel, moves: &[String]) -> Result<MoveTrace, CliError> {
    let parsed: Vec<Move> = moves
        .iter()
        .map(|m| m.parse::<Move>().map_err(|e| CliError::Parse(e.to_string())))
        .collect::<Result<_, _>>()?;
    let tr = MoveTrace::replay(bz.clone(), &parsed);
    if !tr.verify() {
        return Err(CliError::Internal("move trace failed verification".into()));
    }
    Ok(tr)
}

pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Analyze { spec, verbose } => {
            let spec = parse_surface(&spec)?;
            match analyze(&spec, verbose) {
                Ok(record) => writeln!(out, "{record}")?,
                Err((record, e)) => {
                    writeln!(out, "{record}")?;
                    return Err(e);
                }
            }
        }
        Command::Certify { spec, out: path } => {
            let spec = parse_surface(&spec)?;
            let (tr, text) = certify(&spec.braidzel)?;
            match path {
                Some(path) => {
                    std::fs::write(&path, &text)?;
                    let back = std::fs::read_to_string(&path)?;
                    let reread = MoveTrace::from_jsonl(&back).map_err(|e| CliError::Internal(e.to_string()))?;
                    if !verify_trace(&reread) {
                        return Err(CliError::Internal(format!("trace in {} failed verification", path.display())));
                    }
                    let summary = json!({
                        "version": VERSION,
                        "input": spec.canonical(),
                        "steps": tr.len(),
                        "verified": true,
                        "out": path.display().to_string(),
                    });
                    writeln!(out, "{summary}")?;
                }
                None => {
                    out.write_all(text.as_bytes())?;
                    writeln!(err, "verified {} steps", tr.len())?;
                }
            }
        }
        Command::Moves(MovesCommand::Apply { spec, moves }) => {
            let spec = parse_surface(&spec)?;
            let tr = apply_moves(&spec.braidzel, &moves)?;
            out.write_all(tr.to_jsonl().as_bytes())?;
        }
        Command::Census { k, tmax, odd_only, filter, format, dedupe } => {
            if tmax < 0 {
                return Err(CliError::Parse(format!("--tmax must be nonnegative, got {tmax}")));
            }
            let opts = CensusOptions {
                k: k.parse()?,
                tmax,
                odd_only,
                filter: filter.as_deref().map(str::parse).transpose()?.unwrap_or_default(),
                format: match format {
                    OutputFormat::Csv => Format::Csv,
                    OutputFormat::Jsonl => Format::Jsonl,
                },
                dedupe,
            };
            run_census(&opts, &mut *out)?;
        }
    }
    Ok(())
}

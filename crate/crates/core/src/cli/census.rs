//! Pretzel census: enumerate orientable pretzels in a box and tabulate
//! their invariants.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::braidzel::{Braidzel, SurfaceError};
use crate::qp::{decide, QpError, QpStatus};
use crate::seifert_oracle::{determinant, seifert_matrix, signature};
use crate::slice::{format_ratio, slice_report, SliceError};

const BATCH: usize = 4096;

#[derive(Debug, Error)]
pub enum CensusError {
    #[error("bad range {0:?}: expected `a..b` or a single integer")]
    Range(String),
    #[error("bad filter atom {0:?}")]
    Filter(String),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Qp(#[from] QpError),
    #[error(transparent)]
    Slice(#[from] SliceError),
    #[error("orbit of {canonical} disagrees at {member}: {field}")]
    OrbitMismatch { canonical: String, member: String, field: &'static str },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Inclusive band-count range. `3..5` and `3..=5` both mean {3, 4, 5}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KRange {
    pub lo: usize,
    pub hi: usize,
}

impl std::str::FromStr for KRange {
    type Err = CensusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CensusError::Range(s.to_string());
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (a, b.strip_prefix('=').unwrap_or(b)),
            None => (s, s),
        };
        let lo: usize = lo.trim().parse().map_err(|_| bad())?;
        let hi: usize = hi.trim().parse().map_err(|_| bad())?;
        if lo == 0 {
            return Err(bad());
        }
        Ok(KRange { lo, hi })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Atom {
    YuFamily,
    NotSlice,
    Qp,
    Knot,
    Discrepancy,
    Orientable,
}

/// Conjunction of possibly negated atoms.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Filter {
    terms: Vec<(bool, Atom)>,
}

impl std::str::FromStr for Filter {
    type Err = CensusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut terms = Vec::new();
        for part in s.split(|c: char| matches!(c, '&' | '∧' | ',') || c.is_whitespace()) {
            let part = part.trim();
            if part.is_empty() || part == "and" {
                continue;
            }
            let (negated, name) = match part.strip_prefix('!') {
                Some(n) => (true, n.trim()),
                None => (false, part),
            };
            let atom = match name {
                "yu_family" => Atom::YuFamily,
                "not_slice" => Atom::NotSlice,
                "qp" => Atom::Qp,
                "knot" => Atom::Knot,
                "discrepancy" => Atom::Discrepancy,
                "orientable" => Atom::Orientable,
                _ => return Err(CensusError::Filter(part.to_string())),
            };
            terms.push((!negated, atom));
        }
        Ok(Filter { terms })
    }
}

impl Filter {
    pub fn accepts(&self, row: &CensusRow) -> bool {
        self.terms.iter().all(|&(want, atom)| {
            let v = match atom {
                Atom::YuFamily => row.yu_family,
                Atom::NotSlice => row.not_slice,
                Atom::Qp => row.qp_status.is_quasipositive(),
                Atom::Knot => row.is_knot,
                Atom::Discrepancy => row.formula_discrepancy,
                Atom::Orientable => row.orientable,
            };
            v == want
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Jsonl,
}

#[derive(Debug, Clone)]
pub struct CensusOptions {
    pub k: KRange,
    pub tmax: i64,
    pub odd_only: bool,
    pub filter: Filter,
    pub format: Format,
    pub dedupe: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusRow {
    pub surface: String,
    pub k: usize,
    pub twists: Vec<i64>,
    pub orientable: bool,
    pub boundary_components: usize,
    pub is_knot: bool,
    pub qp_status: QpStatus,
    pub chi_s_exact: Option<i64>,
    pub chi_s_upper_subset: Option<i64>,
    pub upper_subset: Option<Vec<usize>>,
    pub chi_s_paper_formula: i64,
    pub epsilon: u8,
    pub formula_discrepancy: bool,
    pub chi_s_combined: Option<i64>,
    pub gs_lower: Option<String>,
    pub not_slice: bool,
    pub signature: Option<i64>,
    pub determinant: Option<u64>,
    pub yu_family: bool,
}

const CSV_HEADER: [&str; 19] = [
    "surface",
    "k",
    "twists",
    "orientable",
    "boundary_components",
    "is_knot",
    "qp_status",
    "chi_s_exact",
    "chi_s_upper_subset",
    "upper_subset",
    "chi_s_paper_formula",
    "epsilon",
    "formula_discrepancy",
    "chi_s_combined",
    "gs_lower",
    "not_slice",
    "signature",
    "determinant",
    "yu_family",
];

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

fn opt<T: ToString>(x: &Option<T>) -> String {
    x.as_ref().map(T::to_string).unwrap_or_default()
}

impl CensusRow {
    fn csv_record(&self) -> [String; 19] {
        [
            self.surface.clone(),
            self.k.to_string(),
            join(&self.twists),
            self.orientable.to_string(),
            self.boundary_components.to_string(),
            self.is_knot.to_string(),
            self.qp_status.as_str().to_string(),
            opt(&self.chi_s_exact),
            opt(&self.chi_s_upper_subset),
            self.upper_subset.as_deref().map(join).unwrap_or_default(),
            self.chi_s_paper_formula.to_string(),
            self.epsilon.to_string(),
            self.formula_discrepancy.to_string(),
            opt(&self.chi_s_combined),
            opt(&self.gs_lower),
            self.not_slice.to_string(),
            opt(&self.signature),
            opt(&self.determinant),
            self.yu_family.to_string(),
        ]
    }
}

/// k = 3, all odd, pq + qr + rp = −1.
pub fn is_yu_family(t: &[i64]) -> bool {
    t.len() == 3 && t.iter().all(|x| x % 2 != 0) && t[0] * t[1] + t[1] * t[2] + t[2] * t[0] == -1
}

pub fn census_row(twists: &[i64]) -> Result<CensusRow, CensusError> {
    let p = Braidzel::pretzel(twists)?;
    p.require_orientable()?;
    let verdict = decide(&p, None)?;
    let report = slice_report(twists)?;
    let (signature, determinant) = match seifert_matrix(twists) {
        Ok(v) => (Some(signature(&v)), Some(determinant(&v))),
        Err(_) => (None, None),
    };
    Ok(CensusRow {
        surface: p.to_string(),
        k: twists.len(),
        twists: twists.to_vec(),
        orientable: true,
        boundary_components: p.boundary_components(),
        is_knot: report.is_knot,
        qp_status: verdict.status,
        chi_s_exact: report.chi_s_exact,
        chi_s_upper_subset: report.chi_s_upper_subset.as_ref().map(|b| b.bound),
        upper_subset: report.chi_s_upper_subset.map(|b| b.subset),
        chi_s_paper_formula: report.chi_s_paper_formula.value,
        epsilon: report.chi_s_paper_formula.epsilon,
        formula_discrepancy: report.formula_discrepancy,
        chi_s_combined: report.chi_s_mirror_combined,
        gs_lower: report.gs_lower.as_ref().map(format_ratio),
        not_slice: report.not_slice,
        signature,
        determinant,
        yu_family: is_yu_family(twists),
    })
}

/// Rotations and reversals of `t`.
pub fn dihedral_orbit(t: &[i64]) -> Vec<Vec<i64>> {
    let k = t.len();
    let mut out = Vec::with_capacity(2 * k);
    for r in 0..k {
        let rot: Vec<i64> = t[r..].iter().chain(&t[..r]).copied().collect();
        let rev: Vec<i64> = rot.iter().rev().copied().collect();
        out.push(rot);
        out.push(rev);
    }
    out
}

pub fn canonical_representative(t: &[i64]) -> Vec<i64> {
    dihedral_orbit(t).into_iter().min().unwrap()
}

fn check_orbit(row: &CensusRow) -> Result<(), CensusError> {
    for member in dihedral_orbit(&row.twists) {
        if member == row.twists {
            continue;
        }
        let other = census_row(&member)?;
        let fields: [(&'static str, bool); 8] = [
            ("qp_status", other.qp_status == row.qp_status),
            ("boundary_components", other.boundary_components == row.boundary_components),
            ("chi_s_exact", other.chi_s_exact == row.chi_s_exact),
            ("chi_s_upper_subset", other.chi_s_upper_subset == row.chi_s_upper_subset),
            ("chi_s_paper_formula", other.chi_s_paper_formula == row.chi_s_paper_formula),
            ("chi_s_combined", other.chi_s_combined == row.chi_s_combined),
            ("gs_lower", other.gs_lower == row.gs_lower),
            ("signature", other.signature == row.signature && other.determinant == row.determinant),
        ];
        if let Some((field, _)) = fields.iter().find(|(_, ok)| !ok) {
            return Err(CensusError::OrbitMismatch { canonical: row.surface.clone(), member: other.surface, field });
        }
    }
    Ok(())
}

/// Orientable twist vectors of length `k` with entries in [−tmax, tmax],
/// lexicographic.
pub fn twist_vectors(k: usize, tmax: i64, odd_only: bool) -> impl Iterator<Item = Vec<i64>> {
    let values: Vec<i64> = (-tmax..=tmax).filter(|t| !odd_only || t % 2 != 0).collect();
    let n = values.len();
    let mut idx: Option<Vec<usize>> = (n > 0 && k > 0).then(|| vec![0; k]);
    std::iter::from_fn(move || loop {
        let cur = idx.as_mut()?;
        let t: Vec<i64> = cur.iter().map(|&i| values[i]).collect();
        match (0..k).rev().find(|&i| cur[i] + 1 < n) {
            Some(i) => {
                cur[i] += 1;
                for c in cur[i + 1..].iter_mut() {
                    *c = 0;
                }
            }
            None => idx = None,
        }
        if t.iter().all(|x| (x - t[0]) % 2 == 0) {
            return Some(t);
        }
    })
}

fn process(t: &[i64], opts: &CensusOptions) -> Result<Option<CensusRow>, CensusError> {
    if opts.dedupe && canonical_representative(t) != t {
        return Ok(None);
    }
    let row = census_row(t)?;
    if opts.dedupe {
        check_orbit(&row)?;
    }
    Ok(opts.filter.accepts(&row).then_some(row))
}

enum Sink<W: Write> {
    Csv(csv::Writer<W>, bool),
    Jsonl(W),
}

impl<W: Write> Sink<W> {
    fn write(&mut self, row: &CensusRow) -> Result<(), CensusError> {
        match self {
            Sink::Csv(w, header) => {
                if !*header {
                    w.write_record(CSV_HEADER)?;
                    *header = true;
                }
                w.write_record(row.csv_record())?
            }
            Sink::Jsonl(w) => {
                serde_json::to_writer(&mut *w, row).map_err(std::io::Error::from)?;
                w.write_all(b"\n")?;
            }
        }
        Ok(())
    }

    fn flush(&mut self) -> Result<(), CensusError> {
        match self {
            Sink::Csv(w, _) => w.flush()?,
            Sink::Jsonl(w) => w.flush()?,
        }
        Ok(())
    }
}

/// Streams rows to `out` in canonical order. Returns the row count. The CSV
/// header is written with the first row, so no rows means no output.
pub fn run_census<W: Write>(opts: &CensusOptions, out: W) -> Result<usize, CensusError> {
    let mut sink = match opts.format {
        Format::Csv => Sink::Csv(csv::Writer::from_writer(out), false),
        Format::Jsonl => Sink::Jsonl(out),
    };
    let mut count = 0;
    for k in opts.k.lo..=opts.k.hi {
        let mut vectors = twist_vectors(k, opts.tmax, opts.odd_only).peekable();
        while vectors.peek().is_some() {
            let batch: Vec<Vec<i64>> = vectors.by_ref().take(BATCH).collect();
            let rows: Vec<Option<CensusRow>> =
                batch.par_iter().map(|t| process(t, opts)).collect::<Result<_, _>>()?;
            for row in rows.into_iter().flatten() {
                sink.write(&row)?;
                count += 1;
            }
        }
    }
    sink.flush()?;
    Ok(count)
}

//! Slice Euler characteristic bounds for braidzel boundaries.
//!
//! A quasipositive surface realizes χ_s of its boundary. A quasipositive
//! sub-braidzel Q ⊂ S gives χ_s(∂S) ≤ 2χ(Q) − χ(S). For knots the bound on
//! χ_s becomes a lower bound on the slice genus.

use num_rational::Ratio;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::braidzel::{mirror_twists, Braidzel, SurfaceError};
use crate::qp::{decide, QpError};

/// Move-search depth used when deciding each candidate sub-braidzel.
pub const SUBSET_SEARCH_DEPTH: usize = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SliceError {
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Qp(#[from] QpError),
    #[error("slice genus bound (1 - {chi})/2 is not an integer for a knot")]
    NonIntegralGenus { chi: i64 },
}

/// Bound 2 − 2|X′| + k from a quasipositive sub-braidzel on the bands X′.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubsetBound {
    pub bound: i64,
    /// 1-based band indices, ascending.
    pub subset: Vec<usize>,
}

/// 2 + #{t_i ≥ 0} − #{t_j < 0} − ε.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LiteralFormula {
    pub value: i64,
    pub epsilon: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SliceReport {
    pub chi_surface: i64,
    pub chi_s_exact: Option<i64>,
    pub chi_s_upper_subset: Option<SubsetBound>,
    pub chi_s_paper_formula: LiteralFormula,
    pub chi_s_mirror_combined: Option<i64>,
    /// Subset bound present and different from the literal formula.
    pub formula_discrepancy: bool,
    pub is_knot: bool,
    #[serde(serialize_with = "ratio_as_string")]
    pub gs_lower: Option<Ratio<i64>>,
    pub not_slice: bool,
}

/// `1`, `-1`, `3/2`.
pub fn format_ratio(r: &Ratio<i64>) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn ratio_as_string<S: Serializer>(r: &Option<Ratio<i64>>, s: S) -> Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&format_ratio(r)),
        None => s.serialize_none(),
    }
}

/// χ(S) = 2 − k when the surface is decided quasipositive.
pub fn chi_s_exact(bz: &Braidzel) -> Option<i64> {
    match decide(bz, None) {
        Ok(v) if v.status.is_quasipositive() => Some(bz.euler_characteristic()),
        _ => None,
    }
}

fn bound_for(k: usize, subset: Vec<usize>) -> SubsetBound {
    SubsetBound { bound: 2 - 2 * subset.len() as i64 + k as i64, subset }
}

/// Best subset bound. Literal pretzels use the closed form; other braidzels
/// search all subsets of size ≥ 2, largest first, lexicographic within a
/// size. `None` when no such subset is certified.
pub fn chi_s_upper_subset(bz: &Braidzel) -> Result<Option<SubsetBound>, SliceError> {
    bz.require_orientable()?;
    if bz.is_literal_pretzel() {
        return Ok(pretzel_subset(bz.twists()));
    }
    chi_s_upper_subset_exhaustive(bz)
}

/// All negative twists, plus the smallest nonnegative t_i with
/// t_i + max{t_j < 0} < 0 if there is one.
pub fn pretzel_subset(twists: &[i64]) -> Option<SubsetBound> {
    let mut subset: Vec<usize> = (0..twists.len()).filter(|&i| twists[i] < 0).collect();
    let max_neg = subset.iter().map(|&i| twists[i]).max()?;
    let extra = (0..twists.len())
        .filter(|&i| twists[i] >= 0 && twists[i] + max_neg < 0)
        .min_by_key(|&i| (twists[i], i));
    subset.extend(extra);
    subset.sort_unstable();
    if subset.len() < 2 {
        return None;
    }
    Some(bound_for(twists.len(), subset.into_iter().map(|i| i + 1).collect()))
}

/// Subset search through [`decide`] on every sub-braidzel.
pub fn chi_s_upper_subset_exhaustive(bz: &Braidzel) -> Result<Option<SubsetBound>, SliceError> {
    bz.require_orientable()?;
    let k = bz.k();
    for size in (2..=k).rev() {
        for subset in combinations(k, size) {
            let sub = bz.sub_braidzel(&subset)?;
            if decide(&sub, Some(SUBSET_SEARCH_DEPTH))?.status.is_quasipositive() {
                return Ok(Some(bound_for(k, subset)));
            }
        }
    }
    Ok(None)
}

/// Size-`r` subsets of {1..n} in lexicographic order.
fn combinations(n: usize, r: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut cur: Option<Vec<usize>> = (r <= n).then(|| (1..=r).collect());
    std::iter::from_fn(move || {
        let out = cur.clone()?;
        let next = cur.as_mut().unwrap();
        match (0..r).rev().find(|&i| next[i] < n - r + i + 1) {
            Some(i) => {
                next[i] += 1;
                for j in i + 1..r {
                    next[j] = next[j - 1] + 1;
                }
            }
            None => cur = None,
        }
        Some(out)
    })
}

/// Literal value of 2 + #{t_i ≥ 0} − #{t_j < 0} − ε, with ε = 0 when either
/// set is empty.
pub fn chi_s_paper_formula(twists: &[i64]) -> Result<LiteralFormula, SliceError> {
    Braidzel::pretzel(twists)?.require_orientable()?;
    Ok(literal_formula(twists))
}

fn literal_formula(twists: &[i64]) -> LiteralFormula {
    let nonneg = twists.iter().filter(|&&t| t >= 0).count() as i64;
    let neg = twists.len() as i64 - nonneg;
    let min_nonneg = twists.iter().copied().filter(|&t| t >= 0).min();
    let max_neg = twists.iter().copied().filter(|&t| t < 0).max();
    let epsilon = match (min_nonneg, max_neg) {
        (Some(a), Some(b)) if a + b < 0 => 1,
        _ => 0,
    };
    LiteralFormula { value: 2 + nonneg - neg - epsilon as i64, epsilon }
}

fn best_bound(twists: &[i64]) -> Result<Option<i64>, SliceError> {
    let p = Braidzel::pretzel(twists)?;
    let exact = chi_s_exact(&p);
    let subset = chi_s_upper_subset(&p)?.map(|b| b.bound);
    Ok(exact.into_iter().chain(subset).min())
}

/// Smallest bound from P and from its mirror P(−t_k, …, −t_1).
pub fn chi_s_combined(twists: &[i64]) -> Result<Option<i64>, SliceError> {
    Braidzel::pretzel(twists)?.require_orientable()?;
    let direct = best_bound(twists)?;
    let mirror = best_bound(&mirror_twists(twists))?;
    Ok(direct.into_iter().chain(mirror).min())
}

/// (1 − χ)/2, which must be integral for a knot.
pub fn genus_bound(chi: i64) -> Result<Ratio<i64>, SliceError> {
    let g = Ratio::new(1 - chi, 2);
    if !g.is_integer() {
        return Err(SliceError::NonIntegralGenus { chi });
    }
    Ok(g)
}

pub fn slice_report(twists: &[i64]) -> Result<SliceReport, SliceError> {
    let p = Braidzel::pretzel(twists)?;
    p.require_orientable()?;
    let chi_s_exact = chi_s_exact(&p);
    let chi_s_upper_subset = chi_s_upper_subset(&p)?;
    let chi_s_paper_formula = literal_formula(twists);
    let chi_s_mirror_combined = chi_s_combined(twists)?;
    let formula_discrepancy = chi_s_upper_subset.as_ref().is_some_and(|b| b.bound != chi_s_paper_formula.value);
    let is_knot = p.boundary_components() == 1;
    let gs_lower = match (is_knot, chi_s_mirror_combined) {
        (true, Some(chi)) => Some(genus_bound(chi)?),
        _ => None,
    };
    let not_slice = gs_lower.is_some_and(|g| g >= Ratio::from_integer(1));
    Ok(SliceReport {
        chi_surface: p.euler_characteristic(),
        chi_s_exact,
        chi_s_upper_subset,
        chi_s_paper_formula,
        chi_s_mirror_combined,
        formula_discrepancy,
        is_knot,
        gs_lower,
        not_slice,
    })
}

/// Bounds for a braidzel with nontrivial braiding: no mirror or closed-form
/// terms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BraidzelBounds {
    pub chi_surface: i64,
    pub chi_s_exact: Option<i64>,
    pub chi_s_upper_subset: Option<SubsetBound>,
    pub chi_s_best: Option<i64>,
    pub is_knot: bool,
    #[serde(serialize_with = "ratio_as_string")]
    pub gs_lower: Option<Ratio<i64>>,
    pub not_slice: bool,
}

pub fn braidzel_bounds(bz: &Braidzel) -> Result<BraidzelBounds, SliceError> {
    bz.require_orientable()?;
    let chi_s_exact = chi_s_exact(bz);
    let chi_s_upper_subset = chi_s_upper_subset(bz)?;
    let chi_s_best = chi_s_exact.into_iter().chain(chi_s_upper_subset.as_ref().map(|b| b.bound)).min();
    let is_knot = bz.boundary_components() == 1;
    let gs_lower = match (is_knot, chi_s_best) {
        (true, Some(chi)) => Some(genus_bound(chi)?),
        _ => None,
    };
    Ok(BraidzelBounds {
        chi_surface: bz.euler_characteristic(),
        chi_s_exact,
        chi_s_upper_subset,
        chi_s_best,
        is_knot,
        gs_lower,
        not_slice: gs_lower.is_some_and(|g| g >= Ratio::from_integer(1)),
    })
}

//! Quasipositivity verdicts for braidzels.
//!
//! Pretzels and two-band braidzels are decided exactly. Elsewhere the
//! pairwise necessary condition and the non-negative-braid / nearly-negative
//! sufficient condition are applied, with a bounded move search in between.

use std::collections::{HashSet, VecDeque};

use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::braid_core::NormalForm;
use crate::braidzel::{Braidzel, SurfaceError};
use crate::moves::{apply_move, check_twist_hypotheses, pretzel_certificate_plan, Move, MoveKind, MoveTrace, NormalizeError};

/// Hard ceiling on the move-search depth.
pub const MAX_SEARCH_DEPTH: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QpError {
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error("expected a braidzel with {expected} bands, got {got}")]
    BandCount { expected: usize, got: usize },
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

impl From<NormalizeError> for QpError {
    fn from(e: NormalizeError) -> Self {
        match e {
            NormalizeError::Surface(s) => QpError::Surface(s),
            other => QpError::Internal(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum QpStatus {
    QuasipositiveExact,
    Quasipositive,
    NotQuasipositive,
    Unknown,
}

impl QpStatus {
    pub fn is_quasipositive(self) -> bool {
        matches!(self, QpStatus::QuasipositiveExact | QpStatus::Quasipositive)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            QpStatus::QuasipositiveExact => "QuasipositiveExact",
            QpStatus::Quasipositive => "Quasipositive",
            QpStatus::NotQuasipositive => "NotQuasipositive",
            QpStatus::Unknown => "Unknown",
        }
    }
}

/// Bands `i < j` (1-based) with t_i + t_j ≥ 2c(i, j; β).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Obstruction {
    pub i: usize,
    pub j: usize,
    pub twist_sum: i64,
    /// 2·c(i, j; β)
    pub bound: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateRule {
    /// Pretzel with all pairwise twist sums negative.
    PretzelCriterion,
    /// Two bands with t_1 + t_2 < 2m.
    AnnulusCriterion,
    /// Non-negative braid with nearly negative twists, reached by a move search.
    NonnegativeNearlyNegative,
}

/// Moves from the input to a braidzel with non-negative braid and nearly
/// negative twists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub rule: CertificateRule,
    #[serde(serialize_with = "moves_as_strings")]
    pub moves: Vec<Move>,
}

fn moves_as_strings<S: Serializer>(moves: &[Move], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(moves.iter().map(|m| m.to_string()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    Obstruction(Obstruction),
    Certificate(Certificate),
    None,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QpVerdict {
    pub status: QpStatus,
    pub witness: Witness,
}

impl QpVerdict {
    fn unknown() -> Self {
        QpVerdict { status: QpStatus::Unknown, witness: Witness::None }
    }

    fn obstructed(ob: Obstruction) -> Self {
        QpVerdict { status: QpStatus::NotQuasipositive, witness: Witness::Obstruction(ob) }
    }

    fn certified(status: QpStatus, rule: CertificateRule, moves: Vec<Move>) -> Self {
        QpVerdict { status, witness: Witness::Certificate(Certificate { rule, moves }) }
    }

    /// The certificate's moves replayed from `bz`, when there is one.
    pub fn certificate_trace(&self, bz: &Braidzel) -> Option<MoveTrace> {
        match &self.witness {
            Witness::Certificate(c) => Some(MoveTrace::replay(bz.clone(), &c.moves)),
            _ => None,
        }
    }

    /// Re-derives the witness against `bz`.
    pub fn check(&self, bz: &Braidzel) -> bool {
        match (&self.status, &self.witness) {
            (QpStatus::Unknown, Witness::None) => true,
            (QpStatus::NotQuasipositive, Witness::Obstruction(ob)) => {
                let k = bz.k();
                if ob.i == 0 || ob.i >= ob.j || ob.j > k {
                    return false;
                }
                let c = bz.braid().crossing_count(ob.i, ob.j).unwrap();
                let sum = bz.twists()[ob.i - 1] + bz.twists()[ob.j - 1];
                sum == ob.twist_sum && 2 * c == ob.bound && sum >= ob.bound
            }
            (s, Witness::Certificate(_)) if s.is_quasipositive() => {
                let tr = self.certificate_trace(bz).unwrap();
                tr.verify() && sufficient_condition(tr.end())
            }
            _ => false,
        }
    }
}

/// t ≤ 0 everywhere, with at most one zero.
pub fn is_nearly_negative(twists: &[i64]) -> bool {
    twists.iter().all(|&t| t <= 0) && twists.iter().filter(|&&t| t == 0).count() <= 1
}

fn pretzel_verdict(twists: &[i64]) -> Result<QpVerdict, QpError> {
    if twists.len() < 2 {
        return Ok(QpVerdict::unknown());
    }
    match check_twist_hypotheses(twists) {
        Ok(leading) => {
            let plan = pretzel_certificate_plan(twists, leading)?;
            Ok(QpVerdict::certified(QpStatus::QuasipositiveExact, CertificateRule::PretzelCriterion, plan))
        }
        Err(_) => {
            let k = twists.len();
            let (i, j) = (0..k)
                .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
                .find(|&(i, j)| twists[i] + twists[j] >= 0)
                .expect("some pair violates the criterion");
            Ok(QpVerdict::obstructed(Obstruction { i: i + 1, j: j + 1, twist_sum: twists[i] + twists[j], bound: 0 }))
        }
    }
}

/// P(t_1, …, t_k) is quasipositive iff t_i + t_j < 0 for all i < j.
/// One band is not decided.
pub fn pretzel_qp(twists: &[i64]) -> Result<QpVerdict, QpError> {
    let p = Braidzel::pretzel(twists)?;
    p.require_orientable()?;
    pretzel_verdict(twists)
}

/// P(σ_1^m, t) is quasipositive iff t_1 + t_2 < 2m.
pub fn annular_qp(bz: &Braidzel) -> Result<QpVerdict, QpError> {
    if bz.k() != 2 {
        return Err(QpError::BandCount { expected: 2, got: bz.k() });
    }
    bz.require_orientable()?;
    let m = bz.braid().crossing_count(1, 2).map_err(SurfaceError::from)?;
    let t = bz.twists();
    let sum = t[0] + t[1];
    if sum >= 2 * m {
        return Ok(QpVerdict::obstructed(Obstruction { i: 1, j: 2, twist_sum: sum, bound: 2 * m }));
    }
    // Strip the m half-twists by M6 moves, then certify the pretzel P(t - m).
    let unwind = if m > 0 { Move::inv(MoveKind::M6) } else { Move::fwd(MoveKind::M6) };
    let mut plan = vec![unwind; m.unsigned_abs() as usize];
    let shifted = [t[0] - m, t[1] - m];
    let leading = check_twist_hypotheses(&shifted)?;
    plan.extend(pretzel_certificate_plan(&shifted, leading)?);
    Ok(QpVerdict::certified(QpStatus::QuasipositiveExact, CertificateRule::AnnulusCriterion, plan))
}

/// First pair (lexicographic) with t_i + t_j ≥ 2c(i, j; β), if any.
pub fn necessary_condition(bz: &Braidzel) -> Result<Option<Obstruction>, QpError> {
    bz.require_orientable()?;
    Ok(first_obstruction(bz))
}

fn first_obstruction(bz: &Braidzel) -> Option<Obstruction> {
    let c = bz.braid().crossing_matrix();
    let t = bz.twists();
    let k = bz.k();
    for i in 0..k {
        for j in i + 1..k {
            let bound = 2 * c[i][j];
            if t[i] + t[j] >= bound {
                return Some(Obstruction { i: i + 1, j: j + 1, twist_sum: t[i] + t[j], bound });
            }
        }
    }
    None
}

/// Non-negative braid and nearly negative twists.
pub fn sufficient_condition(bz: &Braidzel) -> bool {
    is_nearly_negative(bz.twists()) && bz.braid().is_nonnegative()
}

/// Default search depth: 2·max(0, max t_i) + 2, capped at [`MAX_SEARCH_DEPTH`].
pub fn default_search_depth(bz: &Braidzel) -> usize {
    let top = bz.twists().iter().copied().max().unwrap_or(0).max(0) as usize;
    (2 * top + 2).min(MAX_SEARCH_DEPTH)
}

/// Decides quasipositivity where possible. `search_depth = None` uses
/// [`default_search_depth`].
pub fn decide(bz: &Braidzel, search_depth: Option<usize>) -> Result<QpVerdict, QpError> {
    bz.require_orientable()?;
    if bz.is_pretzel() {
        return pretzel_verdict(bz.twists());
    }
    if bz.k() == 2 {
        return annular_qp(bz);
    }
    if let Some(ob) = first_obstruction(bz) {
        return Ok(QpVerdict::obstructed(ob));
    }
    let depth = search_depth.unwrap_or_else(|| default_search_depth(bz));
    match search_sufficient(bz, depth) {
        Some(moves) => Ok(QpVerdict::certified(QpStatus::Quasipositive, CertificateRule::NonnegativeNearlyNegative, moves)),
        None => Ok(QpVerdict::unknown()),
    }
}

/// Breadth-first search over move sequences of length ≤ `depth`, in
/// lexicographic move order, for a braidzel meeting the sufficient condition.
fn search_sufficient(bz: &Braidzel, depth: usize) -> Option<Vec<Move>> {
    if sufficient_condition(bz) {
        return Some(Vec::new());
    }
    let key = |b: &Braidzel| -> (NormalForm, Vec<i64>) { (b.braid().free_reduce().normal_form(), b.twists().to_vec()) };
    let mut seen: HashSet<(NormalForm, Vec<i64>)> = HashSet::new();
    seen.insert(key(bz));
    let mut queue: VecDeque<(Braidzel, Vec<Move>)> = VecDeque::new();
    queue.push_back((bz.clone(), Vec::new()));
    while let Some((state, path)) = queue.pop_front() {
        if path.len() >= depth {
            continue;
        }
        for m in Move::ALL {
            let next = apply_move(&state, m);
            if !seen.insert(key(&next)) {
                continue;
            }
            let mut p = path.clone();
            p.push(m);
            if sufficient_condition(&next) {
                return Some(p);
            }
            queue.push_back((next, p));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid_core::BraidWord;

    fn bz(k: usize, braid: &[i64], t: &[i64]) -> Braidzel {
        Braidzel::new(BraidWord::from_signed(k, braid).unwrap(), t.to_vec()).unwrap()
    }

    #[test]
    fn nearly_negative() {
        assert!(is_nearly_negative(&[-1, -1, -1]));
        assert!(is_nearly_negative(&[0, -2, -2]));
        assert!(!is_nearly_negative(&[0, 0, -2]));
        assert!(!is_nearly_negative(&[1, -2]));
    }

    #[test]
    fn pretzel_examples() {
        let v = pretzel_qp(&[3, -5, -7]).unwrap();
        assert_eq!(v.status, QpStatus::QuasipositiveExact);
        assert!(v.check(&Braidzel::pretzel(&[3, -5, -7]).unwrap()));
        assert_eq!(pretzel_qp(&[-1, -1, -1]).unwrap().status, QpStatus::QuasipositiveExact);
        let v = pretzel_qp(&[1, 1, -3]).unwrap();
        assert_eq!(v.status, QpStatus::NotQuasipositive);
        assert_eq!(v.witness, Witness::Obstruction(Obstruction { i: 1, j: 2, twist_sum: 2, bound: 0 }));
        assert_eq!(pretzel_qp(&[-3]).unwrap().status, QpStatus::Unknown);
        assert!(matches!(pretzel_qp(&[1, 2]), Err(QpError::Surface(SurfaceError::NonOrientable { .. }))));
    }

    #[test]
    fn annular_examples() {
        let hopf = bz(2, &[], &[-1, -1]);
        assert_eq!(annular_qp(&hopf).unwrap().status, QpStatus::QuasipositiveExact);
        let v = annular_qp(&bz(2, &[1, 1], &[2, 2])).unwrap();
        assert_eq!(v.witness, Witness::Obstruction(Obstruction { i: 1, j: 2, twist_sum: 4, bound: 4 }));
        // m = -1: -2 < -2 fails
        assert_eq!(annular_qp(&bz(2, &[-1], &[0, -2])).unwrap().status, QpStatus::NotQuasipositive);
        let v = annular_qp(&bz(2, &[1, 1, 1], &[3, 1])).unwrap();
        assert_eq!(v.status, QpStatus::QuasipositiveExact);
        assert!(v.check(&bz(2, &[1, 1, 1], &[3, 1])));
        assert!(annular_qp(&bz(3, &[], &[1, 1, 1])).is_err());
    }

    #[test]
    fn necessary_examples() {
        assert_eq!(necessary_condition(&bz(3, &[], &[3, -5, -7])).unwrap(), None);
        assert_eq!(necessary_condition(&bz(3, &[], &[1, 1, -3])).unwrap().map(|o| (o.i, o.j)), Some((1, 2)));
        // c(i, j; Δ_3) = 1, and 1 + 1 ≥ 2
        let ob = necessary_condition(&bz(3, &[2, 1, 2], &[1, 1, 1])).unwrap().unwrap();
        assert_eq!(ob, Obstruction { i: 1, j: 2, twist_sum: 2, bound: 2 });
        assert!(necessary_condition(&bz(2, &[], &[1, 2])).is_err());
    }

    #[test]
    fn sufficient_examples() {
        assert!(sufficient_condition(&bz(4, &[2, 2, 2], &[-1, -4, -6, -8])));
        assert!(sufficient_condition(&bz(3, &[], &[0, -2, -2])));
        assert!(!sufficient_condition(&bz(2, &[-1], &[-1, -1])));
    }

    #[test]
    fn decide_examples() {
        assert_eq!(decide(&bz(3, &[], &[3, -5, -7]), None).unwrap().status, QpStatus::QuasipositiveExact);
        let p = bz(4, &[], &[-5, 3, -7, -9]);
        let v = decide(&p, None).unwrap();
        assert_eq!(v.status, QpStatus::QuasipositiveExact);
        assert!(v.check(&p));

        // σ_1σ_2⁻¹σ_1 with all twists -1: c(1,3) = -1 and -2 ≥ -2
        let v = decide(&bz(3, &[1, -2, 1], &[-1, -1, -1]), Some(0)).unwrap();
        assert_eq!(v.witness, Witness::Obstruction(Obstruction { i: 1, j: 3, twist_sum: -2, bound: -2 }));

        let open = bz(3, &[1, -2], &[-3, -3, -3]);
        assert_eq!(decide(&open, Some(0)).unwrap().status, QpStatus::Unknown);
        let v = decide(&open, Some(1)).unwrap();
        assert_eq!(v.status, QpStatus::Quasipositive);
        assert!(v.check(&open));
        assert!(decide(&bz(3, &[], &[1, 2, 3]), None).is_err());
    }
}

//! Isotopy moves on braidzels and replayable move traces.
//!
//! Six moves, each with an inverse. The left moves act near the bottom disk
//! and pre-compose the braid; the right moves act near the top disk and
//! post-compose it:
//!
//! | move | braid | twists |
//! |------|-------|--------|
//! | M1 | δβ | t∘π(δ) + 2⟨k⟩ |
//! | M2 | ϱ⁻¹β | t∘π(ϱ⁻¹) − 2⟨k⟩ |
//! | M3 | Δβ | t∘π(Δ) + 1 |
//! | M4 | βδ | t + 2⟨π(β)⁻¹(k)⟩ |
//! | M5 | βϱ⁻¹ | t − 2⟨π(β)⁻¹(k)⟩ |
//! | M6 | βΔ | t + 1 |
//!
//! Twists are indexed by start position, so a left move relabels them
//! through the permutation of the prefixed word: the band that now starts
//! at `x` is the band that used to start at `π(x)`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{OnceLock, RwLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::braid_core::{BraidWord, StrandPermutation};
use crate::braidzel::{Braidzel, BraidzelRecord, SurfaceError};
use crate::qp::is_nearly_negative;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MoveKind {
    M1,
    M2,
    M3,
    M4,
    M5,
    M6,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Direction {
    #[serde(rename = "fwd")]
    Forward,
    #[serde(rename = "inv")]
    Inverse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Move {
    pub kind: MoveKind,
    pub dir: Direction,
}

impl MoveKind {
    pub const ALL: [MoveKind; 6] = [MoveKind::M1, MoveKind::M2, MoveKind::M3, MoveKind::M4, MoveKind::M5, MoveKind::M6];

    pub fn side(self) -> Side {
        match self {
            MoveKind::M1 | MoveKind::M2 | MoveKind::M3 => Side::Left,
            MoveKind::M4 | MoveKind::M5 | MoveKind::M6 => Side::Right,
        }
    }

    /// The word composed onto the braid by the forward move.
    pub fn word(self, k: usize) -> BraidWord {
        let w = match self {
            MoveKind::M1 | MoveKind::M4 => BraidWord::descending(k),
            MoveKind::M2 | MoveKind::M5 => BraidWord::ascending(k).map(|w| w.inverse()),
            MoveKind::M3 | MoveKind::M6 => BraidWord::half_twist(k),
        };
        w.expect("k >= 1")
    }

    /// (change at the marked band, change at every band) for the forward move.
    fn twist_change(self) -> (i64, i64) {
        match self {
            MoveKind::M1 | MoveKind::M4 => (2, 0),
            MoveKind::M2 | MoveKind::M5 => (-2, 0),
            MoveKind::M3 | MoveKind::M6 => (0, 1),
        }
    }

    fn name(self) -> &'static str {
        match self {
            MoveKind::M1 => "M1",
            MoveKind::M2 => "M2",
            MoveKind::M3 => "M3",
            MoveKind::M4 => "M4",
            MoveKind::M5 => "M5",
            MoveKind::M6 => "M6",
        }
    }
}

impl Move {
    /// All twelve moves in lexicographic (kind, direction) order.
    pub const ALL: [Move; 12] = {
        let mut out = [Move { kind: MoveKind::M1, dir: Direction::Forward }; 12];
        let mut i = 0;
        while i < 6 {
            out[2 * i] = Move { kind: MoveKind::ALL[i], dir: Direction::Forward };
            out[2 * i + 1] = Move { kind: MoveKind::ALL[i], dir: Direction::Inverse };
            i += 1;
        }
        out
    };

    pub fn fwd(kind: MoveKind) -> Self {
        Move { kind, dir: Direction::Forward }
    }

    pub fn inv(kind: MoveKind) -> Self {
        Move { kind, dir: Direction::Inverse }
    }

    pub fn inverse(self) -> Self {
        let dir = match self.dir {
            Direction::Forward => Direction::Inverse,
            Direction::Inverse => Direction::Forward,
        };
        Move { kind: self.kind, dir }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind.name())?;
        if self.dir == Direction::Inverse {
            f.write_str("'")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unrecognized move {0:?}; expected M1..M6 with optional ' or :inv suffix")]
pub struct MoveParseError(pub String);

impl FromStr for Move {
    type Err = MoveParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || MoveParseError(s.to_string());
        let t = s.trim();
        let (head, dir) = if let Some(h) = t.strip_suffix('\'') {
            (h, Direction::Inverse)
        } else if let Some(h) = t.strip_suffix(":inv").or_else(|| t.strip_suffix("^-1")) {
            (h, Direction::Inverse)
        } else {
            (t.strip_suffix(":fwd").unwrap_or(t), Direction::Forward)
        };
        let kind = match head {
            "M1" | "m1" => MoveKind::M1,
            "M2" | "m2" => MoveKind::M2,
            "M3" | "m3" => MoveKind::M3,
            "M4" | "m4" => MoveKind::M4,
            "M5" | "m5" => MoveKind::M5,
            "M6" | "m6" => MoveKind::M6,
            _ => return Err(err()),
        };
        Ok(Move { kind, dir })
    }
}

/// Braid permutation plus twists: everything a move needs to update twists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct TwistState {
    pub perm: StrandPermutation,
    pub twists: Vec<i64>,
}

impl TwistState {
    pub fn of(bz: &Braidzel) -> Self {
        TwistState { perm: bz.braid().permutation(), twists: bz.twists().to_vec() }
    }

    pub fn apply(&self, m: Move) -> TwistState {
        let k = self.twists.len();
        let word_perm = m.kind.word(k).permutation();
        let (marked, all) = m.kind.twist_change();
        let top = k - 1;
        match (m.kind.side(), m.dir) {
            (Side::Left, Direction::Forward) => {
                let pw = word_perm.as_zero_based();
                let twists = (0..k)
                    .map(|x| self.twists[pw[x]] + all + if x == top { marked } else { 0 })
                    .collect();
                TwistState { perm: word_perm.then(&self.perm), twists }
            }
            (Side::Left, Direction::Inverse) => {
                let back = word_perm.inverse();
                let pb = back.as_zero_based();
                let twists = (0..k)
                    .map(|x| {
                        let y = pb[x];
                        self.twists[y] - all - if y == top { marked } else { 0 }
                    })
                    .collect();
                TwistState { perm: back.then(&self.perm), twists }
            }
            (Side::Right, Direction::Forward) => {
                let band = self.perm.preimage(k) - 1;
                let mut twists: Vec<i64> = self.twists.iter().map(|t| t + all).collect();
                twists[band] += marked;
                TwistState { perm: self.perm.then(&word_perm), twists }
            }
            (Side::Right, Direction::Inverse) => {
                let perm = self.perm.then(&word_perm.inverse());
                let band = perm.preimage(k) - 1;
                let mut twists: Vec<i64> = self.twists.iter().map(|t| t - all).collect();
                twists[band] -= marked;
                TwistState { perm, twists }
            }
        }
    }
}

/// Applies one move. The braid is composed literally (no reduction).
pub fn apply_move(bz: &Braidzel, m: Move) -> Braidzel {
    let k = bz.k();
    let next = TwistState::of(bz).apply(m);
    let word = match m.dir {
        Direction::Forward => m.kind.word(k),
        Direction::Inverse => m.kind.word(k).inverse(),
    };
    let braid = match m.kind.side() {
        Side::Left => word.compose(bz.braid()),
        Side::Right => bz.braid().compose(&word),
    }
    .expect("same strand count");
    Braidzel::new(braid, next.twists).expect("move preserves band count")
}

/// (t_2, …, t_k, t_1).
pub fn rotate_pretzel(twists: &[i64]) -> Vec<i64> {
    let mut out = twists.to_vec();
    if !out.is_empty() {
        out.rotate_left(1);
    }
    out
}

/// (t_k, …, t_1).
pub fn reverse_pretzel(twists: &[i64]) -> Vec<i64> {
    twists.iter().rev().copied().collect()
}

/// Moves realizing one left rotation of a pretzel's twists: M1 then M4⁻¹.
/// The braid becomes δδ⁻¹, which is trivial.
pub fn rotation_moves() -> [Move; 2] {
    [Move::fwd(MoveKind::M1), Move::inv(MoveKind::M4)]
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub mv: Move,
    pub result: Braidzel,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoveTrace {
    start: Braidzel,
    steps: Vec<TraceStep>,
}

impl MoveTrace {
    pub fn new(start: Braidzel) -> Self {
        MoveTrace { start, steps: Vec::new() }
    }

    /// Builds a trace by applying `moves` in order from `start`.
    pub fn replay(start: Braidzel, moves: &[Move]) -> Self {
        let mut tr = MoveTrace::new(start);
        for &m in moves {
            tr.push(m);
        }
        tr
    }

    pub fn from_parts(start: Braidzel, steps: Vec<TraceStep>) -> Self {
        MoveTrace { start, steps }
    }

    pub fn push(&mut self, m: Move) -> &Braidzel {
        let result = apply_move(self.end(), m);
        self.steps.push(TraceStep { mv: m, result });
        &self.steps.last().unwrap().result
    }

    pub fn start(&self) -> &Braidzel {
        &self.start
    }

    pub fn steps(&self) -> &[TraceStep] {
        &self.steps
    }

    pub fn steps_mut(&mut self) -> &mut Vec<TraceStep> {
        &mut self.steps
    }

    pub fn moves(&self) -> Vec<Move> {
        self.steps.iter().map(|s| s.mv).collect()
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn end(&self) -> &Braidzel {
        self.steps.last().map_or(&self.start, |s| &s.result)
    }

    /// Recomputes every step; braids are compared by the word problem and
    /// twists exactly.
    pub fn verify(&self) -> bool {
        let mut prev = &self.start;
        for step in &self.steps {
            if step.result.k() != prev.k() {
                return false;
            }
            let expect = apply_move(prev, step.mv);
            if expect.twists() != step.result.twists() {
                return false;
            }
            let same_braid = expect.braid() == step.result.braid()
                || expect.braid().words_equal(step.result.braid()).unwrap_or(false);
            if !same_braid {
                return false;
            }
            prev = &step.result;
        }
        true
    }

    /// One JSON record per line: a `{"start": …}` header, then one
    /// `{"move": "M3", "dir": "fwd", "result": …}` record per step.
    pub fn to_jsonl(&self) -> String {
        let mut out = serde_json::to_string(&StartLine { start: self.start.to_record() }).unwrap();
        out.push('\n');
        for s in &self.steps {
            let line = StepLine { mv: s.mv.kind, dir: s.mv.dir, result: s.result.to_record() };
            out.push_str(&serde_json::to_string(&line).unwrap());
            out.push('\n');
        }
        out
    }

    pub fn from_jsonl(text: &str) -> Result<MoveTrace, TraceFormatError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, first) = lines.next().ok_or(TraceFormatError::Empty)?;
        let head: StartLine =
            serde_json::from_str(first).map_err(|e| TraceFormatError::Json { line: 1, message: e.to_string() })?;
        let start = Braidzel::try_from(&head.start).map_err(|e| TraceFormatError::Surface { line: 1, source: e })?;
        let mut steps = Vec::new();
        for (n, line) in lines {
            let rec: StepLine = serde_json::from_str(line)
                .map_err(|e| TraceFormatError::Json { line: n + 1, message: e.to_string() })?;
            let result =
                Braidzel::try_from(&rec.result).map_err(|e| TraceFormatError::Surface { line: n + 1, source: e })?;
            steps.push(TraceStep { mv: Move { kind: rec.mv, dir: rec.dir }, result });
        }
        Ok(MoveTrace { start, steps })
    }
}

pub fn verify_trace(tr: &MoveTrace) -> bool {
    tr.verify()
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StartLine {
    start: BraidzelRecord,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StepLine {
    #[serde(rename = "move")]
    mv: MoveKind,
    dir: Direction,
    result: BraidzelRecord,
}

#[derive(Debug, Error)]
pub enum TraceFormatError {
    #[error("trace is empty")]
    Empty,
    #[error("line {line}: {message}")]
    Json { line: usize, message: String },
    #[error("line {line}: {source}")]
    Surface { line: usize, source: SurfaceError },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormalizeError {
    #[error("braid is not trivial; normalization starts from a pretzel")]
    NotPretzel,
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error("bands {first} and {second} both have nonnegative twist")]
    SecondNonnegative { first: usize, second: usize },
    #[error("twists t_{i} + t_{j} = {sum} is not negative")]
    PairNotNegative { i: usize, j: usize, sum: i64 },
    #[error("the positive twist sits at band {position}; rotate it to band 1 first")]
    PositiveNotLeading { position: usize },
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

/// Checks the pretzel criterion hypotheses; returns the 1-based band holding
/// the nonnegative twist, if any.
fn check_pretzel_hypotheses(p: &Braidzel) -> Result<Option<usize>, NormalizeError> {
    p.require_orientable()?;
    if !p.is_pretzel() {
        return Err(NormalizeError::NotPretzel);
    }
    check_twist_hypotheses(p.twists())
}

pub(crate) fn check_twist_hypotheses(t: &[i64]) -> Result<Option<usize>, NormalizeError> {
    let nonneg: Vec<usize> = (0..t.len()).filter(|&i| t[i] >= 0).collect();
    if nonneg.len() > 1 {
        return Err(NormalizeError::SecondNonnegative { first: nonneg[0] + 1, second: nonneg[1] + 1 });
    }
    if let Some((i, j)) = first_nonnegative_pair(t) {
        return Err(NormalizeError::PairNotNegative { i: i + 1, j: j + 1, sum: t[i] + t[j] });
    }
    Ok(nonneg.first().map(|i| i + 1))
}

fn first_nonnegative_pair(t: &[i64]) -> Option<(usize, usize)> {
    (0..t.len()).flat_map(|i| (i + 1..t.len()).map(move |j| (i, j))).find(|&(i, j)| t[i] + t[j] >= 0)
}

/// Δ_k ϱ_k⁻¹, the braid gained per normalization round.
pub fn normalization_step_word(k: usize) -> BraidWord {
    BraidWord::half_twist(k).unwrap().compose(&BraidWord::ascending(k).unwrap().inverse()).unwrap()
}

/// Per strand count: which sides' round words reproduce Δ_kϱ_k⁻¹.
fn side_reproduces_step(k: usize, side: Side) -> bool {
    static CACHE: OnceLock<RwLock<BTreeMap<(usize, Side), bool>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(&hit) = cache.read().unwrap().get(&(k, side)) {
        return hit;
    }
    let [twist, slide] = round_moves(side);
    // A right round appends (word of twist)(word of slide); a left round
    // prepends (word of slide)(word of twist).
    let round_word = match side {
        Side::Right => twist.kind.word(k).compose(&slide.kind.word(k)),
        Side::Left => slide.kind.word(k).compose(&twist.kind.word(k)),
    }
    .unwrap();
    let hit = round_word.words_equal(&normalization_step_word(k)).unwrap();
    cache.write().unwrap().insert((k, side), hit);
    hit
}

fn round_moves(side: Side) -> [Move; 2] {
    match side {
        Side::Left => [Move::fwd(MoveKind::M3), Move::fwd(MoveKind::M2)],
        Side::Right => [Move::fwd(MoveKind::M6), Move::fwd(MoveKind::M5)],
    }
}

/// Picks the handle side whose rounds reproduce the target braid and lower
/// the leading twist by one.
fn choose_side(state: &TwistState) -> Option<Side> {
    let k = state.twists.len();
    [Side::Right, Side::Left].into_iter().find(|&side| {
        if !side_reproduces_step(k, side) {
            return false;
        }
        let [a, b] = round_moves(side);
        let after = state.apply(a).apply(b);
        after.twists[0] == state.twists[0] - 1
    })
}

/// Move list taking a pretzel (braid trivial, hypotheses checked, positive
/// twist leading) to non-negative braid and nearly negative twists.
pub(crate) fn normalization_plan(state: &TwistState) -> Result<Vec<Move>, NormalizeError> {
    let rounds = state.twists[0].max(0);
    if rounds == 0 {
        return Ok(Vec::new());
    }
    let side = choose_side(state).ok_or_else(|| NormalizeError::Internal("no handle side reproduces Δϱ⁻¹".into()))?;
    let round = round_moves(side);
    Ok((0..rounds).flat_map(|_| round).collect())
}

/// Rotation moves bringing band `position` (1-based) to the front, followed
/// by the normalization rounds.
pub(crate) fn pretzel_certificate_plan(twists: &[i64], leading: Option<usize>) -> Result<Vec<Move>, NormalizeError> {
    let k = twists.len();
    let mut plan = Vec::new();
    let mut state = TwistState { perm: StrandPermutation::identity(k), twists: twists.to_vec() };
    if let Some(pos) = leading {
        for _ in 1..pos {
            for m in rotation_moves() {
                state = state.apply(m);
                plan.push(m);
            }
        }
    }
    plan.extend(normalization_plan(&state)?);
    Ok(plan)
}

fn check_normalized(p: &Braidzel, tr: &MoveTrace, rounds: i64) -> Result<(), NormalizeError> {
    let end = tr.end();
    let target = normalization_step_word(p.k()).pow(rounds);
    if !end.braid().words_equal(&target).unwrap_or(false) {
        return Err(NormalizeError::Internal(format!("final braid {} is not (Δϱ⁻¹)^{rounds}", end.braid())));
    }
    if !is_nearly_negative(end.twists()) {
        return Err(NormalizeError::Internal(format!("final twists {:?} are not nearly negative", end.twists())));
    }
    Ok(())
}

/// Normalizes a pretzel whose positive twist (if any) is already at band 1.
///
/// Returns the final braidzel P((Δϱ⁻¹)^{t_1}, t″) with t″ nearly negative and
/// the trace of 2·t_1 moves that reaches it.
pub fn normalize_to_nonnegative(p: &Braidzel) -> Result<(Braidzel, MoveTrace), NormalizeError> {
    if let Some(pos) = check_pretzel_hypotheses(p)? {
        if pos != 1 && p.twists()[pos - 1] > 0 {
            return Err(NormalizeError::PositiveNotLeading { position: pos });
        }
    }
    let state = TwistState::of(p);
    let plan = normalization_plan(&state)?;
    let tr = MoveTrace::replay(p.clone(), &plan);
    check_normalized(p, &tr, p.twists()[0].max(0))?;
    Ok((tr.end().clone(), tr))
}

/// Like [`normalize_to_nonnegative`], rotating the nonnegative twist to the
/// front by moves first, so any pretzel satisfying the criterion works.
pub fn certify_pretzel(p: &Braidzel) -> Result<MoveTrace, NormalizeError> {
    let leading = check_pretzel_hypotheses(p)?;
    let plan = pretzel_certificate_plan(p.twists(), leading)?;
    let tr = MoveTrace::replay(p.clone(), &plan);
    let rounds = leading.map_or(0, |pos| p.twists()[pos - 1].max(0));
    check_normalized(p, &tr, rounds)?;
    Ok(tr)
}

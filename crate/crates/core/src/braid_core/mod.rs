//! Braid words on `k` strands and exact braid-group computations.
//!
//! Conventions, fixed crate-wide:
//! - a word is read left to right, bottom to top; `compose(u, v)` runs `u` first;
//! - σ_i exchanges the strands at positions `i` and `i + 1`, passing strand
//!   `i` over strand `i + 1`;
//! - [`StrandPermutation`] maps a strand's start position to its end position.

mod garside;
mod perm;
mod text;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub use garside::{NormalForm, PermutationBraid};
pub use perm::StrandPermutation;
pub use text::{parse_braid, BraidParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BraidError {
    #[error("a braid needs at least one strand")]
    NoStrands,
    #[error("generator s{index} is out of range for {strands} strands")]
    IndexOutOfRange { index: usize, strands: usize },
    #[error("strand counts differ: {left} vs {right}")]
    StrandMismatch { left: usize, right: usize },
    #[error("strand pair ({i}, {j}) is invalid for {strands} strands")]
    BadPair { i: usize, j: usize, strands: usize },
    #[error("strand subset must be nonempty")]
    EmptySubset,
    #[error("strand {strand} is out of range for {strands} strands")]
    StrandOutOfRange { strand: usize, strands: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }

    pub fn flipped(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }
}

/// σ_index raised to ±1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    pub index: usize,
    pub sign: Sign,
}

impl Letter {
    pub fn new(index: usize, sign: Sign) -> Self {
        Letter { index, sign }
    }

    pub fn pos(index: usize) -> Self {
        Letter::new(index, Sign::Positive)
    }

    pub fn neg(index: usize) -> Self {
        Letter::new(index, Sign::Negative)
    }

    pub fn inverse(self) -> Self {
        Letter::new(self.index, self.sign.flipped())
    }
}

/// A word in σ_1^{±1}, …, σ_{k-1}^{±1}; the empty word is the identity.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<Letter>,
}

/// The three named braids Δ_k, δ_k, ϱ_k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedWords {
    pub half_twist: BraidWord,
    pub descending: BraidWord,
    pub ascending: BraidWord,
}

pub fn named_words(k: usize) -> Result<NamedWords, BraidError> {
    Ok(NamedWords {
        half_twist: BraidWord::half_twist(k)?,
        descending: BraidWord::descending(k)?,
        ascending: BraidWord::ascending(k)?,
    })
}

impl BraidWord {
    pub fn identity(k: usize) -> Result<Self, BraidError> {
        Self::new(k, Vec::new())
    }

    pub fn new(k: usize, letters: Vec<Letter>) -> Result<Self, BraidError> {
        if k == 0 {
            return Err(BraidError::NoStrands);
        }
        if let Some(l) = letters.iter().find(|l| l.index == 0 || l.index >= k) {
            return Err(BraidError::IndexOutOfRange { index: l.index, strands: k });
        }
        Ok(BraidWord { strands: k, letters })
    }

    pub(crate) fn from_letters_unchecked(k: usize, letters: Vec<Letter>) -> Self {
        debug_assert!(k >= 1 && letters.iter().all(|l| l.index >= 1 && l.index < k));
        BraidWord { strands: k, letters }
    }

    /// Compact signed-integer form: `-2` is σ_2^{-1}.
    pub fn from_signed(k: usize, exps: &[i64]) -> Result<Self, BraidError> {
        let letters = exps
            .iter()
            .map(|&e| {
                let sign = if e < 0 { Sign::Negative } else { Sign::Positive };
                Letter::new(e.unsigned_abs() as usize, sign)
            })
            .collect();
        Self::new(k, letters)
    }

    /// σ_i^e as a word of length |e|.
    pub fn generator_power(k: usize, i: usize, e: i64) -> Result<Self, BraidError> {
        let sign = if e < 0 { Sign::Negative } else { Sign::Positive };
        Self::new(k, vec![Letter::new(i, sign); e.unsigned_abs() as usize])
    }

    /// Δ_k = (σ_{k-1})(σ_{k-2}σ_{k-1}) ⋯ (σ_1σ_2 ⋯ σ_{k-1}).
    pub fn half_twist(k: usize) -> Result<Self, BraidError> {
        Self::half_twist_blocks(k, 1)
    }

    /// The first blocks of Δ_k down to the one starting at σ_lowest:
    /// (σ_{k-1})(σ_{k-2}σ_{k-1}) ⋯ (σ_lowest ⋯ σ_{k-1}).
    pub fn half_twist_blocks(k: usize, lowest: usize) -> Result<Self, BraidError> {
        if k == 0 {
            return Err(BraidError::NoStrands);
        }
        let mut letters = Vec::new();
        for start in (lowest.max(1)..k).rev() {
            letters.extend((start..k).map(Letter::pos));
        }
        Self::new(k, letters)
    }

    /// δ_k = σ_{k-1}σ_{k-2} ⋯ σ_1.
    pub fn descending(k: usize) -> Result<Self, BraidError> {
        if k == 0 {
            return Err(BraidError::NoStrands);
        }
        Self::new(k, (1..k).rev().map(Letter::pos).collect())
    }

    /// ϱ_k = σ_1σ_2 ⋯ σ_{k-1}.
    pub fn ascending(k: usize) -> Result<Self, BraidError> {
        if k == 0 {
            return Err(BraidError::NoStrands);
        }
        Self::new(k, (1..k).map(Letter::pos).collect())
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn compose(&self, other: &BraidWord) -> Result<BraidWord, BraidError> {
        if self.strands != other.strands {
            return Err(BraidError::StrandMismatch { left: self.strands, right: other.strands });
        }
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        Ok(BraidWord { strands: self.strands, letters })
    }

    pub fn inverse(&self) -> BraidWord {
        BraidWord {
            strands: self.strands,
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    /// `self` repeated `n` times; negative `n` repeats the inverse.
    pub fn pow(&self, n: i64) -> BraidWord {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut letters = Vec::with_capacity(base.len() * n.unsigned_abs() as usize);
        for _ in 0..n.unsigned_abs() {
            letters.extend_from_slice(&base.letters);
        }
        BraidWord { strands: self.strands, letters }
    }

    /// Cancels adjacent σ_iσ_i^{-1} and σ_i^{-1}σ_i pairs until none remain.
    pub fn free_reduce(&self) -> BraidWord {
        let mut out: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        BraidWord { strands: self.strands, letters: out }
    }

    pub fn permutation(&self) -> StrandPermutation {
        let mut p = StrandPermutation::identity(self.strands);
        for l in &self.letters {
            p.swap_after(l.index - 1);
        }
        p
    }

    pub fn exponent_sum(&self) -> i64 {
        self.letters.iter().map(|l| l.sign.value()).sum()
    }

    /// True iff the word literally contains no inverse letters.
    pub fn is_positive_word(&self) -> bool {
        self.letters.iter().all(|l| l.sign == Sign::Positive)
    }

    /// c(i, j; β): signed count of crossings between the strands starting at
    /// positions `i < j` (1-based).
    pub fn crossing_count(&self, i: usize, j: usize) -> Result<i64, BraidError> {
        if i == 0 || i >= j || j > self.strands {
            return Err(BraidError::BadPair { i, j, strands: self.strands });
        }
        Ok(self.crossing_matrix()[i - 1][j - 1])
    }

    /// All pairwise crossing counts at once, 0-based, symmetric.
    pub fn crossing_matrix(&self) -> Vec<Vec<i64>> {
        let k = self.strands;
        let mut at: Vec<usize> = (0..k).collect(); // position -> strand
        let mut c = vec![vec![0i64; k]; k];
        for l in &self.letters {
            let p = l.index - 1;
            let (a, b) = (at[p], at[p + 1]);
            c[a][b] += l.sign.value();
            c[b][a] += l.sign.value();
            at.swap(p, p + 1);
        }
        c
    }

    /// β|_subset: the braid formed by the strands starting at the given
    /// 1-based positions, renumbered in order.
    pub fn restrict(&self, subset: &[usize]) -> Result<BraidWord, BraidError> {
        if subset.is_empty() {
            return Err(BraidError::EmptySubset);
        }
        let k = self.strands;
        let mut tracked = vec![false; k];
        for &s in subset {
            if s == 0 || s > k {
                return Err(BraidError::StrandOutOfRange { strand: s, strands: k });
            }
            tracked[s - 1] = true;
        }
        let kept = tracked.iter().filter(|&&t| t).count();
        // tracked flags indexed by current position
        let mut here = tracked;
        let mut letters = Vec::new();
        for l in &self.letters {
            let p = l.index - 1;
            if here[p] && here[p + 1] {
                let rank = here[..p].iter().filter(|&&t| t).count();
                letters.push(Letter::new(rank + 1, l.sign));
            }
            here.swap(p, p + 1);
        }
        Ok(BraidWord { strands: kept, letters })
    }

    pub fn normal_form(&self) -> NormalForm {
        garside::normal_form(self)
    }

    /// Word problem: do the two words represent the same braid?
    pub fn words_equal(&self, other: &BraidWord) -> Result<bool, BraidError> {
        if self.strands != other.strands {
            return Err(BraidError::StrandMismatch { left: self.strands, right: other.strands });
        }
        if self.letters == other.letters {
            return Ok(true);
        }
        if self.exponent_sum() != other.exponent_sum() || self.permutation() != other.permutation() {
            return Ok(false);
        }
        Ok(self.inverse().compose(other)?.free_reduce().represents_identity())
    }

    pub fn represents_identity(&self) -> bool {
        let reduced = self.free_reduce();
        reduced.is_empty() || reduced.normal_form().is_identity()
    }

    /// Whether the braid equals some word without inverse letters
    /// (Garside infimum ≥ 0).
    pub fn is_nonnegative(&self) -> bool {
        if self.is_positive_word() {
            return true;
        }
        let reduced = self.free_reduce();
        reduced.is_positive_word() || reduced.normal_form().power() >= 0
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, l) in self.letters.iter().enumerate() {
            if n > 0 {
                f.write_str(" ")?;
            }
            match l.sign {
                Sign::Positive => write!(f, "s{}", l.index)?,
                Sign::Negative => write!(f, "s{}'", l.index)?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BraidWord(k={}, \"{}\")", self.strands, self)
    }
}

impl FromStr for BraidWord {
    type Err = BraidParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_braid(s, None)
    }
}

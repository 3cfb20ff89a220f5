//! Left-greedy Garside normal form for the Artin braid groups.
//!
//! Simple elements (permutation braids) are stored by their strand
//! permutation, 0-based, start position to end position. A pair of strands
//! starting at `a < b` crosses in the permutation braid iff `p[a] > p[b]`.

use serde::{Deserialize, Serialize};

use super::{BraidWord, Letter, Sign};

/// A positive braid in which every pair of strands crosses at most once.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PermutationBraid {
    perm: Vec<usize>,
}

impl PermutationBraid {
    fn identity(n: usize) -> Self {
        PermutationBraid { perm: (0..n).collect() }
    }

    #[cfg(test)]
    fn half_twist(n: usize) -> Self {
        PermutationBraid { perm: (0..n).rev().collect() }
    }

    /// σ_i (0-based `i`).
    fn generator(n: usize, i: usize) -> Self {
        let mut p = Self::identity(n);
        p.perm.swap(i, i + 1);
        p
    }

    /// Δ·σ_i^{-1}, the complement of σ_i in Δ (0-based `i`).
    fn complement_of_generator(n: usize, i: usize) -> Self {
        PermutationBraid {
            perm: (0..n).map(|a| swap_index(n - 1 - a, i)).collect(),
        }
    }

    fn strands(&self) -> usize {
        self.perm.len()
    }

    /// 1-based images, start position to end position.
    pub fn images(&self) -> Vec<usize> {
        self.perm.iter().map(|p| p + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }

    pub fn is_half_twist(&self) -> bool {
        let n = self.perm.len();
        self.perm.iter().enumerate().all(|(i, &p)| p == n - 1 - i)
    }

    /// Number of crossings (inversions).
    pub fn length(&self) -> usize {
        let n = self.perm.len();
        let mut count = 0;
        for a in 0..n {
            for b in a + 1..n {
                if self.perm[a] > self.perm[b] {
                    count += 1;
                }
            }
        }
        count
    }

    /// Indices i (0-based) such that σ_i is a left divisor.
    fn starts_with(&self, i: usize) -> bool {
        self.perm[i] > self.perm[i + 1]
    }

    /// Indices i (0-based) such that σ_i is a right divisor.
    fn finishing_set(&self) -> Vec<bool> {
        let n = self.perm.len();
        let mut inv = vec![0; n];
        for (s, &e) in self.perm.iter().enumerate() {
            inv[e] = s;
        }
        (0..n.saturating_sub(1)).map(|i| inv[i] > inv[i + 1]).collect()
    }

    /// Conjugation by Δ: σ_i ↦ σ_{n-i}.
    fn flip(&self) -> Self {
        let n = self.perm.len();
        PermutationBraid {
            perm: (0..n).map(|a| n - 1 - self.perm[n - 1 - a]).collect(),
        }
    }

    /// Right-multiplies by σ_i; caller guarantees the result stays simple.
    fn push_generator(&mut self, i: usize) {
        for p in self.perm.iter_mut() {
            *p = swap_index(*p, i);
        }
    }

    /// Removes a leading σ_i; caller guarantees σ_i is a left divisor.
    fn pop_leading_generator(&mut self, i: usize) {
        self.perm.swap(i, i + 1);
    }

    /// A positive word for this permutation braid.
    pub fn to_letters(&self) -> Vec<Letter> {
        let mut rest = self.clone();
        let mut out = Vec::with_capacity(self.length());
        while let Some(i) = (0..rest.strands().saturating_sub(1)).find(|&i| rest.starts_with(i)) {
            out.push(Letter::new(i + 1, Sign::Positive));
            rest.pop_leading_generator(i);
        }
        out
    }
}

fn swap_index(x: usize, i: usize) -> usize {
    if x == i {
        i + 1
    } else if x == i + 1 {
        i
    } else {
        x
    }
}

/// Canonical form Δ^power · A_1 ⋯ A_r with (A_j, A_{j+1}) left-weighted and
/// no A_j trivial or equal to Δ.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NormalForm {
    strands: usize,
    power: i64,
    factors: Vec<PermutationBraid>,
}

impl NormalForm {
    pub fn strands(&self) -> usize {
        self.strands
    }

    /// Exponent of Δ; the Garside infimum.
    pub fn power(&self) -> i64 {
        self.power
    }

    pub fn factors(&self) -> &[PermutationBraid] {
        &self.factors
    }

    /// Garside supremum, `power + number of factors`.
    pub fn supremum(&self) -> i64 {
        self.power + self.factors.len() as i64
    }

    pub fn is_identity(&self) -> bool {
        self.power == 0 && self.factors.is_empty()
    }

    /// Word spelling of the normal form: Δ^power followed by each factor.
    pub fn to_word(&self) -> BraidWord {
        let delta = BraidWord::half_twist(self.strands).expect("strands >= 1");
        let mut letters = Vec::new();
        let block = if self.power >= 0 { delta } else { delta.inverse() };
        for _ in 0..self.power.unsigned_abs() {
            letters.extend_from_slice(block.letters());
        }
        for f in &self.factors {
            letters.extend(f.to_letters());
        }
        BraidWord::from_letters_unchecked(self.strands, letters)
    }

    /// Checks the structural invariants; used by tests and debug builds.
    pub fn is_well_formed(&self) -> bool {
        self.factors.iter().all(|f| !f.is_identity() && !f.is_half_twist())
            && self.factors.windows(2).all(|w| is_left_weighted(&w[0], &w[1]))
    }
}

fn is_left_weighted(a: &PermutationBraid, b: &PermutationBraid) -> bool {
    let fin = a.finishing_set();
    (0..b.strands().saturating_sub(1)).all(|i| !b.starts_with(i) || fin[i])
}

/// Makes (a, b) left-weighted by sliding generators from `b` into `a`.
/// Returns whether anything moved.
fn left_weight(a: &mut PermutationBraid, b: &mut PermutationBraid) -> bool {
    let n = a.strands();
    let mut moved = false;
    loop {
        let fin = a.finishing_set();
        match (0..n.saturating_sub(1)).find(|&i| b.starts_with(i) && !fin[i]) {
            Some(i) => {
                a.push_generator(i);
                b.pop_leading_generator(i);
                moved = true;
            }
            None => return moved,
        }
    }
}

pub(super) fn normal_form(word: &BraidWord) -> NormalForm {
    let n = word.strands();
    if n < 2 {
        return NormalForm { strands: n, power: 0, factors: Vec::new() };
    }

    // word = Δ^power · B_1 ⋯ B_m. Every inverse letter contributes Δ^{-1}
    // that is pushed to the front, conjugating earlier factors by Δ; only the
    // parity of the number of such conjugations matters.
    let total_negative = word.letters().iter().filter(|l| l.sign == Sign::Negative).count();
    let mut power = 0i64;
    let mut seen_negative = 0usize;
    let mut factors: Vec<PermutationBraid> = Vec::new();
    for letter in word.letters() {
        let i = letter.index - 1;
        let simple = match letter.sign {
            Sign::Positive => PermutationBraid::generator(n, i),
            Sign::Negative => {
                seen_negative += 1;
                power -= 1;
                PermutationBraid::complement_of_generator(n, i)
            }
        };
        let simple = if (total_negative - seen_negative) % 2 == 1 { simple.flip() } else { simple };
        insert_factor(&mut factors, simple);
    }

    // The insertion sweep keeps the sequence left-weighted; confirm and repair.
    loop {
        let mut changed = false;
        for j in (0..factors.len().saturating_sub(1)).rev() {
            let (head, tail) = factors.split_at_mut(j + 1);
            changed |= left_weight(&mut head[j], &mut tail[0]);
        }
        if !changed {
            break;
        }
    }

    let leading_deltas = factors.iter().take_while(|f| f.is_half_twist()).count();
    power += leading_deltas as i64;
    factors.drain(..leading_deltas);
    while factors.last().is_some_and(|f| f.is_identity()) {
        factors.pop();
    }
    let nf = NormalForm { strands: n, power, factors };
    debug_assert!(nf.is_well_formed());
    nf
}

fn insert_factor(factors: &mut Vec<PermutationBraid>, simple: PermutationBraid) {
    if simple.is_identity() {
        return;
    }
    factors.push(simple);
    let mut j = factors.len() - 1;
    while j > 0 {
        let (head, tail) = factors.split_at_mut(j);
        if !left_weight(&mut head[j - 1], &mut tail[0]) {
            break;
        }
        j -= 1;
    }
    while factors.last().is_some_and(|f| f.is_identity()) {
        factors.pop();
    }
}

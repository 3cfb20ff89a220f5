use std::fmt;

use serde::{Deserialize, Serialize};

/// Where each strand of a braid ends up.
///
/// Positions are 1-based in the public API. `image(x)` is the end position
/// of the strand that starts at position `x`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StrandPermutation {
    // 0-based: map[start] = end
    map: Vec<usize>,
}

impl StrandPermutation {
    pub fn identity(k: usize) -> Self {
        StrandPermutation { map: (0..k).collect() }
    }

    /// Builds a permutation from 1-based images; `None` unless `images` is a
    /// bijection of `1..=len`.
    pub fn from_images(images: &[usize]) -> Option<Self> {
        let k = images.len();
        let mut seen = vec![false; k];
        let mut map = Vec::with_capacity(k);
        for &x in images {
            if x == 0 || x > k || seen[x - 1] {
                return None;
            }
            seen[x - 1] = true;
            map.push(x - 1);
        }
        Some(StrandPermutation { map })
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// End position of the strand starting at `start` (both 1-based).
    pub fn image(&self, start: usize) -> usize {
        self.map[start - 1] + 1
    }

    /// Start position of the strand ending at `end` (both 1-based).
    pub fn preimage(&self, end: usize) -> usize {
        self.map.iter().position(|&e| e == end - 1).expect("bijection") + 1
    }

    pub(crate) fn as_zero_based(&self) -> &[usize] {
        &self.map
    }

    /// Swaps the strands currently sitting at 0-based positions `i` and `i + 1`.
    pub(crate) fn swap_after(&mut self, i: usize) {
        for e in self.map.iter_mut() {
            if *e == i {
                *e = i + 1;
            } else if *e == i + 1 {
                *e = i;
            }
        }
    }

    /// `self` followed by `next`: a strand first travels through `self`,
    /// then through `next`.
    pub fn then(&self, next: &StrandPermutation) -> StrandPermutation {
        assert_eq!(self.len(), next.len(), "permutation sizes differ");
        StrandPermutation {
            map: self.map.iter().map(|&m| next.map[m]).collect(),
        }
    }

    pub fn inverse(&self) -> StrandPermutation {
        let mut inv = vec![0; self.map.len()];
        for (s, &e) in self.map.iter().enumerate() {
            inv[e] = s;
        }
        StrandPermutation { map: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &m)| i == m)
    }

    /// Cycle lengths, sorted descending.
    pub fn cycle_lengths(&self) -> Vec<usize> {
        let mut seen = vec![false; self.map.len()];
        let mut out = Vec::new();
        for s in 0..self.map.len() {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                x = self.map[x];
                len += 1;
            }
            out.push(len);
        }
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }
}

impl fmt::Debug for StrandPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let images: Vec<usize> = self.map.iter().map(|m| m + 1).collect();
        write!(f, "StrandPermutation{:?}", images)
    }
}

#![allow(dead_code)]

use proptest::prelude::*;
use qpretzel::braid_core::BraidWord;
use qpretzel::braidzel::Braidzel;

/// Signed generator indices for a word on `k` strands.
pub fn word(k: usize, max_len: usize) -> BoxedStrategy<Vec<i64>> {
    if k < 2 {
        return Just(Vec::new()).boxed();
    }
    let letter = (1..k as i64, any::<bool>()).prop_map(|(i, neg)| if neg { -i } else { i });
    prop::collection::vec(letter, 0..=max_len).boxed()
}

/// Twists in [-bound, bound] sharing one parity.
pub fn orientable_twists(k: usize, bound: i64) -> BoxedStrategy<Vec<i64>> {
    any::<bool>()
        .prop_flat_map(move |odd| {
            let vals: Vec<i64> = (-bound..=bound).filter(|t| (t % 2 != 0) == odd).collect();
            prop::collection::vec(prop::sample::select(vals), k)
        })
        .boxed()
}

pub fn braidzel(max_k: usize, max_len: usize, bound: i64) -> BoxedStrategy<Braidzel> {
    (1..=max_k)
        .prop_flat_map(move |k| (word(k, max_len), orientable_twists(k, bound)).prop_map(move |(w, t)| {
            Braidzel::new(BraidWord::from_signed(k, &w).unwrap(), t).unwrap()
        }))
        .boxed()
}

/// Orientable twist vectors of length `k` in [-bound, bound], lexicographic.
pub fn each_orientable(k: usize, bound: i64, mut f: impl FnMut(&[i64])) {
    fn go(buf: &mut Vec<i64>, k: usize, bound: i64, f: &mut dyn FnMut(&[i64])) {
        if buf.len() == k {
            f(buf);
            return;
        }
        let step = if buf.is_empty() { 1 } else { 2 };
        let start = if buf.is_empty() || (buf[0] + bound) % 2 == 0 { -bound } else { -bound + 1 };
        let mut t = start;
        while t <= bound {
            buf.push(t);
            go(buf, k, bound, f);
            buf.pop();
            t += step;
        }
    }
    go(&mut Vec::with_capacity(k), k, bound, &mut f);
}

pub fn pairwise_negative(t: &[i64]) -> bool {
    (0..t.len()).all(|i| (i + 1..t.len()).all(|j| t[i] + t[j] < 0))
}

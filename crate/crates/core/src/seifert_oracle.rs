//! Seifert form of an all-odd pretzel surface, with its signature and
//! determinant computed in exact arithmetic.
//!
//! On the standard basis of k − 1 loops, each through two adjacent bands,
//! V is tridiagonal:
//! V_ii = (t_i + t_{i+1})/2, V_{i,i+1} = (t_{i+1} + 1)/2,
//! V_{i+1,i} = (t_{i+1} − 1)/2.

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("no bands")]
    NoBands,
    #[error("band {band} has even twist {twist}")]
    EvenTwist { band: usize, twist: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeifertMatrix {
    pub n: usize,
    /// Row-major.
    pub entries: Vec<Vec<i64>>,
}

impl SeifertMatrix {
    /// V + Vᵀ.
    pub fn symmetrized(&self) -> Vec<Vec<i64>> {
        let n = self.n;
        (0..n).map(|i| (0..n).map(|j| self.entries[i][j] + self.entries[j][i]).collect()).collect()
    }

    /// V − Vᵀ.
    pub fn antisymmetrized(&self) -> Vec<Vec<i64>> {
        let n = self.n;
        (0..n).map(|i| (0..n).map(|j| self.entries[i][j] - self.entries[j][i]).collect()).collect()
    }
}

pub fn seifert_matrix(twists: &[i64]) -> Result<SeifertMatrix, OracleError> {
    if twists.is_empty() {
        return Err(OracleError::NoBands);
    }
    if let Some(i) = twists.iter().position(|t| t % 2 == 0) {
        return Err(OracleError::EvenTwist { band: i + 1, twist: twists[i] });
    }
    let n = twists.len() - 1;
    let mut v = vec![vec![0i64; n]; n];
    for i in 0..n {
        v[i][i] = (twists[i] + twists[i + 1]) / 2;
        if i + 1 < n {
            v[i][i + 1] = (twists[i + 1] + 1) / 2;
            v[i + 1][i] = (twists[i + 1] - 1) / 2;
        }
    }
    Ok(SeifertMatrix { n, entries: v })
}

/// Signature of V + Vᵀ via symmetric Gaussian elimination over ℚ.
pub fn signature(v: &SeifertMatrix) -> i64 {
    let mut a: Vec<Vec<BigRational>> = v
        .symmetrized()
        .into_iter()
        .map(|row| row.into_iter().map(|x| BigRational::from_integer(BigInt::from(x))).collect())
        .collect();
    let mut n = a.len();
    let mut sig = 0i64;
    while n > 0 {
        let last = n - 1;
        if let Some(p) = (0..n).find(|&i| !a[i][i].is_zero()) {
            swap_sym(&mut a, p, last);
        } else if let Some((i, j)) = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).find(|&(i, j)| !a[i][j].is_zero()) {
            // Zero diagonal: add row/column j to i, making a_ii = 2 a_ij ≠ 0.
            for c in 0..n {
                let add = a[j][c].clone();
                a[i][c] += add;
            }
            for r in 0..n {
                let add = a[r][j].clone();
                a[r][i] += add;
            }
            swap_sym(&mut a, i, last);
        } else {
            break;
        }
        let pivot = a[last][last].clone();
        sig += if pivot.is_positive() { 1 } else { -1 };
        for r in 0..last {
            let f = &a[r][last] / &pivot;
            if f.is_zero() {
                continue;
            }
            for c in 0..last {
                let sub = &f * &a[last][c];
                a[r][c] -= sub;
            }
        }
        n = last;
    }
    sig
}

fn swap_sym(a: &mut [Vec<BigRational>], i: usize, j: usize) {
    if i == j {
        return;
    }
    a.swap(i, j);
    for row in a.iter_mut() {
        row.swap(i, j);
    }
}

/// |det(V + Vᵀ)|, with 1 for the empty matrix.
pub fn determinant(v: &SeifertMatrix) -> u64 {
    bareiss(v.symmetrized()).magnitude().try_into().expect("determinant fits u64")
}

/// Fraction-free elimination.
fn bareiss(m: Vec<Vec<i64>>) -> BigInt {
    let n = m.len();
    let mut a: Vec<Vec<BigInt>> = m.into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect();
    let mut sign = 1;
    let mut prev = BigInt::from(1);
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let val = (&a[k][k] * &a[i][j] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = val;
            }
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        return BigInt::from(1);
    }
    prev * sign
}

/// det(V − Vᵀ); ±1 for a closed-off Seifert surface.
pub fn intersection_determinant(v: &SeifertMatrix) -> BigInt {
    bareiss(v.antisymmetrized())
}

/// |σ|/2.
pub fn gs_signature_lower(v: &SeifertMatrix) -> Ratio<i64> {
    Ratio::new(signature(v).abs(), 2)
}

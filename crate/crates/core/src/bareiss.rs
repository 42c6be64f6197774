//! Fraction-free Gauss-Jordan elimination over big integers.
//!
//! Every intermediate entry is a minor of the input, so the divisions by the
//! previous pivot are exact and no rationals are ever formed.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Result of eliminating a square integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Adjugate {
    pub det: BigInt,
    /// `det * inverse`, i.e. the adjugate matrix.
    pub adj: Vec<Vec<BigInt>>,
}

/// Determinant and adjugate of `m`. Returns `None` when `m` is singular.
pub fn adjugate(m: &[Vec<i64>]) -> Option<Adjugate> {
    let n = m.len();
    assert!(m.iter().all(|row| row.len() == n), "matrix must be square");
    if n == 0 {
        return Some(Adjugate { det: BigInt::one(), adj: Vec::new() });
    }

    // Augmented [m | I].
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<BigInt> = row.iter().map(|&x| BigInt::from(x)).collect();
            r.extend((0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
            r
        })
        .collect();

    let mut prev = BigInt::one();
    let mut sign = BigInt::one();
    for k in 0..n {
        let pivot_row = (k..n).find(|&r| !a[r][k].is_zero())?;
        if pivot_row != k {
            a.swap(pivot_row, k);
            sign = -sign;
        }
        let pivot_vals = a[k].clone();
        let pivot = pivot_vals[k].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == k {
                continue;
            }
            let factor = row[k].clone();
            for (x, p) in row.iter_mut().zip(&pivot_vals) {
                let num = &pivot * &*x - &factor * p;
                let (q, r) = num.div_rem(&prev);
                debug_assert!(r.is_zero(), "inexact Bareiss division");
                *x = q;
            }
        }
        prev = pivot;
    }

    // Left block is now prev * I; `prev` is the determinant up to the sign
    // of the row permutation, and the right block is prev * m^{-1}.
    let det = &prev * &sign;
    let adj = a
        .into_iter()
        .map(|row| row[n..].iter().map(|x| x * &sign).collect())
        .collect();
    Some(Adjugate { det, adj })
}

/// Exact inverse of a unimodular matrix. `Err(det)` when `|det| != 1`.
pub fn unimodular_inverse(m: &[Vec<i64>]) -> Result<Vec<Vec<BigInt>>, BigInt> {
    let Some(Adjugate { det, adj }) = adjugate(m) else {
        return Err(BigInt::zero());
    };
    if !det.abs().is_one() {
        return Err(det);
    }
    Ok(adj.into_iter().map(|row| row.into_iter().map(|x| x * &det).collect()).collect())
}

//! Exhaustive minimum-weight search over a coset family.
//!
//! The span of `logical ∪ stab` is walked in p-ary modular Gray-code order over
//! the prime subfield (each `F_q` coefficient split into its `F_p` digits), so
//! each step adds a single scaled basis row. Vectors whose logical coordinates
//! are all zero (that is, elements of `span(stab)`) are skipped. Work is split into
//! contiguous index ranges processed in parallel; the result is a min-reduction
//! and does not depend on the split.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::flinalg::Mat;

/// Default number of enumerated vectors allowed per search.
pub const DEFAULT_BUDGET: u64 = 1 << 24;

const CHUNK: u64 = 1 << 14;

/// Number of vectors a search over `q^dim` combinations would examine.
pub fn search_size(q: u64, dim: usize) -> u128 {
    (q as u128).saturating_pow(dim as u32)
}

/// Minimum Hamming weight over `span(logical ∪ stab) ∖ span(stab)`.
///
/// `logical` rows must be linearly independent modulo `span(stab)`, so
/// membership in `span(stab)` is equivalent to all logical coefficients vanishing.
pub fn min_weight(logical: &Mat, stab: &Mat, budget: u64) -> Result<usize> {
    let f = logical.field().clone();
    let n = logical.cols();
    let l = logical.rows();
    if l == 0 {
        return Err(Error::ZeroCode);
    }
    let dim = l + stab.rows();
    let q = f.order();
    let total = search_size(q, dim);
    if total > budget as u128 {
        return Err(Error::BudgetExceeded {
            needed: total,
            budget,
        });
    }
    let total = total as u64;
    // Additive F_p-basis of span: β_s · row_t, β_s = p^s in the element encoding.
    let r = f.degree() as usize;
    let p = f.p() as u64;
    let stacked = logical.vstack(stab)?;
    let mut basis = Mat::empty(&f, n);
    for row in stacked.row_iter() {
        let mut beta = 1u32;
        for _ in 0..r {
            let scaled: Vec<u32> = row.iter().map(|&x| f.mul(x, beta)).collect();
            basis.push_row(&scaled)?;
            beta *= p as u32;
        }
    }
    let dim = dim * r;
    let l = l * r;
    let q = p;
    let q32 = p as u32;

    let chunks = total.div_ceil(CHUNK);
    let best = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * CHUNK;
            let end = (start + CHUNK).min(total);
            let mut digits = gray_digits(start, q, dim);
            let mut cur = vec![0u32; n];
            for (t, &g) in digits.iter().enumerate() {
                for _ in 0..g {
                    for (x, &y) in cur.iter_mut().zip(basis.row(t)) {
                        *x = f.add(*x, y);
                    }
                }
            }
            let mut nonzero_logical = digits[..l].iter().filter(|&&g| g != 0).count();
            let mut best = usize::MAX;
            let mut i = start;
            loop {
                if nonzero_logical > 0 {
                    let w = cur.iter().filter(|&&x| x != 0).count();
                    best = best.min(w);
                }
                i += 1;
                if i >= end {
                    break;
                }
                let t = trailing_digit(i, q);
                let old = digits[t];
                let new = if old + 1 == q32 { 0 } else { old + 1 };
                digits[t] = new;
                if t < l {
                    if old == 0 {
                        nonzero_logical += 1;
                    } else if new == 0 {
                        nonzero_logical -= 1;
                    }
                }
                let row = basis.row(t);
                if p == 2 {
                    for (x, &y) in cur.iter_mut().zip(row) {
                        *x ^= y;
                    }
                } else {
                    for (x, &y) in cur.iter_mut().zip(row) {
                        *x = f.add(*x, y);
                    }
                }
            }
            best
        })
        .min()
        .unwrap_or(usize::MAX);
    debug_assert!(best != usize::MAX);
    Ok(best)
}

fn trailing_digit(mut i: u64, q: u64) -> usize {
    let mut t = 0;
    while i % q == 0 {
        i /= q;
        t += 1;
    }
    t
}

/// Digits of the modular Gray code at index `i`: `g_t = (a_t − a_{t+1}) mod q`
/// where `a` are the base-q digits of `i`.
fn gray_digits(i: u64, q: u64, dim: usize) -> Vec<u32> {
    let mut a = Vec::with_capacity(dim + 1);
    let mut x = i;
    for _ in 0..=dim {
        a.push(x % q);
        x /= q;
    }
    (0..dim)
        .map(|t| ((a[t] + q - a[t + 1]) % q) as u32)
        .collect()
}

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::IntMatrix;

/// Smith normal form `U · m · V = diag(d₁, …, d_r, 0, …)` with `d₁ | d₂ | …`.
#[derive(Clone, Debug, PartialEq)]
pub struct SnfResult {
    /// `min(rows, cols)` non-negative invariant factors; zeros come last.
    pub diagonal: Vec<BigInt>,
    /// Unimodular `(U, V)`, present when requested.
    pub transforms: Option<(IntMatrix, IntMatrix)>,
}

impl SnfResult {
    /// Orders of the finite cyclic summands of the cokernel (factors > 1).
    pub fn torsion(&self) -> Vec<BigInt> {
        self.diagonal.iter().filter(|d| **d > BigInt::from(1)).cloned().collect()
    }

    /// Rank of the free part of the cokernel of a matrix with `rows` rows.
    pub fn free_rank(&self, rows: usize) -> usize {
        rows - self.diagonal.iter().filter(|d| !d.is_zero()).count()
    }
}

/// Classical gcd-driven row/column reduction.
pub fn smith_normal_form(m: &IntMatrix, with_transforms: bool) -> SnfResult {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut u = with_transforms.then(|| IntMatrix::identity(rows));
    let mut v = with_transforms.then(|| IntMatrix::identity(cols));
    let steps = rows.min(cols);

    for t in 0..steps {
        // smallest nonzero entry of the trailing block becomes the pivot
        let Some((pi, pj)) = min_entry(&a, t) else { break };
        move_pivot(&mut a, &mut u, &mut v, t, pi, pj);
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                let q = a.get(i, t).div_floor(a.get(t, t));
                if !q.is_zero() {
                    a.add_row(i, t, &-&q);
                    if let Some(u) = u.as_mut() {
                        u.add_row(i, t, &-&q);
                    }
                }
                clean &= a.get(i, t).is_zero();
            }
            for j in t + 1..cols {
                let q = a.get(t, j).div_floor(a.get(t, t));
                if !q.is_zero() {
                    a.add_col(j, t, &-&q);
                    if let Some(v) = v.as_mut() {
                        v.add_col(j, t, &-&q);
                    }
                }
                clean &= a.get(t, j).is_zero();
            }
            if clean {
                // enforce divisibility of the remaining block by the pivot
                let bad = (t + 1..rows)
                    .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                    .find(|&(i, j)| !a.get(i, j).is_multiple_of(a.get(t, t)));
                match bad {
                    None => break,
                    Some((i, _)) => {
                        let one = BigInt::from(1);
                        a.add_row(t, i, &one);
                        if let Some(u) = u.as_mut() {
                            u.add_row(t, i, &one);
                        }
                        continue;
                    }
                }
            }
            let (pi, pj) = min_entry_cross(&a, t);
            move_pivot(&mut a, &mut u, &mut v, t, pi, pj);
        }
        if a.get(t, t).is_negative() {
            a.negate_row(t);
            if let Some(u) = u.as_mut() {
                u.negate_row(t);
            }
        }
    }

    SnfResult {
        diagonal: (0..steps).map(|i| a.get(i, i).clone()).collect(),
        transforms: u.zip(v),
    }
}

fn min_entry(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let x = a.get(i, j);
            if x.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| x.abs() < a.get(bi, bj).abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

/// Smallest nonzero entry in row `t` / column `t` of the trailing block.
fn min_entry_cross(a: &IntMatrix, t: usize) -> (usize, usize) {
    let mut best = (t, t);
    let cand = (t..a.rows()).map(|i| (i, t)).chain((t + 1..a.cols()).map(|j| (t, j)));
    for (i, j) in cand {
        let x = a.get(i, j);
        if !x.is_zero() && (a.get(best.0, best.1).is_zero() || x.abs() < a.get(best.0, best.1).abs())
        {
            best = (i, j);
        }
    }
    best
}

fn move_pivot(
    a: &mut IntMatrix,
    u: &mut Option<IntMatrix>,
    v: &mut Option<IntMatrix>,
    t: usize,
    pi: usize,
    pj: usize,
) {
    a.swap_rows(t, pi);
    a.swap_cols(t, pj);
    if let Some(u) = u.as_mut() {
        u.swap_rows(t, pi);
    }
    if let Some(v) = v.as_mut() {
        v.swap_cols(t, pj);
    }
}

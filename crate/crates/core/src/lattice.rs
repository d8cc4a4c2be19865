//! Negative continued fractions of linear plumbing chains and their
//! embeddings into the definite lattices `ℤᴺ` and `E8`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{invalid, Error, Result};
use crate::exact::{frac, is_prime, Fraction, IntMatrix};
use crate::linking::{form_from_presentation, my_check};
use crate::report::{ObstructionReport, Verdict};

/// Weights `[a₁, …, a_ℓ]` (all `≥ 2`) of a chain with `p/q = a₁ − 1/(a₂ − …)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChainWeights {
    weights: Vec<u64>,
}

impl ChainWeights {
    pub fn new(weights: Vec<u64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(invalid("empty chain"));
        }
        if weights.iter().any(|&w| w < 2) {
            return Err(invalid("chain weights must be at least 2"));
        }
        Ok(ChainWeights { weights })
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// `a₁ − 1/(a₂ − 1/(… − 1/a_ℓ))`.
    pub fn evaluate(&self) -> Fraction {
        let mut acc = Fraction::from_integer(self.weights[self.weights.len() - 1].into());
        for &a in self.weights.iter().rev().skip(1) {
            acc = Fraction::from_integer(a.into()) - acc.recip();
        }
        acc
    }

    /// Negative-definite plumbing matrix: `−aᵢ` on the diagonal, `1` beside it.
    pub fn plumbing_matrix(&self) -> IntMatrix {
        let n = self.len();
        IntMatrix::from_fn(n, n, |i, j| match i.abs_diff(j) {
            0 => -(self.weights[i] as i64),
            1 => 1,
            _ => 0,
        })
    }
}

pub fn neg_cf(p: u64, q: u64) -> Result<ChainWeights> {
    if !(p > q && q > 0) || p.gcd(&q) != 1 {
        return Err(invalid(format!("{p}/{q} is not a reduced fraction with p > q > 0")));
    }
    let (mut num, mut den) = (p, q);
    let mut weights = Vec::new();
    while den != 0 {
        let a = num.div_ceil(den);
        weights.push(a);
        (num, den) = (den, a * den - num);
    }
    let chain = ChainWeights::new(weights)?;
    debug_assert_eq!(chain.evaluate(), frac(p as i64, q as i64));
    Ok(chain)
}

/// One vector per chain node. Coordinates are `vectors[i][j] / scale`
/// (`scale = 2` for the half-integral `E8` model).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    pub vectors: Vec<Vec<i64>>,
    pub scale: i64,
}

impl Embedding {
    /// Euclidean dot product, exact.
    pub fn dot(&self, i: usize, j: usize) -> Fraction {
        let d: i64 = self.vectors[i].iter().zip(&self.vectors[j]).map(|(a, b)| a * b).sum();
        frac(d, self.scale * self.scale)
    }

    /// Checks the chain pairing under the negative-definite form `−(·,·)`:
    /// `−weightᵢ` on the diagonal, `±1` for neighbours, `0` otherwise.
    pub fn realizes(&self, chain: &ChainWeights) -> bool {
        let n = chain.len();
        if self.vectors.len() != n {
            return false;
        }
        (0..n).all(|i| {
            (0..n).all(|j| {
                let pairing = -self.dot(i, j);
                match i.abs_diff(j) {
                    0 => pairing == frac(-(chain.weights[i] as i64), 1),
                    1 => pairing == Fraction::one() || pairing == -Fraction::one(),
                    _ => pairing.is_zero(),
                }
            })
        })
    }
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Backtracking state for `ℤᴺ`: touched coordinates always form a prefix
/// and fresh coordinates are filled nonnegative and nonincreasing, which
/// quotients out signed permutations of untouched coordinates.
struct ZnSearch<'a> {
    weights: &'a [u64],
    dim: usize,
    stack: Vec<Vec<i64>>,
    touched: Vec<usize>,
    found: Vec<Embedding>,
    limit: usize,
}

impl ZnSearch<'_> {
    fn run(&mut self) {
        let i = self.stack.len();
        if i == self.weights.len() {
            self.found.push(Embedding { vectors: self.stack.clone(), scale: 1 });
            return;
        }
        let t = self.touched.last().copied().unwrap_or(0);
        let mut head = vec![0i64; t];
        self.fill_touched(&mut head, 0, self.weights[i] as i64);
    }

    fn fill_touched(&mut self, head: &mut Vec<i64>, pos: usize, remaining: i64) {
        if self.found.len() >= self.limit {
            return;
        }
        if pos == head.len() {
            let i = self.stack.len();
            let ok = self.stack.iter().enumerate().all(|(j, v)| {
                let d = dot(&v[..head.len()], head);
                if j + 1 == i {
                    d == -1
                } else {
                    d == 0
                }
            });
            if ok {
                let mut tail = Vec::new();
                self.fill_fresh(head, &mut tail, remaining, remaining);
            }
            return;
        }
        let b = remaining.isqrt();
        for x in -b..=b {
            head[pos] = x;
            self.fill_touched(head, pos + 1, remaining - x * x);
        }
        head[pos] = 0;
    }

    fn fill_fresh(&mut self, head: &[i64], tail: &mut Vec<i64>, remaining: i64, cap: i64) {
        if self.found.len() >= self.limit {
            return;
        }
        if remaining == 0 {
            let mut v = vec![0i64; self.dim];
            v[..head.len()].copy_from_slice(head);
            v[head.len()..head.len() + tail.len()].copy_from_slice(tail);
            self.touched.push(head.len() + tail.len());
            self.stack.push(v);
            self.run();
            self.stack.pop();
            self.touched.pop();
            return;
        }
        if head.len() + tail.len() == self.dim {
            return;
        }
        let mut x = remaining.isqrt().min(cap);
        while x >= 1 {
            tail.push(x);
            self.fill_fresh(head, tail, remaining - x * x, x);
            tail.pop();
            x -= 1;
        }
    }
}

/// Rejects weights beyond the supported search range.
fn check_zn_bound(chain: &ChainWeights, n_dim: usize) -> Result<()> {
    if n_dim == 0 {
        return Err(invalid("dimension must be positive"));
    }
    if let Some(w) = chain.weights.iter().find(|&&w| w > 4 * n_dim as u64) {
        return Err(Error::SearchBound(format!("weight {w} exceeds 4·{n_dim}")));
    }
    Ok(())
}

/// First embedding of the chain into `ℤ^{n_dim}` found by exhaustive search,
/// or `None` when none exists.
pub fn embed_chain_zn(chain: &ChainWeights, n_dim: usize) -> Result<Option<Embedding>> {
    Ok(all_chain_embeddings_zn(chain, n_dim, 1)?.pop())
}

/// Embeddings up to signed permutations of untouched coordinates, at most
/// `limit` of them.
pub fn all_chain_embeddings_zn(chain: &ChainWeights, n_dim: usize, limit: usize) -> Result<Vec<Embedding>> {
    check_zn_bound(chain, n_dim)?;
    let mut search = ZnSearch {
        weights: &chain.weights,
        dim: n_dim,
        stack: Vec::new(),
        touched: Vec::new(),
        found: Vec::new(),
        limit,
    };
    search.run();
    Ok(search.found)
}

/// Largest coordinate any vector of the chain can carry in `ℤᴺ`.
pub fn coordinate_bound(chain: &ChainWeights) -> u64 {
    chain.weights.iter().map(|w| w.isqrt()).max().unwrap_or(0)
}

/// Cartan matrix of `E8` (Bourbaki labelling: node 2 hangs off node 4).
pub fn e8_gram() -> IntMatrix {
    const EDGES: [(usize, usize); 7] = [(0, 2), (1, 3), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7)];
    IntMatrix::from_fn(8, 8, |i, j| {
        if i == j {
            2
        } else if EDGES.contains(&(i.min(j), i.max(j))) {
            -1
        } else {
            0
        }
    })
}

/// Simple roots of `E8` in doubled coordinates, ordered to match [`e8_gram`].
pub fn e8_simple_roots() -> Vec<Vec<i64>> {
    let mut roots = vec![vec![1, -1, -1, -1, -1, -1, -1, 1], vec![2, 2, 0, 0, 0, 0, 0, 0]];
    for i in 0..6 {
        let mut r = vec![0; 8];
        (r[i], r[i + 1]) = (-2, 2);
        roots.push(r);
    }
    roots
}

/// All `E8` vectors of norm `norm`, in doubled coordinates: integer vectors,
/// all even or all odd, coordinate sum divisible by 4, with `Σxᵢ² = 4·norm`.
pub fn e8_vectors_of_norm(norm: u64) -> Vec<Vec<i64>> {
    let target = 4 * norm as i64;
    let b = target.isqrt();
    let mut out = Vec::new();
    let mut v = vec![0i64; 8];
    fn rec(v: &mut Vec<i64>, pos: usize, rem: i64, b: i64, out: &mut Vec<Vec<i64>>) {
        if pos == 8 {
            let parity = v[0].rem_euclid(2);
            if rem == 0 && v.iter().all(|x| x.rem_euclid(2) == parity) && v.iter().sum::<i64>().rem_euclid(4) == 0 {
                out.push(v.clone());
            }
            return;
        }
        for x in -b..=b {
            if x * x <= rem {
                v[pos] = x;
                rec(v, pos + 1, rem - x * x, b, out);
            }
        }
        v[pos] = 0;
    }
    rec(&mut v, 0, target, b, &mut out);
    out
}

/// Embedding of the chain into `E8`; an odd weight rules it out at once.
pub fn embed_chain_e8(chain: &ChainWeights) -> Option<Embedding> {
    if chain.weights.iter().any(|w| w % 2 == 1) {
        return None;
    }
    // the chain form is nondegenerate, so it needs rank at most 8
    if chain.len() > 8 {
        return None;
    }
    let mut cache: Vec<(u64, Vec<Vec<i64>>)> = Vec::new();
    for &w in &chain.weights {
        if !cache.iter().any(|(n, _)| *n == w) {
            cache.push((w, e8_vectors_of_norm(w)));
        }
    }
    let shell = |w: u64| &cache.iter().find(|(n, _)| *n == w).expect("cached").1;
    let mut stack: Vec<Vec<i64>> = Vec::new();
    let mut idx = vec![0usize; chain.len()];
    let mut i = 0usize;
    loop {
        let cands = shell(chain.weights[i]);
        // the Weyl group is transitive on roots, so one first root suffices
        let end = if i == 0 && chain.weights[0] == 2 { 1 } else { cands.len() };
        let mut placed = false;
        while idx[i] < end {
            let v = &cands[idx[i]];
            idx[i] += 1;
            let ok = stack.iter().enumerate().all(|(j, u)| {
                let d = dot(u, v);
                if j + 1 == i {
                    d == -4
                } else {
                    d == 0
                }
            });
            if ok {
                stack.push(v.clone());
                placed = true;
                break;
            }
        }
        if placed {
            if stack.len() == chain.len() {
                return Some(Embedding { vectors: stack, scale: 2 });
            }
            i += 1;
            idx[i] = 0;
        } else {
            if i == 0 {
                return None;
            }
            i -= 1;
            stack.pop();
        }
    }
}

/// Whether `p` is in the range where the chain argument applies.
fn two_bridge_precondition(p: u64) -> bool {
    p == 15 || (is_prime(p) && p % 8 == 7 && p > 7)
}

/// Smooth (and, for `p = 15`, locally-flat) Möbius-band obstruction for the
/// 2-bridge knot `K(p/(p−2))`.
pub fn two_bridge_check(p: u64) -> Result<ObstructionReport> {
    if p.is_multiple_of(2) {
        return Err(invalid(format!("p = {p} is even")));
    }
    let knot = format!("K({}/{})", p, p.saturating_sub(2));
    if !two_bridge_precondition(p) {
        return Ok(ObstructionReport::precondition_failed(
            knot,
            format!("p = {p} is neither 15 nor a prime > 7 congruent to 7 mod 8"),
        ));
    }
    let chain = neg_cf(p, p - 2)?;
    let mut report = ObstructionReport::new(knot);
    report.record("chain", chain.weights.iter().map(|&w| w as i64).collect::<Vec<_>>());

    let form = form_from_presentation(&chain.plumbing_matrix())?;
    report.record("linking_form", form.value());
    let plus = form.represents(&frac(1, p as i64));
    let minus = form.represents(&frac(-1, p as i64));
    report.record("represents_plus_inverse_p", plus);
    report.record("represents_minus_inverse_p", minus);
    // exactly one sign of a rank-one filling is compatible with the form
    let sign_forced = plus != minus;
    report.record("filling_sign_forced", sign_forced);
    let my = my_check(&form, p);
    report.record("my_route_verdict", my.verdict.name());

    let rank = chain.len() + 1;
    report.record("zn_rank", rank as u64);
    report.record("coordinate_bound", coordinate_bound(&chain));
    let zn = embed_chain_zn(&chain, rank)?;
    report.record("zn_embedding_found", zn.is_some());
    if let Some(e) = &zn {
        report.record("zn_embedding", e.vectors.concat());
    }

    let verdict = if p == 15 {
        let e8 = embed_chain_e8(&chain);
        report.record("e8_embedding_found", e8.is_some());
        let lattice_route = zn.is_none() && e8.is_none();
        report.record("lattice_route_obstructs", lattice_route);
        if lattice_route {
            Verdict::ObstructedTopological
        } else {
            my.verdict
        }
    } else if zn.is_none() && sign_forced {
        Verdict::ObstructedSmoothOnly
    } else {
        Verdict::Inconclusive
    };
    Ok(report.with_verdict(verdict))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(w: &[u64]) -> ChainWeights {
        ChainWeights::new(w.to_vec()).unwrap()
    }

    #[test]
    fn continued_fractions() {
        assert_eq!(neg_cf(3, 1).unwrap().weights(), &[3]);
        assert_eq!(neg_cf(7, 5).unwrap().weights(), &[2, 2, 3]);
        assert_eq!(neg_cf(15, 13).unwrap().weights(), &[2, 2, 2, 2, 2, 2, 3]);
        assert!(neg_cf(6, 4).is_err());
        assert!(neg_cf(3, 3).is_err());
        assert_eq!(chain(&[2, 2, 3]).evaluate(), frac(7, 5));
    }

    #[test]
    fn zn_examples() {
        let e = embed_chain_zn(&chain(&[2, 2]), 3).unwrap().unwrap();
        assert!(e.realizes(&chain(&[2, 2])));
        assert_eq!(e.vectors, vec![vec![1, 1, 0], vec![-1, 0, 1]]);
        assert_eq!(embed_chain_zn(&chain(&[3]), 2).unwrap(), None);
        assert_eq!(embed_chain_zn(&chain(&[2, 2, 2, 2, 2, 2, 3]), 8).unwrap(), None);
        assert!(matches!(embed_chain_zn(&chain(&[9]), 2), Err(Error::SearchBound(_))));
    }

    #[test]
    fn e8_model() {
        let roots = e8_simple_roots();
        let gram = IntMatrix::from_fn(8, 8, |i, j| dot(&roots[i], &roots[j]) / 4);
        assert_eq!(gram, e8_gram());
        assert_eq!(e8_vectors_of_norm(2).len(), 240);
        assert_eq!(e8_gram().determinant().unwrap(), 1.into());
    }

    #[test]
    fn e8_examples() {
        assert_eq!(embed_chain_e8(&chain(&[2, 2, 2, 2, 2, 2, 3])), None);
        assert_eq!(embed_chain_e8(&chain(&[5])), None);
        let e = embed_chain_e8(&chain(&[2, 2])).unwrap();
        assert!(e.realizes(&chain(&[2, 2])));
        let a8 = chain(&[2; 8]);
        assert!(embed_chain_e8(&a8).unwrap().realizes(&a8));
        assert_eq!(embed_chain_e8(&chain(&[2; 9])), None);
    }

    #[test]
    fn two_bridge_examples() {
        assert_eq!(two_bridge_check(23).unwrap().verdict, Verdict::ObstructedSmoothOnly);
        assert_eq!(two_bridge_check(15).unwrap().verdict, Verdict::ObstructedTopological);
        assert_eq!(two_bridge_check(7).unwrap().verdict, Verdict::PreconditionFailed);
        assert!(matches!(two_bridge_check(16), Err(Error::InvalidInput(_))));
    }
}

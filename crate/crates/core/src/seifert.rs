//! Seifert matrices `M_k` of a non-orientable-surface construction for
//! `T(2n−1, 2n)`, Alexander-one rank-2 subgroups, and genus bounds.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{invalid, Error, Result};
use crate::exact::{is_prime, IntMatrix};
use crate::linking::{form_from_presentation, my_check, torus_sigma_matrix, Sign};
use crate::report::{ObstructionReport, Verdict};

/// `(n−1) × (n−1)` matrix `M_k = M₀ + 4k·J`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeifertMatrix {
    pub n: u64,
    pub k: u64,
    pub matrix: IntMatrix,
}

pub fn build_mk(n: u64, k: u64) -> Result<SeifertMatrix> {
    if n < 3 {
        return Err(invalid(format!("n = {n} must be at least 3")));
    }
    let d = (n - 1) as usize;
    let t = 4 * k as i64;
    let matrix = IntMatrix::from_fn(d, d, |i, j| if j == i || j == i + 1 { t - 1 } else { t });
    Ok(SeifertMatrix { n, k, matrix })
}

/// Coefficients `[c₀, c₁, c₂]` of `det(tA − Aᵀ)` for a 2×2 matrix `A`.
pub fn alexander_2x2(a: &IntMatrix) -> Result<[BigInt; 3]> {
    if a.rows() != 2 || a.cols() != 2 {
        return Err(invalid("expected a 2x2 matrix"));
    }
    let (p, q, r, s) = (a.get(0, 0), a.get(0, 1), a.get(1, 0), a.get(1, 1));
    let det = p * s - q * r;
    let mid = q * q + r * r - BigInt::from(2) * p * s;
    Ok([det.clone(), mid, det])
}

/// `det(t^{1/2}A − t^{−1/2}Aᵀ) = 1`, i.e. `det(tA − Aᵀ) = t`.
pub fn alexander_one_2x2(a: &IntMatrix) -> Result<bool> {
    let [c0, c1, c2] = alexander_2x2(a)?;
    Ok(c0.is_zero() && c1.is_one() && c2.is_zero())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairCertificate {
    pub a: Vec<i64>,
    pub b: Vec<i64>,
    /// `aᵀMa, aᵀMb, bᵀMa, bᵀMb`.
    pub products: [BigInt; 4],
}

impl PairCertificate {
    /// `[[aᵀMa, aᵀMb], [bᵀMa, bᵀMb]]`.
    pub fn induced(&self) -> IntMatrix {
        let [aa, ab, ba, bb] = self.products.clone();
        let mut m = IntMatrix::zeros(2, 2);
        m.set(0, 0, aa);
        m.set(0, 1, ab);
        m.set(1, 0, ba);
        m.set(1, 1, bb);
        m
    }

    /// `aᵀMa = 0` and `{aᵀMb, bᵀMa} = {0, ±1}`.
    pub fn satisfies_pair_condition(&self) -> bool {
        let [aa, ab, ba, _] = &self.products;
        let unit = |x: &BigInt| x.abs().is_one();
        aa.is_zero() && ((ab.is_zero() && unit(ba)) || (ba.is_zero() && unit(ab)))
    }
}

/// The four products of `(a, b)` against `M`, certificate or not.
pub fn pair_products(m: &SeifertMatrix, a: &[i64], b: &[i64]) -> Result<PairCertificate> {
    let d = m.matrix.rows();
    if a.len() != d || b.len() != d {
        return Err(invalid(format!("vectors must have {d} coordinates")));
    }
    let products = [
        m.matrix.bilinear(a, a),
        m.matrix.bilinear(a, b),
        m.matrix.bilinear(b, a),
        m.matrix.bilinear(b, b),
    ];
    Ok(PairCertificate { a: a.to_vec(), b: b.to_vec(), products })
}

/// `Some` when `(a, b)` satisfies the pair condition and the induced matrix
/// has Alexander polynomial one.
pub fn verify_pair(m: &SeifertMatrix, a: &[i64], b: &[i64]) -> Result<Option<PairCertificate>> {
    let cert = pair_products(m, a, b)?;
    let ok = cert.satisfies_pair_condition() && alexander_one_2x2(&cert.induced())?;
    Ok(ok.then_some(cert))
}

/// Lexicographic odometer over `[−bound, bound]^d`.
fn next_vector(v: &mut [i64], bound: i64) -> bool {
    for x in v.iter_mut().rev() {
        if *x < bound {
            *x += 1;
            return true;
        }
        *x = -bound;
    }
    false
}

/// First certificate in lexicographic order of `a`, then `b`, with all
/// coordinates in `[−coord_bound, coord_bound]`.
pub fn find_pair(m: &SeifertMatrix, coord_bound: u64) -> Result<Option<PairCertificate>> {
    if coord_bound == 0 {
        return Err(invalid("coordinate bound must be positive"));
    }
    let d = m.matrix.rows();
    let bound = coord_bound as i64;
    let small: Vec<i64> = m
        .matrix
        .to_rows()
        .into_iter()
        .flatten()
        .map(|x| x.to_i64().ok_or_else(|| invalid("entry too large")))
        .collect::<Result<_>>()?;
    let at = |i: usize, j: usize| small[i * d + j];
    let mut a = vec![-bound; d];
    loop {
        if a.iter().any(|&x| x != 0) {
            let aa: i64 = (0..d).flat_map(|i| (0..d).map(move |j| (i, j))).map(|(i, j)| a[i] * at(i, j) * a[j]).sum();
            if aa == 0 {
                // aᵀMb = u·b and bᵀMa = w·b
                let u: Vec<i64> = (0..d).map(|j| (0..d).map(|i| a[i] * at(i, j)).sum()).collect();
                let w: Vec<i64> = (0..d).map(|i| (0..d).map(|j| at(i, j) * a[j]).sum()).collect();
                let mut b = vec![-bound; d];
                loop {
                    let ub: i64 = u.iter().zip(&b).map(|(x, y)| x * y).sum();
                    let wb: i64 = w.iter().zip(&b).map(|(x, y)| x * y).sum();
                    if (ub == 0 && wb.abs() == 1) || (wb == 0 && ub.abs() == 1) {
                        if let Some(cert) = verify_pair(m, &a, &b)? {
                            return Ok(Some(cert));
                        }
                    }
                    if !next_vector(&mut b, bound) {
                        break;
                    }
                }
            }
        }
        if !next_vector(&mut a, bound) {
            return Ok(None);
        }
    }
}

/// The certificate vectors for `M₁` at `n = 5`.
pub const REFERENCE_A: [i64; 4] = [-1, -1, 0, 1];
pub const REFERENCE_B: [i64; 4] = [4, 1, 2, -4];

#[derive(Clone, Debug, PartialEq)]
pub struct Gamma4Bounds {
    pub n: u64,
    /// Smooth non-orientable 4-genus `n − 1`.
    pub smooth: u64,
    /// Topological upper bound `n − 2`, witnessed by `certificate` on `M₁`.
    pub top_upper: u64,
    /// `2` when the linking-form test obstructs a locally-flat Möbius band.
    pub top_lower: Option<u64>,
    pub certificate: PairCertificate,
    pub lower_bound_evidence: Option<ObstructionReport>,
}

/// Bounds for `T(2n−1, 2n)`, `n ≥ 5`.
pub fn gamma4_bounds(n: u64) -> Result<Gamma4Bounds> {
    if n < 5 {
        return Err(Error::Precondition(format!("n = {n} must be at least 5")));
    }
    let base = find_pair(&build_mk(5, 1)?, 6)?
        .ok_or_else(|| Error::SearchBound("no certificate on M_1 at n = 5".into()))?;
    let pad = |v: &[i64]| {
        let mut out = v.to_vec();
        out.resize((n - 1) as usize, 0);
        out
    };
    let m = build_mk(n, 1)?;
    let certificate = verify_pair(&m, &pad(&base.a), &pad(&base.b))?
        .ok_or_else(|| Error::SearchBound("padded certificate failed".into()))?;

    let p = 2 * n - 1;
    let (top_lower, lower_bound_evidence) = if is_prime(p) && p % 8 == 5 {
        let form = form_from_presentation(&torus_sigma_matrix(n, Sign::Minus))?;
        let mut report = my_check(&form, p);
        report.knot = format!("T({},{})", p, 2 * n);
        let bound = (report.verdict == Verdict::ObstructedTopological).then_some(2);
        (bound, Some(report))
    } else {
        (None, None)
    };
    Ok(Gamma4Bounds { n, smooth: n - 1, top_upper: n - 2, top_lower, certificate, lower_bound_evidence })
}

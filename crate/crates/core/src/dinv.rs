//! Correction terms of `Σ(2, 2n, 2n+1)` from its rank-2 negative-definite
//! plumbing lattice, and the smooth Möbius-band obstruction built on them.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::ToPrimitive;

use crate::error::{invalid, Result};
use crate::exact::{frac, is_perfect_square, is_prime, min_solution_8x2, Fraction, IntMatrix};
use crate::linking::{form_from_presentation, my_check, torus_sigma_matrix, Sign};
use crate::report::{ObstructionReport, Verdict};

/// A spin^c structure on `Σ(2, 2n, 2n+1)`, i.e. a coset `η + Qℤ²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpincClass {
    pub n: u64,
    pub representative: (i64, i64),
}

/// Maximum of a class together with a vector attaining it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DValue {
    pub d: Fraction,
    pub eta: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DEntry {
    pub class: SpincClass,
    pub d: Fraction,
    pub eta: (i64, i64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DTable {
    pub n: u64,
    pub entries: Vec<DEntry>,
}

impl DTable {
    pub fn get(&self, class: &SpincClass) -> Option<&DEntry> {
        let key = class_key(self.n, class.representative);
        self.entries.iter().find(|e| class_key(self.n, e.class.representative) == key)
    }
}

/// The plumbing matrix `[[−n−1, n], [n, −n−1]]`.
pub fn plumbing_matrix(n: u64) -> IntMatrix {
    torus_sigma_matrix(n, Sign::Plus)
}

/// Negative-definite lattice with exact small-integer data, used for the
/// characteristic-covector maximization.
#[derive(Clone, Debug)]
pub struct DefiniteLattice {
    rank: usize,
    gram: Vec<i64>,
    /// `adj(Q) = det(Q)·Q⁻¹`.
    adj: Vec<i128>,
    det: i128,
    parity: Vec<i64>,
}

impl DefiniteLattice {
    pub fn new(q: &IntMatrix) -> Result<Self> {
        if !q.is_square() || q.rows() == 0 {
            return Err(invalid("lattice matrix must be square and nonempty"));
        }
        let neg = IntMatrix::from_fn(q.rows(), q.cols(), |i, j| -q.get(i, j).to_i64().unwrap_or(0));
        if !neg.is_positive_definite() {
            return Err(invalid("lattice must be negative definite"));
        }
        let rank = q.rows();
        let mut gram = Vec::with_capacity(rank * rank);
        for i in 0..rank {
            for j in 0..rank {
                gram.push(q.get(i, j).to_i64().ok_or_else(|| invalid("entry too large"))?);
            }
        }
        let inv = crate::exact::rat_inverse(q)?;
        let det = q.determinant()?.to_i128().ok_or_else(|| invalid("determinant too large"))?;
        let mut adj = Vec::with_capacity(rank * rank);
        for i in 0..rank {
            for j in 0..rank {
                let v = inv.get(i, j) * Fraction::from_integer(det.into());
                adj.push(v.to_integer().to_i128().expect("adjugate entry"));
            }
        }
        let parity = (0..rank).map(|i| gram[i * rank + i].rem_euclid(2)).collect();
        Ok(DefiniteLattice { rank, gram, adj, det, parity })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn det(&self) -> i128 {
        self.det
    }

    /// `adj(Q)·η mod |det Q|`; equal keys iff the vectors differ by `Qℤʳ`.
    pub fn class_key(&self, eta: &[i64]) -> Vec<i64> {
        let m = self.det.abs();
        (0..self.rank)
            .map(|i| {
                let s: i128 = (0..self.rank).map(|j| self.adj[i * self.rank + j] * eta[j] as i128).sum();
                s.rem_euclid(m) as i64
            })
            .collect()
    }

    /// `(ξᵀQ⁻¹ξ + rank)/4` for the characteristic covector `ξ = 2η + parity`.
    pub fn value(&self, eta: &[i64]) -> Fraction {
        let xi: Vec<i128> = eta.iter().zip(&self.parity).map(|(&e, &c)| 2 * e as i128 + c as i128).collect();
        let mut num = 0i128;
        for i in 0..self.rank {
            for j in 0..self.rank {
                num += xi[i] * self.adj[i * self.rank + j] * xi[j];
            }
        }
        // (num/det + rank)/4
        let num = num + self.rank as i128 * self.det;
        Fraction::new(num.into(), (4 * self.det).into())
    }

    /// Maximum of [`Self::value`] over the class of `eta0`, searched over
    /// `|ηᵢ| ≤ radius`.
    pub fn max_in_class(&self, eta0: &[i64], radius: i64) -> DValue {
        let key = self.class_key(eta0);
        let mut best: Option<DValue> = None;
        let mut eta = vec![-radius; self.rank];
        loop {
            if self.class_key(&eta) == key {
                let v = self.value(&eta);
                if best.as_ref().is_none_or(|b| v > b.d) {
                    best = Some(DValue { d: v, eta: eta.clone() });
                }
            }
            let mut i = 0;
            while i < self.rank {
                if eta[i] < radius {
                    eta[i] += 1;
                    break;
                }
                eta[i] = -radius;
                i += 1;
            }
            if i == self.rank {
                break;
            }
        }
        best.expect("every class meets a box wider than |det|")
    }

    /// `Q ⊕ ⟨−1⟩`.
    pub fn blow_up(&self) -> DefiniteLattice {
        let r = self.rank + 1;
        let mut gram = vec![0i64; r * r];
        for i in 0..self.rank {
            for j in 0..self.rank {
                gram[i * r + j] = self.gram[i * self.rank + j];
            }
        }
        gram[r * r - 1] = -1;
        let mut adj = vec![0i128; r * r];
        for i in 0..self.rank {
            for j in 0..self.rank {
                adj[i * r + j] = -self.adj[i * self.rank + j];
            }
        }
        adj[r * r - 1] = self.det;
        let mut parity = self.parity.clone();
        parity.push(1);
        DefiniteLattice { rank: r, gram, adj, det: -self.det, parity }
    }
}

/// Default search radius `2(2n+1)`.
pub fn default_radius(n: u64) -> i64 {
    2 * (2 * n as i64 + 1)
}

pub fn class_key(n: u64, eta: (i64, i64)) -> (i64, i64) {
    let p = 2 * n as i64 + 1;
    let (n, (a, b)) = (n as i64, eta);
    ((-(n + 1) * a - n * b).rem_euclid(p), (-n * a - (n + 1) * b).rem_euclid(p))
}

/// The `2n+1` classes, represented by `(j, −j)` for `−n ≤ j ≤ n`.
pub fn spinc_classes(n: u64) -> Result<Vec<SpincClass>> {
    if n == 0 {
        return Err(invalid("n must be positive"));
    }
    let n_i = n as i64;
    Ok((-n_i..=n_i).map(|j| SpincClass { n, representative: (j, -j) }).collect())
}

/// Canonical class of an arbitrary `η`.
pub fn class_of(n: u64, eta: (i64, i64)) -> SpincClass {
    let p = 2 * n as i64 + 1;
    // key of (j, −j) is (−j, j)
    let mut j = (-class_key(n, eta).0).rem_euclid(p);
    if j > n as i64 {
        j -= p;
    }
    SpincClass { n, representative: (j, -j) }
}

pub fn d_of_class(n: u64, cls: &SpincClass) -> Result<DEntry> {
    d_of_class_within(n, cls, default_radius(n))
}

pub fn d_of_class_within(n: u64, cls: &SpincClass, radius: i64) -> Result<DEntry> {
    if n == 0 || cls.n != n {
        return Err(invalid("class does not belong to this n"));
    }
    let lattice = DefiniteLattice::new(&plumbing_matrix(n))?;
    let (a, b) = cls.representative;
    let best = lattice.max_in_class(&[a, b], radius);
    Ok(DEntry { class: class_of(n, (a, b)), d: best.d, eta: (best.eta[0], best.eta[1]) })
}

pub fn d_table(n: u64) -> Result<DTable> {
    let lattice = DefiniteLattice::new(&plumbing_matrix(n))?;
    let radius = default_radius(n);
    let entries = spinc_classes(n)?
        .into_iter()
        .map(|class| {
            let (a, b) = class.representative;
            let best = lattice.max_in_class(&[a, b], radius);
            DEntry { class, d: best.d, eta: (best.eta[0], best.eta[1]) }
        })
        .collect();
    Ok(DTable { n, entries })
}

/// `1/2 − 2x²/(2n+1)`, the value at `η = (x, −x)`.
pub fn antidiagonal_value(n: u64, x: i64) -> Fraction {
    frac(1, 2) - frac(2 * x * x, 2 * n as i64 + 1)
}

/// Smooth Möbius-band obstruction for `T(2n, 2n+1)`.
pub fn smooth_mobius_obstruction(n: u64) -> ObstructionReport {
    let knot = format!("T({},{})", 2 * n, 2 * n + 1);
    if n < 2 {
        return ObstructionReport::precondition_failed(knot, "n must be at least 2");
    }
    if n % 4 != 3 {
        return ObstructionReport::precondition_failed(knot, format!("n = {n} is not 3 mod 4"));
    }
    let p = 2 * n + 1;
    if !is_prime(p) {
        return ObstructionReport::precondition_failed(knot, format!("2n+1 = {p} is not prime"));
    }
    let mut report = ObstructionReport::new(knot);
    report.record("n", n);
    report.record("p", p);
    report.record("n_plus_1_square", is_perfect_square(n + 1));

    // the Murakami-Yasuhara test does not obstruct here, so the result is smooth-only
    let q = plumbing_matrix(n);
    let form = form_from_presentation(&q).expect("cyclic of prime order");
    report.record("linking_form", form.value());
    let topological = my_check(&form, p);
    report.record("topological_verdict", topological.verdict.name());

    // positive-definite fillings need ⟨(n+1)/p⟩ to represent −1/p
    let pd_excluded = !form.represents(&frac(-1, p as i64));
    report.record("positive_definite_excluded", pd_excluded);

    let bound = frac(n as i64, 4 * n as i64 + 2);
    report.record("bound", bound.clone());
    let Some(x) = min_solution_8x2(p) else {
        report.record("x", "none");
        return report.with_verdict(Verdict::Inconclusive);
    };
    let x = x as i64;
    report.record("x", x);
    let d_gen = antidiagonal_value(n, x);
    let d_conj = antidiagonal_value(n, -x);
    report.record("d_generator", d_gen.clone());
    report.record("conjugates_agree", d_gen == d_conj);
    let strict = d_gen < bound;
    report.record("d_generator_below_bound", strict);

    let table = d_table(n).expect("valid n");
    let gen = table.get(&class_of(n, (x, -x))).expect("class present");
    report.record("d_generator_class_max", gen.d.clone());
    report.record("d_generator_class_eta", vec![gen.eta.0, gen.eta.1]);
    // any class satisfying both the inequality and the mod 2 congruence
    let two = Fraction::from_integer(2.into());
    let admissible: Vec<i64> = table
        .entries
        .iter()
        .filter(|e| {
            let diff = &e.d - &bound;
            diff >= Fraction::from_integer(0.into()) && (&diff / &two).is_integer()
        })
        .map(|e| e.class.representative.0)
        .collect();
    report.record("admissible_classes", admissible.clone());

    let obstructed = strict && d_gen == d_conj && admissible.is_empty() && pd_excluded;
    report.with_verdict(if obstructed { Verdict::ObstructedSmoothOnly } else { Verdict::Inconclusive })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Fact;

    #[test]
    fn class_counts() {
        for n in [1u64, 3, 11] {
            let classes = spinc_classes(n).unwrap();
            assert_eq!(classes.len() as u64, 2 * n + 1);
            let keys: alloc::collections::BTreeSet<_> =
                classes.iter().map(|c| class_key(n, c.representative)).collect();
            assert_eq!(keys.len(), classes.len());
        }
    }

    #[test]
    fn small_table() {
        let t = d_table(3).unwrap();
        let d = |j: i64| t.get(&SpincClass { n: 3, representative: (j, -j) }).unwrap().d.clone();
        assert_eq!(d(0), frac(1, 2));
        assert_eq!(d(1), frac(3, 14));
        assert_eq!(d(2), frac(-9, 14));
        assert_eq!(d(3), frac(-1, 14));
        assert_eq!(d(-2), d(2));
    }

    #[test]
    fn table_for_eleven() {
        let t = d_table(11).unwrap();
        let want = [23, 19, 7, -13, -41, -77, -121, -81, -49, -25, -9, -1];
        for (j, w) in want.iter().enumerate() {
            let j = j as i64;
            for s in [j, -j] {
                let e = t.get(&SpincClass { n: 11, representative: (s, -s) }).unwrap();
                assert_eq!(e.d, frac(*w, 46), "j = {s}");
            }
        }
        let e = d_of_class(11, &SpincClass { n: 11, representative: (7, -7) }).unwrap();
        assert_eq!(class_of(11, e.eta), class_of(11, (7, -7)));
    }

    #[test]
    fn antidiagonal_values() {
        assert_eq!(antidiagonal_value(11, 7), frac(-173, 46));
        assert_eq!(antidiagonal_value(3, 1), frac(3, 14));
    }

    #[test]
    fn blow_up_keeps_values() {
        let base = DefiniteLattice::new(&plumbing_matrix(3)).unwrap();
        let up = base.blow_up();
        for j in -3i64..=3 {
            let a = base.max_in_class(&[j, -j], 14);
            let b = up.max_in_class(&[j, -j, 0], 14);
            assert_eq!(a.d, b.d);
        }
    }

    #[test]
    fn smooth_obstruction_examples() {
        let r = smooth_mobius_obstruction(11);
        assert_eq!(r.verdict, Verdict::ObstructedSmoothOnly);
        assert_eq!(r.fact("d_generator"), Some(&Fact::Rational(frac(-173, 46))));
        assert_eq!(r.fact("bound"), Some(&Fact::Rational(frac(11, 46))));
        let r = smooth_mobius_obstruction(3);
        assert_eq!(r.verdict, Verdict::Inconclusive);
        assert_eq!(r.fact("d_generator"), Some(&Fact::Rational(frac(3, 14))));
        assert_eq!(r.fact("bound"), Some(&Fact::Rational(frac(3, 14))));
        assert_eq!(smooth_mobius_obstruction(5).verdict, Verdict::PreconditionFailed);
        // 2·7+1 = 15 is not prime
        assert_eq!(smooth_mobius_obstruction(7).verdict, Verdict::PreconditionFailed);
    }
}

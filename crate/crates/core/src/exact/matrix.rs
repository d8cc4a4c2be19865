use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{invalid, Error, Result};

/// Exact rational number; always stored reduced with a positive denominator.
pub type Fraction = BigRational;

/// Shorthand for the reduced fraction `num/den`.
///
/// # Panics
/// When `den == 0`.
pub fn frac(num: i64, den: i64) -> Fraction {
    Fraction::new(BigInt::from(num), BigInt::from(den))
}

/// Representative of `x` modulo 1 in `[0, 1)`.
pub fn mod_one(x: &Fraction) -> Fraction {
    let (num, den) = (x.numer(), x.denom());
    Fraction::new(num.mod_floor(den), den.clone())
}

/// Dense integer matrix, row-major, arbitrary-precision entries.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from `i64` rows; all rows must share one length.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(invalid("ragged matrix rows"));
            }
            data.extend(r.iter().map(|&x| BigInt::from(x)));
        }
        Ok(IntMatrix { rows: rows.len(), cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> i64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(BigInt::from(f(i, j)));
            }
        }
        IntMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: impl Into<BigInt>) {
        self.data[i * self.cols + j] = v.into();
    }

    pub(crate) fn get_mut(&mut self, i: usize, j: usize) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(invalid("matrix dimensions do not agree"));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    *out.get_mut(i, j) += a * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    /// `xᵀ · self · y` for integer vectors.
    pub fn bilinear(&self, x: &[i64], y: &[i64]) -> BigInt {
        assert_eq!(x.len(), self.rows);
        assert_eq!(y.len(), self.cols);
        let mut acc = BigInt::zero();
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            let mut row = BigInt::zero();
            for (j, &yj) in y.iter().enumerate() {
                if yj != 0 {
                    row += self.get(i, j) * yj;
                }
            }
            acc += row * xi;
        }
        acc
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(invalid("determinant of a non-square matrix"));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a.get(i, k).is_zero()) else {
                    return Ok(BigInt::zero());
                };
                a.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                    a.set(i, j, v);
                }
            }
            prev = a.get(k, k).clone();
        }
        Ok(sign * a.get(n - 1, n - 1))
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += factor * row[src]
    pub(crate) fn add_row(&mut self, dst: usize, src: usize, factor: &BigInt) {
        for j in 0..self.cols {
            let v = self.get(src, j) * factor;
            *self.get_mut(dst, j) += v;
        }
    }

    /// col[dst] += factor * col[src]
    pub(crate) fn add_col(&mut self, dst: usize, src: usize, factor: &BigInt) {
        for i in 0..self.rows {
            let v = self.get(i, src) * factor;
            *self.get_mut(i, dst) += v;
        }
    }

    pub(crate) fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -self.get(r, j);
            self.set(r, j, v);
        }
    }

    /// Symmetric and positive definite, by Sylvester's criterion on leading minors.
    pub fn is_positive_definite(&self) -> bool {
        if !self.is_square() || *self != self.transpose() {
            return false;
        }
        (1..=self.rows)
            .all(|k| self.leading_minor(k).determinant().is_ok_and(|d| d.is_positive()))
    }

    fn leading_minor(&self, k: usize) -> IntMatrix {
        let mut minor = Self::zeros(k, k);
        for i in 0..k {
            for j in 0..k {
                minor.set(i, j, self.get(i, j).clone());
            }
        }
        minor
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

/// Dense matrix of exact rationals.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Fraction>,
}

impl From<&IntMatrix> for RatMatrix {
    fn from(m: &IntMatrix) -> Self {
        RatMatrix {
            rows: m.rows,
            cols: m.cols,
            data: m.data.iter().map(|x| Fraction::from_integer(x.clone())).collect(),
        }
    }
}

impl RatMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Fraction {
        &self.data[i * self.cols + j]
    }

    pub fn neg(&self) -> RatMatrix {
        RatMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| -x).collect() }
    }

    pub fn mul(&self, other: &RatMatrix) -> Result<RatMatrix> {
        if self.cols != other.rows {
            return Err(invalid("matrix dimensions do not agree"));
        }
        let mut data = vec![Fraction::zero(); self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        Ok(RatMatrix { rows: self.rows, cols: other.cols, data })
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let v = self.get(i, j);
                    if i == j {
                        v.is_one()
                    } else {
                        v.is_zero()
                    }
                })
            })
    }

    /// Least common multiple of the denominators in column `j`.
    pub fn column_denominator(&self, j: usize) -> BigInt {
        (0..self.rows).fold(BigInt::one(), |acc, i| acc.lcm(self.get(i, j).denom()))
    }

    /// Gauss–Jordan inverse over ℚ.
    pub fn inverse(&self) -> Result<RatMatrix> {
        if self.rows != self.cols {
            return Err(invalid("inverse of a non-square matrix"));
        }
        let n = self.rows;
        let mut a = self.data.clone();
        let mut inv = vec![Fraction::zero(); n * n];
        for i in 0..n {
            inv[i * n + i] = Fraction::one();
        }
        for c in 0..n {
            let p = (c..n).find(|&r| !a[r * n + c].is_zero()).ok_or(Error::SingularMatrix)?;
            if p != c {
                for j in 0..n {
                    a.swap(p * n + j, c * n + j);
                    inv.swap(p * n + j, c * n + j);
                }
            }
            let pivot = a[c * n + c].clone();
            for j in 0..n {
                a[c * n + j] /= &pivot;
                inv[c * n + j] /= &pivot;
            }
            for r in 0..n {
                if r == c || a[r * n + c].is_zero() {
                    continue;
                }
                let f = a[r * n + c].clone();
                for j in 0..n {
                    let (da, di) = (&a[c * n + j] * &f, &inv[c * n + j] * &f);
                    a[r * n + j] -= da;
                    inv[r * n + j] -= di;
                }
            }
        }
        Ok(RatMatrix { rows: n, cols: n, data: inv })
    }
}

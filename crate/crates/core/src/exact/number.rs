use alloc::collections::BTreeSet;

use num_integer::Integer;

use crate::error::{invalid, Result};

/// Jacobi symbol `(a/m)` for odd positive `m`, via quadratic reciprocity.
pub fn jacobi_symbol(a: i64, m: u64) -> Result<i8> {
    if m == 0 || m.is_even() {
        return Err(invalid("Jacobi symbol needs an odd positive modulus"));
    }
    let mut n = m;
    let mut a = a.rem_euclid(m as i64) as u64;
    let mut result = 1i8;
    while a != 0 {
        while a.is_even() {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                result = -result;
            }
        }
        core::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    Ok(if n == 1 { result } else { 0 })
}

/// `{x² mod m : x ∈ ℤ/m}`.
pub fn square_classes_mod(m: u64) -> BTreeSet<u64> {
    assert!(m >= 1, "modulus must be positive");
    (0..m).map(|x| mul_mod(x, x, m)).collect()
}

/// Smallest positive `x` with `8x² ≡ 1 (mod p)`.
pub fn min_solution_8x2(p: u64) -> Option<u64> {
    if p < 2 {
        return None;
    }
    (1..p).find(|&x| mul_mod(8 % p, mul_mod(x, x, p), p) == 1 % p)
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inverse(a: i64, m: i64) -> Option<i64> {
    let e = a.rem_euclid(m).extended_gcd(&m);
    (e.gcd == 1).then(|| e.x.rem_euclid(m))
}

const TRIAL_LIMIT: u64 = 1_000_000;

/// Trial division up to 10⁶, deterministic Miller–Rabin beyond.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = 41;
    while d <= TRIAL_LIMIT && d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    if d * d > n {
        return true;
    }
    miller_rabin(n)
}

fn miller_rabin(n: u64) -> bool {
    let (mut d, mut s) = (n - 1, 0);
    while d.is_even() {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn is_square_free(n: u64) -> bool {
    if n == 0 {
        return false;
    }
    let mut n = n;
    let mut d = 2u64;
    while d <= n / d {
        if n.is_multiple_of(d) {
            n /= d;
            if n.is_multiple_of(d) {
                return false;
            }
        }
        d += 1;
    }
    true
}

pub fn is_perfect_square(n: u64) -> bool {
    let r = n.isqrt();
    r * r == n
}

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Signed;
use peg_core::exact::{frac, is_prime, mod_one, rat_inverse, square_classes_mod, Fraction};
use peg_core::linking::{my_check, represented_squares, tridiagonal_matrix, LinkingForm, Sign};
use proptest::prelude::*;

fn odd_primes(limit: u64) -> Vec<u64> {
    (3..limit).filter(|&p| is_prime(p)).collect()
}

#[test]
fn squares_are_scaled_square_classes() {
    for p in odd_primes(500) {
        for q in [1, 2, p as i64 - 1, (p as i64 + 1) / 2] {
            let form = LinkingForm::new(p, q).unwrap();
            let want: BTreeSet<Fraction> =
                square_classes_mod(p).iter().map(|&s| mod_one(&frac(q * s as i64, p as i64))).collect();
            let got = represented_squares(&form);
            assert_eq!(got, want, "<{q}/{p}>");
            assert_eq!(got.len() as u64, p.div_ceil(2), "<{q}/{p}>");
        }
    }
}

#[test]
fn tridiagonal_determinants() {
    for p in odd_primes(50) {
        for k in 1..=10 {
            for sign in [Sign::Plus, Sign::Minus] {
                let t = tridiagonal_matrix(p, k, sign).unwrap();
                let want = 2 * k as i64 * p as i64 + sign.value();
                assert_eq!(t.determinant.abs(), BigInt::from(want), "p = {p}, k = {k}");
                assert_eq!(t.to_matrix().determinant().unwrap(), t.determinant, "p = {p}, k = {k}");
            }
        }
    }
}

#[test]
fn first_entry_identity() {
    for p in odd_primes(50) {
        for k in 1..=10 {
            for sign in [Sign::Plus, Sign::Minus] {
                let t = tridiagonal_matrix(p, k, sign).unwrap();
                let d = 2 * k as i64 * p as i64 + sign.value();
                let dense = mod_one(&-rat_inverse(&t.to_matrix()).unwrap().get(0, 0).clone());
                assert_eq!(mod_one(&t.first_entry()), dense, "p = {p}, k = {k}");
                let expected = mod_one(&frac(d - sign.value() * p as i64, d));
                assert!(dense == expected || dense == mod_one(&-expected.clone()), "p = {p}, k = {k}: {dense}");
            }
        }
    }
}

proptest! {
    #[test]
    fn verdict_ignores_orientation(p in 2u64..400, q in 1i64..400) {
        let Ok(form) = LinkingForm::new(p, q) else { return Ok(()) };
        prop_assert_eq!(my_check(&form, p).verdict, my_check(&form.negated(), p).verdict);
        prop_assert_eq!(form.negated().coeff(), LinkingForm::new(p, -q).unwrap().coeff());
    }
}

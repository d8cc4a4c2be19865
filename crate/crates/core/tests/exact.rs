use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use peg_core::exact::{
    is_prime, jacobi_symbol, rat_inverse, smith_normal_form, square_classes_mod, IntMatrix, RatMatrix,
};
use proptest::prelude::*;

fn matrix(max_dim: usize, entry: i64) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(move |(r, c)| {
        prop::collection::vec(prop::collection::vec(-entry..=entry, c), r)
    })
}

fn square(max_dim: usize, entry: i64) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max_dim).prop_flat_map(move |n| prop::collection::vec(prop::collection::vec(-entry..=entry, n), n))
}

fn diag(rows: usize, cols: usize, d: &[BigInt]) -> IntMatrix {
    let mut m = IntMatrix::zeros(rows, cols);
    for (i, x) in d.iter().enumerate() {
        m.set(i, i, x.clone());
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn snf_reconstructs(rows in matrix(6, 20)) {
        let m = IntMatrix::from_rows(&rows).unwrap();
        let snf = smith_normal_form(&m, true);
        let d = &snf.diagonal;
        prop_assert_eq!(d.len(), m.rows().min(m.cols()));
        prop_assert!(d.iter().all(|x| !x.is_negative()));
        for w in d.windows(2) {
            if w[1].is_zero() {
                continue;
            }
            prop_assert!(!w[0].is_zero(), "zero before nonzero in {:?}", d);
            prop_assert!((&w[1] % &w[0]).is_zero(), "{:?} breaks the divisibility chain", d);
        }
        let (u, v) = snf.transforms.unwrap();
        prop_assert_eq!(u.mul(&m).unwrap().mul(&v).unwrap(), diag(m.rows(), m.cols(), d));
        prop_assert!(u.determinant().unwrap().abs().is_one());
        prop_assert!(v.determinant().unwrap().abs().is_one());
    }

    #[test]
    fn inverse_is_two_sided(rows in square(5, 9)) {
        let m = IntMatrix::from_rows(&rows).unwrap();
        prop_assume!(!m.determinant().unwrap().is_zero());
        let inv = rat_inverse(&m).unwrap();
        let r = RatMatrix::from(&m);
        prop_assert!(inv.mul(&r).unwrap().is_identity());
        prop_assert!(r.mul(&inv).unwrap().is_identity());
    }

    #[test]
    fn jacobi_multiplicative(a in -500i64..500, b in -500i64..500, m in (0u64..250).prop_map(|x| 2 * x + 1), n in (0u64..250).prop_map(|x| 2 * x + 1)) {
        let j = |a: i64, m: u64| jacobi_symbol(a, m).unwrap();
        prop_assert_eq!(j(a * b, m), j(a, m) * j(b, m));
        prop_assert_eq!(j(a, m * n), j(a, m) * j(a, n));
    }
}

#[test]
fn jacobi_matches_square_classes() {
    for p in (3..500).filter(|&p| is_prime(p)) {
        let squares = square_classes_mod(p);
        for a in 1..p {
            let want = if squares.contains(&a) { 1 } else { -1 };
            assert_eq!(jacobi_symbol(a as i64, p).unwrap(), want, "({a}/{p})");
        }
    }
}

#[test]
fn jacobi_rejects_even_modulus() {
    assert!(jacobi_symbol(3, 8).is_err());
    assert!(jacobi_symbol(3, 0).is_err());
}

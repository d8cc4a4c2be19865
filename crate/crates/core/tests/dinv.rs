use num_traits::Zero;
use peg_core::dinv::{
    class_of, d_of_class, d_of_class_within, d_table, default_radius, plumbing_matrix, spinc_classes,
    DefiniteLattice,
};
use peg_core::exact::frac;
use proptest::prelude::*;

#[test]
fn class_count_is_determinant() {
    for n in 1..=15u64 {
        let classes = spinc_classes(n).unwrap();
        assert_eq!(classes.len() as u64, 2 * n + 1);
        let lat = DefiniteLattice::new(&plumbing_matrix(n)).unwrap();
        assert_eq!(lat.det().unsigned_abs() as u64, 2 * n + 1);
    }
}

#[test]
fn doubling_the_box_changes_nothing() {
    for n in 1..=15u64 {
        for cls in spinc_classes(n).unwrap() {
            let base = d_of_class(n, &cls).unwrap();
            let wide = d_of_class_within(n, &cls, 2 * default_radius(n)).unwrap();
            assert_eq!(base.d, wide.d, "n = {n}, class {:?}", cls.representative);
        }
    }
}

#[test]
fn positive_values_sit_on_the_antidiagonal() {
    for n in (1..=15u64).filter(|n| n % 2 == 1) {
        let zero = class_of(n, (0, 0));
        for e in d_table(n).unwrap().entries {
            if e.class == zero {
                assert_eq!(e.d, frac(1, 2), "n = {n}");
            }
            if e.d >= frac(0, 1) {
                assert_eq!(e.eta.0 + e.eta.1, 0, "n = {n}, class {:?}: {} at {:?}", e.class.representative, e.d, e.eta);
            }
        }
    }
}

#[test]
fn values_at_most_one_half() {
    for n in 1..=15u64 {
        for e in d_table(n).unwrap().entries {
            assert!(e.d <= frac(1, 2), "n = {n}: {}", e.d);
        }
    }
}

#[test]
fn blow_up_keeps_every_value() {
    for n in 1..=7u64 {
        let lat = DefiniteLattice::new(&plumbing_matrix(n)).unwrap();
        let big = lat.blow_up();
        let r = default_radius(n);
        for cls in spinc_classes(n).unwrap() {
            let (a, b) = cls.representative;
            let here = lat.max_in_class(&[a, b], r).d;
            let there = big.max_in_class(&[a, b, 0], r).d;
            assert_eq!(here, there, "n = {n}, class {:?}", cls.representative);
        }
    }
}

proptest! {
    #[test]
    fn off_antidiagonal_is_negative(n in (0u64..8).prop_map(|x| 2 * x + 1), a in -40i64..40, b in -40i64..40) {
        prop_assume!(a + b != 0);
        let lat = DefiniteLattice::new(&plumbing_matrix(n)).unwrap();
        let v = lat.value(&[a, b]);
        prop_assert!(v < frac(0, 1), "n = {}, eta = ({}, {}): {}", n, a, b, v);
        prop_assert!(!v.is_zero());
    }
}

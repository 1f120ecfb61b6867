mod common;

use common::{dense_string, dense_sum, max_abs};
use floquet_kick::pauli::nested_commutator;
use floquet_kick::{commutator, PauliString, PauliSum};
use num_complex::Complex64;
use proptest::prelude::*;

const N: usize = 3;

fn string() -> impl Strategy<Value = PauliString> {
    (0u64..8, 0u64..8, 0u8..4).prop_map(|(x, z, ph)| PauliString::new(N, x, z, ph).unwrap())
}

fn sum(max_terms: usize) -> impl Strategy<Value = PauliSum> {
    prop::collection::vec((0u64..8, 0u64..8, -1.0f64..1.0, -1.0f64..1.0), 1..max_terms).prop_map(|terms| {
        let mut s = PauliSum::zero(N);
        for (x, z, re, im) in terms {
            s.add_term(PauliString::new(N, x, z, 0).unwrap(), Complex64::new(re, im));
        }
        s
    })
}

fn hermitian(max_terms: usize) -> impl Strategy<Value = PauliSum> {
    sum(max_terms).prop_map(|s| {
        let mut h = PauliSum::zero(N);
        for (p, c) in s.iter() {
            h.add_term(p, Complex64::new(c.re, 0.0));
        }
        h
    })
}

proptest! {
    #[test]
    fn string_product_matches_dense(a in string(), b in string()) {
        let prod = a.mul(&b).unwrap();
        let diff = dense_string(&prod) - dense_string(&a) * dense_string(&b);
        prop_assert!(max_abs(&diff) < 1e-14);
    }

    #[test]
    fn commutation_flag_matches_dense(a in string(), b in string()) {
        let (da, db) = (dense_string(&a), dense_string(&b));
        let comm = max_abs(&(&da * &db - &db * &da));
        prop_assert_eq!(a.commutes_with(&b), comm < 1e-12);
    }

    #[test]
    fn sum_product_matches_dense(a in sum(6), b in sum(6)) {
        let diff = dense_sum(&a.mul(&b).unwrap()) - dense_sum(&a) * dense_sum(&b);
        prop_assert!(max_abs(&diff) < 1e-12);
    }

    #[test]
    fn jacobi_identity(a in sum(5), b in sum(5), c in sum(5)) {
        let t1 = commutator(&a, &commutator(&b, &c).unwrap()).unwrap();
        let t2 = commutator(&b, &commutator(&c, &a).unwrap()).unwrap();
        let t3 = commutator(&c, &commutator(&a, &b).unwrap()).unwrap();
        let total = t1.add(&t2).unwrap().add(&t3).unwrap();
        prop_assert!(total.norm_bound() < 1e-12);
    }

    #[test]
    fn commutator_of_hermitians_is_antihermitian(a in hermitian(6), b in hermitian(6)) {
        let c = commutator(&a, &b).unwrap();
        let anti = c.add(&c.dagger()).unwrap();
        prop_assert!(anti.norm_bound() < 1e-12);
    }

    #[test]
    fn commutator_matches_dense(a in sum(5), b in sum(5)) {
        let (da, db) = (dense_sum(&a), dense_sum(&b));
        let diff = dense_sum(&commutator(&a, &b).unwrap()) - (&da * &db - &db * &da);
        prop_assert!(max_abs(&diff) < 1e-12);
    }

    #[test]
    fn nested_commutator_is_iterated(a in sum(4), b in sum(4)) {
        let twice = commutator(&a, &commutator(&a, &b).unwrap()).unwrap();
        let nested = nested_commutator(&a, &b, 2).unwrap();
        prop_assert!(twice.max_abs_diff(&nested).unwrap() < 1e-12);
    }

    #[test]
    fn text_round_trip(a in sum(6)) {
        let back = PauliSum::from_text(&a.to_text(), Some(N)).unwrap();
        prop_assert!(back.max_abs_diff(&a).unwrap() < 1e-12);
    }

    #[test]
    fn normalized_trace_matches_dense(a in sum(6), b in sum(6)) {
        let dense = (dense_sum(&a) * dense_sum(&b)).trace() / (1 << N) as f64;
        let got = a.normalized_trace_product(&b).unwrap();
        prop_assert!((dense - got).norm() < 1e-12);
    }
}

#[test]
fn norm_bound_dominates_spectral_norm() {
    let s = PauliSum::from_words(&[
        (Complex64::new(0.7, 0.0), "XZI"),
        (Complex64::new(-0.4, 0.0), "ZZY"),
        (Complex64::new(0.2, 0.0), "IIX"),
    ])
    .unwrap();
    let eig = dense_sum(&s).symmetric_eigen();
    let spec = eig.eigenvalues.iter().fold(0.0f64, |m, e| m.max(e.abs()));
    assert!(spec <= s.norm_bound() + 1e-12);
}

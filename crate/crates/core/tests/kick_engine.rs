mod common;

use std::collections::BTreeMap;

use common::{dense_propagator, dense_sum, expm_herm, M};
use floquet_kick::kick::kick_at_order;
use floquet_kick::*;
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Two qubits, two harmonics with complex amplitudes, non-commuting `H₀`.
fn generic_model(omega: f64) -> FloquetHamiltonian {
    let h0 = PauliSum::from_words(&[(c(1.0, 0.0), "ZZ"), (c(0.6, 0.0), "XI"), (c(0.3, 0.0), "IY")]).unwrap();
    let mut hm = BTreeMap::new();
    hm.insert(1, PauliSum::from_words(&[(c(0.7, 0.2), "XI"), (c(0.0, 0.5), "ZY"), (c(0.4, 0.0), "IZ")]).unwrap());
    hm.insert(2, PauliSum::from_words(&[(c(0.5, -0.3), "YX"), (c(0.3, 0.0), "ZI")]).unwrap());
    build_custom(h0, hm, omega).unwrap()
}

fn dense_qhiffs(h: &FloquetHamiltonian, t: f64, order: usize) -> M {
    let exp = expand(h, order).unwrap();
    let w = h.omega();
    let k0 = dense_sum(&kick_at_order(&exp, 0.0, w, order));
    let k1 = dense_sum(&kick_at_order(&exp, t, w, order));
    let heff = dense_sum(&heff_truncated(&exp, w, order));
    expm_herm(&k1, 1.0) * expm_herm(&heff, t) * expm_herm(&k0, -1.0)
}

fn infidelity(a: &M, b: &M) -> f64 {
    let d = a.nrows() as f64;
    1.0 - (a.adjoint() * b).trace().norm_sqr() / (d * d)
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    sxy / lx.iter().map(|x| (x - mx).powi(2)).sum::<f64>()
}

/// Truncating after order k leaves an error of order ω^{-(k+1)} in the
/// propagator, i.e. ω^{-2(k+1)} in the infidelity.
#[test]
fn truncation_error_scales_with_order() {
    // order 2 at ω = 160 would sit near the reference integrator's floor
    for (order, want, omegas) in [(1usize, -4.0, [40.0, 80.0, 160.0]), (2, -6.0, [20.0, 40.0, 80.0])] {
        let mut eps = Vec::new();
        for &w in &omegas {
            let h = generic_model(w);
            let period = h.period();
            let t = (3.0 / period).round() * period + 0.3 * period;
            let exact = dense_propagator(&h, 0.0, t, (t / period * 1000.0) as usize);
            eps.push(infidelity(&exact, &dense_qhiffs(&h, t, order)));
        }
        let s = slope(&omegas, &eps);
        assert!((s - want).abs() < 0.4, "order {order}: slope {s:.3} from {eps:?}");
    }
}

#[test]
fn bnnni_second_order_terms() {
    let spec = LatticeSpec::chain(6, true).unwrap();
    let (j, kappa, h) = (1.1, 0.35, 0.9);
    let ham = build_bnnni(&spec, &BnnniParams::new(j, kappa, h, 20.0).unwrap()).unwrap();
    let exp = expand(&ham, 2).unwrap();
    assert!(exp.heff[1].is_empty());
    // −½[V,[V,c ZZ]] summed with its conjugate gives −2h²c (ZZ − YY) per bond
    let mut want = PauliSum::zero(6);
    let bonds = [(neighbor_pairs(&spec, 1).unwrap(), -j), (neighbor_pairs(&spec, 2).unwrap(), j * kappa)];
    for (pairs, coupling) in &bonds {
        for &(a, b) in pairs {
            let mut zz = vec!['I'; 6];
            zz[a] = 'Z';
            zz[b] = 'Z';
            let mut yy = vec!['I'; 6];
            yy[a] = 'Y';
            yy[b] = 'Y';
            let zz: String = zz.into_iter().collect();
            let yy: String = yy.into_iter().collect();
            want.add_term(PauliString::from_word(&zz).unwrap(), c(-2.0 * h * h * coupling, 0.0));
            want.add_term(PauliString::from_word(&yy).unwrap(), c(2.0 * h * h * coupling, 0.0));
        }
    }
    assert!(exp.heff[2].max_abs_diff(&want).unwrap() < 1e-12);
    assert_eq!(classify(&ham), CaseTag::NonCommutingSingleFreq);
}

#[test]
fn kick_vanishes_at_period_multiples() {
    let spec = LatticeSpec::chain(5, true).unwrap();
    let ham = build_bnnni(&spec, &BnnniParams::new(1.0, 0.25, 2.0, 30.0).unwrap()).unwrap();
    let exp = expand(&ham, 1).unwrap();
    for q in 0..6 {
        let k = kick_at(&exp, q as f64 * ham.period() / 2.0, 30.0);
        assert!(k.is_empty(), "q={q}: {k:?}");
    }
    // K⁽¹⁾(t) = −(h/ω) sin(ωt) Σ X
    let t = 0.173;
    let k = kick_at(&exp, t, 30.0);
    let want = -(2.0 / 30.0) * (30.0 * t).sin();
    for q in 0..5 {
        let x = PauliString::single(5, q, 'X').unwrap();
        assert!((k.coeff(&x).re - want).abs() < 1e-15);
    }
}

#[test]
fn z_drive_on_ising_chain_is_trivial() {
    let n = 4;
    let spec = LatticeSpec::chain(n, true).unwrap();
    let mut h0 = PauliSum::zero(n);
    for (a, b) in neighbor_pairs(&spec, 1).unwrap() {
        h0.add_term(PauliString::new(n, 0, (1 << a) | (1 << b), 0).unwrap(), c(-1.0, 0.0));
    }
    let mut hm = BTreeMap::new();
    hm.insert(1, PauliSum::sum_single(n, 0..n, 'Z', -0.8).unwrap());
    let h = build_custom(h0, hm, 17.0).unwrap();
    assert_eq!(classify(&h), CaseTag::Trivial);
    // everything commutes, so the exact propagator is e^{−i∫H}; Simpson on the integral
    let t = 2.37;
    let n_int = 4000;
    let ds = t / n_int as f64;
    let mut integral = M::zeros(1 << n, 1 << n);
    for k in 0..=n_int {
        let w = if k == 0 || k == n_int {
            1.0
        } else if k % 2 == 1 {
            4.0
        } else {
            2.0
        };
        integral += dense_sum(&h.hamiltonian_at(k as f64 * ds)) * Complex64::new(w * ds / 3.0, 0.0);
    }
    let exact = expm_herm(&integral, 1.0);
    assert!(infidelity(&exact, &dense_qhiffs(&h, t, 1)).abs() < 1e-12);
}

#[test]
fn expansion_orders_are_rejected_above_two() {
    assert!(expand(&generic_model(10.0), 3).is_err());
}

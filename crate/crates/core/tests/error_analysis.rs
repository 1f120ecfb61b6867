mod common;

use common::{dense_propagator, dense_string, dense_sum, expm_herm, max_abs, M};
use floquet_kick::error_analysis::closed_form::{quadratic_coefficient, OSCILLATORY_TERMS};
use floquet_kick::error_analysis::trigpoly::{double_integrate_even, integrate, integrate_backward};
use floquet_kick::error_analysis::*;
use floquet_kick::kick::kick_at_order;
use floquet_kick::*;
use num_complex::Complex64;
use num_rational::Ratio;
use proptest::prelude::*;

fn basis2() -> FrequencyBasis {
    let mut b = FrequencyBasis::new();
    b.intern(1.3, "a").unwrap();
    b.intern(0.7, "b").unwrap();
    b
}

fn poly() -> impl Strategy<Value = TrigPoly> {
    prop::collection::vec((-2i32..=2, -2i32..=2, -1.0f64..1.0, -1.0f64..1.0), 0..5).prop_map(|terms| {
        let mut p = TrigPoly::zero();
        for (i, j, a, b) in terms {
            let f = Freq::unit(0, i).add(&Freq::unit(1, j));
            p.add_cos(f, a);
            p.add_sin(f, b);
        }
        p
    })
}

fn times() -> Vec<f64> {
    (0..100).map(|k| -7.0 + 0.1413 * k as f64).collect()
}

/// Composite Simpson rule on `[a, b]`.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for k in 1..n {
        s += f(a + k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

proptest! {
    #[test]
    fn trigpoly_product_is_pointwise(p in poly(), q in poly()) {
        let b = basis2();
        let pq = p.mul(&q);
        for t in times() {
            prop_assert!((pq.eval(t, &b) - p.eval(t, &b) * q.eval(t, &b)).abs() < 1e-12);
        }
    }

    #[test]
    fn trigpoly_product_commutes_and_associates(p in poly(), q in poly(), r in poly()) {
        let b = basis2();
        let (pq, qp) = (p.mul(&q), q.mul(&p));
        let (l, rr) = (p.mul(&q).mul(&r), p.mul(&q.mul(&r)));
        for t in times() {
            prop_assert!((pq.eval(t, &b) - qp.eval(t, &b)).abs() < 1e-12);
            prop_assert!((l.eval(t, &b) - rr.eval(t, &b)).abs() < 1e-12);
        }
    }

    #[test]
    fn integrals_match_quadrature(p in poly(), tau in 0.1f64..4.0) {
        let b = basis2();
        let fwd = integrate(&p, &b).eval(tau, &b);
        let bwd = integrate_backward(&p, &b).eval(tau, &b);
        prop_assert!((fwd - simpson(|s| p.eval(s, &b), 0.0, tau, 2000)).abs() < 1e-9);
        prop_assert!((bwd - simpson(|s| p.eval(s, &b), -tau, 0.0, 2000)).abs() < 1e-9);
    }

    #[test]
    fn recursion_matches_torus_quadrature(a1 in 1i64..=2, a2 in 1i64..=2, n1 in 0u32..=8, n2 in 0u32..=8) {
        prop_assume!(n1 + n2 <= 8);
        let exact: Ratio<i64> = coeff_recursion(a1, a2, n1, n2);
        let value = *exact.numer() as f64 / *exact.denom() as f64;
        // independent angles on the torus stand in for incommensurate frequencies
        let grid = 256;
        let step = std::f64::consts::TAU / grid as f64;
        let mut acc = 0.0;
        for i in 0..grid {
            for j in 0..grid {
                let (u, v) = (i as f64 * step, j as f64 * step);
                acc += (2f64.powi(a1 as i32) * u).cos().powi(2 * n1 as i32)
                    * (2f64.powi(a2 as i32) * v).cos().powi(2 * n2 as i32);
            }
        }
        prop_assert!((acc / (grid * grid) as f64 - value).abs() < 1e-6);
    }

    #[test]
    fn recursion_values_lie_in_half_open_interval(n1 in 0u32..=10, n2 in 0u32..=10) {
        prop_assume!(n1 + n2 >= 1);
        let c: Ratio<i128> = coeff_recursion(1, 1, n1, n2);
        prop_assert!(c > Ratio::from_integer(0) && c <= Ratio::new(1, 2));
    }
}

#[test]
fn double_integral_of_even_polynomial() {
    let b = basis2();
    let mut p = TrigPoly::constant(0.4);
    p.add_cos(Freq::unit(0, 1), 0.9);
    p.add_cos(Freq::unit(0, 1).add(&Freq::unit(1, -2)), -0.3);
    let tau = 2.7;
    let got = double_integrate_even(&p, &b).eval(tau, &b);
    let inner = |s2: f64| simpson(|s1| p.eval(s2 - s1, &b), 0.0, tau, 400);
    let want = simpson(inner, 0.0, tau, 400);
    assert!((got - want).abs() < 1e-8, "{got} vs {want}");
}

#[test]
fn rational_table_is_exact() {
    let rows = coefficient_table::<i128>();
    assert_eq!(rows.len(), 6);
    let nnni2 = rows.iter().find(|r| r.dim == 2 && r.class == InteractionClass::Nnni).unwrap();
    assert_eq!(nnni2.ct2, Rational::new(281, 64));
    assert_eq!(nnni2.two_nn, 6);
}

/// Diagonal BNNNI couplings on a small open 2D lattice.
fn open_lattice_h0(kappa: f64) -> (LatticeSpec, PauliSum) {
    let spec = LatticeSpec::new(vec![2, 3], vec![false, false]).unwrap();
    let h = build_bnnni(&spec, &BnnniParams::new(0.8, kappa, 1.0, 10.0).unwrap()).unwrap();
    (spec, h.h0().clone())
}

#[test]
fn conjugation_matches_dense_frame() {
    let (_, h0) = open_lattice_h0(0.37);
    let dh = dense_sum(&h0);
    for w in ["YYIIII", "IYIXIZ", "XIYIIY", "ZIIZII"] {
        let p = PauliString::from_word(w).unwrap();
        let (parts, basis) = conjugate_by_diagonal(&p, &h0).unwrap();
        for t in [0.0, 0.31, 1.7, -2.2, 5.05] {
            let want = expm_herm(&dh, t) * dense_string(&p) * expm_herm(&dh, -t);
            let mut got = M::zeros(64, 64);
            for (s, f) in &parts {
                got += dense_string(s) * Complex64::new(f.eval(t, &basis), 0.0);
            }
            assert!(max_abs(&(got - want)) < 1e-12, "{w} at t={t}");
        }
    }
}

#[test]
fn frame_components_match_dense_traces() {
    let (_, h0) = open_lattice_h0(0.61);
    let dh = dense_sum(&h0);
    let mut basis = FrequencyBasis::new();
    let frame = DiagonalFrame::new(&h0, &mut basis).unwrap();
    let src = PauliString::from_word("YXIIZI").unwrap();
    let (parts, _) = conjugate_by_diagonal(&src, &h0).unwrap();
    for forward in [true, false] {
        for (dst, _) in &parts {
            let dst = dst.normalized();
            let poly = frame.component(&src, &dst, forward).unwrap();
            for u in [0.4, 1.9, -3.3] {
                let (l, r) = if forward { (-u, u) } else { (u, -u) };
                let m = expm_herm(&dh, l) * dense_string(&src) * expm_herm(&dh, r);
                let want = (dense_string(&dst).adjoint() * m).trace() / 64.0;
                assert!((want.re - poly.eval(u, &basis)).abs() < 1e-12);
                assert!(want.im.abs() < 1e-12);
            }
        }
    }
}

#[test]
fn non_diagonal_frame_is_rejected() {
    let h = PauliSum::from_words(&[(Complex64::new(1.0, 0.0), "XZ")]).unwrap();
    assert!(DiagonalFrame::new(&h, &mut FrequencyBasis::new()).is_err());
}

/// Dense QHiFFS unitary of the given order.
fn dense_qhiffs(h: &FloquetHamiltonian, t0: f64, t: f64, order: usize) -> M {
    let exp = expand(h, order).unwrap();
    let w = h.omega();
    let k0 = dense_sum(&kick_at_order(&exp, t0, w, order));
    let k1 = dense_sum(&kick_at_order(&exp, t, w, order));
    let heff = dense_sum(&heff_truncated(&exp, w, order));
    expm_herm(&k1, 1.0) * expm_herm(&heff, t - t0) * expm_herm(&k0, -1.0)
}

fn dense_infidelity(a: &M, b: &M) -> f64 {
    let d = a.nrows() as f64;
    1.0 - (a.adjoint() * b).trace().norm_sqr() / (d * d)
}

#[test]
fn error_trace_matches_dense_infidelity() {
    let spec = LatticeSpec::chain(5, true).unwrap();
    let omega = 40.0;
    let h = build_bnnni(&spec, &BnnniParams::new(1.0, 0.3, 2.0, omega).unwrap()).unwrap();
    let period = h.period();
    // with t0 ≠ 0 the oscillatory ω⁻⁴ part can nearly cancel at short times,
    // leaving omitted ω⁻⁶ terms comparable; later times are secular-dominated
    for (t0, q) in [(0.0, 3.0), (0.0, 4.4), (0.13 * period, 16.7), (0.31 * period, 12.4)] {
        let t = t0 + q * period;
        let exact = dense_propagator(&h, t0, t, (q * 1500.0) as usize);
        let eps = dense_infidelity(&exact, &dense_qhiffs(&h, t0, t, 1));
        let xi = leading_error_trace(&h, 2, t0, t).unwrap();
        let rel = (eps - 2.0 * xi).abs() / eps;
        assert!(rel < 0.05, "t0={t0} q={q}: eps {eps:.4e} vs 2ξ {:.4e}", 2.0 * xi);
    }
}

#[test]
fn error_trace_components_are_consistent() {
    let spec = LatticeSpec::chain(6, true).unwrap();
    let h = build_bnnni(&spec, &BnnniParams::new(1.0, 0.25, 2.0, 30.0).unwrap()).unwrap();
    let s: ErrorSeries = leading_error_series(&h, 2, 0.0).unwrap();
    for t in [0.5, 1.3, 4.0] {
        let direct: f64 = leading_error_trace(&h, 2, 0.0, t).unwrap();
        assert!((s.eval(t) - direct).abs() < 1e-15);
    }
    // ξ vanishes at τ = 0 when t₀ = 0
    assert!(s.eval(0.0).abs() < 1e-15);
    assert!(s.quadratic_coefficient() > 0.0);
}

#[test]
fn closed_form_quadratic_weight() {
    let p = ErrorModelParams::new(1.0, 0.25, 2.0, 30.0, 20, 2).unwrap();
    let pre = 20.0 * 16.0 * (1.0 + 0.0625) / 30f64.powi(4);
    assert!((quadratic_coefficient(&p) - 281.0 / 64.0 * pre).abs() < 1e-15);
    // the printed bracket at t = 0 has only the kick terms
    let at_zero = qhiffs_error_closed_form(&p, 0.0);
    let kick = 8.0 * 2.0 * 1.0625 - 16.0 * 1.0625;
    assert!((at_zero - 20.0 * 4.0 / 30f64.powi(4) * kick).abs() < 1e-12);
    assert_eq!(OSCILLATORY_TERMS.len(), 24);
}

#[test]
fn trotter_bound_scaling_and_validation() {
    let p = ErrorModelParams::new(1.0, 0.25, 2.0, 30.0, 8, 1).unwrap();
    let b1: f64 = trotter_error_bound(&p, 2.0, 100, 0.0).unwrap();
    let b2: f64 = trotter_error_bound(&p, 2.0, 200, 0.0).unwrap();
    assert!((b1 / b2 - 4.0).abs() < 1e-12);
    let want = 4.0 * 8.0 * 16.0 * 900.0 / (8.0 * 1e4);
    assert!((b1 - want).abs() < 1e-12);
    assert!(trotter_error_bound(&p, 2.0, 0, 0.0).is_err());
    assert!(trotter_error_bound(&p, 2.0, 10, 1.0).is_err());
    assert!(trotter_error_bound(&p, 2.0, 10, 0.1).unwrap() > 0.0);
}

#[test]
fn analytic_overhead_warns_outside_high_frequency_regime() {
    let slow = ErrorModelParams::new(1.0, 0.25, 2.0, 5.0, 20, 2).unwrap();
    assert!(overhead_ratio_analytic(&slow, 1.0, 1).unwrap().warning.is_some());
    let fast = slow.with_omega(60.0);
    assert!(overhead_ratio_analytic(&fast, 1.0, 1).unwrap().warning.is_none());
}

/// Multiplies another propagator by a global phase.
struct Phased<'a>(&'a (dyn Propagator<f64> + Sync), f64);

impl Propagator<f64> for Phased<'_> {
    fn n_qubits(&self) -> usize {
        self.0.n_qubits()
    }
    fn apply(&self, psi: &StateVector) -> floquet_kick::Result<StateVector> {
        let out = self.0.apply(psi)?;
        let ph = Complex64::from_polar(1.0, self.1);
        StateVector::from_amplitudes(out.amplitudes().iter().map(|a| a * ph).collect())
    }
}

#[test]
fn exact_infidelity_properties() {
    let spec = LatticeSpec::chain(4, true).unwrap();
    let h = build_bnnni(&spec, &BnnniParams::new(1.0, 0.4, 1.5, 12.0).unwrap()).unwrap();
    let t = 1.1;
    let coarse = Trotter { h: &h, t0: 0.0, t, m: 8, order: 1 };
    let fine = Trotter { h: &h, t0: 0.0, t, m: 64, order: 2 };
    let (u1, u2) = (unitary_of(&coarse).unwrap(), unitary_of(&fine).unwrap());
    let u1p = unitary_of(&Phased(&coarse, 0.83)).unwrap();
    assert!(avg_infidelity_exact(&u1, &u1).unwrap().abs() < 1e-14);
    assert!(avg_infidelity_exact(&u1p, &u1).unwrap().abs() < 1e-14);
    let eps = avg_infidelity_exact(&u1, &u2).unwrap();
    assert!(eps > 0.0 && eps <= 1.0);
    assert!((eps - avg_infidelity_exact(&u2, &u1).unwrap()).abs() < 1e-14);

    // Haar average d ε/(d+1) agrees with state sampling
    let est = avg_infidelity_stochastic(&coarse, &fine, 400, 21).unwrap();
    let want = haar_average_from_exact(eps, 16);
    assert!((est.mean - want).abs() < 4.0 * est.std_error, "{} ± {} vs {want}", est.mean, est.std_error);
}

#[test]
fn stochastic_infidelity_is_seeded() {
    let spec = LatticeSpec::chain(3, false).unwrap();
    let h = build_bnnni(&spec, &BnnniParams::new(1.0, 0.0, 1.0, 9.0).unwrap()).unwrap();
    let a = Trotter { h: &h, t0: 0.0, t: 0.8, m: 4, order: 1 };
    let b = Trotter { h: &h, t0: 0.0, t: 0.8, m: 5, order: 1 };
    let e1 = avg_infidelity_stochastic(&a, &b, 6, 3).unwrap();
    let e2 = avg_infidelity_stochastic(&a, &b, 6, 3).unwrap();
    assert_eq!(e1, e2);
    assert!(avg_infidelity_stochastic(&a, &b, 1, 3).is_err());
}

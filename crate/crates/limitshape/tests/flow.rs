use limitshape::dimers::SpectralCurve;
use limitshape::flow::*;
use limitshape::shapes::*;
use limitshape::tension::*;
use limitshape::Error;
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;

const AMP: f64 = 0.01;
const HORIZON: f64 = 0.25;

fn hex_data(ny: usize) -> FlowState {
    FlowState::from_fns(1.0, ny, |_| 0.0, |y| 1.0 / 3.0 + AMP * (2.0 * PI * y).sin()).unwrap()
}

fn ff_data(ny: usize, u: f64) -> FlowState {
    let p0 = grad_sigma_ff(0.5, 0.5, u).unwrap()[0];
    FlowState::from_fns(1.0, ny, |_| p0, |y| 0.5 + AMP * (2.0 * PI * y).sin()).unwrap()
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `(∂²ℋ/∂l², ∂²ℋ/∂l∂l̄)` of a real function of `l` by fourth-order differences.
fn wirtinger(f: impl Fn(Complex64) -> f64, l: Complex64) -> (Complex64, f64) {
    let h = 1e-3;
    let d2 = |dir: Complex64| {
        (-f(l + 2.0 * h * dir) + 16.0 * f(l + h * dir) - 30.0 * f(l) + 16.0 * f(l - h * dir) - f(l - 2.0 * h * dir)) / (12.0 * h * h)
    };
    let (one, i) = (c(1.0, 0.0), c(0.0, 1.0));
    let (hpp, hqq) = (d2(one), d2(i));
    let mixed = |a: f64, b: f64| f(l + h * c(a, b));
    let hpq = (mixed(1.0, 1.0) - mixed(1.0, -1.0) - mixed(-1.0, 1.0) + mixed(-1.0, -1.0)) / (4.0 * h * h);
    // the mixed term is second order only; refine it by Richardson extrapolation
    let mixed2 = |a: f64, b: f64| f(l + 0.5 * h * c(a, b));
    let hpq2 = (mixed2(1.0, 1.0) - mixed2(1.0, -1.0) - mixed2(-1.0, 1.0) + mixed2(-1.0, -1.0)) / (h * h);
    let hpq = (4.0 * hpq2 - hpq) / 3.0;
    (c(hpp - hqq, -2.0 * hpq) / 4.0, (hpp + hqq) / 4.0)
}

fn spectral_derivative(v: &[f64], period: f64) -> Vec<f64> {
    let n = v.len();
    let coef: Vec<Complex64> = (0..n)
        .map(|k| v.iter().enumerate().map(|(j, &x)| x * Complex64::from_polar(1.0, -2.0 * PI * (j * k) as f64 / n as f64)).sum::<Complex64>() / n as f64)
        .collect();
    (0..n)
        .map(|j| {
            (0..n)
                .filter(|&k| 2 * k != n)
                .map(|k| {
                    let m = if 2 * k < n { k as f64 } else { k as f64 - n as f64 };
                    coef[k] * c(0.0, 2.0 * PI * m / period) * Complex64::from_polar(1.0, 2.0 * PI * (j * k) as f64 / n as f64)
                })
                .sum::<Complex64>()
                .re
        })
        .collect()
}

#[test]
fn hamiltonian_of_constant_state() {
    let d = HamiltonianDensity::new(&HexTension);
    let s = FlowState::constant(2.0, 16, 0.1, 0.3).unwrap();
    let tau = partial_legendre(&HexTension, 0.1, 0.3).unwrap().tau;
    assert!((hamiltonian(&s, &d, 0.0).unwrap() - 2.0 * tau).abs() < 1e-14);
    let shifted = FlowState::constant(2.0, 16, 0.35, 0.3).unwrap();
    assert!((hamiltonian(&s, &d, 0.25).unwrap() - hamiltonian(&shifted, &d, 0.0).unwrap()).abs() < 1e-14);
}

#[test]
fn hamiltonian_at_critical_point() {
    let d = HamiltonianDensity::new(&HexTension);
    let s = FlowState::constant(1.0, 8, 0.0, 1.0 / 3.0).unwrap();
    let expected = -sigma_hex(1.0 / 3.0, 1.0 / 3.0).unwrap();
    assert!((hamiltonian(&s, &d, 0.0).unwrap() - expected).abs() < 1e-12);
}

#[test]
fn density_matches_closed_form() {
    for &(p, t) in &[(0.0, 1.0 / 3.0), (0.3, 0.2), (-0.5, 0.6)] {
        let tau = partial_legendre(&HexTension, p, t).unwrap().tau;
        let h = hamiltonian_hex(c(p, PI * t)).unwrap();
        assert!(h.im.abs() < 1e-14);
        assert!((h.re - tau).abs() < 1e-10, "{p} {t}: {} {}", h.re, tau);
    }
}

#[test]
fn constant_state_is_fixed() {
    let d = HamiltonianDensity::new(&HexTension);
    let s = FlowState::constant(1.0, 16, 0.2, 0.3).unwrap();
    let tr = hamilton_evolve(&s, &d, 0.5, 20).unwrap();
    assert!(tr.states.iter().all(|x| *x == s));
    let b = burgers_evolve(&s.l(), 1.0, &BurgersFunction::hex(), 0.7).unwrap();
    assert!(b.max_abs_diff(&s) < 1e-15);
}

#[test]
fn hamilton_matches_characteristics_hex() {
    let s = hex_data(32);
    let tr = hamilton_evolve(&s, &HamiltonianDensity::new(&HexTension), HORIZON, 250).unwrap();
    let b = burgers_evolve(&s.l(), 1.0, &BurgersFunction::hex(), HORIZON).unwrap();
    assert!(tr.last().max_abs_diff(&b) < 1e-5);
}

#[test]
fn hamilton_matches_characteristics_ff() {
    let u = 0.6;
    let s = ff_data(16, u);
    let ff = FreeFermionTension::new(u).unwrap();
    let tr = hamilton_evolve(&s, &HamiltonianDensity::new(&ff), HORIZON, 125).unwrap();
    let b = burgers_evolve(&s.l(), 1.0, &BurgersFunction::free_fermion(u).unwrap(), HORIZON).unwrap();
    assert!(tr.last().max_abs_diff(&b) < 1e-5);
}

#[test]
fn casimirs_are_invariant() {
    let s = hex_data(32);
    let tr = hamilton_evolve(&s, &HamiltonianDensity::new(&HexTension), HORIZON, 100).unwrap();
    let (i1, j1) = (conserved_in(&s, 1).unwrap(), conserved_in_bar(&s, 1).unwrap());
    for st in &tr.states {
        assert!((conserved_in(st, 1).unwrap() - i1).norm() < 1e-10);
        assert!((conserved_in_bar(st, 1).unwrap() - j1).norm() < 1e-10);
    }
}

#[test]
fn heights_have_symmetric_mixed_partials() {
    let s = hex_data(32);
    let tr = hamilton_evolve(&s, &HamiltonianDensity::new(&HexTension), HORIZON, 100).unwrap();
    let k = tr.xs.len() - 1;
    let dh: Vec<f64> = tr.heights[k].iter().zip(&tr.heights[0]).map(|(a, b)| a - b).collect();
    let dy = spectral_derivative(&dh, 1.0);
    for j in 0..32 {
        let dt = tr.states[k].t[j] - tr.states[0].t[j];
        assert!((dy[j] - dt).abs() < 1e-10);
    }
    assert_eq!(tr.heights[0][0], 0.0);
}

#[test]
fn moments_are_conserved() {
    let u = 0.6;
    let cases = [(BurgersFunction::hex(), hex_data as fn(usize) -> FlowState), (BurgersFunction::free_fermion(u).unwrap(), |n| ff_data(n, 0.6))];
    for (f, data) in cases {
        let mut previous = f64::INFINITY;
        for ny in [8, 16, 32] {
            let s = data(ny);
            let e = burgers_evolve(&s.l(), 1.0, &f, HORIZON).unwrap();
            let mut drift = 0.0f64;
            for n in 1..=4 {
                let a = conserved_in(&s, n).unwrap();
                drift = drift.max((conserved_in(&e, n).unwrap() - a).norm() / a.norm());
            }
            assert!(drift < previous || drift < 1e-13, "{f}: {drift} after {previous}");
            previous = drift;
        }
        assert!(previous <= 1e-6);
    }
}

#[test]
fn reconstruction_solves_euler_lagrange() {
    let d = HamiltonianDensity::new(&HexTension);
    let res = |n: usize, sign: CharacteristicSign| {
        let s = hex_data(n);
        let b = BurgersSolver::with(&s.l(), 1.0, BurgersFunction::hex(), sign, FlowOptions::default()).unwrap();
        let g = CylinderGrid::new(HORIZON, 1.0, n / 4 + 1, n).unwrap();
        hex_el_residual(&b.reconstruct(&d, g).unwrap()).unwrap().max_abs()
    };
    let r: Vec<f64> = [32, 64, 128].iter().map(|&n| res(n, CharacteristicSign::Plus)).collect();
    assert!(r[0] / r[1] > 3.0 && r[1] / r[2] > 3.0, "{r:?}");
    let wrong = res(64, CharacteristicSign::Minus);
    assert!(wrong > 10.0 * r[1], "{wrong} vs {}", r[1]);
}

#[test]
fn reconstruction_matches_minimizer() {
    let n = 64;
    let s = hex_data(n);
    let b = BurgersSolver::new(&s.l(), 1.0, BurgersFunction::hex()).unwrap();
    let g = CylinderGrid::new(HORIZON, 1.0, n + 1, n).unwrap();
    let rec = b.reconstruct(&HamiltonianDensity::new(&HexTension), g).unwrap();
    let mid = |x: f64| (0..n).map(|j| b.eval(x, (j as f64 + 0.5) / n as f64).unwrap().im / PI).collect();
    let bd = BoundaryData { left: mid(0.0), right: mid(HORIZON) };
    let sol = minimize_action(g, &HexTension, &bd, 0.0).unwrap();
    assert!(sol.field.max_abs_diff(&rec) < 1e-3);
}

#[test]
fn large_data_shocks() {
    let s = FlowState::from_fns(1.0, 32, |_| 0.0, |y| 1.0 / 3.0 + 0.05 * (2.0 * PI * y).sin()).unwrap();
    let r = burgers_evolve(&s.l(), 1.0, &BurgersFunction::hex(), 1.0);
    assert!(matches!(r, Err(Error::Shock { .. })), "{r:?}");
}

#[test]
fn poisson_certificate() {
    let grid = PoissonGrid::new((-1.0, 1.0), (0.2, 0.8), 7);
    let us = [PI / 6.0, PI / 4.0, PI / 3.0];
    for (a, &u) in us.iter().enumerate() {
        let fu = FreeFermionTension::new(u).unwrap();
        let same = poisson_bracket_residual(&fu, &fu, &grid).unwrap();
        assert_eq!(same.residual, 0.0);
        for &v in &us[a + 1..] {
            let fv = FreeFermionTension::new(v).unwrap();
            let r = poisson_bracket_residual(&fu, &fv, &grid).unwrap();
            assert!(r.residual <= 1e-6, "{u} {v}: {r:?}");
            assert!(r.factorization_gap <= 1e-6);
        }
    }
    let q1 = QuadraticTension::new(1.0, 0.0, 1.0).unwrap();
    let q2 = QuadraticTension::new(1.0, 0.0, 2.0).unwrap();
    let unit = PoissonGrid::new((-1.0, 1.0), (-1.0, 1.0), 5);
    let r = poisson_bracket_residual(&q1, &q2, &unit).unwrap();
    assert!(r.residual >= 0.1);
    assert!(r.factorization_gap < 1e-8);
    assert!((r.factored - 1.0).abs() < 1e-12);
}

#[test]
fn hamiltonians_split_holomorphically() {
    let l = c(-1.0, 0.5);
    let hex = |l: Complex64| hamiltonian_hex(l).unwrap().re;
    let (dll, dllbar) = wirtinger(hex, l);
    let z = l.exp();
    assert!(dllbar.abs() < 1e-8);
    assert!((dll - BurgersFunction::hex().eval(z).unwrap() / c(0.0, 2.0 * PI)).norm() < 1e-8);
    for &u in &[0.4, 1.0] {
        let ff = |l: Complex64| hamiltonian_ff(l, u).unwrap().re;
        let (dll, dllbar) = wirtinger(ff, l);
        assert!(dllbar.abs() < 1e-8);
        assert!((dll - BurgersFunction::free_fermion(u).unwrap().eval(z).unwrap() / c(0.0, 2.0 * PI)).norm() < 1e-8);
    }
}

#[test]
fn ff_hamiltonian_reduces_to_hex() {
    let u = PI / 2.0 - 1e-3;
    for &l in &[c(-1.0, 0.5), c(0.2, 1.2), c(-0.3, 2.5)] {
        let ff = hamiltonian_ff(l + ff_momentum_shift(u), u).unwrap();
        assert!((ff - hamiltonian_hex(l).unwrap()).norm() <= 1e-4);
    }
}

#[test]
fn closed_forms_reject_cut() {
    assert!(matches!(hamiltonian_hex(c(0.5, 0.0)), Err(Error::BranchCut(_))));
    assert!(hamiltonian_ff(c(0.0, 1.0), 2.0).is_err());
}

#[test]
fn burgers_functions_from_curves() {
    let zs = [c(0.3, 0.4), c(-0.7, 0.2), c(1.5, -0.5)];
    let hex = burgers_from_curve(&SpectralCurve::hexagonal(), c(0.5, 0.0), c(0.5, 0.0)).unwrap();
    for &z in &zs {
        assert!((hex.eval(z).unwrap() - z / (1.0 - z)).norm() < 1e-12);
    }
    let u: f64 = 0.7;
    let (su, cu) = u.sin_cos();
    let z0 = c(0.2, 0.1);
    let w0 = (cu - z0 * su) / (z0 * cu + su);
    let ff = burgers_from_curve(&SpectralCurve::free_fermion(u), z0, w0).unwrap();
    let exact = BurgersFunction::free_fermion(u).unwrap();
    for &z in &zs {
        assert!((ff.eval(z).unwrap() - exact.eval(z).unwrap()).norm() < 1e-12);
    }
    for &l in &[c(-1.0, 0.5), c(0.1, 2.0)] {
        let (dll, _) = wirtinger(|l| hamiltonian_ff(l, u).unwrap().re, l);
        assert!((ff.eval(l.exp()).unwrap() - c(0.0, 2.0 * PI) * dll).norm() < 1e-8);
    }
    assert!(burgers_from_curve(&SpectralCurve::hexagonal(), c(0.5, 0.0), c(0.7, 0.0)).is_err());
}

#[test]
fn quadratic_branch_is_continued() {
    // 1 − z − w − w²: both branches are followed from their probe points
    let curve = SpectralCurve::new([((0, 0), 1.0), ((1, 0), -1.0), ((0, 1), -1.0), ((0, 2), -1.0)]).unwrap();
    let z0 = c(0.1, 0.0);
    let disc = (1.0 + 4.0 * (1.0 - z0)).sqrt();
    for sign in [1.0, -1.0] {
        let w0 = (-1.0 + sign * disc) / 2.0;
        let f = burgers_from_curve(&curve, z0, w0).unwrap();
        let z = c(0.3, 0.2);
        let w = (-1.0 + sign * (1.0 + 4.0 * (1.0 - z)).sqrt()) / 2.0;
        let expected = (-z) / (w * (-1.0 - 2.0 * w));
        assert!((f.eval(z).unwrap() - expected).norm() < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn density_inverts_tension(p in -1.5f64..1.5, t in 0.1f64..0.9) {
        let d = partial_legendre(&HexTension, p, t);
        prop_assume!(d.is_ok());
        let d = d.unwrap();
        let g = grad_sigma_hex(d.nu, t).unwrap();
        prop_assert!((g[0] - p).abs() < 1e-10);
        prop_assert!((d.d2 + g[1]).abs() < 1e-12);
    }

    #[test]
    fn moments_of_constant_profiles(p in -1.0f64..1.0, t in 0.05f64..0.95, n in 1u32..=8) {
        let s = FlowState::constant(1.5, 8, p, t).unwrap();
        let l = Complex64::new(p, PI * t);
        prop_assert!((conserved_in(&s, n).unwrap() - 1.5 * l.powu(n)).norm() < 1e-12 * (1.0 + l.norm().powi(n as i32)));
    }
}

use limitshape::dimers::SpectralCurve;
use limitshape::tension::*;
use limitshape::Error;
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;

const HEX_F0: f64 = 0.323_065_947_219_450_5;

#[test]
fn dilog_and_lobachevsky() {
    assert_eq!(dilog(Complex64::new(0.0, 0.0)).unwrap(), Complex64::new(0.0, 0.0));
    assert_eq!(lobachevsky(0.0), 0.0);
    let near = dilog(Complex64::new(1.0 - 1e-13, 0.0)).unwrap();
    assert!((near.re - PI * PI / 6.0).abs() < 1e-10);
    assert!(matches!(dilog(Complex64::new(1.5, 0.0)), Err(Error::BranchCut(_))));
    for k in 1..200 {
        let x = PI * k as f64 / 200.0;
        let li = dilog(Complex64::from_polar(1.0, 2.0 * x)).unwrap();
        assert!((lobachevsky(x) - 0.5 * li.im).abs() < 1e-10, "x = {x}");
    }
}

#[test]
fn lobachevsky_matches_quadrature() {
    for &x in &[0.1, 0.5, PI / 3.0, 1.4, 2.5] {
        // integrate −log(2 sin t); the log singularity at 0 is split off
        let split = x.min(0.05);
        let head = -(split * ((2.0 * split).ln() - 1.0));
        let tail = quadrature::integrate(|t| Ok(-(2.0 * t.sin() / (2.0 * t)).ln()), 0.0, split, 1e-15).unwrap();
        let rest = quadrature::integrate(|t| Ok(-(2.0 * t.sin()).abs().ln()), split, x, 1e-14).unwrap();
        assert!((lobachevsky(x) - (head + tail + rest)).abs() < 1e-12, "x = {x}");
    }
}

#[test]
fn hex_closed_form_values() {
    assert!(grad_sigma_hex(1.0 / 3.0, 1.0 / 3.0).unwrap()[0].abs() < 1e-15);
    assert!(grad_sigma_hex(0.25, 0.5).unwrap()[0].abs() < 1e-15);
    let min = sigma_hex(1.0 / 3.0, 1.0 / 3.0).unwrap();
    assert!((min + 3.0 / PI * lobachevsky(PI / 3.0)).abs() < 1e-15);
    assert!((min + HEX_F0).abs() < 1e-13);
    assert!(matches!(sigma_hex(0.6, 0.5), Err(Error::OutOfSlopeDomain(..))));
}

#[test]
fn hex_free_energy_two_pipelines() {
    let f = free_energy(&SpectralCurve::hexagonal(), 0.0, 0.0).unwrap();
    assert!((f + sigma_hex(1.0 / 3.0, 1.0 / 3.0).unwrap()).abs() < 1e-4);
    assert!((f - HEX_F0).abs() < 1e-12);
    let t = free_energy_trapezoid(&SpectralCurve::hexagonal(), 0.0, 0.0, 512).unwrap();
    assert!((t - HEX_F0).abs() < 1e-4);
}

#[test]
fn free_energy_scaling() {
    let p = SpectralCurve::free_fermion(0.7);
    for &k in &[0.5, 3.0, 10.0] {
        let d = free_energy(&p.scaled(k).unwrap(), 0.3, -0.2).unwrap() - free_energy(&p, 0.3, -0.2).unwrap();
        assert!((d - k.ln()).abs() < 1e-12);
    }
}

#[test]
fn trapezoid_converges_geometrically() {
    // no zeros of 1 − z − w on |z| = e², |w| = 1
    let p = SpectralCurve::hexagonal();
    let reference = free_energy(&p, 2.0, 0.0).unwrap();
    let errs: Vec<f64> = [4, 8, 16].iter().map(|&n| (free_energy_trapezoid(&p, 2.0, 0.0, n).unwrap() - reference).abs()).collect();
    assert!(errs[1] <= errs[0] * 0.5 && errs[2] <= errs[1] * 0.5, "{errs:?}");
    assert!(errs[2] < 1e-10);
}

#[test]
fn ff_gradient_closed_form() {
    assert_eq!(grad_free_energy_ff(0.0, 0.0, 0.6).unwrap(), [0.5, 0.5]);
    let u = PI / 3.0;
    let field = FreeEnergyField::new(SpectralCurve::free_fermion(u)).unwrap();
    let e = 1e-5;
    let (h, v) = (0.2, -0.1);
    let fd = (field.value(h + e, v).unwrap() - field.value(h - e, v).unwrap()) / (2.0 * e);
    assert!((fd - grad_free_energy_ff(h, v, u).unwrap()[0]).abs() < 1e-4);
    for &(h, v, u) in &[(0.1, 0.3, 0.4), (-0.2, 0.05, 0.9), (0.0, -0.3, 1.2), (0.25, 0.25, 0.7), (-0.1, -0.15, 0.5)] {
        let f = FreeEnergyField::new(SpectralCurve::free_fermion(u)).unwrap();
        let g = grad_free_energy_ff(h, v, u).unwrap();
        let fdh = (f.value(h + e, v).unwrap() - f.value(h - e, v).unwrap()) / (2.0 * e);
        let fdv = (f.value(h, v + e).unwrap() - f.value(h, v - e).unwrap()) / (2.0 * e);
        assert!((fdh - g[0]).abs() < 1e-4 && (fdv - g[1]).abs() < 1e-4);
        let q = f.gradient(h, v).unwrap();
        assert!((q[0] - g[0]).abs() < 1e-12 && (q[1] - g[1]).abs() < 1e-12);
    }
    assert!(matches!(grad_free_energy_ff(3.0, -3.0, 0.4), Err(Error::OutOfRange(_))));
}

#[test]
fn ff_tension_closed_form_values() {
    let g = grad_sigma_ff(0.5, 0.5, 0.4).unwrap();
    assert!(g[0].abs() < 1e-15 && g[1].abs() < 1e-15);
    let g = grad_sigma_ff(0.25, 0.25, PI / 4.0).unwrap();
    assert!((g[0] + (0.5f64.sqrt()).asinh()).abs() < 1e-15);
    let a = grad_sigma_ff(0.2, 0.7, 0.5).unwrap();
    let b = grad_sigma_ff(0.7, 0.2, 0.5).unwrap();
    assert_eq!(a, [b[1], b[0]]);
}

#[test]
fn ff_maps_invert_each_other() {
    for &(s, t, u) in &[(0.3, 0.4, PI / 3.0), (0.3, 0.4, PI / 4.0), (0.1, 0.85, 0.3), (0.6, 0.55, 1.2)] {
        let r = ff_round_trip(s, t, u).unwrap();
        assert!((r[0] - s).abs() < 1e-6 && (r[1] - t).abs() < 1e-6, "{r:?}");
    }
}

#[test]
fn numeric_legendre_inverts_ff_gradient() {
    let u = PI / 3.0;
    let field = FreeEnergyField::new(SpectralCurve::free_fermion(u)).unwrap();
    let res = legendre_sigma(&field, 0.3, 0.4).unwrap();
    let back = grad_free_energy_ff(res.field[0], res.field[1], u).unwrap();
    assert!((back[0] - 0.3).abs() < 1e-6 && (back[1] - 0.4).abs() < 1e-6);
    let closed = grad_sigma_ff(0.3, 0.4, u).unwrap();
    assert!((closed[0] - res.field[0]).abs() < 1e-6 && (closed[1] - res.field[1]).abs() < 1e-6);
}

#[test]
fn numeric_legendre_matches_hex_closed_form() {
    let num = NumericTension::new(SpectralCurve::hexagonal()).unwrap();
    for i in 0..5 {
        let s = 0.1 + 0.175 * i as f64;
        for j in 0..5 {
            let t = (1.0 - s) * (0.1 + 0.2 * j as f64);
            let res = num.solve(s, t).unwrap();
            assert!((res.sigma - sigma_hex(s, t).unwrap()).abs() < 1e-4, "({s}, {t})");
            let g = grad_sigma_hex(s, t).unwrap();
            assert!((res.field[0] - g[0]).abs() < 1e-4 && (res.field[1] - g[1]).abs() < 1e-4);
        }
    }
}

#[test]
fn numeric_legendre_is_symmetric() {
    let num = NumericTension::new(SpectralCurve::free_fermion(0.5)).unwrap();
    let a = num.value(0.2, 0.65).unwrap();
    let b = num.value(0.65, 0.2).unwrap();
    assert!((a - b).abs() < 1e-10);
    assert!(matches!(num.value(1.2, 0.5), Err(Error::OutOfSlopeDomain(..))));
}

#[test]
fn legendre_involution_ff() {
    let t = FreeFermionTension::new(0.6).unwrap();
    let pts = [(0.1, 0.2), (-0.3, 0.1), (0.25, -0.2), (0.0, 0.0), (0.4, 0.35), (-0.2, -0.25), (0.15, -0.05), (-0.05, 0.3), (0.3, 0.0), (0.05, 0.05)];
    for &(h, v) in &pts {
        let (f, _) = legendre_conjugate(&t, h, v).unwrap();
        let direct = t.field().value(h, v).unwrap();
        assert!((f - direct).abs() < 1e-5, "({h}, {v}): {f} vs {direct}");
    }
}

#[test]
fn gradient_consistency() {
    let e = 1e-5;
    for &(s, t) in &[(0.2, 0.3), (0.5, 0.1), (0.33, 0.6)] {
        let g = grad_sigma_hex(s, t).unwrap();
        let fs = (sigma_hex(s + e, t).unwrap() - sigma_hex(s - e, t).unwrap()) / (2.0 * e);
        let ft = (sigma_hex(s, t + e).unwrap() - sigma_hex(s, t - e).unwrap()) / (2.0 * e);
        assert!((fs - g[0]).abs() < 1e-6 && (ft - g[1]).abs() < 1e-6);
    }
    let ff = FreeFermionTension::new(0.7).unwrap();
    for &(s, t) in &[(0.3, 0.4), (0.6, 0.2), (0.5, 0.5)] {
        let g = ff.gradient(s, t).unwrap();
        let fs = (ff.value(s + e, t).unwrap() - ff.value(s - e, t).unwrap()) / (2.0 * e);
        let ft = (ff.value(s, t + e).unwrap() - ff.value(s, t - e).unwrap()) / (2.0 * e);
        assert!((fs - g[0]).abs() < 1e-6 && (ft - g[1]).abs() < 1e-6, "{fs} {ft} {g:?}");
    }
}

#[test]
fn quadratic_partial_legendre_exact() {
    let (a, b, c) = (2.0, 0.5, 1.5);
    let q = QuadraticTension::new(a, b, c).unwrap();
    for &(p, xi) in &[(0.3, -0.7), (2.0, 1.0), (-1.5, 0.25)] {
        let r = partial_legendre(&q, p, xi).unwrap();
        let tau = p * p / (2.0 * a) - b / a * p * xi - 0.5 * (c - b * b / a) * xi * xi;
        assert!((r.tau - tau).abs() < 1e-12);
        assert!(r.inverse_residual() < 1e-12 && r.hessian_residual() < 1e-12);
        assert!((r.d12 + b / a).abs() < 1e-12);
    }
}

#[test]
fn appendix_identities_on_grids() {
    let hex = HexTension;
    let ff = FreeFermionTension::new(PI / 5.0).unwrap();
    for i in 1..6 {
        for j in 1..6 {
            let xi = 0.15 * j as f64;
            let p = -2.0 + 0.7 * i as f64;
            if xi < 0.9 {
                let r = partial_legendre(&hex, p, xi).unwrap();
                assert!(r.inverse_residual() < 1e-8 && r.hessian_residual() < 1e-8);
                assert!(r.d11 > 0.0);
            }
            let r = partial_legendre(&ff, p, xi).unwrap();
            assert!(r.inverse_residual() < 1e-8 && r.hessian_residual() < 1e-8);
        }
    }
}

#[test]
fn spectral_independence_of_ff_hessian() {
    assert_eq!(hess_spectral_independence(0.3, 0.4, &[0.5]).unwrap(), 0.0);
    let us = [PI / 6.0, PI / 4.0, PI / 3.0];
    assert!(hess_spectral_independence(0.3, 0.4, &us).unwrap() <= 1e-8);
    // both determinants equal π²; the Hessians themselves differ
    let hh = hess_sigma_hex(0.3, 0.4).unwrap();
    let hf = hess_sigma_ff(0.3, 0.4, PI / 4.0).unwrap();
    let det = |h: [[f64; 2]; 2]| h[0][0] * h[1][1] - h[0][1] * h[1][0];
    assert!((det(hh) - PI * PI).abs() < 1e-10 && (det(hf) - PI * PI).abs() < 1e-10);
    assert!((hh[0][1] - hf[0][1]).abs() > 0.1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn closed_form_hessians_positive_definite(s in 0.01f64..0.99, t in 0.01f64..0.99, u in 0.05f64..1.5) {
        let h = hess_sigma_ff(s, t, u).unwrap();
        prop_assert!(h[0][0] > 0.0 && h[0][0] * h[1][1] - h[0][1] * h[1][0] > 0.0);
        if s + t < 0.99 {
            let h = hess_sigma_hex(s, t).unwrap();
            prop_assert!(h[0][0] > 0.0 && h[0][0] * h[1][1] - h[0][1] * h[1][0] > 0.0);
        }
    }

    #[test]
    fn ff_free_energy_gradient_symmetry(h in -0.4f64..0.4, v in -0.4f64..0.4, u in 0.3f64..1.2) {
        match (grad_free_energy_ff(h, v, u), grad_free_energy_ff(v, h, u)) {
            (Ok(a), Ok(b)) => prop_assert!((a[0] - b[1]).abs() < 1e-14),
            (Err(_), Err(_)) => {}
            (a, b) => prop_assert!(false, "asymmetric domain: {a:?} {b:?}"),
        }
    }

    #[test]
    fn ff_det_is_independent_of_u(s in 0.05f64..0.95, t in 0.05f64..0.95) {
        let r = hess_spectral_independence(s, t, &[PI / 6.0, PI / 4.0, PI / 3.0]).unwrap();
        prop_assert!(r <= 1e-8 * (1.0 + PI * PI));
    }

    #[test]
    fn dilog_inversion(re in -3.0f64..3.0, im in 0.01f64..3.0) {
        let z = Complex64::new(re, im);
        let l = (-z).ln();
        let lhs = dilog(z).unwrap() + dilog(Complex64::new(1.0, 0.0) / z).unwrap();
        let rhs = -PI * PI / 6.0 - 0.5 * l * l;
        prop_assert!((lhs - rhs).norm() < 1e-12);
    }
}

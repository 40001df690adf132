use limitshape::shapes::*;
use limitshape::tension::*;
use limitshape::Error;
use proptest::prelude::*;
use std::f64::consts::PI;

fn smooth_hex_problem(n: usize) -> (CylinderGrid, BoundaryData) {
    let g = CylinderGrid::new(1.0, 1.0, n + 1, n).unwrap();
    let b = BoundaryData::from_fn(&g, |y| 1.0 / 3.0 + 0.02 * (2.0 * PI * y).sin(), |y| 1.0 / 3.0 + 0.02 * (2.0 * PI * y).cos());
    (g, b)
}

fn wavy(g: CylinderGrid, s0: f64, t0: f64, amp: f64) -> HeightField {
    let (tl, l) = (g.length, g.circumference);
    HeightField::from_fn(g, t0 * l, move |x, y| {
        s0 * x + t0 * y + amp * (PI * x / tl).sin() * (2.0 * PI * y / l).cos() + 0.5 * amp * (2.0 * PI * (x / tl + y / l)).sin()
    })
}

#[test]
fn action_of_affine_field() {
    let g = CylinderGrid::new(1.5, 2.0, 9, 12).unwrap();
    let hf = HeightField::affine(g, 0.2, 0.45);
    let s = action(&hf, &HexTension, 0.0).unwrap();
    assert!((s - 3.0 * sigma_hex(0.2, 0.45).unwrap()).abs() < 1e-12);
    let shifted = action(&hf.shifted(7.5), &HexTension, 0.0).unwrap();
    assert!((shifted - s).abs() < 1e-15);
}

#[test]
fn field_term_telescopes() {
    let g = CylinderGrid::new(1.3, 0.8, 11, 10).unwrap();
    let hf = wavy(g, 0.3, 0.35, 0.02);
    let v = 0.7;
    let with = action(&hf, &HexTension, v).unwrap();
    let without = action(&hf, &HexTension, 0.0).unwrap();
    let gap: f64 = hf.column(g.nx - 1).iter().zip(hf.column(0)).map(|(a, b)| a - b).sum::<f64>() / g.ny as f64;
    assert!((with - without - v * g.circumference * gap).abs() < 1e-13);
}

#[test]
fn slopes_outside_domain_are_rejected() {
    let g = CylinderGrid::new(1.0, 1.0, 5, 5).unwrap();
    let hf = HeightField::affine(g, 0.7, 0.6);
    assert!(matches!(action(&hf, &HexTension, 0.0), Err(Error::OutOfSlopeDomain(..))));
    assert!(matches!(el_residual(&hf, &HexTension), Err(Error::OutOfSlopeDomain(..))));
}

#[test]
fn mismatched_monodromy_is_infeasible() {
    let g = CylinderGrid::new(1.0, 1.0, 5, 8).unwrap();
    let b = BoundaryData { left: vec![0.3; 8], right: vec![0.35; 8] };
    assert!(matches!(minimize_action(g, &HexTension, &b, 0.0), Err(Error::Infeasible(_))));
}

#[test]
fn constant_data_gives_affine_optimizer() {
    let g = CylinderGrid::new(1.0, 1.0, 17, 16).unwrap();
    let b = BoundaryData::constant(16, 1.0 / 3.0);
    let sol = minimize_action(g, &HexTension, &b, 0.0).unwrap();
    let exact = HeightField::affine(g, 1.0 / 3.0, 1.0 / 3.0);
    assert!(sol.field.max_abs_diff(&exact) < 1e-8);

    // with a field, ∂_sσ(s, 1/3) = −V
    let v = 0.25;
    let s = partial_legendre(&HexTension, -v, 1.0 / 3.0).unwrap().nu;
    let sol = minimize_action(g, &HexTension, &b, v).unwrap();
    assert!(sol.field.max_abs_diff(&HeightField::affine(g, s, 1.0 / 3.0)) < 1e-8);
}

#[test]
fn quadratic_affine_optimizer() {
    let q = QuadraticTension::new(2.0, 0.6, 1.0).unwrap();
    let g = CylinderGrid::new(2.0, 1.0, 13, 10).unwrap();
    let (t0, v) = (0.4, -0.3);
    let sol = minimize_action(g, &q, &BoundaryData::constant(10, t0), v).unwrap();
    let s = -(q.b * t0 + v) / q.a;
    assert!(sol.field.max_abs_diff(&HeightField::affine(g, s, t0)) < 1e-8);
}

#[test]
fn action_never_increases() {
    let (g, b) = smooth_hex_problem(24);
    let sol = minimize_action(g, &HexTension, &b, 0.1).unwrap();
    assert!(sol.action_history.len() >= 3);
    for w in sol.action_history.windows(2) {
        assert!(w[1] <= w[0] + 1e-14 * w[0].abs());
    }
    sol.field.check_slopes(&HexTension).unwrap();
}

#[test]
fn two_starts_agree() {
    let (g, b) = smooth_hex_problem(24);
    let a = minimize_action(g, &HexTension, &b, 0.0).unwrap();
    let bump = HeightField::from_fn(g, 0.0, |x, y| 0.01 * (PI * x).sin() * (2.0 * PI * y).cos());
    let start = HeightField { values: a.field.values.iter().zip(&bump.values).map(|(p, q)| p + q).collect(), ..a.field.clone() };
    let opts = SolverOptions::default();
    let c = minimize_action_with(g, &HexTension, &b, 0.0, &opts, Some(&start)).unwrap();
    assert!(c.converged);
    assert!(a.field.max_abs_diff(&c.field) < 1e-8);
}

#[test]
fn boundary_data_is_matched() {
    let (g, b) = smooth_hex_problem(20);
    let sol = minimize_action(g, &HexTension, &b, 0.0).unwrap();
    let got = BoundaryData::of_field(&sol.field);
    for (x, y) in got.left.iter().zip(&b.left).chain(got.right.iter().zip(&b.right)) {
        assert!((x - y).abs() < 1e-12);
    }
    assert_eq!(sol.field.get(0, 0), 0.0);
}

#[test]
fn residual_vanishes_on_affine_fields() {
    let g = CylinderGrid::new(1.0, 1.0, 9, 9).unwrap();
    let hf = HeightField::affine(g, 0.3, 0.4);
    assert!(el_residual(&hf, &HexTension).unwrap().max_abs() < 1e-10);
    assert!(ff_el_residual(&hf, 0.7).unwrap().max_abs() < 1e-10);
    assert!(hex_el_residual(&hf).unwrap().max_abs() < 1e-10);
}

#[test]
fn residual_is_second_order() {
    let res = |n: usize| {
        let (g, b) = smooth_hex_problem(n);
        let sol = minimize_action(g, &HexTension, &b, 0.0).unwrap();
        let mask = facet_mask(&sol.field, &HexTension, 1e-3);
        assert!(mask.iter().all(|m| !m));
        el_residual(&sol.field, &HexTension).unwrap().max_abs_excluding(&mask)
    };
    let (r64, r128) = (res(64), res(128));
    assert!(r64 / r128 >= 3.5, "{r64} {r128}");
}

#[test]
fn ff_residual_forms_agree() {
    let g = CylinderGrid::new(1.0, 1.0, 12, 12).unwrap();
    let hf = wavy(g, 0.45, 0.3, 0.03);
    for &u in &[0.3, PI / 4.0, 1.2] {
        let ff = FreeFermionTension::new(u).unwrap();
        let generic = el_residual(&hf, &ff).unwrap();
        let three = ff_el_residual(&hf, u).unwrap();
        for i in 1..g.nx - 1 {
            for j in 0..g.ny {
                let d = derivatives(&hf, i, j);
                let scaled = generic.get(i, j) * ff_el_normalization(d.hx, d.hy, u);
                assert!((scaled - three.get(i, j)).abs() < 1e-8 * (1.0 + three.get(i, j).abs()));
            }
        }
    }
}

#[test]
fn ff_residual_reduces_to_hex_form() {
    let g = CylinderGrid::new(1.0, 1.0, 12, 12).unwrap();
    let hf = wavy(g, 0.3, 0.35, 0.03);
    let ff = ff_el_residual(&hf, PI / 2.0 - 1e-10).unwrap();
    let hex = hex_el_residual(&hf).unwrap();
    for (a, b) in ff.values.iter().zip(&hex.values) {
        assert!((a - b).abs() < 1e-8);
    }
}

#[test]
fn ff_solve_satisfies_three_term_equation() {
    let u = 0.6;
    let ff = FreeFermionTension::new(u).unwrap();
    let res = |n: usize| {
        let g = CylinderGrid::new(1.0, 1.0, n + 1, n).unwrap();
        let b = BoundaryData::from_fn(&g, |y| 0.5 + 0.03 * (2.0 * PI * y).sin(), |y| 0.5 - 0.03 * (2.0 * PI * y).sin());
        let opts = SolverOptions { record_action: false, ..Default::default() };
        let sol = minimize_action_with(g, &ff, &b, 0.0, &opts, None).unwrap();
        assert!(sol.converged);
        ff_el_residual(&sol.field, u).unwrap().max_abs()
    };
    let (a, b) = (res(16), res(32));
    assert!(b < a / 2.5, "{a} {b}");
}

#[test]
fn facets_are_flagged() {
    let g = CylinderGrid::new(1.0, 1.0, 6, 6).unwrap();
    let hf = HeightField::affine(g, 0.5 - 1e-5, 0.5 - 1e-5);
    assert!(facet_mask(&hf, &HexTension, 1e-3).iter().all(|&m| m));
    let hf = HeightField::affine(g, 0.3, 0.3);
    assert!(facet_mask(&hf, &HexTension, 1e-3).iter().all(|&m| !m));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn hex_residual_matches_generic(s0 in 0.2f64..0.4, t0 in 0.2f64..0.4, amp in -0.012f64..0.012) {
        let g = CylinderGrid::new(1.0, 1.0, 10, 10).unwrap();
        let hf = wavy(g, s0, t0, amp);
        let generic = el_residual(&hf, &HexTension).unwrap();
        let hex = hex_el_residual(&hf).unwrap();
        for i in 1..g.nx - 1 {
            for j in 0..g.ny {
                let d = derivatives(&hf, i, j);
                let k = (PI * (1.0 - d.hx - d.hy)).sin() / PI;
                prop_assert!((generic.get(i, j) * k - hex.get(i, j)).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn action_shift_invariant(c in -5.0f64..5.0, amp in -0.03f64..0.03) {
        let g = CylinderGrid::new(1.0, 1.0, 8, 8).unwrap();
        let hf = wavy(g, 0.3, 0.3, amp);
        let a = action(&hf, &HexTension, 0.3).unwrap();
        let b = action(&hf.shifted(c), &HexTension, 0.3).unwrap();
        prop_assert!((a - b).abs() < 1e-12);
    }
}

//! Structural identities of the transformation frame and the partner potential.

use dirac_darboux::darboux::{
    check_conditions, frame, transformed_potential, transformed_potential_matrix, transformed_spinor, potential_diff_integral,
    TransformSpec,
};
use dirac_darboux::potentials::{ModeParams, PotentialSpec};
use dirac_darboux::quadrature::QuadOptions;
use dirac_darboux::specfun::{Cx, I};

fn cases() -> Vec<(PotentialSpec, TransformSpec, Vec<f64>)> {
    let xs = |lo: f64, hi: f64, n: usize| (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect::<Vec<_>>();
    vec![
        (PotentialSpec::lambert(0.0, -1.0, -1.0, 0.0, false).unwrap(), TransformSpec::symmetric(1.25).unwrap(), xs(-3.0, 4.0, 29)),
        (PotentialSpec::lambert(0.3, -0.9, -0.7, 0.2, false).unwrap(), TransformSpec::new(1.1, 1.7).unwrap(), xs(-2.0, 3.0, 21)),
        (PotentialSpec::lambert(0.0, 1.0, -0.25, 0.0, true).unwrap(), TransformSpec::symmetric(17.0 / 8.0).unwrap(), xs(0.35, 3.0, 21)),
        (PotentialSpec::exponential(0.0, 1.0, 0.75, 0.0, false).unwrap(), TransformSpec::symmetric(13.0 / 12.0).unwrap(), xs(-4.0, 4.0, 33)),
        (PotentialSpec::exponential(0.0, 2.0, 1.0, 0.0, false).unwrap(), TransformSpec::new(-17.0 / 4.0, 2.5).unwrap(), xs(-4.0, 4.0, 33)),
        (PotentialSpec::exponential(0.2, 0.7, -0.8, 0.0, true).unwrap(), TransformSpec::new(1.6, 2.3).unwrap(), xs(0.3, 3.0, 21)),
    ]
}

#[test]
fn determinant_from_split_functions() {
    for (spec, t, xs) in cases() {
        for x in xs {
            let f = frame(&spec, 0.0, t, x).unwrap();
            let [u1p, u1m, u2p, u2m] = f.split();
            let d = 2.0 * (u2p * u1m - u1p * u2m);
            assert!((d - f.det_u).norm() <= 1e-12 * f.scale(), "{spec:?} x={x}");
        }
    }
}

#[test]
fn wronskian_derivatives() {
    let h = 1e-4;
    for (spec, t, xs) in cases() {
        let (l0, l1) = (t.lambda0, t.lambda1);
        for &x in &xs[1..xs.len() - 1] {
            let f = frame(&spec, 0.0, t, x).unwrap();
            let p = frame(&spec, 0.0, t, x + h).unwrap();
            let m = frame(&spec, 0.0, t, x - h).unwrap();
            let [u1p, u1m, u2p, u2m] = f.split();
            let idu = I * spec.eval_u0_dx(x).unwrap() * f.det_u;
            let wd1 = (l1 * l1 - l0 * l0) * (u1p - u1m) * (u2p - u2m) + idu;
            let wd2 = (l0 * l0 - l1 * l1) * (u1p + u1m) * (u2p + u2m) + idu;
            let fd1 = (p.wr_lower - m.wr_lower) / (2.0 * h);
            let fd2 = (p.wr_upper - m.wr_upper) / (2.0 * h);
            let scale = wd1.norm().max(wd2.norm()).max(f.scale());
            assert!((fd1 - wd1).norm() < 1e-5 * scale, "{spec:?} x={x}: {fd1} vs {wd1}");
            assert!((fd2 - wd2).norm() < 1e-5 * scale, "{spec:?} x={x}: {fd2} vs {wd2}");
        }
    }
}

#[test]
fn integral_form_matches_wronskian_form() {
    let spec = PotentialSpec::lambert(0.0, -1.0, -1.0, 0.0, false).unwrap();
    let t = TransformSpec::symmetric(1.25).unwrap();
    let opts = QuadOptions::default();
    for i in 0..=20 {
        let x = -3.0 + 0.35 * i as f64;
        let p = transformed_potential(&spec, 0.0, t, x).unwrap();
        let u0 = spec.eval_u0(x).unwrap();
        let diff = potential_diff_integral(&spec, 0.0, t, -4.0, x, opts).unwrap();
        assert!((diff - (p.m11 - u0)).norm() < 1e-6 * (p.m11 - u0).norm().max(1.0), "x={x}: {diff} vs {}", p.m11 - u0);
    }
}

#[test]
fn matrix_route_has_no_offdiagonal() {
    for (spec, t, xs) in cases() {
        for x in xs {
            let m = transformed_potential_matrix(&spec, 0.0, t, x).unwrap();
            let p = transformed_potential(&spec, 0.0, t, x).unwrap();
            assert_eq!(m[0][1], Cx::new(0.0, 0.0));
            assert_eq!(m[1][0], Cx::new(0.0, 0.0));
            let s = p.m11.norm().max(p.m22.norm()).max(1.0);
            assert!((m[0][0] - p.m11).norm() < 1e-8 * s && (m[1][1] - p.m22).norm() < 1e-8 * s, "{spec:?} x={x}");
        }
    }
}

#[test]
fn unequal_parameters_split_the_diagonal() {
    let spec = PotentialSpec::exponential(0.0, 2.0, 1.0, 0.0, false).unwrap();
    let t = TransformSpec::new(-17.0 / 4.0, 2.5).unwrap();
    let gap = (0..=20).map(|i| transformed_potential(&spec, 0.0, t, -4.0 + 0.4 * i as f64).unwrap().diag_gap).fold(0.0, f64::max);
    assert!(gap > 0.1, "{gap}");
}

#[test]
fn reality_violation_shows_up() {
    // |λ| = 0.8 < |V0 + V1| = 1
    let spec = PotentialSpec::lambert(0.0, -1.0, -1.0, 0.0, false).unwrap();
    let t = TransformSpec::symmetric(0.8).unwrap();
    assert!(!check_conditions(&spec, t).reality.holds);
    let worst = (0..=40)
        .filter_map(|i| transformed_potential(&spec, 0.0, t, -4.0 + 0.2 * i as f64).ok())
        .map(|p| p.imag_max)
        .fold(0.0, f64::max);
    assert!(worst > 1e-3, "{worst}");
}

#[test]
fn frame_columns_are_annihilated() {
    for (spec, t, xs) in cases() {
        for &x in &xs {
            let f = frame(&spec, 0.0, t, x).unwrap();
            for l in t.lambdas() {
                let phi = transformed_spinor(&spec, 0.0, t, ModeParams::new(0.0, l), x).unwrap();
                assert!(phi.degenerate);
                let s = f.scale().sqrt() * (1.0 + l.abs());
                assert!(phi.phi_a.norm() < 1e-10 * s && phi.phi_b.norm() < 1e-10 * s, "{spec:?} x={x}");
            }
        }
    }
}

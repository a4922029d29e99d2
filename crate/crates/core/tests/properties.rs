//! Property-based checks of the special functions, potentials and solutions.

use dirac_darboux::darboux::{transformed_potential, TransformSpec};
use dirac_darboux::dirac_core::{psi1, spinor};
use dirac_darboux::potentials::{exp_abbrevs, lambert_abbrevs, ModeParams, PotentialSpec};
use dirac_darboux::specfun::{cpow, hyp1f1, hyp2f1, lambert_w0, lambert_w0_of_exp, pochhammer, Cx, SeriesControl};
use dirac_darboux::verify::{integrate_sse, OdeSetup};
use proptest::prelude::*;

fn close(a: Cx, b: Cx, rel: f64) -> bool {
    (a - b).norm() <= rel * a.norm().max(b.norm()).max(1e-300)
}

fn cx() -> impl Strategy<Value = Cx> {
    (-2.0..2.0f64, -1.0..1.0f64).prop_map(|(r, i)| Cx::new(r, i))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn lambert_inverts(t in -0.3678794411714423..1e6f64) {
        let w = lambert_w0(t).unwrap();
        prop_assert!(w >= -1.0);
        prop_assert!((w * w.exp() - t).abs() <= 1e-12 * t.abs().max(1e-3));
    }

    #[test]
    fn lambert_of_exp_solves_log_form(y in -30.0..700.0f64) {
        let w = lambert_w0_of_exp(y).unwrap();
        prop_assert!((w + w.ln() - y).abs() <= 1e-12 * y.abs().max(1.0));
    }

    #[test]
    fn kummer_transformation(a in cx(), c in (0.3..3.0f64, -0.5..0.5f64), z in cx()) {
        let ctl = SeriesControl::default();
        let c = Cx::new(c.0, c.1);
        let z = 4.0 * z;
        let lhs = hyp1f1(a, c, z, &ctl).unwrap();
        let rhs = z.exp() * hyp1f1(c - a, c, -z, &ctl).unwrap();
        prop_assert!(close(lhs, rhs, 1e-10), "{lhs} vs {rhs}");
    }

    #[test]
    fn euler_transformation(a in cx(), b in cx(), c in 0.5..3.0f64, w in (-0.8..0.8f64, -0.3..0.3f64)) {
        let ctl = SeriesControl::default();
        let (c, w) = (Cx::new(c, 0.0), Cx::new(w.0, w.1));
        let lhs = hyp2f1(a, b, c, w, &ctl).unwrap();
        let rhs = cpow(1.0 - w, c - a - b).unwrap() * hyp2f1(c - a, c - b, c, w, &ctl).unwrap();
        prop_assert!(close(lhs, rhs, 1e-9), "{lhs} vs {rhs}");
    }

    #[test]
    fn terminating_series_are_polynomials(m in 0u64..12, c in 0.5..4.0f64, z in cx()) {
        let ctl = SeriesControl::default();
        let (a, c, z) = (Cx::new(-(m as f64), 0.0), Cx::new(c, 0.0), 3.0 * z);
        let mut sum = Cx::new(0.0, 0.0);
        let mut fact = 1.0;
        for k in 0..=m {
            if k > 0 { fact *= k as f64; }
            sum += pochhammer(a, k) / pochhammer(c, k) * z.powu(k as u32) / fact;
        }
        prop_assert!(close(hyp1f1(a, c, z, &ctl).unwrap(), sum, 1e-11));
    }

    #[test]
    fn mirrored_potentials_are_even(v0 in -1.0..1.0f64, v1 in 0.2..1.5f64, x in 0.05..6.0f64, lam in any::<bool>()) {
        let spec = if lam {
            PotentialSpec::lambert(v0, -v1, -1.0, -1.0, true)
        } else {
            PotentialSpec::exponential(v0, -v1, -1.0, 0.0, true)
        }.unwrap().mirrored().unwrap();
        prop_assert_eq!(spec.eval_u0(x).unwrap(), spec.eval_u0(-x).unwrap());
        prop_assert_eq!(spec.eval_u0_dx(x).unwrap(), -spec.eval_u0_dx(-x).unwrap());
        let mode = ModeParams::new(0.0, 1.3);
        let (p, d) = psi1(&spec, mode, x).unwrap();
        let (pm, dm) = psi1(&spec, mode, -x).unwrap();
        prop_assert_eq!(p, pm);
        prop_assert_eq!(d, -dm);
    }

    #[test]
    fn lambert_abbreviation_relations(v0 in -1.0..1.0f64, v1 in 0.1..1.5f64, s in 0.2..1.5f64, e in -0.5..0.5f64, ky in 0.1..3.0f64) {
        let spec = PotentialSpec::lambert(v0, v1, -s, 0.0, false).unwrap();
        let a = lambert_abbrevs(&spec, ModeParams::new(e, ky)).unwrap();
        let p = s * s * ((a.k0 + a.k1).powu(2) + v1 * v1);
        prop_assert!(close(a.s0 * a.alpha, p, 1e-12));
        prop_assert!(close(a.gamma, -2.0 * s * a.k1, 1e-15));
        prop_assert!(close(a.delta - a.gamma, Cx::new(0.0, 2.0 * s * v1), 1e-12));
    }

    #[test]
    fn exponential_abbreviation_relations(v0 in -1.0..1.0f64, v1 in 0.1..1.5f64, s in -1.5..1.5f64, e in -0.5..0.5f64, ky in 0.1..3.0f64) {
        prop_assume!(s.abs() > 0.1);
        let spec = PotentialSpec::exponential(v0, v1, s, 0.0, false).unwrap();
        let a = exp_abbrevs(&spec, ModeParams::new(e, ky)).unwrap();
        prop_assert!(close(a.gamma, 2.0 * a.alpha1 + 1.0, 1e-15));
        prop_assert!(close(a.alpha + a.beta, 2.0 * (a.alpha1 + a.alpha2), 1e-12));
        prop_assert!(close(a.q + a.alpha1 - a.alpha2, Cx::new(0.0, 2.0 * s * v1), 1e-12));
    }

    #[test]
    fn spinor_assembly(x in -3.0..3.0f64, e in -0.4..0.4f64, ky in 0.3..2.5f64) {
        let spec = PotentialSpec::lambert(0.1, -0.7, -0.8, 0.0, false).unwrap();
        let s = spinor(&spec, ModeParams::new(e, ky), x).unwrap();
        let u0 = spec.eval_u0(x).unwrap();
        let psi2 = (s.psi1_dx + Cx::new(0.0, 1.0) * (u0 - e) * s.psi1) / ky;
        prop_assert!(close(s.psi2, psi2, 1e-12));
        prop_assert_eq!(s.psia, s.psi1 + s.psi2);
        prop_assert_eq!(s.psib, s.psi1 - s.psi2);
    }

    #[test]
    fn evaluation_is_deterministic(x in -3.0..3.0f64, ky in 0.3..2.5f64) {
        let spec = PotentialSpec::lambert(0.2, -0.8, -0.6, 0.1, false).unwrap();
        let a = spinor(&spec, ModeParams::new(0.1, ky), x).unwrap();
        let b = spinor(&spec, ModeParams::new(0.1, ky), x).unwrap();
        prop_assert_eq!(a, b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn symmetric_transform_is_scalar_lambert(v0 in -0.8..0.8f64, v1 in 0.3..1.5f64, s in 0.3..1.5f64, lam in 1.0..3.0f64, x in -2.0..3.0f64) {
        let spec = PotentialSpec::lambert(v0, -v1, -s, 0.0, false).unwrap();
        let t = TransformSpec::symmetric(lam + (v0 - v1).abs()).unwrap();
        let p = transformed_potential(&spec, 0.0, t, x);
        prop_assume!(p.is_ok());
        let p = p.unwrap();
        prop_assert!(p.diag_gap < 1e-8 * p.m11.norm().max(1.0), "gap {}", p.diag_gap);
    }

    #[test]
    fn symmetric_transform_is_scalar_exponential(v0 in -0.8..0.8f64, v1 in 0.3..1.5f64, s in 0.3..1.5f64, lam in 0.2..3.0f64, x in 0.3..3.0f64) {
        let spec = PotentialSpec::exponential(v0, v1, -s, 0.0, true).unwrap();
        let t = TransformSpec::symmetric(lam + v0.abs() + v1).unwrap();
        let p = transformed_potential(&spec, 0.0, t, x);
        prop_assume!(p.is_ok());
        let p = p.unwrap();
        prop_assert!(p.diag_gap < 1e-8 * p.m11.norm().max(1.0), "gap {}", p.diag_gap);
    }

    #[test]
    fn closed_form_solves_the_equation(v0 in -0.8..0.8f64, v1 in 0.3..1.5f64, s in 0.4..1.5f64, e in -0.3..0.3f64, ky in 0.3..2.5f64) {
        let spec = PotentialSpec::lambert(v0, v1, -s, 0.0, false).unwrap();
        let mode = ModeParams::new(e, ky);
        let run = integrate_sse(&spec, mode, 1.0, OdeSetup::new(-1.5, 1.5, 1e-12)).unwrap();
        let (exact, _) = psi1(&spec, mode, 1.5).unwrap();
        prop_assert!(close(run.end.0, exact, 1e-6), "{} vs {exact}", run.end.0);
    }

    #[test]
    fn closed_form_solves_the_equation_exponential(v0 in -0.8..0.8f64, v1 in 0.3..1.5f64, s in 0.4..1.5f64, e in -0.3..0.3f64, ky in 0.3..2.5f64) {
        let spec = PotentialSpec::exponential(v0, v1, -s, 0.0, true).unwrap();
        let mode = ModeParams::new(e, ky);
        let run = integrate_sse(&spec, mode, 1.0, OdeSetup::new(0.5, 3.0, 1e-12)).unwrap();
        let (exact, _) = psi1(&spec, mode, 3.0).unwrap();
        prop_assert!(close(run.end.0, exact, 1e-6), "{} vs {exact}", run.end.0);
    }
}

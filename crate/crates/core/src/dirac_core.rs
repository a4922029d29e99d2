//! Closed-form scalar-channel solutions Ψ1, Ψ2 and the spinor (Ψa, Ψb),
//! plus finite-difference residuals of the decoupled second-order equations
//!
//!   Ψ1'' + {(u0−E)² − k² + i u0'} Ψ1 = 0,   Ψ2'' + {(u0−E)² − k² − i u0'} Ψ2 = 0.

use crate::error::{Error, Result};
use crate::potentials::{exp_abbrevs, lambert_kernel, Arg, Family, ModeParams, PotentialSpec};
use crate::specfun::{
    cpow, hyp0f1, hyp0f1_regularized, hyp1f1_path, hyp1f1_regularized, hyp2f1_path, nonpositive_int,
    pochhammer, Cx, SeriesControl, SeriesPath, I,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinorSample {
    pub x: f64,
    pub psi1: Cx,
    pub psi1_dx: Cx,
    pub psi2: Cx,
    pub psi2_dx: Cx,
    pub psia: Cx,
    pub psib: Cx,
}

impl SpinorSample {
    pub fn psia_dx(&self) -> Cx {
        self.psi1_dx + self.psi2_dx
    }

    pub fn psib_dx(&self) -> Cx {
        self.psi1_dx - self.psi2_dx
    }

    /// |Ψ1|² + |Ψ2|².
    pub fn density(&self) -> f64 {
        self.psi1.norm_sqr() + self.psi2.norm_sqr()
    }
}

struct Psi1Base {
    value: Cx,
    /// d/dx̃, i.e. before the mirror sign is applied.
    dx: Cx,
    sign: f64,
    paths: Vec<SeriesPath>,
}

fn mirror_sign(spec: &PotentialSpec, x: f64) -> f64 {
    if spec.mirror && x < 0.0 {
        -1.0
    } else {
        1.0
    }
}

fn psi1_base(spec: &PotentialSpec, mode: ModeParams, x: f64) -> Result<Psi1Base> {
    let sign = mirror_sign(spec, x);
    let mut arg = spec.argument(x)?;
    arg.dz *= sign;
    let ctl = SeriesControl::default();
    let (value, dz_val, paths) = match spec.family {
        Family::LambertW => lambert_psi1(spec, mode, arg, &ctl)?,
        Family::InvSqrtExp => exp_psi1(spec, mode, arg, &ctl)?,
    };
    Ok(Psi1Base { value, dx: dz_val * arg.dz, sign, paths })
}

// Ψ1 = z^{γ/2} e^{−s0 z/2} [F'(z) − (δ+s0)/2 F(z)] with F(z) = ₁F₁(α; γ; s0 z).
// Returns (Ψ1, dΨ1/dz, series paths). Integer γ ≤ 0 uses ₁F₁/Γ(γ); K0 = 0
// uses the confluent limit ₁F₁(α; γ; s0 z) → ₀F₁(; γ; P z), P = s0 α.
fn lambert_psi1(spec: &PotentialSpec, mode: ModeParams, arg: Arg, ctl: &SeriesControl) -> Result<(Cx, Cx, Vec<SeriesPath>)> {
    let k = lambert_kernel(spec, mode)?;
    let z = Cx::new(arg.z, 0.0);
    let regular = nonpositive_int(k.gamma).is_some();
    let mut g = [Cx::new(0.0, 0.0); 3];
    let mut paths = Vec::with_capacity(3);
    if k.k0.norm() < 1e-13 {
        let pz = k.p * z;
        for (j, gj) in g.iter_mut().enumerate() {
            let c = k.gamma + j as f64;
            let pj = k.p.powu(j as u32);
            *gj = if regular {
                pj * hyp0f1_regularized(c, pz, ctl)?
            } else {
                pj / pochhammer(k.gamma, j as u64) * hyp0f1(c, pz, ctl)?
            };
            paths.push(SeriesPath::Series);
        }
    } else {
        let alpha = k.p / k.s0;
        let zeta = k.s0 * z;
        for (j, gj) in g.iter_mut().enumerate() {
            let a = alpha + j as f64;
            let c = k.gamma + j as f64;
            let sj = k.s0.powu(j as u32) * pochhammer(alpha, j as u64);
            let (m, path) = if regular {
                hyp1f1_regularized(a, c, zeta, ctl)?
            } else {
                let (m, path) = hyp1f1_path(a, c, zeta, ctl)?;
                (m / pochhammer(k.gamma, j as u64), path)
            };
            *gj = sj * m;
            paths.push(path);
        }
    }
    let c1 = (k.delta + k.s0) / 2.0;
    let h = g[1] - c1 * g[0];
    let hp = g[2] - c1 * g[1];
    let pre = cpow(z, k.gamma / 2.0)? * (-k.s0 * z / 2.0).exp();
    let value = pre * h;
    let dpre = pre * (k.gamma / (2.0 * z) - k.s0 / 2.0);
    Ok((value, dpre * h + pre * hp, paths))
}

// Ψ1 = (z+1)^{α1}(z−1)^{α2} { A(z) ₂F₁(α, β+1; γ; w) + ₂F₁(α−1, β+1; γ−1; w) },
// A(z) = [(q + 1 − α) + (β − α + 1) z]/(2γ − 2), w = (z+1)/2.
fn exp_psi1(spec: &PotentialSpec, mode: ModeParams, arg: Arg, ctl: &SeriesControl) -> Result<(Cx, Cx, Vec<SeriesPath>)> {
    let ab = exp_abbrevs(spec, mode)?;
    let (a, b, c, q) = (ab.alpha, ab.beta, ab.gamma, ab.q);
    let z = Cx::new(arg.z, 0.0);
    let w = (z + 1.0) / 2.0;
    let lin = (q + 1.0 - a) + (b - a + 1.0) * z;
    let den = 2.0 * c - 2.0;
    let (br, br_dz, paths) = if den.norm() < 1e-10 {
        // γ → 1: both terms have simple poles; (γ−1)·{…} has the finite limit
        // lin/2·F(α,β+1;1;w) + (α−1)(β+1) w F(α,β+2;2;w).
        let (f1, p1) = hyp2f1_path(a, b + 1.0, Cx::new(1.0, 0.0), w, ctl)?;
        let (g, p2) = hyp2f1_path(a, b + 2.0, Cx::new(2.0, 0.0), w, ctl)?;
        let f1p = 0.5 * a * (b + 1.0) * hyp2f1_path(a + 1.0, b + 2.0, Cx::new(2.0, 0.0), w, ctl)?.0;
        let gp = 0.5 * a * (b + 2.0) / 2.0 * hyp2f1_path(a + 1.0, b + 3.0, Cx::new(3.0, 0.0), w, ctl)?.0;
        let m = (a - 1.0) * (b + 1.0);
        let br = 0.5 * lin * f1 + m * w * g;
        let br_dz = 0.5 * (b - a + 1.0) * f1 + 0.5 * lin * f1p + m * (0.5 * g + w * gp);
        (br, br_dz, vec![p1, p2])
    } else {
        let (f1, p1) = hyp2f1_path(a, b + 1.0, c, w, ctl)?;
        let (f2, p2) = hyp2f1_path(a - 1.0, b + 1.0, c - 1.0, w, ctl)?;
        // d/dz = (1/2) d/dw
        let f1p = 0.5 * a * (b + 1.0) / c * hyp2f1_path(a + 1.0, b + 2.0, c + 1.0, w, ctl)?.0;
        let f2p = 0.5 * (a - 1.0) * (b + 1.0) / (c - 1.0) * hyp2f1_path(a, b + 2.0, c, w, ctl)?.0;
        (lin / den * f1 + f2, (b - a + 1.0) / den * f1 + lin / den * f1p + f2p, vec![p1, p2])
    };
    let zm1 = Cx::new(arg.zm1, 0.0);
    let pre = cpow(z + 1.0, ab.alpha1)? * cpow(zm1, ab.alpha2)?;
    let dpre = pre * (ab.alpha1 / (z + 1.0) + ab.alpha2 / zm1);
    Ok((pre * br, dpre * br + pre * br_dz, paths))
}

/// Ψ1 and its x-derivative.
pub fn psi1(spec: &PotentialSpec, mode: ModeParams, x: f64) -> Result<(Cx, Cx)> {
    let b = psi1_base(spec, mode, x)?;
    Ok((b.value, b.sign * b.dx))
}

/// Evaluation paths of the hypergeometric factors in Ψ1 at x.
pub fn psi1_paths(spec: &PotentialSpec, mode: ModeParams, x: f64) -> Result<Vec<SeriesPath>> {
    Ok(psi1_base(spec, mode, x)?.paths)
}

/// Ψ2 = [Ψ1' + i(u0−E)Ψ1]/k_y and Ψ2' = [−((u0−E)² − k_y²)Ψ1 + i(u0−E)Ψ1']/k_y
/// (Ψ1'' eliminated with the Ψ1 equation).
pub fn psi2(spec: &PotentialSpec, mode: ModeParams, x: f64, psi1_val: Cx, psi1_dx: Cx) -> Result<(Cx, Cx)> {
    if mode.ky == 0.0 {
        return Err(Error::ZeroWavenumber);
    }
    let sign = mirror_sign(spec, x);
    let base_dx = sign * psi1_dx;
    let v = spec.eval_u0(x)? - mode.e;
    let k = mode.ky;
    let val = (base_dx + I * v * psi1_val) / k;
    let dx = (-(v * v - k * k) * psi1_val + I * v * base_dx) / k;
    Ok((val, sign * dx))
}

pub fn spinor(spec: &PotentialSpec, mode: ModeParams, x: f64) -> Result<SpinorSample> {
    let (p1, d1) = psi1(spec, mode, x)?;
    let (p2, d2) = psi2(spec, mode, x, p1, d1)?;
    Ok(SpinorSample { x, psi1: p1, psi1_dx: d1, psi2: p2, psi2_dx: d2, psia: p1 + p2, psib: p1 - p2 })
}

/// Max over interior points of |f'' + {(u0−E)² − k_y² + sign·i u0'} f| / max(1, |f|),
/// with f'' from the 5-point central stencil.
pub fn sse_residual(spec: &PotentialSpec, mode: ModeParams, f: &[(f64, Cx)], sign: f64) -> Result<f64> {
    if sign != 1.0 && sign != -1.0 {
        return Err(Error::Grid(format!("sign must be ±1, got {sign}")));
    }
    let n = f.len();
    if n < 9 {
        return Err(Error::Grid(format!("need at least 5 interior points (9 samples), got {n}")));
    }
    let h = (f[n - 1].0 - f[0].0) / (n - 1) as f64;
    if !(h > 0.0) {
        return Err(Error::Grid("grid must be increasing".into()));
    }
    for (i, w) in f.windows(2).enumerate() {
        if ((w[1].0 - w[0].0) - h).abs() > 1e-6 * h {
            return Err(Error::Grid(format!("non-uniform spacing at index {i}")));
        }
    }
    let k2 = mode.ky * mode.ky;
    let mut worst: f64 = 0.0;
    for i in 2..n - 2 {
        let (x, fi) = f[i];
        let d2 = (-f[i - 2].1 + 16.0 * f[i - 1].1 - 30.0 * fi + 16.0 * f[i + 1].1 - f[i + 2].1) / (12.0 * h * h);
        let v = spec.eval_u0(x)? - mode.e;
        let up = spec.eval_u0_dx(x)?;
        let r = d2 + (v * v - k2 + sign * I * up) * fi;
        worst = worst.max(r.norm() / fi.norm().max(1.0));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(spec: &PotentialSpec, mode: ModeParams, x0: f64, h: f64, n: usize, second: bool) -> Vec<(f64, Cx)> {
        (0..n)
            .map(|i| {
                let x = x0 + i as f64 * h;
                let s = spinor(spec, mode, x).unwrap();
                (x, if second { s.psi2 } else { s.psi1 })
            })
            .collect()
    }

    #[test]
    fn lambert_residuals() {
        let spec = PotentialSpec::lambert(0.3, -0.8, -0.6, 0.1, false).unwrap();
        let mode = ModeParams::new(0.2, 0.9);
        let f = grid(&spec, mode, -0.5, 1e-3, 21, false);
        assert!(sse_residual(&spec, mode, &f, 1.0).unwrap() < 1e-5);
        let g = grid(&spec, mode, -0.5, 1e-3, 21, true);
        assert!(sse_residual(&spec, mode, &g, -1.0).unwrap() < 1e-5);
        assert!(sse_residual(&spec, mode, &g, 1.0).unwrap() > 1e-3);
    }

    #[test]
    fn exponential_residuals_singular() {
        let spec = PotentialSpec::exponential(0.2, 0.7, -0.8, 0.0, true).unwrap();
        let mode = ModeParams::new(0.1, 1.7);
        for &x0 in &[0.3, 1.0, 2.5] {
            let f = grid(&spec, mode, x0, 1e-3, 15, false);
            assert!(sse_residual(&spec, mode, &f, 1.0).unwrap() < 1e-5, "x0={x0}");
            let g = grid(&spec, mode, x0, 1e-3, 15, true);
            assert!(sse_residual(&spec, mode, &g, -1.0).unwrap() < 1e-5);
        }
    }

    #[test]
    fn exponential_gamma_one_limit() {
        // k_y = |E − V0 + V1| makes α1 = 0, γ = 1.
        for (spec, mode) in [
            (PotentialSpec::exponential(0.25, 0.75, -0.8, 0.0, true).unwrap(), ModeParams::new(0.0, 0.5)),
        ] {
            assert!((exp_abbrevs(&spec, mode).unwrap().gamma - 1.0).norm() < 1e-12);
            for &x0 in &[0.4, 1.2] {
                let f = grid(&spec, mode, x0, 1e-3, 15, false);
                assert!(f.iter().all(|p| p.1.norm() > 1e-8));
                assert!(sse_residual(&spec, mode, &f, 1.0).unwrap() < 1e-5, "{spec:?} x0={x0}");
                let g = grid(&spec, mode, x0, 1e-3, 15, true);
                assert!(sse_residual(&spec, mode, &g, -1.0).unwrap() < 1e-5);
            }
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let cases = [
            (PotentialSpec::lambert(0.0, 1.0, -1.0, 0.0, false).unwrap(), ModeParams::new(0.0, 1.25), 0.4),
            (PotentialSpec::lambert(0.0, 1.0, -0.25, 0.0, true).unwrap(), ModeParams::new(0.0, 17.0 / 8.0), 0.9),
            (PotentialSpec::exponential(0.0, 2.0, 1.0, 0.0, false).unwrap(), ModeParams::new(0.0, 2.5), -0.3),
            (PotentialSpec::exponential(0.0, -1.0, -1.0, 0.0, true).unwrap().mirrored().unwrap(), ModeParams::new(0.0, 2.5), -0.7),
        ];
        for (spec, mode, x) in cases {
            let h = 1e-5;
            let s = spinor(&spec, mode, x).unwrap();
            let p = spinor(&spec, mode, x + h).unwrap();
            let m = spinor(&spec, mode, x - h).unwrap();
            let fd1 = (p.psi1 - m.psi1) / (2.0 * h);
            let fd2 = (p.psi2 - m.psi2) / (2.0 * h);
            assert!((fd1 - s.psi1_dx).norm() < 1e-7 * s.psi1_dx.norm().max(1.0), "{spec:?}");
            assert!((fd2 - s.psi2_dx).norm() < 1e-7 * s.psi2_dx.norm().max(1.0), "{spec:?}");
        }
    }

    #[test]
    fn spinor_assembly_exact() {
        let spec = PotentialSpec::lambert(0.5, -1.0, -0.25, 0.0, false).unwrap();
        let s = spinor(&spec, ModeParams::new(0.0, 0.7), 0.3).unwrap();
        assert_eq!(s.psia, s.psi1 + s.psi2);
        assert_eq!(s.psib, s.psi1 - s.psi2);
        let scale = s.psi1.norm() + s.psi2.norm();
        assert!((s.psia + s.psib - 2.0 * s.psi1).norm() <= 4.0 * f64::EPSILON * scale);
        assert!((s.psia - s.psib - 2.0 * s.psi2).norm() <= 4.0 * f64::EPSILON * scale);
    }

    #[test]
    fn zero_inputs() {
        let spec = PotentialSpec::lambert(0.5, -1.0, -0.25, 0.0, false).unwrap();
        let z = Cx::new(0.0, 0.0);
        assert_eq!(psi2(&spec, ModeParams::new(0.0, 0.7), 0.3, z, z).unwrap(), (z, z));
        assert!(matches!(psi2(&spec, ModeParams::new(0.0, 0.0), 0.3, z, z), Err(Error::ZeroWavenumber)));
        let f: Vec<(f64, Cx)> = (0..9).map(|i| (0.1 * i as f64, z)).collect();
        assert_eq!(sse_residual(&spec, ModeParams::new(0.0, 0.7), &f, 1.0).unwrap(), 0.0);
        assert!(matches!(sse_residual(&spec, ModeParams::new(0.0, 0.7), &f[..8], 1.0), Err(Error::Grid(_))));
    }

    #[test]
    fn elementary_case_terminates() {
        let spec = PotentialSpec::lambert(0.0, 1.0, -1.0, 0.0, false).unwrap();
        let paths = psi1_paths(&spec, ModeParams::new(0.0, 1.25), 0.2).unwrap();
        assert_eq!(paths[0], SeriesPath::Terminating);
        let spec = PotentialSpec::exponential(0.0, 1.0, 0.75, 0.0, false).unwrap();
        let paths = psi1_paths(&spec, ModeParams::new(0.0, 13.0 / 12.0), 0.2).unwrap();
        assert!(paths.iter().all(|p| p.terminates()));
    }

    #[test]
    fn ky_sign_leaves_psi1_unchanged() {
        let spec = PotentialSpec::exponential(0.1, 0.6, 0.8, 0.0, true).unwrap();
        let a = psi1(&spec, ModeParams::new(0.0, 1.3), -0.4).unwrap();
        let b = psi1(&spec, ModeParams::new(0.0, -1.3), -0.4).unwrap();
        assert_eq!(a, b);
    }
}

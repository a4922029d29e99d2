//! First-order matrix Darboux transformation built from two spinor solutions
//! at transverse wavenumbers λ0, λ1:
//!
//!   u = [[Ψa(λ0), Ψa(λ1)], [Ψb(λ0), Ψb(λ1)]],
//!   Φ = u (u⁻¹ Ψ)ₓ = Ψₓ − u′u⁻¹ Ψ,
//!   U1 = U0 − σ2 [σ3, u′u⁻¹] = U0 + (2i/det u) diag(W[u21,u22], W[u12,u11]),
//!
//! with the Wronskian W[f,g] = f g′ − f′ g.
//!
//! For mirrored potentials every output is evaluated at |x|.

use crate::dirac_core::spinor;
use crate::elementary::{condition_value, elementary_condition_at, ConditionId};
use crate::error::{Error, Result};
use crate::potentials::{Family, ModeParams, PotentialSpec};
use crate::quadrature::{integrate, QuadOptions};
use crate::specfun::{Cx, I};
use serde::{Deserialize, Serialize};

/// Frames with |det u| below this fraction of max|u_ij|² are singular.
pub const DET_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransformSpec {
    pub lambda0: f64,
    pub lambda1: f64,
}

impl TransformSpec {
    pub fn new(lambda0: f64, lambda1: f64) -> Result<Self> {
        if !lambda0.is_finite() || !lambda1.is_finite() {
            return Err(Error::InvalidSpec("transformation parameters must be finite".into()));
        }
        if lambda0 == lambda1 {
            return Err(Error::InvalidSpec("lambda0 = lambda1 makes the transformation matrix singular".into()));
        }
        Ok(TransformSpec { lambda0, lambda1 })
    }

    /// (−λ, λ).
    pub fn symmetric(lambda: f64) -> Result<Self> {
        Self::new(-lambda, lambda)
    }

    pub fn is_symmetric(&self) -> bool {
        self.lambda0 == -self.lambda1
    }

    pub fn lambdas(&self) -> [f64; 2] {
        [self.lambda0, self.lambda1]
    }
}

pub type Mat2 = [[Cx; 2]; 2];

fn mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut c = [[Cx::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

fn det(a: &Mat2) -> Cx {
    a[0][0] * a[1][1] - a[0][1] * a[1][0]
}

fn inverse(a: &Mat2) -> Mat2 {
    let d = det(a);
    [[a[1][1] / d, -a[0][1] / d], [-a[1][0] / d, a[0][0] / d]]
}

fn wronskian(f: Cx, fp: Cx, g: Cx, gp: Cx) -> Cx {
    f * gp - fp * g
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformFrame {
    pub x: f64,
    pub u: Mat2,
    pub u_dx: Mat2,
    pub det_u: Cx,
    /// W[u21, u22]
    pub wr_lower: Cx,
    /// W[u12, u11]
    pub wr_upper: Cx,
}

impl TransformFrame {
    pub fn scale(&self) -> f64 {
        self.u.iter().flatten().map(|v| v.norm_sqr()).fold(0.0, f64::max)
    }

    /// (u_{1,+}, u_{1,−}, u_{2,+}, u_{2,−}): the Ψ1/Ψ2 parts of the two columns.
    pub fn split(&self) -> [Cx; 4] {
        let u = &self.u;
        [(u[0][0] + u[1][0]) / 2.0, (u[0][0] - u[1][0]) / 2.0, (u[0][1] + u[1][1]) / 2.0, (u[0][1] - u[1][1]) / 2.0]
    }

    /// u′u⁻¹
    pub fn log_derivative(&self) -> Mat2 {
        mul(&self.u_dx, &inverse(&self.u))
    }
}

fn eval_point(spec: &PotentialSpec, x: f64) -> f64 {
    if spec.mirror {
        x.abs()
    } else {
        x
    }
}

/// Frame without the determinant floor check.
pub fn frame_unchecked(spec: &PotentialSpec, e: f64, t: TransformSpec, x: f64) -> Result<TransformFrame> {
    let c0 = spinor(spec, ModeParams::new(e, t.lambda0), x)?;
    let c1 = spinor(spec, ModeParams::new(e, t.lambda1), x)?;
    let u = [[c0.psia, c1.psia], [c0.psib, c1.psib]];
    let u_dx = [[c0.psia_dx(), c1.psia_dx()], [c0.psib_dx(), c1.psib_dx()]];
    Ok(TransformFrame {
        x,
        u,
        u_dx,
        det_u: det(&u),
        wr_lower: wronskian(u[1][0], u_dx[1][0], u[1][1], u_dx[1][1]),
        wr_upper: wronskian(u[0][1], u_dx[0][1], u[0][0], u_dx[0][0]),
    })
}

pub fn frame(spec: &PotentialSpec, e: f64, t: TransformSpec, x: f64) -> Result<TransformFrame> {
    let f = frame_unchecked(spec, e, t, x)?;
    let d = f.det_u.norm();
    if !(d >= DET_FLOOR * f.scale()) {
        return Err(Error::SingularFrame { x, det: d });
    }
    Ok(f)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialMatrixSample {
    pub x: f64,
    pub m11: Cx,
    pub m22: Cx,
    pub offdiag_max: f64,
    pub imag_max: f64,
    pub diag_gap: f64,
}

pub fn transformed_potential(spec: &PotentialSpec, e: f64, t: TransformSpec, x: f64) -> Result<PotentialMatrixSample> {
    let xe = eval_point(spec, x);
    let f = frame(spec, e, t, xe)?;
    let u0 = spec.eval_u0(xe)?;
    let pre = 2.0 * I / f.det_u;
    let m11 = u0 + pre * f.wr_lower;
    let m22 = u0 + pre * f.wr_upper;
    let full = commutator_term(&f);
    Ok(PotentialMatrixSample {
        x,
        m11,
        m22,
        offdiag_max: full[0][1].norm().max(full[1][0].norm()),
        imag_max: m11.im.abs().max(m22.im.abs()),
        diag_gap: (m11 - m22).norm(),
    })
}

const SIGMA2: Mat2 = [[Cx::new(0.0, 0.0), Cx::new(0.0, -1.0)], [Cx::new(0.0, 1.0), Cx::new(0.0, 0.0)]];
const SIGMA3: Mat2 = [[Cx::new(1.0, 0.0), Cx::new(0.0, 0.0)], [Cx::new(0.0, 0.0), Cx::new(-1.0, 0.0)]];

// −σ2 [σ3, u′u⁻¹]
fn commutator_term(f: &TransformFrame) -> Mat2 {
    let a = f.log_derivative();
    let l = mul(&SIGMA3, &a);
    let r = mul(&a, &SIGMA3);
    let mut c = [[Cx::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = l[i][j] - r[i][j];
        }
    }
    let s = mul(&SIGMA2, &c);
    [[-s[0][0], -s[0][1]], [-s[1][0], -s[1][1]]]
}

/// U1 through the matrix product U0 − σ2[σ3, u′u⁻¹] instead of the Wronskians.
pub fn transformed_potential_matrix(spec: &PotentialSpec, e: f64, t: TransformSpec, x: f64) -> Result<Mat2> {
    let xe = eval_point(spec, x);
    let f = frame(spec, e, t, xe)?;
    let u0 = spec.eval_u0(xe)?;
    let mut m = commutator_term(&f);
    m[0][0] += u0;
    m[1][1] += u0;
    Ok(m)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformedSpinor {
    pub phi_a: Cx,
    pub phi_b: Cx,
    /// k_y equals one of the transformation parameters: Φ is (numerically) zero.
    pub degenerate: bool,
}

impl TransformedSpinor {
    /// (|Φa|² + |Φb|²)/2, on the same footing as |Ψ1|² + |Ψ2|².
    pub fn density(&self) -> f64 {
        0.5 * (self.phi_a.norm_sqr() + self.phi_b.norm_sqr())
    }
}

pub fn transformed_spinor(spec: &PotentialSpec, e: f64, t: TransformSpec, mode: ModeParams, x: f64) -> Result<TransformedSpinor> {
    if mode.e != e {
        return Err(Error::InvalidSpec(format!("mode energy {} differs from transformation energy {e}", mode.e)));
    }
    let xe = eval_point(spec, x);
    let f = frame(spec, e, t, xe)?;
    let s = spinor(spec, mode, xe)?;
    let a = f.log_derivative();
    let phi_a = s.psia_dx() - (a[0][0] * s.psia + a[0][1] * s.psib);
    let phi_b = s.psib_dx() - (a[1][0] * s.psia + a[1][1] * s.psib);
    Ok(TransformedSpinor { phi_a, phi_b, degenerate: t.lambdas().contains(&mode.ky) })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionReport {
    pub reality: Verdict,
    pub diagonal: bool,
    pub elementary: bool,
}

fn solves_alpha_or_beta(spec: &PotentialSpec, k: f64) -> bool {
    [ConditionId::ExpAlpha, ConditionId::ExpBeta].iter().any(|&c| {
        condition_value(spec, c, k).map_or(false, |v| {
            let n = -v;
            (n - n.round()).abs() < 1e-9 && n.round() >= c.n_min() as f64
        })
    })
}

/// Reality / diagonality / elementarity of U1 from the parameter conditions (E = 0).
pub fn check_conditions(spec: &PotentialSpec, t: TransformSpec) -> ConditionReport {
    let l = t.lambdas();
    let reality = match (spec.family, spec.singular) {
        (Family::LambertW, singular) => {
            let b = (spec.v0 + spec.v1).abs();
            let mut fails = Vec::new();
            if !l.iter().all(|x| x.abs() > b) {
                fails.push(format!("need |λ0|, |λ1| > |V0+V1| = {b}"));
            }
            if singular && !(spec.x1 - 0.5 < spec.sigma && spec.sigma < 0.0) {
                fails.push(format!("need x1 − 1/2 < σ < 0 (x1 = {}, σ = {})", spec.x1, spec.sigma));
            }
            verdict(fails)
        }
        (Family::InvSqrtExp, false) => {
            let ok = l.iter().all(|&k| solves_alpha_or_beta(spec, k));
            verdict(if ok { vec![] } else { vec!["λ0, λ1 must both solve the α or β condition".into()] })
        }
        (Family::InvSqrtExp, true) => {
            let b = spec.v0.abs() + spec.v1.abs();
            let mut fails = Vec::new();
            if !l.iter().all(|x| x.abs() > b) {
                fails.push(format!("need |λ0|, |λ1| > |V0|+|V1| = {b}"));
            }
            if !(spec.sigma < 0.0) {
                fails.push(format!("need σ < 0 (σ = {})", spec.sigma));
            }
            verdict(fails)
        }
    };
    ConditionReport {
        reality,
        diagonal: t.is_symmetric(),
        elementary: l.iter().all(|&k| elementary_condition_at(spec, k).is_some()),
    }
}

fn verdict(fails: Vec<String>) -> Verdict {
    if fails.is_empty() {
        Verdict { holds: true, reason: "all reality conditions satisfied".into() }
    } else {
        Verdict { holds: false, reason: fails.join("; ") }
    }
}

/// U1 − U0 (either diagonal entry) for λ0 = −λ1 via
/// −(2/det u(x)) [∫_{x_lo}^{x} u0′ det u dt + C], with C matched to the
/// Wronskian form at x_lo.
pub fn potential_diff_integral(spec: &PotentialSpec, e: f64, t: TransformSpec, x_lo: f64, x: f64, opts: QuadOptions) -> Result<Cx> {
    if !t.is_symmetric() {
        return Err(Error::InvalidSpec("integral form needs lambda0 = -lambda1".into()));
    }
    let (a, b) = (eval_point(spec, x_lo), eval_point(spec, x));
    let f_lo = frame(spec, e, t, a)?;
    let f_x = frame(spec, e, t, b)?;
    // At x_lo: U1 − U0 = (2i/det) W = −(2/det) C.
    let c = -I * f_lo.wr_lower;
    let (integral, _) = integrate(
        |s| {
            let fr = frame_unchecked(spec, e, t, s)?;
            Ok(spec.eval_u0_dx(s)? * fr.det_u)
        },
        a,
        b,
        opts,
    )?;
    Ok(-2.0 / f_x.det_u * (integral + c))
}

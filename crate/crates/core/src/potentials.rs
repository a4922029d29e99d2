//! The two potential families, their domains, and the abbreviation bundles
//! that feed the closed-form solutions.
//!
//! Lambert-W family: u0 = V0 + V1/(1 + W0(±e^{(x̃−x1)/σ})).
//! Exponential family: u0 = V0 + V1/√(1 ± e^{(x̃−x1)/σ}).
//! The minus sign is the "singular" member (complex shift x0 = x1 + iπσ),
//! and x̃ = |x| for mirrored specs.

use crate::error::{Error, Result};
use crate::specfun::{csqrt_re, lambert_w0_branch, lambert_w0_of_exp, Cx, I};
use serde::{Deserialize, Serialize};

/// Evaluations closer than this to a domain endpoint are refused.
pub const ENDPOINT_GUARD: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    #[serde(alias = "lambert", alias = "lambert-w")]
    LambertW,
    #[serde(alias = "exponential", alias = "inv-sqrt-exp")]
    InvSqrtExp,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialSpec {
    pub family: Family,
    #[serde(rename = "V0")]
    pub v0: f64,
    #[serde(rename = "V1")]
    pub v1: f64,
    pub sigma: f64,
    #[serde(default)]
    pub x1: f64,
    #[serde(default)]
    pub singular: bool,
    #[serde(default)]
    pub mirror: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeParams {
    #[serde(rename = "E")]
    pub e: f64,
    pub ky: f64,
}

impl ModeParams {
    pub fn new(e: f64, ky: f64) -> Self {
        ModeParams { e, ky }
    }
}

impl PotentialSpec {
    pub fn new(family: Family, v0: f64, v1: f64, sigma: f64, x1: f64, singular: bool, mirror: bool) -> Result<Self> {
        let s = PotentialSpec { family, v0, v1, sigma, x1, singular, mirror };
        s.validate()?;
        Ok(s)
    }

    pub fn lambert(v0: f64, v1: f64, sigma: f64, x1: f64, singular: bool) -> Result<Self> {
        Self::new(Family::LambertW, v0, v1, sigma, x1, singular, false)
    }

    pub fn exponential(v0: f64, v1: f64, sigma: f64, x1: f64, singular: bool) -> Result<Self> {
        Self::new(Family::InvSqrtExp, v0, v1, sigma, x1, singular, false)
    }

    pub fn mirrored(mut self) -> Result<Self> {
        self.mirror = true;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.v0, self.v1, self.sigma, self.x1].iter().all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidSpec("potential parameters must be finite".into()));
        }
        if self.v1 == 0.0 {
            return Err(Error::InvalidSpec("V1 must be nonzero".into()));
        }
        if self.sigma == 0.0 {
            return Err(Error::InvalidSpec("sigma must be nonzero".into()));
        }
        if self.mirror && !self.singular {
            return Err(Error::InvalidSpec("mirror requires a singular potential".into()));
        }
        Ok(())
    }

    pub fn domain(&self) -> Domain {
        if !self.singular {
            return Domain { lower: f64::NEG_INFINITY, upper: f64::INFINITY, mirror: self.mirror };
        }
        // Lambert: needs −e^{y} ≥ −1/e, i.e. y ≤ −1. Exponential: y < 0.
        let edge = match self.family {
            Family::LambertW => self.x1 - self.sigma,
            Family::InvSqrtExp => self.x1,
        };
        if self.sigma < 0.0 {
            Domain { lower: edge, upper: f64::INFINITY, mirror: self.mirror }
        } else {
            Domain { lower: f64::NEG_INFINITY, upper: edge, mirror: self.mirror }
        }
    }

    /// z(x̃) and dz/dx (already multiplied by sign(x) for mirrored specs).
    pub(crate) fn argument(&self, x: f64) -> Result<Arg> {
        if !x.is_finite() {
            return Err(Error::Domain(format!("x = {x}")));
        }
        let dom = self.domain();
        if !dom.contains(x) {
            return Err(Error::Domain(format!("x = {x} outside {dom} (guard {ENDPOINT_GUARD:e})")));
        }
        let (xt, sign) = if self.mirror { (x.abs(), if x < 0.0 { -1.0 } else { 1.0 }) } else { (x, 1.0) };
        let y = (xt - self.x1) / self.sigma;
        let s = self.sigma;
        let (z, zm1, dz) = match (self.family, self.singular) {
            (Family::LambertW, false) => {
                let z = lambert_w0_of_exp(y)?;
                (z, z - 1.0, z / (s * (1.0 + z)))
            }
            (Family::LambertW, true) => {
                let z = lambert_w0_branch(-(y + 1.0).exp_m1(), -y.exp())?;
                if z <= -1.0 {
                    return Err(Error::Domain(format!("x = {x} at the singular point")));
                }
                (z, z - 1.0, z / (s * (1.0 + z)))
            }
            (Family::InvSqrtExp, false) => {
                if y > 0.0 {
                    // Factor out e^{y/2} so large y does not overflow.
                    let root = (1.0 + (-y).exp()).sqrt();
                    let half = (0.5 * y).exp();
                    let z = half * root;
                    (z, z - 1.0, half / (2.0 * s * root))
                } else {
                    let z = (1.0 + y.exp()).sqrt();
                    (z, y.exp() / (1.0 + z), y.exp() / (2.0 * s * z))
                }
            }
            (Family::InvSqrtExp, true) => {
                let z2 = -y.exp_m1();
                if !(z2 > 0.0) {
                    return Err(Error::Domain(format!("x = {x} at the singular point")));
                }
                let z = z2.sqrt();
                (z, -y.exp() / (1.0 + z), -y.exp() / (2.0 * s * z))
            }
        };
        if !z.is_finite() || !dz.is_finite() {
            return Err(Error::Domain(format!("x = {x}: potential argument not finite")));
        }
        Ok(Arg { z, zm1, dz: sign * dz })
    }

    pub fn eval_u0(&self, x: f64) -> Result<f64> {
        let a = self.argument(x)?;
        Ok(self.u0_from_z(a.z))
    }

    pub fn eval_u0_dx(&self, x: f64) -> Result<f64> {
        let a = self.argument(x)?;
        Ok(self.u0_dx_from(a))
    }

    pub(crate) fn u0_from_z(&self, z: f64) -> f64 {
        match self.family {
            Family::LambertW => self.v0 + self.v1 / (1.0 + z),
            Family::InvSqrtExp => self.v0 + self.v1 / z,
        }
    }

    pub(crate) fn u0_dx_from(&self, a: Arg) -> f64 {
        match self.family {
            Family::LambertW => -self.v1 * a.dz / ((1.0 + a.z) * (1.0 + a.z)),
            Family::InvSqrtExp => -self.v1 * a.dz / (a.z * a.z),
        }
    }

    fn require(&self, family: Family) -> Result<()> {
        if self.family != family {
            return Err(Error::InvalidSpec(format!("expected a {family:?} potential, got {:?}", self.family)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Arg {
    pub z: f64,
    /// z − 1 without cancellation (the exponential kernel needs it as z → 1).
    pub zm1: f64,
    pub dz: f64,
}

/// Open interval for x̃ (x̃ = |x| when `mirror`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    pub lower: f64,
    pub upper: f64,
    pub mirror: bool,
}

impl Domain {
    pub fn contains(&self, x: f64) -> bool {
        let xt = if self.mirror { x.abs() } else { x };
        // A mirrored domain whose edge lies at the origin excludes x = 0 itself.
        let lo_ok = if self.lower.is_finite() { xt > self.lower + ENDPOINT_GUARD } else { true };
        let hi_ok = if self.upper.is_finite() { xt < self.upper - ENDPOINT_GUARD } else { true };
        lo_ok && hi_ok
    }

    pub fn is_whole_line(&self) -> bool {
        (self.lower == f64::NEG_INFINITY && self.upper == f64::INFINITY)
            || (self.mirror && self.lower < 0.0 && self.upper == f64::INFINITY)
    }
}

impl std::fmt::Display for Domain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.mirror {
            write!(f, "|x| in ({}, {})", self.lower, self.upper)
        } else {
            write!(f, "x in ({}, {})", self.lower, self.upper)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambertAbbrevs {
    pub k0: Cx,
    pub k1: Cx,
    pub alpha: Cx,
    pub gamma: Cx,
    pub delta: Cx,
    pub s0: Cx,
}

/// Lambert abbreviations without α, which diverges when K0 = 0. `p = s0·α`
/// stays finite there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct LambertKernel {
    pub k0: Cx,
    pub k1: Cx,
    pub gamma: Cx,
    pub delta: Cx,
    pub s0: Cx,
    pub p: Cx,
}

pub(crate) fn lambert_kernel(spec: &PotentialSpec, mode: ModeParams) -> Result<LambertKernel> {
    spec.require(Family::LambertW)?;
    let k2 = mode.ky * mode.ky;
    let s = spec.sigma;
    let k0 = csqrt_re(k2 - (mode.e - spec.v0).powi(2));
    let k1 = csqrt_re(k2 - (mode.e - spec.v0 - spec.v1).powi(2));
    let sum = k0 + k1;
    Ok(LambertKernel {
        k0,
        k1,
        gamma: 2.0 * s * k1,
        delta: 2.0 * s * (k1 - I * spec.v1),
        s0: 2.0 * s * k0,
        p: s * s * (sum * sum + spec.v1 * spec.v1),
    })
}

pub fn lambert_abbrevs(spec: &PotentialSpec, mode: ModeParams) -> Result<LambertAbbrevs> {
    let k = lambert_kernel(spec, mode)?;
    if k.k0 == Cx::new(0.0, 0.0) {
        return Err(Error::Singularity("K0 = 0 makes alpha diverge".into()));
    }
    let sum = k.k0 + k.k1;
    let alpha = spec.sigma * (sum * sum + spec.v1 * spec.v1) / (2.0 * k.k0);
    Ok(LambertAbbrevs { k0: k.k0, k1: k.k1, alpha, gamma: k.gamma, delta: k.delta, s0: k.s0 })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpAbbrevs {
    pub alpha1: Cx,
    pub alpha2: Cx,
    pub q: Cx,
    pub gamma: Cx,
    pub beta: Cx,
    pub alpha: Cx,
}

pub fn exp_abbrevs(spec: &PotentialSpec, mode: ModeParams) -> Result<ExpAbbrevs> {
    spec.require(Family::InvSqrtExp)?;
    let k2 = mode.ky * mode.ky;
    let s = spec.sigma;
    let (e, v0, v1) = (mode.e, spec.v0, spec.v1);
    let alpha1 = s * csqrt_re(k2 - (e - v0 + v1).powi(2));
    let alpha2 = s * csqrt_re(k2 - (e - v0 - v1).powi(2));
    let r = 2.0 * s * csqrt_re(k2 - (e - v0).powi(2));
    Ok(ExpAbbrevs {
        alpha1,
        alpha2,
        q: 2.0 * I * s * v1 - alpha1 + alpha2,
        gamma: 2.0 * alpha1 + 1.0,
        beta: r + alpha1 + alpha2,
        alpha: -r + alpha1 + alpha2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(PotentialSpec::lambert(0.0, 0.0, -1.0, 0.0, false).is_err());
        assert!(PotentialSpec::lambert(0.0, 1.0, 0.0, 0.0, false).is_err());
        assert!(PotentialSpec::new(Family::LambertW, 0.0, 1.0, -1.0, 0.0, false, true).is_err());
    }

    #[test]
    fn domains() {
        let s = PotentialSpec::lambert(0.0, -1.0, -0.25, 0.0, true).unwrap();
        assert_eq!(s.domain(), Domain { lower: 0.25, upper: f64::INFINITY, mirror: false });
        let s = PotentialSpec::exponential(1.0, -1.0, -1.0, 0.0, true).unwrap();
        assert_eq!(s.domain().lower, 0.0);
        let s = PotentialSpec::lambert(0.0, 1.0, -1.0, 0.0, false).unwrap();
        assert!(s.domain().is_whole_line());
        assert!(s.eval_u0(-1e3).is_ok());
    }

    #[test]
    fn guard_near_endpoint() {
        let s = PotentialSpec::lambert(0.0, -1.0, -0.25, 0.0, true).unwrap();
        assert!(matches!(s.eval_u0(0.25 + 1e-11), Err(Error::Domain(_))));
        assert!(s.eval_u0(0.25 + 1e-8).is_ok());
        assert!(matches!(s.eval_u0(0.1), Err(Error::Domain(_))));
    }

    #[test]
    fn lambert_asymptotic_limit() {
        let s = PotentialSpec::lambert(0.0, 1.0, -1.0, 0.0, false).unwrap();
        assert!((s.eval_u0(60.0).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lambert_abbrev_examples() {
        let s = PotentialSpec::lambert(0.0, 1.0, -1.0, 0.0, false).unwrap();
        let a = lambert_abbrevs(&s, ModeParams::new(0.0, 1.25)).unwrap();
        assert!((a.alpha - Cx::new(-2.0, 0.0)).norm() < 1e-14);
        let s = PotentialSpec::lambert(1.0, 1.0, -1.0, 0.0, false).unwrap();
        let a = lambert_abbrevs(&s, ModeParams::new(0.0, 0.0)).unwrap();
        assert_eq!(a.k0, Cx::new(0.0, 1.0));
        assert_eq!(a.k1, Cx::new(0.0, 2.0));
        let s = PotentialSpec::lambert(1.0, -1.0, -1.0, 0.0, false).unwrap();
        assert!(matches!(lambert_abbrevs(&s, ModeParams::new(0.0, 1.0)), Err(Error::Singularity(_))));
    }

    #[test]
    fn exp_abbrev_examples() {
        let s = PotentialSpec::exponential(0.0, 1.0, 0.75, 0.0, false).unwrap();
        let a = exp_abbrevs(&s, ModeParams::new(0.0, 13.0 / 12.0)).unwrap();
        assert!((a.alpha - Cx::new(-1.0, 0.0)).norm() < 1e-14);
        let s = PotentialSpec::exponential(0.0, -1.5, -1.0, 0.0, false).unwrap();
        let a = exp_abbrevs(&s, ModeParams::new(0.0, 25.0 / 16.0)).unwrap();
        assert!((a.beta - Cx::new(-4.0, 0.0)).norm() < 1e-14, "beta = {}", a.beta);
        let flipped = PotentialSpec::exponential(0.0, 1.5, -1.0, 0.0, false).unwrap();
        let b = exp_abbrevs(&flipped, ModeParams::new(0.0, 25.0 / 16.0)).unwrap();
        assert_eq!(a.alpha1, b.alpha2);
        assert_eq!(a.alpha2, b.alpha1);
    }

    #[test]
    fn mirror_examples() {
        let s = PotentialSpec::lambert(1.0, -1.0, -1.0, -1.0, true).unwrap().mirrored().unwrap();
        for &x in &[0.1, 0.7, 2.5] {
            let t: f64 = -(-x - 1.0f64).exp();
            let w = crate::specfun::lambert_w0(t).unwrap();
            let r = 1.0 - 1.0 / (1.0 + w);
            assert!((s.eval_u0(x).unwrap() - r).abs() < 1e-13 * r.abs().max(1.0));
            assert_eq!(s.eval_u0(x).unwrap(), s.eval_u0(-x).unwrap());
        }
        let s = PotentialSpec::exponential(0.0, -1.0, -1.0, 0.0, true).unwrap().mirrored().unwrap();
        for &x in &[0.1, 0.7, 2.5] {
            let r = -1.0 / (1.0 - (-x as f64).exp()).sqrt();
            assert!((s.eval_u0(-x).unwrap() - r).abs() < 1e-13 * r.abs());
        }
        assert!(s.eval_u0(0.0).is_err());
    }

    #[test]
    fn derivative_against_finite_difference() {
        let specs = [
            PotentialSpec::lambert(0.3, 1.2, -0.7, 0.2, false).unwrap(),
            PotentialSpec::lambert(0.3, -1.2, -0.7, 0.2, true).unwrap(),
            PotentialSpec::exponential(0.3, 1.2, 0.9, -0.4, false).unwrap(),
            PotentialSpec::exponential(0.3, 1.2, -0.9, -0.4, true).unwrap(),
            PotentialSpec::exponential(0.0, -1.0, -1.0, 0.0, true).unwrap().mirrored().unwrap(),
        ];
        for s in &specs {
            for &x in &[-1.3, 0.9, 2.1] {
                if !s.domain().contains(x - 1e-3) || !s.domain().contains(x + 1e-3) {
                    continue;
                }
                let h = 1e-5;
                let fd = (s.eval_u0(x + h).unwrap() - s.eval_u0(x - h).unwrap()) / (2.0 * h);
                let an = s.eval_u0_dx(x).unwrap();
                assert!((fd - an).abs() < 1e-7 * an.abs().max(1.0), "{s:?} x={x}: {fd} vs {an}");
            }
        }
    }
}

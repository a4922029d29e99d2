//! Special functions needed by the closed-form solutions: real principal-branch
//! Lambert W, complex-parameter ₁F₁/₀F₁ and ₂F₁, and principal-branch complex
//! square roots and powers.

mod gamma;
mod hyp1f1;
mod hyp2f1;
mod lambert;

pub use gamma::{gamma, ln_gamma, rgamma};
pub use hyp1f1::{
    hyp0f1, hyp0f1_regularized, hyp1f1, hyp1f1_dz, hyp1f1_path, hyp1f1_regularized,
};
pub use hyp2f1::{hyp2f1, hyp2f1_path};
pub use lambert::{lambert_w0, lambert_w0_branch, lambert_w0_dx, lambert_w0_of_exp};

use crate::error::{Error, Result};

pub type Cx = num_complex::Complex64;

pub const I: Cx = Cx::new(0.0, 1.0);

/// Tolerance for deciding that a parameter is a nonpositive integer.
pub const INT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    pub max_terms: usize,
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl Default for SeriesControl {
    fn default() -> Self {
        SeriesControl { max_terms: 20_000, abs_tol: 1e-300, rel_tol: 1e-17 }
    }
}

impl SeriesControl {
    pub fn new(max_terms: usize, abs_tol: f64, rel_tol: f64) -> Result<Self> {
        if max_terms == 0 || !(abs_tol > 0.0) || !(rel_tol > 0.0) {
            return Err(Error::InvalidSpec(format!(
                "series control needs max_terms >= 1 and positive tolerances, got ({max_terms}, {abs_tol}, {rel_tol})"
            )));
        }
        Ok(SeriesControl { max_terms, abs_tol, rel_tol })
    }
}

/// Which evaluation path a hypergeometric call took.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesPath {
    /// Finite polynomial: a numerator parameter is a nonpositive integer.
    Terminating,
    /// Polynomial after an Euler transformation, times a power prefactor.
    EulerTerminating,
    Series,
    Kummer,
    Pfaff,
    /// Connection formula around w = 1.
    Connection,
}

impl SeriesPath {
    pub fn terminates(self) -> bool {
        matches!(self, SeriesPath::Terminating | SeriesPath::EulerTerminating)
    }
}

/// `Some(m)` when `v` is within [`INT_TOL`] of the integer `-m <= 0`.
pub fn nonpositive_int(v: Cx) -> Option<u64> {
    let r = v.re.round();
    if r <= 0.0 && (v.re - r).abs() < INT_TOL && v.im.abs() < INT_TOL {
        Some((-r) as u64)
    } else {
        None
    }
}

pub fn near_integer(v: Cx) -> bool {
    (v.re - v.re.round()).abs() < INT_TOL && v.im.abs() < INT_TOL
}

// -0.0 imaginary parts would put negative reals on the wrong side of the cut.
fn unsign_zero(t: Cx) -> Cx {
    Cx::new(t.re, t.im + 0.0)
}

pub fn csqrt(t: Cx) -> Cx {
    unsign_zero(t).sqrt()
}

pub fn csqrt_re(t: f64) -> Cx {
    csqrt(Cx::new(t, 0.0))
}

pub fn cln(t: Cx) -> Cx {
    unsign_zero(t).ln()
}

pub fn cpow(t: Cx, p: Cx) -> Result<Cx> {
    if t == Cx::new(0.0, 0.0) {
        if p.re > 0.0 {
            return Ok(Cx::new(0.0, 0.0));
        }
        return Err(Error::Domain(format!("0 raised to the power {p}")));
    }
    if p == Cx::new(0.0, 0.0) {
        return Ok(Cx::new(1.0, 0.0));
    }
    Ok((p * cln(t)).exp())
}

/// Rising factorial (a)_n.
pub fn pochhammer(a: Cx, n: u64) -> Cx {
    let mut p = Cx::new(1.0, 0.0);
    for k in 0..n {
        p *= a + k as f64;
    }
    p
}

/// Generic pFq Taylor sum. Stops exactly at the polynomial degree when a
/// numerator parameter is a nonpositive integer.
pub(crate) fn pfq_series(num: &[Cx], den: &[Cx], z: Cx, ctl: &SeriesControl) -> Result<(Cx, bool)> {
    let degree = num.iter().filter_map(|&a| nonpositive_int(a)).min();
    let mut sum = Cx::new(1.0, 0.0);
    let mut term = Cx::new(1.0, 0.0);
    let mut small = 0;
    let limit = match degree {
        Some(m) => m as usize,
        None => ctl.max_terms,
    };
    for k in 0..limit {
        let kf = k as f64;
        let mut ratio = z / (kf + 1.0);
        for &a in num {
            ratio *= a + kf;
        }
        for &b in den {
            ratio /= b + kf;
        }
        term *= ratio;
        sum += term;
        if !sum.re.is_finite() || !sum.im.is_finite() {
            return Err(Error::NoConvergence { what: "series overflow".into(), terms: k + 1 });
        }
        if degree.is_none() {
            // Only trust a small term once terms are decreasing.
            if term.norm() <= ctl.rel_tol * sum.norm() + ctl.abs_tol && ratio.norm() < 1.0 {
                small += 1;
                if small >= 2 {
                    return Ok((sum, false));
                }
            } else {
                small = 0;
            }
        }
    }
    match degree {
        Some(_) => Ok((sum, true)),
        None => Err(Error::NoConvergence { what: format!("pFq series at z = {z}"), terms: ctl.max_terms }),
    }
}

use super::{nonpositive_int, pfq_series, pochhammer, rgamma, Cx, SeriesControl, SeriesPath};
use crate::error::{Error, Result};

// Left of this the alternating series cancels; Kummer keeps the terms positive-ish.
const KUMMER_SWITCH: f64 = 0.0;

fn check_pole(a: Cx, c: Cx) -> Result<()> {
    if let Some(p) = nonpositive_int(c) {
        // M(-m, -p, z) with m <= p is the usual truncated polynomial.
        match nonpositive_int(a) {
            Some(m) if m <= p => Ok(()),
            _ => Err(Error::Pole(format!("1F1 lower parameter c = {c} is a nonpositive integer"))),
        }
    } else {
        Ok(())
    }
}

/// Kummer's M(a, c, z) plus the evaluation path taken.
pub fn hyp1f1_path(a: Cx, c: Cx, z: Cx, ctl: &SeriesControl) -> Result<(Cx, SeriesPath)> {
    check_pole(a, c)?;
    if nonpositive_int(a).is_some() {
        let (v, _) = pfq_series(&[a], &[c], z, ctl)?;
        return Ok((v, SeriesPath::Terminating));
    }
    if z.re < KUMMER_SWITCH {
        let (v, _) = pfq_series(&[c - a], &[c], -z, ctl)?;
        return Ok((z.exp() * v, SeriesPath::Kummer));
    }
    let (v, _) = pfq_series(&[a], &[c], z, ctl)?;
    Ok((v, SeriesPath::Series))
}

pub fn hyp1f1(a: Cx, c: Cx, z: Cx, ctl: &SeriesControl) -> Result<Cx> {
    hyp1f1_path(a, c, z, ctl).map(|r| r.0)
}

/// d/dz M(a, c, z) = (a/c) M(a+1, c+1, z).
pub fn hyp1f1_dz(a: Cx, c: Cx, z: Cx, ctl: &SeriesControl) -> Result<Cx> {
    check_pole(a, c)?;
    if a == Cx::new(0.0, 0.0) {
        return Ok(Cx::new(0.0, 0.0));
    }
    Ok(a / c * hyp1f1(a + 1.0, c + 1.0, z, ctl)?)
}

/// M(a, c, z)/Γ(c), entire in c. At c = -m it equals
/// (a)_{m+1} z^{m+1}/(m+1)! · M(a+m+1, m+2, z).
pub fn hyp1f1_regularized(a: Cx, c: Cx, z: Cx, ctl: &SeriesControl) -> Result<(Cx, SeriesPath)> {
    if let Some(m) = nonpositive_int(c) {
        let n = m + 1;
        let pre = pochhammer(a, n) * z.powu(n as u32) / factorial(n);
        let (v, path) = hyp1f1_path(a + n as f64, Cx::new(n as f64 + 1.0, 0.0), z, ctl)?;
        return Ok((pre * v, path));
    }
    let (v, path) = hyp1f1_path(a, c, z, ctl)?;
    Ok((v * rgamma(c), path))
}

/// ₀F₁(; c; z).
pub fn hyp0f1(c: Cx, z: Cx, ctl: &SeriesControl) -> Result<Cx> {
    if nonpositive_int(c).is_some() {
        return Err(Error::Pole(format!("0F1 parameter c = {c} is a nonpositive integer")));
    }
    // Convergence test in pfq_series sees ratio z/((c+k)(k+1)); no numerator.
    Ok(pfq_series(&[], &[c], z, ctl)?.0)
}

/// ₀F₁(; c; z)/Γ(c); at c = -m it equals z^{m+1}/(m+1)! · ₀F₁(; m+2; z).
pub fn hyp0f1_regularized(c: Cx, z: Cx, ctl: &SeriesControl) -> Result<Cx> {
    if let Some(m) = nonpositive_int(c) {
        let n = m + 1;
        return Ok(z.powu(n as u32) / factorial(n) * hyp0f1(Cx::new(n as f64 + 1.0, 0.0), z, ctl)?);
    }
    Ok(hyp0f1(c, z, ctl)? * rgamma(c))
}

fn factorial(n: u64) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::gamma;

    fn c(re: f64, im: f64) -> Cx {
        Cx::new(re, im)
    }

    fn ctl() -> SeriesControl {
        SeriesControl::default()
    }

    #[test]
    fn trivial_identities() {
        let z = c(0.7, -1.3);
        assert_eq!(hyp1f1(c(2.3, 1.0), c(0.4, 0.2), c(0.0, 0.0), &ctl()).unwrap(), c(1.0, 0.0));
        assert!((hyp1f1(c(1.0, 0.0), c(1.0, 0.0), z, &ctl()).unwrap() - z.exp()).norm() < 1e-15);
        let cc = c(2.5, 0.5);
        let (v, path) = hyp1f1_path(c(-1.0, 0.0), cc, z, &ctl()).unwrap();
        assert_eq!(path, SeriesPath::Terminating);
        assert!((v - (1.0 - z / cc)).norm() < 1e-15);
    }

    #[test]
    fn derivative_identities() {
        let z = c(-0.4, 0.9);
        let e = hyp1f1_dz(c(1.0, 0.0), c(1.0, 0.0), z, &ctl()).unwrap();
        assert!((e - z.exp()).norm() < 1e-15);
        let cc = c(3.0, -1.0);
        let d = hyp1f1_dz(c(-1.0, 0.0), cc, z, &ctl()).unwrap();
        assert!((d + 1.0 / cc).norm() < 1e-15);
    }

    #[test]
    fn pole_rejected_unless_truncated() {
        assert!(matches!(hyp1f1(c(0.5, 0.0), c(-2.0, 0.0), c(1.0, 0.0), &ctl()), Err(Error::Pole(_))));
        // M(-1, -2, z) = 1 + z/2
        let v = hyp1f1(c(-1.0, 0.0), c(-2.0, 0.0), c(3.0, 0.0), &ctl()).unwrap();
        assert!((v - c(2.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn regularized_matches_limit() {
        let a = c(0.3, 0.7);
        let z = c(-0.8, 0.2);
        let (exact, _) = hyp1f1_regularized(a, c(-2.0, 0.0), z, &ctl()).unwrap();
        let eps = 1e-7;
        let (near, _) = hyp1f1_regularized(a, c(-2.0 + eps, 0.0), z, &ctl()).unwrap();
        assert!((exact - near).norm() < 1e-5 * exact.norm(), "{exact} vs {near}");
        let cc = c(1.7, -0.3);
        let (r, _) = hyp1f1_regularized(a, cc, z, &ctl()).unwrap();
        let direct = hyp1f1(a, cc, z, &ctl()).unwrap() / gamma(cc);
        assert!((r - direct).norm() < 1e-13 * r.norm());
    }

    #[test]
    fn zero_f_one_bessel() {
        // 0F1(;1;-x²/4) = J0(x); J0(2.404825557695773) ≈ 0.
        let x: f64 = 2.404_825_557_695_773;
        let v = hyp0f1(c(1.0, 0.0), c(-x * x / 4.0, 0.0), &ctl()).unwrap();
        assert!(v.norm() < 1e-14);
        // 0F1(;1/2;z²/4) = cosh z
        let zz = 1.3;
        let v = hyp0f1(c(0.5, 0.0), c(zz * zz / 4.0, 0.0), &ctl()).unwrap();
        assert!((v.re - zz.cosh()).abs() < 1e-14);
        let eps = 1e-7;
        let z = c(-0.6, 0.1);
        let a = hyp0f1_regularized(c(-1.0, 0.0), z, &ctl()).unwrap();
        let b = hyp0f1_regularized(c(-1.0 + eps, 0.0), z, &ctl()).unwrap();
        assert!((a - b).norm() < 1e-5 * a.norm());
    }
}

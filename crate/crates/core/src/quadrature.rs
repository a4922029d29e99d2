//! Globally adaptive Gauss–Kronrod (7/15) quadrature for complex integrands.

use crate::error::{Error, Result};
use crate::specfun::Cx;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions { abs_tol: 1e-13, rel_tol: 1e-11, max_intervals: 4000 }
    }
}

struct Piece {
    a: f64,
    b: f64,
    value: Cx,
    err: f64,
}

fn gk15<F: FnMut(f64) -> Result<Cx>>(f: &mut F, a: f64, b: f64) -> Result<Piece> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c)?;
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx)? + f(c + dx)?;
        kron += s * WGK[j];
        if j % 2 == 1 {
            gauss += s * WG[j / 2];
        }
    }
    let value = kron * h;
    let err = ((kron - gauss) * h).norm();
    if !value.re.is_finite() || !value.im.is_finite() {
        return Err(Error::Quadrature(format!("non-finite integrand on [{a}, {b}]")));
    }
    Ok(Piece { a, b, value, err })
}

/// ∫_a^b f. Returns the value and the final error estimate.
pub fn integrate<F: FnMut(f64) -> Result<Cx>>(mut f: F, a: f64, b: f64, opts: QuadOptions) -> Result<(Cx, f64)> {
    if a == b {
        return Ok((Cx::new(0.0, 0.0), 0.0));
    }
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::Quadrature("integration limits must be finite".into()));
    }
    let mut pieces = vec![gk15(&mut f, a, b)?];
    loop {
        let total: Cx = pieces.iter().map(|p| p.value).sum();
        let err: f64 = pieces.iter().map(|p| p.err).sum();
        if err <= opts.abs_tol.max(opts.rel_tol * total.norm()) {
            return Ok((total, err));
        }
        if pieces.len() >= opts.max_intervals {
            return Err(Error::Quadrature(format!(
                "error estimate {err:e} above tolerance after {} subintervals",
                pieces.len()
            )));
        }
        let worst = pieces
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.err.total_cmp(&y.1.err))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let p = pieces.swap_remove(worst);
        let m = 0.5 * (p.a + p.b);
        if m <= p.a || m >= p.b {
            return Err(Error::Quadrature(format!("interval [{}, {}] cannot be bisected further", p.a, p.b)));
        }
        pieces.push(gk15(&mut f, p.a, m)?);
        pieces.push(gk15(&mut f, m, p.b)?);
    }
}

pub fn integrate_real<F: FnMut(f64) -> Result<f64>>(mut f: F, a: f64, b: f64, opts: QuadOptions) -> Result<(f64, f64)> {
    let (v, e) = integrate(|x| f(x).map(|y| Cx::new(y, 0.0)), a, b, opts)?;
    Ok((v.re, e))
}

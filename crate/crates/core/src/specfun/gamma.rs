use super::{nonpositive_int, Cx};
use std::f64::consts::PI;

// Lanczos approximation, g = 7, n = 9.
const G: f64 = 7.0;
const COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

fn ln_sin_pi(z: Cx) -> Cx {
    let w = z * PI;
    if w.im.abs() < 20.0 {
        return w.sin().ln();
    }
    // sin w = (e^{iw} - e^{-iw}) / 2i; keep only the dominant exponential.
    if w.im > 0.0 {
        -Cx::i() * w + Cx::new(0.5f64.ln(), PI / 2.0) + (-(Cx::i() * 2.0 * w).exp()).ln_1p_safe()
    } else {
        Cx::i() * w + Cx::new(0.5f64.ln(), -PI / 2.0) + (-(-Cx::i() * 2.0 * w).exp()).ln_1p_safe()
    }
}

trait Ln1p {
    fn ln_1p_safe(self) -> Cx;
}

impl Ln1p for Cx {
    fn ln_1p_safe(self) -> Cx {
        if self.norm() < 1e-8 {
            self
        } else {
            (self + 1.0).ln()
        }
    }
}

/// Complex log-gamma (some branch of the logarithm; exponentiates to Γ).
pub fn ln_gamma(z: Cx) -> Cx {
    if z.re < 0.5 {
        return Cx::new(PI.ln(), 0.0) - ln_sin_pi(z) - ln_gamma(1.0 - z);
    }
    let z = z - 1.0;
    let mut x = Cx::new(COEF[0], 0.0);
    for (i, &c) in COEF.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + G + 0.5;
    (z + 0.5) * t.ln() - t + LN_SQRT_2PI + x.ln()
}

pub fn gamma(z: Cx) -> Cx {
    if let Some(_) = nonpositive_int(z) {
        return Cx::new(f64::INFINITY, 0.0);
    }
    ln_gamma(z).exp()
}

/// 1/Γ(z), exactly zero at the poles of Γ.
pub fn rgamma(z: Cx) -> Cx {
    if nonpositive_int(z).is_some() {
        return Cx::new(0.0, 0.0);
    }
    (-ln_gamma(z)).exp()
}

use crate::error::{Error, Result};
use std::f64::consts::E;

const INV_E: f64 = 1.0 / E;
const BRANCH_TOL: f64 = 1e-15;

// Series of W0 about the branch point in p = sqrt(2(1 + e t)).
const BRANCH_SERIES: [f64; 9] = [
    -1.0,
    1.0,
    -1.0 / 3.0,
    11.0 / 72.0,
    -43.0 / 540.0,
    769.0 / 17280.0,
    -221.0 / 8505.0,
    680863.0 / 43545600.0,
    -1963.0 / 204120.0,
];

fn branch_series(p: f64) -> f64 {
    BRANCH_SERIES.iter().rev().fold(0.0, |acc, &c| acc * p + c)
}

fn halley(t: f64, mut w: f64) -> f64 {
    for _ in 0..64 {
        let ew = w.exp();
        let f = w * ew - t;
        let wp1 = w + 1.0;
        if wp1 == 0.0 {
            break;
        }
        let denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        let step = f / denom;
        let next = w - step;
        if !next.is_finite() {
            break;
        }
        let done = (next - w).abs() <= 4.0 * f64::EPSILON * (1.0 + next.abs());
        w = next;
        if done {
            break;
        }
    }
    w
}

/// Principal branch W0(t) for real t >= -1/e.
pub fn lambert_w0(t: f64) -> Result<f64> {
    if t.is_nan() {
        return Err(Error::Domain("lambert_w0 of NaN".into()));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    if t < -INV_E {
        if t >= -INV_E - BRANCH_TOL {
            return Ok(-1.0);
        }
        return Err(Error::Domain(format!("lambert_w0 argument {t} below -1/e")));
    }
    if t == f64::INFINITY {
        return Ok(f64::INFINITY);
    }
    let delta = E.mul_add(t, 1.0);
    // Within rounding of -1/e the offset carries no information.
    if delta.abs() <= 4.0 * f64::EPSILON {
        return Ok(-1.0);
    }
    lambert_w0_branch(delta, t)
}

/// W0 given both `delta = 1 + e·t` and `t`. Callers that know `delta`
/// more accurately than `1 + e·t` (arguments near -1/e) should use this.
pub fn lambert_w0_branch(delta: f64, t: f64) -> Result<f64> {
    if delta < 0.0 {
        if delta > -BRANCH_TOL {
            return Ok(-1.0);
        }
        return Err(Error::Domain(format!("lambert_w0 argument below -1/e (1 + e t = {delta})")));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    let p = (2.0 * delta).sqrt();
    if p < 1e-2 {
        return Ok(branch_series(p));
    }
    let seed = if t < -0.25 {
        branch_series(p)
    } else if t.abs() <= 0.25 {
        t * (1.0 - t * (1.0 - 1.5 * t))
    } else if t < E {
        0.5 * t.ln_1p() + 0.2 * t.min(1.0)
    } else {
        let l1 = t.ln();
        let l2 = l1.ln();
        l1 - l2 + l2 / l1
    };
    Ok(halley(t, seed))
}

/// W0(e^y) without overflowing e^y for large y.
pub fn lambert_w0_of_exp(y: f64) -> Result<f64> {
    if y < 500.0 {
        return lambert_w0(y.exp());
    }
    // Solve w + ln w = y.
    let mut w = y - y.ln();
    for _ in 0..32 {
        let f = w + w.ln() - y;
        let next = w - f * w / (w + 1.0);
        let done = (next - w).abs() <= 4.0 * f64::EPSILON * next;
        w = next;
        if done {
            break;
        }
    }
    Ok(w)
}

/// dW/dt at (t, w = W0(t)).
pub fn lambert_w0_dx(t: f64, w: f64) -> Result<f64> {
    if w == -1.0 {
        return Err(Error::Singularity("dW/dt diverges at the branch point".into()));
    }
    if t == 0.0 {
        return Ok(1.0);
    }
    Ok(w / (t * (1.0 + w)))
}

use super::{cpow, ln_gamma, near_integer, nonpositive_int, pfq_series, Cx, SeriesControl, SeriesPath};
use crate::error::{Error, Result};

const DIRECT_RADIUS: f64 = 0.9;

fn on_cut(w: Cx) -> bool {
    w.im == 0.0 && w.re >= 1.0
}

/// Gauss ₂F₁(a, b; c; w) plus the evaluation path taken.
///
/// Region plan: terminating polynomial (any w); Euler-transformed polynomial
/// when c−a or c−b is a nonpositive integer; direct series for |w| < 0.9;
/// Pfaff for |w/(w−1)| < 0.9; connection formula about w = 1 for |1−w| < 0.9
/// off the cut; otherwise a long direct series inside the unit disk.
pub fn hyp2f1_path(a: Cx, b: Cx, c: Cx, w: Cx, ctl: &SeriesControl) -> Result<(Cx, SeriesPath)> {
    let term_deg = [a, b].iter().filter_map(|&p| nonpositive_int(p)).min();
    if let Some(p) = nonpositive_int(c) {
        match term_deg {
            Some(m) if m <= p => {}
            _ => return Err(Error::Pole(format!("2F1 lower parameter c = {c} is a nonpositive integer"))),
        }
    }
    if term_deg.is_some() {
        let (v, _) = pfq_series(&[a, b], &[c], w, ctl)?;
        return Ok((v, SeriesPath::Terminating));
    }
    if nonpositive_int(c - a).is_some() || nonpositive_int(c - b).is_some() {
        let (v, _) = pfq_series(&[c - a, c - b], &[c], w, ctl)?;
        let pre = cpow(1.0 - w, c - a - b)?;
        return Ok((pre * v, SeriesPath::EulerTerminating));
    }
    if w.norm() < DIRECT_RADIUS {
        let (v, _) = pfq_series(&[a, b], &[c], w, ctl)?;
        return Ok((v, SeriesPath::Series));
    }
    if on_cut(w) {
        return Err(Error::Region(format!("2F1 at w = {w} on the branch cut with a non-terminating series")));
    }
    let pf = w / (w - 1.0);
    if pf.norm() < DIRECT_RADIUS {
        let (v, _) = pfq_series(&[a, c - b], &[c], pf, ctl)?;
        return Ok((cpow(1.0 - w, -a)? * v, SeriesPath::Pfaff));
    }
    let s = c - a - b;
    if (1.0 - w).norm() < DIRECT_RADIUS && !near_integer(s) {
        let v = connection(a, b, c, w, ctl)?;
        return Ok((v, SeriesPath::Connection));
    }
    if w.norm() < 1.0 {
        let (v, _) = pfq_series(&[a, b], &[c], w, ctl)?;
        return Ok((v, SeriesPath::Series));
    }
    Err(Error::Region(format!("2F1 at w = {w}: no convergent representation")))
}

pub fn hyp2f1(a: Cx, b: Cx, c: Cx, w: Cx, ctl: &SeriesControl) -> Result<Cx> {
    hyp2f1_path(a, b, c, w, ctl).map(|r| r.0)
}

fn connection(a: Cx, b: Cx, c: Cx, w: Cx, ctl: &SeriesControl) -> Result<Cx> {
    let s = c - a - b;
    let u = 1.0 - w;
    let lc = ln_gamma(c);
    let g1 = (lc + ln_gamma(s) - ln_gamma(c - a) - ln_gamma(c - b)).exp();
    let g2 = (lc + ln_gamma(-s) - ln_gamma(a) - ln_gamma(b)).exp();
    let (f1, _) = pfq_series(&[a, b], &[1.0 - s], u, ctl)?;
    let (f2, _) = pfq_series(&[c - a, c - b], &[1.0 + s], u, ctl)?;
    Ok(g1 * f1 + cpow(u, s)? * g2 * f2)
}

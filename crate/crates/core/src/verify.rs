//! Independent checks of the closed forms: adaptive Dormand–Prince
//! integration of the second-order equations, bound-state densities by
//! quadrature, and residual convergence under grid refinement.

use crate::darboux::{transformed_spinor, TransformSpec};
use crate::dirac_core::{psi1, psi2, spinor, sse_residual};
use crate::error::{Error, Result};
use crate::potentials::{ModeParams, PotentialSpec};
use crate::quadrature::{integrate_real, QuadOptions};
use crate::specfun::{Cx, I};

// Dormand–Prince 5(4)
const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeSetup {
    pub x_start: f64,
    pub x_end: f64,
    pub tol: f64,
    /// Initial (value, derivative); taken from the closed form when None.
    pub initial: Option<(Cx, Cx)>,
    pub max_steps: usize,
}

impl OdeSetup {
    pub fn new(x_start: f64, x_end: f64, tol: f64) -> Self {
        OdeSetup { x_start, x_end, tol, initial: None, max_steps: 200_000 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OdeRun {
    pub x_start: f64,
    pub x_end: f64,
    pub initial: (Cx, Cx),
    pub tolerance: f64,
    /// Accepted steps (x, f), starting with the initial point.
    pub samples: Vec<(f64, Cx)>,
    /// (f, f′) at x_end.
    pub end: (Cx, Cx),
}

/// Integrates f″ = −q(x) f from `x0` to `x1`.
pub fn integrate_linear<Q: Fn(f64) -> Result<Cx>>(q: Q, x0: f64, x1: f64, y0: (Cx, Cx), tol: f64, max_steps: usize) -> Result<OdeRun> {
    if !(tol > 0.0) {
        return Err(Error::InvalidSpec("integrator tolerance must be positive".into()));
    }
    let span = x1 - x0;
    let rhs = |x: f64, y: [Cx; 2]| -> Result<[Cx; 2]> { Ok([y[1], -q(x)? * y[0]]) };
    let mut x = x0;
    let mut y = [y0.0, y0.1];
    let mut h = span / 100.0;
    let mut samples = vec![(x0, y0.0)];
    let mut steps = 0;
    while (x1 - x) * span.signum() > 0.0 {
        steps += 1;
        if steps > max_steps {
            return Err(Error::StepFailure { x, reason: format!("more than {max_steps} steps") });
        }
        if (h.abs()) < 1e-14 * span.abs().max(1.0) {
            return Err(Error::StepFailure { x, reason: "step size underflow".into() });
        }
        if (x + h - x1) * span.signum() > 0.0 {
            h = x1 - x;
        }
        let mut k = [[Cx::new(0.0, 0.0); 2]; 7];
        for s in 0..7 {
            let mut ys = y;
            for (j, kj) in k.iter().enumerate().take(s) {
                for d in 0..2 {
                    ys[d] += h * A[s][j] * kj[d];
                }
            }
            k[s] = rhs(x + C[s] * h, ys)?;
        }
        let mut y5 = y;
        let mut err: f64 = 0.0;
        for d in 0..2 {
            let mut e = Cx::new(0.0, 0.0);
            for s in 0..7 {
                y5[d] += h * B5[s] * k[s][d];
                e += h * (B5[s] - B4[s]) * k[s][d];
            }
            let scale = tol + tol * y[d].norm().max(y5[d].norm());
            err = err.max(e.norm() / scale);
        }
        if !err.is_finite() {
            h *= 0.2;
            continue;
        }
        if err <= 1.0 {
            x = if (x + h - x1).abs() <= 1e-15 * span.abs() { x1 } else { x + h };
            y = y5;
            samples.push((x, y[0]));
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= factor;
    }
    Ok(OdeRun { x_start: x0, x_end: x1, initial: y0, tolerance: tol, samples, end: (y[0], y[1]) })
}

/// Integrates f″ + {(u0−E)² − k_y² + sign·i u0′} f = 0; sign = +1 is the Ψ1
/// equation (seeded from Ψ1), sign = −1 the Ψ2 equation (seeded from Ψ2).
pub fn integrate_sse(spec: &PotentialSpec, mode: ModeParams, sign: f64, setup: OdeSetup) -> Result<OdeRun> {
    if sign != 1.0 && sign != -1.0 {
        return Err(Error::InvalidSpec(format!("sign must be ±1, got {sign}")));
    }
    for x in [setup.x_start, setup.x_end] {
        spec.eval_u0(x)?;
    }
    let y0 = match setup.initial {
        Some(v) => v,
        None => {
            let (p, d) = psi1(spec, mode, setup.x_start)?;
            if sign > 0.0 {
                (p, d)
            } else {
                psi2(spec, mode, setup.x_start, p, d)?
            }
        }
    };
    let k2 = mode.ky * mode.ky;
    let q = |x: f64| -> Result<Cx> {
        let v = spec.eval_u0(x)? - mode.e;
        Ok(Cx::new(v * v - k2, 0.0) + sign * I * spec.eval_u0_dx(x)?)
    };
    integrate_linear(q, setup.x_start, setup.x_end, y0, setup.tol, setup.max_steps)
}

#[derive(Debug, Clone, Copy)]
pub enum DensitySource<'a> {
    Original { spec: &'a PotentialSpec, mode: ModeParams },
    Transformed { spec: &'a PotentialSpec, transform: TransformSpec, mode: ModeParams },
}

impl DensitySource<'_> {
    fn spec(&self) -> &PotentialSpec {
        match self {
            DensitySource::Original { spec, .. } | DensitySource::Transformed { spec, .. } => spec,
        }
    }

    pub fn density(&self, x: f64) -> Result<f64> {
        match *self {
            DensitySource::Original { spec, mode } => Ok(spinor(spec, mode, x)?.density()),
            DensitySource::Transformed { spec, transform, mode } => {
                Ok(transformed_spinor(spec, mode.e, transform, mode, x)?.density())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityGrid {
    /// Largest |x| considered.
    pub cutoff: f64,
    /// Sampling step for the tabulated density and the tail fit.
    pub step: f64,
    /// Stop once the density falls below this fraction of its peak.
    pub peak_fraction: f64,
    /// Offset from a singular domain edge or the mirror point.
    pub edge_offset: f64,
}

impl Default for DensityGrid {
    fn default() -> Self {
        DensityGrid { cutoff: 60.0, step: 0.05, peak_fraction: 1e-12, edge_offset: 1e-8 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityReport {
    pub norm: f64,
    /// Limit at the mirror point (mirrored potentials only).
    pub value_at_origin: Option<f64>,
    /// Smallest exponential decay rate over the infinite ends (log-linear fit).
    pub tail_decay_rate: f64,
    pub integrable: bool,
    /// (x, ρ/norm).
    pub samples: Vec<(f64, f64)>,
}

/// One stretch of the x-axis, sampled from `inner` outwards to `outer`.
struct Side {
    inner: f64,
    outer: f64,
    /// Width left out between the true edge and `inner`.
    gap: f64,
}

fn sides(spec: &PotentialSpec, g: &DensityGrid) -> Vec<Side> {
    let d = spec.domain();
    let x_cut = g.cutoff;
    if spec.mirror {
        let (edge, gap) = if d.lower >= 0.0 { (d.lower + g.edge_offset, g.edge_offset) } else { (0.0, 0.0) };
        return vec![
            Side { inner: -edge, outer: -x_cut, gap },
            Side { inner: edge, outer: x_cut, gap },
        ];
    }
    match (d.lower.is_finite(), d.upper.is_finite()) {
        (true, _) => vec![Side { inner: d.lower + g.edge_offset, outer: d.lower.max(0.0) + x_cut, gap: g.edge_offset }],
        (_, true) => vec![Side { inner: d.upper - g.edge_offset, outer: d.upper.min(0.0) - x_cut, gap: g.edge_offset }],
        _ => vec![
            Side { inner: 0.0, outer: -x_cut, gap: 0.0 },
            Side { inner: 0.0, outer: x_cut, gap: 0.0 },
        ],
    }
}

fn fit_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0, a.1 + p.1));
    let (mx, my) = (sx / n, sy / n);
    let (mut num, mut den) = (0.0, 0.0);
    for &(x, y) in pts {
        num += (x - mx) * (y - my);
        den += (x - mx) * (x - mx);
    }
    num / den
}

pub fn density_report(source: DensitySource, grid: DensityGrid) -> Result<DensityReport> {
    let spec = source.spec();
    let mut tabulated: Vec<Vec<(f64, f64)>> = Vec::new();
    let mut cut_short = Vec::new();
    let mut gaps = Vec::new();
    let mut peak: f64 = 0.0;
    for side in sides(spec, &grid) {
        gaps.push(side.gap);
        let n = ((side.outer - side.inner).abs() / grid.step).ceil().max(2.0) as usize;
        let mut pts = Vec::with_capacity(n + 1);
        let mut short = false;
        for i in 0..=n {
            let x = side.inner + (side.outer - side.inner) * i as f64 / n as f64;
            // Past the first point a failed or non-finite evaluation (overflow,
            // underflowed frame) ends the side; the tail then counts as
            // unresolved unless it had already decayed.
            let rho = match source.density(x) {
                Ok(r) if r.is_finite() => r,
                Ok(_) | Err(_) if i > 0 => {
                    short = true;
                    break;
                }
                Ok(r) => return Err(Error::Quadrature(format!("density {r} at x = {x}"))),
                Err(e) => return Err(e),
            };
            peak = peak.max(rho);
            pts.push((x, rho));
        }
        tabulated.push(pts);
        cut_short.push(short);
    }
    if peak == 0.0 {
        return Err(Error::Quadrature("density vanishes identically; norm 0".into()));
    }
    // Trim each side where the density has dropped below the peak fraction.
    let floor = grid.peak_fraction * peak;
    let mut norm = 0.0;
    let mut rate = f64::INFINITY;
    let opts = QuadOptions { abs_tol: 1e-14 * peak, rel_tol: 1e-12, max_intervals: 8000 };
    let mut unresolved = false;
    for ((pts, &short), &gap) in tabulated.iter_mut().zip(&cut_short).zip(&gaps) {
        unresolved |= short && pts.last().map_or(true, |p| p.1 >= floor);
        let last = pts.iter().rposition(|p| p.1 >= floor).unwrap_or(0);
        let keep = (last + 2).min(pts.len());
        pts.truncate(keep);
        let (a, b) = (pts[0].0, pts[pts.len() - 1].0);
        let (v, _) = integrate_real(|x| source.density(x), a.min(b), a.max(b), opts)?;
        // the sliver next to a singular edge, as a rectangle
        norm += v + gap * pts[0].1;
        // Log-linear fit over the outer fifth of the retained stretch.
        let start = pts.len() - (pts.len() / 5).max(3).min(pts.len());
        let tail: Vec<(f64, f64)> = pts[start..].iter().filter(|p| p.1 > 0.0).map(|p| (p.0.abs(), p.1.ln())).collect();
        let r = if tail.len() >= 3 { -fit_slope(&tail) } else { f64::NAN };
        rate = rate.min(if r.is_nan() { f64::NEG_INFINITY } else { r });
    }
    let value_at_origin = if spec.mirror {
        let d = spec.domain();
        let edge = if d.lower >= 0.0 { d.lower + grid.edge_offset } else { 0.0 };
        Some(source.density(edge)?)
    } else {
        None
    };
    let mut samples: Vec<(f64, f64)> = tabulated.into_iter().flatten().map(|(x, r)| (x, r / norm)).collect();
    samples.sort_by(|a, b| a.0.total_cmp(&b.0));
    samples.dedup_by(|a, b| a.0 == b.0);
    let integrable = rate > 0.0 && norm.is_finite() && !unresolved;
    Ok(DensityReport { norm, value_at_origin, tail_decay_rate: rate, integrable, samples })
}

/// Residual of the Ψ1 (sign +1) or Ψ2 (sign −1) equation on grids of spacing
/// `hs` centred at `x_mid`; returns (h, residual) pairs and the observed order
/// between the last two.
pub fn refinement_study(spec: &PotentialSpec, mode: ModeParams, sign: f64, x_mid: f64, hs: &[f64]) -> Result<(Vec<(f64, f64)>, f64)> {
    if hs.len() < 2 {
        return Err(Error::Grid("need at least two grid spacings".into()));
    }
    let mut out = Vec::new();
    for &h in hs {
        let f: Vec<(f64, Cx)> = (-4i32..=4)
            .map(|i| {
                let x = x_mid + i as f64 * h;
                let s = spinor(spec, mode, x)?;
                Ok((x, if sign > 0.0 { s.psi1 } else { s.psi2 }))
            })
            .collect::<Result<_>>()?;
        out.push((h, sse_residual(spec, mode, &f, sign)?));
    }
    let n = out.len();
    let (h1, r1) = out[n - 2];
    let (h2, r2) = out[n - 1];
    Ok((out, (r1 / r2).ln() / (h1 / h2).ln()))
}

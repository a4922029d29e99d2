//! Degeneration conditions (E = 0) under which the hypergeometric factors of
//! Ψ1 become polynomials, and the k_y values solving them.

use crate::error::{Error, Result};
use crate::potentials::{Family, PotentialSpec};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ConditionId {
    /// Lambert α = −n.
    LamAlpha,
    /// Exponential α = −n.
    ExpAlpha,
    /// Exponential β = −n, n ≥ 1 (β + 1 a nonpositive integer).
    ExpBeta,
    /// Exponential γ − α − 1 = −(n+1).
    ExpGamma1,
    /// Exponential γ − β − 1 = −(n+1).
    ExpGamma2,
}

impl ConditionId {
    pub const ALL: [ConditionId; 5] = [
        ConditionId::LamAlpha,
        ConditionId::ExpAlpha,
        ConditionId::ExpBeta,
        ConditionId::ExpGamma1,
        ConditionId::ExpGamma2,
    ];

    pub fn family(self) -> Family {
        match self {
            ConditionId::LamAlpha => Family::LambertW,
            _ => Family::InvSqrtExp,
        }
    }

    pub fn for_family(family: Family) -> Vec<ConditionId> {
        Self::ALL.iter().copied().filter(|c| c.family() == family).collect()
    }

    pub fn n_min(self) -> u64 {
        match self {
            ConditionId::ExpBeta => 1,
            _ => 0,
        }
    }

    pub fn target(self, n: u64) -> f64 {
        match self {
            ConditionId::ExpGamma1 | ConditionId::ExpGamma2 => -(n as f64) - 1.0,
            _ => -(n as f64),
        }
    }

    fn n_of_target(self, t: f64) -> f64 {
        match self {
            ConditionId::ExpGamma1 | ConditionId::ExpGamma2 => -t - 1.0,
            _ => -t,
        }
    }

    /// Necessary sign of σ for real roots, where one is known.
    pub fn required_sigma_sign(self) -> Option<f64> {
        match self {
            ConditionId::LamAlpha | ConditionId::ExpBeta => Some(-1.0),
            ConditionId::ExpAlpha => Some(1.0),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ConditionId::LamAlpha => "lam_alpha",
            ConditionId::ExpAlpha => "exp_alpha",
            ConditionId::ExpBeta => "exp_beta",
            ConditionId::ExpGamma1 => "exp_gamma1",
            ConditionId::ExpGamma2 => "exp_gamma2",
        }
    }

    pub fn parse(s: &str) -> Option<ConditionId> {
        Self::ALL.iter().copied().find(|c| c.name() == s || format!("{c:?}") == s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ElementaryRoot {
    pub condition: ConditionId,
    pub n: u64,
    /// Positive roots, ascending; −k_y solves the condition as well.
    pub roots: Vec<f64>,
}

/// Admissible n: `n_min..=n_max` (unbounded when `n_max` is None), with the
/// continuous bounds `lower < n < upper` the range of the condition implies.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NRange {
    pub n_min: u64,
    pub n_max: Option<u64>,
    pub lower: f64,
    pub upper: f64,
    /// An n whose only root sits exactly on the k_y-domain bound.
    pub endpoint_n: Option<u64>,
}

impl NRange {
    pub fn contains(&self, n: u64) -> bool {
        n >= self.n_min && self.n_max.map_or(true, |m| n <= m)
    }

    pub fn is_empty(&self) -> bool {
        self.n_max.map_or(false, |m| m < self.n_min)
    }
}

/// Lower bound of |k_y| for which every square root in the condition is real.
pub fn ky_domain_bound(spec: &PotentialSpec) -> f64 {
    match spec.family {
        Family::LambertW => spec.v0.abs().max((spec.v0 + spec.v1).abs()),
        Family::InvSqrtExp => (spec.v0 + spec.v1).abs().max((spec.v0 - spec.v1).abs()),
    }
}

fn root_of(k2: f64, a: f64) -> f64 {
    (k2 - a * a).max(0.0).sqrt()
}

/// Value of the condition's left-hand side at k_y (E = 0).
pub fn condition_value(spec: &PotentialSpec, cond: ConditionId, ky: f64) -> Result<f64> {
    if cond.family() != spec.family {
        return Err(Error::InvalidSpec(format!("{cond:?} does not apply to the {:?} family", spec.family)));
    }
    let b = ky_domain_bound(spec);
    let k = ky.abs();
    if !(k >= b) {
        return Err(Error::Domain(format!("|k_y| = {k} below the domain bound {b}")));
    }
    let k2 = k * k;
    let (s, v0, v1) = (spec.sigma, spec.v0, spec.v1);
    let r0 = root_of(k2, v0);
    let v = match cond {
        ConditionId::LamAlpha => {
            let sum = r0 + root_of(k2, v0 + v1);
            s * (v1 * v1 + sum * sum) / (2.0 * r0)
        }
        _ => {
            let rp = root_of(k2, v0 + v1);
            let rm = root_of(k2, v0 - v1);
            match cond {
                // (rp − r0) + (rm − r0) without cancellation at large k_y
                ConditionId::ExpAlpha => {
                    let a0 = v0 * v0;
                    s * ((a0 - (v0 + v1).powi(2)) / (rp + r0) + (a0 - (v0 - v1).powi(2)) / (rm + r0))
                }
                ConditionId::ExpBeta => s * (2.0 * r0 + rp + rm),
                ConditionId::ExpGamma1 => s * (2.0 * r0 - rp + rm),
                _ => s * (-2.0 * r0 - rp + rm),
            }
        }
    };
    if !v.is_finite() {
        return Err(Error::Domain(format!("{cond:?} diverges at |k_y| = {k}")));
    }
    Ok(v)
}

pub fn alpha_of_ky(spec: &PotentialSpec, ky: f64) -> Result<f64> {
    let cond = match spec.family {
        Family::LambertW => ConditionId::LamAlpha,
        Family::InvSqrtExp => ConditionId::ExpAlpha,
    };
    condition_value(spec, cond, ky)
}

pub fn beta_of_ky(spec: &PotentialSpec, ky: f64) -> Result<f64> {
    condition_value(spec, ConditionId::ExpBeta, ky)
}

const SCAN_DECADES: (f64, f64) = (-9.0, 8.0);
const SCAN_POINTS: usize = 1700;

#[derive(Debug, Clone, Copy)]
struct Piece {
    ka: f64,
    fa: f64,
    kb: f64,
    fb: f64,
}

/// Monotone pieces of the condition over [bound, bound·(1+1e8)], and the
/// value at the bound when it is finite.
#[derive(Debug, Clone)]
pub struct ConditionProfile {
    pub bound: f64,
    pub endpoint_value: Option<f64>,
    /// Interior extrema (k_y, value).
    pub extrema: Vec<(f64, f64)>,
    pub sup: f64,
    pub inf: f64,
    sup_attained: bool,
    inf_attained: bool,
    pieces: Vec<Piece>,
}

fn golden_extremum<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, maximize: bool) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let sgn = if maximize { -1.0 } else { 1.0 };
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (sgn * f(c), sgn * f(d));
    for _ in 0..200 {
        if (b - a).abs() <= 1e-15 * b.abs() {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = sgn * f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = sgn * f(d);
        }
    }
    let k = 0.5 * (a + b);
    (k, f(k))
}

pub fn condition_profile(spec: &PotentialSpec, cond: ConditionId) -> Result<ConditionProfile> {
    let b = ky_domain_bound(spec);
    if !(b > 0.0) {
        return Err(Error::Domain("k_y domain bound is zero".into()));
    }
    let endpoint_value = condition_value(spec, cond, b).ok();
    let f = |k: f64| condition_value(spec, cond, k).unwrap_or(f64::NAN);
    let ks: Vec<f64> = (0..SCAN_POINTS)
        .map(|i| {
            let e = SCAN_DECADES.0 + (SCAN_DECADES.1 - SCAN_DECADES.0) * i as f64 / (SCAN_POINTS - 1) as f64;
            b * (1.0 + 10f64.powf(e))
        })
        .collect();
    let fs: Vec<f64> = ks.iter().map(|&k| f(k)).collect();
    if fs.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain(format!("{cond:?} not finite on the scan grid")));
    }
    let mut extrema = Vec::new();
    for i in 1..ks.len() - 1 {
        let (dl, dr) = (fs[i] - fs[i - 1], fs[i + 1] - fs[i]);
        if dl > 0.0 && dr <= 0.0 {
            extrema.push(golden_extremum(f, ks[i - 1], ks[i + 1], true));
        } else if dl < 0.0 && dr >= 0.0 {
            extrema.push(golden_extremum(f, ks[i - 1], ks[i + 1], false));
        }
    }
    let (k_first, f_first) = match endpoint_value {
        Some(v) => (b, v),
        None => (ks[0], fs[0]),
    };
    let mut nodes = vec![(k_first, f_first)];
    nodes.extend(extrema.iter().copied());
    nodes.push((ks[ks.len() - 1], fs[fs.len() - 1]));
    let pieces = nodes
        .windows(2)
        .map(|w| Piece { ka: w[0].0, fa: w[0].1, kb: w[1].0, fb: w[1].1 })
        .collect();

    let mut sup = f64::NEG_INFINITY;
    let mut inf = f64::INFINITY;
    let (mut sup_attained, mut inf_attained) = (false, false);
    let mut consider = |v: f64, attained: bool| {
        if v > sup || (v == sup && attained) {
            sup = v;
            sup_attained = attained;
        }
        if v < inf || (v == inf && attained) {
            inf = v;
            inf_attained = attained;
        }
    };
    consider(f_first, endpoint_value.is_some() && endpoint_closed(cond));
    for &(_, v) in &extrema {
        consider(v, true);
    }
    // Tail: linear growth counts as unbounded, otherwise the cap value stands
    // in for the (unattained) limit.
    let n = fs.len();
    let tail = fs[n - 1];
    let earlier = fs[n - 1 - SCAN_POINTS / 17 * 2];
    let tail_value = if tail.abs() > 50.0 * earlier.abs() + 1.0 { tail.signum() * f64::INFINITY } else { tail };
    consider(tail_value, false);
    if endpoint_value.is_none() {
        // Divergence at the bound itself (Lambert with |V0| as the bound).
        let near = fs[0];
        let nearer = f(b * (1.0 + 1e-12));
        if nearer.abs() > 10.0 * near.abs() {
            consider(nearer.signum() * f64::INFINITY, false);
        }
    }
    Ok(ConditionProfile { bound: b, endpoint_value, extrema, sup, inf, sup_attained, inf_attained, pieces })
}

impl ConditionProfile {
    fn contains(&self, t: f64) -> bool {
        let above = if self.inf_attained { t >= self.inf } else { t > self.inf };
        let below = if self.sup_attained { t <= self.sup } else { t < self.sup };
        above && below
    }
}

fn check_sign(spec: &PotentialSpec, cond: ConditionId) -> Result<()> {
    if cond.family() != spec.family {
        return Err(Error::InvalidSpec(format!("{cond:?} does not apply to the {:?} family", spec.family)));
    }
    if let Some(s) = cond.required_sigma_sign() {
        if spec.sigma * s <= 0.0 {
            let want = if s < 0.0 { "sigma < 0" } else { "sigma > 0" };
            return Err(Error::Sign(format!("{cond:?} has real roots only for {want}, got sigma = {}", spec.sigma)));
        }
    }
    Ok(())
}

pub fn admissible_n(spec: &PotentialSpec, cond: ConditionId) -> Result<NRange> {
    check_sign(spec, cond)?;
    let p = condition_profile(spec, cond)?;
    let lower = cond.n_of_target(p.sup);
    let upper = cond.n_of_target(p.inf);
    let ok = |n: i64| n >= cond.n_min() as i64 && p.contains(cond.target(n as u64));
    let mut lo = (lower.ceil() as i64).max(cond.n_min() as i64);
    if !ok(lo) {
        lo += 1;
    }
    let hi = if upper.is_infinite() {
        None
    } else {
        let mut m = upper.floor() as i64;
        if m >= lo && !ok(m) {
            m -= 1;
        }
        Some(m)
    };
    let (n_min, n_max) = match hi {
        None => (lo as u64, None),
        Some(m) if m >= lo => (lo as u64, Some(m as u64)),
        // Empty range, encoded as n_max < n_min.
        Some(_) => (lo.max(1) as u64, Some(lo.max(1) as u64 - 1)),
    };
    let endpoint_n = p.endpoint_value.filter(|_| endpoint_closed(cond)).and_then(|v| {
        let n = cond.n_of_target(v);
        let r = n.round();
        ((n - r).abs() < ROOT_RESIDUAL && r >= cond.n_min() as f64).then_some(r as u64)
    });
    Ok(NRange { n_min, n_max, lower, upper, endpoint_n })
}

/// The α and β conditions come with strict range inequalities (the solution
/// formulas degenerate at the bound); the γ conditions are accepted on their
/// residual alone, so a root exactly at the bound counts.
fn endpoint_closed(cond: ConditionId) -> bool {
    matches!(cond, ConditionId::ExpGamma1 | ConditionId::ExpGamma2)
}

fn bisect<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, target: f64) -> f64 {
    let mut fa = f(a) - target;
    for _ in 0..400 {
        let m = 0.5 * (a + b);
        if m <= a.min(b) || m >= a.max(b) {
            break;
        }
        let fm = f(m) - target;
        if fm == 0.0 {
            return m;
        }
        if (fm > 0.0) == (fa > 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    let fb = f(b) - target;
    if fa.abs() <= fb.abs() {
        a
    } else {
        b
    }
}

pub const ROOT_RESIDUAL: f64 = 1e-10;

pub fn solve_ky(spec: &PotentialSpec, cond: ConditionId, n: u64) -> Result<ElementaryRoot> {
    let range = admissible_n(spec, cond)?;
    if !range.contains(n) {
        return Err(Error::NoRoot(format!("n = {n} not admissible for {cond:?} (range {:.6} < n < {:.6})", range.lower, range.upper)));
    }
    let p = condition_profile(spec, cond)?;
    let t = cond.target(n);
    let f = |k: f64| condition_value(spec, cond, k).unwrap_or(f64::NAN);
    let mut roots: Vec<f64> = Vec::new();
    if let Some(v) = p.endpoint_value.filter(|_| endpoint_closed(cond)) {
        if (v - t).abs() < ROOT_RESIDUAL {
            roots.push(p.bound);
        }
    }
    for piece in &p.pieces {
        let (lo, hi) = (piece.fa.min(piece.fb), piece.fa.max(piece.fb));
        if !(t >= lo && t <= hi) {
            continue;
        }
        let k = bisect(f, piece.ka, piece.kb, t);
        let at_open_bound = !endpoint_closed(cond) && k == p.bound;
        if !at_open_bound && (f(k) - t).abs() < ROOT_RESIDUAL && !roots.iter().any(|&r| (r - k).abs() <= 1e-12 * k) {
            roots.push(k);
        }
    }
    // A piece starting at a divergent bound may need a closer start.
    if roots.is_empty() && p.endpoint_value.is_none() {
        for &s in &[1e-12, 1e-15] {
            let ka = p.bound * (1.0 + s);
            let kb = p.pieces[0].kb;
            let (fa, fb) = (f(ka), f(kb));
            if fa.is_finite() && (fa - t) * (fb - t) <= 0.0 {
                let k = bisect(f, ka, kb, t);
                if (f(k) - t).abs() < ROOT_RESIDUAL {
                    roots.push(k);
                    break;
                }
            }
        }
    }
    if roots.is_empty() {
        return Err(Error::NoRoot(format!("{cond:?} = {t} has no root with residual below {ROOT_RESIDUAL:e}")));
    }
    roots.sort_by(f64::total_cmp);
    Ok(ElementaryRoot { condition: cond, n, roots })
}

/// The first condition of the potential's family that k_y satisfies (E = 0), with its n.
pub fn elementary_condition_at(spec: &PotentialSpec, ky: f64) -> Option<(ConditionId, u64)> {
    ConditionId::for_family(spec.family).into_iter().find_map(|c| {
        let v = condition_value(spec, c, ky).ok()?;
        let n = c.n_of_target(v);
        let r = n.round();
        ((n - r).abs() < 1e-9 && r >= c.n_min() as f64).then_some((c, r as u64))
    })
}

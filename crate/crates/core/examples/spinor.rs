// Closed-form spinor of the Lambert step at its n = 2 elementary point
// k_y = 5/4, compared with the explicit elementary expression.

use dirac_darboux::dirac_core::{spinor, sse_residual};
use dirac_darboux::potentials::{ModeParams, PotentialSpec};
use dirac_darboux::specfun::{lambert_w0, Cx};

fn explicit(x: f64) -> (Cx, Cx) {
    let w = lambert_w0((-x).exp()).unwrap();
    let e = (-1.25 * x).exp();
    let psi1 = (Cx::new(50.0 / 3.0, 25.0 / 3.0) + Cx::new(10.0, -10.0 / 3.0) / w - Cx::new(4.0 / 3.0, -1.0) / (w * w)) * e;
    let psi2 = -5.0 / 3.0
        * (0.75 * x + 2.0 * w).exp()
        * (Cx::new(0.0, -1.0) + Cx::new(2.0, 6.0) * w + Cx::new(10.0, 5.0) * w * w);
    (psi1, psi2)
}

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let spec = PotentialSpec::lambert(0.0, -1.0, -1.0, 0.0, false)?;
    let mode = ModeParams::new(0.0, 1.25);

    // Solutions are fixed only up to a constant: compare ratios to a reference point.
    let x_ref = 0.3;
    let s_ref = spinor(&spec, mode, x_ref)?;
    let (p1_ref, p2_ref) = explicit(x_ref);
    for x in [-2.0, -0.5, 1.0, 2.5, 4.0] {
        let s = spinor(&spec, mode, x)?;
        let (p1, p2) = explicit(x);
        let d1 = (s.psi1 / s_ref.psi1 - p1 / p1_ref).norm() / (p1 / p1_ref).norm();
        let d2 = (s.psi2 / s_ref.psi2 - p2 / p2_ref).norm() / (p2 / p2_ref).norm();
        println!("x = {x:>5}: psi1 = {:.6}, ratio mismatch {d1:.1e} / {d2:.1e}", s.psi1);
    }

    let h = 1e-3;
    let grid: Vec<(f64, Cx)> = (0..17).map(|i| {
        let x = 0.5 + i as f64 * h;
        (x, spinor(&spec, mode, x).unwrap().psi1)
    }).collect();
    println!("second-order residual near x = 0.5: {:.2e}", sse_residual(&spec, mode, &grid, 1.0)?);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("spinor example");
}

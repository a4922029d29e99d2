// Closed-form Ψ1 against adaptive Runge–Kutta integration, and the residual
// convergence order under grid refinement.

use dirac_darboux::dirac_core::psi1;
use dirac_darboux::potentials::{ModeParams, PotentialSpec};
use dirac_darboux::verify::{integrate_sse, refinement_study, OdeSetup};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let spec = PotentialSpec::lambert(0.0, -1.0, -1.0, 0.0, false)?;
    let mode = ModeParams::new(0.0, 1.25);
    for tol in [1e-6, 1e-8, 1e-10] {
        let run = integrate_sse(&spec, mode, 1.0, OdeSetup::new(-2.0, 3.0, tol))?;
        let (exact, _) = psi1(&spec, mode, 3.0)?;
        println!("tol {tol:.0e}: {} steps, relative error {:.2e}", run.samples.len() - 1, (run.end.0 - exact).norm() / exact.norm());
    }

    let spec = PotentialSpec::exponential(0.2, 0.7, -0.8, 0.0, true)?;
    let (study, order) = refinement_study(&spec, ModeParams::new(0.1, 1.7), 1.0, 1.0, &[0.08, 0.04, 0.02])?;
    for (h, r) in study {
        println!("h = {h}: residual {r:.3e}");
    }
    println!("observed order {order:.2}");
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("ODE oracle example");
}

// Darboux partner of the exponential step, checked against its closed form
// and the structural diagnostics.

use dirac_darboux::darboux::{check_conditions, transformed_potential, TransformSpec};
use dirac_darboux::potentials::PotentialSpec;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let spec = PotentialSpec::exponential(0.0, 1.0, 0.75, 0.0, false)?;
    let t = TransformSpec::symmetric(13.0 / 12.0)?;
    println!("{:?}", check_conditions(&spec, t));

    let closed = |x: f64| {
        let e = (4.0 * x / 3.0).exp();
        (13.0 + 17.0 * e) / ((13.0 + 9.0 * e) * (1.0 + e).sqrt())
    };
    let mut worst: f64 = 0.0;
    for i in 0..=40 {
        let x = -5.0 + 0.25 * i as f64;
        let p = transformed_potential(&spec, 0.0, t, x)?;
        worst = worst.max((p.m11.re - closed(x)).abs() / closed(x).abs());
        if i % 8 == 0 {
            println!("x = {x:>5}: U1 = {:.12}  imag {:.1e}  gap {:.1e}", p.m11.re, p.imag_max, p.diag_gap);
        }
    }
    println!("max relative deviation from the closed form: {worst:.2e}");
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("darboux example");
}

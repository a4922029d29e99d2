// Normalizable states of the mirrored wells before and after the
// transformation.

use dirac_darboux::darboux::TransformSpec;
use dirac_darboux::potentials::{ModeParams, PotentialSpec};
use dirac_darboux::verify::{density_report, DensityGrid, DensitySource};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let lambert = PotentialSpec::lambert(1.0, -1.0, -1.0, -1.0, true)?.mirrored()?;
    let exponential = PotentialSpec::exponential(0.0, -1.0, -1.0, 0.0, true)?.mirrored()?;
    let cases = [
        ("Lambert well", lambert, TransformSpec::new(0.5, -0.5)?, [1.0, 1.5, 2.0]),
        ("exponential well", exponential, TransformSpec::new(2.0, -2.0)?, [2.5, 3.0, 3.5]),
    ];
    for (name, spec, t, kys) in cases {
        println!("{name}");
        for ky in kys {
            let mode = ModeParams::new(0.0, ky);
            let before = density_report(DensitySource::Original { spec: &spec, mode }, DensityGrid::default())?;
            let after = density_report(DensitySource::Transformed { spec: &spec, transform: t, mode }, DensityGrid::default())?;
            println!(
                "  k_y = {ky}: integrable {} / {} after, decay {:.3} / {:.3}, rho(0)/norm {:.4}",
                before.integrable,
                after.integrable,
                before.tail_decay_rate,
                after.tail_decay_rate,
                before.value_at_origin.unwrap_or(f64::NAN) / before.norm
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("bound states example");
}

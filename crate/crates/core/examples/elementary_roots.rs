// Wavenumbers at which the solutions become elementary.

use dirac_darboux::elementary::{admissible_n, solve_ky, ConditionId};
use dirac_darboux::potentials::PotentialSpec;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cases = [
        ("Lambert step", PotentialSpec::lambert(0.0, 1.0, -1.0, 0.0, false)?, ConditionId::LamAlpha),
        ("Lambert, V0 = 1/2", PotentialSpec::lambert(0.5, -1.0, -0.25, 0.0, false)?, ConditionId::LamAlpha),
        ("exponential, alpha", PotentialSpec::exponential(0.0, 2.0, 1.0, 0.0, false)?, ConditionId::ExpAlpha),
        ("exponential, beta", PotentialSpec::exponential(0.0, -1.5, -1.0, 0.0, false)?, ConditionId::ExpBeta),
        (
            "mirrored well, gamma",
            PotentialSpec::exponential(0.0, -1.0, -1.0, 0.0, true)?.mirrored()?,
            ConditionId::ExpGamma1,
        ),
    ];
    for (name, spec, cond) in cases {
        let range = admissible_n(&spec, cond)?;
        let top = range.n_max.unwrap_or(range.n_min + 3);
        println!("{name} ({}): n in {}..={top}{}", cond.name(), range.n_min, if range.n_max.is_none() { " ..." } else { "" });
        for n in range.n_min..=top {
            println!("  n = {n}: k_y = {:?}", solve_ky(&spec, cond, n)?.roots);
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("elementary roots example");
}

// Both potential families, regular and singular, with their domains.

use dirac_darboux::potentials::PotentialSpec;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let specs = [
        ("Lambert step", PotentialSpec::lambert(0.0, -1.0, -1.0, 0.0, false)?),
        ("Lambert, singular", PotentialSpec::lambert(0.0, 1.0, -0.25, 0.0, true)?),
        ("exponential step", PotentialSpec::exponential(0.0, 1.0, 0.75, 0.0, false)?),
        ("mirrored exponential well", PotentialSpec::exponential(0.0, -1.0, -1.0, 0.0, true)?.mirrored()?),
    ];
    for (name, spec) in specs {
        let dom = spec.domain();
        println!("{name}: {dom}");
        for x in [-3.0, -1.0, 0.3, 1.0, 3.0] {
            match spec.eval_u0(x) {
                Ok(u) => println!("  u0({x:>4}) = {u:>10.6}   u0' = {:>10.6}", spec.eval_u0_dx(x)?),
                Err(e) => println!("  u0({x:>4}) : {e}"),
            }
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("potentials example");
}

// Scenario files and the reproduction manifest, as the command-line tool
// uses them.

use dirac_darboux::cli::{darboux_table, emit, manifest, run_case, Format, Scenario, CONFIGS};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let (_, text) = CONFIGS.iter().find(|(name, _)| *name == "setx3").expect("shipped config");
    let mut sc = Scenario::from_toml(text)?;
    sc.grid.n_points = 5;
    let table = darboux_table(&sc)?;
    emit(&table, Format::Csv, None, &mut std::io::stdout())?;

    for case in manifest().iter().filter(|c| c.id.starts_with("partner_") || c.id == "kyx_n2") {
        println!("{}", run_case(case, None)?);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("scenario example");
}

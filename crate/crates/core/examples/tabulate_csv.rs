// Tabulating a density on a grid and writing it as CSV.

use stable_potentials::grid::{tabulate, GridSpec};
use stable_potentials::reflected::{r1_endpoints, r1_zero_density};
use stable_potentials::make_params;

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let p = make_params(1.2, 0.5)?;
    let table = tabulate(|y| r1_zero_density(&p, y), &GridSpec::new(0.0, 1.0, 9).with_margin(0.01), r1_endpoints(&p))?;
    let dir = tempfile::tempdir()?;
    let path = dir.path().join("r1_zero.csv");
    let mut w = csv::Writer::from_path(&path)?;
    w.write_record(["abscissa", "value"])?;
    for (y, v) in table.iter() {
        w.write_record([format!("{y:?}"), format!("{v:?}")])?;
    }
    w.flush()?;
    print!("{}", std::fs::read_to_string(&path)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}

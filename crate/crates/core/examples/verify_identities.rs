// Running the identity suite and printing its JSON report.

use stable_potentials::make_params;
use stable_potentials::verify::{identities, IdentityTolerances, Report};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let mut checks = Vec::new();
    for (a, r) in [(0.7, 0.6), (1.5, 0.4)] {
        checks.extend(identities(&make_params(a, r)?, &IdentityTolerances::default())?);
    }
    let report = Report::new("identities", checks);
    println!("{}", report.to_json());
    if !report.pass {
        return Err("identity suite failed".into());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}

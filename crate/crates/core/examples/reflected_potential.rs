// The process reflected in its infimum, killed above one.

use stable_potentials::reflected::{
    expected_passage_time, r1_density, r1_zero_density, r_xyz_density, reflected_triple_mass,
};
use stable_potentials::{make_params, QuadratureSpec};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let spec = QuadratureSpec::default();
    let cauchy = make_params(1.0, 0.5)?;
    println!("Cauchy r1(0, 1/2) = {}", r1_zero_density(&cauchy, 0.5)?);
    println!("Cauchy E_0 T = {:.15} (pi/2 = {:.15})", expected_passage_time(&cauchy, 0.0, &spec)?, std::f64::consts::FRAC_PI_2);

    let p = make_params(0.7, 0.6)?;
    for x in [0.0, 0.3, 0.7] {
        let row: Vec<String> = [0.2, 0.5, 0.8]
            .iter()
            .map(|&y| format!("{:.8}", r1_density(&p, x, y, &spec).unwrap_or(f64::NAN)))
            .collect();
        println!("r1({x}, 0.2 | 0.5 | 0.8) = {}", row.join(" | "));
    }
    println!("r(0.3, 0.5, 0.9) = {:.10}", r_xyz_density(&p, 0.3, 0.5, 0.9)?);

    let tspec = QuadratureSpec::new(1e-7, 1e-12, 400)?;
    println!("reflected triple mass from 0.3: {:.8}", reflected_triple_mass(&p, 0.3, &tspec)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}

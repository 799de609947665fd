// Joint law of undershoot from the maximum, undershoot and overshoot at
// the upward exit from [0, 1].

use stable_potentials::exit_laws::exit_up_prob;
use stable_potentials::killed::{exit_overshoot_cdf, exit_triple_density, exit_triple_mass, exit_undershoot_cdf};
use stable_potentials::{make_params, QuadratureSpec};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let p = make_params(1.0, 0.5)?;
    let d = exit_triple_density(&p, 0.5, 0.25, 0.5, 0.5)?;
    println!("Cauchy triple density at (x,u,v,y) = (1/2,1/4,1/2,1/2): {d:.12}");
    println!("8/(3 pi^2) = {:.12}", 8.0 / (3.0 * std::f64::consts::PI.powi(2)));

    let spec = QuadratureSpec::new(1e-7, 1e-12, 400)?;
    let p = make_params(0.7, 0.6)?;
    let x = 0.3;
    println!(
        "mass {:.8} vs P_x(up) {:.8}",
        exit_triple_mass(&p, x, &spec)?,
        exit_up_prob(&p, x)?
    );
    for y in [0.01, 0.1, 1.0, 10.0] {
        println!("P(up, overshoot <= {y:5}) = {:.6}", exit_overshoot_cdf(&p, x, y, &spec)?);
    }
    for v in [0.1, 0.5, 0.9] {
        println!("P(up, undershoot <= {v}) = {:.6}", exit_undershoot_cdf(&p, x, v, &spec)?);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}

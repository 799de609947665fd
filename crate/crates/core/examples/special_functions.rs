// Gamma, beta and the incomplete beta integrals used by the densities.

use stable_potentials::special::{gamma, inc_beta, j_integral, log_gamma, reg_inc_beta, QuadratureSpec};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let spec = QuadratureSpec::default();
    println!("Gamma(0.5)^2 = {:.15}", gamma(0.5)?.powi(2));
    let (lg, sign) = log_gamma(-2.5)?;
    println!("log|Gamma(-2.5)| = {lg:.12}, sign {:+}", sign.as_f64());
    // second parameter at or below zero is fine away from w = 1
    println!("B(0.3; 0.75, -0.25) = {:.12}", inc_beta(0.3, 0.75, -0.25, &spec)?);
    println!("I_0.25(1/2, 1/2) = {:.15}", reg_inc_beta(0.25, 0.5, 0.5)?);
    println!("J(1/8; 1/2, 1/2) = {:.15} (ln 2 = {:.15})", j_integral(0.125, 0.5, 0.5, &spec)?, 2f64.ln());
    match j_integral(f64::INFINITY, 0.5, 0.5, &spec) {
        Err(e) => println!("J(inf; 1/2, 1/2): {e}"),
        Ok(v) => println!("J(inf; 1/2, 1/2) = {v}"),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}

// Potential density of the process killed on leaving an interval.

use stable_potentials::killed::{mean_exit_time, u1_density, u_a_density, Interval};
use stable_potentials::{make_params, QuadratureSpec};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let spec = QuadratureSpec::default();
    let p = make_params(1.0, 0.5)?;
    let v = u1_density(&p, 0.75, 0.25, &spec)?;
    println!("Cauchy u1(3/4, 1/4) = {v:.15}  (ln 2 / pi = {:.15})", 2f64.ln() / std::f64::consts::PI);

    let p = make_params(1.5, 0.4)?;
    for y in [0.1, 0.3, 0.5, 0.7, 0.9] {
        println!("u1(0.4, {y}) = {:.10}", u1_density(&p, 0.4, y, &spec)?);
    }

    // same density on [-1, 3], by scaling
    let wide = Interval::new(-1.0, 3.0)?;
    println!("u_[-1,3](0.6, 1.4) = {:.10}", u_a_density(&p, &wide, 0.6, 1.4, &spec)?);

    let x: f64 = 0.4;
    let closed = x.powf(p.alpha() * p.rho_hat()) * (1.0 - x).powf(p.alpha() * p.rho())
        / stable_potentials::special::gamma(p.alpha() + 1.0)?;
    println!("E_x exit time: quadrature {:.12}, closed form {closed:.12}", mean_exit_time(&p, x, &spec)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}

// Occupation histogram of simulated killed paths against u1.

use stable_potentials::killed::{u1_density, u1_endpoints, Interval};
use stable_potentials::grid::DensityGrid;
use stable_potentials::mc::{
    cell_averages, compare, estimate_density, simulate_exit, CompareThresholds, HistogramSpec, McConfig,
};
use stable_potentials::{make_params, QuadratureSpec};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let paths = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2000);
    let p = make_params(1.5, 0.4)?;
    let x = 0.5;
    let hist = HistogramSpec::new(0.0, 1.0, 10)?;
    let cfg = McConfig::new(paths, 1e-3, 2024, hist);
    let records = simulate_exit(&p, x, &Interval::unit(), &cfg)?;
    let (est, errs) = estimate_density(&records, &cfg)?;

    let spec = QuadratureSpec::default();
    let breaks = [(0.0, p.alpha() * p.rho()), (x, 0.0), (1.0, p.alpha() * p.rho_hat())];
    let exact = cell_averages(|y| u1_density(&p, x, y, &spec), &hist, &breaks, &spec)?;
    let analytic = DensityGrid::new(hist.centres(), exact, u1_endpoints(&p))?;
    let report = compare(&analytic, &est, &errs, &CompareThresholds::central(&hist, 0.8, 0.05))?;

    println!("cell    mc        se        exact     z");
    for (i, e) in errs.iter().enumerate() {
        println!(
            "{:.3}  {:.5}  {:.5}  {:.5}  {:+.2}",
            report.points[i], e.value, e.std_error, analytic.values()[i], report.z_scores[i]
        );
    }
    println!("sup relative deviation {:.4} (pass: {})", report.sup_rel_dev, report.pass);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}

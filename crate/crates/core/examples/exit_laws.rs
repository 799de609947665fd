// Exit probabilities and the infimum and supremum laws, with a small
// simulated cross-check of the infimum law.

use stable_potentials::exit_laws::{
    exit_up_prob, infimum_before_passage_cdf, infimum_before_passage_density, supremum_at_passage_survival,
};
use stable_potentials::mc::{ks_distance, simulate_passage_below, HistogramSpec, McConfig};
use stable_potentials::{make_params, QuadratureSpec};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let spec = QuadratureSpec::default();
    let p = make_params(1.5, 0.4)?;
    for x in [0.1, 0.5, 0.9] {
        println!("P_{x}(up) = {:.10}", exit_up_prob(&p, x)?);
    }
    println!("infimum law density at 0.5: {:.10}", infimum_before_passage_density(&p, 0.5)?);
    println!("P(sup >= 2) = {:.10}", supremum_at_passage_survival(&p, 2.0, &spec)?);

    // paths from 1 until they pass below 0; those wandering above 50 are
    // cut off and count as censored
    let cfg = McConfig::new(2000, 1e-3, 3, HistogramSpec::new(0.0, 1.0, 1)?).with_max_steps(1_000_000);
    let recs = simulate_passage_below(&p, 1.0, 50.0, &cfg)?;
    let done: Vec<f64> = recs
        .iter()
        .filter(|r| !r.stopped_above && !r.capped)
        .map(|r| r.infimum_before)
        .collect();
    let kspec = QuadratureSpec::new(1e-8, 1e-12, 200)?;
    let d = ks_distance(&done, done.len(), |y| infimum_before_passage_cdf(&p, y.min(1.0), &kspec).unwrap_or(f64::NAN), 1.0)?;
    println!("{} of {} paths passed below zero; KS to the infimum law {d:.4}", done.len(), recs.len());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}

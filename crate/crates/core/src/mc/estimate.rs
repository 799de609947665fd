use std::cell::RefCell;

use rayon::prelude::*;
use serde::Serialize;

use super::simulate::{ExitRecord, HistogramSpec, McConfig};
use crate::error::{Error, Result};
use crate::grid::DensityGrid;
use crate::special::{integrate_singular, QuadratureSpec};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub value: f64,
    pub std_error: f64,
    pub n_effective: usize,
    pub seed: u64,
}

/// Sample mean with its standard error.
pub fn estimate_mean<I: IntoIterator<Item = f64>>(values: I, seed: u64) -> Result<McEstimate> {
    // Welford
    let (mut n, mut mean, mut m2) = (0usize, 0.0, 0.0);
    for x in values {
        n += 1;
        let d = x - mean;
        mean += d / n as f64;
        m2 += d * (x - mean);
    }
    if n == 0 {
        return Err(Error::EmptyStream);
    }
    let var = if n > 1 { m2 / (n - 1) as f64 } else { 0.0 };
    Ok(McEstimate {
        value: mean,
        std_error: (var / n as f64).sqrt(),
        n_effective: n,
        seed,
    })
}

/// Occupation density per histogram cell,
/// `Σ occupation mass / (n_paths · cell width)`, with standard errors from
/// the path-to-path variance. Points of the grid are the cell centres.
pub fn estimate_density(
    records: &[ExitRecord],
    cfg: &McConfig,
) -> Result<(DensityGrid, Vec<McEstimate>)> {
    if records.is_empty() {
        return Err(Error::EmptyStream);
    }
    let hist = &cfg.histogram;
    if let Some(r) = records.iter().find(|r| r.occupation.len() != hist.cells) {
        return Err(Error::GridMismatch(format!(
            "record {} has {} cells, histogram has {}",
            r.path_id,
            r.occupation.len(),
            hist.cells
        )));
    }
    let w = hist.width();
    let est = (0..hist.cells)
        .map(|j| estimate_mean(records.iter().map(|r| r.occupation_mass(j) / w), cfg.seed))
        .collect::<Result<Vec<_>>>()?;
    let grid = DensityGrid::new(hist.centres(), est.iter().map(|e| e.value).collect(), [None, None])?;
    Ok((grid, est))
}

/// Cell averages `(1/|C|) ∫_C f` of an analytic density over the histogram
/// cells. `breaks` lists points `(t, p)` where `f ~ |s - t|^p`; cells are
/// split there and the singularity integrated out.
pub fn cell_averages<F>(
    f: F,
    hist: &HistogramSpec,
    breaks: &[(f64, f64)],
    spec: &QuadratureSpec,
) -> Result<Vec<f64>>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let snap = 1e-12 * (hist.hi - hist.lo);
    (0..hist.cells)
        .into_par_iter()
        .map(|j| {
            let (a, b) = hist.edges(j);
            let mut cuts: Vec<(f64, f64)> = vec![(a, 0.0), (b, 0.0)];
            for &(t, p) in breaks {
                if (t - a).abs() <= snap {
                    cuts[0] = (t, p);
                } else if (t - b).abs() <= snap {
                    cuts[1] = (t, p);
                } else if t > a && t < b {
                    cuts.push((t, p));
                }
            }
            cuts.sort_by(|x, y| x.0.total_cmp(&y.0));
            let failure = RefCell::new(None);
            let g = |s: f64| match f(s) {
                Ok(v) => v,
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                    f64::NAN
                }
            };
            let mut total = 0.0;
            for w in cuts.windows(2) {
                let (lo, plo) = w[0];
                let (hi, phi) = w[1];
                total += integrate_singular(|s, _, _| g(s), lo, hi, plo.min(0.0), phi.min(0.0), spec)?.value;
            }
            if let Some(e) = failure.into_inner() {
                return Err(e);
            }
            Ok(total / (b - a))
        })
        .collect()
}

/// Pass/fail thresholds for a density comparison. Only cells whose centre
/// lies in `[central_lo, central_hi]` enter the sup-norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CompareThresholds {
    pub sup_rel_dev: f64,
    pub central_lo: f64,
    pub central_hi: f64,
}

impl CompareThresholds {
    /// The middle `fraction` of the histogram range.
    pub fn central(hist: &HistogramSpec, fraction: f64, sup_rel_dev: f64) -> Self {
        let trim = 0.5 * (1.0 - fraction) * (hist.hi - hist.lo);
        CompareThresholds {
            sup_rel_dev,
            central_lo: hist.lo + trim,
            central_hi: hist.hi - trim,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscrepancyReport {
    pub points: Vec<f64>,
    pub z_scores: Vec<f64>,
    pub rel_devs: Vec<f64>,
    pub central: Vec<bool>,
    pub sup_rel_dev: f64,
    pub max_abs_z: f64,
    pub thresholds: CompareThresholds,
    pub pass: bool,
}

/// Compares an MC estimate with analytic values on the same grid.
pub fn compare(
    analytic: &DensityGrid,
    estimate: &DensityGrid,
    errors: &[McEstimate],
    thresholds: &CompareThresholds,
) -> Result<DiscrepancyReport> {
    if analytic.points() != estimate.points() || errors.len() != estimate.len() {
        return Err(Error::GridMismatch(format!(
            "analytic grid has {} points, estimate {} points and {} errors",
            analytic.len(),
            estimate.len(),
            errors.len()
        )));
    }
    let mut report = DiscrepancyReport {
        points: analytic.points().to_vec(),
        z_scores: Vec::with_capacity(analytic.len()),
        rel_devs: Vec::with_capacity(analytic.len()),
        central: Vec::with_capacity(analytic.len()),
        sup_rel_dev: 0.0,
        max_abs_z: 0.0,
        thresholds: *thresholds,
        pass: true,
    };
    for ((&t, (&a, &m)), e) in analytic
        .points()
        .iter()
        .zip(analytic.values().iter().zip(estimate.values()))
        .zip(errors)
    {
        let diff = m - a;
        let z = if diff == 0.0 { 0.0 } else { diff / e.std_error };
        let rel = if diff == 0.0 { 0.0 } else { (diff / a).abs() };
        let central = t >= thresholds.central_lo && t <= thresholds.central_hi;
        if central {
            report.sup_rel_dev = report.sup_rel_dev.max(rel);
        }
        report.max_abs_z = report.max_abs_z.max(z.abs());
        report.z_scores.push(z);
        report.rel_devs.push(rel);
        report.central.push(central);
    }
    report.pass = report.sup_rel_dev <= thresholds.sup_rel_dev;
    Ok(report)
}

/// `#{samples ≤ t} / n_total`: the empirical, possibly defective,
/// distribution function.
pub fn empirical_cdf(sorted: &[f64], n_total: usize, t: f64) -> f64 {
    sorted.partition_point(|&s| s <= t) as f64 / n_total as f64
}

/// Kolmogorov-Smirnov distance between the empirical law of `samples`
/// (out of `n_total` trials) and `cdf`, whose limit at infinity is
/// `total_mass`. Exact: `cdf` is evaluated at every sample.
pub fn ks_distance<F: Fn(f64) -> f64>(samples: &[f64], n_total: usize, cdf: F, total_mass: f64) -> Result<f64> {
    if samples.is_empty() || n_total < samples.len() {
        return Err(Error::EmptyStream);
    }
    let mut s = samples.to_vec();
    s.sort_by(f64::total_cmp);
    let n = n_total as f64;
    let mut d: f64 = (s.len() as f64 / n - total_mass).abs();
    for (i, &x) in s.iter().enumerate() {
        let f = cdf(x);
        d = d.max((f - i as f64 / n).abs()).max(((i + 1) as f64 / n - f).abs());
    }
    Ok(d)
}

/// KS distance restricted to the abscissae `grid`, with the analytic
/// distribution function supplied there.
pub fn ks_distance_on_grid(samples: &[f64], n_total: usize, grid: &[f64], cdf: &[f64]) -> Result<f64> {
    if grid.len() != cdf.len() {
        return Err(Error::GridMismatch(format!(
            "{} abscissae but {} values",
            grid.len(),
            cdf.len()
        )));
    }
    if n_total == 0 {
        return Err(Error::EmptyStream);
    }
    let mut s = samples.to_vec();
    s.sort_by(f64::total_cmp);
    Ok(grid
        .iter()
        .zip(cdf)
        .map(|(&t, &f)| (empirical_cdf(&s, n_total, t) - f).abs())
        .fold(0.0, f64::max))
}

/// Empirical quantiles of `samples` at levels `k / (m + 1)`, deduplicated.
pub fn quantile_grid(samples: &[f64], m: usize) -> Vec<f64> {
    if samples.is_empty() {
        return Vec::new();
    }
    let mut s = samples.to_vec();
    s.sort_by(f64::total_cmp);
    let mut q: Vec<f64> = (1..=m)
        .map(|k| s[((k * s.len()) / (m + 1)).min(s.len() - 1)])
        .collect();
    q.dedup();
    q
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::killed::{u1_density, u1_endpoints, Interval};
    use crate::mc::simulate::simulate_exit;
    use crate::params::make_params;

    fn record(occ: Vec<u32>, step: f64) -> ExitRecord {
        let steps = occ.iter().map(|&c| u64::from(c)).sum();
        ExitRecord {
            path_id: 0,
            exited_up: true,
            capped: false,
            steps,
            exit_time: steps as f64 * step,
            position_before: 0.5,
            position_after: 1.5,
            running_max_before: 0.5,
            running_min_before: 0.5,
            step,
            occupation: occ,
        }
    }

    #[test]
    fn single_cell_gives_exit_time_over_width() {
        let hist = HistogramSpec::new(0.0, 2.0, 1).unwrap();
        let cfg = McConfig::new(1, 0.01, 3, hist);
        let r = record(vec![37], 0.01);
        let (g, e) = estimate_density(std::slice::from_ref(&r), &cfg).unwrap();
        assert_eq!(g.values()[0], r.exit_time / 2.0);
        assert_eq!(e[0].std_error, 0.0);
        assert_eq!(e[0].seed, 3);
    }

    #[test]
    fn empty_stream() {
        let cfg = McConfig::new(1, 0.01, 3, HistogramSpec::new(0.0, 1.0, 2).unwrap());
        assert_eq!(estimate_density(&[], &cfg).unwrap_err(), Error::EmptyStream);
    }

    #[test]
    fn permutation_invariant() {
        let p = make_params(1.5, 0.4).unwrap();
        let cfg = McConfig::new(300, 1e-3, 5, HistogramSpec::new(0.0, 1.0, 8).unwrap());
        let mut recs = simulate_exit(&p, 0.5, &Interval::unit(), &cfg).unwrap();
        let (a, ea) = estimate_density(&recs, &cfg).unwrap();
        recs.reverse();
        recs.swap(3, 100);
        let (b, eb) = estimate_density(&recs, &cfg).unwrap();
        for (x, y) in a.values().iter().zip(b.values()) {
            assert!((x - y).abs() <= 1e-12 * x.abs());
        }
        for (x, y) in ea.iter().zip(&eb) {
            assert!((x.std_error - y.std_error).abs() <= 1e-9 * x.std_error);
        }
    }

    #[test]
    fn doubling_paths_halves_variance() {
        let p = make_params(1.0, 0.5).unwrap();
        let hist = HistogramSpec::new(0.0, 1.0, 4).unwrap();
        let se = |n| {
            let cfg = McConfig::new(n, 1e-3, 11, hist);
            let recs = simulate_exit(&p, 0.5, &Interval::unit(), &cfg).unwrap();
            estimate_density(&recs, &cfg).unwrap().1[1].std_error
        };
        let ratio = (se(800) / se(1600)).powi(2);
        assert!((ratio - 2.0).abs() < 0.4, "{ratio}");
    }

    #[test]
    fn zero_noise_compare() {
        let p = make_params(1.0, 0.5).unwrap();
        let hist = HistogramSpec::new(0.0, 1.0, 10).unwrap();
        let spec = QuadratureSpec::default();
        let brk = [(0.0, p.alpha_rho()), (0.5, 0.0), (1.0, p.alpha_rho_hat())];
        let avg = cell_averages(|y| u1_density(&p, 0.5, y, &spec), &hist, &brk, &spec).unwrap();
        let g = DensityGrid::new(hist.centres(), avg, u1_endpoints(&p)).unwrap();
        let errs = vec![
            McEstimate {
                value: 0.0,
                std_error: 0.0,
                n_effective: 1,
                seed: 0
            };
            10
        ];
        let th = CompareThresholds::central(&hist, 0.8, 0.05);
        let r = compare(&g, &g, &errs, &th).unwrap();
        assert!(r.pass);
        assert!(r.z_scores.iter().all(|&z| z == 0.0));
        assert_eq!(r, compare(&g, &g, &errs, &th).unwrap());
        let short = DensityGrid::new(vec![0.1], vec![1.0], [None, None]).unwrap();
        assert!(matches!(compare(&g, &short, &errs[..1], &th), Err(Error::GridMismatch(_))));
    }

    #[test]
    fn cell_averages_integrate_to_mean_exit_time() {
        let p = make_params(0.7, 0.6).unwrap();
        let hist = HistogramSpec::new(0.0, 1.0, 20).unwrap();
        let spec = QuadratureSpec::default();
        let brk = [(0.0, p.alpha_rho()), (0.5, p.alpha() - 1.0), (1.0, p.alpha_rho_hat())];
        let avg = cell_averages(|y| u1_density(&p, 0.5, y, &spec), &hist, &brk, &spec).unwrap();
        let total: f64 = avg.iter().sum::<f64>() * hist.width();
        let exact = crate::killed::mean_exit_time(&p, 0.5, &spec).unwrap();
        assert!((total - exact).abs() < 1e-8 * exact, "{total} {exact}");
    }

    #[test]
    fn ks_against_uniform() {
        let s: Vec<f64> = (0..100).map(|i| (i as f64 + 0.5) / 100.0).collect();
        let d = ks_distance(&s, 100, |t| t, 1.0).unwrap();
        assert!((d - 0.005).abs() < 1e-12);
        // defective law: half the trials never produce a sample
        let d = ks_distance(&s, 200, |t| t / 2.0, 0.5).unwrap();
        assert!((d - 0.0025).abs() < 1e-12);
        let g = quantile_grid(&s, 9);
        let f: Vec<f64> = g.to_vec();
        assert!(ks_distance_on_grid(&s, 100, &g, &f).unwrap() <= 0.01);
    }

    #[test]
    fn welford_matches_two_pass() {
        let xs = [1.0, 4.0, 2.0, 8.0];
        let e = estimate_mean(xs, 0).unwrap();
        assert_eq!(e.value, 3.75);
        let var = xs.iter().map(|x| (x - 3.75f64).powi(2)).sum::<f64>() / 3.0;
        assert!((e.std_error - (var / 4.0).sqrt()).abs() < 1e-14);
        assert_eq!(estimate_mean(std::iter::empty(), 0).unwrap_err(), Error::EmptyStream);
    }
}

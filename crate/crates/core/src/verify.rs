//! Verification suites: analytic identities between the densities, and
//! agreement of the densities with the Monte Carlo oracle.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exit_laws::{exit_up_prob, infimum_before_passage_density, supremum_at_passage_density};
use crate::grid::DensityGrid;
use crate::killed::{
    exit_overshoot_cdf, exit_triple_mass, exit_undershoot_cdf, ln_u_xyz, mean_exit_time, u1_density,
    u1_endpoints, Interval,
};
use crate::mc::{
    cell_averages, compare, estimate_density, estimate_mean, ks_distance_on_grid, quantile_grid,
    simulate_exit, simulate_reflected, CompareThresholds, ExitRecord, HistogramSpec, McConfig,
};
use crate::params::StableParams;
use crate::reflected::{
    expected_passage_time, r1_density, r1_endpoints, r1_zero_density, r_xyz_gaps, reflected_overshoot_cdf,
    reflected_triple_mass, reflected_undershoot_cdf,
};
use crate::special::{integrate_singular, QuadratureSpec};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CheckParams {
    pub alpha: f64,
    pub rho: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// One line of a verification report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub check: String,
    pub params: CheckParams,
    pub observed: f64,
    pub threshold: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub suite: String,
    pub pass: bool,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(suite: &str, checks: Vec<Check>) -> Self {
        Report {
            tool: "stablepot".into(),
            version: VERSION.into(),
            suite: suite.into(),
            pass: checks.iter().all(|c| c.pass),
            checks,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is plain data")
    }
}

fn params_of(p: &StableParams, seed: Option<u64>) -> CheckParams {
    CheckParams {
        alpha: p.alpha(),
        rho: p.rho(),
        seed,
    }
}

fn rel_err(observed: f64, expected: f64) -> f64 {
    if observed == expected {
        0.0
    } else {
        ((observed - expected) / expected).abs()
    }
}

fn below(name: String, p: &StableParams, seed: Option<u64>, observed: f64, threshold: f64) -> Check {
    Check {
        check: name,
        params: params_of(p, seed),
        observed,
        threshold,
        pass: observed <= threshold,
    }
}

/// Tolerances of the identity suite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityTolerances {
    pub duality: f64,
    pub marginal: f64,
    pub normalization: f64,
    pub triple_mass: f64,
    pub limit: f64,
}

impl Default for IdentityTolerances {
    fn default() -> Self {
        IdentityTolerances {
            duality: 1e-10,
            marginal: 1e-6,
            normalization: 1e-8,
            triple_mass: 1e-4,
            limit: 1e-2,
        }
    }
}

const POINTS: [f64; 3] = [0.2, 0.5, 0.8];

/// `(z - x, z - y)` for `z = max(x, y) + s`.
fn gaps(x: f64, y: f64, s: f64) -> (f64, f64) {
    if x > y {
        (s, x - y + s)
    } else {
        (y - x + s, s)
    }
}

/// `∫_{max(x,y)}^1 u(x, y, z) dz`.
pub fn u_xyz_marginal(p: &StableParams, x: f64, y: f64, spec: &QuadratureSpec) -> Result<f64> {
    let (lo, power) = if x > y {
        (x, p.alpha_rho() - 1.0)
    } else {
        (y, p.alpha_rho_hat() - 1.0)
    };
    let r = integrate_singular(
        |z, s, _| {
            let (zx, zy) = gaps(x, y, s);
            ln_u_xyz(p, x, y, z, zx, zy).exp()
        },
        lo,
        1.0,
        power.min(0.0),
        0.0,
        spec,
    )?;
    Ok(r.value)
}

/// `∫_{max(x,y)}^1 r(x, y, z) dz`.
pub fn r_xyz_marginal(p: &StableParams, x: f64, y: f64, spec: &QuadratureSpec) -> Result<f64> {
    let (lo, power) = if x > y {
        (x, p.alpha_rho() - 1.0)
    } else {
        (y, p.alpha_rho_hat() - 1.0)
    };
    let r = integrate_singular(
        |z, s, _| {
            let (zx, zy) = gaps(x, y, s);
            r_xyz_gaps(p, x, y, z, zx, zy).unwrap_or(f64::NAN)
        },
        lo,
        1.0,
        power.min(0.0),
        0.0,
        spec,
    )?;
    Ok(r.value)
}

/// `∫₀¹ r₁(x, y) dy`.
pub fn r1_mass(p: &StableParams, x: f64, spec: &QuadratureSpec) -> Result<f64> {
    let f = |y: f64| r1_density(p, x, y, spec).unwrap_or(f64::NAN);
    let (at0, at1) = (p.alpha_rho() - 1.0, p.alpha_rho_hat());
    if x == 0.0 {
        return Ok(integrate_singular(|y, _, _| f(y), 0.0, 1.0, at0.min(0.0), 0.0, spec)?.value);
    }
    let diag = (p.alpha() - 1.0).min(0.0);
    let left = integrate_singular(|y, _, _| f(y), 0.0, x, at0.min(0.0), diag, spec)?;
    let right = integrate_singular(|y, _, _| f(y), x, 1.0, diag, at1.min(0.0), spec)?;
    Ok(left.value + right.value)
}

/// The identity suite for one parameter pair.
pub fn identities(p: &StableParams, tol: &IdentityTolerances) -> Result<Vec<Check>> {
    let spec = QuadratureSpec::new(1e-10, 1e-14, 400)?;
    let d = p.dual();
    let mut out = Vec::new();
    let mut push = |name: String, observed: f64, threshold: f64| out.push(below(name, p, None, observed, threshold));

    let mut worst = 0.0_f64;
    for &x in &POINTS {
        for &y in &POINTS {
            if x != y {
                let a = u1_density(p, x, y, &spec)?;
                let b = u1_density(&d, 1.0 - x, 1.0 - y, &spec)?;
                worst = worst.max(rel_err(a, b));
            }
        }
    }
    push("duality/u1".into(), worst, tol.duality);
    let mut worst = 0.0_f64;
    for &x in &POINTS {
        worst = worst.max((exit_up_prob(p, x)? - (1.0 - exit_up_prob(&d, 1.0 - x)?)).abs());
    }
    push("duality/exit-prob".into(), worst, tol.duality);

    let (mut wu, mut wr, mut w0) = (0.0_f64, 0.0_f64, 0.0_f64);
    for &x in &[0.3, 0.7] {
        for &y in &POINTS {
            wu = wu.max(rel_err(u_xyz_marginal(p, x, y, &spec)?, u1_density(p, x, y, &spec)?));
            wr = wr.max(rel_err(r_xyz_marginal(p, x, y, &spec)?, r1_density(p, x, y, &spec)?));
        }
    }
    for &y in &POINTS {
        w0 = w0.max(rel_err(r_xyz_marginal(p, 0.0, y, &spec)?, r1_zero_density(p, y)?));
    }
    push("marginal/u-over-z".into(), wu, tol.marginal);
    push("marginal/r-over-z".into(), wr, tol.marginal);
    push("marginal/r0-over-z".into(), w0, tol.marginal);
    let mut wt = 0.0_f64;
    for &x in &[0.0, 0.3, 0.7] {
        wt = wt.max(rel_err(r1_mass(p, x, &spec)?, expected_passage_time(p, x, &spec)?));
    }
    push("marginal/r1-mass-vs-passage-time".into(), wt, tol.marginal);

    let arh = p.alpha_rho_hat();
    let inf_mass = integrate_singular(
        |y, _, _| infimum_before_passage_density(p, y).unwrap_or(f64::NAN),
        0.0,
        1.0,
        -arh,
        arh - 1.0,
        &spec,
    )?
    .value;
    push("normalization/infimum-law".into(), (inf_mass - 1.0).abs(), tol.normalization);
    // t = 1/s
    let sup_mass = integrate_singular(
        |s, _, _| supremum_at_passage_density(p, 1.0 / s).unwrap_or(f64::NAN) / (s * s),
        0.0,
        1.0,
        (arh - 1.0).min(0.0),
        (p.alpha_rho() - 1.0).min(0.0),
        &spec,
    )?
    .value;
    push("normalization/supremum-law".into(), (sup_mass - 1.0).abs(), tol.normalization);

    let tspec = QuadratureSpec::new(1e-7, 1e-12, 400)?;
    let mut wm = 0.0_f64;
    for &x in &[0.0, 0.3, 0.7] {
        wm = wm.max((reflected_triple_mass(p, x, &tspec)? - 1.0).abs());
    }
    push("normalization/reflected-triple".into(), wm, tol.triple_mass);
    let mut wk = 0.0_f64;
    for &x in &[0.3, 0.7] {
        wk = wk.max((exit_triple_mass(p, x, &tspec)? - exit_up_prob(p, x)?).abs());
    }
    push("normalization/killed-triple".into(), wk, tol.triple_mass);

    let z = 1e-4;
    let up = exit_up_prob(p, z)?;
    let mut wl = 0.0_f64;
    for &y in &POINTS {
        wl = wl.max(rel_err(u1_density(p, z, y, &spec)? / up, r1_zero_density(p, y)?));
    }
    push("limit/u1-over-exit-prob".into(), wl, tol.limit);
    Ok(out)
}

/// Settings of the Monte Carlo suite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McSuiteOptions {
    pub n_paths: usize,
    pub step: f64,
    pub seed: u64,
    pub budget: u64,
    pub cells: usize,
    /// Start of the killed paths.
    pub x_killed: f64,
    /// Start of the reflected paths.
    pub x_reflected: f64,
    pub central_fraction: f64,
    pub sup_rel_dev: f64,
    pub ks: f64,
    /// Abscissae at which the analytic marginal CDFs are evaluated.
    pub ks_points: usize,
    /// Shift of ρ in the perturbation guard; zero disables it.
    pub perturbation: f64,
}

impl Default for McSuiteOptions {
    fn default() -> Self {
        McSuiteOptions {
            n_paths: crate::mc::DEFAULT_PATHS,
            step: crate::mc::DEFAULT_STEP,
            seed: 7,
            budget: crate::mc::DEFAULT_BUDGET,
            cells: 20,
            x_killed: 0.5,
            x_reflected: 0.3,
            central_fraction: 0.8,
            sup_rel_dev: 0.05,
            ks: 0.02,
            ks_points: 40,
            perturbation: 0.1,
        }
    }
}

fn config(opts: &McSuiteOptions) -> Result<McConfig> {
    let hist = HistogramSpec::new(0.0, 1.0, opts.cells)?;
    let cfg = McConfig::new(opts.n_paths, opts.step, opts.seed, hist).with_budget(opts.budget);
    cfg.validate()?;
    Ok(cfg)
}

#[derive(Clone, Copy)]
enum Kind {
    Killed,
    Reflected,
}

impl Kind {
    fn name(self) -> &'static str {
        match self {
            Kind::Killed => "killed",
            Kind::Reflected => "reflected",
        }
    }

    fn start(self, opts: &McSuiteOptions) -> f64 {
        match self {
            Kind::Killed => opts.x_killed,
            Kind::Reflected => opts.x_reflected,
        }
    }

    fn density_cells(self, p: &StableParams, x: f64, hist: &HistogramSpec, spec: &QuadratureSpec) -> Result<DensityGrid> {
        let diag = p.alpha() - 1.0;
        let (values, ends) = match self {
            Kind::Killed => {
                let brk = [(0.0, p.alpha_rho()), (x, diag), (1.0, p.alpha_rho_hat())];
                (cell_averages(|y| u1_density(p, x, y, spec), hist, &brk, spec)?, u1_endpoints(p))
            }
            Kind::Reflected => {
                let brk = [(0.0, p.alpha_rho() - 1.0), (x, diag), (1.0, p.alpha_rho_hat())];
                (cell_averages(|y| r1_density(p, x, y, spec), hist, &brk, spec)?, r1_endpoints(p))
            }
        };
        DensityGrid::new(hist.centres(), values, ends)
    }

    fn overshoot_cdf(self, p: &StableParams, x: f64, y: f64, spec: &QuadratureSpec) -> Result<f64> {
        match self {
            Kind::Killed => exit_overshoot_cdf(p, x, y, spec),
            Kind::Reflected => reflected_overshoot_cdf(p, x, y, spec),
        }
    }

    fn undershoot_cdf(self, p: &StableParams, x: f64, v: f64, spec: &QuadratureSpec) -> Result<f64> {
        match self {
            Kind::Killed => exit_undershoot_cdf(p, x, v, spec),
            Kind::Reflected => reflected_undershoot_cdf(p, x, v, spec),
        }
    }

    fn mean_time(self, p: &StableParams, x: f64, spec: &QuadratureSpec) -> Result<f64> {
        match self {
            Kind::Killed => mean_exit_time(p, x, spec),
            Kind::Reflected => expected_passage_time(p, x, spec),
        }
    }
}

/// Monte Carlo suite for one parameter pair: occupation densities,
/// overshoot and undershoot laws and mean exit times of killed and
/// reflected paths, plus the perturbation guard.
pub fn mc_suite(p: &StableParams, opts: &McSuiteOptions) -> Result<Vec<Check>> {
    let cfg = config(opts)?;
    let mut out = Vec::new();
    for kind in [Kind::Killed, Kind::Reflected] {
        let x = kind.start(opts);
        let records = match kind {
            Kind::Killed => simulate_exit(p, x, &Interval::unit(), &cfg)?,
            Kind::Reflected => simulate_reflected(p, x, 1.0, &cfg)?,
        };
        out.extend(mc_checks(p, kind, x, &records, &cfg, opts)?);
    }
    Ok(out)
}

fn mc_checks(
    p: &StableParams,
    kind: Kind,
    x: f64,
    records: &[ExitRecord],
    cfg: &McConfig,
    opts: &McSuiteOptions,
) -> Result<Vec<Check>> {
    let seed = Some(cfg.seed);
    let name = kind.name();
    let spec = QuadratureSpec::new(1e-8, 1e-13, 400)?;
    let mut out = Vec::new();

    let capped = records.iter().filter(|r| r.capped).count();
    out.push(below(format!("mc/{name}/capped-paths"), p, seed, capped as f64, 0.0));

    let (est, errs) = estimate_density(records, cfg)?;
    let th = CompareThresholds::central(&cfg.histogram, opts.central_fraction, opts.sup_rel_dev);
    let analytic = kind.density_cells(p, x, &cfg.histogram, &spec)?;
    let rep = compare(&analytic, &est, &errs, &th)?;
    out.push(below(format!("mc/{name}/occupation-sup-rel-dev"), p, seed, rep.sup_rel_dev, opts.sup_rel_dev));

    if opts.perturbation > 0.0 {
        for shift in [-opts.perturbation, opts.perturbation] {
            let rho = p.rho() + shift;
            let q = StableParams::unchecked(p.alpha(), rho)?;
            let wrong = kind.density_cells(&q, x, &cfg.histogram, &spec)?;
            let rep = compare(&wrong, &est, &errs, &th)?;
            out.push(Check {
                check: format!("mc/{name}/perturbation-guard/rho{shift:+}"),
                params: params_of(p, seed),
                observed: rep.sup_rel_dev,
                threshold: opts.sup_rel_dev,
                pass: !rep.pass,
            });
        }
    }

    let kspec = QuadratureSpec::new(1e-6, 1e-12, 400)?;
    let n = records.len();
    let up: Vec<&ExitRecord> = records.iter().filter(|r| r.exited_up).collect();
    let over: Vec<f64> = up.iter().map(|r| r.position_after - 1.0).collect();
    let under: Vec<f64> = up.iter().map(|r| 1.0 - r.position_before).collect();
    if over.is_empty() {
        return Err(Error::EmptyStream);
    }
    for (label, samples) in [("overshoot", &over), ("undershoot", &under)] {
        let grid = quantile_grid(samples, opts.ks_points);
        let cdf = grid
            .iter()
            .map(|&t| match label {
                "overshoot" => kind.overshoot_cdf(p, x, t, &kspec),
                _ => kind.undershoot_cdf(p, x, t, &kspec),
            })
            .collect::<Result<Vec<f64>>>()?;
        let d = ks_distance_on_grid(samples, n, &grid, &cdf)?;
        out.push(below(format!("mc/{name}/{label}-ks"), p, seed, d, opts.ks));
    }

    let mean = estimate_mean(records.iter().map(|r| r.exit_time), cfg.seed)?;
    let exact = kind.mean_time(p, x, &spec)?;
    let diff = mean.value - exact;
    let upper = 3.0 * mean.std_error + opts.step.powf(1.0 / p.alpha());
    out.push(Check {
        check: format!("mc/{name}/mean-time-excess"),
        params: params_of(p, seed),
        observed: diff,
        threshold: upper,
        pass: diff >= -3.0 * mean.std_error && diff <= upper,
    });
    Ok(out)
}

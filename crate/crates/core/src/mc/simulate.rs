use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::sampler::StableSampler;
use crate::error::{Error, Result};
use crate::killed::Interval;
use crate::params::StableParams;

pub const DEFAULT_STEP: f64 = 1e-4;
pub const DEFAULT_PATHS: usize = 100_000;
pub const DEFAULT_MAX_STEPS: u64 = 10_000_000;
/// Default cap on `n_paths * max_steps`.
pub const DEFAULT_BUDGET: u64 = 1_000_000_000_000;

/// Cells of the occupation histogram: `cells` equal cells over `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HistogramSpec {
    pub lo: f64,
    pub hi: f64,
    pub cells: usize,
}

impl HistogramSpec {
    pub fn new(lo: f64, hi: f64, cells: usize) -> Result<Self> {
        if !(lo < hi && lo.is_finite() && hi.is_finite()) || cells == 0 {
            return Err(Error::domain(format!(
                "histogram needs lo < hi and at least one cell (got [{lo}, {hi}], {cells} cells)"
            )));
        }
        Ok(HistogramSpec { lo, hi, cells })
    }

    pub fn width(&self) -> f64 {
        (self.hi - self.lo) / self.cells as f64
    }

    pub fn edges(&self, cell: usize) -> (f64, f64) {
        let w = self.width();
        (self.lo + cell as f64 * w, self.lo + (cell + 1) as f64 * w)
    }

    pub fn centres(&self) -> Vec<f64> {
        (0..self.cells)
            .map(|i| {
                let (a, b) = self.edges(i);
                0.5 * (a + b)
            })
            .collect()
    }

    #[inline]
    fn cell_of(&self, x: f64) -> usize {
        let i = ((x - self.lo) / (self.hi - self.lo) * self.cells as f64).floor();
        (i.max(0.0) as usize).min(self.cells - 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McConfig {
    pub n_paths: usize,
    /// Time step Δ of the skeleton.
    pub step: f64,
    pub max_steps: u64,
    pub seed: u64,
    pub histogram: HistogramSpec,
    /// Upper bound on `n_paths * max_steps`.
    pub budget: u64,
}

impl McConfig {
    pub fn new(n_paths: usize, step: f64, seed: u64, histogram: HistogramSpec) -> Self {
        McConfig {
            n_paths,
            step,
            max_steps: DEFAULT_MAX_STEPS,
            seed,
            histogram,
            budget: DEFAULT_BUDGET,
        }
    }

    pub fn with_max_steps(self, max_steps: u64) -> Self {
        McConfig { max_steps, ..self }
    }

    pub fn with_budget(self, budget: u64) -> Self {
        McConfig { budget, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_paths == 0 || !(self.step > 0.0 && self.step.is_finite()) || self.max_steps == 0 {
            return Err(Error::domain(format!(
                "Monte Carlo needs n_paths >= 1, step > 0, max_steps >= 1 (got {}, {}, {})",
                self.n_paths, self.step, self.max_steps
            )));
        }
        let work = (self.n_paths as u64).checked_mul(self.max_steps);
        if work.is_none_or(|w| w > self.budget) {
            return Err(Error::Budget(format!(
                "n_paths * max_steps = {} * {} exceeds budget {}",
                self.n_paths, self.max_steps, self.budget
            )));
        }
        Ok(())
    }
}

/// Exit data of one simulated skeleton path.
///
/// Positions are skeleton values: `position_before` is the last point
/// inside the domain, `position_after` the first point outside it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExitRecord {
    pub path_id: u64,
    pub exited_up: bool,
    /// The path hit `max_steps` without leaving; exit data are then those
    /// of the last step.
    pub capped: bool,
    pub steps: u64,
    pub exit_time: f64,
    pub position_before: f64,
    pub position_after: f64,
    pub running_max_before: f64,
    pub running_min_before: f64,
    pub step: f64,
    /// Visits per histogram cell before exit; each visit weighs `step`.
    #[serde(skip)]
    #[serde(default)]
    pub occupation: Vec<u32>,
}

impl ExitRecord {
    pub fn occupation_mass(&self, cell: usize) -> f64 {
        self.occupation[cell] as f64 * self.step
    }

    pub fn total_occupation(&self) -> f64 {
        self.occupation.iter().map(|&c| u64::from(c)).sum::<u64>() as f64 * self.step
    }
}

/// Random stream for one path: ChaCha8 keyed by the seed, with the path
/// index as stream number. Paths are independent of scheduling.
pub fn path_rng(seed: u64, path_id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(path_id);
    rng
}

/// Skeleton `X_0 = x, X_k = X_{k-1} + ξ_k` of the process on a grid of
/// width `step`.
pub struct Skeleton {
    sampler: StableSampler,
    scale: f64,
    rng: ChaCha8Rng,
    position: f64,
}

impl Skeleton {
    pub fn new(p: &StableParams, x: f64, step: f64, seed: u64, path_id: u64) -> Self {
        let sampler = StableSampler::new(p);
        Skeleton {
            sampler,
            scale: sampler.time_scale(step),
            rng: path_rng(seed, path_id),
            position: x,
        }
    }
}

impl Iterator for Skeleton {
    type Item = f64;
    /// The position after the next step.
    #[inline]
    fn next(&mut self) -> Option<f64> {
        self.position += self.scale * self.sampler.unit(&mut self.rng);
        Some(self.position)
    }
}

/// Reflection of a skeleton in its running infimum:
/// `Y_k = X_k - min(0, min_{j≤k} X_j)`, for `X_0 ≥ 0`.
pub fn reflect(path: &[f64]) -> Vec<f64> {
    let mut low = 0.0_f64;
    path.iter()
        .map(|&x| {
            low = low.min(x);
            x - low
        })
        .collect()
}

fn check_x(x: f64, lo: f64, hi: f64, what: &str) -> Result<()> {
    if !(x >= lo && x < hi) {
        return Err(Error::domain(format!("{what}: start {x} must lie in [{lo}, {hi})")));
    }
    Ok(())
}

fn run_killed(p: &StableParams, x: f64, interval: &Interval, cfg: &McConfig, path_id: u64) -> ExitRecord {
    let hist = cfg.histogram;
    let (lo, hi) = (interval.lo(), interval.hi());
    let mut occupation = vec![0u32; hist.cells];
    let mut path = Skeleton::new(p, x, cfg.step, cfg.seed, path_id);
    let (mut cur, mut max, mut min) = (x, x, x);
    let mut steps = 0u64;
    let mut exited_up = false;
    let mut after = x;
    let mut capped = true;
    while steps < cfg.max_steps {
        occupation[hist.cell_of(cur)] += 1;
        let next = path.next().unwrap_or(cur);
        steps += 1;
        if next > hi || next < lo {
            exited_up = next > hi;
            after = next;
            capped = false;
            break;
        }
        cur = next;
        max = max.max(cur);
        min = min.min(cur);
    }
    if capped {
        after = cur;
    }
    ExitRecord {
        path_id,
        exited_up,
        capped,
        steps,
        exit_time: steps as f64 * cfg.step,
        position_before: cur,
        position_after: after,
        running_max_before: max,
        running_min_before: min,
        step: cfg.step,
        occupation,
    }
}

/// Simulates `n_paths` skeleton paths from `x` until they leave the
/// interval. Record `i` depends only on `(seed, i)`.
pub fn simulate_exit(
    p: &StableParams,
    x: f64,
    interval: &Interval,
    cfg: &McConfig,
) -> Result<Vec<ExitRecord>> {
    cfg.validate()?;
    if !(x > interval.lo() && x < interval.hi()) {
        return Err(Error::domain(format!(
            "simulate_exit: start {x} must lie inside [{}, {}]",
            interval.lo(),
            interval.hi()
        )));
    }
    Ok((0..cfg.n_paths as u64)
        .into_par_iter()
        .map(|i| run_killed(p, x, interval, cfg, i))
        .collect())
}

fn run_reflected(p: &StableParams, x: f64, barrier: f64, cfg: &McConfig, path_id: u64) -> ExitRecord {
    let hist = cfg.histogram;
    let mut occupation = vec![0u32; hist.cells];
    let mut path = Skeleton::new(p, x, cfg.step, cfg.seed, path_id);
    let mut low = 0.0_f64;
    let (mut cur, mut max, mut min) = (x, x, x);
    let mut steps = 0u64;
    let mut after = x;
    let mut capped = true;
    while steps < cfg.max_steps {
        occupation[hist.cell_of(cur)] += 1;
        let xk = path.next().unwrap_or(cur);
        steps += 1;
        low = low.min(xk);
        let next = xk - low;
        if next > barrier {
            after = next;
            capped = false;
            break;
        }
        cur = next;
        max = max.max(cur);
        min = min.min(cur);
    }
    if capped {
        after = cur;
    }
    ExitRecord {
        path_id,
        exited_up: !capped,
        capped,
        steps,
        exit_time: steps as f64 * cfg.step,
        position_before: cur,
        position_after: after,
        running_max_before: max,
        running_min_before: min,
        step: cfg.step,
        occupation,
    }
}

/// Simulates the process reflected in its infimum from `x ∈ [0, barrier)`
/// until it first passes above `barrier`.
pub fn simulate_reflected(
    p: &StableParams,
    x: f64,
    barrier: f64,
    cfg: &McConfig,
) -> Result<Vec<ExitRecord>> {
    cfg.validate()?;
    check_x(x, 0.0, barrier, "simulate_reflected")?;
    Ok((0..cfg.n_paths as u64)
        .into_par_iter()
        .map(|i| run_reflected(p, x, barrier, cfg, i))
        .collect())
}

/// Outcome of a path run until it first passes below zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PassageRecord {
    pub path_id: u64,
    /// Minimum of the skeleton before the passage.
    pub infimum_before: f64,
    /// Maximum of the skeleton before the passage.
    pub supremum_before: f64,
    pub passage_time: f64,
    /// Stopped on exceeding the upper stop level; only
    /// `supremum_before ≥ stop_above` is then known.
    pub stopped_above: bool,
    /// Hit `max_steps` first.
    pub capped: bool,
}

/// Runs paths from `x > 0` until they pass below zero, stopping early (and
/// flagging it) if they exceed `stop_above`.
pub fn simulate_passage_below(
    p: &StableParams,
    x: f64,
    stop_above: f64,
    cfg: &McConfig,
) -> Result<Vec<PassageRecord>> {
    cfg.validate()?;
    check_x(x, f64::MIN_POSITIVE, stop_above, "simulate_passage_below")?;
    Ok((0..cfg.n_paths as u64)
        .into_par_iter()
        .map(|i| {
            let mut path = Skeleton::new(p, x, cfg.step, cfg.seed, i);
            let (mut min, mut max) = (x, x);
            let mut steps = 0;
            let mut stopped_above = false;
            let mut capped = true;
            while steps < cfg.max_steps {
                let next = path.next().unwrap_or(x);
                steps += 1;
                if next < 0.0 {
                    capped = false;
                    break;
                }
                min = min.min(next);
                max = max.max(next);
                if next > stop_above {
                    stopped_above = true;
                    capped = false;
                    break;
                }
            }
            PassageRecord {
                path_id: i,
                infimum_before: min,
                supremum_before: max,
                passage_time: steps as f64 * cfg.step,
                stopped_above,
                capped,
            }
        })
        .collect())
}

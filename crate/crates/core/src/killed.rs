//! Potentials of the stable process killed on leaving a bounded interval.
//!
//! `u1_density` is the occupation density before the first exit from
//! `[0, 1]`; the interval version follows from spatial homogeneity and the
//! `α`-scaling property. `u_xyz_density` adds the running supremum and
//! `exit_triple_density` is the joint law of the undershoot from the
//! maximum, the undershoot and the overshoot at an upward exit.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::EndpointBehavior;
use crate::params::StableParams;
use crate::special::{inc_beta_parts, QuadratureSpec};
use crate::triple::{self, UvKernel};

/// A bounded interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::domain(format!("interval needs finite lo < hi (got [{lo}, {hi}])")));
        }
        Ok(Interval { lo, hi })
    }

    pub fn unit() -> Self {
        Interval { lo: 0.0, hi: 1.0 }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }
    pub fn hi(&self) -> f64 {
        self.hi
    }
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

fn check_open_unit(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v < 1.0) {
        return Err(Error::domain(format!("{name} must lie in (0,1) (got {name}={v})")));
    }
    Ok(())
}

/// Potential density `u₁(x, y)` of the process started at `x` and killed on
/// leaving `[0, 1]`.
pub fn u1_density(p: &StableParams, x: f64, y: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_open_unit("x", x)?;
    check_open_unit("y", y)?;
    if x == y {
        return Err(Error::Diagonal(x));
    }
    // J(w; a, b) = B(w/(1+w); a, 1-α); w/(1+w) and its complement are
    // formed directly from x and y
    let (gap, t, t_comp, a) = if y < x {
        let d = x * (1.0 - y);
        (x - y, y * (1.0 - x) / d, (x - y) / d, p.alpha_rho())
    } else {
        let d = y * (1.0 - x);
        (y - x, x * (1.0 - y) / d, (y - x) / d, p.alpha_rho_hat())
    };
    let j = inc_beta_parts(t, t_comp, a, 1.0 - p.alpha(), spec)?;
    Ok((p.ln_norm() + (p.alpha() - 1.0) * gap.ln()).exp() * j)
}

/// Potential density killed outside an arbitrary bounded interval,
/// `(b - a)^{α-1} u₁((x - a)/(b - a), (y - a)/(b - a))`.
pub fn u_a_density(
    p: &StableParams,
    interval: &Interval,
    x: f64,
    y: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let w = interval.width();
    let xs = (x - interval.lo) / w;
    let ys = (y - interval.lo) / w;
    if x == y {
        return Err(Error::Diagonal(x));
    }
    Ok(w.powf(p.alpha() - 1.0) * u1_density(p, xs, ys, spec)?)
}

pub(crate) fn ln_u_xyz(p: &StableParams, x: f64, y: f64, z: f64, z_minus_x: f64, z_minus_y: f64) -> f64 {
    let (ar, arh) = (p.alpha_rho(), p.alpha_rho_hat());
    p.ln_norm() + arh * x.ln() + ar * y.ln() + (ar - 1.0) * z_minus_x.ln() + (arh - 1.0) * z_minus_y.ln()
        - p.alpha() * z.ln()
}

/// Joint density in `(y, z)` of position and running supremum, integrated
/// over time up to the first passage below zero, from `x`.
pub fn u_xyz_density(p: &StableParams, x: f64, y: f64, z: f64) -> Result<f64> {
    if !(x > 0.0 && z > x && y >= 0.0 && y < z && z.is_finite()) {
        return Err(Error::domain(format!(
            "u(x,y,z) needs x > 0, z > x, y in [0, z) (got x={x}, y={y}, z={z})"
        )));
    }
    if y == 0.0 {
        return Ok(0.0);
    }
    Ok(ln_u_xyz(p, x, y, z, z - x, z - y).exp())
}

fn check_triple(x: f64, u: f64, v: f64, y: f64) -> Result<()> {
    if !(x > 0.0 && x < 1.0 && u >= 0.0 && u < 1.0 - x && v > u && v <= 1.0 && y >= 0.0) {
        return Err(Error::domain(format!(
            "exit triple law needs x in (0,1), u in [0,1-x), v in (u,1], y >= 0 \
             (got x={x}, u={u}, v={v}, y={y})"
        )));
    }
    Ok(())
}

/// Joint density of `(1 - X̄_{τ⁻}, 1 - X_{τ⁻}, X_τ - 1)` on the event that
/// `[0, 1]` is left upwards at `τ`, from `x`.
///
/// Computed as `u(x, 1 - v, 1 - u) · π(v + y)` with `π` the Lévy density.
pub fn exit_triple_density(p: &StableParams, x: f64, u: f64, v: f64, y: f64) -> Result<f64> {
    check_triple(x, u, v, y)?;
    if v == 1.0 {
        return Ok(0.0);
    }
    let z = 1.0 - u;
    Ok((ln_u_xyz(p, x, 1.0 - v, z, z - x, v - u) + p.ln_levy_density_pos(v + y)).exp())
}

struct KilledKernel {
    p: StableParams,
    x: f64,
}

impl UvKernel for KilledKernel {
    fn kernel(&self, u: f64, _v: f64, one_gap: f64, v_gap: f64, top_gap: f64) -> f64 {
        if one_gap <= 0.0 {
            return 0.0;
        }
        ln_u_xyz(&self.p, self.x, one_gap, 1.0 - u, top_gap, v_gap).exp()
    }
    fn top(&self) -> f64 {
        1.0 - self.x
    }
    fn top_power(&self) -> f64 {
        self.p.alpha_rho() - 1.0
    }
    fn v_power(&self) -> f64 {
        self.p.alpha_rho_hat() - 1.0
    }
    fn one_power(&self) -> f64 {
        self.p.alpha_rho()
    }
    fn params(&self) -> &StableParams {
        &self.p
    }
}

fn killed_kernel(p: &StableParams, x: f64) -> Result<KilledKernel> {
    check_open_unit("x", x)?;
    Ok(KilledKernel { p: *p, x })
}

/// Total mass of the exit triple law; equals the probability of leaving
/// `[0, 1]` upwards.
pub fn exit_triple_mass(p: &StableParams, x: f64, spec: &QuadratureSpec) -> Result<f64> {
    triple::mass(&killed_kernel(p, x)?, spec)
}

/// `P_x(X_τ - 1 ≤ y, upward exit)`.
pub fn exit_overshoot_cdf(p: &StableParams, x: f64, y: f64, spec: &QuadratureSpec) -> Result<f64> {
    triple::overshoot_cdf(&killed_kernel(p, x)?, y, spec)
}

/// `P_x(1 - X_{τ⁻} ≤ v, upward exit)`.
pub fn exit_undershoot_cdf(p: &StableParams, x: f64, v: f64, spec: &QuadratureSpec) -> Result<f64> {
    triple::undershoot_cdf(&killed_kernel(p, x)?, v, spec)
}

/// Boundary behaviour of `y ↦ u₁(x, y)`: `y^{αρ}` at zero and
/// `(1 - y)^{αρ̂}` at one.
pub fn u1_endpoints(p: &StableParams) -> [Option<EndpointBehavior>; 2] {
    [
        Some(EndpointBehavior {
            exponent: p.alpha_rho(),
        }),
        Some(EndpointBehavior {
            exponent: p.alpha_rho_hat(),
        }),
    ]
}

/// Mean time to leave `[0, 1]` from `x`, `∫₀¹ u₁(x, y) dy`, by quadrature.
pub fn mean_exit_time(p: &StableParams, x: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_open_unit("x", x)?;
    let (ar, arh, a) = (p.alpha_rho(), p.alpha_rho_hat(), p.alpha());
    let f = |y: f64| u1_density(p, x, y, spec).unwrap_or(f64::NAN);
    // u₁(x, ·) behaves like |y - x|^{α-1} at the diagonal
    let diag = (a - 1.0).min(0.0);
    let left = crate::special::integrate_singular(|y, _, _| f(y), 0.0, x, ar.min(0.0), diag, spec)?;
    let right = crate::special::integrate_singular(|y, _, _| f(y), x, 1.0, diag, arh.min(0.0), spec)?;
    let total = left.value + right.value;
    if !total.is_finite() {
        return Err(Error::domain(format!("mean exit time did not evaluate at x={x}")));
    }
    Ok(total)
}

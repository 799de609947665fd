//! Potentials of the stable process reflected in its infimum,
//! `Y = X - (inf X ∧ 0)`, killed at its first passage above one.

use crate::error::{Error, Result};
use crate::grid::EndpointBehavior;
use crate::killed::u1_density;
use crate::params::StableParams;
use crate::special::{inc_beta, ln_beta, log_gamma, reg_inc_beta, QuadratureSpec};
use crate::triple::{self, UvKernel};

fn ln_r1_zero(p: &StableParams, y: f64) -> f64 {
    -p.ln_gamma_alpha() + (p.alpha_rho() - 1.0) * y.ln() + p.alpha_rho_hat() * (-y).ln_1p()
}

/// `r₁(0, y) = y^{αρ-1} (1 - y)^{αρ̂} / Γ(α)`.
pub fn r1_zero_density(p: &StableParams, y: f64) -> Result<f64> {
    if !(y > 0.0 && y < 1.0) {
        return Err(Error::domain(format!("r1(0,y) needs y in (0,1) (got y={y})")));
    }
    Ok(ln_r1_zero(p, y).exp())
}

/// Potential density `r₁(x, y)` of the reflected process started at `x`.
///
/// Uses `r₁(x, y) = u₁(x, y) + P_x(τ₀⁻ < τ₁⁺) r₁(0, y)`.
pub fn r1_density(p: &StableParams, x: f64, y: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(0.0..1.0).contains(&x) {
        return Err(Error::domain(format!("r1(x,y) needs x in [0,1) (got x={x})")));
    }
    let zero = r1_zero_density(p, y)?;
    if x == 0.0 {
        return Ok(zero);
    }
    if x == y {
        return Err(Error::Diagonal(x));
    }
    // P_x(τ₀⁻ < τ₁⁺) = I_{1-x}(αρ, αρ̂), taken directly to keep precision
    // near x = 1
    let down = reg_inc_beta(1.0 - x, p.alpha_rho(), p.alpha_rho_hat())?;
    Ok(u1_density(p, x, y, spec)? + down * zero)
}

/// `B(w; αρ, αρ̂)` from the continued fraction and the complete beta.
fn beta_tail(p: &StableParams, w: f64) -> Result<f64> {
    let (ar, arh) = (p.alpha_rho(), p.alpha_rho_hat());
    Ok(reg_inc_beta(w, ar, arh)? * ln_beta(ar, arh)?.exp())
}

/// Joint density in `(y, z)` of the reflected process and its running
/// supremum, integrated over all time, from `x`.
pub fn r_xyz_density(p: &StableParams, x: f64, y: f64, z: f64) -> Result<f64> {
    if !(x >= 0.0 && y > 0.0 && y < z && z >= x && z.is_finite()) {
        return Err(Error::domain(format!(
            "r(x,y,z) needs x >= 0, y in (0,z), z >= max(x,y) (got x={x}, y={y}, z={z})"
        )));
    }
    r_xyz_gaps(p, x, y, z, z - x, z - y)
}

/// [`r_xyz_density`] with `z - x` and `z - y` supplied exactly.
pub(crate) fn r_xyz_gaps(p: &StableParams, x: f64, y: f64, z: f64, z_minus_x: f64, z_minus_y: f64) -> Result<f64> {
    let (ar, arh, a) = (p.alpha_rho(), p.alpha_rho_hat(), p.alpha());
    let shape = (ar - 1.0) * y.ln() + (arh - 1.0) * z_minus_y.ln();
    if x == 0.0 {
        return Ok((arh.ln() - p.ln_gamma_alpha() + shape).exp());
    }
    if z_minus_x == 0.0 {
        return Ok(f64::INFINITY);
    }
    let first = (arh * x.ln() + (ar - 1.0) * z_minus_x.ln() + (1.0 - a) * z.ln()).exp();
    let second = arh * beta_tail(p, z_minus_x / z)?;
    Ok((p.ln_norm() + shape).exp() * (first + second))
}

fn check_reflected_triple(x: f64, u: f64, v: f64, y: f64) -> Result<()> {
    let ok = if x == 0.0 {
        u > 0.0 && u <= 1.0 && v > u && v < 1.0 && y >= 0.0
    } else {
        x > 0.0 && u >= 0.0 && u < 1.0 - x && v > u && v < 1.0 && y >= 0.0
    };
    if !ok {
        return Err(Error::domain(format!(
            "reflected triple law needs (x=0: u in (0,1], v in (u,1)) or \
             (x>0: u in [0,1-x), v in (u,1)), y >= 0 (got x={x}, u={u}, v={v}, y={y})"
        )));
    }
    Ok(())
}

/// Joint density of `(1 - Ȳ, 1 - Y_{T⁻}, Y_T - 1)` at the first passage
/// `T` of the reflected process above one, from `x`.
///
/// The `x = 0` and `x > 0` cases are separate formulas; the second tends to
/// the first as `x → 0`. Both equal `r(x, 1 - v, 1 - u) · π(v + y)`.
pub fn reflected_triple_density(p: &StableParams, x: f64, u: f64, v: f64, y: f64) -> Result<f64> {
    check_reflected_triple(x, u, v, y)?;
    let (ar, arh, a) = (p.alpha_rho(), p.alpha_rho_hat(), p.alpha());
    let shape = (ar - 1.0) * (1.0 - v).ln() + (arh - 1.0) * (v - u).ln() - (a + 1.0) * (v + y).ln();
    if x == 0.0 {
        let ln_front = (a * arh).ln() - log_gamma(ar)?.0 - log_gamma(1.0 - ar)?.0;
        return Ok((ln_front + shape).exp());
    }
    let top = 1.0 - u;
    let first = (arh * x.ln() + (ar - 1.0) * (top - x).ln() + (1.0 - a) * top.ln()).exp();
    let second = arh * beta_tail(p, (top - x) / top)?;
    // Γ(α+1) / (Γ(αρ)² Γ(αρ̂) Γ(1-αρ))
    let ln_front = p.ln_norm() + p.c_plus().ln();
    Ok((ln_front + shape).exp() * (first + second))
}

/// Expected first passage time above one of the reflected process from
/// `x ∈ [0, 1]`.
pub fn expected_passage_time(p: &StableParams, x: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain(format!("passage time needs x in [0,1] (got x={x})")));
    }
    if x == 1.0 {
        return Ok(0.0);
    }
    let (ar, arh, a) = (p.alpha_rho(), p.alpha_rho_hat(), p.alpha());
    let first = if x == 0.0 {
        0.0
    } else {
        (arh * x.ln() + ar * (-x).ln_1p()).exp()
    };
    let second = arh * inc_beta(1.0 - x, ar, arh, spec)?;
    Ok((first + second) / log_gamma(a + 1.0)?.0.exp())
}

/// Boundary behaviour of `y ↦ r₁(x, y)`: `y^{αρ-1}` at zero and
/// `(1 - y)^{αρ̂}` at one.
pub fn r1_endpoints(p: &StableParams) -> [Option<EndpointBehavior>; 2] {
    [
        Some(EndpointBehavior {
            exponent: p.alpha_rho() - 1.0,
        }),
        Some(EndpointBehavior {
            exponent: p.alpha_rho_hat(),
        }),
    ]
}

struct ReflectedKernel {
    p: StableParams,
    x: f64,
}

impl UvKernel for ReflectedKernel {
    fn kernel(&self, u: f64, _v: f64, one_gap: f64, v_gap: f64, top_gap: f64) -> f64 {
        if one_gap <= 0.0 {
            return 0.0;
        }
        let p = &self.p;
        let (ar, arh, a) = (p.alpha_rho(), p.alpha_rho_hat(), p.alpha());
        let shape = (ar - 1.0) * one_gap.ln() + (arh - 1.0) * v_gap.ln();
        if self.x == 0.0 {
            return (arh.ln() - p.ln_gamma_alpha() + shape).exp();
        }
        let top = 1.0 - u;
        let first = (arh * self.x.ln() + (ar - 1.0) * top_gap.ln() + (1.0 - a) * top.ln()).exp();
        let second = match beta_tail(p, top_gap / top) {
            Ok(b) => arh * b,
            Err(_) => return f64::NAN,
        };
        (p.ln_norm() + shape).exp() * (first + second)
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
        self.p.alpha_rho() - 1.0
    }
    fn params(&self) -> &StableParams {
        &self.p
    }
}

fn reflected_kernel(p: &StableParams, x: f64) -> Result<ReflectedKernel> {
    if !(0.0..1.0).contains(&x) {
        return Err(Error::domain(format!("reflected triple law needs x in [0,1) (got x={x})")));
    }
    Ok(ReflectedKernel { p: *p, x })
}

/// Total mass of the reflected triple law (one: the passage time is finite).
pub fn reflected_triple_mass(p: &StableParams, x: f64, spec: &QuadratureSpec) -> Result<f64> {
    triple::mass(&reflected_kernel(p, x)?, spec)
}

/// `P_x(Y_T - 1 ≤ y)`.
pub fn reflected_overshoot_cdf(p: &StableParams, x: f64, y: f64, spec: &QuadratureSpec) -> Result<f64> {
    triple::overshoot_cdf(&reflected_kernel(p, x)?, y, spec)
}

/// `P_x(1 - Y_{T⁻} ≤ v)`.
pub fn reflected_undershoot_cdf(p: &StableParams, x: f64, v: f64, spec: &QuadratureSpec) -> Result<f64> {
    triple::undershoot_cdf(&reflected_kernel(p, x)?, v, spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::make_params;
    use std::f64::consts::PI;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn cauchy_values() {
        let c = make_params(1.0, 0.5).unwrap();
        assert!((r1_zero_density(&c, 0.5).unwrap() - 1.0).abs() < 1e-15);
        assert!((expected_passage_time(&c, 0.0, &spec()).unwrap() - PI / 2.0).abs() < 1e-9);
        assert_eq!(expected_passage_time(&c, 1.0, &spec()).unwrap(), 0.0);
    }

    #[test]
    fn zero_start_delegates() {
        let p = make_params(1.5, 0.4).unwrap();
        for y in [0.1, 0.5, 0.9] {
            assert_eq!(r1_density(&p, 0.0, y, &spec()).unwrap(), r1_zero_density(&p, y).unwrap());
        }
    }

    #[test]
    fn singular_at_zero() {
        let p = make_params(0.9, 0.5).unwrap();
        let a = r1_zero_density(&p, 1e-6).unwrap();
        let b = r1_zero_density(&p, 1e-9).unwrap();
        assert!(b > a && a > 1.0);
    }

    #[test]
    fn passage_time_closed_form_at_zero() {
        for &(a, r) in &[(0.7, 0.6), (1.5, 0.4), (1.2, 0.5)] {
            let p = make_params(a, r).unwrap();
            let (ar, arh) = (a * r, a * (1.0 - r));
            let closed = (log_gamma(ar).unwrap().0 + log_gamma(arh + 1.0).unwrap().0
                - log_gamma(a).unwrap().0
                - log_gamma(a + 1.0).unwrap().0)
                .exp();
            let v = expected_passage_time(&p, 0.0, &spec()).unwrap();
            assert!((v / closed - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn passage_time_decreasing() {
        let p = make_params(1.5, 0.4).unwrap();
        let mut prev = f64::INFINITY;
        for i in 0..=50 {
            let v = expected_passage_time(&p, i as f64 / 50.0, &spec()).unwrap();
            assert!(v < prev);
            prev = v;
        }
    }

    #[test]
    fn triple_factorizes() {
        let p = make_params(1.5, 0.4).unwrap();
        for &(x, u, v, y) in &[(0.3, 0.1, 0.4, 0.2), (0.0, 0.2, 0.6, 1.5), (0.6, 0.0, 0.9, 0.0)] {
            let d = reflected_triple_density(&p, x, u, v, y).unwrap();
            let f = r_xyz_density(&p, x, 1.0 - v, 1.0 - u).unwrap() * p.levy_density(v + y).unwrap();
            assert!((d / f - 1.0).abs() < 1e-12, "{d} {f}");
        }
    }

    #[test]
    fn triple_continuous_at_zero_start() {
        let p = make_params(0.8, 0.45).unwrap();
        let a = reflected_triple_density(&p, 0.0, 0.2, 0.5, 0.3).unwrap();
        let b = reflected_triple_density(&p, 1e-9, 0.2, 0.5, 0.3).unwrap();
        assert!((a / b - 1.0).abs() < 1e-6);
    }

    #[test]
    fn r_xyz_continuous_at_zero_start() {
        let p = make_params(1.5, 0.4).unwrap();
        let a = r_xyz_density(&p, 0.0, 0.3, 0.7).unwrap();
        let b = r_xyz_density(&p, 1e-6, 0.3, 0.7).unwrap();
        assert!((a / b - 1.0).abs() < 1e-4);
    }

    #[test]
    fn domain_errors() {
        let p = make_params(1.5, 0.4).unwrap();
        assert!(r1_zero_density(&p, 0.0).is_err());
        assert!(r1_density(&p, 1.0, 0.5, &spec()).is_err());
        assert!(matches!(r1_density(&p, 0.4, 0.4, &spec()), Err(Error::Diagonal(_))));
        assert!(expected_passage_time(&p, -0.1, &spec()).is_err());
        assert!(reflected_triple_density(&p, 0.0, 0.0, 0.5, 0.1).is_err());
        assert!(reflected_triple_density(&p, 0.3, 0.7, 0.8, 0.1).is_err());
    }
}

//! Explicit exit laws of the stable process: the two-sided exit
//! probability, the law of the infimum before first passage below zero and
//! the law of the supremum at that time.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::params::StableParams;
use crate::special::{inc_beta, integrate_singular, reg_inc_beta, sin_pi, QuadratureSpec};

/// `P_x(τ₁⁺ < τ₀⁻)`: probability of leaving `[0, 1]` upwards from `x`.
pub fn exit_up_prob(p: &StableParams, x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain(format!("exit probability needs x in [0,1] (got {x})")));
    }
    reg_inc_beta(x, p.alpha_rho_hat(), p.alpha_rho())
}

/// Density at `y ∈ (0,1)` of the infimum of the path before it first
/// passes below zero, started from one.
pub fn infimum_before_passage_density(p: &StableParams, y: f64) -> Result<f64> {
    if !(y > 0.0 && y < 1.0) {
        return Err(Error::domain(format!(
            "infimum-before-passage density needs y in (0,1) (got {y})"
        )));
    }
    let a = p.alpha_rho_hat();
    Ok(sin_pi(a) / PI * (-a * y.ln() + (a - 1.0) * (-y).ln_1p()).exp())
}

/// Distribution function of [`infimum_before_passage_density`], by
/// quadrature of the density.
pub fn infimum_before_passage_cdf(p: &StableParams, y: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(0.0..=1.0).contains(&y) {
        return Err(Error::domain(format!("infimum-before-passage cdf needs y in [0,1] (got {y})")));
    }
    if y == 0.0 {
        return Ok(0.0);
    }
    let a = p.alpha_rho_hat();
    let scale = sin_pi(a) / PI;
    let hi_power = if y == 1.0 { a - 1.0 } else { 0.0 };
    let r = integrate_singular(
        |_, t, _| scale * (-a * t.ln() + (a - 1.0) * (-t).ln_1p()).exp(),
        0.0,
        y,
        -a,
        hi_power,
        spec,
    )?;
    Ok(r.value)
}

/// Density at `t > 1` of the supremum of the path at its first passage
/// below zero, started from one.
pub fn supremum_at_passage_density(p: &StableParams, t: f64) -> Result<f64> {
    if !(t > 1.0) {
        return Err(Error::domain(format!(
            "supremum-at-passage density needs t > 1 (got {t})"
        )));
    }
    let ln_front = p.ln_gamma_alpha() + p.ln_norm();
    Ok((ln_front - p.alpha() * t.ln() + (p.alpha_rho() - 1.0) * (t - 1.0).ln()).exp())
}

/// `P₁(sup before passage below zero ≥ y)` for `y ≥ 1`, as the quadrature
/// of the density after the change of variable `u = 1/t`.
pub fn supremum_at_passage_survival(p: &StableParams, y: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(y >= 1.0) {
        return Err(Error::domain(format!("supremum survival needs y >= 1 (got {y})")));
    }
    if y.is_infinite() {
        return Ok(0.0);
    }
    let front = (p.ln_gamma_alpha() + p.ln_norm()).exp();
    Ok(front * inc_beta(1.0 / y, p.alpha_rho_hat(), p.alpha_rho(), spec)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::make_params;

    #[test]
    fn exit_probability_values() {
        let c = make_params(1.0, 0.5).unwrap();
        assert!((exit_up_prob(&c, 0.5).unwrap() - 0.5).abs() < 1e-15);
        assert!((exit_up_prob(&c, 0.25).unwrap() - 1.0 / 3.0).abs() < 1e-14);
        let p = make_params(1.5, 0.4).unwrap();
        assert_eq!(exit_up_prob(&p, 0.0).unwrap(), 0.0);
        assert_eq!(exit_up_prob(&p, 1.0).unwrap(), 1.0);
        assert!(exit_up_prob(&p, 1.1).is_err());
        let s = make_params(0.6, 0.5).unwrap();
        assert!((exit_up_prob(&s, 0.5).unwrap() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn exit_probability_monotone() {
        let p = make_params(1.3, 0.55).unwrap();
        let mut prev = 0.0;
        for i in 1..=100 {
            let v = exit_up_prob(&p, i as f64 / 100.0).unwrap();
            assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn cauchy_infimum_is_arcsine() {
        let c = make_params(1.0, 0.5).unwrap();
        let v = infimum_before_passage_density(&c, 0.5).unwrap();
        assert!((v - 2.0 / PI).abs() < 1e-15);
        assert!(infimum_before_passage_density(&c, 0.0).is_err());
        assert!(infimum_before_passage_density(&c, 1.0).is_err());
    }

    #[test]
    fn infimum_density_blows_up_at_one() {
        let p = make_params(0.8, 0.3).unwrap();
        let a = infimum_before_passage_density(&p, 1.0 - 1e-6).unwrap();
        let b = infimum_before_passage_density(&p, 1.0 - 1e-9).unwrap();
        assert!(b > a && a > 1.0);
    }

    #[test]
    fn cauchy_supremum_value() {
        let c = make_params(1.0, 0.5).unwrap();
        let v = supremum_at_passage_density(&c, 2.0).unwrap();
        assert!((v - 1.0 / (2.0 * PI)).abs() < 1e-15);
        assert!(supremum_at_passage_density(&c, 1.0).is_err());
    }

    #[test]
    fn survival_at_one_is_one() {
        let spec = QuadratureSpec::default();
        for &(a, r) in &[(1.0, 0.5), (1.5, 0.4), (0.7, 0.2)] {
            let p = make_params(a, r).unwrap();
            let s = supremum_at_passage_survival(&p, 1.0, &spec).unwrap();
            assert!((s - 1.0).abs() < 1e-9, "{a} {r}: {s}");
        }
    }

    #[test]
    fn survival_matches_regularized_beta_form() {
        let spec = QuadratureSpec::default();
        let p = make_params(1.5, 0.4).unwrap();
        for y in [1.2, 2.0, 10.0, 300.0] {
            let s = supremum_at_passage_survival(&p, y, &spec).unwrap();
            let r = reg_inc_beta(1.0 / y, p.alpha_rho_hat(), p.alpha_rho()).unwrap();
            assert!((s / r - 1.0).abs() < 1e-8, "{y}: {s} vs {r}");
        }
    }

    #[test]
    fn infimum_cdf_reaches_one() {
        let spec = QuadratureSpec::default();
        let p = make_params(1.2, 0.45).unwrap();
        let v = infimum_before_passage_cdf(&p, 1.0, &spec).unwrap();
        assert!((v - 1.0).abs() < 1e-8);
        assert_eq!(infimum_before_passage_cdf(&p, 0.0, &spec).unwrap(), 0.0);
    }
}

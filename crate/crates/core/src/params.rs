//! Parameter domain of the strictly stable processes with two-sided jumps.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::special::log_gamma;

/// A validated `(α, ρ)` pair with its derived constants.
///
/// `ρ = P₀(X_t > 0)` is the positivity parameter and `ρ̂ = 1 - ρ`. The
/// characteristic exponent is normalized so that `Ψ(θ) = c|θ|^α(1 - iβ
/// tan(πα/2) sgn θ)` with `c = cos(πα(ρ - 1/2))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StableParams {
    alpha: f64,
    rho: f64,
    rho_hat: f64,
    c: f64,
    beta: f64,
    c_plus: f64,
    c_minus: f64,
    q: f64,
    #[serde(skip)]
    ln_norm: f64,
    #[serde(skip)]
    ln_gamma_alpha: f64,
}

/// Validates `(alpha, rho)` and builds the parameter set.
pub fn make_params(alpha: f64, rho: f64) -> Result<StableParams> {
    StableParams::new(alpha, rho)
}

fn check_admissible(alpha: f64, rho: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 2.0) {
        return Err(Error::domain(format!("α must lie in (0,2) (got α={alpha})")));
    }
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::domain(format!("ρ must lie in (0,1) (got ρ={rho})")));
    }
    if alpha == 1.0 {
        if rho != 0.5 {
            return Err(Error::domain(format!("α=1 requires ρ=1/2 (got ρ={rho})")));
        }
    } else if alpha > 1.0 {
        let lo = 1.0 - 1.0 / alpha;
        let hi = 1.0 / alpha;
        if !(rho > lo && rho < hi) {
            return Err(Error::domain(format!(
                "α>1 requires ρ∈(1−1/α,1/α) = ({lo},{hi}) (got α={alpha}, ρ={rho})"
            )));
        }
    }
    Ok(())
}

// Γ(α+1) / (Γ(a) Γ(1-a)) with signs tracked
fn jump_constant(alpha: f64, a: f64) -> Result<f64> {
    let (l1, s1) = log_gamma(alpha + 1.0)?;
    let (l2, s2) = log_gamma(a)?;
    let (l3, s3) = log_gamma(1.0 - a)?;
    Ok((s1 * s2 * s3).as_f64() * (l1 - l2 - l3).exp())
}

impl StableParams {
    pub fn new(alpha: f64, rho: f64) -> Result<Self> {
        check_admissible(alpha, rho)?;
        let p = Self::from_parts(alpha, rho, 1.0 - rho)?;
        debug_assert!(p.c_plus > 0.0 && p.c_minus > 0.0 && p.q > 0.0);
        Ok(p)
    }

    /// Builds the constants for any `α ∈ (0,2)`, `ρ ∈ (0,1)` without the
    /// admissibility check. Formulas evaluated with such parameters are not
    /// potentials of any stable process; this exists for sensitivity
    /// studies such as perturbing `ρ` against simulated data.
    pub fn unchecked(alpha: f64, rho: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 2.0 && rho > 0.0 && rho < 1.0) {
            return Err(Error::domain(format!(
                "need α∈(0,2) and ρ∈(0,1) (got α={alpha}, ρ={rho})"
            )));
        }
        Self::from_parts(alpha, rho, 1.0 - rho)
    }

    fn from_parts(alpha: f64, rho: f64, rho_hat: f64) -> Result<Self> {
        let skew_angle = PI * alpha * (rho - rho_hat) / 2.0;
        let c = skew_angle.cos();
        let beta = if alpha == 1.0 {
            0.0
        } else {
            skew_angle.tan() / (PI * alpha / 2.0).tan()
        };
        let c_plus = jump_constant(alpha, alpha * rho)?;
        let c_minus = jump_constant(alpha, alpha * rho_hat)?;
        let (lg_ar, s_ar) = log_gamma(alpha * rho)?;
        let (lg_arh, s_arh) = log_gamma(alpha * rho_hat)?;
        if (s_ar * s_arh).as_f64() < 0.0 {
            return Err(Error::domain("Γ(αρ)Γ(αρ̂) must be positive"));
        }
        let ln_gamma_alpha = log_gamma(alpha)?.0;
        Ok(StableParams {
            alpha,
            rho,
            rho_hat,
            c,
            beta,
            c_plus,
            c_minus,
            q: c_minus / alpha,
            ln_norm: -lg_ar - lg_arh,
            ln_gamma_alpha,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn rho(&self) -> f64 {
        self.rho
    }
    pub fn rho_hat(&self) -> f64 {
        self.rho_hat
    }
    /// Scale constant `cos(πα(ρ - 1/2))` of the characteristic exponent.
    pub fn c(&self) -> f64 {
        self.c
    }
    /// Skewness; exactly zero for the symmetric Cauchy case.
    pub fn beta(&self) -> f64 {
        self.beta
    }
    /// Lévy density constant on the positive half-line.
    pub fn c_plus(&self) -> f64 {
        self.c_plus
    }
    /// Lévy density constant on the negative half-line.
    pub fn c_minus(&self) -> f64 {
        self.c_minus
    }
    /// Killing rate of the Lamperti transform of the process absorbed
    /// below zero, `c₋ / α`.
    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn is_symmetric(&self) -> bool {
        self.rho == self.rho_hat
    }

    pub(crate) fn alpha_rho(&self) -> f64 {
        self.alpha * self.rho
    }
    pub(crate) fn alpha_rho_hat(&self) -> f64 {
        self.alpha * self.rho_hat
    }
    /// `-log(Γ(αρ)Γ(αρ̂))`
    pub(crate) fn ln_norm(&self) -> f64 {
        self.ln_norm
    }
    pub(crate) fn ln_gamma_alpha(&self) -> f64 {
        self.ln_gamma_alpha
    }

    /// The process `-X`: `ρ` and `ρ̂` exchanged.
    pub fn dual(&self) -> StableParams {
        Self::from_parts(self.alpha, self.rho_hat, self.rho)
            .expect("the parameter set is closed under ρ ↔ ρ̂")
    }

    /// Density of the Lévy measure at `x ≠ 0`.
    pub fn levy_density(&self, x: f64) -> Result<f64> {
        if x > 0.0 {
            Ok(self.c_plus * x.powf(-(self.alpha + 1.0)))
        } else if x < 0.0 {
            Ok(self.c_minus * (-x).powf(-(self.alpha + 1.0)))
        } else {
            Err(Error::domain(format!("Lévy density is not defined at x={x}")))
        }
    }

    /// `log` of the Lévy density at `x > 0`.
    pub(crate) fn ln_levy_density_pos(&self, x: f64) -> f64 {
        self.c_plus.ln() - (self.alpha + 1.0) * x.ln()
    }

    /// Characteristic exponent `Ψ(θ)`, with `E e^{iθX_t} = e^{-tΨ(θ)}`.
    pub fn char_exponent(&self, theta: f64) -> Complex64 {
        if theta == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let modulus = self.c * theta.abs().powf(self.alpha);
        if self.alpha == 1.0 {
            return Complex64::new(modulus, 0.0);
        }
        // β tan(πα/2) = tan(πα(ρ - 1/2))
        let skew = (PI * self.alpha * (self.rho - self.rho_hat) / 2.0).tan();
        Complex64::new(modulus, -modulus * skew * theta.signum())
    }
}

/// Free-function form of [`StableParams::levy_density`].
pub fn levy_density(p: &StableParams, x: f64) -> Result<f64> {
    p.levy_density(x)
}

/// Free-function form of [`StableParams::char_exponent`].
pub fn char_exponent(p: &StableParams, theta: f64) -> Complex64 {
    p.char_exponent(theta)
}

/// Free-function form of [`StableParams::dual`].
pub fn dual(p: &StableParams) -> StableParams {
    p.dual()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn cauchy_killing_rate() {
        let p = make_params(1.0, 0.5).unwrap();
        assert!((p.q() - 1.0 / PI).abs() < 1e-15);
        assert_eq!(p.beta(), 0.0);
        assert_eq!(p.c(), 1.0);
    }

    #[test]
    fn half_alpha_killing_rate() {
        let p = make_params(0.5, 0.5).unwrap();
        assert!((p.q() - 1.0 / (2.0 * PI).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn rejected_parameters_name_the_clause() {
        let e = make_params(1.0, 0.6).unwrap_err().to_string();
        assert!(e.contains("α=1 requires ρ=1/2"), "{e}");
        let e = make_params(1.5, 0.2).unwrap_err().to_string();
        assert!(e.contains("α>1 requires ρ∈(1−1/α,1/α)"), "{e}");
        assert!(make_params(2.0, 0.5).is_err());
        assert!(make_params(3.0, 0.5).is_err());
        assert!(make_params(0.5, 0.0).is_err());
        assert!(make_params(0.5, 1.0).is_err());
        // boundary ρ = 1/α is one-sided and excluded
        assert!(make_params(1.5, 1.0 / 1.5).is_err());
    }

    #[test]
    fn levy_density_values() {
        let p = make_params(1.0, 0.5).unwrap();
        assert!((p.levy_density(1.0).unwrap() - 1.0 / PI).abs() < 1e-15);
        assert!(p.levy_density(0.0).is_err());

        let p = make_params(1.5, 0.4).unwrap();
        // Γ(2.5) = 3√π/4; Γ(0.6)Γ(0.4) = π / sin(0.4π)
        let cp = 0.75 * PI.sqrt() * (0.4 * PI).sin() / PI;
        assert!((p.c_plus() / cp - 1.0).abs() < 1e-13);
        let expect = cp * 2.0_f64.powf(-2.5);
        assert!((p.levy_density(2.0).unwrap() / expect - 1.0).abs() < 1e-13);
    }

    #[test]
    fn symmetric_levy_density_is_even() {
        let p = make_params(0.8, 0.5).unwrap();
        for x in [0.1, 1.0, 7.5] {
            assert_eq!(p.levy_density(x).unwrap(), p.levy_density(-x).unwrap());
        }
    }

    #[test]
    fn char_exponent_basics() {
        let p = make_params(1.5, 0.4).unwrap();
        assert_eq!(p.char_exponent(0.0), Complex64::new(0.0, 0.0));
        for th in [0.3, 1.0, 4.0] {
            assert_eq!(p.char_exponent(-th), p.char_exponent(th).conj());
        }
        let s = make_params(0.7, 0.5).unwrap();
        assert_eq!(s.char_exponent(2.0).im, 0.0);
    }

    #[test]
    fn dual_examples() {
        let p = make_params(1.5, 0.4).unwrap();
        let d = p.dual();
        assert_eq!(d.alpha(), 1.5);
        assert_eq!(d.rho(), 0.6);
        assert_eq!(d.c_plus(), p.c_minus());
        let s = make_params(0.9, 0.5).unwrap();
        assert_eq!(s.dual(), s);
    }

    #[test]
    fn near_boundary_constants_are_finite() {
        for &(a, r) in &[
            (1.999, 0.5),
            (1.5, 1.0 - 1.0 / 1.5 + 1e-9),
            (1.5, 1.0 / 1.5 - 1e-9),
            (0.01, 0.5),
            (0.5, 1e-9),
            (0.5, 1.0 - 1e-9),
            (1.000001, 0.5),
            (0.999999, 0.999),
        ] {
            let p = make_params(a, r).unwrap();
            for v in [p.c(), p.c_plus(), p.c_minus(), p.q()] {
                assert!(v.is_finite() && v > 0.0, "{a} {r} {p:?}");
            }
        }
    }

    fn admissible() -> impl Strategy<Value = (f64, f64)> {
        prop_oneof![
            (0.01f64..0.99, 0.001f64..0.999),
            Just((1.0, 0.5)),
            (1.01f64..1.99, 0.001f64..0.999).prop_map(|(a, t)| {
                let lo = 1.0 - 1.0 / a;
                let hi = 1.0 / a;
                (a, lo + t * (hi - lo))
            }),
        ]
    }

    proptest! {
        #[test]
        fn dual_is_an_involution((a, r) in admissible()) {
            let p = make_params(a, r).unwrap();
            prop_assert_eq!(p.dual().dual(), p);
            prop_assert_eq!(p.rho() + p.rho_hat(), 1.0);
        }

        #[test]
        fn jump_constants_swap_under_duality((a, r) in admissible()) {
            let p = make_params(a, r).unwrap();
            let d = p.dual();
            prop_assert!((p.c_plus() / d.c_minus() - 1.0).abs() < 1e-12);
            prop_assert!((p.q() * p.alpha() / p.c_minus() - 1.0).abs() < 1e-12);
            prop_assert!(p.c_plus() > 0.0 && p.c_minus() > 0.0 && p.q() > 0.0);
        }
    }
}

use std::f64::consts::PI;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Sign of a real number as it enters a gamma-function product.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn as_f64(self) -> f64 {
        match self {
            Sign::Positive => 1.0,
            Sign::Negative => -1.0,
        }
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }
}

/// `sin(pi * x)` with the argument reduced to `[-1, 1]` first, so that
/// exact integers give an exact zero.
pub(crate) fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (x / 2.0).round();
    (PI * r).sin()
}

fn ln_gamma_lanczos(x: f64) -> f64 {
    // valid for x >= 1/2
    let x = x - 1.0;
    let mut acc = LANCZOS_COEFFS[0];
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

/// `log|Γ(x)|` together with the sign of `Γ(x)`.
///
/// Arguments below one half go through the reflection formula
/// `Γ(x)Γ(1-x) = π / sin(πx)`.
pub fn log_gamma(x: f64) -> Result<(f64, Sign)> {
    if x.is_nan() {
        return Err(Error::domain("log_gamma of NaN"));
    }
    if x <= 0.0 && x == x.floor() {
        return Err(Error::Pole(x));
    }
    if x >= 0.5 {
        return Ok((ln_gamma_lanczos(x), Sign::Positive));
    }
    let s = sin_pi(x);
    let log_abs = PI.ln() - s.abs().ln() - ln_gamma_lanczos(1.0 - x);
    let sign = if s < 0.0 { Sign::Negative } else { Sign::Positive };
    Ok((log_abs, sign))
}

/// `Γ(x)` for any real `x` off the poles.
pub fn gamma(x: f64) -> Result<f64> {
    let (l, s) = log_gamma(x)?;
    Ok(s.as_f64() * l.exp())
}

/// `log B(a, b)` for `a, b > 0`.
pub fn ln_beta(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::domain(format!(
            "complete beta function needs a, b > 0 (got a={a}, b={b})"
        )));
    }
    Ok(log_gamma(a)?.0 + log_gamma(b)?.0 - log_gamma(a + b)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_argument() {
        let (l, s) = log_gamma(1.0).unwrap();
        assert!(l.abs() < 1e-15);
        assert_eq!(s, Sign::Positive);
    }

    #[test]
    fn half_argument() {
        let (l, s) = log_gamma(0.5).unwrap();
        assert!((l - PI.sqrt().ln()).abs() < 1e-14);
        assert_eq!(s, Sign::Positive);
    }

    #[test]
    fn negative_half_uses_reflection() {
        let (l, s) = log_gamma(-0.5).unwrap();
        assert!((l - (2.0 * PI.sqrt()).ln()).abs() < 1e-14);
        assert_eq!(s, Sign::Negative);
    }

    #[test]
    fn poles_are_rejected() {
        for x in [0.0, -1.0, -7.0] {
            assert!(matches!(log_gamma(x), Err(Error::Pole(_))));
        }
    }

    #[test]
    fn factorials() {
        let mut fact = 1.0_f64;
        for n in 1..20 {
            fact *= n as f64;
            let (l, _) = log_gamma(n as f64 + 1.0).unwrap();
            assert!((l - fact.ln()).abs() <= 1e-13 * fact.ln().max(1.0));
        }
    }

    #[test]
    fn sign_alternates_between_negative_poles() {
        assert_eq!(log_gamma(-1.5).unwrap().1, Sign::Positive);
        assert_eq!(log_gamma(-2.5).unwrap().1, Sign::Negative);
        assert_eq!(log_gamma(-3.5).unwrap().1, Sign::Positive);
    }

    #[test]
    fn beta_of_halves_is_pi() {
        assert!((ln_beta(0.5, 0.5).unwrap() - PI.ln()).abs() < 1e-14);
    }
}

use std::f64::consts::{FRAC_PI_2, PI};

use rand::distributions::Open01;
use rand::Rng;

use crate::params::StableParams;

/// Chambers-Mallows-Stuck sampler for increments of the process.
///
/// In the normalization used here the skewness angle is `θ₀ = πα(ρ - 1/2)`
/// and the scale constant cancels: an increment over time `t` is
/// `t^{1/α} sin(αV + θ₀) / cos(V)^{1/α} · (cos(V - αV - θ₀) / W)^{(1-α)/α}`
/// with `V` uniform on `(-π/2, π/2)` and `W` standard exponential. The sign
/// of the draw is positive exactly when `V > -θ₀/α`, which has probability
/// `ρ`.
#[derive(Debug, Clone, Copy)]
pub struct StableSampler {
    alpha: f64,
    inv_alpha: f64,
    tail_exp: f64,
    theta0: f64,
}

impl StableSampler {
    pub fn new(p: &StableParams) -> Self {
        let alpha = p.alpha();
        StableSampler {
            alpha,
            inv_alpha: 1.0 / alpha,
            tail_exp: (1.0 - alpha) / alpha,
            theta0: PI * alpha * (p.rho() - p.rho_hat()) / 2.0,
        }
    }

    /// One draw of `X₁` under `P₀`.
    #[inline]
    pub fn unit<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.sample(Open01);
        let v = PI * u - FRAC_PI_2;
        if self.tail_exp == 0.0 {
            return v.tan();
        }
        let w = -rng.sample::<f64, _>(Open01).ln();
        let av = self.alpha * v + self.theta0;
        let ln_scale = self.tail_exp * ((v - av).cos() / w).ln() - self.inv_alpha * v.cos().ln();
        av.sin() * ln_scale.exp()
    }

    /// Increment over a time span of length `t`, by `α`-scaling.
    #[inline]
    pub fn increment<R: Rng + ?Sized>(&self, t: f64, rng: &mut R) -> f64 {
        t.powf(self.inv_alpha) * self.unit(rng)
    }

    pub fn time_scale(&self, t: f64) -> f64 {
        t.powf(self.inv_alpha)
    }
}

/// One increment of the process over duration `unit_time`.
pub fn sample_stable<R: Rng + ?Sized>(p: &StableParams, unit_time: f64, rng: &mut R) -> f64 {
    StableSampler::new(p).increment(unit_time, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::make_params;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const N: usize = 1_000_000;

    fn draws(p: &StableParams, seed: u64) -> Vec<f64> {
        let s = StableSampler::new(p);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..N).map(|_| s.unit(&mut rng)).collect()
    }

    #[test]
    fn positivity_matches_rho() {
        for &(a, r) in &[(1.5, 0.4), (0.7, 0.6), (1.0, 0.5), (0.5, 0.2)] {
            let p = make_params(a, r).unwrap();
            let d = draws(&p, 11);
            let frac = d.iter().filter(|&&x| x > 0.0).count() as f64 / N as f64;
            let se = (r * (1.0 - r) / N as f64).sqrt();
            assert!((frac - r).abs() < 3.0 * se, "{a} {r}: {frac}");
        }
    }

    #[test]
    fn symmetric_median_is_zero() {
        let p = make_params(1.3, 0.5).unwrap();
        let d = draws(&p, 5);
        let below = d.iter().filter(|&&x| x < 0.0).count() as f64 / N as f64;
        // the median is zero iff P(X < 0) = 1/2
        assert!((below - 0.5).abs() < 3.0 * (0.25 / N as f64).sqrt());
    }

    #[test]
    fn characteristic_function_at_one() {
        for &(a, r) in &[(1.5, 0.4), (0.7, 0.6), (1.0, 0.5)] {
            let p = make_params(a, r).unwrap();
            let d = draws(&p, 99);
            let (mut re, mut im, mut re2, mut im2) = (0.0, 0.0, 0.0, 0.0);
            for &x in &d {
                re += x.cos();
                im += x.sin();
                re2 += x.cos().powi(2);
                im2 += x.sin().powi(2);
            }
            let n = N as f64;
            let (re, im) = (re / n, im / n);
            let se_re = ((re2 / n - re * re) / n).sqrt();
            let se_im = ((im2 / n - im * im) / n).sqrt();
            let target = (-p.char_exponent(1.0)).exp();
            assert!((re - target.re).abs() < 3.0 * se_re, "{a} {r} re {re} {}", target.re);
            assert!((im - target.im).abs() < 3.0 * se_im, "{a} {r} im {im} {}", target.im);
        }
    }

    #[test]
    fn scaling_of_increments() {
        let p = make_params(1.5, 0.4).unwrap();
        let s = StableSampler::new(&p);
        let mut a = ChaCha8Rng::seed_from_u64(3);
        let mut b = ChaCha8Rng::seed_from_u64(3);
        let x = s.increment(0.01, &mut a);
        let y = s.unit(&mut b);
        assert!((x - 0.01_f64.powf(1.0 / 1.5) * y).abs() < 1e-15 * y.abs().max(1.0));
    }
}

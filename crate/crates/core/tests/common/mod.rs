//! Oracles for the integration tests: closed forms written out from
//! scratch on top of statrs, and a graded Gauss-Legendre rule.

#![allow(dead_code)]

use statrs::function::beta::{beta_reg, ln_beta};
use statrs::function::gamma::{gamma, ln_gamma};

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// `∫₀^L g(s) ds` for `g ~ s^p` at zero (`p > -1`), by the substitution
/// `s = L w^k`, `k = 1/(1+p)`, and a mesh in `w` graded geometrically
/// towards zero. `g` receives the exact distance `s`.
pub fn integrate_from_singular<G: Fn(f64) -> f64>(g: G, len: f64, p: f64) -> f64 {
    let k = 1.0 / (1.0 + p.min(0.0));
    let rule = gauss_legendre(24);
    let levels = 40;
    let mut total = 0.0;
    let mut hi = 1.0_f64;
    for j in 0..=levels {
        let lo = if j == levels { 0.0 } else { hi * 0.5 };
        let (mid, half) = (0.5 * (lo + hi), 0.5 * (hi - lo));
        for &(t, w) in &rule {
            let wv = mid + half * t;
            let s = len * wv.powf(k);
            let jac = len * k * wv.powf(k - 1.0);
            total += half * w * g(s) * jac;
        }
        hi = lo;
    }
    total
}

/// `∫_a^b f` with power singularities `pa` at `a` and `pb` at `b`; the
/// interval is split at the midpoint. `f` receives `(t, t - a, b - t)`.
pub fn integrate<F: Fn(f64, f64, f64) -> f64>(f: F, a: f64, b: f64, pa: f64, pb: f64) -> f64 {
    let m = 0.5 * (a + b);
    let h = m - a;
    // closer than `floor` the abscissa can no longer be told apart from the
    // endpoint; the leading power law stands in for f there
    let floor = 1e-8 * (b - a);
    let left = integrate_from_singular(
        |s| {
            let s0 = s.max(floor);
            f(a + s0, s0, (b - a) - s0) * (s / s0).powf(pa)
        },
        h,
        pa,
    );
    let right = integrate_from_singular(
        |s| {
            let s0 = s.max(floor);
            f(b - s0, (b - a) - s0, s0) * (s / s0).powf(pb)
        },
        b - m,
        pb,
    );
    left + right
}

pub struct Oracle {
    pub alpha: f64,
    pub rho: f64,
}

impl Oracle {
    pub fn new(alpha: f64, rho: f64) -> Self {
        Oracle { alpha, rho }
    }
    pub fn ar(&self) -> f64 {
        self.alpha * self.rho
    }
    pub fn arh(&self) -> f64 {
        self.alpha * (1.0 - self.rho)
    }
    pub fn ln_k(&self) -> f64 {
        -ln_gamma(self.ar()) - ln_gamma(self.arh())
    }
    pub fn c_plus(&self) -> f64 {
        gamma(self.alpha + 1.0) / (gamma(self.ar()) * gamma(1.0 - self.ar()))
    }
    pub fn c_minus(&self) -> f64 {
        gamma(self.alpha + 1.0) / (gamma(self.arh()) * gamma(1.0 - self.arh()))
    }

    /// `u(x, y, z)` with the gaps `z - x`, `z - y` passed exactly.
    pub fn u_xyz(&self, x: f64, y: f64, z: f64, zx: f64, zy: f64) -> f64 {
        let (ar, arh) = (self.ar(), self.arh());
        (self.ln_k() + arh * x.ln() + ar * y.ln() + (ar - 1.0) * zx.ln() + (arh - 1.0) * zy.ln()
            - self.alpha * z.ln())
        .exp()
    }

    /// `r(x, y, z)` with the gaps passed exactly.
    pub fn r_xyz(&self, x: f64, y: f64, z: f64, zx: f64, zy: f64) -> f64 {
        let (ar, arh, a) = (self.ar(), self.arh(), self.alpha);
        let shape = (self.ln_k() + (ar - 1.0) * y.ln() + (arh - 1.0) * zy.ln()).exp();
        let first = if x == 0.0 {
            0.0
        } else {
            (arh * x.ln() + (ar - 1.0) * zx.ln() + (1.0 - a) * z.ln()).exp()
        };
        let w = zx / z;
        let tail = arh * beta_reg(ar, arh, w) * ln_beta(ar, arh).exp();
        shape * (first + tail)
    }

    pub fn r1_zero(&self, y: f64) -> f64 {
        y.powf(self.ar() - 1.0) * (1.0 - y).powf(self.arh()) / gamma(self.alpha)
    }

    pub fn exit_up(&self, x: f64) -> f64 {
        beta_reg(self.arh(), self.ar(), x)
    }

    pub fn mean_exit_time(&self, x: f64) -> f64 {
        x.powf(self.arh()) * (1.0 - x).powf(self.ar()) / gamma(self.alpha + 1.0)
    }

    pub fn expected_passage_time(&self, x: f64) -> f64 {
        let (ar, arh) = (self.ar(), self.arh());
        let first = x.powf(arh) * (1.0 - x).powf(ar);
        let b = if x == 1.0 { 0.0 } else { beta_reg(ar, arh, 1.0 - x) * ln_beta(ar, arh).exp() };
        (first + arh * b) / gamma(self.alpha + 1.0)
    }
}

pub fn rel(observed: f64, expected: f64) -> f64 {
    if observed == expected {
        0.0
    } else {
        ((observed - expected) / expected).abs()
    }
}

/// Prints one result line and returns whether it passed.
pub fn report(label: &str, observed: f64, expected: f64, err: f64, tol: f64) -> bool {
    let pass = err <= tol;
    println!(
        "[{}] {label}: observed={observed:.15e} expected={expected:.15e} err={err:.3e} tol={tol:.1e}",
        if pass { "PASS" } else { "FAIL" }
    );
    pass
}

use crate::error::{Error, Result};

use super::gamma::ln_beta;
use super::quadrature::{integrate, QuadratureSpec};

/// Incomplete beta integral `B(w; a, b) = ∫₀ʷ t^{a-1} (1-t)^{b-1} dt`.
///
/// `b` may be non-positive as long as `w < 1`. Endpoint singularities are
/// taken out by substitution before quadrature, so callers pass the raw
/// parameters.
pub fn inc_beta(w: f64, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(0.0..=1.0).contains(&w) {
        return Err(Error::domain(format!("incomplete beta needs w in [0, 1] (got {w})")));
    }
    inc_beta_parts(w, 1.0 - w, a, b, spec)
}

/// Same as [`inc_beta`] with `1 - w` supplied separately, for callers that
/// know the complement more accurately than `1.0 - w` would give it.
pub(crate) fn inc_beta_parts(w: f64, w_comp: f64, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(a > 0.0) {
        return Err(Error::domain(format!("incomplete beta needs a > 0 (got {a})")));
    }
    if !b.is_finite() {
        return Err(Error::domain(format!("incomplete beta needs finite b (got {b})")));
    }
    if !(w >= 0.0 && w_comp >= 0.0) {
        return Err(Error::domain(format!("incomplete beta needs w in [0, 1] (got {w})")));
    }
    if w == 0.0 {
        return Ok(0.0);
    }
    if w_comp == 0.0 && b <= 0.0 {
        return Err(Error::Divergent(format!(
            "B(1; a, b) is infinite for b = {b} <= 0"
        )));
    }

    let lower_end = w.min(0.5);
    let mut total = lower_piece(lower_end, a, b, spec);
    if w > 0.5 {
        total += upper_piece(w_comp, a, b, spec);
    }
    Ok(total)
}

// ∫₀^m t^{a-1}(1-t)^{b-1} dt for m <= 1/2
fn lower_piece(m: f64, a: f64, b: f64, spec: &QuadratureSpec) -> f64 {
    if a < 1.0 {
        // t = u^{1/a}
        let inv = 1.0 / a;
        let top = m.powf(a);
        integrate(|u: f64| ((b - 1.0) * (-u.powf(inv)).ln_1p()).exp(), 0.0, top, spec).value
            * inv
    } else {
        integrate(
            |t: f64| ((a - 1.0) * t.ln() + (b - 1.0) * (-t).ln_1p()).exp(),
            0.0,
            m,
            spec,
        )
        .value
    }
}

// ∫_{1/2}^{w} t^{a-1}(1-t)^{b-1} dt written in s = 1 - t over [s_lo, 1/2]
fn upper_piece(s_lo: f64, a: f64, b: f64, spec: &QuadratureSpec) -> f64 {
    if b <= 0.0 {
        // s = e^λ
        integrate(
            |l: f64| (b * l + (a - 1.0) * (-l.exp()).ln_1p()).exp(),
            s_lo.ln(),
            0.5_f64.ln(),
            spec,
        )
        .value
    } else if b < 1.0 {
        // s = r^{1/b}
        let inv = 1.0 / b;
        integrate(
            |r: f64| ((a - 1.0) * (-r.powf(inv)).ln_1p()).exp(),
            s_lo.powf(b),
            0.5_f64.powf(b),
            spec,
        )
        .value
            * inv
    } else {
        integrate(
            |s: f64| ((b - 1.0) * s.ln() + (a - 1.0) * (-s).ln_1p()).exp(),
            s_lo,
            0.5,
            spec,
        )
        .value
    }
}

/// `J(w; a, b) = ∫₀ʷ s^{a-1} (1+s)^{b-1} ds`, evaluated through
/// `t = s / (1 + s)` as `B(w / (1 + w); a, 1 - a - b)`.
///
/// `w = +∞` is allowed when the integral converges, i.e. `a + b < 1`.
pub fn j_integral(w: f64, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(w >= 0.0) {
        return Err(Error::domain(format!("J integral needs w >= 0 (got {w})")));
    }
    if !(a > 0.0) {
        return Err(Error::domain(format!("J integral needs a > 0 (got {a})")));
    }
    if w.is_infinite() {
        if a + b >= 1.0 {
            return Err(Error::Divergent(format!(
                "J(∞; a, b) is infinite for a + b = {} >= 1",
                a + b
            )));
        }
        return inc_beta_parts(1.0, 0.0, a, 1.0 - a - b, spec);
    }
    inc_beta_parts(w / (1.0 + w), 1.0 / (1.0 + w), a, 1.0 - a - b, spec)
}

/// Regularized incomplete beta `I_x(a, b)`, by Lentz's continued fraction.
///
/// This route shares nothing with the quadrature behind [`inc_beta`].
pub fn reg_inc_beta(x: f64, a: f64, b: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain(format!("regularized beta needs x in [0, 1] (got {x})")));
    }
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::domain(format!(
            "regularized beta needs a, b > 0 (got a={a}, b={b})"
        )));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == 1.0 {
        return Ok(1.0);
    }
    let ln_front = a * x.ln() + b * (-x).ln_1p() - ln_beta(a, b)?;
    if x < (a + 1.0) / (a + b + 2.0) {
        Ok((ln_front.exp() * beta_cf(x, a, b) / a).clamp(0.0, 1.0))
    } else {
        Ok((1.0 - ln_front.exp() * beta_cf(1.0 - x, b, a) / b).clamp(0.0, 1.0))
    }
}

fn beta_cf(x: f64, a: f64, b: f64) -> f64 {
    const TINY: f64 = 1e-300;
    const EPS: f64 = 1e-16;
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..10_000 {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

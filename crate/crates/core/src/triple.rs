//! Marginals of the first-passage triple laws.
//!
//! Both triple densities factor as `k(u, v) · c₊ (v + y)^{-(α+1)}`, where `u`
//! is the undershoot from the running maximum, `v` the undershoot and `y`
//! the overshoot. The overshoot integral is done in closed form,
//! `∫₀^y (v + s)^{-(α+1)} ds = (v^{-α} - (v + y)^{-α}) / α`, and the
//! remaining `(u, v)` integral by nested singular quadrature.

use crate::error::Result;
use crate::params::StableParams;
use crate::special::{integrate_singular, QuadratureSpec};

pub(crate) trait UvKernel: Sync {
    /// `k(u, v)` with `one_gap = 1 - v`, `v_gap = v - u` and
    /// `top_gap = top - u` supplied exactly.
    fn kernel(&self, u: f64, v: f64, one_gap: f64, v_gap: f64, top_gap: f64) -> f64;
    /// Upper limit of `u` once `v` exceeds it.
    fn top(&self) -> f64;
    /// Power of `k` as `u → top`.
    fn top_power(&self) -> f64;
    /// Power of `k` as `u → v`.
    fn v_power(&self) -> f64;
    /// Power of the `u`-marginal as `v → 1`.
    fn one_power(&self) -> f64;
    fn params(&self) -> &StableParams;
}

fn neg(p: f64) -> f64 {
    p.min(0.0)
}

/// Distances from an outer node `v` to the points where the `u`-marginal
/// is singular.
#[derive(Clone, Copy)]
struct VNode {
    v: f64,
    /// `1 - v`
    one_gap: f64,
    /// `v - top`, signed
    top_gap: f64,
}

/// `∫ k(u, v) du` over `0 ≤ u < min(v, top)`.
fn u_marginal<K: UvKernel>(k: &K, n: VNode, spec: &QuadratureSpec) -> Result<f64> {
    let top = k.top();
    let VNode { v, one_gap, top_gap } = n;
    if top_gap < 0.0 {
        let gap = -top_gap;
        Ok(integrate_singular(
            |u, _, dr| k.kernel(u, v, one_gap, dr, gap + dr),
            0.0,
            v,
            0.0,
            neg(k.v_power()),
            spec,
        )?
        .value)
    } else if top_gap > 0.0 {
        Ok(integrate_singular(
            |u, _, dr| k.kernel(u, v, one_gap, top_gap + dr, dr),
            0.0,
            top,
            0.0,
            neg(k.top_power()),
            spec,
        )?
        .value)
    } else {
        Ok(0.0)
    }
}

/// `∫ m(v) w(v) dv` over `(0, v_max]`, where `m` is [`u_marginal`] and the
/// weight behaves like `v^{-α}` at zero.
fn v_integral<K, W>(k: &K, weight: W, v_max: f64, spec: &QuadratureSpec) -> Result<f64>
where
    K: UvKernel,
    W: Fn(f64) -> f64,
{
    let p = k.params();
    let at_zero = neg(p.alpha_rho_hat() - p.alpha());
    let merged = neg(p.alpha() - 1.0);
    let at_one = neg(k.one_power());
    let top = k.top();
    let v_max = v_max.min(1.0);
    let inner_spec = QuadratureSpec {
        rel_tol: spec.rel_tol * 0.1,
        ..*spec
    };
    let f = |n: VNode| -> f64 {
        match u_marginal(k, n, &inner_spec) {
            Ok(m) => m * weight(n.v),
            Err(_) => f64::NAN,
        }
    };
    let mut total = 0.0;
    if top < v_max {
        total += integrate_singular(
            |v, _, dr| {
                f(VNode {
                    v,
                    one_gap: 1.0 - v,
                    top_gap: -dr,
                })
            },
            0.0,
            top,
            at_zero,
            merged,
            spec,
        )?
        .value;
        let end_gap = 1.0 - v_max;
        let hi = if v_max == 1.0 { at_one } else { 0.0 };
        total += integrate_singular(
            |v, dl, dr| {
                f(VNode {
                    v,
                    one_gap: end_gap + dr,
                    top_gap: dl,
                })
            },
            top,
            v_max,
            merged,
            hi,
            spec,
        )?
        .value;
    } else {
        let end_gap = 1.0 - v_max;
        let hi = if v_max == top {
            merged
        } else if v_max == 1.0 {
            at_one
        } else {
            0.0
        };
        let top_end = v_max - top;
        total += integrate_singular(
            |v, _, dr| {
                f(VNode {
                    v,
                    one_gap: end_gap + dr,
                    top_gap: top_end - dr,
                })
            },
            0.0,
            v_max,
            at_zero,
            hi,
            spec,
        )?
        .value;
    }
    Ok(total)
}

/// Total mass of the triple law.
pub(crate) fn mass<K: UvKernel>(k: &K, spec: &QuadratureSpec) -> Result<f64> {
    let p = *k.params();
    let (a, cp) = (p.alpha(), p.c_plus());
    v_integral(k, |v| cp * v.powf(-a) / a, 1.0, spec)
}

/// Mass of `{overshoot ≤ y}`.
pub(crate) fn overshoot_cdf<K: UvKernel>(k: &K, y: f64, spec: &QuadratureSpec) -> Result<f64> {
    if y <= 0.0 {
        return Ok(0.0);
    }
    if y.is_infinite() {
        return mass(k, spec);
    }
    let p = *k.params();
    let (a, cp) = (p.alpha(), p.c_plus());
    v_integral(
        k,
        |v| cp * (v.powf(-a) - (v + y).powf(-a)) / a,
        1.0,
        spec,
    )
}

/// Mass of `{undershoot ≤ v_max}`.
pub(crate) fn undershoot_cdf<K: UvKernel>(k: &K, v_max: f64, spec: &QuadratureSpec) -> Result<f64> {
    if v_max <= 0.0 {
        return Ok(0.0);
    }
    let p = *k.params();
    let (a, cp) = (p.alpha(), p.c_plus());
    v_integral(k, |v| cp * v.powf(-a) / a, v_max.min(1.0), spec)
}

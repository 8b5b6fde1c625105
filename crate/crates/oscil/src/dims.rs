//! Directional oscillation functionals in dimension d:
//!
//!   Θ_{ε,ξ}(f)(x) = ∫_ε^1 (f(x+ρξ) - f(x-ρξ)) ρ^{-α-1} dρ
//!
//! and their weighted angular aggregates. The full-sphere aggregate
//! vanishes identically because the directional functional is odd in ξ;
//! the meaningful object integrates over a hemisphere (last coordinate
//! positive) with doubled weights.

use std::f64::consts::PI;

use crate::oscillation::OscError;
use crate::quad::{integrate, QuadratureSpec};

/// A quadrature rule on the unit sphere: unit directions with positive
/// weights.
pub type DirectionRule = Vec<(Vec<f64>, f64)>;

fn check_unit(xi: &[f64]) -> Result<(), OscError> {
    let norm2: f64 = xi.iter().map(|v| v * v).sum();
    if (norm2.sqrt() - 1.0).abs() > 1e-12 {
        return Err(OscError::BadArg(format!(
            "direction must be a unit vector, |xi| = {}",
            norm2.sqrt()
        )));
    }
    Ok(())
}

/// One-dimensional oscillation integral along the unit direction `xi`.
pub fn theta_directional<F: Fn(&[f64]) -> f64>(
    f: &F,
    x: &[f64],
    xi: &[f64],
    alpha: f64,
    eps: f64,
    quad: &QuadratureSpec,
) -> Result<f64, OscError> {
    if x.len() != xi.len() || x.is_empty() {
        return Err(OscError::BadArg(
            "point and direction must share a positive dimension".into(),
        ));
    }
    check_unit(xi)?;
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(OscError::BadArg(format!("alpha {alpha} outside (0, 1)")));
    }
    if !(eps > 0.0 && eps < 0.5) {
        return Err(OscError::BadEpsilon(eps));
    }

    let mut breaks = Vec::new();
    let mut t = 0.5f64;
    while t > eps {
        breaks.push(t);
        t *= 0.5;
    }
    breaks.reverse();
    let spec = quad.with_breakpoints(breaks);

    let d = x.len();
    let g = |rho: f64| {
        let mut plus = vec![0.0; d];
        let mut minus = vec![0.0; d];
        for i in 0..d {
            plus[i] = x[i] + rho * xi[i];
            minus[i] = x[i] - rho * xi[i];
        }
        (f(&plus) - f(&minus)) * rho.powf(-1.0 - alpha)
    };
    Ok(integrate(g, eps, 1.0, &spec)?.value)
}

/// Weighted angular aggregate Σ_i w_i Θ_{ε,ξ_i}(f)(x). For a rule covering
/// the full sphere this vanishes by odd symmetry; hemisphere rules carry
/// the content.
pub fn theta_dd<F: Fn(&[f64]) -> f64>(
    f: &F,
    x: &[f64],
    alpha: f64,
    eps: f64,
    directions: &DirectionRule,
    quad: &QuadratureSpec,
) -> Result<f64, OscError> {
    if directions.is_empty() {
        return Err(OscError::BadArg("empty direction rule".into()));
    }
    if directions.iter().any(|(_, w)| *w <= 0.0) {
        return Err(OscError::BadArg("direction weights must be positive".into()));
    }
    let mut acc = 0.0;
    for (xi, w) in directions {
        acc += w * theta_directional(f, x, xi, alpha, eps, quad)?;
    }
    Ok(acc)
}

/// Midpoint rule over the full circle: n directions, total weight 2π.
pub fn circle_rule(n: usize) -> DirectionRule {
    assert!(n > 0);
    (0..n)
        .map(|i| {
            let th = 2.0 * PI * (i as f64 + 0.5) / n as f64;
            (vec![th.cos(), th.sin()], 2.0 * PI / n as f64)
        })
        .collect()
}

/// Midpoint rule over the upper half circle (second coordinate positive)
/// with doubled weights, so the total weight is again 2π.
pub fn hemicircle_rule(n: usize) -> DirectionRule {
    assert!(n > 0);
    (0..n)
        .map(|i| {
            let th = PI * (i as f64 + 0.5) / n as f64;
            (vec![th.cos(), th.sin()], 2.0 * PI / n as f64)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const LN2: f64 = std::f64::consts::LN_2;

    fn sign_power_first(alpha: f64) -> impl Fn(&[f64]) -> f64 {
        move |p: &[f64]| p[0].abs().powf(alpha) * p[0].signum()
    }

    #[test]
    fn flat_direction_gives_zero() {
        let f = sign_power_first(0.5);
        let v = theta_directional(
            &f,
            &[0.3, 0.9],
            &[0.0, 1.0],
            0.5,
            2f64.powi(-8),
            &QuadratureSpec::default(),
        )
        .unwrap();
        assert!(v.abs() < 1e-12);
    }

    #[test]
    fn axis_direction_reduces_to_one_dimensional() {
        let f = sign_power_first(0.5);
        let v = theta_directional(
            &f,
            &[0.0, 0.0],
            &[1.0, 0.0],
            0.5,
            2f64.powi(-8),
            &QuadratureSpec::default(),
        )
        .unwrap();
        assert!((v - 16.0 * LN2).abs() < 1e-9, "got {v}");
    }

    #[test]
    fn antisymmetric_in_direction() {
        let f = |p: &[f64]| (3.0 * p[0]).sin() + (p[0] * p[1]).cos();
        let quad = QuadratureSpec::with_tols(1e-12, 1e-12);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let th: f64 = rng.gen_range(0.0..2.0 * PI);
            let xi = vec![th.cos(), th.sin()];
            let neg: Vec<f64> = xi.iter().map(|v| -v).collect();
            let x = vec![rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
            let a = theta_directional(&f, &x, &xi, 0.5, 0.01, &quad).unwrap();
            let b = theta_directional(&f, &x, &neg, 0.5, 0.01, &quad).unwrap();
            assert!((a + b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn non_unit_direction_rejected() {
        let f = sign_power_first(0.5);
        let e = theta_directional(&f, &[0.0, 0.0], &[1.0, 1.0], 0.5, 0.01, &QuadratureSpec::default());
        assert!(e.is_err());
    }

    #[test]
    fn full_circle_vanishes() {
        let rule = circle_rule(64);
        let quad = QuadratureSpec::with_tols(1e-12, 1e-12);
        let f = |p: &[f64]| (2.0 * p[0]).sin() * (1.5 * p[1]).cos() + p[0] * 0.3;
        let v = theta_dd(&f, &[0.2, -0.4], 0.5, 2f64.powi(-6), &rule, &quad).unwrap();
        assert!(v.abs() < 1e-10, "got {v}");
    }

    #[test]
    fn constant_field_gives_zero() {
        let rule = hemicircle_rule(32);
        let f = |_: &[f64]| 7.5;
        let v = theta_dd(&f, &[0.0, 0.0], 0.5, 0.01, &rule, &QuadratureSpec::default()).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn empty_rule_rejected() {
        let f = |_: &[f64]| 0.0;
        assert!(theta_dd(&f, &[0.0], 0.5, 0.01, &vec![], &QuadratureSpec::default()).is_err());
    }

    #[test]
    fn hemisphere_separable_field_matches_angular_factor() {
        // Field varying along the last coordinate only; the directional
        // integral is 2|sinθ|^α sign(sinθ) ln(1/ε), so the aggregate equals
        // 2 ln(1/ε) · (2π/n) Σ sin^α(θ_i) ≈ 2 ln(1/ε) · 2∫_0^π sin^α,
        // and the Wallis closed form pins the angular factor.
        let alpha = 0.5;
        let f = move |p: &[f64]| p[1].abs().powf(alpha) * p[1].signum();
        let eps = 2f64.powi(-8);
        let rule = hemicircle_rule(1024);
        let quad = QuadratureSpec::with_tols(1e-11, 1e-11);
        let v = theta_dd(&f, &[0.0, 0.0], alpha, eps, &rule, &quad).unwrap();
        let wallis = statrs::function::gamma::gamma((alpha + 1.0) / 2.0) * PI.sqrt()
            / statrs::function::gamma::gamma(alpha / 2.0 + 1.0);
        let expect = 2.0 * (1.0 / eps).ln() * 2.0 * wallis;
        assert!(
            (v - expect).abs() < 1e-4 * expect.abs(),
            "{v} vs {expect}"
        );
    }
}

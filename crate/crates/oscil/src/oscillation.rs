//! The oscillation functional
//!
//!   Θ_ε(f)(x) = ∫_ε^1 (f(x+h) - f(x-h)) h^{-α-1} dh,   0 < ε < 1/2,
//!
//! its absolute-value variant, dyadic level profiles with the running
//! maximal function, and the spectral route for the lacunary sine series:
//! Θ_{2^{-N}}(f)(x) = 2 Σ_j c_{j,N} cos(2π 2^j x) with
//! c_{j,N} = ∫_{2^{j-N}}^{2^j} sin(2πt) t^{-α-1} dt.
//!
//! Quadrature strategy: dyadic blocks [2^{-k}, 2^{-k+1}] are integrated
//! separately with forced panel boundaries at half-periods of the highest
//! frequency kept in the integrand. Series terms the panel budget cannot
//! resolve are dropped from the evaluation and their contribution enters
//! the reported error estimate instead (integration by parts bounds the
//! dropped tail for the signed integral, the amplitude tail bounds it for
//! the absolute one).

use std::collections::HashMap;
use std::f64::consts::{PI, TAU};

use thiserror::Error;

use crate::funcspace::{holder_ratio_max, FuncError, HolderFunction, Interval, DEFAULT_MIN_GAP};
use crate::quad::{integrate, uniform_breakpoints, QuadError, QuadResult, QuadScheme, QuadratureSpec};

#[derive(Debug, Error)]
pub enum OscError {
    #[error("epsilon {0} must lie in (0, 1/2)")]
    BadEpsilon(f64),
    #[error("invalid argument: {0}")]
    BadArg(String),
    #[error(transparent)]
    Quadrature(#[from] QuadError),
    #[error(transparent)]
    Function(#[from] FuncError),
}

/// Hard cap on forced panels per dyadic block. When the cap binds, the
/// unresolved series tail is dropped from the integrand and its bound is
/// added to the error estimate.
const PANEL_CAP: usize = 1 << 17;

/// Θ values along the dyadic scale grid ε = 2^{-k}, k = 1..=N, with the
/// running maximal function and the ±2‖f‖_α band that transfers dyadic
/// values to arbitrary ε.
#[derive(Debug, Clone)]
pub struct OscillationProfile {
    pub x: f64,
    pub levels: Vec<u32>,
    pub theta: Vec<f64>,
    pub theta_star: Vec<f64>,
    pub eps_bridge: f64,
}

fn check_eps(eps: f64) -> Result<(), OscError> {
    if eps > 0.0 && eps < 0.5 {
        Ok(())
    } else {
        Err(OscError::BadEpsilon(eps))
    }
}

/// Dyadic blocks covering [eps, 1]: a partial block [eps, 2^{-K}] when eps
/// is not itself a power of two, then [2^{-k}, 2^{-k+1}] down to [1/2, 1].
fn dyadic_blocks(eps: f64) -> Vec<(f64, f64)> {
    let k_top = (-eps.log2()).floor() as i32;
    let mut blocks = Vec::with_capacity(k_top as usize + 1);
    let top = (-k_top as f64).exp2();
    if eps < top {
        blocks.push((eps, top));
    }
    for k in (1..=k_top).rev() {
        let a = (-k as f64).exp2();
        blocks.push((a, 2.0 * a));
    }
    blocks
}

/// Highest series term kept on a panel-budgeted block, plus the bound on
/// what dropping the rest costs.
fn series_cutoff(
    f: &HolderFunction,
    width: f64,
    w_max: f64,
    w_int: f64,
    budget: f64,
    absolute: bool,
) -> (u32, f64) {
    if !f.is_series() {
        return (u32::MAX, 0.0);
    }
    let terms = f.terms();
    let base = f.base() as f64;
    let alpha = f.alpha();
    let tail = |j: u32| -> f64 {
        if j >= terms {
            return 0.0;
        }
        if absolute {
            2.0 * f.series_tail_bound(j + 1) * w_int
        } else {
            let r = base.powf(-(1.0 + alpha));
            4.0 * w_max * (f.series_amplitude(j + 1) / f.series_frequency(j + 1)) / (1.0 - r)
        }
    };
    let mut j_budget = terms;
    for j in 0..terms {
        if tail(j) <= budget {
            j_budget = j;
            break;
        }
    }
    let max_freq = PANEL_CAP as f64 * PI / width;
    let mut j_cap = 0u32;
    while j_cap < terms && f.series_frequency(j_cap + 1) <= max_freq {
        j_cap += 1;
    }
    let j_eff = j_budget.min(j_cap);
    (j_eff, tail(j_eff))
}

/// Integrate (f(x+t) - f(x-t))·weight(t) (absolute value of the difference
/// when `absolute`) over [lo, hi] with oscillation-aware forced panels.
///
/// `weight` must be nonnegative with bounded variation ≤ w_max on the
/// range; `w_int` is ∫ weight. Returns (value, error estimate including
/// any dropped series tail).
pub(crate) fn weighted_sym_diff_integral(
    f: &HolderFunction,
    x: f64,
    lo: f64,
    hi: f64,
    weight: &dyn Fn(f64) -> f64,
    w_max: f64,
    w_int: f64,
    extra_breaks: &[f64],
    quad: &QuadratureSpec,
    absolute: bool,
) -> Result<(f64, f64), OscError> {
    let (j_eff, trunc) = series_cutoff(f, hi - lo, w_max, w_int, 0.5 * quad.abs_tol, absolute);

    let mut breaks: Vec<f64> = Vec::new();
    breaks.extend_from_slice(extra_breaks);
    for kink in f.kink_points(x - hi, x + hi) {
        for h in [kink - x, x - kink] {
            if h > lo && h < hi {
                breaks.push(h);
            }
        }
    }
    if f.is_series() {
        let np = ((hi - lo) * f.series_frequency(j_eff.min(f.terms())) / PI).ceil() as usize;
        if np > 1 {
            breaks.extend(uniform_breakpoints(lo, hi, np.min(PANEL_CAP) - 1));
        }
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();

    let spec = quad.with_breakpoints(breaks);
    let g = |t: f64| {
        let d = f.eval_truncated(x + t, j_eff) - f.eval_truncated(x - t, j_eff);
        let d = if absolute { d.abs() } else { d };
        d * weight(t)
    };
    let r: QuadResult = integrate(g, lo, hi, &spec)?;
    Ok((r.value, r.error_estimate + trunc))
}

fn osc_block(
    f: &HolderFunction,
    x: f64,
    a: f64,
    b: f64,
    quad: &QuadratureSpec,
    absolute: bool,
) -> Result<(f64, f64), OscError> {
    let alpha = f.alpha();
    let w_max = a.powf(-1.0 - alpha);
    let w_int = (a.powf(-alpha) - b.powf(-alpha)) / alpha;
    let weight = move |h: f64| h.powf(-1.0 - alpha);
    weighted_sym_diff_integral(f, x, a, b, &weight, w_max, w_int, &[], quad, absolute)
}

fn theta_inner(
    f: &HolderFunction,
    x: f64,
    eps: f64,
    quad: &QuadratureSpec,
    absolute: bool,
) -> Result<f64, OscError> {
    f.ensure_covers(x - 1.0, x + 1.0)?;
    let blocks = dyadic_blocks(eps);
    let mut spec = quad.clone();
    spec.abs_tol = quad.abs_tol / blocks.len().max(1) as f64;
    let mut total = 0.0;
    for &(a, b) in &blocks {
        total += osc_block(f, x, a, b, &spec, absolute)?.0;
    }
    Ok(total)
}

/// Θ_ε(f)(x) = ∫_ε^1 (f(x+h) - f(x-h)) h^{-α-1} dh.
pub fn theta(f: &HolderFunction, x: f64, eps: f64, quad: &QuadratureSpec) -> Result<f64, OscError> {
    check_eps(eps)?;
    theta_inner(f, x, eps, quad, false)
}

/// Same integral but accepting any 0 < eps < 1. The public [`theta`]
/// rejects eps >= 1/2; the averaging identities still need the n = 1 case
/// ∫_{1/2}^1.
pub(crate) fn theta_eps_open(
    f: &HolderFunction,
    x: f64,
    eps: f64,
    quad: &QuadratureSpec,
) -> Result<f64, OscError> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(OscError::BadEpsilon(eps));
    }
    theta_inner(f, x, eps, quad, false)
}

/// Same integral with |f(x+h) - f(x-h)| in the numerator; dominates
/// |theta| pointwise.
pub fn abs_theta(
    f: &HolderFunction,
    x: f64,
    eps: f64,
    quad: &QuadratureSpec,
) -> Result<f64, OscError> {
    check_eps(eps)?;
    theta_inner(f, x, eps, quad, true)
}

/// Seminorm stand-in used for the bridging band: the declared hint when
/// present, otherwise the empirical Hölder ratio around `x`, plus the
/// series truncation slack.
pub fn seminorm_estimate(f: &HolderFunction, x: f64) -> f64 {
    let base = match f.seminorm_hint() {
        Some(h) => h,
        None => {
            let (mut lo, mut hi) = (x - 1.0, x + 1.0);
            if let Some(d) = f.domain() {
                lo = lo.max(d.lo);
                hi = hi.min(d.hi);
            }
            match Interval::new(lo, hi) {
                Ok(dom) => {
                    holder_ratio_max(f, dom, 512, DEFAULT_MIN_GAP, 0xB5E7).unwrap_or(0.0)
                }
                Err(_) => 0.0,
            }
        }
    };
    base + f.truncation_slack()
}

/// Θ along the dyadic grid ε = 2^{-k}, k = 1..N, computed incrementally:
/// level k adds only the block [2^{-k}, 2^{-k+1}].
pub fn theta_profile(
    f: &HolderFunction,
    x: f64,
    n: u32,
    quad: &QuadratureSpec,
) -> Result<OscillationProfile, OscError> {
    if n < 1 {
        return Err(OscError::BadArg("profile depth must be at least 1".into()));
    }
    f.ensure_covers(x - 1.0, x + 1.0)?;
    let mut spec = quad.clone();
    spec.abs_tol = quad.abs_tol / n as f64;
    let mut acc = 0.0;
    let mut star: f64 = 0.0;
    let mut profile = OscillationProfile {
        x,
        levels: Vec::with_capacity(n as usize),
        theta: Vec::with_capacity(n as usize),
        theta_star: Vec::with_capacity(n as usize),
        eps_bridge: 2.0 * seminorm_estimate(f, x),
    };
    for k in 1..=n {
        let a = (-(k as f64)).exp2();
        acc += osc_block(f, x, a, 2.0 * a, &spec, false)?.0;
        star = star.max(acc.abs());
        profile.levels.push(k);
        profile.theta.push(acc);
        profile.theta_star.push(star);
    }
    Ok(profile)
}

// ---------------------------------------------------------------------------
// Sine-power integrals  F(T) = ∫_0^T sin(2πt) t^{-α-1} dt
// ---------------------------------------------------------------------------

/// Integer threshold beyond which the integration-by-parts tail expansion
/// replaces per-period summation.
const TAIL_SWITCH_LOG2: i32 = 11; // T = 2048

/// Memoized evaluator for F(2^m). Everything in the lacunary spectral
/// representation reduces to differences of these:
/// c_{j,N} = F(2^j) - F(2^{j-N}), b_j = 2 F(2^j), A(α) = 2 F(∞).
pub(crate) struct SineIntegralCache {
    alpha: f64,
    memo: HashMap<i32, f64>,
}

impl SineIntegralCache {
    pub fn new(alpha: f64) -> Self {
        assert!(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0, 1)");
        Self {
            alpha,
            memo: HashMap::new(),
        }
    }

    /// Maclaurin series of ∫_0^δ sin(2πt) t^{-α-1} dt, accurate to machine
    /// precision for δ <= 1/2.
    fn series_head(&self, delta: f64) -> f64 {
        debug_assert!(delta <= 0.5);
        let a = self.alpha;
        let mut total = 0.0;
        let mut pow = TAU; // (2π)^{2m+1} / (2m+1)!
        let mut m = 0u32;
        loop {
            let p = 2.0 * m as f64 + 1.0 - a;
            let term = pow * delta.powf(p) / p;
            let signed = if m % 2 == 0 { term } else { -term };
            total += signed;
            if term.abs() <= 1e-17 * total.abs().max(1e-300) || m > 40 {
                break;
            }
            let k = 2.0 * m as f64;
            pow *= TAU * TAU / ((k + 2.0) * (k + 3.0));
            m += 1;
        }
        total
    }

    /// Adaptive integral of sin(2πt) t^{-α-1} with half-period panels;
    /// valid away from the origin.
    fn gk_osc(&self, a: f64, b: f64) -> f64 {
        let alpha = self.alpha;
        let mut breaks = Vec::new();
        let mut t = (2.0 * a).ceil() / 2.0;
        while t < b {
            if t > a {
                breaks.push(t);
            }
            t += 0.5;
        }
        let spec = QuadratureSpec {
            abs_tol: 5e-13,
            rel_tol: 1e-13,
            max_subdiv: 100_000,
            breakpoints: breaks,
            scheme: QuadScheme::CompositeAdaptive,
        };
        integrate(|t: f64| (TAU * t).sin() * t.powf(-1.0 - alpha), a, b, &spec)
            .expect("sine-power integral did not converge")
            .value
    }

    /// E(T) = ∫_T^∞ sin(2πt) t^{-α-1} dt for integer T >= 2048, by two
    /// integrations by parts; the neglected remainder is O(T^{-5-α}).
    fn tail_e(&self, t: f64) -> f64 {
        let a = self.alpha;
        t.powf(-1.0 - a) / TAU - (1.0 + a) * (2.0 + a) * t.powf(-3.0 - a) / TAU.powi(3)
    }

    /// F(2^m).
    pub fn f_pow2(&mut self, m: i32) -> f64 {
        if let Some(&v) = self.memo.get(&m) {
            return v;
        }
        let v = if m <= -2 {
            self.series_head((m as f64).exp2())
        } else if m <= TAIL_SWITCH_LOG2 {
            self.series_head(0.25) + self.gk_osc(0.25, (m as f64).exp2())
        } else {
            let t_sw = (TAIL_SWITCH_LOG2 as f64).exp2();
            self.f_pow2(TAIL_SWITCH_LOG2) + self.tail_e(t_sw) - self.tail_e((m as f64).exp2())
        };
        self.memo.insert(m, v);
        v
    }

    pub fn coeff_c(&mut self, j: u32, n: u32) -> f64 {
        self.f_pow2(j as i32) - self.f_pow2(j as i32 - n as i32)
    }

    pub fn coeff_b(&mut self, j: u32) -> f64 {
        2.0 * self.f_pow2(j as i32)
    }

    /// A(α) = 2 ∫_0^∞ sin(2πt) t^{-α-1} dt.
    pub fn limit(&mut self) -> f64 {
        let t_sw = (TAIL_SWITCH_LOG2 as f64).exp2();
        2.0 * (self.f_pow2(TAIL_SWITCH_LOG2) + self.tail_e(t_sw))
    }
}

fn check_alpha_arg(alpha: f64) -> Result<(), OscError> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(OscError::BadArg(format!(
            "alpha must lie in (0, 1), got {alpha}"
        )))
    }
}

/// c_{j,N} = ∫_{2^{j-N}}^{2^j} sin(2πt) t^{-α-1} dt.
///
/// The `PerPeriod` scheme uses per-period summation with an analytic tail;
/// `CompositeAdaptive` integrates the range directly when it is short
/// enough (2^j <= 2^14) and falls back to the fast path otherwise.
pub fn coeff_c(j: u32, n: u32, alpha: f64, quad: &QuadratureSpec) -> Result<f64, OscError> {
    check_alpha_arg(alpha)?;
    if n < 1 {
        return Err(OscError::BadArg("coefficient depth n must be >= 1".into()));
    }
    if quad.scheme == QuadScheme::CompositeAdaptive && j <= 14 {
        let lo = (j as f64 - n as f64).exp2();
        let hi = (j as f64).exp2();
        let mut breaks = Vec::new();
        let mut t = (2.0 * lo).ceil() / 2.0;
        while t < hi {
            if t > lo {
                breaks.push(t);
            }
            t += 0.5;
        }
        let spec = quad.with_breakpoints(breaks);
        let r = integrate(|t: f64| (TAU * t).sin() * t.powf(-1.0 - alpha), lo, hi, &spec)?;
        return Ok(r.value);
    }
    Ok(SineIntegralCache::new(alpha).coeff_c(j, n))
}

/// b_j = 2 ∫_0^{2^j} sin(2πt) t^{-α-1} dt. The integrable endpoint t → 0
/// is evaluated by the Maclaurin series of the integrand.
pub fn coeff_b(j: u32, alpha: f64, _quad: &QuadratureSpec) -> Result<f64, OscError> {
    check_alpha_arg(alpha)?;
    Ok(SineIntegralCache::new(alpha).coeff_b(j))
}

/// A(α) = lim_j b_j = 2 ∫_0^∞ sin(2πt) t^{-α-1} dt; strictly positive on
/// (0, 1).
pub fn limit_a(alpha: f64) -> f64 {
    SineIntegralCache::new(alpha).limit()
}

/// Spectral evaluation 2 Σ_{j=0}^{J} c_{j,N} cos(2π 2^j x) of Θ_{2^{-N}}
/// for the lacunary sine function truncated at J terms.
pub fn theta_lacunary_spectral(
    alpha: f64,
    x: f64,
    n: u32,
    j_terms: u32,
    _quad: &QuadratureSpec,
) -> Result<f64, OscError> {
    check_alpha_arg(alpha)?;
    if n < 1 || j_terms < n {
        return Err(OscError::BadArg(format!(
            "need J >= N >= 1, got N={n}, J={j_terms}"
        )));
    }
    let mut cache = SineIntegralCache::new(alpha);
    let mut acc = 0.0;
    for j in 0..=j_terms {
        acc += cache.coeff_c(j, n) * (TAU * (j as f64).exp2() * x).cos();
    }
    Ok(2.0 * acc)
}

/// Precomputed c_{j,N} table for fast Θ / Θ* evaluation at many points.
#[derive(Debug, Clone)]
pub struct LacunaryCoeffTable {
    alpha: f64,
    n_max: u32,
    j_max: u32,
    a_limit: f64,
    b: Vec<f64>,
    /// c[n-1][j] for n = 1..=n_max, j = 0..=j_max.
    c: Vec<Vec<f64>>,
}

impl LacunaryCoeffTable {
    /// Tabulate all c_{j,n} for n <= n_max and j <= n_max + j_extra.
    pub fn build(alpha: f64, n_max: u32, j_extra: u32) -> Self {
        assert!(n_max >= 1);
        let j_max = n_max + j_extra;
        let mut cache = SineIntegralCache::new(alpha);
        let b = (0..=j_max).map(|j| cache.coeff_b(j)).collect();
        let c = (1..=n_max)
            .map(|n| (0..=j_max).map(|j| cache.coeff_c(j, n)).collect())
            .collect();
        Self {
            alpha,
            n_max,
            j_max,
            a_limit: cache.limit(),
            b,
            c,
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn n_max(&self) -> u32 {
        self.n_max
    }

    pub fn j_max(&self) -> u32 {
        self.j_max
    }

    pub fn a_limit(&self) -> f64 {
        self.a_limit
    }

    pub fn b(&self, j: u32) -> f64 {
        self.b[j as usize]
    }

    pub fn c(&self, n: u32, j: u32) -> f64 {
        self.c[n as usize - 1][j as usize]
    }

    /// Θ_{2^{-n}}(x) for every n = 1..=n_max, sharing one cosine sweep.
    pub fn theta_levels(&self, x: f64) -> Vec<f64> {
        let cosv: Vec<f64> = (0..=self.j_max)
            .map(|j| (TAU * (j as f64).exp2() * x).cos())
            .collect();
        self.c
            .iter()
            .map(|row| 2.0 * row.iter().zip(&cosv).map(|(c, v)| c * v).sum::<f64>())
            .collect()
    }

    /// Θ*_{2^{-n}}(x) = max_{k<=n} |Θ_{2^{-k}}(x)| for every n.
    pub fn theta_star_levels(&self, x: f64) -> Vec<f64> {
        let mut star = 0.0f64;
        self.theta_levels(x)
            .into_iter()
            .map(|t| {
                star = star.max(t.abs());
                star
            })
            .collect()
    }

    /// Exact spectral L² norm ‖Θ_{2^{-n}}‖²_{L²[0,1]} = 2 Σ_j c_{j,n}².
    pub fn l2_norm_sq(&self, n: u32) -> f64 {
        2.0 * self.c[n as usize - 1].iter().map(|c| c * c).sum::<f64>()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::HolderFunction;

    const LN2: f64 = std::f64::consts::LN_2;

    fn default_quad() -> QuadratureSpec {
        QuadratureSpec::with_tols(1e-10, 1e-10)
    }

    #[test]
    fn theta_sign_power_closed_form() {
        let f = HolderFunction::sign_power(0.5).unwrap();
        let v = theta(&f, 0.0, 2f64.powi(-8), &default_quad()).unwrap();
        assert!((v - 16.0 * LN2).abs() < 1e-9, "got {v}");
        // α does not matter at the kink: the integrand is exactly 2/h.
        let f = HolderFunction::sign_power(0.3).unwrap();
        let v = theta(&f, 0.0, 2f64.powi(-8), &default_quad()).unwrap();
        assert!((v - 16.0 * LN2).abs() < 1e-9, "got {v}");
    }

    #[test]
    fn theta_constant_is_zero() {
        let f = HolderFunction::constant(4.2, 0.5).unwrap();
        for eps in [0.3, 2f64.powi(-6), 2f64.powi(-12)] {
            assert_eq!(theta(&f, 0.7, eps, &default_quad()).unwrap(), 0.0);
        }
    }

    #[test]
    fn theta_rejects_large_epsilon() {
        let f = HolderFunction::sign_power(0.5).unwrap();
        assert!(matches!(
            theta(&f, 0.0, 0.5, &default_quad()),
            Err(OscError::BadEpsilon(_))
        ));
        assert!(theta(&f, 0.0, 0.0, &default_quad()).is_err());
    }

    #[test]
    fn profile_sign_power_increments() {
        let f = HolderFunction::sign_power(0.5).unwrap();
        let p = theta_profile(&f, 0.0, 10, &default_quad()).unwrap();
        for (i, k) in p.levels.iter().enumerate() {
            let expect = 2.0 * *k as f64 * LN2;
            assert!((p.theta[i] - expect).abs() < 1e-9);
        }
        assert!((p.theta_star[9] - 20.0 * LN2).abs() < 1e-9);
        // theta_star is the running max and bridge band is 2·2^{1-α}.
        assert!((p.eps_bridge - 2.0 * 2f64.powf(0.5)).abs() < 1e-12);
    }

    #[test]
    fn profile_matches_fresh_theta_calls() {
        let f = HolderFunction::lacunary_sine(0.5, 16).unwrap();
        let p = theta_profile(&f, 0.3, 10, &default_quad()).unwrap();
        for k in [3u32, 7, 10] {
            let fresh = theta(&f, 0.3, (-(k as f64)).exp2(), &default_quad()).unwrap();
            let inc = p.theta[k as usize - 1];
            assert!((fresh - inc).abs() < 1e-8, "k={k}: {fresh} vs {inc}");
        }
    }

    #[test]
    fn theta_star_monotone() {
        let f = HolderFunction::lacunary_sine(0.5, 14).unwrap();
        let p = theta_profile(&f, 0.123, 12, &default_quad()).unwrap();
        for w in p.theta_star.windows(2) {
            assert!(w[1] >= w[0]);
        }
        for (i, s) in p.theta_star.iter().enumerate() {
            let expect = p.theta[..=i]
                .iter()
                .fold(0.0f64, |m, t| m.max(t.abs()));
            assert_eq!(*s, expect);
        }
    }

    #[test]
    fn coeff_c_first_value_negative_vs_direct_oracle() {
        // c_{0,1} = ∫_{1/2}^1 sin(2πt) t^{-3/2} dt, negative integrand.
        let v = coeff_c(0, 1, 0.5, &default_quad()).unwrap();
        let oracle = integrate(
            |t: f64| (TAU * t).sin() * t.powf(-1.5),
            0.5,
            1.0,
            &QuadratureSpec::with_tols(1e-13, 1e-13),
        )
        .unwrap()
        .value;
        assert!(v < 0.0);
        assert!((v - oracle).abs() < 1e-12, "{v} vs {oracle}");
    }

    #[test]
    fn coeff_additivity_direct_vs_cached() {
        // Direct adaptive c_{3,2} + b_1/2 should equal b_3/2.
        let spec = QuadratureSpec {
            scheme: QuadScheme::CompositeAdaptive,
            ..QuadratureSpec::with_tols(1e-12, 1e-12)
        };
        let c32 = coeff_c(3, 2, 0.5, &spec).unwrap();
        let per_period = QuadratureSpec {
            scheme: QuadScheme::PerPeriod,
            ..QuadratureSpec::default()
        };
        let b1 = coeff_b(1, 0.5, &per_period).unwrap();
        let b3 = coeff_b(3, 0.5, &per_period).unwrap();
        assert!((c32 + 0.5 * b1 - 0.5 * b3).abs() < 1e-10);
    }

    #[test]
    fn coeff_c_decay_rate() {
        let q = QuadratureSpec {
            scheme: QuadScheme::PerPeriod,
            ..QuadratureSpec::default()
        };
        let (n, alpha) = (10, 0.5);
        let c15 = coeff_c(n + 5, n, alpha, &q).unwrap();
        let c16 = coeff_c(n + 6, n, alpha, &q).unwrap();
        let ratio = (c15 / c16).abs();
        let expect = 2f64.powf(1.0 + alpha);
        assert!(
            (ratio - expect).abs() < 0.3 * expect,
            "ratio {ratio} vs {expect}"
        );
    }

    #[test]
    fn coeff_b_positive_head_and_cauchy_tail() {
        let q = QuadratureSpec::default();
        let b0 = coeff_b(0, 0.5, &q).unwrap();
        assert!(b0 > 0.0);
        for j in 8..=12u32 {
            let bj = coeff_b(j, 0.5, &q).unwrap();
            let bj1 = coeff_b(j + 1, 0.5, &q).unwrap();
            let bound = (4.0 / PI) * 2f64.powf(-(j as f64) * 1.5) * 1.1;
            assert!((bj1 - bj).abs() <= bound, "j={j}");
        }
    }

    #[test]
    fn limit_a_positive_and_matched_by_b20() {
        for alpha in [0.1, 0.5, 0.9] {
            assert!(limit_a(alpha) > 0.0, "alpha={alpha}");
        }
        let a = limit_a(0.5);
        let b20 = coeff_b(20, 0.5, &QuadratureSpec::default()).unwrap();
        assert!((b20 - a).abs() < 1e-6);
        // b_j -> A monotonically in error for j = 5..20.
        let mut prev = f64::INFINITY;
        for j in 5..=20u32 {
            let d = (coeff_b(j, 0.5, &QuadratureSpec::default()).unwrap() - a).abs();
            assert!(d <= prev + 1e-14, "j={j}");
            prev = d;
        }
    }

    #[test]
    fn limit_a_closed_form_cross_check() {
        // Candidate closed form 2 (2π)^α Γ(1-α) sin(πα/2) / α, validated
        // against the quadrature route on three exponents.
        for alpha in [0.3, 0.5, 0.7] {
            let candidate = 2.0 * TAU.powf(alpha) * statrs::function::gamma::gamma(1.0 - alpha)
                * (PI * alpha / 2.0).sin()
                / alpha;
            let quadrature = limit_a(alpha);
            assert!(
                (candidate - quadrature).abs() < 1e-8,
                "alpha={alpha}: {candidate} vs {quadrature}"
            );
        }
        // At α = 1/2 the closed form collapses to 4π.
        assert!((limit_a(0.5) - 4.0 * PI).abs() < 1e-10);
    }

    #[test]
    fn spectral_at_origin_is_coefficient_sum() {
        let (alpha, n, j) = (0.5, 6u32, 16u32);
        let mut cache = SineIntegralCache::new(alpha);
        let expect: f64 = (0..=j).map(|jj| cache.coeff_c(jj, n)).sum::<f64>() * 2.0;
        let v = theta_lacunary_spectral(alpha, 0.0, n, j, &QuadratureSpec::default()).unwrap();
        assert!((v - expect).abs() < 1e-12);
    }

    #[test]
    fn spectral_matches_quadrature_theta() {
        let (alpha, n, j) = (0.5, 8u32, 14u32);
        let f = HolderFunction::lacunary_sine(alpha, j).unwrap();
        let x = 0.3;
        let quad = QuadratureSpec::with_tols(1e-9, 1e-9);
        let spectral = theta_lacunary_spectral(alpha, x, n, j, &quad).unwrap();
        let direct = theta(&f, x, (-(n as f64)).exp2(), &quad).unwrap();
        assert!(
            (spectral - direct).abs() < 1e-6,
            "spectral {spectral} vs quadrature {direct}"
        );
    }

    #[test]
    fn abs_theta_trivials_and_domination() {
        let f = HolderFunction::sign_power(0.5).unwrap();
        let v = abs_theta(&f, 0.0, 2f64.powi(-8), &default_quad()).unwrap();
        assert!((v - 16.0 * LN2).abs() < 1e-9);
        let c = HolderFunction::constant(1.0, 0.5).unwrap();
        assert_eq!(abs_theta(&c, 0.4, 0.01, &default_quad()).unwrap(), 0.0);

        let w = HolderFunction::weierstrass_cos(0.5, 64, 8).unwrap();
        let quad = QuadratureSpec::with_tols(1e-7, 1e-7);
        for x in [0.21, 0.47, 0.83] {
            let a = abs_theta(&w, x, 2f64.powi(-12), &quad).unwrap();
            let t = theta(&w, x, 2f64.powi(-12), &quad).unwrap();
            assert!(a >= t.abs() - 1e-6, "x={x}: abs {a} vs theta {t}");
        }
    }

    #[test]
    fn uniform_bound_holds() {
        // |Θ_ε| <= 2^α H ln(1/ε) with H the seminorm estimate.
        let f = HolderFunction::lacunary_sine(0.5, 12).unwrap();
        let h = seminorm_estimate(&f, 0.0);
        let quad = QuadratureSpec::with_tols(1e-8, 1e-8);
        for (x, eps) in [(0.1, 0.01), (0.77, 2f64.powi(-9)), (0.42, 2f64.powi(-5))] {
            let v = theta(&f, x, eps, &quad).unwrap();
            let bound = 2f64.powf(0.5) * h * (1.0 / eps).ln() * (1.0 + 1e-6);
            assert!(v.abs() <= bound, "x={x} eps={eps}: {v} vs {bound}");
        }
    }

    #[test]
    fn coeff_table_consistent_with_ops() {
        let table = LacunaryCoeffTable::build(0.5, 8, 20);
        let q = QuadratureSpec {
            scheme: QuadScheme::PerPeriod,
            ..QuadratureSpec::default()
        };
        assert_eq!(table.c(5, 7), coeff_c(7, 5, 0.5, &q).unwrap());
        assert_eq!(table.b(9), coeff_b(9, 0.5, &q).unwrap());
        let x = 0.3;
        let levels = table.theta_levels(x);
        let direct = theta_lacunary_spectral(0.5, x, 6, table.j_max(), &q).unwrap();
        assert!((levels[5] - direct).abs() < 1e-12);
        let stars = table.theta_star_levels(x);
        for (i, s) in stars.iter().enumerate() {
            let expect = levels[..=i].iter().fold(0.0f64, |m, t| m.max(t.abs()));
            assert_eq!(*s, expect);
        }
    }

    #[test]
    fn bridging_band_between_dyadic_levels() {
        // |Θ_ε - Θ_{2^{-N}}| <= 2 H for 2^{-N-1} <= ε < 2^{-N}.
        let f = HolderFunction::lacunary_sine(0.5, 12).unwrap();
        let h = seminorm_estimate(&f, 0.0);
        let quad = QuadratureSpec::with_tols(1e-8, 1e-8);
        for (x, n, frac) in [(0.3, 4u32, 0.6), (0.71, 6, 0.9), (0.15, 8, 0.51)] {
            let top = (-(n as f64)).exp2();
            let eps = top * frac;
            let d = (theta(&f, x, eps, &quad).unwrap() - theta(&f, x, top, &quad).unwrap()).abs();
            assert!(d <= 2.0 * h, "x={x} n={n}: diff {d} vs 2H {}", 2.0 * h);
        }
    }
}

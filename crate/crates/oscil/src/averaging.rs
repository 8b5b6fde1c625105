//! Averaging identities connecting the dyadic transforms to the continuous
//! oscillation integral.
//!
//! Two exact identities are verified numerically:
//!
//! * translation average: for every x, k, ρ,
//!   ∫_0^ρ Δf_s(I_k^{(ρ)}(x+s)) ds = 2^k ∫_0^{2^{-k}ρ} (f(x+t) - f(x-t)) dt,
//!   where f_s(y) = f(y-s);
//!
//! * scale average: integrating Γ_n^{(ρ)}(f_s)(x+s) over the parameter
//!   region {1 <= ρ <= 2, 0 <= s <= ρ} with measure ds·dρ/ρ² equals
//!   Θ_{2^{-n}}(f)(x)/(1+α) plus an explicit remainder A_n(f)(x) built
//!   from two elementary integrals of f(x+t)-f(x-t).
//!
//! The left side of the scale average reduces to one-dimensional integrals
//! B_k = ∫ (f(x+t)-f(x-t)) W_k(t) dt with the explicit weight
//! W_k(t) = ∫_{max(t, 2^{-k})}^{2^{-k+1}} h^{-2-α} dh, which is how the
//! high-accuracy path computes it; a direct two-dimensional (ρ, s) tensor
//! quadrature cross-checks small k at low accuracy.

use std::f64::consts::LN_2;

use crate::dyadic::cell_of;
use crate::funcspace::HolderFunction;
use crate::oscillation::{theta_eps_open, weighted_sym_diff_integral, OscError};
use crate::quad::{integrate, uniform_breakpoints, QuadratureSpec};

/// The parameter region A = {(ρ, s) : 1 <= ρ <= 2, 0 <= s <= ρ} carrying
/// the measure dμ = ds·dρ/ρ².
#[derive(Debug, Clone, Copy, Default)]
pub struct AveragingDomain;

impl AveragingDomain {
    pub fn contains(&self, rho: f64, s: f64) -> bool {
        (1.0..=2.0).contains(&rho) && (0.0..=rho).contains(&s)
    }

    /// μ(A) = ∫_1^2 ρ · ρ^{-2} dρ = ln 2.
    pub fn measure(&self) -> f64 {
        LN_2
    }

    /// The same value by quadrature, for consistency tests.
    pub fn measure_by_quadrature(&self, quad: &QuadratureSpec) -> Result<f64, OscError> {
        Ok(integrate(|rho: f64| 1.0 / rho, 1.0, 2.0, quad)?.value)
    }
}

/// Both sides of the translation-average identity at one (x, ρ, k).
///
/// The s-integration forces panel boundaries at every point where the cell
/// of x+s jumps, at the images of f's kinks, and on the half-period grid
/// of the highest resolved series frequency.
pub fn check_translation_average(
    f: &HolderFunction,
    x: f64,
    rho: f64,
    k: u32,
    quad: &QuadratureSpec,
) -> Result<(f64, f64), OscError> {
    if !(1.0..=2.0).contains(&rho) {
        return Err(OscError::BadArg(format!("rho must lie in [1, 2], got {rho}")));
    }
    if k < 1 {
        return Err(OscError::BadArg("level k must be at least 1".into()));
    }
    let w = rho * (-(k as f64)).exp2();
    f.ensure_covers((x / w).floor() * w - rho, x + rho + w)?;

    let lhs = translation_average_lhs(f, x, rho, k, quad)?;
    let rhs = 2f64.powi(k as i32)
        * weighted_sym_diff_integral(f, x, 0.0, w, &|_| 1.0, 1.0, w, &[], quad, false)?.0;
    Ok((lhs, rhs))
}

fn translation_average_lhs(
    f: &HolderFunction,
    x: f64,
    rho: f64,
    k: u32,
    quad: &QuadratureSpec,
) -> Result<f64, OscError> {
    let w = rho * (-(k as f64)).exp2();
    let m_lo = (x / w).floor() as i64;
    let m_hi = ((x + rho) / w).floor() as i64;

    let mut breaks: Vec<f64> = Vec::new();
    for m in m_lo..=(m_hi + 1) {
        let s = m as f64 * w - x;
        if s > 0.0 && s < rho {
            breaks.push(s);
        }
    }
    // f's kinks enter through both cell endpoints: the integrand pieces
    // are f(m·w - s), so each kink κ contributes breakpoints s = m·w - κ.
    let arg_lo = m_lo as f64 * w - rho;
    let arg_hi = (m_hi + 1) as f64 * w;
    for kink in f.kink_points(arg_lo, arg_hi) {
        for m in m_lo..=(m_hi + 1) {
            let s = m as f64 * w - kink;
            if s > 0.0 && s < rho {
                breaks.push(s);
            }
        }
    }
    let (j_eff, trunc_budget_used) = lhs_series_cutoff(f, rho, k, 0.5 * quad.abs_tol);
    let _ = trunc_budget_used;
    if f.is_series() {
        let np = (rho * f.series_frequency(j_eff.min(f.terms())) / std::f64::consts::PI).ceil()
            as usize;
        if np > 1 {
            breaks.extend(uniform_breakpoints(0.0, rho, np.min(1 << 17) - 1));
        }
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();

    let spec = quad.with_breakpoints(breaks);
    let g = |s: f64| {
        let j = ((x + s) / w).floor();
        f.eval_truncated((j + 1.0) * w - s, j_eff) - f.eval_truncated(j * w - s, j_eff)
    };
    Ok(integrate(g, 0.0, rho, &spec)?.value)
}

/// Highest series term kept in the s-integration; the dropped tail is
/// bounded by integration by parts piece by piece.
fn lhs_series_cutoff(f: &HolderFunction, rho: f64, k: u32, budget: f64) -> (u32, f64) {
    if !f.is_series() {
        return (u32::MAX, 0.0);
    }
    let pieces = (1u64 << k) as f64 + 2.0;
    let r = (f.base() as f64).powf(-(1.0 + f.alpha()));
    let tail = |j: u32| -> f64 {
        if j >= f.terms() {
            return 0.0;
        }
        4.0 * pieces * (f.series_amplitude(j + 1) / f.series_frequency(j + 1)) / (1.0 - r)
    };
    let mut j_eff = f.terms();
    for j in 0..f.terms() {
        if tail(j) <= budget {
            j_eff = j;
            break;
        }
    }
    let max_freq = (1usize << 17) as f64 * std::f64::consts::PI / rho;
    let mut j_cap = 0u32;
    while j_cap < f.terms() && f.series_frequency(j_cap + 1) <= max_freq {
        j_cap += 1;
    }
    let j_eff = j_eff.min(j_cap);
    (j_eff, tail(j_eff))
}

/// One row of the scale-average decomposition at (x, n).
#[derive(Debug, Clone)]
pub struct DecompositionReport {
    /// ∫_1^2 ∫_0^ρ Γ_n^{(ρ)}(f_s)(x+s) ds dρ/ρ², via the B_k reduction.
    pub lhs: f64,
    /// Θ_{2^{-n}}(f)(x).
    pub main: f64,
    /// The explicit remainder A_n(f)(x).
    pub a_n: f64,
    /// |lhs - main/(1+α) - a_n|.
    pub residual: f64,
    /// The two-integral majorant of |A_n| with constant 1/(1+α).
    pub a_n_bound: f64,
    /// Per-scale contributions B_k, k = 1..=n.
    pub b_k: Vec<f64>,
}

/// Weight W_k(t) = ∫_{max(t, 2^{-k})}^{2^{-k+1}} h^{-2-α} dh of the B_k
/// reduction.
fn bk_weight(t: f64, k: u32, alpha: f64) -> f64 {
    let lo = t.max((-(k as f64)).exp2());
    let hi = (-(k as f64) + 1.0).exp2();
    if lo >= hi {
        return 0.0;
    }
    (lo.powf(-1.0 - alpha) - hi.powf(-1.0 - alpha)) / (1.0 + alpha)
}

/// B_k = ∫_{2^{-k}}^{2^{-k+1}} h^{-2-α} ∫_0^h (f(x+t)-f(x-t)) dt dh,
/// flattened to a single t-integral against the explicit weight.
pub fn bk_scale_term(
    f: &HolderFunction,
    x: f64,
    k: u32,
    quad: &QuadratureSpec,
) -> Result<f64, OscError> {
    let alpha = f.alpha();
    let a = (-(k as f64)).exp2();
    let b = 2.0 * a;
    let w_max = bk_weight(0.0, k, alpha);
    let w_int = (a.powf(-alpha) - b.powf(-alpha)) / alpha;
    let breaks = [a];
    Ok(weighted_sym_diff_integral(
        f,
        x,
        0.0,
        b,
        &|t| bk_weight(t, k, alpha),
        w_max,
        w_int,
        &breaks,
        quad,
        false,
    )?
    .0)
}

/// Direct two-dimensional evaluation of B_k over (ρ, s): a fixed composite
/// Gauss–Kronrod rule in ρ (the ρ-integrand is smooth, and adaptivity
/// would only chase the inner quadrature noise), with a translation-average
/// integration in s at every node. Low-accuracy cross-check for small k;
/// cost grows as 2^k.
pub fn bk_scale_term_2d(
    f: &HolderFunction,
    x: f64,
    k: u32,
    quad: &QuadratureSpec,
) -> Result<f64, OscError> {
    let alpha = f.alpha();
    let inner_spec = QuadratureSpec {
        abs_tol: quad.abs_tol * 1e-2,
        ..quad.clone()
    };
    let outer = |rho: f64| {
        let w = rho * (-(k as f64)).exp2();
        let inner = translation_average_lhs(f, x, rho, k, &inner_spec).unwrap_or(f64::NAN);
        inner * w.powf(-alpha) / (rho * rho)
    };
    const OUTER_PANELS: usize = 16;
    let mut total = 0.0;
    for i in 0..OUTER_PANELS {
        let a = 1.0 + i as f64 / OUTER_PANELS as f64;
        let b = 1.0 + (i + 1) as f64 / OUTER_PANELS as f64;
        total += crate::quad::gauss_kronrod_15(&outer, a, b).0;
    }
    Ok(total)
}

/// The scale-average decomposition at one (x, n): left side by the B_k
/// reduction, main term by the oscillation integral, remainder from its
/// explicit two-integral formula
/// A_n = -(1/(1+α)) ∫_{2^{-n}}^1 g + ((2^{n(1+α)}-1)/(1+α)) ∫_0^{2^{-n}} g,
/// g(t) = f(x+t) - f(x-t).
pub fn decompose_gamma_average(
    f: &HolderFunction,
    x: f64,
    n: u32,
    alpha: f64,
    quad: &QuadratureSpec,
) -> Result<DecompositionReport, OscError> {
    if n < 1 {
        return Err(OscError::BadArg("depth n must be at least 1".into()));
    }
    if (alpha - f.alpha()).abs() > 1e-12 {
        return Err(OscError::BadArg(format!(
            "alpha {alpha} does not match the function's exponent {}",
            f.alpha()
        )));
    }
    f.ensure_covers(x - 1.0, x + 1.0)?;

    let mut b_k = Vec::with_capacity(n as usize);
    let mut spec_b = quad.clone();
    spec_b.abs_tol = quad.abs_tol / n as f64;
    for k in 1..=n {
        b_k.push(bk_scale_term(f, x, k, &spec_b)?);
    }
    let lhs: f64 = b_k.iter().sum();

    let eps = (-(n as f64)).exp2();
    let main = theta_eps_open(f, x, eps, quad)?;

    let (i1, _) =
        weighted_sym_diff_integral(f, x, eps, 1.0, &|_| 1.0, 1.0, 1.0 - eps, &[], quad, false)?;
    let (i0, _) =
        weighted_sym_diff_integral(f, x, 0.0, eps, &|_| 1.0, 1.0, eps, &[], quad, false)?;
    let (i1_abs, _) =
        weighted_sym_diff_integral(f, x, eps, 1.0, &|_| 1.0, 1.0, 1.0 - eps, &[], quad, true)?;
    let (i0_abs, _) =
        weighted_sym_diff_integral(f, x, 0.0, eps, &|_| 1.0, 1.0, eps, &[], quad, true)?;

    let one_plus = 1.0 + alpha;
    let blowup = (2f64.powf(n as f64 * one_plus) - 1.0) / one_plus;
    let a_n = -i1 / one_plus + blowup * i0;
    let a_n_bound = i1_abs / one_plus + blowup * i0_abs;
    let residual = (lhs - main / one_plus - a_n).abs();

    Ok(DecompositionReport {
        lhs,
        main,
        a_n,
        residual,
        a_n_bound,
        b_k,
    })
}

/// Remainder-boundedness scan: max over the samples and n <= n_max of
/// |A_n(f)(x)| / H, plus the smallest constant ĉ for which
/// |A_n| <= ĉ (∫_{2^{-n}}^1 |g| + 2^{n(1+α)} ∫_0^{2^{-n}} |g|) holds
/// across the sweep.
#[derive(Debug, Clone)]
pub struct RemainderScan {
    pub max_ratio_to_seminorm: f64,
    pub fitted_c: f64,
    /// (x, n, a_n, |a_n|/H) rows.
    pub rows: Vec<(f64, u32, f64, f64)>,
}

pub fn remainder_bound_scan(
    f: &HolderFunction,
    x_samples: &[f64],
    n_max: u32,
    seminorm: f64,
    quad: &QuadratureSpec,
) -> Result<RemainderScan, OscError> {
    let alpha = f.alpha();
    let one_plus = 1.0 + alpha;
    let mut rows = Vec::new();
    let mut max_ratio: f64 = 0.0;
    let mut fitted_c: f64 = 0.0;
    for &x in x_samples {
        for n in 1..=n_max {
            let eps = (-(n as f64)).exp2();
            let (i1, _) = weighted_sym_diff_integral(
                f, x, eps, 1.0, &|_| 1.0, 1.0, 1.0 - eps, &[], quad, false,
            )?;
            let (i0, _) =
                weighted_sym_diff_integral(f, x, 0.0, eps, &|_| 1.0, 1.0, eps, &[], quad, false)?;
            let (i1_abs, _) = weighted_sym_diff_integral(
                f, x, eps, 1.0, &|_| 1.0, 1.0, 1.0 - eps, &[], quad, true,
            )?;
            let (i0_abs, _) =
                weighted_sym_diff_integral(f, x, 0.0, eps, &|_| 1.0, 1.0, eps, &[], quad, true)?;
            let blow = 2f64.powf(n as f64 * one_plus);
            let a_n = -i1 / one_plus + (blow - 1.0) / one_plus * i0;
            let ratio = if seminorm > 0.0 {
                a_n.abs() / seminorm
            } else {
                0.0
            };
            max_ratio = max_ratio.max(ratio);
            let majorant = i1_abs + blow * i0_abs;
            if majorant > 0.0 {
                fitted_c = fitted_c.max(a_n.abs() / majorant);
            }
            rows.push((x, n, a_n, ratio));
        }
    }
    Ok(RemainderScan {
        max_ratio_to_seminorm: max_ratio,
        fitted_c,
        rows,
    })
}

/// The unique level-k dyadic cell of D(ρ) containing x+s, exposed for
/// tests that reason about the jump structure of the s-integrand.
pub fn shifted_cell(rho: f64, k: u32, x: f64, s: f64) -> (f64, f64) {
    let c = cell_of(rho, k, x + s);
    (c.lo(), c.hi())
}

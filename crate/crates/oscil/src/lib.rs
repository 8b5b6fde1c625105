//! Numerical toolkit for the local oscillation of Hölder-continuous
//! functions.
//!
//! The crate computes the signed oscillation integral
//! Θ_ε(f)(x) = ∫_ε^1 (f(x+h) - f(x-h)) h^{-α-1} dh and its dyadic
//! maximal profile, the lacunary spectral representation with its
//! sine-power coefficients, the dyadic-martingale model (Γ and T
//! transforms, quadratic variation, energy identity, seeded samplers),
//! the exact translation/scale averaging identities that connect the two
//! pictures, and an experiment harness for the statistical laws governing
//! Θ: L² growth, subgaussian tails, exponential moments, iterated-
//! logarithm boundedness, and the cancellation lower bound.

pub mod averaging;
pub mod dims;
pub mod dyadic;
pub mod funcspace;
pub mod harness;
pub mod oscillation;
pub mod quad;

pub use funcspace::{
    holder_ratio_max, truncation_terms, FuncError, FunctionDescriptor, FunctionKind,
    HolderFunction, Interval,
};
pub use oscillation::{
    abs_theta, coeff_b, coeff_c, limit_a, theta, theta_lacunary_spectral, theta_profile,
    LacunaryCoeffTable, OscError, OscillationProfile,
};
pub use quad::{integrate, QuadError, QuadResult, QuadScheme, QuadratureSpec};

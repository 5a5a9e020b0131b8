//! Numerical tolerances shared by every certificate.
//!
//! Three tiers, each three orders of magnitude apart:
//!
//! | Tier | Value | Used for |
//! |------|-------|----------|
//! | identity | 1e-12 | entrywise transform identities, round trips |
//! | certificate | 1e-9 | spectral Gram residuals, Parseval bounds |
//! | falsification | 1e-6 | margin a residual must exceed to count as "not tight" |

/// Entrywise agreement of exact identities computed in f64.
pub const IDENTITY: f64 = 1e-12;

/// Relative tolerance for spectral-pair and frame-bound certificates.
pub const CERTIFICATE: f64 = 1e-9;

/// A tightness residual above this value is a certified failure to be tight.
pub const FALSIFICATION: f64 = 1e-6;

/// Convergence target of the Jacobi eigensolver (eigenvalue accuracy).
pub const EIGEN: f64 = 1e-10;

/// Slack allowed when comparing sampled Rayleigh quotients to the eigen bounds.
pub const RAYLEIGH_SLACK: f64 = 1e-8;

/// Plancherel check for the unitary transform, relative to the input norm.
pub const PLANCHEREL: f64 = 1e-10;

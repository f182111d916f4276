//! Numerical tolerances shared by the sampler, the membership tests and the
//! flow checks. All inputs are O(1) doubles fed to degree-two polynomials.

/// `| |u| − 1 |` allowed for a cosphere representative.
pub const COSPHERE_NORM: f64 = 1e-12;

/// Constraint residual for constructed zero-level samples.
pub const KERNEL_RESIDUAL: f64 = 1e-10;

/// Planes with `|(x_j, u_j)|` at or below this are treated as absent.
pub const SUPPORT_THRESHOLD: f64 = 1e-10;

/// Polynomial identities (cone relations, cosphere constraint, conservation).
pub const POLY_IDENTITY: f64 = 1e-9;

/// Band separating `= 0` from `≠ 0` / `> 0` in semialgebraic predicates.
pub const STRICT_BAND: f64 = 1e-8;

/// Default step of the Runge-Kutta integrator.
pub const DEFAULT_RK4_STEP: f64 = 1e-3;

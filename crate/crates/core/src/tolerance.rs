//! Absolute tolerances on unit-norm data.

/// Deviation of `Σ|Z|²` from one that still counts as normalized.
pub const EPS_NORM: f64 = 1e-12;
/// Norm below which a raw vector is treated as zero.
pub const EPS_ZERO: f64 = 1e-14;
/// Radius at or below which a point is on an octant edge and its phase is absent.
pub const EPS_EDGE: f64 = 1e-9;
/// Default tolerance for the separability / maximal-entanglement predicates.
pub const PREDICATE_TOL: f64 = 1e-9;
/// Finite-difference step used for metric pullbacks.
pub const PULLBACK_STEP: f64 = 3e-5;
/// Finite-difference step for third-order objects (exterior derivatives of 2-forms).
pub const FORM_STEP: f64 = 1e-4;

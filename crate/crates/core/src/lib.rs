//! Complex projective space drawn as flat tori over a round octant.
//!
//! A point of CP^n is stored as a gauge-fixed unit vector ([`ProjectiveState`]). Its
//! moduli `n_i = |Z^i|` live on the positive octant of the unit n-sphere and its relative
//! phases `ν_i` on a flat n-torus ([`OctantTorusCoords`]). In these coordinates the
//! Fubini-Study metric splits into the round octant metric plus a position-dependent flat
//! torus metric, which is what the rest of the crate builds on:
//!
//! - [`charts`]: gnomonic and stereographic maps of the octant, torus shapes.
//! - [`entanglement`]: two-qubit structure of CP³ (Schmidt data, separability).
//! - [`submanifolds`]: generators for the separable surface, the maximally entangled
//!   set, constant-σ regions, distance spheres, spin-1 orbits and MUBs.
//! - [`orbits`]: local-unitary orbits, their metric, volume and mean curvature.
//! - [`symplectic`]: the Kähler 2-form and Liouville volume.
//! - [`sampling`]: Haar-random states and distribution checks.
//! - [`simplex`]: the Schmidt simplex against the statistical simplex.
//! - [`verify`]: the invariant suites behind `cpn check`.

#![forbid(unsafe_code)]

pub mod charts;
pub mod entanglement;
mod error;
pub mod linalg;
pub mod orbits;
pub mod sampling;
mod search;
pub mod simplex;
pub mod state;
pub mod submanifolds;
pub mod symplectic;
pub mod tolerance;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use state::{MetricMatrix, OctantTorusCoords, ProjectiveState, TangentVector};

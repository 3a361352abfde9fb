//! Orbits of local unitaries in CP³.
//!
//! Away from σ = 0 and σ = π/4 every orbit of `U(2) × U(2)` is five dimensional and
//! labelled by its Schmidt angle. A point of the orbit is reached from the Schmidt form
//! `diag(cos σ, sin σ)` by
//!
//! `C = e^{−iφ1 Lz} e^{iθ1 Ly} e^{−iτ Lz} diag(cos σ, sin σ) e^{−iθ2 Ly} e^{−iφ2 Lz}`,
//!
//! with the state read off row by row from `C`. Reading `C` row-major is what puts the
//! right-hand factor on subsystem B transposed.

use std::f64::consts::{FRAC_PI_4, PI};

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;

use crate::charts::numeric_pullback;
use crate::linalg::{exp_ly, exp_lz, flatten, CMatrix2};
use crate::state::{MetricMatrix, ProjectiveState};
use crate::{Error, Result};

/// Coordinates on a constant-σ orbit together with the Schmidt angle itself.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitCoords {
    pub sigma: f64,
    pub theta1: f64,
    pub phi1: f64,
    pub theta2: f64,
    pub phi2: f64,
    pub tau: f64,
}

/// Coordinate names of [`orbit_metric`], in matrix order.
pub const ORBIT_COORDS: [&str; 5] = ["theta1", "phi1", "theta2", "phi2", "tau"];

impl OrbitCoords {
    /// Checks `0 < σ < π/4`, `0 < θ < π` and wraps the periodic angles into `[0, 2π)`.
    pub fn new(sigma: f64, theta1: f64, phi1: f64, theta2: f64, phi2: f64, tau: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma < FRAC_PI_4) {
            return Err(Error::InvalidSigma(sigma));
        }
        for (what, value) in [("theta1", theta1), ("theta2", theta2)] {
            if !(value > 0.0 && value < PI) {
                return Err(Error::OutOfRange { what, value });
            }
        }
        let wrap = crate::state::wrap_positive;
        Ok(Self { sigma, theta1, phi1: wrap(phi1), theta2, phi2: wrap(phi2), tau: wrap(tau) })
    }

    /// `(σ, θ1, φ1, θ2, φ2, τ)`.
    pub fn to_array(&self) -> [f64; 6] {
        [self.sigma, self.theta1, self.phi1, self.theta2, self.phi2, self.tau]
    }

    /// Inverse of [`to_array`](Self::to_array); performs no range checks.
    pub fn from_array(x: [f64; 6]) -> Self {
        Self { sigma: x[0], theta1: x[1], phi1: x[2], theta2: x[3], phi2: x[4], tau: x[5] }
    }
}

fn schmidt_form(sigma: f64) -> CMatrix2 {
    let z = Complex64::new(0.0, 0.0);
    Matrix2::new(Complex64::new(sigma.cos(), 0.0), z, z, Complex64::new(sigma.sin(), 0.0))
}

/// Left and right unitaries `(R1, R2)` with `C = R1 · diag(cos σ, sin σ) · R2`.
pub fn orbit_unitaries(c: &OrbitCoords) -> (CMatrix2, CMatrix2) {
    let left = exp_lz(c.phi1) * exp_ly(-c.theta1) * exp_lz(c.tau);
    let right = exp_ly(c.theta2) * exp_lz(c.phi2);
    (left, right)
}

pub fn orbit_matrix(c: &OrbitCoords) -> CMatrix2 {
    let (left, right) = orbit_unitaries(c);
    left * schmidt_form(c.sigma) * right
}

pub fn orbit_embed(c: &OrbitCoords) -> Result<ProjectiveState> {
    ProjectiveState::new(&flatten(&orbit_matrix(c)))
}

/// Embedding in the flat order `(σ, θ1, φ1, θ2, φ2, τ)`, without range checks.
pub fn orbit_chart_state(x: &[f64]) -> Result<ProjectiveState> {
    let arr: [f64; 6] = x.try_into().map_err(|_| Error::DimensionMismatch { expected: 6, found: x.len() })?;
    orbit_embed(&OrbitCoords::from_array(arr))
}

/// Intrinsic metric of the orbit through `c`, in `(θ1, φ1, θ2, φ2, τ)`.
///
/// `dl² = ¼[dθ1² + sin²θ1 dφ1² + dθ2² + sin²θ2 dφ2²
///        + 2 sin2σ (cosτ sinθ1 sinθ2 dφ1dφ2 − cosτ dθ1dθ2 − sinτ sinθ2 dθ1dφ2 − sinτ sinθ1 dθ2dφ1)
///        + sin²2σ (dτ + cosθ1 dφ1 + cosθ2 dφ2)²]`.
pub fn orbit_metric(c: &OrbitCoords) -> MetricMatrix {
    let (s1, c1) = c.theta1.sin_cos();
    let (s2, c2) = c.theta2.sin_cos();
    let (st, ct) = c.tau.sin_cos();
    let s = (2.0 * c.sigma).sin();
    // Indices: θ1 = 0, φ1 = 1, θ2 = 2, φ2 = 3, τ = 4.
    let mut g = DMatrix::<f64>::zeros(5, 5);
    g[(0, 0)] = 1.0;
    g[(1, 1)] = s1 * s1;
    g[(2, 2)] = 1.0;
    g[(3, 3)] = s2 * s2;
    let cross = [((1, 3), ct * s1 * s2), ((0, 2), -ct), ((0, 3), -st * s2), ((2, 1), -st * s1)];
    for ((i, j), v) in cross {
        g[(i, j)] += s * v;
        g[(j, i)] += s * v;
    }
    let fiber = [(4, 1.0), (1, c1), (3, c2)];
    for (i, a) in fiber {
        for (j, b) in fiber {
            g[(i, j)] += s * s * a * b;
        }
    }
    g *= 0.25;
    MetricMatrix::new(ORBIT_COORDS.iter().map(|s| s.to_string()).collect(), g)
}

/// `√det` of [`orbit_metric`]: `cos²2σ sin2σ sinθ1 sinθ2 / 2⁵`.
pub fn orbit_density(c: &OrbitCoords) -> f64 {
    let two_s = 2.0 * c.sigma;
    two_s.cos().powi(2) * two_s.sin() * c.theta1.sin() * c.theta2.sin() / 32.0
}

fn check_closed_range(sigma: f64) -> Result<()> {
    if (0.0..=FRAC_PI_4).contains(&sigma) {
        Ok(())
    } else {
        Err(Error::OutOfRange { what: "sigma", value: sigma })
    }
}

/// Volume of the orbit with Schmidt angle σ: `π³ cos²2σ sin2σ`.
pub fn orbit_volume(sigma: f64) -> Result<f64> {
    check_closed_range(sigma)?;
    let two_s = 2.0 * sigma;
    Ok(PI.powi(3) * two_s.cos().powi(2) * two_s.sin())
}

/// Total Fubini-Study volume of CP³.
pub const CP3_VOLUME: f64 = PI * PI * PI / 6.0;

/// Density of the Schmidt angle for Haar-random states, `6 cos²2σ sin2σ`.
pub fn schmidt_pdf(sigma: f64) -> Result<f64> {
    Ok(orbit_volume(sigma)? / CP3_VOLUME)
}

/// Distribution function of the Schmidt angle, `1 − cos³2σ`.
pub fn schmidt_cdf(sigma: f64) -> Result<f64> {
    check_closed_range(sigma)?;
    Ok(1.0 - (2.0 * sigma).cos().powi(3))
}

/// Schmidt angle of the largest orbit, where `tan 2σ = 1/√2`.
pub fn max_volume_sigma() -> f64 {
    (1.0 / 2f64.sqrt()).atan() / 2.0
}

/// Trace of the extrinsic curvature of the orbit, `4(cos²2σ − 2 sin²2σ)/(cos2σ sin2σ)`.
///
/// The normalization is `K = g^{ab} ∂_σ g_ab`, the trace of the Lie derivative of the
/// induced metric along the unit normal `∂_σ`.
pub fn extrinsic_curvature_trace(sigma: f64) -> Result<f64> {
    if !(sigma > 0.0 && sigma < FRAC_PI_4) {
        return Err(Error::OutOfRange { what: "sigma", value: sigma });
    }
    let (s, c) = (2.0 * sigma).sin_cos();
    Ok(4.0 * (c * c - 2.0 * s * s) / (c * s))
}

/// Finite-difference estimate of `g^{ab} ∂_σ g_ab` from pulled-back orbit metrics.
pub fn numeric_mean_curvature(c: &OrbitCoords, step: f64) -> Result<f64> {
    let orbit_at = |sigma: f64| -> Result<MetricMatrix> {
        let base = OrbitCoords { sigma, ..*c };
        let fixed = base.to_array();
        numeric_pullback(
            |x: &[f64]| orbit_chart_state(&[fixed[0], x[0], x[1], x[2], x[3], x[4]]),
            &fixed[1..],
        )
    };
    let g = orbit_at(c.sigma)?;
    let dg = (orbit_at(c.sigma + step)?.entries - orbit_at(c.sigma - step)?.entries) / (2.0 * step);
    let inv = g.entries.try_inverse().ok_or(Error::OutOfRange { what: "orbit metric determinant", value: 0.0 })?;
    Ok((inv * dg).trace())
}

/// `C = u1 · diag(cos σ, sin σ) · u1⁻¹ · u3`, the parametrization suited to σ near π/4.
pub fn orbit_embed_u3(sigma: f64, u1: &CMatrix2, u3: &CMatrix2) -> Result<ProjectiveState> {
    let c = u1 * schmidt_form(sigma) * u1.adjoint() * u3;
    ProjectiveState::new(&flatten(&c))
}

//! Two-qubit structure of CP³.
//!
//! A state `Σ C_ij |i⟩|j⟩` is identified with its coefficient matrix through the fixed
//! ordering `(Z⁰, Z¹, Z², Z³) = (C00, C01, C10, C11)`.

use std::f64::consts::FRAC_PI_4;

use nalgebra::Vector2;
use num_complex::Complex64;

use crate::linalg::{flatten, CMatrix2};
use crate::state::{wrap_signed, OctantTorusCoords, ProjectiveState};
use crate::tolerance::PREDICATE_TOL;
use crate::{Error, Result};

/// Coefficient matrix of a two-qubit state (unit Frobenius norm when normalized).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientMatrix(pub CMatrix2);

impl CoefficientMatrix {
    pub fn determinant(&self) -> Complex64 {
        self.0.determinant()
    }

    pub fn to_state(&self) -> Result<ProjectiveState> {
        ProjectiveState::new(&flatten(&self.0))
    }
}

pub fn as_coefficient_matrix(s: &ProjectiveState) -> Result<CoefficientMatrix> {
    if s.dim() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, found: s.dim() });
    }
    let z = s.amplitudes();
    Ok(CoefficientMatrix(CMatrix2::new(z[0], z[1], z[2], z[3])))
}

pub fn from_coefficient_matrix(c: &CoefficientMatrix) -> Result<ProjectiveState> {
    c.to_state()
}

/// Reduced density matrix of subsystem A.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedDensity {
    pub matrix: CMatrix2,
    /// Length of the Bloch vector, `cos 2σ`.
    pub bloch_radius: f64,
}

impl ReducedDensity {
    /// Bloch vector `(Tr ρσ_x, Tr ρσ_y, Tr ρσ_z)`.
    pub fn bloch_vector(&self) -> [f64; 3] {
        let m = &self.matrix;
        [2.0 * m[(0, 1)].re, -2.0 * m[(0, 1)].im, (m[(0, 0)] - m[(1, 1)]).re]
    }

    /// Eigenvalues in descending order.
    pub fn eigenvalues(&self) -> [f64; 2] {
        [(1.0 + self.bloch_radius) / 2.0, (1.0 - self.bloch_radius) / 2.0]
    }
}

/// `ρ^A = C C†`.
pub fn partial_trace_a(s: &ProjectiveState) -> Result<ReducedDensity> {
    let c = as_coefficient_matrix(s)?.0;
    let mut matrix = c * c.adjoint();
    let trace = (matrix[(0, 0)] + matrix[(1, 1)]).re;
    matrix /= Complex64::new(trace, 0.0);
    // Hermitian by construction; clean rounding on the diagonal.
    matrix[(0, 0)].im = 0.0;
    matrix[(1, 1)].im = 0.0;
    let mut rho = ReducedDensity { matrix, bloch_radius: 0.0 };
    let b = rho.bloch_vector();
    rho.bloch_radius = (b[0] * b[0] + b[1] * b[1] + b[2] * b[2]).sqrt().min(1.0);
    Ok(rho)
}

/// Schmidt form `C = phase · u1 · diag(c0, c1) · u2` with `u1, u2 ∈ SU(2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtData {
    /// `(c0, c1) = (cos σ, sin σ)`, descending.
    pub coefficients: [f64; 2],
    /// Schmidt angle in `[0, π/4]`.
    pub sigma: f64,
    pub u1: CMatrix2,
    pub u2: CMatrix2,
    /// Global phase left over after forcing both unitaries to unit determinant.
    pub global_phase: Complex64,
    /// Set at maximal entanglement, where the local unitaries are not determined.
    pub non_unique: bool,
}

impl SchmidtData {
    pub fn schmidt_matrix(&self) -> CMatrix2 {
        let z = Complex64::new(0.0, 0.0);
        CMatrix2::new(Complex64::new(self.coefficients[0], 0.0), z, z, Complex64::new(self.coefficients[1], 0.0))
    }

    pub fn reconstruct(&self) -> CMatrix2 {
        self.u1 * self.schmidt_matrix() * self.u2 * self.global_phase
    }
}

/// Divides a unitary by a square root of its determinant.
fn to_special(u: CMatrix2) -> (CMatrix2, Complex64) {
    let root = u.determinant().sqrt();
    (u / root, root)
}

/// Schmidt decomposition through the SVD of the coefficient matrix.
///
/// Singular values are sorted descending; the determinant phases of both singular-vector
/// matrices are moved into `global_phase` so that `u1, u2 ∈ SU(2)`.
pub fn schmidt_decompose(s: &ProjectiveState) -> Result<SchmidtData> {
    let c = as_coefficient_matrix(s)?.0;
    let svd = c.svd(true, true);
    let (mut u, mut v_t) = (svd.u.expect("requested U"), svd.v_t.expect("requested V^T"));
    let mut values = [svd.singular_values[0], svd.singular_values[1]];
    if values[0] < values[1] {
        values.swap(0, 1);
        u.swap_columns(0, 1);
        v_t.swap_rows(0, 1);
    }
    let norm = (values[0] * values[0] + values[1] * values[1]).sqrt();
    let coefficients = [values[0] / norm, values[1] / norm];
    let sigma = coefficients[1].atan2(coefficients[0]).clamp(0.0, FRAC_PI_4);
    let (u1, p1) = to_special(u);
    let (u2, p2) = to_special(v_t);
    Ok(SchmidtData {
        coefficients,
        sigma,
        u1,
        u2,
        global_phase: p1 * p2,
        non_unique: sigma > FRAC_PI_4 - PREDICATE_TOL,
    })
}

pub fn is_separable(s: &ProjectiveState, tol: f64) -> Result<bool> {
    Ok(as_coefficient_matrix(s)?.determinant().norm() < tol)
}

/// `‖C C† − ½·1‖_F`.
pub fn max_entanglement_residual(s: &ProjectiveState) -> Result<f64> {
    let c = as_coefficient_matrix(s)?.0;
    Ok((c * c.adjoint() - CMatrix2::identity() * Complex64::new(0.5, 0.0)).norm())
}

pub fn is_max_entangled(s: &ProjectiveState, tol: f64) -> Result<bool> {
    Ok(max_entanglement_residual(s)? < tol)
}

fn require_cp3(c: &OctantTorusCoords) -> Result<()> {
    if c.dim() == 4 {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected: 4, found: c.dim() })
    }
}

/// `wrap(ν1 + ν2 − ν3 − offset)` into `(−π, π]`.
///
/// Absent when `ν3` is absent. When `ν3` is present but `ν1` or `ν2` is absent the
/// corresponding product of radii vanishes, the relation is vacuous and the residual is 0.
pub fn phase_relation_residual(c: &OctantTorusCoords, offset: f64) -> Option<f64> {
    let nu3 = c.phase(3)?;
    match (c.phase(1), c.phase(2)) {
        (Some(nu1), Some(nu2)) => Some(wrap_signed(nu1 + nu2 - nu3 - offset)),
        _ => Some(0.0),
    }
}

/// `(n0 n3 − n1 n2, wrap(ν1 + ν2 − ν3))`; both vanish on separable interior points.
pub fn separability_coordinate_residuals(c: &OctantTorusCoords) -> Result<(f64, Option<f64>)> {
    require_cp3(c)?;
    let n = &c.radii;
    Ok((n[0] * n[3] - n[1] * n[2], phase_relation_residual(c, 0.0)))
}

/// `(n0 − n3, n1 − n2, wrap(ν1 + ν2 − ν3 − π))`; all vanish on maximally entangled states.
pub fn max_entangled_coordinate_residuals(c: &OctantTorusCoords) -> Result<(f64, f64, Option<f64>)> {
    require_cp3(c)?;
    let n = &c.radii;
    Ok((n[0] - n[3], n[1] - n[2], phase_relation_residual(c, std::f64::consts::PI)))
}

/// `||det C|² − cos²σ sin²σ|`, with `|det C|²` written in octant-torus coordinates.
///
/// This is the multiplied-out form of the relation
/// `cos(ν3 − ν1 − ν2) = (n0²n3² + n1²n2² − cos²σ sin²σ) / (2 n0 n1 n2 n3)`.
pub fn constant_sigma_residual(c: &OctantTorusCoords, sigma: f64) -> Result<f64> {
    require_cp3(c)?;
    let n = &c.radii;
    let cross = match (c.phase(1), c.phase(2), c.phase(3)) {
        (Some(a), Some(b), Some(d)) => 2.0 * n[0] * n[1] * n[2] * n[3] * (d - a - b).cos(),
        _ => 0.0,
    };
    let det_sq = (n[0] * n[3]).powi(2) + (n[1] * n[2]).powi(2) - cross;
    let target = (sigma.cos() * sigma.sin()).powi(2);
    Ok((det_sq - target).abs())
}

/// Right-hand side of the fiber relation for a constant Schmidt angle.
///
/// `None` when `n0 n1 n2 n3 = 0`, where the phase relation is vacuous.
pub fn constant_sigma_fiber_cosine(radii: &[f64], sigma: f64) -> Option<f64> {
    let denom = 2.0 * radii[0] * radii[1] * radii[2] * radii[3];
    if denom <= 0.0 {
        return None;
    }
    let cs = sigma.cos() * sigma.sin();
    Some(((radii[0] * radii[3]).powi(2) + (radii[1] * radii[2]).powi(2) - cs * cs) / denom)
}

/// Nearest separable state, its distance and whether it is unique.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosestSeparable {
    pub state: ProjectiveState,
    pub distance: f64,
    pub unique: bool,
}

/// The nearest corner of the Schmidt simplex, mapped back by the local unitaries.
pub fn closest_separable(s: &ProjectiveState) -> Result<ClosestSeparable> {
    let schmidt = schmidt_decompose(s)?;
    let a = Vector2::new(schmidt.u1[(0, 0)], schmidt.u1[(1, 0)]);
    let b = Vector2::new(schmidt.u2[(0, 0)], schmidt.u2[(0, 1)]);
    let state = product_state(&a, &b)?;
    Ok(ClosestSeparable { state, distance: schmidt.sigma, unique: !schmidt.non_unique })
}

/// `|a⟩|b⟩`.
pub fn product_state(a: &Vector2<Complex64>, b: &Vector2<Complex64>) -> Result<ProjectiveState> {
    ProjectiveState::new(&[a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]])
}

/// `(u1 ⊗ u2)|ψ⟩`, i.e. `C ↦ u1 C u2ᵀ`.
pub fn apply_local(u1: &CMatrix2, u2: &CMatrix2, s: &ProjectiveState) -> Result<ProjectiveState> {
    let c = as_coefficient_matrix(s)?.0;
    ProjectiveState::new(&flatten(&(u1 * c * u2.transpose())))
}

/// Spin-½ state `|+n⟩` pointing along a unit direction.
pub fn bloch_ket(direction: [f64; 3]) -> Vector2<Complex64> {
    let norm = (direction[0].powi(2) + direction[1].powi(2) + direction[2].powi(2)).sqrt();
    let theta = (direction[2] / norm).clamp(-1.0, 1.0).acos();
    let phi = direction[1].atan2(direction[0]);
    Vector2::new(Complex64::new((theta / 2.0).cos(), 0.0), Complex64::from_polar((theta / 2.0).sin(), phi))
}

/// The 2-sphere of separable states nearest to a maximally entangled state.
///
/// For each direction `n` the sample is `|+n⟩|b⟩` with `b ∝ conj(C†|+n⟩)`, which maximizes
/// the overlap with the given state; every sample sits at distance π/4.
pub fn collapse_sphere(s: &ProjectiveState, directions: &[[f64; 3]]) -> Result<Vec<ProjectiveState>> {
    let residual = max_entanglement_residual(s)?;
    if residual >= PREDICATE_TOL {
        return Err(Error::NotMaxEntangled(residual));
    }
    let c = as_coefficient_matrix(s)?.0;
    directions
        .iter()
        .map(|&n| {
            let a = bloch_ket(n);
            let b = (c.adjoint() * a).map(|z| z.conj());
            product_state(&a, &b)
        })
        .collect()
}

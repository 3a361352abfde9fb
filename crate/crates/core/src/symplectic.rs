//! The Kähler 2-form of CP^n in octant-torus and orbit coordinates.
//!
//! With the metric `g = Re h` the form used here is `Ω = 4 Im h`. In octant-torus
//! coordinates it is `Ω = Σ 4 n_i dn_i ∧ dν_i = d(2 Σ n_i² dν_i)`, so the `n_i²` are action
//! variables and the phases their angles. The Liouville density is `|Pf(Ω/4)|`, which
//! equals the Riemannian density `√det g`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::FRAC_1_SQRT_2;

use crate::charts::tangent_vectors;
use crate::linalg::{flatten, pfaffian, su2_euler};
use crate::orbits::OrbitCoords;
use crate::state::{fs_hermitian, octant_coordinate_names, OctantTorusCoords, ProjectiveState};
use crate::tolerance::{EPS_EDGE, PULLBACK_STEP};
use crate::{Error, Result};

/// Coordinate names of [`omega_orbit`], in matrix order.
pub const ORBIT_FORM_COORDS: [&str; 6] = ["sigma", "tau", "theta1", "phi1", "theta2", "phi2"];

/// Antisymmetric coefficient matrix `Ω_ab` of a 2-form in named coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoFormMatrix {
    pub coords: Vec<String>,
    pub entries: DMatrix<f64>,
}

impl TwoFormMatrix {
    pub fn new(coords: Vec<String>, entries: DMatrix<f64>) -> Self {
        Self { coords, entries }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }

    pub fn antisymmetry_residual(&self) -> f64 {
        (&self.entries + self.entries.transpose()).amax()
    }

    pub fn max_abs_diff(&self, other: &TwoFormMatrix) -> f64 {
        (&self.entries - &other.entries).amax()
    }

    pub fn pfaffian(&self) -> f64 {
        pfaffian(&self.entries)
    }

    /// Number of singular values above `tol` times the largest one.
    pub fn rank(&self, tol: f64) -> usize {
        let sv = self.entries.clone().singular_values();
        let top = sv.max();
        if top == 0.0 {
            return 0;
        }
        sv.iter().filter(|&&s| s > tol * top).count()
    }

    /// Restriction to the coordinate subspace `idx`.
    pub fn restrict(&self, idx: &[usize]) -> TwoFormMatrix {
        let coords = idx.iter().map(|&i| self.coords[i].clone()).collect();
        let entries = DMatrix::from_fn(idx.len(), idx.len(), |a, b| self.entries[(idx[a], idx[b])]);
        TwoFormMatrix { coords, entries }
    }

    /// Pullback `Jᵀ Ω J` along a Jacobian whose columns are new coordinate directions.
    pub fn pullback(&self, jacobian: &DMatrix<f64>, coords: Vec<String>) -> TwoFormMatrix {
        TwoFormMatrix { coords, entries: jacobian.transpose() * &self.entries * jacobian }
    }
}

/// `Ω` in `(n1..nn, ν1..νn)` as a field on the chart, with `n0` eliminated.
pub fn omega_octant_field(x: &[f64]) -> DMatrix<f64> {
    let n = x.len() / 2;
    let mut w = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        w[(i, n + i)] = 4.0 * x[i];
        w[(n + i, i)] = -4.0 * x[i];
    }
    w
}

pub fn omega_octant(c: &OctantTorusCoords) -> Result<TwoFormMatrix> {
    if let Some((index, &radius)) = c.radii.iter().enumerate().find(|(_, r)| **r <= EPS_EDGE) {
        return Err(Error::EdgePoint { index, radius });
    }
    let x: Vec<f64> = c.radii[1..].iter().copied().chain(std::iter::repeat_n(0.0, c.dim() - 1)).collect();
    Ok(TwoFormMatrix::new(octant_coordinate_names(c.dim()), omega_octant_field(&x)))
}

/// `Ω` in `(σ, τ, θ1, φ1, θ2, φ2)` as a field of `x` in that order.
pub fn omega_orbit_field(x: &[f64]) -> DMatrix<f64> {
    let (sigma, theta1, theta2) = (x[0], x[2], x[4]);
    let (s2, c2) = (2.0 * sigma).sin_cos();
    let mut w = DMatrix::zeros(6, 6);
    let entries = [
        ((0, 1), 2.0 * s2),
        ((0, 3), 2.0 * s2 * theta1.cos()),
        ((0, 5), 2.0 * s2 * theta2.cos()),
        ((2, 3), c2 * theta1.sin()),
        ((4, 5), c2 * theta2.sin()),
    ];
    for ((i, j), v) in entries {
        w[(i, j)] = v;
        w[(j, i)] = -v;
    }
    w
}

/// Reorders orbit coordinates into the `(σ, τ, θ1, φ1, θ2, φ2)` order of [`omega_orbit`].
pub fn orbit_form_point(c: &OrbitCoords) -> [f64; 6] {
    [c.sigma, c.tau, c.theta1, c.phi1, c.theta2, c.phi2]
}

/// Orbit embedding with arguments in the `(σ, τ, θ1, φ1, θ2, φ2)` order.
pub fn orbit_form_state(x: &[f64]) -> Result<ProjectiveState> {
    if x.len() != 6 {
        return Err(Error::DimensionMismatch { expected: 6, found: x.len() });
    }
    crate::orbits::orbit_embed(&OrbitCoords::from_array([x[0], x[2], x[3], x[4], x[5], x[1]]))
}

pub fn omega_orbit(c: &OrbitCoords) -> TwoFormMatrix {
    let coords = ORBIT_FORM_COORDS.iter().map(|s| s.to_string()).collect();
    TwoFormMatrix::new(coords, omega_orbit_field(&orbit_form_point(c)))
}

/// `4 Im h` pulled back along `embedding` at `point`, by central differences.
pub fn pullback_omega<F>(embedding: F, point: &[f64]) -> Result<TwoFormMatrix>
where
    F: Fn(&[f64]) -> Result<ProjectiveState>,
{
    let (base, t) = tangent_vectors(embedding, point, PULLBACK_STEP)?;
    let z = base.amplitudes();
    let k = point.len();
    let w = DMatrix::from_fn(k, k, |i, j| if i == j { 0.0 } else { 4.0 * fs_hermitian(z, &t[i], &t[j]).im });
    Ok(TwoFormMatrix::new((0..k).map(|i| format!("q{i}")).collect(), w))
}

/// `max |∂_i Ω_jk + ∂_j Ω_ki + ∂_k Ω_ij|` for a 2-form field, by central differences.
pub fn closedness_residual<F>(field: F, point: &[f64], h: f64) -> f64
where
    F: Fn(&[f64]) -> DMatrix<f64>,
{
    let k = point.len();
    let mut x = point.to_vec();
    let derivs: Vec<DMatrix<f64>> = (0..k)
        .map(|i| {
            x[i] = point[i] + h;
            let plus = field(&x);
            x[i] = point[i] - h;
            let minus = field(&x);
            x[i] = point[i];
            (plus - minus) / (2.0 * h)
        })
        .collect();
    let mut worst = 0.0f64;
    for i in 0..k {
        for j in (i + 1)..k {
            for l in (j + 1)..k {
                let d = derivs[i][(j, l)] + derivs[j][(l, i)] + derivs[l][(i, j)];
                worst = worst.max(d.abs());
            }
        }
    }
    worst
}

/// Largest pulled-back `|Ω_ab|` over a set of parameter points.
pub fn lagrangian_residual<F>(embedding: F, points: &[Vec<f64>]) -> Result<f64>
where
    F: Fn(&[f64]) -> Result<ProjectiveState>,
{
    let mut worst = 0.0f64;
    for p in points {
        worst = worst.max(pullback_omega(&embedding, p)?.entries.amax());
    }
    Ok(worst)
}

/// Maximally entangled states `U/√2`, `U = e^{-iφLz} e^{-iθLy} e^{-iψLz}`, in `(φ, θ, ψ)`.
pub fn max_entangled_chart_state(x: &[f64]) -> Result<ProjectiveState> {
    if x.len() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, found: x.len() });
    }
    let u = su2_euler(x[0], x[1], x[2]);
    let amps: Vec<Complex64> = flatten(&u).into_iter().map(|z| z * FRAC_1_SQRT_2).collect();
    ProjectiveState::new(&amps)
}

/// Liouville density `|Pf(Ω/4)|` of a 2-form of even order.
pub fn liouville_volume_density(form: &TwoFormMatrix) -> f64 {
    (form.pfaffian() / 4f64.powi(form.dim() as i32 / 2)).abs()
}

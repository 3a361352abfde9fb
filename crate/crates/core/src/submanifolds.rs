//! Generators for named submanifolds of CP² and CP³.
//!
//! Each sample is an octant point (radii), its gnomonic image, and a description of the
//! phases that lie over it. Octant-level constraints and phase-level constraints are kept
//! apart, which is how all of these sets split in octant-torus coordinates.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI, TAU};

use num_complex::Complex64;
use serde::Serialize;

use crate::charts::{gnomonic_project, ChartPoint};
use crate::entanglement::constant_sigma_fiber_cosine;
use crate::state::{from_octant_torus, OctantTorusCoords, ProjectiveState};
use crate::{Error, Result};

/// Phases allowed over an octant point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum FiberLocus {
    /// Every phase combination.
    WholeTorus,
    /// `Σ_k coefficients[k] ν_{k+1} ≡ value (mod 2π)`, one branch per entry of `values`.
    Relation { coefficients: Vec<i32>, values: Vec<f64> },
    /// A finite set of phase vectors `(ν1..νn)`.
    Points(Vec<Vec<f64>>),
}

impl FiberLocus {
    /// Number of branches (values of a relation, or listed points).
    pub fn branches(&self) -> usize {
        match self {
            FiberLocus::WholeTorus => 1,
            FiberLocus::Relation { values, .. } => values.len(),
            FiberLocus::Points(p) => p.len(),
        }
    }

    /// How many phases a caller must supply to [`SurfaceSample::representative`].
    pub fn free_phases(&self, n: usize) -> usize {
        match self {
            FiberLocus::WholeTorus => n,
            FiberLocus::Relation { .. } => n - 1,
            FiberLocus::Points(_) => 0,
        }
    }

    fn phases(&self, n: usize, branch: usize, free: &[f64]) -> Result<Vec<f64>> {
        let need = self.free_phases(n);
        if free.len() != need {
            return Err(Error::DimensionMismatch { expected: need, found: free.len() });
        }
        if branch >= self.branches() {
            return Err(Error::OutOfRange { what: "fiber branch", value: branch as f64 });
        }
        match self {
            FiberLocus::WholeTorus => Ok(free.to_vec()),
            FiberLocus::Points(p) => Ok(p[branch].clone()),
            FiberLocus::Relation { coefficients, values } => {
                let solved = coefficients
                    .iter()
                    .rposition(|c| c.abs() == 1)
                    .ok_or_else(|| Error::InvalidCoordinates("relation has no unit coefficient".into()))?;
                let mut phases = Vec::with_capacity(n);
                let mut rest = free.iter();
                let mut sum = 0.0;
                for (k, &c) in coefficients.iter().enumerate() {
                    if k == solved {
                        phases.push(0.0);
                    } else {
                        let nu = *rest.next().unwrap_or(&0.0);
                        sum += c as f64 * nu;
                        phases.push(nu);
                    }
                }
                phases[solved] = (values[branch] - sum) / coefficients[solved] as f64;
                Ok(phases)
            }
        }
    }
}

/// One point of a generated set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurfaceSample {
    pub octant_point: Vec<f64>,
    pub chart_point: ChartPoint,
    pub fiber_locus: FiberLocus,
}

impl SurfaceSample {
    fn new(radii: Vec<f64>, fiber_locus: FiberLocus) -> Result<Self> {
        let chart_point = gnomonic_project(&radii)?;
        Ok(Self { octant_point: radii, chart_point, fiber_locus })
    }

    /// A state over this octant point on fiber branch `branch` with the given free phases.
    pub fn representative(&self, branch: usize, free: &[f64]) -> Result<ProjectiveState> {
        let n = self.octant_point.len() - 1;
        let phases = self.fiber_locus.phases(n, branch, free)?;
        let coords = OctantTorusCoords { radii: self.octant_point.clone(), phases: phases.into_iter().map(Some).collect() };
        from_octant_torus(&coords)
    }

    /// States over this point for every branch and a `k^m` grid of free phases.
    pub fn fiber_states(&self, k: usize) -> Result<Vec<ProjectiveState>> {
        let n = self.octant_point.len() - 1;
        let m = self.fiber_locus.free_phases(n);
        let total = k.pow(m as u32);
        let mut out = Vec::with_capacity(total * self.fiber_locus.branches());
        for branch in 0..self.fiber_locus.branches() {
            for idx in 0..total {
                let mut rem = idx;
                let free: Vec<f64> = (0..m)
                    .map(|_| {
                        let v = (rem % k) as f64 * TAU / k as f64;
                        rem /= k;
                        v
                    })
                    .collect();
                out.push(self.representative(branch, &free)?);
            }
        }
        Ok(out)
    }
}

/// Euler angles on the CP³ octant.
///
/// `n = (sin((τ−φ)/2) sin(θ/2), sin((τ+φ)/2) cos(θ/2), cos((τ−φ)/2) sin(θ/2), cos((τ+φ)/2) cos(θ/2))`.
/// In these angles `n0 n3 − n1 n2 = −sin φ sin θ / 2`, so the separable surface is `φ = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EulerOctantCoords {
    pub tau: f64,
    pub phi: f64,
    pub theta: f64,
}

impl EulerOctantCoords {
    pub fn radii(&self) -> [f64; 4] {
        let (a, b) = ((self.tau - self.phi) / 2.0, (self.tau + self.phi) / 2.0);
        let (sh, ch) = (self.theta / 2.0).sin_cos();
        [a.sin() * sh, b.sin() * ch, a.cos() * sh, b.cos() * ch]
    }

    /// Whether all radii are non-negative (up to rounding).
    pub fn in_octant(&self) -> bool {
        self.radii().iter().all(|&r| r >= -1e-15)
    }
}

fn clamp_radii(r: [f64; 4]) -> Vec<f64> {
    r.iter().map(|v| v.max(0.0)).collect()
}

fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let step = if n > 1 { (hi - lo) / (n - 1) as f64 } else { 0.0 };
    (0..n).map(move |i| lo + step * i as f64)
}

/// Real states over the separable surface, `(τ, θ) ↦` radii at `φ = 0` and zero phases.
pub fn separable_chart_state(x: &[f64]) -> Result<ProjectiveState> {
    let r = EulerOctantCoords { tau: x[0], phi: 0.0, theta: x[1] }.radii();
    ProjectiveState::from_real(&r)
}

/// Samples of the separable surface over a `(τ, θ) ∈ [0, π]²` grid.
///
/// The fiber over each point is `ν1 + ν2 − ν3 = 0`.
pub fn separable_surface(resolution: (usize, usize)) -> Result<Vec<SurfaceSample>> {
    if resolution.0 < 2 || resolution.1 < 2 {
        return Err(Error::OutOfRange { what: "grid resolution", value: resolution.0.min(resolution.1) as f64 });
    }
    let locus = FiberLocus::Relation { coefficients: vec![1, 1, -1], values: vec![0.0] };
    let mut out = Vec::with_capacity(resolution.0 * resolution.1);
    for tau in linspace(0.0, PI, resolution.0) {
        for theta in linspace(0.0, PI, resolution.1) {
            let r = EulerOctantCoords { tau, phi: 0.0, theta }.radii();
            out.push(SurfaceSample::new(clamp_radii(r), locus.clone())?);
        }
    }
    Ok(out)
}

/// Samples of the maximally entangled set along the octant geodesic `n0 = n3`, `n1 = n2`.
///
/// The points are `(cos t, sin t, sin t, cos t)/√2` for `t ∈ [0, π/2]` and the fiber over
/// each is `ν1 + ν2 − ν3 = π`.
pub fn max_entangled_set(samples: usize) -> Result<Vec<SurfaceSample>> {
    if samples < 2 {
        return Err(Error::OutOfRange { what: "sample count", value: samples as f64 });
    }
    let locus = FiberLocus::Relation { coefficients: vec![1, 1, -1], values: vec![PI] };
    linspace(0.0, FRAC_PI_2, samples)
        .map(|t| {
            let (s, c) = t.sin_cos();
            let r = [c, s, s, c].iter().map(|v| (v * FRAC_1_SQRT_2).max(0.0)).collect();
            SurfaceSample::new(r, locus.clone())
        })
        .collect()
}

fn check_sigma(sigma: f64) -> Result<()> {
    if sigma > 0.0 && sigma < FRAC_PI_4 {
        Ok(())
    } else {
        Err(Error::InvalidSigma(sigma))
    }
}

fn constant_sigma_sample(radii: Vec<f64>, sigma: f64) -> Result<Option<SurfaceSample>> {
    let Some(cos) = constant_sigma_fiber_cosine(&radii, sigma) else {
        return Ok(None);
    };
    if !(-1.0 - 1e-12..=1.0 + 1e-12).contains(&cos) {
        return Ok(None);
    }
    // Boundary points, where the fiber degenerates to a circle, are snapped onto it.
    let delta = if cos >= 1.0 - 1e-12 {
        0.0
    } else if cos <= -1.0 + 1e-12 {
        PI
    } else {
        cos.acos()
    };
    let values = if delta == 0.0 || delta == PI { vec![delta] } else { vec![delta, -delta] };
    let locus = FiberLocus::Relation { coefficients: vec![-1, -1, 1], values };
    Ok(Some(SurfaceSample::new(radii, locus)?))
}

/// Interior octant points whose fiber contains states of Schmidt angle σ.
///
/// Rejection sampling over a `grid³` lattice of Euler angles. The fiber over each accepted
/// point is `ν3 − ν1 − ν2 = ±arccos(rhs)`, with `rhs` from
/// [`constant_sigma_fiber_cosine`].
pub fn constant_sigma_region(sigma: f64, grid: usize) -> Result<Vec<SurfaceSample>> {
    check_sigma(sigma)?;
    if grid < 2 {
        return Err(Error::OutOfRange { what: "grid resolution", value: grid as f64 });
    }
    let mut out = Vec::new();
    for tau in linspace(0.0, PI, grid) {
        for phi in linspace(-FRAC_PI_2, FRAC_PI_2, grid) {
            for theta in linspace(0.0, PI, grid) {
                let e = EulerOctantCoords { tau, phi, theta };
                if !e.in_octant() {
                    continue;
                }
                if let Some(s) = constant_sigma_sample(clamp_radii(e.radii()), sigma)? {
                    out.push(s);
                }
            }
        }
    }
    Ok(out)
}

/// Points on the boundary `(n0 n3 − n1 n2)² = cos²σ sin²σ` of the constant-σ region.
///
/// Their fibers are single circles (`ν3 − ν1 − ν2 = 0`).
pub fn constant_sigma_boundary(sigma: f64, samples: usize) -> Result<Vec<SurfaceSample>> {
    check_sigma(sigma)?;
    let s2 = (2.0 * sigma).sin();
    let mut out = Vec::with_capacity(samples);
    // sin φ sin θ = sin 2σ; θ ranges over the part of (0, π) where that is solvable.
    let theta_min = s2.asin();
    for (i, theta) in linspace(theta_min, PI - theta_min, samples + 2).enumerate() {
        if i == 0 || i == samples + 1 {
            continue;
        }
        let phi = (s2 / theta.sin()).clamp(-1.0, 1.0).asin();
        let tau = FRAC_PI_2;
        let r = clamp_radii(EulerOctantCoords { tau, phi, theta }.radii());
        if let Some(s) = constant_sigma_sample(r, sigma)? {
            out.push(s);
        }
    }
    Ok(out)
}

/// Octant points at Fubini-Study distance `d` from the basis state `corner`.
///
/// For CP² the locus is a curve; for CP³ a `samples × samples` patch of a 2-sphere octant.
/// Every phase is allowed over these points.
pub fn distance_sphere(dim: usize, corner: usize, d: f64, samples: usize) -> Result<Vec<SurfaceSample>> {
    if !(d > 0.0 && d <= FRAC_PI_2) {
        return Err(Error::InvalidRadius(d));
    }
    if !(dim == 3 || dim == 4) {
        return Err(Error::UnsupportedDimension(dim));
    }
    if corner >= dim {
        return Err(Error::OutOfRange { what: "corner", value: corner as f64 });
    }
    if samples < 2 {
        return Err(Error::OutOfRange { what: "sample count", value: samples as f64 });
    }
    let (sd, cd) = d.sin_cos();
    let directions: Vec<Vec<f64>> = if dim == 3 {
        linspace(0.0, FRAC_PI_2, samples).map(|t| vec![t.cos(), t.sin()]).collect()
    } else {
        let mut v = Vec::with_capacity(samples * samples);
        for a in linspace(0.0, FRAC_PI_2, samples) {
            for b in linspace(0.0, FRAC_PI_2, samples) {
                v.push(vec![a.cos(), a.sin() * b.cos(), a.sin() * b.sin()]);
            }
        }
        v
    };
    directions
        .into_iter()
        .map(|u| {
            let mut rest = u.into_iter();
            let radii = (0..dim)
                .map(|k| if k == corner { cd.max(0.0) } else { (sd * rest.next().unwrap_or(0.0)).max(0.0) })
                .collect();
            SurfaceSample::new(radii, FiberLocus::WholeTorus)
        })
        .collect()
}

/// Seed states for spin-1 orbits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Spin1Seed {
    /// The `m = +1` eigenstate of `S_z`.
    SpinUp,
    /// The `m = 0` eigenstate of `S_z`.
    SpinZero,
}

/// Spin-1 state obtained by rotating the seed so that `z` points along `(θ, φ)`.
///
/// Basis order `(m = +1, 0, −1)`; the rotation is `e^{−iφ S_z} e^{−iθ S_y}`.
pub fn spin1_state(seed: Spin1Seed, theta: f64, phi: f64) -> Result<ProjectiveState> {
    let (s, c) = theta.sin_cos();
    let r2 = FRAC_1_SQRT_2;
    let left = Complex64::from_polar(1.0, -phi);
    let right = Complex64::from_polar(1.0, phi);
    let amps = match seed {
        Spin1Seed::SpinUp => [left * ((1.0 + c) / 2.0), Complex64::new(s * r2, 0.0), right * ((1.0 - c) / 2.0)],
        Spin1Seed::SpinZero => [left * (-s * r2), Complex64::new(c, 0.0), right * (s * r2)],
    };
    ProjectiveState::new(&amps)
}

/// The orbit of a spin-1 seed under rotations, sampled at unit directions.
pub fn spin1_orbit(seed: Spin1Seed, directions: &[[f64; 3]]) -> Result<Vec<ProjectiveState>> {
    directions
        .iter()
        .map(|n| {
            let norm = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
            if norm < 1e-12 {
                return Err(Error::ZeroVector(norm));
            }
            let theta = (n[2] / norm).clamp(-1.0, 1.0).acos();
            spin1_state(seed, theta, n[1].atan2(n[0]))
        })
        .collect()
}

/// The standard basis of C³ and the three Fourier-type bases unbiased to it and each other.
///
/// Basis `a ∈ {0, 1, 2}` of the latter consists of `ω^{a j² + b j}/√3`, `b = 0, 1, 2`.
pub fn mub_bases() -> Vec<Vec<ProjectiveState>> {
    let mut bases = vec![(0..3).map(|k| ProjectiveState::basis(3, k)).collect()];
    let r3 = 1.0 / 3f64.sqrt();
    for a in 0..3usize {
        let basis = (0..3usize)
            .map(|b| {
                let amps: Vec<Complex64> =
                    (0..3usize).map(|j| Complex64::from_polar(r3, TAU * ((a * j * j + b * j) % 3) as f64 / 3.0)).collect();
                ProjectiveState::new(&amps).expect("unit vector")
            })
            .collect();
        bases.push(basis);
    }
    bases
}

/// Real states of CP², an RP² over the whole octant with phases in `{0, π}²`.
pub fn real_projective_plane(grid: usize) -> Result<Vec<SurfaceSample>> {
    if grid < 2 {
        return Err(Error::OutOfRange { what: "grid resolution", value: grid as f64 });
    }
    let phases = vec![vec![0.0, 0.0], vec![PI, 0.0], vec![0.0, PI], vec![PI, PI]];
    let mut out = Vec::with_capacity(grid * grid);
    for a in linspace(0.0, FRAC_PI_2, grid) {
        for b in linspace(0.0, FRAC_PI_2, grid) {
            let r = vec![a.cos().max(0.0), (a.sin() * b.cos()).max(0.0), (a.sin() * b.sin()).max(0.0)];
            out.push(SurfaceSample::new(r, FiberLocus::Points(phases.clone()))?);
        }
    }
    Ok(out)
}

//! Flat maps of the spherical (hyper)octant and the shape of the fiber tori.
//!
//! The gnomonic chart projects from the sphere center onto the tangent plane at the
//! octant center, so great circles become straight lines and the octant becomes a
//! regular simplex. Map coordinates are scaled so that every pair of corners is one unit
//! apart. The frame is the Helmert basis: `X⁰ ∝ (1,…,1)` and
//! `X^k ∝ (-1,…,-1, k, 0,…)` for `k ≥ 1`, which for three components is the usual
//! `((−n0+n1)/√2, (−n0−n1+2n2)/√6)` frame.

use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::state::{fs_metric_raw, phase_block, MetricMatrix, ProjectiveState};
use crate::tolerance::{EPS_NORM, PULLBACK_STEP};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ChartKind {
    Gnomonic,
    /// Stereographic map centered on corner `pole`, projected from its antipode.
    Stereographic { pole: usize },
}

/// Real map coordinates of an octant point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChartPoint {
    pub chart: ChartKind,
    pub coords: Vec<f64>,
}

impl ChartPoint {
    pub fn gnomonic(coords: Vec<f64>) -> Self {
        Self { chart: ChartKind::Gnomonic, coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn distance(&self, other: &ChartPoint) -> f64 {
        self.coords.iter().zip(&other.coords).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt()
    }
}

/// Orthonormal Helmert frame for `n` components; row 0 points at the octant center.
pub fn helmert_frame(n: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(n, n);
    let center = 1.0 / (n as f64).sqrt();
    for j in 0..n {
        m[(0, j)] = center;
    }
    for k in 1..n {
        let norm = ((k * (k + 1)) as f64).sqrt();
        for j in 0..k {
            m[(k, j)] = -1.0 / norm;
        }
        m[(k, k)] = k as f64 / norm;
    }
    m
}

/// Map scale `1/√(2N)`: corners sit at `X⁰ = 1/√N` and are `√2` apart on the sphere.
fn gnomonic_scale(n: usize) -> f64 {
    1.0 / ((2 * n) as f64).sqrt()
}

fn check_radii(radii: &[f64]) -> Result<()> {
    if radii.len() < 2 {
        return Err(Error::UnsupportedDimension(radii.len()));
    }
    let norm: f64 = radii.iter().map(|r| r * r).sum();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidCoordinates(format!("radii have squared norm {norm}")));
    }
    Ok(())
}

/// Gnomonic image of a point on the unit sphere (any point with `X⁰ > 0`).
pub fn gnomonic_project(radii: &[f64]) -> Result<ChartPoint> {
    check_radii(radii)?;
    let n = radii.len();
    let frame = helmert_frame(n);
    let x = &frame * DVector::from_column_slice(radii);
    if x[0] <= EPS_NORM {
        return Err(Error::OutsideChart);
    }
    let scale = gnomonic_scale(n);
    Ok(ChartPoint::gnomonic((1..n).map(|k| scale * x[k] / x[0]).collect()))
}

/// Inverse of [`gnomonic_project`], restricted to the closed octant.
pub fn gnomonic_unproject(p: &ChartPoint) -> Result<Vec<f64>> {
    let radii = gnomonic_unproject_sphere(p)?;
    positive_octant(radii)
}

/// Inverse gnomonic map onto the open hemisphere `X⁰ > 0`, without the octant check.
pub fn gnomonic_unproject_sphere(p: &ChartPoint) -> Result<Vec<f64>> {
    if p.chart != ChartKind::Gnomonic {
        return Err(Error::OutsideChart);
    }
    let n = p.dim() + 1;
    let scale = gnomonic_scale(n);
    let mut x = DVector::zeros(n);
    x[0] = 1.0;
    for k in 1..n {
        x[k] = p.coords[k - 1] / scale;
    }
    let x = x.normalize();
    Ok((helmert_frame(n).transpose() * x).iter().copied().collect())
}

fn positive_octant(mut radii: Vec<f64>) -> Result<Vec<f64>> {
    if radii.iter().any(|&r| r < -1e-12) {
        return Err(Error::OutsideChart);
    }
    for r in &mut radii {
        *r = r.max(0.0);
    }
    Ok(radii)
}

/// Gnomonic images of the octant corners, in corner order.
pub fn gnomonic_corners(n: usize) -> Vec<ChartPoint> {
    (0..n)
        .map(|k| {
            let mut e = vec![0.0; n];
            e[k] = 1.0;
            gnomonic_project(&e).expect("corners are inside the chart")
        })
        .collect()
}

/// Stereographic image centered on corner `pole`, projecting from `-e_pole`.
pub fn stereographic_project(radii: &[f64], pole: usize) -> Result<ChartPoint> {
    check_radii(radii)?;
    if pole >= radii.len() {
        return Err(Error::OutOfRange { what: "pole corner", value: pole as f64 });
    }
    let denom = 1.0 + radii[pole];
    if denom <= EPS_NORM {
        return Err(Error::OutsideChart);
    }
    let coords = radii.iter().enumerate().filter(|(k, _)| *k != pole).map(|(_, r)| r / denom).collect();
    Ok(ChartPoint { chart: ChartKind::Stereographic { pole }, coords })
}

/// Inverse of [`stereographic_project`], restricted to the closed octant.
pub fn stereographic_unproject(p: &ChartPoint) -> Result<Vec<f64>> {
    let ChartKind::Stereographic { pole } = p.chart else {
        return Err(Error::OutsideChart);
    };
    let rho_sq: f64 = p.coords.iter().map(|y| y * y).sum();
    if rho_sq > 1.0 + 1e-12 || p.coords.iter().any(|&y| y < -1e-12) {
        return Err(Error::OutsideChart);
    }
    let denom = 1.0 + rho_sq;
    let mut radii = Vec::with_capacity(p.dim() + 1);
    let mut rest = p.coords.iter();
    for k in 0..=p.dim() {
        if k == pole {
            radii.push((1.0 - rho_sq) / denom);
        } else {
            radii.push(2.0 * rest.next().copied().unwrap_or_default() / denom);
        }
    }
    positive_octant(radii)
}

/// Re-expresses a chart point in another chart of the same octant.
pub fn convert_chart(p: &ChartPoint, target: ChartKind) -> Result<ChartPoint> {
    let radii = match p.chart {
        ChartKind::Gnomonic => gnomonic_unproject(p)?,
        ChartKind::Stereographic { .. } => stereographic_unproject(p)?,
    };
    match target {
        ChartKind::Gnomonic => gnomonic_project(&radii),
        ChartKind::Stereographic { pole } => stereographic_project(&radii, pole),
    }
}

/// Round metric `dn·dn` in gnomonic coordinates.
///
/// For the CP² triangle this is `6((1+6r²)δ_ij − 6 x_i x_j)/(1+6r²)²`.
pub fn gnomonic_metric(p: &ChartPoint) -> Result<MetricMatrix> {
    gnomonic_unproject(p)?;
    let k = p.dim();
    let s2 = gnomonic_scale(k + 1).powi(2);
    let r2: f64 = p.coords.iter().map(|x| x * x).sum();
    let q = 1.0 + r2 / s2;
    let entries = DMatrix::from_fn(k, k, |i, j| {
        let delta = if i == j { q } else { 0.0 };
        (delta - p.coords[i] * p.coords[j] / s2) / (s2 * q * q)
    });
    let coords = (1..=k).map(|i| format!("x{i}")).collect();
    Ok(MetricMatrix::new(coords, entries))
}

/// One sample of a traced great circle.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TracedPoint {
    pub radii: Vec<f64>,
    /// False when some coordinate is negative; such points are kept, not clipped.
    pub in_octant: bool,
}

/// `samples` evenly spaced points on the shorter great-circle arc from `a` to `b`.
pub fn trace_great_circle(a: &[f64], b: &[f64], samples: usize) -> Result<Vec<TracedPoint>> {
    check_radii(a)?;
    check_radii(b)?;
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch { expected: a.len(), found: b.len() });
    }
    if samples < 2 {
        return Err(Error::OutOfRange { what: "samples", value: samples as f64 });
    }
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let angle = dot.clamp(-1.0, 1.0).acos();
    let sin = angle.sin();
    if sin < 1e-12 {
        return Err(Error::DegeneratePair);
    }
    let points = (0..samples)
        .map(|i| {
            let t = i as f64 / (samples - 1) as f64;
            let wa = ((1.0 - t) * angle).sin() / sin;
            let wb = (t * angle).sin() / sin;
            let radii: Vec<f64> = a.iter().zip(b).map(|(x, y)| wa * x + wb * y).collect();
            let in_octant = radii.iter().all(|&r| r >= -1e-12);
            TracedPoint { radii, in_octant }
        })
        .collect();
    Ok(points)
}

/// Point on the octant edge from corner `from` to corner `to` at the given arc fraction.
pub fn edge_point(n: usize, from: usize, to: usize, fraction: f64) -> Vec<f64> {
    let angle = fraction * std::f64::consts::FRAC_PI_2;
    let mut radii = vec![0.0; n];
    radii[from] = angle.cos();
    radii[to] = angle.sin();
    radii
}

/// Largest distance of a point from the line through the first and last point.
pub fn collinearity_residual(points: &[ChartPoint]) -> f64 {
    let (Some(first), Some(last)) = (points.first(), points.last()) else {
        return 0.0;
    };
    let a = DVector::from_column_slice(&first.coords);
    let dir = DVector::from_column_slice(&last.coords) - &a;
    let len = dir.norm();
    if len == 0.0 {
        return points.iter().map(|p| p.distance(first)).fold(0.0, f64::max);
    }
    let dir = dir / len;
    points
        .iter()
        .map(|p| {
            let v = DVector::from_column_slice(&p.coords) - &a;
            let along = v.dot(&dir);
            (v - &dir * along).norm()
        })
        .fold(0.0, f64::max)
}

/// Size and shape of the flat torus over an octant point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TorusShape {
    /// `L_k = 2π n_k √(1 − n_k²)` for `k = 1..n`.
    pub side_lengths: Vec<f64>,
    /// `(i, j, θ_ij)` for `1 ≤ i < j ≤ n`.
    pub pairwise_angles: Vec<(usize, usize, f64)>,
    /// Area (CP²) or volume (CP³) of the torus: `(2π)^n √det(phase block)`.
    pub measure: f64,
}

impl TorusShape {
    pub fn angle(&self, i: usize, j: usize) -> Option<f64> {
        self.pairwise_angles.iter().find(|(a, b, _)| (*a, *b) == (i.min(j), i.max(j))).map(|(_, _, t)| *t)
    }
}

pub fn torus_shape(radii: &[f64]) -> Result<TorusShape> {
    check_radii(radii)?;
    let n = radii.len() - 1;
    let stretch = |k: usize| (1.0 - radii[k] * radii[k]).max(0.0).sqrt();
    let side_lengths = (1..=n).map(|k| TAU * radii[k] * stretch(k)).collect();
    let mut pairwise_angles = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            let denom = stretch(i) * stretch(j);
            let cos = if denom > 0.0 { -radii[i] * radii[j] / denom } else { 0.0 };
            pairwise_angles.push((i, j, cos.clamp(-1.0, 1.0).acos()));
        }
    }
    let det = phase_block(radii).determinant().max(0.0);
    let measure = TAU.powi(n as i32) * det.sqrt();
    Ok(TorusShape { side_lengths, pairwise_angles, measure })
}

/// Tangent vectors of an embedding at `point`, by finite differences.
///
/// The five-point central stencil at steps `h` and `h/2`, combined by one Richardson step
/// into a sixth-order estimate. The high order keeps pullbacks accurate close to the octant
/// edges, where the eliminated radius `n0` makes the embedding steep.
pub fn tangent_vectors<F>(embedding: F, point: &[f64], h: f64) -> Result<(ProjectiveState, Vec<Vec<Complex64>>)>
where
    F: Fn(&[f64]) -> Result<ProjectiveState>,
{
    let base = embedding(point)?;
    let dim = base.dim();
    let mut tangents = Vec::with_capacity(point.len());
    let mut x = point.to_vec();
    for i in 0..point.len() {
        let mut at = |offset: f64| -> Result<Vec<Complex64>> {
            x[i] = point[i] + offset;
            let s = embedding(&x)?;
            x[i] = point[i];
            if s.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: s.dim() });
            }
            Ok(s.into_amplitudes())
        };
        let mut stencil = |step: f64| -> Result<Vec<Complex64>> {
            let (p2, p1, m1, m2) = (at(2.0 * step)?, at(step)?, at(-step)?, at(-2.0 * step)?);
            Ok((0..dim).map(|k| (8.0 * (p1[k] - m1[k]) - (p2[k] - m2[k])) / (12.0 * step)).collect())
        };
        let coarse = stencil(h)?;
        let fine = stencil(h / 2.0)?;
        tangents.push(coarse.iter().zip(&fine).map(|(c, f)| (16.0 * f - c) / 15.0).collect());
    }
    Ok((base, tangents))
}

/// Induced Fubini-Study metric of `embedding` at `point`, by central differences.
///
/// Off-diagonal entries come from polarizing `ds²`: `g(u,v) = (ds²(u+v) − ds²(u−v))/4`.
pub fn numeric_pullback<F>(embedding: F, point: &[f64]) -> Result<MetricMatrix>
where
    F: Fn(&[f64]) -> Result<ProjectiveState>,
{
    let (base, t) = tangent_vectors(embedding, point, PULLBACK_STEP)?;
    let z = base.amplitudes();
    let k = point.len();
    let mut g = DMatrix::zeros(k, k);
    for i in 0..k {
        g[(i, i)] = fs_metric_raw(z, &t[i]);
        for j in 0..i {
            let sum: Vec<Complex64> = t[i].iter().zip(&t[j]).map(|(a, b)| a + b).collect();
            let diff: Vec<Complex64> = t[i].iter().zip(&t[j]).map(|(a, b)| a - b).collect();
            let v = (fs_metric_raw(z, &sum) - fs_metric_raw(z, &diff)) / 4.0;
            g[(i, j)] = v;
            g[(j, i)] = v;
        }
    }
    let coords = (0..k).map(|i| format!("q{i}")).collect();
    Ok(MetricMatrix::new(coords, g))
}

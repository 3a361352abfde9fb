//! The Schmidt simplex of pure states and the statistical simplex of diagonal density
//! matrices.
//!
//! Both are octants of round spheres: Schmidt coefficients `c_i` directly, probabilities
//! through `n_i = √p_i`. On the statistical side the round distance is the Bhattacharyya
//! angle `arccos Σ √(p_i q_i)`, which is the Bures angle restricted to diagonal matrices.

use std::f64::consts::FRAC_PI_2;

use nalgebra::DVector;
use num_complex::Complex64;
use serde::Serialize;

use crate::charts::{gnomonic_corners, gnomonic_project, ChartPoint};
use crate::state::{fs_distance, ProjectiveState};
use crate::{Error, Result};

/// Tolerance on `Σ p_i = 1` and `p_i ≥ 0`.
pub const SIMPLEX_TOL: f64 = 1e-12;

/// Barycentric coordinates on the probability simplex.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbabilityVector(Vec<f64>);

impl ProbabilityVector {
    /// Validates membership; tiny negative entries from rounding are clipped to zero.
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.len() < 2 {
            return Err(Error::InvalidProbability(format!("need at least two entries, got {}", p.len())));
        }
        if let Some(bad) = p.iter().find(|&&x| !x.is_finite() || x < -SIMPLEX_TOL) {
            return Err(Error::InvalidProbability(format!("entry {bad} is negative or not finite")));
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > SIMPLEX_TOL {
            return Err(Error::InvalidProbability(format!("entries sum to {sum}")));
        }
        Ok(Self(p.into_iter().map(|x| x.max(0.0)).collect()))
    }

    pub fn corner(n: usize, k: usize) -> Self {
        let mut p = vec![0.0; n];
        p[k] = 1.0;
        Self(p)
    }

    pub fn center(n: usize) -> Self {
        Self(vec![1.0 / n as f64; n])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Unit vector `(√p_i)` on the round octant.
    pub fn sqrt_point(&self) -> Vec<f64> {
        self.0.iter().map(|p| p.sqrt()).collect()
    }
}

fn same_dim(p: &ProbabilityVector, q: &ProbabilityVector) -> Result<()> {
    if p.dim() == q.dim() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected: p.dim(), found: q.dim() })
    }
}

/// `(1−t) p + t q`.
pub fn mixing_line(p: &ProbabilityVector, q: &ProbabilityVector, t: f64) -> Result<ProbabilityVector> {
    same_dim(p, q)?;
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::OutOfRange { what: "mixing parameter", value: t });
    }
    Ok(ProbabilityVector(p.0.iter().zip(&q.0).map(|(a, b)| (1.0 - t) * a + t * b).collect()))
}

/// Bhattacharyya angle `arccos Σ √(p_i q_i)`.
pub fn round_distance(p: &ProbabilityVector, q: &ProbabilityVector) -> Result<f64> {
    same_dim(p, q)?;
    let a = DVector::from_vec(p.sqrt_point());
    let b = DVector::from_vec(q.sqrt_point());
    // atan2 form keeps precision near zero distance, as for the Fubini-Study distance.
    let along = a.dot(&b);
    let perp = (&b - &a * along).norm();
    Ok(perp.atan2(along))
}

/// Gnomonic chart point of `√p` (unit-edge chart).
pub fn simplex_to_gnomonic(p: &ProbabilityVector) -> Result<ChartPoint> {
    gnomonic_project(&p.sqrt_point())
}

/// Point of the flat barycentric simplex drawn on the same corners as the gnomonic chart.
pub fn simplex_to_barycentric(p: &ProbabilityVector) -> ChartPoint {
    let corners = gnomonic_corners(p.dim());
    let mut coords = vec![0.0; p.dim() - 1];
    for (w, c) in p.0.iter().zip(&corners) {
        for (x, y) in coords.iter_mut().zip(&c.coords) {
            *x += w * y;
        }
    }
    ChartPoint::gnomonic(coords)
}

/// Distances from `p` to its nearest corner in three pictures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CornerDistances {
    /// Flat barycentric simplex with corners `π/2` apart, the true corner separation.
    pub barycentric: f64,
    /// The round (Bhattacharyya) distance.
    pub round: f64,
    /// Gnomonic picture, scaled to be isometric at the simplex center.
    pub gnomonic: f64,
}

/// Corner distances in the barycentric, round and gnomonic pictures.
///
/// The flat pictures understate (barycentric) and overstate (gnomonic) the true distance.
pub fn corner_distances(p: &ProbabilityVector) -> Result<CornerDistances> {
    let n = p.dim();
    let k = p.0.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).map(|(k, _)| k).unwrap_or(0);
    let corner = ProbabilityVector::corner(n, k);
    let bary = simplex_to_barycentric(p).distance(&simplex_to_barycentric(&corner)) * FRAC_PI_2;
    // The unit-edge chart is the tangent-plane chart scaled by 1/√(2N).
    let to_tangent = ((2 * n) as f64).sqrt();
    let gnom = simplex_to_gnomonic(p)?.distance(&simplex_to_gnomonic(&corner)?) * to_tangent;
    Ok(CornerDistances { barycentric: bary, round: round_distance(p, &corner)?, gnomonic: gnom })
}

/// Pure state `Σ c_i |ii⟩` on `N²` amplitudes.
pub fn schmidt_state(c: &[f64]) -> Result<ProjectiveState> {
    let n = c.len();
    let mut amps = vec![Complex64::new(0.0, 0.0); n * n];
    for (i, &ci) in c.iter().enumerate() {
        amps[i * n + i] = Complex64::new(ci, 0.0);
    }
    ProjectiveState::new(&amps)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SchmidtSimplexDiagnostics {
    pub fs_distance: f64,
    pub octant_distance: f64,
    pub residual: f64,
}

/// Compares the Fubini-Study distance of two Schmidt-form states with the arc `arccos Σ c_i c'_i`.
pub fn schmidt_simplex_check(c: &[f64], d: &[f64]) -> Result<SchmidtSimplexDiagnostics> {
    if c.len() != d.len() {
        return Err(Error::DimensionMismatch { expected: c.len(), found: d.len() });
    }
    for v in [c, d] {
        if v.iter().any(|&x| x < 0.0) || (v.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidCoordinates("Schmidt coefficients must be non-negative with unit norm".into()));
        }
    }
    let fs = fs_distance(&schmidt_state(c)?, &schmidt_state(d)?)?;
    let dot: f64 = c.iter().zip(d).map(|(a, b)| a * b).sum();
    let octant = dot.clamp(-1.0, 1.0).acos();
    Ok(SchmidtSimplexDiagnostics { fs_distance: fs, octant_distance: octant, residual: (fs - octant).abs() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charts::{collinearity_residual, gnomonic_unproject, trace_great_circle};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_4;

    fn pv(v: &[f64]) -> ProbabilityVector {
        ProbabilityVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn validation() {
        assert!(ProbabilityVector::new(vec![0.5, 0.6]).is_err());
        assert!(ProbabilityVector::new(vec![1.5, -0.5]).is_err());
        assert!(ProbabilityVector::new(vec![1.0]).is_err());
        assert_eq!(pv(&[1.0 + 1e-13, -1e-13]).as_slice(), &[1.0 + 1e-13, 0.0]);
    }

    #[test]
    fn mixing_examples() {
        let (p, q) = (pv(&[1.0, 0.0, 0.0]), pv(&[0.0, 1.0, 0.0]));
        assert_eq!(mixing_line(&p, &q, 0.0).unwrap(), p);
        assert_eq!(mixing_line(&p, &q, 1.0).unwrap(), q);
        assert_eq!(mixing_line(&p, &q, 0.5).unwrap().as_slice(), &[0.5, 0.5, 0.0]);
    }

    #[test]
    fn mixing_lines_are_curved_in_the_round_chart() {
        let (p, q) = (pv(&[0.7, 0.2, 0.1]), pv(&[0.1, 0.3, 0.6]));
        let pts: Vec<ChartPoint> =
            (0..=20).map(|i| simplex_to_gnomonic(&mixing_line(&p, &q, i as f64 / 20.0).unwrap()).unwrap()).collect();
        assert!(collinearity_residual(&pts) > 1e-3);
    }

    #[test]
    fn round_distance_examples() {
        assert_abs_diff_eq!(round_distance(&pv(&[1.0, 0.0, 0.0]), &pv(&[0.0, 0.0, 1.0])).unwrap(), FRAC_PI_2);
        let d = round_distance(&pv(&[1.0, 0.0, 0.0]), &ProbabilityVector::center(3)).unwrap();
        assert_abs_diff_eq!(d, (1.0 / 3f64.sqrt()).acos(), epsilon = 1e-15);
    }

    #[test]
    fn corners_and_center_in_the_chart() {
        assert!(simplex_to_gnomonic(&ProbabilityVector::center(3)).unwrap().coords.iter().all(|x| x.abs() < 1e-15));
        let corners = gnomonic_corners(3);
        for (k, corner) in corners.iter().enumerate() {
            let c = simplex_to_gnomonic(&ProbabilityVector::corner(3, k)).unwrap();
            assert!(c.distance(corner) < 1e-15);
        }
    }

    #[test]
    fn geodesics_between_root_points_are_straight() {
        let (p, q) = (pv(&[0.7, 0.2, 0.1]), pv(&[0.1, 0.3, 0.6]));
        let arc = trace_great_circle(&p.sqrt_point(), &q.sqrt_point(), 15).unwrap();
        let pts: Vec<ChartPoint> = arc.iter().map(|t| gnomonic_project(&t.radii).unwrap()).collect();
        assert!(collinearity_residual(&pts) < 1e-9);
        let back = gnomonic_unproject(&simplex_to_gnomonic(&p).unwrap()).unwrap();
        for (a, b) in back.iter().zip(p.sqrt_point()) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-14);
        }
    }

    #[test]
    fn flat_pictures_bracket_the_round_distance() {
        let m = 40;
        for i in 1..m {
            for j in 1..(m - i) {
                let p = pv(&[i as f64 / m as f64, j as f64 / m as f64, (m - i - j) as f64 / m as f64]);
                let d = corner_distances(&p).unwrap();
                assert!(d.barycentric < d.round && d.round < d.gnomonic, "{p:?} {d:?}");
            }
        }
    }

    #[test]
    fn schmidt_simplex_examples() {
        let d = schmidt_simplex_check(&[1.0, 0.0], &[0.0, 1.0]).unwrap();
        assert_abs_diff_eq!(d.fs_distance, FRAC_PI_2, epsilon = 1e-15);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let d = schmidt_simplex_check(&[1.0, 0.0], &[h, h]).unwrap();
        assert_abs_diff_eq!(d.fs_distance, FRAC_PI_4, epsilon = 1e-15);
        let d = schmidt_simplex_check(&[0.6, 0.8, 0.0], &[0.0, 0.6, 0.8]).unwrap();
        assert!(d.residual < 1e-12);
    }
}

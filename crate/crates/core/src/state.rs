//! Points of CP^n, their octant-torus coordinates and the Fubini-Study geometry.

use std::f64::consts::{PI, TAU};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::tolerance::{EPS_EDGE, EPS_NORM, EPS_ZERO};
use crate::{Error, Result};

/// A point of CP^n held as a unit vector whose first non-negligible amplitude is real
/// and positive.
///
/// "Non-negligible" means modulus above [`EPS_EDGE`]: amplitudes that small are treated
/// as lying on an octant edge, so they never carry the gauge.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectiveState {
    amplitudes: Vec<Complex64>,
}

impl ProjectiveState {
    /// Normalizes `raw` and removes its global phase.
    pub fn new(raw: &[Complex64]) -> Result<Self> {
        normalize_and_gauge(raw)
    }

    /// Builds a state from real amplitudes.
    pub fn from_real(raw: &[f64]) -> Result<Self> {
        let raw: Vec<Complex64> = raw.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        normalize_and_gauge(&raw)
    }

    /// The basis state `|k⟩` of a `dim`-level system.
    pub fn basis(dim: usize, k: usize) -> Self {
        assert!(k < dim, "basis index {k} out of range for dimension {dim}");
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[k] = Complex64::new(1.0, 0.0);
        Self { amplitudes }
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    /// Index of the amplitude fixed real and positive by the gauge.
    pub fn gauge_carrier(&self) -> usize {
        carrier_index(&self.amplitudes).unwrap_or(0)
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &ProjectiveState) -> Result<Complex64> {
        check_dims(self.dim(), other.dim())?;
        Ok(inner(&self.amplitudes, &other.amplitudes))
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }
}

fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// Hermitian product `⟨a|b⟩ = Σ ā_i b_i`.
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm_sqr(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum()
}

fn carrier_index(unit: &[Complex64]) -> Option<usize> {
    unit.iter().position(|z| z.norm() > EPS_EDGE)
}

/// Returns the gauge representative of the ray through `raw`.
///
/// Two inputs that differ by a nonzero complex factor give the same output up to
/// rounding in the last bits.
pub fn normalize_and_gauge(raw: &[Complex64]) -> Result<ProjectiveState> {
    if raw.len() < 2 {
        return Err(Error::UnsupportedDimension(raw.len()));
    }
    if raw.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::InvalidCoordinates("non-finite amplitude".into()));
    }
    let norm = norm_sqr(raw).sqrt();
    if norm < EPS_ZERO {
        return Err(Error::ZeroVector(norm));
    }
    let unit: Vec<Complex64> = raw.iter().map(|z| z / norm).collect();
    let carrier = carrier_index(&unit).ok_or(Error::ZeroVector(norm))?;
    let c = unit[carrier];
    let phase = c.conj() / c.norm();
    let mut amplitudes: Vec<Complex64> = unit.iter().map(|z| z * phase).collect();
    amplitudes[carrier] = Complex64::new(amplitudes[carrier].norm(), 0.0);
    Ok(ProjectiveState { amplitudes })
}

/// Moduli on the octant plus relative phases on the fiber torus.
///
/// `phases[k - 1]` is the phase `ν_k` of amplitude `k`; `None` marks an absent phase on an
/// octant edge. Absent is not the same as zero.
#[derive(Debug, Clone, PartialEq)]
pub struct OctantTorusCoords {
    pub radii: Vec<f64>,
    pub phases: Vec<Option<f64>>,
}

impl OctantTorusCoords {
    pub fn new(radii: Vec<f64>, phases: Vec<Option<f64>>) -> Result<Self> {
        if radii.len() < 2 {
            return Err(Error::UnsupportedDimension(radii.len()));
        }
        if phases.len() + 1 != radii.len() {
            return Err(Error::InvalidCoordinates(format!(
                "{} radii need {} phases, got {}",
                radii.len(),
                radii.len() - 1,
                phases.len()
            )));
        }
        if let Some(r) = radii.iter().find(|r| !r.is_finite() || **r < -EPS_NORM) {
            return Err(Error::InvalidCoordinates(format!("radius {r} is not a non-negative number")));
        }
        Ok(Self { radii, phases })
    }

    /// Interior point with every phase present.
    pub fn interior(radii: Vec<f64>, phases: Vec<f64>) -> Result<Self> {
        Self::new(radii, phases.into_iter().map(Some).collect())
    }

    pub fn dim(&self) -> usize {
        self.radii.len()
    }

    /// Phase of amplitude `k` (`k ≥ 1`).
    pub fn phase(&self, k: usize) -> Option<f64> {
        self.phases[k - 1]
    }

    /// True when every radius exceeds [`EPS_EDGE`].
    pub fn is_interior(&self) -> bool {
        self.radii.iter().all(|&r| r > EPS_EDGE)
    }
}

/// Wraps an angle into `[0, 2π)`.
pub fn wrap_positive(angle: f64) -> f64 {
    let w = angle.rem_euclid(TAU);
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// Wraps an angle into `(-π, π]`.
pub fn wrap_signed(angle: f64) -> f64 {
    let w = wrap_positive(angle);
    if w > PI {
        w - TAU
    } else {
        w
    }
}

pub fn to_octant_torus(s: &ProjectiveState) -> OctantTorusCoords {
    let z = s.amplitudes();
    let carrier_arg = z[s.gauge_carrier()].arg();
    let radii: Vec<f64> = z.iter().map(|a| a.norm()).collect();
    let phases = z[1..]
        .iter()
        .map(|a| (a.norm() > EPS_EDGE).then(|| wrap_positive(a.arg() - carrier_arg)))
        .collect();
    OctantTorusCoords { radii, phases }
}

pub fn from_octant_torus(c: &OctantTorusCoords) -> Result<ProjectiveState> {
    let mut raw = Vec::with_capacity(c.dim());
    raw.push(Complex64::new(c.radii[0], 0.0));
    for (k, (&r, phase)) in c.radii[1..].iter().zip(&c.phases).enumerate() {
        let z = match phase {
            Some(nu) => Complex64::from_polar(r, *nu),
            None if r <= EPS_EDGE => Complex64::new(r, 0.0),
            None => return Err(Error::MissingPhase { index: k + 1, radius: r }),
        };
        raw.push(z);
    }
    normalize_and_gauge(&raw)
}

/// Fubini-Study distance in `[0, π/2]`.
///
/// Evaluated as `atan2(|b⊥|, |⟨a|b⟩|)` so that small distances keep full relative precision.
pub fn fs_distance(a: &ProjectiveState, b: &ProjectiveState) -> Result<f64> {
    check_dims(a.dim(), b.dim())?;
    Ok(fs_distance_raw(a.amplitudes(), b.amplitudes()))
}

/// Fubini-Study distance between two unnormalized homogeneous vectors.
pub fn fs_distance_raw(a: &[Complex64], b: &[Complex64]) -> f64 {
    let aa = norm_sqr(a);
    let ab = inner(a, b);
    let coeff = ab / aa;
    let perp: f64 = a.iter().zip(b).map(|(x, y)| (y - x * coeff).norm_sqr()).sum::<f64>().sqrt();
    let along = ab.norm() / aa.sqrt();
    perp.atan2(along)
}

/// A tangent direction at `base`, given by any homogeneous representative `delta`.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentVector {
    pub base: ProjectiveState,
    pub delta: Vec<Complex64>,
}

impl TangentVector {
    pub fn new(base: ProjectiveState, delta: Vec<Complex64>) -> Result<Self> {
        check_dims(base.dim(), delta.len())?;
        Ok(Self { base, delta })
    }
}

/// Hermitian Fubini-Study form `h(u, v)` at homogeneous point `z`.
///
/// `Re h` is the metric and `4 Im h` the symplectic form.
pub fn fs_hermitian(z: &[Complex64], u: &[Complex64], v: &[Complex64]) -> Complex64 {
    let zz = norm_sqr(z);
    (inner(u, v) * zz - inner(u, z) * inner(z, v)) / (zz * zz)
}

/// `ds²` of a tangent vector.
pub fn fs_metric_homogeneous(v: &TangentVector) -> f64 {
    fs_metric_raw(v.base.amplitudes(), &v.delta)
}

/// `ds²` for an unnormalized base point and displacement.
pub fn fs_metric_raw(z: &[Complex64], dz: &[Complex64]) -> f64 {
    let zz = norm_sqr(z);
    let val = (zz * norm_sqr(dz) - inner(z, dz).norm_sqr()) / (zz * zz);
    val.max(0.0)
}

/// Symmetric coefficient matrix of a metric in named coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricMatrix {
    pub coords: Vec<String>,
    pub entries: DMatrix<f64>,
}

impl MetricMatrix {
    pub fn new(coords: Vec<String>, entries: DMatrix<f64>) -> Self {
        debug_assert_eq!(coords.len(), entries.nrows());
        Self { coords, entries }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }

    pub fn det(&self) -> f64 {
        self.entries.determinant()
    }

    /// Volume density `√det g`.
    pub fn volume_density(&self) -> f64 {
        self.det().max(0.0).sqrt()
    }

    pub fn max_abs_diff(&self, other: &MetricMatrix) -> f64 {
        (&self.entries - &other.entries).amax()
    }

    pub fn symmetry_residual(&self) -> f64 {
        (&self.entries - self.entries.transpose()).amax()
    }

    /// Smallest eigenvalue of the (symmetrized) matrix.
    pub fn min_eigenvalue(&self) -> f64 {
        let sym = (&self.entries + self.entries.transpose()) * 0.5;
        sym.symmetric_eigenvalues().min()
    }

    /// Principal sub-block over the given coordinate indices.
    pub fn block(&self, idx: &[usize]) -> MetricMatrix {
        let coords = idx.iter().map(|&i| self.coords[i].clone()).collect();
        let entries = DMatrix::from_fn(idx.len(), idx.len(), |a, b| self.entries[(idx[a], idx[b])]);
        MetricMatrix { coords, entries }
    }
}

/// Names `n1..nn, nu1..nun` of the octant-torus chart with `n0` eliminated.
pub fn octant_coordinate_names(dim: usize) -> Vec<String> {
    let n = dim - 1;
    (1..=n).map(|i| format!("n{i}")).chain((1..=n).map(|i| format!("nu{i}"))).collect()
}

/// Fubini-Study metric in `(n1..nn, ν1..νn)`, with `n0 = √(1 - Σ n_i²)` eliminated.
///
/// Radial block: `δ_ij + n_i n_j / n0²`. Phase block: `δ_ij n_i² - n_i² n_j²`.
pub fn octant_torus_metric(c: &OctantTorusCoords) -> Result<MetricMatrix> {
    if let Some((index, &radius)) = c.radii.iter().enumerate().find(|(_, r)| **r <= EPS_EDGE) {
        return Err(Error::EdgePoint { index, radius });
    }
    let n = c.dim() - 1;
    let r = &c.radii;
    let n0_sq = r[0] * r[0];
    let mut g = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let (ni, nj) = (r[i + 1], r[j + 1]);
            let delta = if i == j { 1.0 } else { 0.0 };
            g[(i, j)] = delta + ni * nj / n0_sq;
            g[(n + i, n + j)] = delta * ni * ni - ni * ni * nj * nj;
        }
    }
    Ok(MetricMatrix::new(octant_coordinate_names(c.dim()), g))
}

/// Phase block `g_{ν_i ν_j}` of the fiber torus; defined on edges too (it degenerates there).
pub fn phase_block(radii: &[f64]) -> DMatrix<f64> {
    let n = radii.len() - 1;
    DMatrix::from_fn(n, n, |i, j| {
        let (ni, nj) = (radii[i + 1], radii[j + 1]);
        let delta = if i == j { ni * ni } else { 0.0 };
        delta - ni * ni * nj * nj
    })
}

/// Parametrization `(n1..nn, ν1..νn) ↦` state used for pullbacks of the octant chart.
pub fn octant_chart_state(x: &[f64]) -> Result<ProjectiveState> {
    if !x.len().is_multiple_of(2) {
        return Err(Error::InvalidCoordinates("chart point needs as many phases as radii".into()));
    }
    let n = x.len() / 2;
    let rest: f64 = x[..n].iter().map(|v| v * v).sum();
    let n0 = (1.0 - rest).max(0.0).sqrt();
    let mut raw = vec![Complex64::new(n0, 0.0)];
    raw.extend((0..n).map(|i| Complex64::from_polar(x[i], x[n + i])));
    normalize_and_gauge(&raw)
}

/// Flattens interior octant-torus coordinates into chart order `(n1..nn, ν1..νn)`.
pub fn octant_chart_point(c: &OctantTorusCoords) -> Result<Vec<f64>> {
    let n = c.dim() - 1;
    let mut x = c.radii[1..].to_vec();
    for k in 1..=n {
        x.push(c.phase(k).ok_or(Error::MissingPhase { index: k, radius: c.radii[k] })?);
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_3, FRAC_PI_4};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn assert_amps(s: &ProjectiveState, expected: &[Complex64]) {
        for (a, b) in s.amplitudes().iter().zip(expected) {
            assert_abs_diff_eq!(a.re, b.re, epsilon = 1e-14);
            assert_abs_diff_eq!(a.im, b.im, epsilon = 1e-14);
        }
    }

    #[test]
    fn gauge_examples() {
        let s = normalize_and_gauge(&[c(2.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert_amps(&s, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);

        let s = normalize_and_gauge(&[c(0.0, 1.0), c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert_amps(&s, &[c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);

        let s = normalize_and_gauge(&[c(0.0, 0.0), c(1.0, 1.0), c(1.0, -1.0), c(0.0, 0.0)]).unwrap();
        assert_amps(&s, &[c(0.0, 0.0), c(FRAC_1_SQRT_2, 0.0), c(0.0, -FRAC_1_SQRT_2), c(0.0, 0.0)]);
        assert_eq!(s.gauge_carrier(), 1);
    }

    #[test]
    fn zero_vector_rejected() {
        let err = normalize_and_gauge(&[c(0.0, 0.0), c(1e-16, 0.0)]).unwrap_err();
        assert!(matches!(err, Error::ZeroVector(_)));
        assert!(matches!(normalize_and_gauge(&[c(1.0, 0.0)]), Err(Error::UnsupportedDimension(1))));
    }

    #[test]
    fn octant_torus_examples() {
        let t = to_octant_torus(&ProjectiveState::basis(4, 0));
        assert_eq!(t.radii, vec![1.0, 0.0, 0.0, 0.0]);
        assert!(t.phases.iter().all(Option::is_none));

        let s = normalize_and_gauge(&[c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)]).unwrap();
        let t = to_octant_torus(&s);
        for r in &t.radii {
            assert_abs_diff_eq!(*r, 0.5, epsilon = 1e-15);
        }
        let want = [FRAC_PI_2, PI, 3.0 * FRAC_PI_2];
        for (p, w) in t.phases.iter().zip(want) {
            assert_abs_diff_eq!(p.unwrap(), w, epsilon = 1e-14);
        }

        let s = normalize_and_gauge(&[c(FRAC_1_SQRT_2, 0.0), Complex64::from_polar(FRAC_1_SQRT_2, FRAC_PI_3), c(0.0, 0.0), c(0.0, 0.0)])
            .unwrap();
        let t = to_octant_torus(&s);
        assert_abs_diff_eq!(t.phases[0].unwrap(), FRAC_PI_3, epsilon = 1e-14);
        assert_eq!(&t.phases[1..], &[None, None]);
    }

    #[test]
    fn from_octant_torus_examples() {
        let corner = OctantTorusCoords::new(vec![1.0, 0.0, 0.0, 0.0], vec![None; 3]).unwrap();
        assert_eq!(from_octant_torus(&corner).unwrap(), ProjectiveState::basis(4, 0));

        let center = OctantTorusCoords::interior(vec![0.5; 4], vec![0.0; 3]).unwrap();
        assert_amps(&from_octant_torus(&center).unwrap(), &[c(0.5, 0.0); 4]);

        let p = OctantTorusCoords::new(vec![0.6, 0.8, 0.0, 0.0], vec![Some(PI), None, None]).unwrap();
        assert_amps(&from_octant_torus(&p).unwrap(), &[c(0.6, 0.0), c(-0.8, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);

        let missing = OctantTorusCoords::new(vec![0.6, 0.8, 0.0], vec![None, None]).unwrap();
        assert!(matches!(from_octant_torus(&missing), Err(Error::MissingPhase { index: 1, .. })));
    }

    #[test]
    fn distance_examples() {
        let e0 = ProjectiveState::basis(2, 0);
        let e1 = ProjectiveState::basis(2, 1);
        assert_abs_diff_eq!(fs_distance(&e0, &e1).unwrap(), FRAC_PI_2, epsilon = 1e-15);
        assert_eq!(fs_distance(&e0, &e0).unwrap(), 0.0);
        let plus = ProjectiveState::from_real(&[1.0, 1.0]).unwrap();
        assert_abs_diff_eq!(fs_distance(&e0, &plus).unwrap(), FRAC_PI_4, epsilon = 1e-15);
        assert!(matches!(
            fs_distance(&e0, &ProjectiveState::basis(3, 0)),
            Err(Error::DimensionMismatch { expected: 2, found: 3 })
        ));
    }

    #[test]
    fn metric_homogeneous_examples() {
        let v = TangentVector::new(ProjectiveState::basis(2, 0), vec![c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert_abs_diff_eq!(fs_metric_homogeneous(&v), 1.0, epsilon = 1e-15);

        let base = ProjectiveState::from_real(&[0.3, 0.4, 0.5]).unwrap();
        let along: Vec<Complex64> = base.amplitudes().iter().map(|z| z * c(0.2, -1.3)).collect();
        assert_abs_diff_eq!(fs_metric_homogeneous(&TangentVector::new(base, along).unwrap()), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn metric_matches_displaced_distance() {
        // Horizontal displacement: d² = ε² g / (1 + ε²|v|²), so the ratio converges at order 2.
        let base = ProjectiveState::from_real(&[0.5; 4]).unwrap();
        let dir = [c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        let g = fs_metric_homogeneous(&TangentVector::new(base.clone(), dir.to_vec()).unwrap());
        assert_abs_diff_eq!(g, 2.0, epsilon = 1e-15);
        let err = |eps: f64| {
            let moved: Vec<Complex64> = base.amplitudes().iter().zip(&dir).map(|(z, d)| z + d * eps).collect();
            let d = fs_distance_raw(base.amplitudes(), &moved);
            (d * d / (eps * eps) - g).abs()
        };
        let order = (err(1e-3) / err(1e-4)).log10();
        assert!(order > 1.9, "order {order}");
    }

    #[test]
    fn octant_metric_center_cp2() {
        let s = 1.0 / 3f64.sqrt();
        let m = octant_torus_metric(&OctantTorusCoords::interior(vec![s; 3], vec![0.4, 1.0]).unwrap()).unwrap();
        assert_eq!(m.coords, vec!["n1", "n2", "nu1", "nu2"]);
        assert_abs_diff_eq!(m.get(2, 2), 2.0 / 9.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m.get(3, 3), 2.0 / 9.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m.get(2, 3), -1.0 / 9.0, epsilon = 1e-15);
        assert!(m.block(&[2, 3]).min_eigenvalue() > 0.0);
    }

    #[test]
    fn octant_metric_rejects_edges() {
        let edge = OctantTorusCoords::new(vec![0.6, 0.8, 0.0], vec![Some(0.0), None]).unwrap();
        assert!(matches!(octant_torus_metric(&edge), Err(Error::EdgePoint { index: 2, .. })));
    }

    #[test]
    fn wrapping() {
        assert_eq!(wrap_positive(-1e-300), 0.0);
        assert_abs_diff_eq!(wrap_signed(3.0 * PI / 2.0), -FRAC_PI_2, epsilon = 1e-15);
        assert_abs_diff_eq!(wrap_signed(-PI), PI, epsilon = 1e-15);
    }
}

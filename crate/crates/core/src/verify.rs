//! Invariant suites behind `cpn check`.
//!
//! Every check compares one measured number against a tolerance. Random inputs come from
//! ChaCha8 substreams of the run seed, one stream per suite, so reports are reproducible.
//! The orbit suites take the metric and 2-form under test as arguments; that is how the
//! mutation tests make sure the checks would notice a wrong formula.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8, PI, TAU};
use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::charts::{
    collinearity_residual, gnomonic_corners, gnomonic_metric, gnomonic_project, gnomonic_unproject_sphere,
    numeric_pullback, stereographic_project, stereographic_unproject, torus_shape, trace_great_circle, ChartPoint,
};
use crate::entanglement::{
    apply_local, as_coefficient_matrix, bloch_ket, closest_separable, collapse_sphere, constant_sigma_fiber_cosine,
    constant_sigma_residual, is_separable, max_entanglement_residual, partial_trace_a, product_state,
    schmidt_decompose,
};
use crate::linalg::{su2_euler, CMatrix2};
use crate::orbits::{
    extrinsic_curvature_trace, max_volume_sigma, numeric_mean_curvature, orbit_chart_state, orbit_density,
    orbit_embed, orbit_embed_u3, orbit_metric, orbit_unitaries, orbit_volume, schmidt_cdf, schmidt_pdf, OrbitCoords,
    CP3_VOLUME,
};
use crate::sampling::{haar_state_dim, haar_states, ks_statistic, ks_two_sample, sample_batch, substream};
use crate::search::minimize;
use crate::state::{
    from_octant_torus, fs_distance, fs_metric_raw, octant_chart_point, octant_chart_state, octant_torus_metric,
    to_octant_torus, OctantTorusCoords, ProjectiveState,
};
use crate::submanifolds::{
    constant_sigma_boundary, constant_sigma_region, distance_sphere, max_entangled_set, mub_bases,
    separable_chart_state, separable_surface, spin1_state, Spin1Seed,
};
use crate::symplectic::{
    closedness_residual, lagrangian_residual, liouville_volume_density, max_entangled_chart_state, omega_octant,
    omega_octant_field, omega_orbit_field, orbit_form_point, orbit_form_state, pullback_omega, TwoFormMatrix,
    ORBIT_FORM_COORDS,
};
use crate::tolerance::PREDICATE_TOL;
use crate::{MetricMatrix, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Metric,
    Entanglement,
    Orbits,
    Symplectic,
    Sampling,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Metric, Suite::Entanglement, Suite::Orbits, Suite::Symplectic, Suite::Sampling];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Metric => "metric",
            Suite::Entanglement => "entanglement",
            Suite::Orbits => "orbits",
            Suite::Symplectic => "symplectic",
            Suite::Sampling => "sampling",
        }
    }

    fn stream(self) -> u64 {
        self as u64
    }
}

/// Direction of the comparison between measurement and tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    AtMost,
    AtLeast,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub suite: Suite,
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
    pub comparison: Comparison,
    pub passed: bool,
}

impl CheckOutcome {
    fn new(suite: Suite, name: &str, measured: f64, tolerance: f64, comparison: Comparison) -> Self {
        let passed = match comparison {
            Comparison::AtMost => measured <= tolerance,
            Comparison::AtLeast => measured >= tolerance,
        };
        Self { suite, name: name.to_string(), measured, tolerance, comparison, passed }
    }

    fn at_most(suite: Suite, name: &str, measured: f64, tolerance: f64) -> Self {
        Self::new(suite, name, measured, tolerance, Comparison::AtMost)
    }

    fn from_result(suite: Suite, name: &str, measured: Result<f64>, tolerance: f64) -> Self {
        // An error inside a check is a failure, reported as an infinite residual.
        Self::at_most(suite, name, measured.unwrap_or(f64::INFINITY), tolerance)
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.comparison {
            Comparison::AtMost => "<=",
            Comparison::AtLeast => ">=",
        };
        write!(
            f,
            "{} {}/{} measured={:.3e} tol{}{:.1e}",
            if self.passed { "PASS" } else { "FAIL" },
            self.suite.name(),
            self.name,
            self.measured,
            op,
            self.tolerance
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub seed: u64,
    pub outcomes: Vec<CheckOutcome>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.outcomes.iter().filter(|o| !o.passed)
    }

    pub fn get(&self, name: &str) -> Option<&CheckOutcome> {
        self.outcomes.iter().find(|o| o.name == name)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for o in &self.outcomes {
            writeln!(f, "{o}")?;
        }
        let failed = self.failures().count();
        write!(f, "seed {}: {} checks, {} failed", self.seed, self.outcomes.len(), failed)
    }
}

/// Runs the given suites with the shipped formulas.
pub fn run(suites: &[Suite], seed: u64) -> Report {
    let mut outcomes = Vec::new();
    for &suite in suites {
        let mut rng = substream(seed, suite.stream());
        outcomes.extend(match suite {
            Suite::Metric => metric_suite(&mut rng),
            Suite::Entanglement => entanglement_suite(&mut rng),
            Suite::Orbits => orbits_suite_with(&orbit_metric, &mut rng),
            Suite::Symplectic => symplectic_suite_with(&omega_orbit_field, &mut rng),
            Suite::Sampling => sampling_suite(seed),
        });
    }
    Report { seed, outcomes }
}

/// The orbits suite against an arbitrary orbit metric.
pub fn run_orbits_with(metric: &dyn Fn(&OrbitCoords) -> MetricMatrix, seed: u64) -> Report {
    let mut rng = substream(seed, Suite::Orbits.stream());
    Report { seed, outcomes: orbits_suite_with(metric, &mut rng) }
}

/// The symplectic suite against an arbitrary orbit 2-form field in `(σ, τ, θ1, φ1, θ2, φ2)`.
pub fn run_symplectic_with(omega: &dyn Fn(&[f64]) -> DMatrix<f64>, seed: u64) -> Report {
    let mut rng = substream(seed, Suite::Symplectic.stream());
    Report { seed, outcomes: symplectic_suite_with(omega, &mut rng) }
}

// ---------------------------------------------------------------- random inputs

/// Interior octant-torus point with every radius at least `min_radius`.
pub fn random_interior<R: Rng>(rng: &mut R, dim: usize, min_radius: f64) -> OctantTorusCoords {
    loop {
        let raw: Vec<f64> = (0..dim).map(|_| rng.random::<f64>()).collect();
        let norm = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
        let radii: Vec<f64> = raw.iter().map(|x| x / norm).collect();
        if radii.iter().all(|&r| r >= min_radius) {
            let phases = (1..dim).map(|_| rng.random_range(0.0..TAU)).collect();
            return OctantTorusCoords::interior(radii, phases).expect("unit radii");
        }
    }
}

/// Orbit coordinates away from the degenerate values of σ and θ.
pub fn random_orbit<R: Rng>(rng: &mut R) -> OrbitCoords {
    let sigma = rng.random_range(0.05..FRAC_PI_4 - 0.05);
    random_orbit_at(rng, sigma)
}

fn random_orbit_at<R: Rng>(rng: &mut R, sigma: f64) -> OrbitCoords {
    let theta1 = rng.random_range(0.2..PI - 0.2);
    let phi1 = rng.random_range(0.0..TAU);
    let theta2 = rng.random_range(0.2..PI - 0.2);
    let phi2 = rng.random_range(0.0..TAU);
    let tau = rng.random_range(0.0..TAU);
    OrbitCoords::new(sigma, theta1, phi1, theta2, phi2, tau).expect("coordinates in range")
}

fn random_su2<R: Rng>(rng: &mut R) -> CMatrix2 {
    su2_euler(rng.random_range(0.0..TAU), rng.random_range(0.0..PI), rng.random_range(0.0..TAU))
}

fn random_direction<R: Rng>(rng: &mut R) -> [f64; 3] {
    let z: f64 = rng.random_range(-1.0..1.0);
    let phi = rng.random_range(0.0..TAU);
    let r = (1.0 - z * z).sqrt();
    [r * phi.cos(), r * phi.sin(), z]
}

/// Haar-random unitary of order `n` (QR of a complex Gaussian matrix, phases fixed).
fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<Complex64> {
    let g = DMatrix::from_fn(n, n, |_, _| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    let mut q = q;
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

fn apply_unitary(u: &DMatrix<Complex64>, s: &ProjectiveState) -> Result<ProjectiveState> {
    let v = u * DVector::from_column_slice(s.amplitudes());
    ProjectiveState::new(v.as_slice())
}

fn max_over<I: IntoIterator<Item = Result<f64>>>(items: I) -> Result<f64> {
    let mut worst = 0.0f64;
    for v in items {
        worst = worst.max(v?);
    }
    Ok(worst)
}

fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, intervals: usize) -> f64 {
    let n = intervals + intervals % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + h * i as f64);
    }
    s * h / 3.0
}

// ---------------------------------------------------------------- metric suite

fn metric_suite(rng: &mut ChaCha8Rng) -> Vec<CheckOutcome> {
    let s = Suite::Metric;
    let mut out = Vec::new();

    // Orthogonal pairs: a random state and a random vector orthogonalized against it.
    let orth = max_over((0..200).map(|i| {
        let dim = 2 + i % 5;
        let a = haar_state_dim(rng, dim);
        let b = haar_state_dim(rng, dim);
        let overlap = a.inner(&b)?;
        let raw: Vec<Complex64> = b.amplitudes().iter().zip(a.amplitudes()).map(|(y, x)| y - x * overlap).collect();
        let b = ProjectiveState::new(&raw)?;
        Ok((fs_distance(&a, &b)? - FRAC_PI_2).abs())
    }));
    let basis = max_over((0..4).map(|k| Ok((fs_distance(&ProjectiveState::basis(4, k), &ProjectiveState::basis(4, (k + 1) % 4))? - FRAC_PI_2).abs())));
    out.push(CheckOutcome::from_result(s, "orthogonal_distance_is_max", orth.and_then(|a| basis.map(|b| a.max(b))), 1e-12));

    let proj = max_over((0..100).map(|_| {
        let z = haar_state_dim(rng, 4);
        let dz = haar_state_dim(rng, 4);
        let lambda = Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        let shifted: Vec<Complex64> = dz.amplitudes().iter().zip(z.amplitudes()).map(|(d, x)| d + x * lambda).collect();
        let a = fs_metric_raw(z.amplitudes(), dz.amplitudes());
        let b = fs_metric_raw(z.amplitudes(), &shifted);
        Ok((a - b).abs() / a.max(1e-300))
    }));
    out.push(CheckOutcome::from_result(s, "metric_projection_invariance", proj, 1e-10));

    for dim in [3usize, 4] {
        let name = if dim == 3 { "octant_metric_pullback_cp2" } else { "octant_metric_pullback_cp3" };
        let r = max_over((0..100).map(|_| {
            let c = random_interior(rng, dim, 0.05);
            let x = octant_chart_point(&c)?;
            Ok(octant_torus_metric(&c)?.max_abs_diff(&numeric_pullback(octant_chart_state, &x)?))
        }));
        out.push(CheckOutcome::from_result(s, name, r, 1e-7));
    }

    let rt = max_over((0..100).map(|i| {
        let c = random_interior(rng, 3 + i % 2, 0.01);
        let back = to_octant_torus(&from_octant_torus(&c)?);
        let dr = c.radii.iter().zip(&back.radii).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        let dp = c
            .phases
            .iter()
            .zip(&back.phases)
            .map(|(a, b)| crate::state::wrap_signed(a.unwrap_or(0.0) - b.unwrap_or(0.0)).abs())
            .fold(0.0, f64::max);
        Ok(dr.max(dp))
    }));
    out.push(CheckOutcome::from_result(s, "octant_torus_round_trip", rt, 1e-12));

    let straight = max_over((0..50).map(|i| {
        let dim = 3 + i % 2;
        let a = random_interior(rng, dim, 0.0).radii;
        let b = random_interior(rng, dim, 0.0).radii;
        let pts: Vec<ChartPoint> = trace_great_circle(&a, &b, 25)?
            .into_iter()
            .filter(|p| p.in_octant)
            .map(|p| gnomonic_project(&p.radii))
            .collect::<Result<_>>()?;
        Ok(collinearity_residual(&pts))
    }));
    out.push(CheckOutcome::from_result(s, "gnomonic_geodesics_straight", straight, 1e-9));

    let mut corner = 0.0f64;
    for n in [3usize, 4] {
        let c = gnomonic_corners(n);
        for i in 0..n {
            for j in 0..i {
                corner = corner.max((c[i].distance(&c[j]) - 1.0).abs());
            }
        }
    }
    out.push(CheckOutcome::at_most(s, "gnomonic_corner_separation", corner, 1e-12));

    let gm = max_over((0..50).map(|i| {
        let dim = 3 + i % 2;
        let p = gnomonic_project(&random_interior(rng, dim, 0.0).radii)?;
        let numeric = numeric_pullback(
            |x: &[f64]| ProjectiveState::from_real(&gnomonic_unproject_sphere(&ChartPoint::gnomonic(x.to_vec()))?),
            &p.coords,
        )?;
        Ok(gnomonic_metric(&p)?.max_abs_diff(&numeric))
    }));
    out.push(CheckOutcome::from_result(s, "gnomonic_metric_pullback", gm, 1e-7));

    let stereo = max_over((0..100).map(|i| {
        let dim = 3 + i % 2;
        let r = random_interior(rng, dim, 0.0).radii;
        let back = stereographic_unproject(&stereographic_project(&r, i % dim)?)?;
        Ok(r.iter().zip(&back).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
    }));
    out.push(CheckOutcome::from_result(s, "stereographic_round_trip", stereo, 1e-12));

    let area = max_over((0..100).map(|_| {
        let r = random_interior(rng, 3, 0.0).radii;
        let t = torus_shape(&r)?;
        let law = t.side_lengths[0] * t.side_lengths[1] * t.angle(1, 2).unwrap_or(FRAC_PI_2).sin();
        Ok((t.measure - law).abs())
    }));
    out.push(CheckOutcome::from_result(s, "torus_area_law", area, 1e-10));

    let argmax = (0..8)
        .map(|_| {
            let start = gnomonic_project(&random_interior(rng, 3, 0.1).radii).expect("interior");
            let neg_area = |x: &[f64]| {
                match gnomonic_unproject_sphere(&ChartPoint::gnomonic(x.to_vec())).and_then(|r| torus_shape(&r)) {
                    Ok(t) => -t.measure,
                    Err(_) => f64::INFINITY,
                }
            };
            let (x, _) = minimize(neg_area, &start.coords, 0.05, 4000);
            x.iter().map(|v| v * v).sum::<f64>().sqrt()
        })
        .fold(0.0, f64::max);
    out.push(CheckOutcome::at_most(s, "torus_area_argmax_at_center", argmax, 1e-6));

    let bases = mub_bases();
    let mut overlap = 0.0f64;
    for (i, a) in bases.iter().enumerate() {
        for b in bases.iter().skip(i + 1) {
            for u in a {
                for v in b {
                    let o = u.inner(v).map(|z| z.norm()).unwrap_or(f64::INFINITY);
                    overlap = overlap.max((o - 1.0 / 3f64.sqrt()).abs());
                }
            }
        }
    }
    out.push(CheckOutcome::at_most(s, "mub_cross_overlaps", overlap, 1e-12));
    let over_center = bases[1..]
        .iter()
        .flatten()
        .flat_map(|v| to_octant_torus(v).radii)
        .map(|r| (r - 1.0 / 3f64.sqrt()).abs())
        .fold(0.0, f64::max);
    out.push(CheckOutcome::at_most(s, "mub_over_octant_center", over_center, 1e-12));

    let sphere = max_over((0..50).map(|_| {
        let (theta, phi) = (rng.random_range(0.2..PI - 0.2), rng.random_range(0.0..TAU));
        let g = numeric_pullback(|x: &[f64]| spin1_state(Spin1Seed::SpinUp, x[0], x[1]), &[theta, phi])?;
        let round = DMatrix::from_row_slice(2, 2, &[0.5, 0.0, 0.0, 0.5 * theta.sin().powi(2)]);
        Ok((&g.entries - round).amax())
    }));
    out.push(CheckOutcome::from_result(s, "spin_up_orbit_round_sphere", sphere, 1e-8));

    let antipodal = max_over((0..50).map(|_| {
        let (theta, phi) = (rng.random_range(0.0..PI), rng.random_range(0.0..TAU));
        let a = spin1_state(Spin1Seed::SpinZero, theta, phi)?;
        let b = spin1_state(Spin1Seed::SpinZero, PI - theta, phi + PI)?;
        fs_distance(&a, &b)
    }));
    out.push(CheckOutcome::from_result(s, "spin_zero_antipodal_identification", antipodal, 1e-12));

    let spheres = max_over((0..20).map(|i| {
        let dim = 3 + i % 2;
        let corner = i % dim;
        let d = rng.random_range(0.05..FRAC_PI_2);
        let c = ProjectiveState::basis(dim, corner);
        max_over(distance_sphere(dim, corner, d, 5)?.iter().map(|smp| {
            let free: Vec<f64> = (0..dim - 1).map(|k| 0.7 * k as f64 + 0.3).collect();
            Ok((fs_distance(&c, &smp.representative(0, &free)?)? - d).abs())
        }))
    }));
    out.push(CheckOutcome::from_result(s, "distance_sphere_radius", spheres, 1e-10));
    out
}

// ---------------------------------------------------------------- entanglement suite

fn entanglement_suite(rng: &mut ChaCha8Rng) -> Vec<CheckOutcome> {
    let s = Suite::Entanglement;
    let mut out = Vec::new();
    let states: Vec<ProjectiveState> = (0..1000).map(|_| haar_state_dim(rng, 4)).collect();

    let lu = max_over(states.iter().take(200).map(|st| {
        let moved = apply_local(&random_su2(rng), &random_su2(rng), st)?;
        Ok((schmidt_decompose(st)?.sigma - schmidt_decompose(&moved)?.sigma).abs())
    }));
    out.push(CheckOutcome::from_result(s, "schmidt_angle_local_unitary_invariance", lu, 1e-10));

    let mut mismatches = 0usize;
    let mut det_products = 0.0f64;
    for st in &states {
        let sigma = schmidt_decompose(st).map(|d| d.sigma).unwrap_or(f64::NAN);
        if is_separable(st, PREDICATE_TOL).unwrap_or(true) != (sigma <= PREDICATE_TOL) {
            mismatches += 1;
        }
    }
    for _ in 0..200 {
        let p = product_state(&bloch_ket(random_direction(rng)), &bloch_ket(random_direction(rng)));
        match p {
            Ok(p) => {
                det_products = det_products.max(as_coefficient_matrix(&p).map(|c| c.determinant().norm()).unwrap_or(1.0));
                if !is_separable(&p, PREDICATE_TOL).unwrap_or(false) {
                    mismatches += 1;
                }
            }
            Err(_) => mismatches += 1,
        }
    }
    out.push(CheckOutcome::at_most(s, "determinant_criterion_agrees_with_schmidt", mismatches as f64, 0.0));
    out.push(CheckOutcome::at_most(s, "product_state_determinant", det_products, 1e-12));

    let eig = max_over(states.iter().map(|st| {
        let sigma = schmidt_decompose(st)?.sigma;
        let e = partial_trace_a(st)?.eigenvalues();
        Ok((e[0] - sigma.cos().powi(2)).abs().max((e[1] - sigma.sin().powi(2)).abs()))
    }));
    out.push(CheckOutcome::from_result(s, "reduced_state_eigenvalues", eig, 1e-12));

    let analytic = max_over(states.iter().take(200).map(|st| {
        let c = closest_separable(st)?;
        let sigma = schmidt_decompose(st)?.sigma;
        let sep = as_coefficient_matrix(&c.state)?.determinant().norm();
        Ok((fs_distance(st, &c.state)? - sigma).abs().max((c.distance - sigma).abs()).max(sep))
    }));
    out.push(CheckOutcome::from_result(s, "closest_separable_distance_is_sigma", analytic, 1e-10));

    let beaten = max_over(states.iter().take(200).map(|st| {
        let sigma = schmidt_decompose(st)?.sigma;
        let dist = |x: &[f64]| {
            let a = bloch_ket([x[0].sin() * x[1].cos(), x[0].sin() * x[1].sin(), x[0].cos()]);
            let b = bloch_ket([x[2].sin() * x[3].cos(), x[2].sin() * x[3].sin(), x[2].cos()]);
            product_state(&a, &b).and_then(|p| fs_distance(st, &p)).unwrap_or(f64::INFINITY)
        };
        let mut best = f64::INFINITY;
        for _ in 0..4 {
            let start: Vec<f64> = (0..4).map(|k| if k % 2 == 0 { rng.random_range(0.0..PI) } else { rng.random_range(0.0..TAU) }).collect();
            best = best.min(minimize(dist, &start, 0.3, 3000).1);
        }
        Ok((sigma - best).max(0.0))
    }));
    out.push(CheckOutcome::from_result(s, "closest_separable_not_beaten", beaten, 1e-8));

    let mut min_gap = 0.0f64;
    let mut below = 0.0f64;
    for r in [4usize, 6, 8] {
        match min_me_separable_distance(r) {
            Ok(d) => {
                min_gap = min_gap.max((d - FRAC_PI_4).abs());
                below = below.max(FRAC_PI_4 - d);
            }
            Err(_) => min_gap = f64::INFINITY,
        }
    }
    out.push(CheckOutcome::at_most(s, "max_entangled_to_separable_min_distance", min_gap, 1e-3));
    out.push(CheckOutcome::at_most(s, "max_entangled_never_closer_than_quarter_pi", below, 1e-9));

    let collapse = max_over((0..20).map(|_| {
        let x = [rng.random_range(0.0..TAU), rng.random_range(0.0..PI), rng.random_range(0.0..TAU)];
        let me = max_entangled_chart_state(&x)?;
        let dirs: Vec<[f64; 3]> = (0..25).map(|_| random_direction(rng)).collect();
        max_over(collapse_sphere(&me, &dirs)?.iter().map(|p| {
            let det = as_coefficient_matrix(p)?.determinant().norm();
            Ok((fs_distance(&me, p)? - FRAC_PI_4).abs().max(det))
        }))
    }));
    out.push(CheckOutcome::from_result(s, "collapse_sphere_at_quarter_pi", collapse, 1e-10));

    let collapse_radius = max_over((0..10).map(|_| {
        let x = [rng.random_range(0.0..TAU), rng.random_range(0.0..PI), rng.random_range(0.0..TAU)];
        let me = max_entangled_chart_state(&x)?;
        let (theta, phi) = (rng.random_range(0.3..PI - 0.3), rng.random_range(0.0..TAU));
        let g = numeric_pullback(
            |y: &[f64]| {
                let n = [y[0].sin() * y[1].cos(), y[0].sin() * y[1].sin(), y[0].cos()];
                collapse_sphere(&me, &[n]).map(|mut v| v.remove(0))
            },
            &[theta, phi],
        )?;
        // Both factors turn with n, so the sphere has radius 1/√2.
        let round = DMatrix::from_row_slice(2, 2, &[0.5, 0.0, 0.0, 0.5 * theta.sin().powi(2)]);
        Ok((&g.entries - round).amax())
    }));
    out.push(CheckOutcome::from_result(s, "collapse_sphere_metric", collapse_radius, 1e-7));

    let members = (|| -> Result<f64> {
        let mut worst = 0.0f64;
        for smp in separable_surface((9, 9))? {
            for st in smp.fiber_states(3)? {
                worst = worst.max(as_coefficient_matrix(&st)?.determinant().norm());
            }
        }
        for smp in max_entangled_set(17)? {
            for st in smp.fiber_states(3)? {
                worst = worst.max(max_entanglement_residual(&st)?);
            }
        }
        for sigma in [0.1, FRAC_PI_8, 0.6] {
            for smp in constant_sigma_region(sigma, 11)? {
                for st in smp.fiber_states(2)? {
                    worst = worst.max(constant_sigma_residual(&to_octant_torus(&st), sigma)?);
                }
            }
        }
        Ok(worst)
    })();
    out.push(CheckOutcome::from_result(s, "generator_membership", members, 1e-10));

    let flat = max_over((0..20).map(|_| {
        let x = [rng.random_range(0.2..PI - 0.2), rng.random_range(0.2..PI - 0.2)];
        let g = numeric_pullback(separable_chart_state, &x)?;
        Ok((g.entries - DMatrix::identity(2, 2) * 0.25).amax())
    }));
    out.push(CheckOutcome::from_result(s, "separable_surface_flat_metric", flat, 1e-7));

    // Along (cos t, sin t, sin t, cos t)/√2 the fiber volume is ∝ n0 n1 n2 n3; its maximum
    // must be where the line meets n0 n3 = n1 n2, i.e. t = π/4.
    let volume = |x: &[f64]| {
        let (s, c) = x[0].sin_cos();
        let r = [c, s, s, c].map(|v| v / 2f64.sqrt());
        -crate::state::phase_block(&r).determinant().max(0.0).sqrt()
    };
    let (t, _) = minimize(volume, &[0.3], 0.1, 2000);
    out.push(CheckOutcome::at_most(s, "max_entangled_line_meets_separable_at_largest_torus", (t[0] - FRAC_PI_4).abs(), 1e-6));

    let boundary = (|| -> Result<f64> {
        let mut worst = 0.0f64;
        for sigma in [0.15, 0.4, 0.7] {
            let pts = constant_sigma_boundary(sigma, 20)?;
            if pts.len() != 20 {
                return Ok(f64::INFINITY);
            }
            for p in pts {
                let cos = constant_sigma_fiber_cosine(&p.octant_point, sigma).unwrap_or(f64::INFINITY);
                worst = worst.max((1.0 - cos).abs());
            }
        }
        Ok(worst)
    })();
    out.push(CheckOutcome::from_result(s, "constant_sigma_boundary_fiber_degenerates", boundary, 1e-10));
    out
}

/// Smallest distance between grid samples of the maximally entangled set and the separable
/// surface at refinement `r` (fiber grids of `r` phases per free angle).
pub fn min_me_separable_distance(r: usize) -> Result<f64> {
    let me: Vec<ProjectiveState> =
        max_entangled_set(r + 1)?.iter().map(|s| s.fiber_states(r)).collect::<Result<Vec<_>>>()?.concat();
    let sep: Vec<ProjectiveState> =
        separable_surface((r + 1, r + 1))?.iter().map(|s| s.fiber_states(r)).collect::<Result<Vec<_>>>()?.concat();
    let mut best = f64::INFINITY;
    for a in &me {
        for b in &sep {
            best = best.min(fs_distance(a, b)?);
        }
    }
    Ok(best)
}

// ---------------------------------------------------------------- orbits suite

fn orbits_suite_with(metric: &dyn Fn(&OrbitCoords) -> MetricMatrix, rng: &mut ChaCha8Rng) -> Vec<CheckOutcome> {
    let s = Suite::Orbits;
    let mut out = Vec::new();
    let points: Vec<OrbitCoords> = (0..50).map(|_| random_orbit(rng)).collect();

    let pullback = max_over(points.iter().map(|c| {
        let sigma = c.sigma;
        let a = c.to_array();
        let numeric = numeric_pullback(|x: &[f64]| orbit_chart_state(&[sigma, x[0], x[1], x[2], x[3], x[4]]), &a[1..])?;
        Ok(metric(c).max_abs_diff(&numeric))
    }));
    out.push(CheckOutcome::from_result(s, "orbit_metric_pullback", pullback, 1e-6));

    let split = max_over(points.iter().take(20).map(|c| {
        let g = numeric_pullback(orbit_chart_state, &c.to_array())?;
        let mut worst = (g.get(0, 0) - 1.0).abs();
        for k in 1..6 {
            worst = worst.max(g.get(0, k).abs());
        }
        Ok(worst)
    }));
    out.push(CheckOutcome::from_result(s, "sigma_direction_splits_off", split, 1e-7));

    let foliation = max_over(points.iter().map(|c| Ok((schmidt_decompose(&orbit_embed(c)?)?.sigma - c.sigma).abs())));
    out.push(CheckOutcome::from_result(s, "orbits_have_constant_sigma", foliation, 1e-10));

    let density = points
        .iter()
        .map(|c| {
            let det = metric(c).det();
            (orbit_density(c).powi(2) - det).abs() / orbit_density(c).powi(2)
        })
        .fold(0.0, f64::max);
    out.push(CheckOutcome::at_most(s, "density_squared_matches_metric_determinant", density, 1e-8));

    let total = simpson(|x| orbit_volume(x).unwrap_or(f64::NAN), 0.0, FRAC_PI_4, 4000);
    out.push(CheckOutcome::at_most(s, "orbit_volumes_integrate_to_cp3_volume", (total - CP3_VOLUME).abs(), 1e-10));

    // ∫ over θ1, φ1, θ2, φ2, τ of the density, against the closed-form orbit volume.
    let volume = max_over([0.1, FRAC_PI_8, 0.6].map(|sigma| {
        let sin_int = simpson(f64::sin, 0.0, PI, 2000);
        let c = OrbitCoords::new(sigma, FRAC_PI_2, 0.0, FRAC_PI_2, 0.0, 0.0)?;
        let integral = orbit_density(&c) * sin_int * sin_int * TAU.powi(3);
        Ok((integral - orbit_volume(sigma)?).abs())
    }));
    out.push(CheckOutcome::from_result(s, "orbit_density_integrates_to_orbit_volume", volume, 1e-10));

    let cdf = max_over([0.1, 0.3, 0.5, FRAC_PI_4].map(|sigma| {
        let integral = simpson(|x| schmidt_pdf(x).unwrap_or(f64::NAN), 0.0, sigma, 2000);
        Ok((integral - schmidt_cdf(sigma)?).abs())
    }));
    out.push(CheckOutcome::from_result(s, "schmidt_cdf_integrates_pdf", cdf, 1e-10));

    let star = max_volume_sigma();
    let zero = extrinsic_curvature_trace(star).map(f64::abs);
    let signs = extrinsic_curvature_trace(star - 1e-6)
        .and_then(|a| extrinsic_curvature_trace(star + 1e-6).map(|b| a > 0.0 && b < 0.0))
        .unwrap_or(false);
    out.push(CheckOutcome::from_result(s, "curvature_vanishes_on_largest_orbit", zero.map(|z| if signs { z } else { f64::INFINITY }), 1e-12));
    out.push(CheckOutcome::from_result(s, "curvature_at_pi_over_8", extrinsic_curvature_trace(FRAC_PI_8).map(|k| (k + 4.0).abs()), 1e-12));

    let mut spread = 0.0f64;
    let mut numeric_vs_closed = 0.0f64;
    for sigma in [0.15, FRAC_PI_8, 0.6] {
        let ks: Vec<f64> = (0..6)
            .map(|_| numeric_mean_curvature(&random_orbit_at(rng, sigma), 1e-4).unwrap_or(f64::INFINITY))
            .collect();
        let (lo, hi) = ks.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &k| (l.min(k), h.max(k)));
        spread = spread.max(hi - lo);
        let closed = extrinsic_curvature_trace(sigma).unwrap_or(f64::NAN);
        numeric_vs_closed = numeric_vs_closed.max(ks.iter().map(|k| (k - closed).abs() / closed.abs().max(1.0)).fold(0.0, f64::max));
    }
    out.push(CheckOutcome::at_most(s, "mean_curvature_constant_on_orbit", spread, 1e-3));
    out.push(CheckOutcome::at_most(s, "mean_curvature_matches_closed_form", numeric_vs_closed, 1e-3));

    let u3 = max_over(points.iter().take(20).map(|c| {
        let (l, r) = orbit_unitaries(c);
        fs_distance(&orbit_embed_u3(c.sigma, &l, &(l * r))?, &orbit_embed(c)?)
    }));
    let collapse = max_over((0..20).map(|_| {
        let u3 = random_su2(rng);
        let a = orbit_embed_u3(FRAC_PI_4, &random_su2(rng), &u3)?;
        let b = orbit_embed_u3(FRAC_PI_4, &random_su2(rng), &u3)?;
        fs_distance(&a, &b)
    }));
    out.push(CheckOutcome::from_result(s, "u3_parametrization_agrees", u3, 1e-10));
    out.push(CheckOutcome::from_result(s, "max_entangled_orbit_forgets_u1", collapse, 1e-10));
    out
}

// ---------------------------------------------------------------- symplectic suite

fn symplectic_suite_with(omega: &dyn Fn(&[f64]) -> DMatrix<f64>, rng: &mut ChaCha8Rng) -> Vec<CheckOutcome> {
    let s = Suite::Symplectic;
    let mut out = Vec::new();
    let orbit_form = |c: &OrbitCoords| {
        TwoFormMatrix::new(ORBIT_FORM_COORDS.iter().map(|s| s.to_string()).collect(), omega(&orbit_form_point(c)))
    };

    for dim in [3usize, 4] {
        let name = if dim == 3 { "octant_form_pullback_cp2" } else { "octant_form_pullback_cp3" };
        let r = max_over((0..50).map(|_| {
            let c = random_interior(rng, dim, 0.05);
            let x = octant_chart_point(&c)?;
            Ok(omega_octant(&c)?.max_abs_diff(&pullback_omega(octant_chart_state, &x)?))
        }));
        out.push(CheckOutcome::from_result(s, name, r, 1e-8));
    }

    let points: Vec<OrbitCoords> = (0..50).map(|_| random_orbit(rng)).collect();
    let pb = max_over(points.iter().map(|c| {
        Ok(orbit_form(c).max_abs_diff(&pullback_omega(orbit_form_state, &orbit_form_point(c))?))
    }));
    out.push(CheckOutcome::from_result(s, "orbit_form_pullback", pb, 1e-7));

    let chain = max_over(points.iter().take(10).map(|c| {
        let pulled = octant_form_through_orbit_chart(c)?;
        Ok(pulled.max_abs_diff(&orbit_form(c)))
    }));
    out.push(CheckOutcome::from_result(s, "orbit_form_matches_octant_form", chain, 1e-6));

    let me_points: Vec<Vec<f64>> = (0..50)
        .map(|_| vec![rng.random_range(0.0..TAU), rng.random_range(0.1..PI - 0.1), rng.random_range(0.0..TAU)])
        .collect();
    out.push(CheckOutcome::from_result(
        s,
        "max_entangled_set_lagrangian",
        lagrangian_residual(max_entangled_chart_state, &me_points),
        1e-8,
    ));

    let closed_octant = (0..20)
        .map(|i| {
            let c = random_interior(rng, 3 + i % 2, 0.05);
            closedness_residual(omega_octant_field, &octant_chart_point(&c).expect("interior"), 1e-4)
        })
        .fold(0.0, f64::max);
    out.push(CheckOutcome::at_most(s, "octant_form_closed", closed_octant, 1e-6));
    let closed_orbit =
        points.iter().take(20).map(|c| closedness_residual(omega, &orbit_form_point(c), 1e-4)).fold(0.0, f64::max);
    out.push(CheckOutcome::at_most(s, "orbit_form_closed", closed_orbit, 1e-6));

    // A field that is not closed must be flagged; otherwise the closedness checks are blind.
    let broken = |x: &[f64]| {
        let mut w = omega_orbit_field(x);
        w[(0, 1)] *= 1.0 + x[2];
        w[(1, 0)] = -w[(0, 1)];
        w
    };
    let detector = closedness_residual(broken, &orbit_form_point(&points[0]), 1e-4);
    out.push(CheckOutcome::new(s, "closedness_detects_broken_form", detector, 0.1, Comparison::AtLeast));

    let rank = points
        .iter()
        .take(20)
        .map(|c| (orbit_form(c).restrict(&[1, 2, 3, 4, 5]).rank(1e-9) as f64 - 4.0).abs())
        .fold(0.0, f64::max);
    out.push(CheckOutcome::at_most(s, "constant_sigma_restriction_rank_four", rank, 0.0));

    let full_rank = points.iter().take(20).map(|c| (orbit_form(c).rank(1e-9) as f64 - 6.0).abs()).fold(0.0, f64::max);
    out.push(CheckOutcome::at_most(s, "orbit_form_nondegenerate", full_rank, 0.0));

    let liouville_octant = max_over((0..50).map(|i| {
        let c = random_interior(rng, 3 + i % 2, 0.05);
        Ok((liouville_volume_density(&omega_octant(&c)?) - octant_torus_metric(&c)?.volume_density()).abs())
    }));
    out.push(CheckOutcome::from_result(s, "liouville_density_octant", liouville_octant, 1e-8));
    let liouville_orbit =
        points.iter().map(|c| (liouville_volume_density(&orbit_form(c)) - orbit_density(c)).abs()).fold(0.0, f64::max);
    out.push(CheckOutcome::at_most(s, "liouville_density_orbit", liouville_orbit, 1e-8));

    // Monte Carlo over the unit cube in (n1, n2, n3): vol = (2π)³ ∫ n1 n2 n3 over the ball octant.
    let n = 400_000;
    let mut acc = 0.0;
    for _ in 0..n {
        let x: [f64; 3] = [rng.random(), rng.random(), rng.random()];
        if x.iter().map(|v| v * v).sum::<f64>() < 1.0 {
            acc += x[0] * x[1] * x[2];
        }
    }
    let mc = TAU.powi(3) * acc / n as f64;
    out.push(CheckOutcome::at_most(s, "liouville_volume_monte_carlo", (mc - CP3_VOLUME).abs() / CP3_VOLUME, 1e-2));

    // Ω = d(2 Σ n_i² dν_i): compare the exterior derivative of the primitive with Ω.
    let primitive = max_over((0..20).map(|_| {
        let c = random_interior(rng, 4, 0.05);
        let x = octant_chart_point(&c)?;
        let k = x.len();
        let h = 1e-5;
        let theta = |y: &[f64]| -> Vec<f64> {
            let m = y.len() / 2;
            (0..y.len()).map(|b| if b < m { 0.0 } else { 2.0 * y[b - m] * y[b - m] }).collect()
        };
        let mut d = DMatrix::zeros(k, k);
        let mut y = x.clone();
        for a in 0..k {
            y[a] = x[a] + h;
            let plus = theta(&y);
            y[a] = x[a] - h;
            let minus = theta(&y);
            y[a] = x[a];
            for b in 0..k {
                let deriv = (plus[b] - minus[b]) / (2.0 * h);
                d[(a, b)] += deriv;
                d[(b, a)] -= deriv;
            }
        }
        Ok((d - omega_octant_field(&x)).amax())
    }));
    out.push(CheckOutcome::from_result(s, "action_angle_primitive", primitive, 1e-7));
    out
}

/// The octant form pulled back through the orbit chart by a finite-difference Jacobian.
pub fn octant_form_through_orbit_chart(c: &OrbitCoords) -> Result<TwoFormMatrix> {
    let x = orbit_form_point(c);
    let chart = |p: &[f64]| -> Result<Vec<f64>> { octant_chart_point(&to_octant_torus(&orbit_form_state(p)?)) };
    let base = chart(&x)?;
    let h = 1e-6;
    let mut jac = DMatrix::zeros(6, 6);
    let mut y = x;
    for j in 0..6 {
        y[j] = x[j] + h;
        let plus = chart(&y)?;
        y[j] = x[j] - h;
        let minus = chart(&y)?;
        y[j] = x[j];
        for i in 0..6 {
            let d = if i >= 3 { crate::state::wrap_signed(plus[i] - minus[i]) } else { plus[i] - minus[i] };
            jac[(i, j)] = d / (2.0 * h);
        }
    }
    let octant = TwoFormMatrix::new(vec![], omega_octant_field(&base));
    Ok(octant.pullback(&jac, ORBIT_FORM_COORDS.iter().map(|s| s.to_string()).collect()))
}

// ---------------------------------------------------------------- sampling suite

/// Sample size of the sampling suite.
pub const SAMPLING_COUNT: usize = 100_000;

fn sampling_suite(seed: u64) -> Vec<CheckOutcome> {
    let s = Suite::Sampling;
    let mut out = Vec::new();
    let batch = match sample_batch(seed, SAMPLING_COUNT) {
        Ok(b) => b,
        Err(_) => return vec![CheckOutcome::at_most(s, "sample_batch", f64::INFINITY, 0.0)],
    };
    let n = batch.count as f64;

    out.push(CheckOutcome::from_result(s, "schmidt_angle_ks", ks_statistic(&batch.sigmas, |x| schmidt_cdf(x.clamp(0.0, FRAC_PI_4)).unwrap_or(f64::NAN)), 1e-2));
    out.push(CheckOutcome::from_result(s, "bloch_radius_ks", ks_statistic(&batch.bloch_radii, |r| r.clamp(0.0, 1.0).powi(3)), 1e-2));
    let inner = batch.bloch_radii.iter().filter(|&&r| r < 0.5).count() as f64 / n;
    out.push(CheckOutcome::at_most(s, "bloch_inner_ball_fraction", (inner - 0.125).abs(), 1e-2));

    let states = haar_states(seed, SAMPLING_COUNT);
    let mean = states.iter().map(|st| st.amplitudes()[0].norm_sqr()).sum::<f64>() / n;
    out.push(CheckOutcome::at_most(s, "mean_first_population", (mean - 0.25).abs(), 5e-3));

    // Fixed unitaries applied to one batch, compared with an independent batch.
    let mut rng = substream(seed, 1 << 32);
    let (u1, u2) = (random_su2(&mut rng), random_su2(&mut rng));
    let global = random_unitary(&mut rng, 4);
    let reference = match sample_batch(seed.wrapping_add(1), SAMPLING_COUNT) {
        Ok(b) => b.sigmas,
        Err(_) => vec![],
    };
    let moved = |f: &dyn Fn(&ProjectiveState) -> Result<ProjectiveState>| -> Result<Vec<f64>> {
        states.iter().map(|st| Ok(schmidt_decompose(&f(st)?)?.sigma)).collect()
    };
    let local = moved(&|st| apply_local(&u1, &u2, st)).and_then(|v| ks_two_sample(&v, &reference));
    out.push(CheckOutcome::from_result(s, "local_unitary_invariance_ks", local, 1.5e-2));
    let glob = moved(&|st| apply_unitary(&global, st)).and_then(|v| ks_two_sample(&v, &reference));
    out.push(CheckOutcome::from_result(s, "global_unitary_invariance_ks", glob, 1.5e-2));

    let bins = 20;
    let width = FRAC_PI_4 / bins as f64;
    let mut counts = vec![0usize; bins];
    for &x in &batch.sigmas {
        counts[((x / width) as usize).min(bins - 1)] += 1;
    }
    let worst = counts
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            let (a, b) = (i as f64 * width, (i + 1) as f64 * width);
            let p = schmidt_cdf(b.min(FRAC_PI_4)).unwrap_or(f64::NAN) - schmidt_cdf(a).unwrap_or(f64::NAN);
            let se = (n * p * (1.0 - p)).sqrt();
            (c as f64 - n * p).abs() / se
        })
        .fold(0.0, f64::max);
    out.push(CheckOutcome::at_most(s, "schmidt_histogram_standard_errors", worst, 3.0));

    let again = sample_batch(seed, 2 * crate::sampling::CHUNK + 17);
    let once = sample_batch(seed, 2 * crate::sampling::CHUNK + 17);
    let same = matches!((again, once), (Ok(a), Ok(b)) if a == b);
    out.push(CheckOutcome::at_most(s, "batch_determinism", if same { 0.0 } else { 1.0 }, 0.0));
    out
}

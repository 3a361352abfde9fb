//! Data behind the figures: octant charts, torus families, submanifolds and the simplices.
//!
//! Every figure is a [`Table`]. Rows describing states carry the octant radii `n0..`, the
//! gnomonic chart point `x, y(, z)`, the phases `nu1..` of one representative state
//! (empty where a phase is undefined on an edge) and a `fiber` descriptor:
//!
//! - `torus`: every phase is allowed;
//! - `nu1+nu2-nu3=v` (branches joined by `|`): a linear relation mod 2π;
//! - `points:a;b|c;d`: a finite set of phase vectors.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8, PI, TAU};

use cpn_core::charts::{edge_point, gnomonic_project, stereographic_project, torus_shape, trace_great_circle};
use cpn_core::entanglement::{collapse_sphere, constant_sigma_residual};
use cpn_core::simplex::{corner_distances, mixing_line, simplex_to_barycentric, simplex_to_gnomonic, ProbabilityVector};
use cpn_core::state::{fs_distance, to_octant_torus};
use cpn_core::submanifolds::{
    constant_sigma_boundary, constant_sigma_region, distance_sphere, max_entangled_set, mub_bases, real_projective_plane,
    separable_surface, spin1_state, FiberLocus, Spin1Seed, SurfaceSample,
};
use cpn_core::{ProjectiveState, Result};
use serde_json::{json, Value};

use crate::document::Table;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Figure {
    OctantCharts,
    TorusFamily,
    DistanceSphere,
    Spin1,
    SeparableSurface,
    MaxEntangled,
    CollapseSphere,
    ConstantSigma,
    Simplex,
}

impl Figure {
    pub const ALL: [Figure; 9] = [
        Figure::OctantCharts,
        Figure::TorusFamily,
        Figure::DistanceSphere,
        Figure::Spin1,
        Figure::SeparableSurface,
        Figure::MaxEntangled,
        Figure::CollapseSphere,
        Figure::ConstantSigma,
        Figure::Simplex,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Figure::OctantCharts => "octant-charts",
            Figure::TorusFamily => "torus-family",
            Figure::DistanceSphere => "distance-sphere",
            Figure::Spin1 => "spin1",
            Figure::SeparableSurface => "separable-surface",
            Figure::MaxEntangled => "max-entangled",
            Figure::CollapseSphere => "collapse-sphere",
            Figure::ConstantSigma => "constant-sigma",
            Figure::Simplex => "simplex",
        }
    }
}

/// Resolution and shape parameters; figures ignore the ones they do not use.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FigureParams {
    /// Grid points per axis for surfaces and regions.
    pub grid: usize,
    /// Points per curve.
    pub samples: usize,
    pub sigma: f64,
    /// Radius of the distance sphere.
    pub distance: f64,
    /// Hilbert-space dimension of the distance sphere (3 or 4).
    pub dim: usize,
}

impl Default for FigureParams {
    fn default() -> Self {
        Self { grid: 9, samples: 33, sigma: FRAC_PI_8, distance: FRAC_PI_4, dim: 4 }
    }
}

pub fn emit(figure: Figure, p: &FigureParams) -> Result<Table> {
    match figure {
        Figure::OctantCharts => octant_charts(p),
        Figure::TorusFamily => torus_family(p),
        Figure::DistanceSphere => distance_sphere_figure(p),
        Figure::Spin1 => spin1(p),
        Figure::SeparableSurface => surface_table(figure, "separable", &separable_surface((p.grid, p.grid))?, 4),
        Figure::MaxEntangled => surface_table(figure, "max-entangled", &max_entangled_set(p.samples)?, 4),
        Figure::CollapseSphere => collapse(p),
        Figure::ConstantSigma => constant_sigma(p),
        Figure::Simplex => simplex(p),
    }
}

fn linspace(a: f64, b: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| if n == 1 { a } else { a + (b - a) * i as f64 / (n - 1) as f64 })
}

fn nums(v: &[f64]) -> Vec<Value> {
    v.iter().map(|x| json!(x)).collect()
}

fn opt(v: Option<f64>) -> Value {
    v.map_or(Value::Null, |x| json!(x))
}

pub fn describe_fiber(locus: &FiberLocus) -> String {
    match locus {
        FiberLocus::WholeTorus => "torus".to_string(),
        FiberLocus::Relation { coefficients, values } => {
            let mut lhs = String::new();
            for (k, &c) in coefficients.iter().enumerate() {
                let sign = if c < 0 { "-" } else if lhs.is_empty() { "" } else { "+" };
                let mag = if c.abs() == 1 { String::new() } else { c.abs().to_string() };
                lhs.push_str(&format!("{sign}{mag}nu{}", k + 1));
            }
            values.iter().map(|v| format!("{lhs}={v}")).collect::<Vec<_>>().join("|")
        }
        FiberLocus::Points(points) => {
            let body = points.iter().map(|p| p.iter().map(f64::to_string).collect::<Vec<_>>().join(";")).collect::<Vec<_>>();
            format!("points:{}", body.join("|"))
        }
    }
}

fn state_columns(dim: usize) -> Vec<String> {
    let chart = ["x", "y", "z"];
    (0..dim)
        .map(|k| format!("n{k}"))
        .chain(chart[..dim - 1].iter().map(|s| s.to_string()))
        .chain((1..dim).map(|k| format!("nu{k}")))
        .collect()
}

fn state_cells(s: &ProjectiveState) -> Result<Vec<Value>> {
    let c = to_octant_torus(s);
    let chart = gnomonic_project(&c.radii)?;
    Ok(nums(&c.radii).into_iter().chain(nums(&chart.coords)).chain(c.phases.iter().map(|p| opt(*p))).collect())
}

/// Radii and chart point of the sample, with the phases of its first representative.
fn sample_cells(s: &SurfaceSample) -> Result<Vec<Value>> {
    let free = vec![0.0; s.fiber_locus.free_phases(s.octant_point.len() - 1)];
    let rep = to_octant_torus(&s.representative(0, &free)?);
    Ok(nums(&s.octant_point)
        .into_iter()
        .chain(nums(&s.chart_point.coords))
        .chain(rep.phases.iter().map(|p| opt(*p)))
        .chain([json!(describe_fiber(&s.fiber_locus))])
        .collect())
}

fn surface_table(figure: Figure, tag: &str, samples: &[SurfaceSample], dim: usize) -> Result<Table> {
    let mut cols = vec!["tag".to_string(), "index".to_string()];
    cols.extend(state_columns(dim));
    cols.push("fiber".into());
    let mut t = Table::new(figure.name(), cols);
    for (i, s) in samples.iter().enumerate() {
        t.push([json!(tag), json!(i)].into_iter().chain(sample_cells(s)?).collect());
    }
    Ok(t)
}

/// Octant edges and the geodesics from each corner that trisect the opposite edge, in the
/// gnomonic chart and in the stereographic chart centered on corner 0.
fn octant_charts(p: &FigureParams) -> Result<Table> {
    let cols = ["tag", "curve", "index", "n0", "n1", "n2", "gnomonic_x", "gnomonic_y", "stereo_x", "stereo_y"];
    let mut t = Table::new(Figure::OctantCharts.name(), cols.iter().map(|s| s.to_string()).collect());
    let corner = |k: usize| edge_point(3, k, (k + 1) % 3, 0.0);
    let mut curves: Vec<(&str, String, Vec<f64>, Vec<f64>)> = Vec::new();
    for k in 0..3 {
        let (a, b) = ((k + 1) % 3, (k + 2) % 3);
        curves.push(("edge", format!("{k}-{a}"), corner(k), corner(a)));
        for frac in [1.0 / 3.0, 2.0 / 3.0] {
            curves.push(("trisector", format!("{k}->{a}{b}@{frac:.3}"), corner(k), edge_point(3, a, b, frac)));
        }
    }
    for (tag, name, a, b) in curves {
        for (i, pt) in trace_great_circle(&a, &b, p.samples)?.iter().enumerate() {
            let g = gnomonic_project(&pt.radii)?;
            let s = stereographic_project(&pt.radii, 0)?;
            let mut row = vec![json!(tag), json!(name), json!(i)];
            row.extend(nums(&pt.radii));
            row.extend(nums(&g.coords));
            row.extend(nums(&s.coords));
            t.push(row);
        }
    }
    Ok(t)
}

/// Flat tori over a grid of the CP² octant, and the mutually unbiased bases.
fn torus_family(p: &FigureParams) -> Result<Table> {
    let cols = ["tag", "n0", "n1", "n2", "x", "y", "nu1", "nu2", "L1", "L2", "angle", "measure"];
    let mut t = Table::new(Figure::TorusFamily.name(), cols.iter().map(|s| s.to_string()).collect());
    for a in linspace(0.0, FRAC_PI_2, p.grid) {
        for b in linspace(0.0, FRAC_PI_2, p.grid) {
            let r = [a.cos().max(0.0), (a.sin() * b.cos()).max(0.0), (a.sin() * b.sin()).max(0.0)];
            let shape = torus_shape(&r)?;
            let mut row = vec![json!("torus")];
            row.extend(nums(&r));
            row.extend(nums(&gnomonic_project(&r)?.coords));
            row.extend([Value::Null, Value::Null]);
            row.extend(nums(&shape.side_lengths));
            row.extend([opt(shape.angle(1, 2)), json!(shape.measure)]);
            t.push(row);
        }
    }
    for (k, basis) in mub_bases().iter().enumerate() {
        for s in basis {
            let mut row = vec![json!(format!("mub-{k}"))];
            row.extend(state_cells(s)?);
            row.extend([Value::Null, Value::Null, Value::Null, Value::Null]);
            t.push(row);
        }
    }
    Ok(t)
}

fn distance_sphere_figure(p: &FigureParams) -> Result<Table> {
    // A curve in CP², a grid × grid patch in CP³.
    let n = if p.dim == 4 { p.grid } else { p.samples };
    let samples = distance_sphere(p.dim, 0, p.distance, n)?;
    surface_table(Figure::DistanceSphere, "sphere", &samples, p.dim)
}

fn directions(p: &FigureParams) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for theta in linspace(0.0, PI, p.grid) {
        // Avoid repeating φ = 0 at φ = 2π.
        for j in 0..p.grid {
            out.push((theta, TAU * j as f64 / p.grid as f64));
        }
    }
    out
}

/// Spin-1 coherent states (spin up rotated) and the real projective plane of rotated `m = 0`
/// states, over the same direction grid; plus the RP² locus of real states.
fn spin1(p: &FigureParams) -> Result<Table> {
    let mut cols = vec!["tag".to_string(), "theta".into(), "phi".into()];
    cols.extend(state_columns(3));
    cols.push("fiber".into());
    let mut t = Table::new(Figure::Spin1.name(), cols);
    for (seed, tag) in [(Spin1Seed::SpinUp, "spin-up"), (Spin1Seed::SpinZero, "spin-zero")] {
        for (theta, phi) in directions(p) {
            let mut row = vec![json!(tag), json!(theta), json!(phi)];
            row.extend(state_cells(&spin1_state(seed, theta, phi)?)?);
            row.push(Value::Null);
            t.push(row);
        }
    }
    for s in real_projective_plane(p.grid)? {
        let mut row = vec![json!("real"), Value::Null, Value::Null];
        row.extend(sample_cells(&s)?);
        t.push(row);
    }
    Ok(t)
}

/// The sphere of separable states nearest to the singlet, each at distance π/4 from it.
fn collapse(p: &FigureParams) -> Result<Table> {
    let singlet = ProjectiveState::from_real(&[0.0, 1.0, -1.0, 0.0])?;
    let mut cols = vec!["tag".to_string(), "theta".into(), "phi".into()];
    cols.extend(state_columns(4));
    cols.push("distance".into());
    let mut t = Table::new(Figure::CollapseSphere.name(), cols);
    let dirs = directions(p);
    let units: Vec<[f64; 3]> = dirs.iter().map(|&(th, ph)| [th.sin() * ph.cos(), th.sin() * ph.sin(), th.cos()]).collect();
    for ((theta, phi), s) in dirs.iter().zip(collapse_sphere(&singlet, &units)?) {
        let mut row = vec![json!("nearest-separable"), json!(theta), json!(phi)];
        row.extend(state_cells(&s)?);
        row.push(json!(fs_distance(&singlet, &s)?));
        t.push(row);
    }
    Ok(t)
}

/// The constant-σ region and its boundary, with the residual of each representative.
fn constant_sigma(p: &FigureParams) -> Result<Table> {
    let mut cols = vec!["tag".to_string(), "index".into()];
    cols.extend(state_columns(4));
    cols.extend(["fiber".to_string(), "residual".into()]);
    let mut t = Table::new(Figure::ConstantSigma.name(), cols);
    let region = constant_sigma_region(p.sigma, p.grid)?;
    let boundary = constant_sigma_boundary(p.sigma, p.samples)?;
    for (tag, samples) in [("region", region), ("boundary", boundary)] {
        for (i, s) in samples.iter().enumerate() {
            let free = vec![0.0; s.fiber_locus.free_phases(3)];
            let mut worst = 0.0f64;
            for b in 0..s.fiber_locus.branches() {
                worst = worst.max(constant_sigma_residual(&to_octant_torus(&s.representative(b, &free)?), p.sigma)?);
            }
            let mut row = vec![json!(tag), json!(i)];
            row.extend(sample_cells(s)?);
            row.push(json!(worst));
            t.push(row);
        }
    }
    t.metadata.push(("sigma".into(), json!(p.sigma)));
    Ok(t)
}

/// The statistical simplex in barycentric and gnomonic (square-root) pictures: a grid with
/// corner distances, the edges, and one mixing line next to the geodesic between its ends.
fn simplex(p: &FigureParams) -> Result<Table> {
    let cols = ["tag", "index", "p0", "p1", "p2", "bary_x", "bary_y", "gnom_x", "gnom_y", "d_bary", "d_round", "d_gnom"];
    let mut t = Table::new(Figure::Simplex.name(), cols.iter().map(|s| s.to_string()).collect());
    let row = |tag: &str, i: usize, pv: &ProbabilityVector, d: Option<[f64; 3]>| -> Result<Vec<Value>> {
        let mut r = vec![json!(tag), json!(i)];
        r.extend(nums(pv.as_slice()));
        r.extend(nums(&simplex_to_barycentric(pv).coords));
        r.extend(nums(&simplex_to_gnomonic(pv)?.coords));
        r.extend(d.map_or(vec![Value::Null; 3], |d| nums(&d)));
        Ok(r)
    };
    let m = p.grid.max(2);
    let mut i = 0;
    for a in 0..=m {
        for b in 0..=(m - a) {
            let pv = ProbabilityVector::new(vec![a as f64 / m as f64, b as f64 / m as f64, (m - a - b) as f64 / m as f64])?;
            let d = corner_distances(&pv)?;
            t.push(row("grid", i, &pv, Some([d.barycentric, d.round, d.gnomonic]))?);
            i += 1;
        }
    }
    let from_root = |r: &[f64]| {
        let p: Vec<f64> = r.iter().map(|x| x * x).collect();
        let s: f64 = p.iter().sum();
        ProbabilityVector::new(p.iter().map(|x| x / s).collect())
    };
    for k in 0..3 {
        let a = edge_point(3, k, (k + 1) % 3, 0.0);
        let b = edge_point(3, (k + 1) % 3, k, 0.0);
        for (j, pt) in trace_great_circle(&a, &b, p.samples)?.iter().enumerate() {
            t.push(row(&format!("edge-{k}"), j, &from_root(&pt.radii)?, None)?);
        }
    }
    let (pa, pb) = (ProbabilityVector::new(vec![0.7, 0.2, 0.1])?, ProbabilityVector::new(vec![0.1, 0.3, 0.6])?);
    for (j, s) in linspace(0.0, 1.0, p.samples).enumerate() {
        t.push(row("mixing", j, &mixing_line(&pa, &pb, s)?, None)?);
    }
    for (j, pt) in trace_great_circle(&pa.sqrt_point(), &pb.sqrt_point(), p.samples)?.iter().enumerate() {
        t.push(row("geodesic", j, &from_root(&pt.radii)?, None)?);
    }
    Ok(t)
}

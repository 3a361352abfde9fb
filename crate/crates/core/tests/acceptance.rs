//! Acceptance criteria, one line per criterion.
//!
//! Runs without the libtest harness so the PASS/FAIL lines always reach stdout. The
//! reference values come from oracles written here rather than from the crate: distances
//! from the Lagrange identity, metrics from distances between nearby points, embeddings
//! straight from their matrix formulas.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8, PI, TAU};
use std::process::ExitCode;

use cpn_core::charts::{gnomonic_corners, gnomonic_project, torus_shape, ChartPoint};
use cpn_core::entanglement::{closest_separable, product_state};
use cpn_core::orbits::{extrinsic_curvature_trace, orbit_density, orbit_metric, orbit_volume, OrbitCoords};
use cpn_core::sampling::sample_batch;
use cpn_core::state::{fs_distance, octant_torus_metric, OctantTorusCoords};
use cpn_core::submanifolds::{max_entangled_set, mub_bases, separable_surface, spin1_orbit, Spin1Seed};
use cpn_core::symplectic::{
    closedness_residual, liouville_volume_density, omega_octant, omega_octant_field, omega_orbit, omega_orbit_field,
    orbit_form_point,
};
use cpn_core::verify::{run_orbits_with, run_symplectic_with};
use cpn_core::{Complex64, MetricMatrix, ProjectiveState};
use nalgebra::{DMatrix, Matrix2, Vector2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type C = Complex64;

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

// ------------------------------------------------------------------ oracles

/// Fubini-Study distance of unnormalized vectors: `tan d = |a ∧ b| / |⟨a|b⟩|` (Lagrange identity).
fn oracle_distance(a: &[C], b: &[C]) -> f64 {
    let mut wedge = 0.0;
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            wedge += (a[i] * b[j] - a[j] * b[i]).norm_sqr();
        }
    }
    let cross: C = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
    wedge.sqrt().atan2(cross.norm())
}

/// Metric of `f` at `x` from squared distances across symmetric steps, Richardson-extrapolated.
fn oracle_metric<F: Fn(&[f64]) -> Vec<C>>(f: &F, x: &[f64], h: f64) -> DMatrix<f64> {
    let quad = |u: &[f64]| {
        let d = |step: f64| {
            let p: Vec<f64> = x.iter().zip(u).map(|(a, b)| a + step * b).collect();
            let m: Vec<f64> = x.iter().zip(u).map(|(a, b)| a - step * b).collect();
            oracle_distance(&f(&p), &f(&m)).powi(2) / (4.0 * step * step)
        };
        (4.0 * d(h / 2.0) - d(h)) / 3.0
    };
    let k = x.len();
    let unit = |i: usize| (0..k).map(|j| if j == i { 1.0 } else { 0.0 }).collect::<Vec<f64>>();
    let mut g = DMatrix::zeros(k, k);
    for i in 0..k {
        g[(i, i)] = quad(&unit(i));
        for j in 0..i {
            let plus: Vec<f64> = (0..k).map(|l| unit(i)[l] + unit(j)[l]).collect();
            let minus: Vec<f64> = (0..k).map(|l| unit(i)[l] - unit(j)[l]).collect();
            let v = (quad(&plus) - quad(&minus)) / 4.0;
            g[(i, j)] = v;
            g[(j, i)] = v;
        }
    }
    g
}

/// `(n0, n1 e^{iν1}, …)` with `n0` eliminated; `x = (n1..nn, ν1..νn)`.
fn octant_vector(x: &[f64]) -> Vec<C> {
    let n = x.len() / 2;
    let n0 = (1.0 - x[..n].iter().map(|v| v * v).sum::<f64>()).sqrt();
    let mut v = vec![c(n0, 0.0)];
    v.extend((0..n).map(|i| C::from_polar(x[i], x[n + i])));
    v
}

fn rz(a: f64) -> Matrix2<C> {
    Matrix2::new(C::from_polar(1.0, -a / 2.0), c(0.0, 0.0), c(0.0, 0.0), C::from_polar(1.0, a / 2.0))
}

/// `e^{i a L_y}`.
fn ry_plus(a: f64) -> Matrix2<C> {
    let (s, co) = (a / 2.0).sin_cos();
    Matrix2::new(c(co, 0.0), c(s, 0.0), c(-s, 0.0), c(co, 0.0))
}

/// Orbit embedding in `(σ, θ1, φ1, θ2, φ2, τ)`.
fn orbit_vector(x: &[f64]) -> Vec<C> {
    let (sigma, t1, p1, t2, p2, tau) = (x[0], x[1], x[2], x[3], x[4], x[5]);
    let cs = Matrix2::new(c(sigma.cos(), 0.0), c(0.0, 0.0), c(0.0, 0.0), c(sigma.sin(), 0.0));
    let m = rz(p1) * ry_plus(t1) * rz(tau) * cs * ry_plus(-t2) * rz(p2);
    vec![m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]]
}

/// Maximally entangled embedding `U(φ, θ, ψ)/√2`.
fn max_entangled_vector(x: &[f64]) -> Vec<C> {
    let m = rz(x[0]) * ry_plus(-x[1]) * rz(x[2]);
    vec![m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]]
}

/// `4 Im h(u, v)` pulled back by fourth-order differences.
fn oracle_omega<F: Fn(&[f64]) -> Vec<C>>(f: &F, x: &[f64], h: f64) -> DMatrix<f64> {
    let k = x.len();
    let z = f(x);
    let tangent = |i: usize| -> Vec<C> {
        let at = |s: f64| {
            let mut y = x.to_vec();
            y[i] += s;
            f(&y)
        };
        let (p2, p1, m1, m2) = (at(2.0 * h), at(h), at(-h), at(-2.0 * h));
        (0..z.len()).map(|a| (8.0 * (p1[a] - m1[a]) - (p2[a] - m2[a])) / (12.0 * h)).collect()
    };
    let t: Vec<Vec<C>> = (0..k).map(tangent).collect();
    let dot = |a: &[C], b: &[C]| -> C { a.iter().zip(b).map(|(p, q)| p.conj() * q).sum() };
    let zz = dot(&z, &z).re;
    DMatrix::from_fn(k, k, |i, j| {
        let hij = (dot(&t[i], &t[j]) * zz - dot(&t[i], &z) * dot(&z, &t[j])) / (zz * zz);
        4.0 * hij.im
    })
}

fn random_radii(rng: &mut ChaCha8Rng, n: usize, min: f64) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        let r: Vec<f64> = v.iter().map(|x| x / norm).collect();
        if r.iter().all(|&x| x >= min) {
            return r;
        }
    }
}

fn random_orbit_point(rng: &mut ChaCha8Rng, sigma: Option<f64>) -> [f64; 6] {
    [
        sigma.unwrap_or_else(|| rng.random_range(0.05..FRAC_PI_4 - 0.05)),
        rng.random_range(0.2..PI - 0.2),
        rng.random_range(0.0..TAU),
        rng.random_range(0.2..PI - 0.2),
        rng.random_range(0.0..TAU),
        rng.random_range(0.0..TAU),
    ]
}

fn coords(x: &[f64; 6]) -> OrbitCoords {
    OrbitCoords::new(x[0], x[1], x[2], x[3], x[4], x[5]).expect("orbit coordinates in range")
}

fn max_abs(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).amax()
}

fn collinearity(points: &[Vec<f64>]) -> f64 {
    // Distance of each point from the line through the two most distant points.
    let (mut ia, mut ib, mut best) = (0, 0, -1.0);
    for i in 0..points.len() {
        for j in 0..i {
            let d: f64 = points[i].iter().zip(&points[j]).map(|(a, b)| (a - b).powi(2)).sum();
            if d > best {
                (ia, ib, best) = (i, j, d);
            }
        }
    }
    let (a, b) = (&points[ia], &points[ib]);
    let dir: Vec<f64> = b.iter().zip(a).map(|(p, q)| (p - q) / best.sqrt()).collect();
    points
        .iter()
        .map(|p| {
            let rel: Vec<f64> = p.iter().zip(a).map(|(x, y)| x - y).collect();
            let along: f64 = rel.iter().zip(&dir).map(|(x, y)| x * y).sum();
            rel.iter().zip(&dir).map(|(x, y)| (x - along * y).powi(2)).sum::<f64>().sqrt()
        })
        .fold(0.0, f64::max)
}

fn ks(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut s = samples.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len() as f64;
    s.iter().enumerate().fold(0.0, |d: f64, (i, &x)| d.max((i as f64 + 1.0) / n - cdf(x)).max(cdf(x) - i as f64 / n))
}

// ------------------------------------------------------------------ criteria

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(checks: &[(&str, f64, f64)]) -> Outcome {
    let passed = checks.iter().all(|(_, m, t)| *m <= *t);
    let detail = checks.iter().map(|(n, m, t)| format!("{n}={m:.2e} (tol {t:.0e})")).collect::<Vec<_>>().join(", ");
    Outcome { passed, detail }
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    for k in 0..500 {
        let dim = 2 + k % 5;
        let a: Vec<C> = (0..dim).map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
        let raw: Vec<C> = (0..dim).map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
        let aa: f64 = a.iter().map(|z| z.norm_sqr()).sum();
        let proj: C = a.iter().zip(&raw).map(|(x, y)| x.conj() * y).sum::<C>() / aa;
        let b: Vec<C> = raw.iter().zip(&a).map(|(y, x)| y - x * proj).collect();
        let d = fs_distance(&ProjectiveState::new(&a).unwrap(), &ProjectiveState::new(&b).unwrap()).unwrap();
        worst = worst.max((d - FRAC_PI_2).abs());
    }
    for dim in 2..6 {
        for i in 0..dim {
            for j in 0..i {
                let d = fs_distance(&ProjectiveState::basis(dim, i), &ProjectiveState::basis(dim, j)).unwrap();
                worst = worst.max((d - FRAC_PI_2).abs());
            }
        }
    }
    outcome(&[("max |d - pi/2|", worst, 1e-12)])
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for k in 0..100 {
        let dim = 3 + k % 2;
        let radii = random_radii(&mut rng, dim, 0.1);
        let phases: Vec<f64> = (1..dim).map(|_| rng.random_range(0.0..TAU)).collect();
        let x: Vec<f64> = radii[1..].iter().chain(&phases).copied().collect();
        let g = octant_torus_metric(&OctantTorusCoords::interior(radii, phases).unwrap()).unwrap();
        // Truncation of the distance oracle grows like (h/n)⁴, so near edges the step stays small.
        worst = worst.max(max_abs(&g.entries, &oracle_metric(&octant_vector, &x, 1e-5)));
    }
    outcome(&[("max entry error", worst, 1e-7)])
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut straight = 0.0f64;
    for k in 0..50 {
        let dim = 3 + k % 2;
        let a = random_radii(&mut rng, dim, 0.0);
        let b = random_radii(&mut rng, dim, 0.0);
        // Oracle slerp between a and b: every point is a non-negative mix, so stays in the octant.
        let omega = a.iter().zip(&b).map(|(x, y)| x * y).sum::<f64>().clamp(-1.0, 1.0).acos();
        let pts: Vec<Vec<f64>> = (0..=20)
            .map(|i| {
                let t = i as f64 / 20.0;
                let (wa, wb) = (((1.0 - t) * omega).sin() / omega.sin(), (t * omega).sin() / omega.sin());
                let r: Vec<f64> = a.iter().zip(&b).map(|(x, y)| wa * x + wb * y).collect();
                gnomonic_project(&r).unwrap().coords
            })
            .collect();
        straight = straight.max(collinearity(&pts));
    }
    let mut corners = 0.0f64;
    for n in [3, 4] {
        let cs: Vec<ChartPoint> = gnomonic_corners(n);
        for i in 0..n {
            for j in 0..i {
                corners = corners.max((cs[i].distance(&cs[j]) - 1.0).abs());
            }
        }
    }
    outcome(&[("collinearity", straight, 1e-9), ("corner separation error", corners, 1e-12)])
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut law = 0.0f64;
    for _ in 0..100 {
        let r = random_radii(&mut rng, 3, 0.0);
        let t = torus_shape(&r).unwrap();
        // Oracle: sides and angle from the phase block δ_ij n_i² − n_i² n_j².
        let g11 = r[1].powi(2) * (1.0 - r[1].powi(2));
        let g22 = r[2].powi(2) * (1.0 - r[2].powi(2));
        let g12 = -(r[1] * r[2]).powi(2);
        let sin = (1.0 - g12 * g12 / (g11 * g22)).sqrt();
        let area = TAU * g11.sqrt() * TAU * g22.sqrt() * sin;
        law = law.max((t.measure - area).abs());
    }
    // Argmax: the center must beat every point of a fine grid on the octant.
    let center = torus_shape(&[1.0 / 3f64.sqrt(); 3]).unwrap().measure;
    let m = 400;
    let mut excess = f64::NEG_INFINITY;
    let mut best_dist = f64::INFINITY;
    let mut best_val = f64::NEG_INFINITY;
    for i in 0..=m {
        for j in 0..=m {
            let (a, b) = (FRAC_PI_2 * i as f64 / m as f64, FRAC_PI_2 * j as f64 / m as f64);
            let r = [a.cos(), a.sin() * b.cos(), a.sin() * b.sin()];
            let v = torus_shape(&r).unwrap().measure;
            excess = excess.max(v - center);
            if v > best_val {
                best_val = v;
                best_dist = r.iter().map(|x| (x - 1.0 / 3f64.sqrt()).powi(2)).sum::<f64>().sqrt();
            }
        }
    }
    // The best grid point is within one grid cell of the center.
    outcome(&[
        ("area law error", law, 1e-10),
        ("grid excess over center", excess.max(0.0), 0.0),
        ("grid argmax offset", best_dist, 2.0 * FRAC_PI_2 / m as f64),
    ])
}

fn criterion_5() -> Outcome {
    let bases = mub_bases();
    let target = 1.0 / 3f64.sqrt();
    let mut cross = 0.0f64;
    let mut pairs = 0;
    for i in 0..bases.len() {
        for j in 0..i {
            for u in &bases[i] {
                for v in &bases[j] {
                    let o: C = u.amplitudes().iter().zip(v.amplitudes()).map(|(a, b)| a.conj() * b).sum();
                    cross = cross.max((o.norm() - target).abs());
                    pairs += 1;
                }
            }
        }
    }
    let center = bases[1..]
        .iter()
        .flatten()
        .flat_map(|v| v.amplitudes().iter().map(|z| (z.norm() - target).abs()).collect::<Vec<_>>())
        .fold(0.0, f64::max);
    let count_ok = if pairs == 54 && bases[1..].iter().flatten().count() == 9 { 0.0 } else { 1.0 };
    outcome(&[("overlap error", cross, 1e-12), ("radius error over center", center, 1e-12), ("count mismatch", count_ok, 0.0)])
}

fn criterion_6() -> Outcome {
    let mut gap = 0.0f64;
    let mut below = 0.0f64;
    for r in [4usize, 6, 8] {
        let me: Vec<Vec<C>> = max_entangled_set(r + 1)
            .unwrap()
            .iter()
            .flat_map(|s| s.fiber_states(r).unwrap())
            .map(|s| s.into_amplitudes())
            .collect();
        let sep: Vec<Vec<C>> = separable_surface((r + 1, r + 1))
            .unwrap()
            .iter()
            .flat_map(|s| s.fiber_states(r).unwrap())
            .map(|s| s.into_amplitudes())
            .collect();
        let mut best = f64::INFINITY;
        for a in &me {
            for b in &sep {
                best = best.min(oracle_distance(a, b));
            }
        }
        gap = gap.max((best - FRAC_PI_4).abs());
        below = below.max(FRAC_PI_4 - best);
    }

    // Closest separable: σ from an independent SVD, realized distance, and a random search.
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut analytic = 0.0f64;
    let mut beaten = 0.0f64;
    for _ in 0..60 {
        let z: Vec<C> = (0..4).map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
        let s = ProjectiveState::new(&z).unwrap();
        let m = DMatrix::from_row_slice(2, 2, s.amplitudes());
        let sv = m.svd(false, false).singular_values;
        let sigma = sv.min().atan2(sv.max());
        let closest = closest_separable(&s).unwrap();
        analytic = analytic.max((oracle_distance(s.amplitudes(), closest.state.amplitudes()) - sigma).abs());
        analytic = analytic.max((closest.distance - sigma).abs());
        let ket = |t: f64, p: f64| Vector2::new(c((t / 2.0).cos(), 0.0), C::from_polar((t / 2.0).sin(), p));
        let dist = |x: &[f64; 4]| {
            let p = product_state(&ket(x[0], x[1]), &ket(x[2], x[3])).unwrap();
            oracle_distance(s.amplitudes(), p.amplitudes())
        };
        let mut best = f64::INFINITY;
        for _ in 0..3 {
            let mut x = [rng.random_range(0.0..PI), rng.random_range(0.0..TAU), rng.random_range(0.0..PI), rng.random_range(0.0..TAU)];
            let mut fx = dist(&x);
            let mut step = 0.5;
            // Compass search.
            while step > 1e-10 {
                let mut improved = false;
                for k in 0..4 {
                    for sgn in [1.0, -1.0] {
                        let mut y = x;
                        y[k] += sgn * step;
                        let fy = dist(&y);
                        if fy < fx {
                            (x, fx, improved) = (y, fy, true);
                        }
                    }
                }
                if !improved {
                    step /= 2.0;
                }
            }
            best = best.min(fx);
        }
        beaten = beaten.max(sigma - best);
    }
    outcome(&[
        ("|min distance - pi/4|", gap, 1e-3),
        ("pairs below pi/4", below.max(0.0), 1e-9),
        ("closest distance vs sigma", analytic, 1e-10),
        ("search improvement", beaten.max(0.0), 1e-8),
    ])
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut fit = 0.0f64;
    let up = |x: &[f64]| -> Vec<C> {
        let n = [x[0].sin() * x[1].cos(), x[0].sin() * x[1].sin(), x[0].cos()];
        spin1_orbit(Spin1Seed::SpinUp, &[n]).unwrap().remove(0).into_amplitudes()
    };
    for _ in 0..50 {
        let x = [rng.random_range(0.2..PI - 0.2), rng.random_range(0.0..TAU)];
        let g = oracle_metric(&up, &x, 1e-4);
        let round = DMatrix::from_row_slice(2, 2, &[0.5, 0.0, 0.0, 0.5 * x[0].sin().powi(2)]);
        fit = fit.max(max_abs(&g, &round));
    }
    let mut antipodal = 0.0f64;
    for _ in 0..200 {
        let z: f64 = rng.random_range(-1.0..1.0);
        let p = rng.random_range(0.0..TAU);
        let n = [(1.0 - z * z).sqrt() * p.cos(), (1.0 - z * z).sqrt() * p.sin(), z];
        let o = spin1_orbit(Spin1Seed::SpinZero, &[n, [-n[0], -n[1], -n[2]]]).unwrap();
        antipodal = antipodal.max(oracle_distance(o[0].amplitudes(), o[1].amplitudes()));
    }
    outcome(&[("radius 1/sqrt2 sphere fit", fit, 1e-8), ("antipodal distance", antipodal, 1e-12)])
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst = 0.0f64;
    let mut split = 0.0f64;
    for k in 0..50 {
        let x = random_orbit_point(&mut rng, None);
        let sigma = x[0];
        let restricted = |y: &[f64]| orbit_vector(&[sigma, y[0], y[1], y[2], y[3], y[4]]);
        let g = oracle_metric(&restricted, &x[1..], 1e-4);
        worst = worst.max(max_abs(&orbit_metric(&coords(&x)).entries, &g));
        if k < 20 {
            let full = oracle_metric(&orbit_vector, &x, 1e-4);
            split = split.max((full[(0, 0)] - 1.0).abs());
            for j in 1..6 {
                split = split.max(full[(0, j)].abs());
            }
        }
    }
    outcome(&[("orbit metric error", worst, 1e-6), ("sigma block splitting", split, 1e-6)])
}

fn criterion_9() -> Outcome {
    // Composite Gauss-Legendre (3 points) on 400 panels.
    let nodes = [(-(0.6f64).sqrt(), 5.0 / 9.0), (0.0, 8.0 / 9.0), ((0.6f64).sqrt(), 5.0 / 9.0)];
    let panels = 400;
    let w = FRAC_PI_4 / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let mid = (p as f64 + 0.5) * w;
        for (x, wt) in nodes {
            total += wt * w / 2.0 * orbit_volume(mid + x * w / 2.0).unwrap();
        }
    }
    let integral = (total - PI.powi(3) / 6.0).abs();

    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut det = 0.0f64;
    let mut liouville = 0.0f64;
    for _ in 0..100 {
        let x = random_orbit_point(&mut rng, None);
        let o = coords(&x);
        let g: MetricMatrix = orbit_metric(&o);
        let d2 = orbit_density(&o).powi(2);
        det = det.max((d2 - g.entries.determinant()).abs() / d2);
        let w = omega_orbit(&o).entries / 4.0;
        liouville = liouville.max((liouville_volume_density(&omega_orbit(&o)) - w.determinant().abs().sqrt()).abs());
        liouville = liouville.max((liouville_volume_density(&omega_orbit(&o)) - orbit_density(&o)).abs());

        let r = random_radii(&mut rng, 4, 0.05);
        let ph: Vec<f64> = (0..3).map(|_| rng.random_range(0.0..TAU)).collect();
        let oc = OctantTorusCoords::interior(r.clone(), ph).unwrap();
        let lv = liouville_volume_density(&omega_octant(&oc).unwrap());
        liouville = liouville.max((lv - octant_torus_metric(&oc).unwrap().volume_density()).abs());
        liouville = liouville.max((lv - r[1] * r[2] * r[3]).abs());
    }
    outcome(&[("volume integral error", integral, 1e-10), ("density^2 vs det (rel)", det, 1e-8), ("Liouville vs metric density", liouville, 1e-8)])
}

fn criterion_10() -> Outcome {
    let star = (1.0 / 2f64.sqrt()).atan() / 2.0;
    let zero = extrinsic_curvature_trace(star).unwrap().abs();
    let sign_change = extrinsic_curvature_trace(star - 1e-9).unwrap() > 0.0 && extrinsic_curvature_trace(star + 1e-9).unwrap() < 0.0;
    let at_eighth = (extrinsic_curvature_trace(FRAC_PI_8).unwrap() + 4.0).abs();

    // Mean curvature from the oracle metric: tr(g⁻¹ ∂σ g) at equal σ and different orbit points.
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut spread = 0.0f64;
    for sigma in [0.2, FRAC_PI_8, 0.55] {
        let mut values = Vec::new();
        for _ in 0..5 {
            let x = random_orbit_point(&mut rng, Some(sigma));
            let metric_at = |s: f64| {
                let f = |y: &[f64]| orbit_vector(&[s, y[0], y[1], y[2], y[3], y[4]]);
                oracle_metric(&f, &x[1..], 1e-4)
            };
            let dg = (metric_at(sigma + 1e-3) - metric_at(sigma - 1e-3)) / 2e-3;
            values.push((metric_at(sigma).try_inverse().unwrap() * dg).trace());
        }
        let (lo, hi) = values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| (l.min(v), h.max(v)));
        spread = spread.max(hi - lo);
    }
    outcome(&[
        ("|K| at tan 2s = 1/sqrt2", if sign_change { zero } else { f64::INFINITY }, 1e-12),
        ("|K(pi/8) + 4|", at_eighth, 1e-12),
        ("mean curvature spread", spread, 1e-3),
    ])
}

fn criterion_11() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut lagrangian = 0.0f64;
    for _ in 0..50 {
        let x = [rng.random_range(0.0..TAU), rng.random_range(0.1..PI - 0.1), rng.random_range(0.0..TAU)];
        lagrangian = lagrangian.max(oracle_omega(&max_entangled_vector, &x, 1e-3).amax());
    }
    // Closedness with an independent cyclic-sum evaluation, plus the crate's own residual.
    let mut closed = 0.0f64;
    let mut rank_error = 0.0f64;
    for _ in 0..20 {
        let x = random_orbit_point(&mut rng, None);
        let o = coords(&x);
        let p = orbit_form_point(&o);
        closed = closed.max(closedness_residual(omega_orbit_field, &p, 1e-4));
        let h = 1e-5;
        let deriv = |i: usize| {
            let (mut a, mut b) = (p, p);
            a[i] += h;
            b[i] -= h;
            (omega_orbit_field(&a) - omega_orbit_field(&b)) / (2.0 * h)
        };
        let d: Vec<DMatrix<f64>> = (0..6).map(deriv).collect();
        for i in 0..6 {
            for j in i + 1..6 {
                for k in j + 1..6 {
                    closed = closed.max((d[i][(j, k)] + d[j][(k, i)] + d[k][(i, j)]).abs());
                }
            }
        }
        let r = random_radii(&mut rng, 4, 0.1);
        let q: Vec<f64> = r[1..].iter().copied().chain((0..3).map(|_| rng.random_range(0.0..TAU))).collect();
        closed = closed.max(closedness_residual(omega_octant_field, &q, 1e-4));

        let w = omega_orbit(&o).entries;
        let sub = DMatrix::from_fn(5, 5, |a, b| w[(a + 1, b + 1)]);
        let sv = sub.svd(false, false).singular_values;
        let rank = sv.iter().filter(|&&s| s > 1e-9 * sv.max()).count();
        rank_error = rank_error.max((rank as f64 - 4.0).abs());
    }
    outcome(&[("Lagrangian residual", lagrangian, 1e-8), ("closedness residual", closed, 1e-6), ("rank - 4", rank_error, 0.0)])
}

fn criterion_12() -> Outcome {
    let batch = sample_batch(42, 100_000).unwrap();
    let ks_sigma = ks(&batch.sigmas, |s| 1.0 - (2.0 * s).cos().powi(3));
    let ks_r = ks(&batch.bloch_radii, |r| r.clamp(0.0, 1.0).powi(3));
    let frac = batch.bloch_radii.iter().filter(|&&r| r < 0.5).count() as f64 / batch.count as f64;
    outcome(&[("KS sigma", ks_sigma, 1e-2), ("KS Bloch radius", ks_r, 1e-2), ("|P(r<1/2) - 1/8|", (frac - 0.125).abs(), 1e-2)])
}

fn criterion_13() -> Outcome {
    // Sign error in the cos τ dθ1 dθ2 cross term of the orbit metric.
    let bad_metric = |o: &OrbitCoords| {
        let mut g = orbit_metric(o);
        g.entries[(0, 2)] = -g.entries[(0, 2)];
        g.entries[(2, 0)] = -g.entries[(2, 0)];
        g
    };
    let orbit_report = run_orbits_with(&bad_metric, 42);
    let caught_metric = orbit_report.get("orbit_metric_pullback").map(|o| !o.passed).unwrap_or(false);
    let clean_metric = run_orbits_with(&orbit_metric, 42).get("orbit_metric_pullback").map(|o| o.passed).unwrap_or(false);

    // Sign error in the dσ∧dφ1 term of the 2-form.
    let bad_omega = |x: &[f64]| {
        let mut w = omega_orbit_field(x);
        w[(0, 3)] = -w[(0, 3)];
        w[(3, 0)] = -w[(3, 0)];
        w
    };
    let sym_report = run_symplectic_with(&bad_omega, 42);
    let caught_omega = sym_report.get("orbit_form_pullback").map(|o| !o.passed).unwrap_or(false);
    let clean_omega = run_symplectic_with(&omega_orbit_field, 42).get("orbit_form_pullback").map(|o| o.passed).unwrap_or(false);

    let flag = |b: bool| if b { 0.0 } else { 1.0 };
    outcome(&[
        ("metric mutant missed", flag(caught_metric), 0.0),
        ("metric baseline failed", flag(clean_metric), 0.0),
        ("form mutant missed", flag(caught_omega), 0.0),
        ("form baseline failed", flag(clean_omega), 0.0),
    ])
}

fn main() -> ExitCode {
    let criteria: [Criterion; 13] = [
        ("maximal Fubini-Study distance", criterion_1),
        ("octant metric against pullback", criterion_2),
        ("gnomonic straightness", criterion_3),
        ("torus area law and argmax", criterion_4),
        ("mutually unbiased bases", criterion_5),
        ("separable and maximally entangled geometry", criterion_6),
        ("spin-1 spheres", criterion_7),
        ("orbit metric", criterion_8),
        ("orbit volume and Liouville density", criterion_9),
        ("extrinsic curvature", criterion_10),
        ("symplectic form", criterion_11),
        ("Haar sampling distributions", criterion_12),
        ("mutation sanity", criterion_13),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        if !o.passed {
            failed += 1;
        }
        println!("criterion {:>2} {}: {} [{}]", i + 1, if o.passed { "PASS" } else { "FAIL" }, name, o.detail);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

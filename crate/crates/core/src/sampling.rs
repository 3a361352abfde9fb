//! Haar-random two-qubit states and distribution checks.
//!
//! Streams are ChaCha8 (`rand_chacha::ChaCha8Rng`). A batch is cut into chunks of
//! [`CHUNK`] samples and chunk `k` draws from the generator seeded with `seed` on stream
//! `k`, so a batch is a pure function of `(seed, count)` whatever the thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use num_complex::Complex64;

use crate::entanglement::schmidt_decompose;
use crate::state::ProjectiveState;
use crate::{Error, Result};

/// Samples per substream.
pub const CHUNK: usize = 4096;

/// Generator for substream `k` of `seed`.
pub fn substream(seed: u64, k: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k);
    rng
}

/// Unitarily invariant random state of dimension `dim`, from `2·dim` standard normals.
pub fn haar_state_dim<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ProjectiveState {
    loop {
        let amps: Vec<Complex64> =
            (0..dim).map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect();
        // A zero draw has probability zero; retry rather than fail.
        if let Ok(s) = ProjectiveState::new(&amps) {
            return s;
        }
    }
}

/// Haar-random two-qubit state.
pub fn haar_state<R: Rng + ?Sized>(rng: &mut R) -> ProjectiveState {
    haar_state_dim(rng, 4)
}

/// `count` Haar states, deterministic in `(seed, count)`.
pub fn haar_states(seed: u64, count: usize) -> Vec<ProjectiveState> {
    let chunks = count.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .flat_map_iter(|k| {
            let mut rng = substream(seed, k as u64);
            let n = CHUNK.min(count - k * CHUNK);
            (0..n).map(move |_| haar_state(&mut rng)).collect::<Vec<_>>()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleBatch {
    pub seed: u64,
    pub count: usize,
    pub sigmas: Vec<f64>,
    /// Bloch radii `cos 2σ` of the reduced states.
    pub bloch_radii: Vec<f64>,
}

pub fn sample_batch(seed: u64, count: usize) -> Result<SampleBatch> {
    if count == 0 {
        return Err(Error::EmptySample);
    }
    let sigmas = haar_states(seed, count)
        .par_iter()
        .map(|s| schmidt_decompose(s).map(|d| d.sigma))
        .collect::<Result<Vec<f64>>>()?;
    let bloch_radii = sigmas.iter().map(|s| (2.0 * s).cos().clamp(0.0, 1.0)).collect();
    Ok(SampleBatch { seed, count, sigmas, bloch_radii })
}

/// Kolmogorov–Smirnov statistic `sup |F_n − F|` of `samples` against `cdf`.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        d = d.max((i + 1) as f64 / n - f).max(f - i as f64 / n);
    }
    Ok(d)
}

/// Two-sample Kolmogorov–Smirnov statistic.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(d)
}

/// Schmidt angle with distribution function `1 − cos³2σ`, by inverse transform of `u ∈ [0, 1)`.
pub fn schmidt_quantile(u: f64) -> f64 {
    (1.0 - u).cbrt().clamp(-1.0, 1.0).acos() / 2.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbits::schmidt_cdf;
    use approx::assert_abs_diff_eq;

    #[test]
    fn fixed_seed_is_reproducible() {
        let a = haar_state(&mut substream(7, 0));
        let b = haar_state(&mut substream(7, 0));
        assert_eq!(a, b);
        assert_ne!(a, haar_state(&mut substream(7, 1)));
        assert_eq!(sample_batch(3, 5000).unwrap(), sample_batch(3, 5000).unwrap());
    }

    #[test]
    fn batch_does_not_depend_on_thread_count() {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let serial = pool.install(|| sample_batch(11, 9000).unwrap());
        assert_eq!(serial, sample_batch(11, 9000).unwrap());
    }

    #[test]
    fn single_sample_batch() {
        let b = sample_batch(1, 1).unwrap();
        assert_eq!(b.sigmas.len(), 1);
        assert!((0.0..=std::f64::consts::FRAC_PI_4).contains(&b.sigmas[0]));
        assert!(matches!(sample_batch(1, 0), Err(Error::EmptySample)));
    }

    #[test]
    fn ks_examples() {
        assert!(matches!(ks_statistic(&[], |x| x), Err(Error::EmptySample)));
        let d = ks_statistic(&[0.3; 50], |x| x).unwrap();
        assert_abs_diff_eq!(d, 0.7, epsilon = 1e-12);
        let n = 100_000;
        let mut rng = substream(5, 0);
        let u: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
        let sig: Vec<f64> = u.iter().map(|&u| schmidt_quantile(u)).collect();
        assert!(ks_statistic(&sig, |s| schmidt_cdf(s).unwrap()).unwrap() < 0.01);
        assert_eq!(ks_two_sample(&sig, &sig).unwrap(), 0.0);
        assert_abs_diff_eq!(ks_two_sample(&[0.0, 1.0], &[2.0, 3.0]).unwrap(), 1.0);
    }
}

//! Small dense helpers: 2×2 complex matrices, SU(2) exponentials, the Pfaffian.

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;

pub type CMatrix2 = Matrix2<Complex64>;

const I: Complex64 = Complex64::new(0.0, 1.0);

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `exp(-i a L_z)` with `L_z = σ_z / 2`.
pub fn exp_lz(a: f64) -> CMatrix2 {
    CMatrix2::new(Complex64::from_polar(1.0, -a / 2.0), re(0.0), re(0.0), Complex64::from_polar(1.0, a / 2.0))
}

/// `exp(-i a L_y)` with `L_y = σ_y / 2`.
pub fn exp_ly(a: f64) -> CMatrix2 {
    let (s, c) = (a / 2.0).sin_cos();
    CMatrix2::new(re(c), re(-s), re(s), re(c))
}

/// `exp(-i (a σ_x + b σ_y + c σ_z))`, a generic SU(2) element.
pub fn su2_from_vector(v: [f64; 3]) -> CMatrix2 {
    let angle = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    if angle == 0.0 {
        return CMatrix2::identity();
    }
    let (s, c) = angle.sin_cos();
    let (x, y, z) = (v[0] / angle, v[1] / angle, v[2] / angle);
    // cos θ 1 - i sin θ (n·σ)
    CMatrix2::new(
        re(c) - I * (s * z),
        -I * (s * x) - re(s * y),
        -I * (s * x) + re(s * y),
        re(c) + I * (s * z),
    )
}

/// SU(2) element from Euler angles, `e^{-iφ L_z} e^{-iθ L_y} e^{-iψ L_z}`.
pub fn su2_euler(phi: f64, theta: f64, psi: f64) -> CMatrix2 {
    exp_lz(phi) * exp_ly(theta) * exp_lz(psi)
}

/// `‖U U† - 1‖_F`.
pub fn unitarity_residual(u: &CMatrix2) -> f64 {
    (u * u.adjoint() - CMatrix2::identity()).norm()
}

/// Row-major flattening `(C00, C01, C10, C11)`.
pub fn flatten(c: &CMatrix2) -> Vec<Complex64> {
    vec![c[(0, 0)], c[(0, 1)], c[(1, 0)], c[(1, 1)]]
}

/// Pfaffian of an antisymmetric matrix of even order (expansion along the first row).
pub fn pfaffian(a: &DMatrix<f64>) -> f64 {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "pfaffian needs a square matrix");
    let idx: Vec<usize> = (0..n).collect();
    pfaffian_rec(a, &idx)
}

fn pfaffian_rec(a: &DMatrix<f64>, idx: &[usize]) -> f64 {
    match idx.len() {
        0 => 1.0,
        n if n % 2 == 1 => 0.0,
        _ => {
            let first = idx[0];
            let mut total = 0.0;
            for k in 1..idx.len() {
                let entry = a[(first, idx[k])];
                if entry == 0.0 {
                    continue;
                }
                let rest: Vec<usize> = idx[1..].iter().enumerate().filter(|(p, _)| p + 1 != k).map(|(_, &v)| v).collect();
                let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                total += sign * entry * pfaffian_rec(a, &rest);
            }
            total
        }
    }
}

//! Numeric checks at the archimedean places of the general family: the
//! second-order coefficient matrix at complex places and the uniform
//! elliptic bounds used to compare the perturbed Laplacian of N with the
//! pure one.

use crate::iwasawa::IwasawaError;
use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Matrix exponential by scaling and squaring with a Taylor core; the
/// inputs here are small and well-scaled.
pub fn mat_exp(a: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = a.nrows();
    let norm: f64 = a.iter().map(|z| z.norm()).fold(0.0, f64::max) * n as f64;
    let squarings = norm.log2().ceil().max(0.0) as u32 + 1;
    let scaled = a / Complex64::from(2f64.powi(squarings as i32));
    let mut term = DMatrix::identity(n, n);
    let mut sum = DMatrix::identity(n, n);
    for k in 1..24 {
        term = &term * &scaled / Complex64::from(k as f64);
        sum += &term;
    }
    let mut out = sum;
    for _ in 0..squarings {
        out = &out * &out;
    }
    out
}

/// Real/imaginary split of the Levi coefficients at a complex place and the
/// assembled second-order coefficient matrix
/// M_jk = sum_l (A_l^j A_l^k + B_l^j B_l^k) with A = Re(u h^{lj}),
/// B = Im(u h^{lj}). For h in the compact real form the matrix collapses to
/// Re(h^T h) = identity.
pub fn complex_place_coeffs(
    u: Complex64,
    h: &DMatrix<Complex64>,
    tol: f64,
) -> Result<DMatrix<f64>, IwasawaError> {
    let n = h.nrows();
    assert_eq!(h.ncols(), n);
    if (u.norm() - 1.0).abs() > tol {
        return Err(IwasawaError::NotOrthogonal((u.norm() - 1.0).abs()));
    }
    // numeric orthogonality check: det(h^T h - 1) and entrywise residual
    let hth = h.transpose() * h;
    let mut residual = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { 1.0 } else { 0.0 };
            residual[(i, j)] = (hth[(i, j)] - Complex64::from(target)).norm();
        }
    }
    let det = residual_det(&hth);
    let max_res = residual.iter().cloned().fold(0.0, f64::max);
    if det.norm() > tol || max_res > 1e-6 {
        return Err(IwasawaError::NotOrthogonal(max_res));
    }

    let a = |l: usize, j: usize| (u * h[(l, j)]).re;
    let b = |l: usize, j: usize| (u * h[(l, j)]).im;
    let mut m = DMatrix::zeros(n, n);
    for j in 0..n {
        for k in 0..n {
            let mut s = 0.0;
            for l in 0..n {
                s += a(l, j) * a(l, k) + b(l, j) * b(l, k);
            }
            m[(j, k)] = s;
        }
    }
    // the identity the derivation lands on: M = Re(h^T h)
    let mut dev = 0.0f64;
    for j in 0..n {
        for k in 0..n {
            dev = dev.max((m[(j, k)] - hth[(j, k)].re).abs());
        }
    }
    if dev > 1e-9 {
        return Err(IwasawaError::NotOrthogonal(dev));
    }
    Ok(m)
}

fn residual_det(hth: &DMatrix<Complex64>) -> Complex64 {
    let n = hth.nrows();
    let mut d = hth.clone();
    for i in 0..n {
        d[(i, i)] -= Complex64::from(1.0);
    }
    d.lu().determinant()
}

/// Orthogonally sampled coefficient matrices: exponentials of random real
/// skew matrices (complex-typed), which satisfy h^T h = 1 exactly, together
/// with random unit phases for u.
pub fn sample_orthogonal(seed: u64, n: usize, count: usize) -> Vec<(Complex64, DMatrix<Complex64>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut skew = DMatrix::<Complex64>::zeros(n, n);
            for i in 0..n {
                for j in (i + 1)..n {
                    let v: f64 = rng.gen_range(-1.5..1.5);
                    skew[(i, j)] = Complex64::from(v);
                    skew[(j, i)] = Complex64::from(-v);
                }
            }
            let h = mat_exp(&skew);
            let phase: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            (Complex64::from_polar(1.0, phase), h)
        })
        .collect()
}

/// Uniform two-sided elliptic bounds over a sample of symmetric positive
/// matrices: a = least eigenvalue seen, b = greatest; every sample then
/// satisfies a*I <= A <= b*I.
pub fn elliptic_bounds(samples: &[DMatrix<f64>]) -> Result<(f64, f64), IwasawaError> {
    assert!(!samples.is_empty(), "need at least one sample");
    let mut a = f64::INFINITY;
    let mut b = f64::NEG_INFINITY;
    for (idx, s) in samples.iter().enumerate() {
        let sym = (s + s.transpose()) * 0.5;
        let max_asym = (s - s.transpose()).iter().cloned().map(f64::abs).fold(0.0, f64::max);
        if max_asym > 1e-12 {
            return Err(IwasawaError::NotPositiveDefinite(idx, f64::NAN));
        }
        let eig = SymmetricEigen::new(sym);
        let lo = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = eig.eigenvalues.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if lo <= 0.0 {
            return Err(IwasawaError::NotPositiveDefinite(idx, lo));
        }
        a = a.min(lo);
        b = b.max(hi);
    }
    Ok((a, b))
}

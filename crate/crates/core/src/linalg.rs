//! Small dense linear-algebra helpers. Factorizations run in f64 through
//! nalgebra regardless of the solver scalar; they only back reference
//! computations (singular values, conjugates, spectra), not the solvers.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::scalar::Scalar;

pub(crate) fn to_f64_matrix<F: Scalar>(data: &[F], rows: usize, cols: usize) -> DMatrix<f64> {
    DMatrix::from_row_iterator(rows, cols, data.iter().map(|x| x.to_f64_lossy()))
}

/// Singular values in descending order, via dense SVD.
pub fn singular_values<F: Scalar>(data: &[F], rows: usize, cols: usize) -> Vec<f64> {
    let m = to_f64_matrix(data, rows, cols);
    let mut sv: Vec<f64> = m.svd(false, false).singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    sv
}

/// Largest singular value of a dense matrix.
pub fn sigma_max<F: Scalar>(data: &[F], rows: usize, cols: usize) -> f64 {
    singular_values(data, rows, cols).first().copied().unwrap_or(0.0)
}

/// Eigenvalue range (min, max) of a symmetric matrix.
pub fn symmetric_eigen_range(data: &[f64], dim: usize) -> (f64, f64) {
    let m = DMatrix::from_row_slice(dim, dim, data);
    let eigen = m.symmetric_eigen();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &lambda in eigen.eigenvalues.iter() {
        lo = lo.min(lambda);
        hi = hi.max(lambda);
    }
    (lo, hi)
}

/// Inverse of a symmetric positive-definite matrix, if it is one.
pub fn spd_inverse(data: &[f64], dim: usize) -> Option<Vec<f64>> {
    let m = DMatrix::from_row_slice(dim, dim, data);
    let inv = m.cholesky()?.inverse();
    Some(inv.row_iter().flat_map(|r| r.iter().copied().collect::<Vec<_>>()).collect())
}

/// Solve `A x = b` for square full-rank `A`.
pub fn solve_dense(a: &[f64], dim: usize, b: &[f64]) -> Option<Vec<f64>> {
    let m = DMatrix::from_row_slice(dim, dim, a);
    let rhs = DVector::from_row_slice(b);
    m.lu().solve(&rhs).map(|x| x.iter().copied().collect())
}

/// Result of the dominant-singular-triple power iteration.
pub(crate) struct DominantTriple<F: Scalar> {
    pub left: Vec<F>,
    pub right: Vec<F>,
    pub sigma: F,
    pub converged: bool,
}

/// Power iteration on G^T G with a deterministic seeded start vector.
pub(crate) fn dominant_singular_triple<F: Scalar>(
    data: &[F],
    rows: usize,
    cols: usize,
    max_iters: usize,
    tol: F,
    seed: u64,
) -> DominantTriple<F> {
    let frob: F = data.iter().map(|&x| x * x).sum();
    if frob == F::zero() || rows == 0 || cols == 0 {
        let mut left = vec![F::zero(); rows.max(1)];
        let mut right = vec![F::zero(); cols.max(1)];
        left[0] = F::one();
        right[0] = F::one();
        return DominantTriple { left, right, sigma: F::zero(), converged: true };
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<F> = (0..cols)
        .map(|_| F::cast(rng.random_range(-1.0..1.0)))
        .collect();
    normalize(&mut v);

    let mut sigma_sq_prev = F::zero();
    let mut converged = false;
    for _ in 0..max_iters {
        let w = mat_vec(data, rows, cols, &v); // G v
        let mut z = mat_t_vec(data, rows, cols, &w); // G^T G v
        let sigma_sq: F = v.iter().zip(z.iter()).map(|(&a, &b)| a * b).sum();
        let norm_z = normalize(&mut z);
        if norm_z == F::zero() {
            // v fell in the null space; restart from a fresh vector.
            v = (0..cols).map(|_| F::cast(rng.random_range(-1.0..1.0))).collect();
            normalize(&mut v);
            continue;
        }
        v = z;
        if sigma_sq > F::zero()
            && (sigma_sq - sigma_sq_prev).abs() <= tol * sigma_sq
        {
            converged = true;
            break;
        }
        sigma_sq_prev = sigma_sq;
    }

    let gv = mat_vec(data, rows, cols, &v);
    let sigma: F = gv.iter().map(|&x| x * x).sum::<F>().sqrt();
    let mut left = gv;
    if sigma > F::zero() {
        for x in left.iter_mut() {
            *x /= sigma;
        }
    } else {
        left = vec![F::zero(); rows];
        left[0] = F::one();
    }
    DominantTriple { left, right: v, sigma, converged }
}

fn normalize<F: Scalar>(v: &mut [F]) -> F {
    let norm: F = v.iter().map(|&x| x * x).sum::<F>().sqrt();
    if norm > F::zero() {
        for x in v.iter_mut() {
            *x /= norm;
        }
    }
    norm
}

fn mat_vec<F: Scalar>(data: &[F], rows: usize, cols: usize, v: &[F]) -> Vec<F> {
    let mut out = vec![F::zero(); rows];
    for (i, out_i) in out.iter_mut().enumerate() {
        let row = &data[i * cols..(i + 1) * cols];
        *out_i = row.iter().zip(v.iter()).map(|(&a, &b)| a * b).sum();
    }
    out
}

fn mat_t_vec<F: Scalar>(data: &[F], rows: usize, cols: usize, w: &[F]) -> Vec<F> {
    let mut out = vec![F::zero(); cols];
    for i in 0..rows {
        let row = &data[i * cols..(i + 1) * cols];
        for (j, &a) in row.iter().enumerate() {
            out[j] += a * w[i];
        }
    }
    out
}

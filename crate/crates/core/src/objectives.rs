//! Smooth objectives with gradients, and convex conjugates where available.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg;
use crate::point::Point;
use crate::scalar::Scalar;

/// A smooth objective: value, gradient, and optionally its convex conjugate
/// and a known gradient-Lipschitz constant.
pub trait Objective<F: Scalar> {
    fn value(&self, x: &Point<F>) -> F;
    fn gradient(&self, x: &Point<F>) -> Point<F>;

    /// Convex conjugate f*(u), when available in closed form.
    fn conjugate(&self, _u: &Point<F>) -> Option<F> {
        None
    }

    /// Known gradient-Lipschitz constant, for tests and the fixed-step baseline.
    fn lipschitz(&self) -> Option<F> {
        None
    }
}

impl<F: Scalar, O: Objective<F> + ?Sized> Objective<F> for &O {
    fn value(&self, x: &Point<F>) -> F {
        (**self).value(x)
    }
    fn gradient(&self, x: &Point<F>) -> Point<F> {
        (**self).gradient(x)
    }
    fn conjugate(&self, u: &Point<F>) -> Option<F> {
        (**self).conjugate(u)
    }
    fn lipschitz(&self) -> Option<F> {
        (**self).lipschitz()
    }
}

/// Numerically stable logistic loss log(1 + exp(-y z)) for labels y = +-1.
fn logistic_loss<F: Scalar>(z: F, y: F) -> F {
    let margin = y * z;
    let abs = margin.abs();
    // log1p(exp(-|m|)) + max(0, -m)
    (-abs).exp().ln_1p() + F::zero().max(-margin)
}

fn sigmoid<F: Scalar>(w: F) -> F {
    if w >= F::zero() {
        F::one() / (F::one() + (-w).exp())
    } else {
        let e = w.exp();
        e / (F::one() + e)
    }
}

/// l2-regularized logistic regression over a sparse design matrix:
/// f(x) = (1/n) sum_i log(1 + exp(-b_i a_i^T x)) + (lambda/2) ||x||^2.
#[derive(Debug, Clone)]
pub struct LogisticL2<F: Scalar> {
    rows: Vec<Vec<(usize, F)>>,
    labels: Vec<F>,
    lambda: F,
    dim: usize,
    lipschitz: F,
}

impl<F: Scalar> LogisticL2<F> {
    pub fn new(rows: Vec<Vec<(usize, F)>>, dim: usize, labels: Vec<F>, lambda: F) -> Result<Self> {
        if rows.len() != labels.len() {
            return Err(Error::InvalidInput(format!(
                "{} rows but {} labels",
                rows.len(),
                labels.len()
            )));
        }
        if !(lambda >= F::zero()) {
            return Err(Error::InvalidInput("lambda must be >= 0".into()));
        }
        for &y in &labels {
            if y != F::one() && y != -F::one() {
                return Err(Error::InvalidInput(format!("label {y} outside {{-1, +1}}")));
            }
        }
        for row in &rows {
            if row.iter().any(|&(j, _)| j >= dim) {
                return Err(Error::InvalidInput("feature index out of bounds".into()));
            }
        }
        let n = rows.len().max(1);
        let op_norm_sq = design_operator_norm_sq(&rows, dim);
        let lipschitz = F::cast(op_norm_sq / (4.0 * n as f64)) + lambda;
        Ok(LogisticL2 { rows, labels, lambda, dim, lipschitz })
    }

    pub fn n_samples(&self) -> usize {
        self.rows.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn margins(&self, x: &[F]) -> Vec<F> {
        self.rows
            .iter()
            .map(|row| row.iter().map(|&(j, a)| a * x[j]).sum())
            .collect()
    }
}

/// ||A||_op^2 by 50 power iterations on A^T A, in f64.
fn design_operator_norm_sq<F: Scalar>(rows: &[Vec<(usize, F)>], dim: usize) -> f64 {
    if rows.is_empty() || dim == 0 {
        return 0.0;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut v: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
    let mut sigma_sq = 0.0;
    for _ in 0..50 {
        let mut w = vec![0.0; rows.len()];
        for (i, row) in rows.iter().enumerate() {
            w[i] = row.iter().map(|&(j, a)| a.to_f64_lossy() * v[j]).sum();
        }
        let mut z = vec![0.0; dim];
        for (i, row) in rows.iter().enumerate() {
            for &(j, a) in row {
                z[j] += a.to_f64_lossy() * w[i];
            }
        }
        let norm = z.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        sigma_sq = norm; // ||A^T A v|| -> lambda_max(A^T A) as v converges
        for (vi, zi) in v.iter_mut().zip(z.iter()) {
            *vi = zi / norm;
        }
    }
    sigma_sq
}

impl<F: Scalar> Objective<F> for LogisticL2<F> {
    fn value(&self, x: &Point<F>) -> F {
        let xd = x.to_dense();
        let n = F::cast(self.rows.len().max(1) as f64);
        let loss: F = self
            .margins(&xd)
            .iter()
            .zip(self.labels.iter())
            .map(|(&z, &y)| logistic_loss(z, y))
            .sum();
        let reg = self.lambda * F::cast(0.5) * x.norm_sq();
        loss / n + reg
    }

    fn gradient(&self, x: &Point<F>) -> Point<F> {
        let xd = x.to_dense();
        let n = F::cast(self.rows.len().max(1) as f64);
        let mut grad = vec![F::zero(); self.dim];
        for ((row, &y), &z) in self.rows.iter().zip(self.labels.iter()).zip(self.margins(&xd).iter()) {
            let residual = -y * sigmoid(-y * z);
            for &(j, a) in row {
                grad[j] += a * residual / n;
            }
        }
        for (g, &xi) in grad.iter_mut().zip(xd.iter()) {
            *g += self.lambda * xi;
        }
        Point::Dense(grad)
    }

    fn lipschitz(&self) -> Option<F> {
        Some(self.lipschitz)
    }
}

/// Huber matrix regression over observed entries:
/// f(X) = (1/n) sum_{(i,j) in I} L_xi(A_ij - X_ij).
#[derive(Debug, Clone)]
pub struct HuberMatrix<F: Scalar> {
    observed: Vec<(usize, usize, F)>,
    rows: usize,
    cols: usize,
    xi: F,
}

impl<F: Scalar> HuberMatrix<F> {
    pub fn new(observed: Vec<(usize, usize, F)>, rows: usize, cols: usize, xi: F) -> Result<Self> {
        if !(xi > F::zero()) {
            return Err(Error::InvalidInput("xi must be > 0".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for &(i, j, _) in &observed {
            if i >= rows || j >= cols {
                return Err(Error::InvalidInput(format!(
                    "observed entry ({i}, {j}) outside {rows}x{cols}"
                )));
            }
            if !seen.insert((i, j)) {
                return Err(Error::InvalidInput(format!("duplicate observed entry ({i}, {j})")));
            }
        }
        Ok(HuberMatrix { observed, rows, cols, xi })
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    /// Quadratic within |a| <= xi, linear beyond.
    pub fn huber_loss(&self, a: F) -> F {
        let half = F::cast(0.5);
        if a.abs() <= self.xi {
            half * a * a
        } else {
            self.xi * (a.abs() - half * self.xi)
        }
    }
}

impl<F: Scalar> Objective<F> for HuberMatrix<F> {
    fn value(&self, x: &Point<F>) -> F {
        let data = x.to_dense();
        let n = F::cast(self.observed.len().max(1) as f64);
        self.observed
            .iter()
            .map(|&(i, j, rating)| self.huber_loss(rating - data[i * self.cols + j]))
            .sum::<F>()
            / n
    }

    fn gradient(&self, x: &Point<F>) -> Point<F> {
        let data = x.to_dense();
        let n = F::cast(self.observed.len().max(1) as f64);
        let mut grad = vec![F::zero(); self.rows * self.cols];
        for &(i, j, rating) in &self.observed {
            let a = rating - data[i * self.cols + j];
            grad[i * self.cols + j] = -a.max(-self.xi).min(self.xi) / n;
        }
        Point::Matrix { rows: self.rows, cols: self.cols, data: grad }
    }

    fn lipschitz(&self) -> Option<F> {
        Some(F::one() / F::cast(self.observed.len().max(1) as f64))
    }
}

/// Quadratic test objective f(x) = (1/2) x^T Q x - b^T x + c with exact
/// curvature bounds and, when Q is positive definite, a closed-form conjugate.
#[derive(Debug, Clone)]
pub struct Quadratic<F: Scalar> {
    q: Vec<F>,
    b: Vec<F>,
    dim: usize,
    constant: F,
    inverse: Option<Vec<f64>>,
    lipschitz: F,
    strong_convexity: F,
}

impl<F: Scalar> Quadratic<F> {
    pub fn new(q: Vec<F>, b: Vec<F>) -> Result<Self> {
        Self::with_constant(q, b, F::zero())
    }

    pub fn with_constant(q: Vec<F>, b: Vec<F>, constant: F) -> Result<Self> {
        let dim = b.len();
        if q.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                left: format!("{dim}-dim b"),
                right: format!("{} matrix entries", q.len()),
            });
        }
        let scale = q.iter().fold(F::one(), |acc, &x| acc.max(x.abs()));
        for i in 0..dim {
            for j in (i + 1)..dim {
                if (q[i * dim + j] - q[j * dim + i]).abs() > F::cast(1e-10) * scale {
                    return Err(Error::InvalidInput("Q must be symmetric".into()));
                }
            }
        }
        let qf: Vec<f64> = q.iter().map(|x| x.to_f64_lossy()).collect();
        let (mu, l_max) = if dim > 0 {
            linalg::symmetric_eigen_range(&qf, dim)
        } else {
            (0.0, 0.0)
        };
        let inverse = if dim > 0 { linalg::spd_inverse(&qf, dim) } else { None };
        Ok(Quadratic {
            q,
            b,
            dim,
            constant,
            inverse,
            lipschitz: F::cast(l_max),
            strong_convexity: F::cast(mu),
        })
    }

    /// Least squares (1/2)||A x - y||^2 as Q = A^T A, b = A^T y, c = ||y||^2/2.
    pub fn least_squares(a: &[F], rows: usize, cols: usize, y: &[F]) -> Result<Self> {
        if a.len() != rows * cols || y.len() != rows {
            return Err(Error::DimensionMismatch {
                left: format!("{rows}x{cols}"),
                right: format!("{} data, {} targets", a.len(), y.len()),
            });
        }
        let mut q = vec![F::zero(); cols * cols];
        for r in 0..rows {
            let row = &a[r * cols..(r + 1) * cols];
            for i in 0..cols {
                for j in 0..cols {
                    q[i * cols + j] += row[i] * row[j];
                }
            }
        }
        let mut b = vec![F::zero(); cols];
        for (r, &yr) in y.iter().enumerate() {
            for (i, bi) in b.iter_mut().enumerate() {
                *bi += a[r * cols + i] * yr;
            }
        }
        let constant = F::cast(0.5) * y.iter().map(|&v| v * v).sum();
        Self::with_constant(q, b, constant)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Row-major Q.
    pub fn matrix(&self) -> &[F] {
        &self.q
    }

    /// Linear term b.
    pub fn linear(&self) -> &[F] {
        &self.b
    }

    /// Smallest eigenvalue of Q.
    pub fn strong_convexity(&self) -> F {
        self.strong_convexity
    }

    /// Unconstrained minimizer Q^{-1} b, when Q is positive definite.
    pub fn minimizer(&self) -> Option<Vec<F>> {
        let inv = self.inverse.as_ref()?;
        let bf: Vec<f64> = self.b.iter().map(|x| x.to_f64_lossy()).collect();
        Some(
            (0..self.dim)
                .map(|i| {
                    F::cast(
                        (0..self.dim)
                            .map(|j| inv[i * self.dim + j] * bf[j])
                            .sum::<f64>(),
                    )
                })
                .collect(),
        )
    }

    fn q_times(&self, x: &[F]) -> Vec<F> {
        (0..self.dim)
            .map(|i| {
                self.q[i * self.dim..(i + 1) * self.dim]
                    .iter()
                    .zip(x.iter())
                    .map(|(&a, &b)| a * b)
                    .sum()
            })
            .collect()
    }
}

impl<F: Scalar> Objective<F> for Quadratic<F> {
    fn value(&self, x: &Point<F>) -> F {
        let xd = x.to_dense();
        let qx = self.q_times(&xd);
        let quad: F = xd.iter().zip(qx.iter()).map(|(&a, &b)| a * b).sum();
        let lin: F = xd.iter().zip(self.b.iter()).map(|(&a, &b)| a * b).sum();
        F::cast(0.5) * quad - lin + self.constant
    }

    fn gradient(&self, x: &Point<F>) -> Point<F> {
        let xd = x.to_dense();
        let qx = self.q_times(&xd);
        Point::Dense(
            qx.iter()
                .zip(self.b.iter())
                .map(|(&a, &b)| a - b)
                .collect(),
        )
    }

    fn conjugate(&self, u: &Point<F>) -> Option<F> {
        let inv = self.inverse.as_ref()?;
        let ud = u.to_dense();
        if ud.len() != self.dim {
            return None;
        }
        let shifted: Vec<f64> = ud
            .iter()
            .zip(self.b.iter())
            .map(|(&ui, &bi)| (ui + bi).to_f64_lossy())
            .collect();
        let mut quad = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                quad += shifted[i] * inv[i * self.dim + j] * shifted[j];
            }
        }
        Some(F::cast(0.5 * quad) - self.constant)
    }

    fn lipschitz(&self) -> Option<F> {
        Some(self.lipschitz)
    }
}

//! Points of the ambient space: dense vectors, sparse vectors and dense
//! matrices. Matrix-shaped points expose a flattened view so inner products
//! and norms do not care about the shape.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A point (iterate, gradient or direction) of the problem space.
#[derive(Debug, Clone, PartialEq)]
pub enum Point<F: Scalar> {
    /// Dense vector.
    Dense(Vec<F>),
    /// Sparse vector with strictly ascending indices.
    Sparse { dim: usize, entries: Vec<(usize, F)> },
    /// Dense row-major matrix.
    Matrix { rows: usize, cols: usize, data: Vec<F> },
}

impl<F: Scalar> Point<F> {
    pub fn dense(values: Vec<F>) -> Self {
        Point::Dense(values)
    }

    pub fn zeros(dim: usize) -> Self {
        Point::Dense(vec![F::zero(); dim])
    }

    /// Sparse vector; entries must be in-bounds with strictly ascending indices.
    pub fn sparse(dim: usize, entries: Vec<(usize, F)>) -> Result<Self> {
        for window in entries.windows(2) {
            if window[1].0 <= window[0].0 {
                return Err(Error::InvalidInput(
                    "sparse entries must have strictly ascending indices".into(),
                ));
            }
        }
        if let Some(&(last, _)) = entries.last() {
            if last >= dim {
                return Err(Error::InvalidInput(format!(
                    "sparse index {last} out of bounds for dim {dim}"
                )));
            }
        }
        Ok(Point::Sparse { dim, entries })
    }

    pub fn matrix(rows: usize, cols: usize, data: Vec<F>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                left: format!("{rows}x{cols}"),
                right: format!("{} entries", data.len()),
            });
        }
        Ok(Point::Matrix { rows, cols, data })
    }

    pub fn zero_matrix(rows: usize, cols: usize) -> Self {
        Point::Matrix { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    /// Flattened length.
    pub fn dim(&self) -> usize {
        match self {
            Point::Dense(v) => v.len(),
            Point::Sparse { dim, .. } => *dim,
            Point::Matrix { rows, cols, .. } => rows * cols,
        }
    }

    pub fn is_matrix(&self) -> bool {
        matches!(self, Point::Matrix { .. })
    }

    pub fn matrix_shape(&self) -> Option<(usize, usize)> {
        match self {
            Point::Matrix { rows, cols, .. } => Some((*rows, *cols)),
            _ => None,
        }
    }

    /// All entries finite (no NaN/Inf).
    pub fn is_finite(&self) -> bool {
        match self {
            Point::Dense(v) => v.iter().all(|x| x.is_finite()),
            Point::Sparse { entries, .. } => entries.iter().all(|(_, x)| x.is_finite()),
            Point::Matrix { data, .. } => data.iter().all(|x| x.is_finite()),
        }
    }

    /// Flattened dense copy.
    pub fn to_dense(&self) -> Vec<F> {
        match self {
            Point::Dense(v) => v.clone(),
            Point::Sparse { dim, entries } => {
                let mut out = vec![F::zero(); *dim];
                for &(i, x) in entries {
                    out[i] = x;
                }
                out
            }
            Point::Matrix { data, .. } => data.clone(),
        }
    }

    fn check_compatible(&self, other: &Point<F>) -> Result<()> {
        if let (Some((r, c)), Some((r2, c2))) = (self.matrix_shape(), other.matrix_shape()) {
            if (r, c) != (r2, c2) {
                return Err(Error::DimensionMismatch {
                    left: format!("{r}x{c}"),
                    right: format!("{r2}x{c2}"),
                });
            }
            return Ok(());
        }
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim().to_string(),
                right: other.dim().to_string(),
            });
        }
        Ok(())
    }

    /// Euclidean inner product over the flattened view.
    pub fn inner(&self, other: &Point<F>) -> Result<F> {
        self.check_compatible(other)?;
        let value = match (self, other) {
            (Point::Sparse { entries, .. }, b) => sparse_dot(entries, b),
            (a, Point::Sparse { entries, .. }) => sparse_dot(entries, a),
            (a, b) => {
                let (a, b) = (a.flat(), b.flat());
                a.iter().zip(b.iter()).map(|(&x, &y)| x * y).sum()
            }
        };
        Ok(value)
    }

    /// Squared Euclidean norm.
    pub fn norm_sq(&self) -> F {
        match self {
            Point::Sparse { entries, .. } => entries.iter().map(|&(_, x)| x * x).sum(),
            other => other.flat().iter().map(|&x| x * x).sum(),
        }
    }

    pub fn norm(&self) -> F {
        self.norm_sq().sqrt()
    }

    pub fn inf_norm(&self) -> F {
        match self {
            Point::Sparse { entries, .. } => entries
                .iter()
                .fold(F::zero(), |acc, &(_, x)| acc.max(x.abs())),
            other => other.flat().iter().fold(F::zero(), |acc, &x| acc.max(x.abs())),
        }
    }

    fn flat(&self) -> &[F] {
        match self {
            Point::Dense(v) => v,
            Point::Matrix { data, .. } => data,
            Point::Sparse { .. } => unreachable!("sparse points have no flat slice"),
        }
    }

    fn flat_mut(&mut self) -> &mut [F] {
        match self {
            Point::Dense(v) => v,
            Point::Matrix { data, .. } => data,
            Point::Sparse { .. } => unreachable!("densify before mutating"),
        }
    }

    fn densify(&mut self) {
        if let Point::Sparse { dim, entries } = self {
            let mut out = vec![F::zero(); *dim];
            for &(i, x) in entries.iter() {
                out[i] = x;
            }
            *self = Point::Dense(out);
        }
    }

    /// `self += alpha * other`, densifying a sparse receiver.
    pub fn add_scaled(&mut self, alpha: F, other: &Point<F>) -> Result<()> {
        self.check_compatible(other)?;
        self.densify();
        match other {
            Point::Sparse { entries, .. } => {
                let flat = self.flat_mut();
                for &(i, x) in entries {
                    flat[i] += alpha * x;
                }
            }
            other => {
                let src = other.flat();
                for (dst, &x) in self.flat_mut().iter_mut().zip(src.iter()) {
                    *dst += alpha * x;
                }
            }
        }
        Ok(())
    }

    pub fn scale(&mut self, alpha: F) {
        match self {
            Point::Sparse { entries, .. } => {
                for (_, x) in entries.iter_mut() {
                    *x *= alpha;
                }
            }
            other => {
                for x in other.flat_mut() {
                    *x *= alpha;
                }
            }
        }
    }

    /// `self - other` as a new point (dense or matrix shaped).
    pub fn sub(&self, other: &Point<F>) -> Result<Point<F>> {
        self.check_compatible(other)?;
        let mut out = if self.is_matrix() || other.is_matrix() {
            let (rows, cols) = self
                .matrix_shape()
                .or_else(|| other.matrix_shape())
                .expect("one side is a matrix");
            Point::matrix(rows, cols, self.to_dense())?
        } else {
            Point::Dense(self.to_dense())
        };
        out.add_scaled(-F::one(), other)?;
        Ok(out)
    }
}

fn sparse_dot<F: Scalar>(entries: &[(usize, F)], other: &Point<F>) -> F {
    match other {
        Point::Sparse { entries: rhs, .. } => {
            let mut total = F::zero();
            let (mut i, mut j) = (0usize, 0usize);
            while i < entries.len() && j < rhs.len() {
                match entries[i].0.cmp(&rhs[j].0) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => {
                        total += entries[i].1 * rhs[j].1;
                        i += 1;
                        j += 1;
                    }
                }
            }
            total
        }
        other => {
            let flat = other.flat();
            entries.iter().map(|&(i, x)| x * flat[i]).sum()
        }
    }
}

/// Standard Euclidean inner product over the flattened view.
pub fn inner_product<F: Scalar>(a: &Point<F>, b: &Point<F>) -> Result<F> {
    a.inner(b)
}

//! Atoms: extreme points of the constraint set or dictionary elements.

use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};
use crate::point::Point;
use crate::scalar::Scalar;

/// Orientation of a signed basis vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn factor<F: Scalar>(self) -> F {
        match self {
            Sign::Plus => F::one(),
            Sign::Minus => -F::one(),
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

static RANK_ONE_IDS: AtomicU64 = AtomicU64::new(0);

/// An atom in one of three concrete shapes.
#[derive(Debug, Clone)]
pub enum Atom<F: Scalar> {
    /// `scale * sign * e_index`.
    SignedBasis { index: usize, sign: Sign, scale: F },
    /// `scale * left * right^T` with unit-norm factors. Carries a unique
    /// token so two rank-one atoms never compare equal (sign/rotation
    /// ambiguity of singular vectors makes equality ill-posed).
    RankOne { left: Vec<F>, right: Vec<F>, scale: F, token: u64 },
    /// An explicit dense vector.
    Dense(Vec<F>),
}

/// Canonical hashable identity used to key active sets.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AtomId {
    SignedBasis { index: usize, sign: Sign },
    Dense(Vec<u64>),
    RankOne(u64),
}

impl<F: Scalar> Atom<F> {
    pub fn signed_basis(index: usize, sign: Sign, scale: F) -> Result<Self> {
        if !(scale > F::zero()) {
            return Err(Error::InvalidInput("atom scale must be positive".into()));
        }
        Ok(Atom::SignedBasis { index, sign, scale })
    }

    /// Rank-one atom; factors must be unit vectors within 1e-10.
    pub fn rank_one(left: Vec<F>, right: Vec<F>, scale: F) -> Result<Self> {
        if !(scale > F::zero()) {
            return Err(Error::InvalidInput("atom scale must be positive".into()));
        }
        let tol = F::cast(1e-10);
        for (name, v) in [("left", &left), ("right", &right)] {
            let norm: F = v.iter().map(|&x| x * x).sum::<F>().sqrt();
            if (norm - F::one()).abs() > tol {
                return Err(Error::InvalidInput(format!(
                    "{name} factor of rank-one atom is not unit norm (|{norm}| - 1 > 1e-10)"
                )));
            }
        }
        let token = RANK_ONE_IDS.fetch_add(1, Ordering::Relaxed);
        Ok(Atom::RankOne { left, right, scale, token })
    }

    pub fn dense(values: Vec<F>) -> Self {
        Atom::Dense(values)
    }

    /// Identity for active-set keying. Signed-basis atoms are keyed by
    /// (index, sign) so a re-found vertex merges weights; dense atoms by
    /// exact entries; rank-one atoms by their unique token.
    pub fn id(&self) -> AtomId {
        match self {
            Atom::SignedBasis { index, sign, .. } => AtomId::SignedBasis { index: *index, sign: *sign },
            Atom::Dense(values) => {
                AtomId::Dense(values.iter().map(|x| x.to_f64_lossy().to_bits()).collect())
            }
            Atom::RankOne { token, .. } => AtomId::RankOne(*token),
        }
    }

    pub fn is_rank_one(&self) -> bool {
        matches!(self, Atom::RankOne { .. })
    }

    /// Flip the atom's orientation (used to symmetrize dictionaries).
    pub fn negated(&self) -> Result<Atom<F>> {
        match self {
            Atom::SignedBasis { index, sign, scale } => Ok(Atom::SignedBasis {
                index: *index,
                sign: sign.flip(),
                scale: *scale,
            }),
            Atom::Dense(values) => Ok(Atom::Dense(values.iter().map(|&x| -x).collect())),
            Atom::RankOne { left, right, scale, .. } => Atom::rank_one(
                left.iter().map(|&x| -x).collect(),
                right.clone(),
                *scale,
            ),
        }
    }

    /// Materialize as a point. `dim` is the ambient vector dimension for
    /// signed-basis atoms and is ignored by the other shapes.
    pub fn materialize(&self, dim: usize) -> Result<Point<F>> {
        match self {
            Atom::SignedBasis { index, sign, scale } => {
                Point::sparse(dim, vec![(*index, sign.factor::<F>() * *scale)])
            }
            Atom::RankOne { left, right, scale, .. } => {
                let (rows, cols) = (left.len(), right.len());
                let mut data = Vec::with_capacity(rows * cols);
                for &u in left {
                    for &v in right {
                        data.push(*scale * u * v);
                    }
                }
                Point::matrix(rows, cols, data)
            }
            Atom::Dense(values) => Ok(Point::Dense(values.clone())),
        }
    }
}

/// Spec-level alias for [`Atom::materialize`].
pub fn materialize<F: Scalar>(atom: &Atom<F>, dim: usize) -> Result<Point<F>> {
    atom.materialize(dim)
}

//! Linear minimization oracles over constraint sets, the away-atom oracle
//! over active sets, and support functions for dual-gap certificates.

use crate::active_set::ActiveSet;
use crate::atom::{Atom, AtomId, Sign};
use crate::error::{Error, Result};
use crate::linalg;
use crate::point::Point;
use crate::scalar::Scalar;

/// Matrices above this size skip dense-SVD support evaluation.
pub const DENSE_SVD_LIMIT: usize = 64;

/// Answer of a linear minimization oracle.
#[derive(Debug, Clone)]
pub struct LmoAnswer<F: Scalar> {
    pub atom: Atom<F>,
    /// Inner product <grad, atom> at the returned atom.
    pub value: F,
    /// Quality delta attributed to this answer (1 = exact).
    pub quality: F,
    /// False when an iterative oracle could not certify its answer.
    pub quality_verified: bool,
}

/// A linear minimization oracle over some atom set. `solve` approximately
/// minimizes `<grad, s>`; `x` is the current iterate, used by approximate
/// oracles whose quality contract is relative to it.
pub trait LinearOracle<F: Scalar> {
    fn solve(&self, grad: &Point<F>, x: &Point<F>) -> Result<LmoAnswer<F>>;

    /// Flattened dimension of gradients this oracle consumes.
    fn dim(&self) -> usize;

    /// Deterministic atom used as the starting iterate.
    fn initial_atom(&self) -> Atom<F>;

    /// Nominal quality delta of this oracle.
    fn quality(&self) -> F {
        F::one()
    }

    /// Support function of the underlying feasible set, when computable.
    fn support(&self, _u: &Point<F>) -> Option<F> {
        None
    }
}

/// The scaled l1 ball: vertices are +-radius e_i. The oracle picks the
/// largest-magnitude gradient entry, ties broken by lowest index.
#[derive(Debug, Clone)]
pub struct L1Ball<F: Scalar> {
    dim: usize,
    radius: F,
}

impl<F: Scalar> L1Ball<F> {
    pub fn new(dim: usize, radius: F) -> Result<Self> {
        if !(radius > F::zero()) {
            return Err(Error::InvalidInput("l1 radius must be > 0".into()));
        }
        Ok(L1Ball { dim, radius })
    }

    pub fn radius(&self) -> F {
        self.radius
    }
}

impl<F: Scalar> LinearOracle<F> for L1Ball<F> {
    fn solve(&self, grad: &Point<F>, _x: &Point<F>) -> Result<LmoAnswer<F>> {
        let g = grad.to_dense();
        if g.len() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim.to_string(),
                right: g.len().to_string(),
            });
        }
        let mut best = 0usize;
        for (i, gi) in g.iter().enumerate() {
            if gi.abs() > g[best].abs() {
                best = i;
            }
        }
        let sign = if g[best] > F::zero() { Sign::Minus } else { Sign::Plus };
        let atom = Atom::signed_basis(best, sign, self.radius)?;
        let value = sign.factor::<F>() * self.radius * g[best];
        Ok(LmoAnswer { atom, value, quality: F::one(), quality_verified: true })
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn initial_atom(&self) -> Atom<F> {
        Atom::signed_basis(0, Sign::Plus, self.radius).expect("radius validated")
    }

    fn support(&self, u: &Point<F>) -> Option<F> {
        Some(self.radius * u.inf_norm())
    }
}

/// The probability simplex: vertices are the unit basis vectors.
#[derive(Debug, Clone)]
pub struct Simplex {
    dim: usize,
}

impl Simplex {
    pub fn new(dim: usize) -> Self {
        Simplex { dim }
    }
}

impl<F: Scalar> LinearOracle<F> for Simplex {
    fn solve(&self, grad: &Point<F>, _x: &Point<F>) -> Result<LmoAnswer<F>> {
        let g = grad.to_dense();
        if g.len() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim.to_string(),
                right: g.len().to_string(),
            });
        }
        let mut best = 0usize;
        for (i, gi) in g.iter().enumerate() {
            if *gi < g[best] {
                best = i;
            }
        }
        let atom = Atom::signed_basis(best, Sign::Plus, F::one())?;
        Ok(LmoAnswer { atom, value: g[best], quality: F::one(), quality_verified: true })
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn initial_atom(&self) -> Atom<F> {
        Atom::signed_basis(0, Sign::Plus, F::one()).expect("unit scale")
    }

    fn support(&self, u: &Point<F>) -> Option<F> {
        u.to_dense().into_iter().reduce(|a, b| a.max(b))
    }
}

/// The nuclear-norm ball of the given radius. The oracle runs power
/// iteration on G^T G from a seeded start vector and returns the rank-one
/// atom -radius * u1 v1^T built from the dominant singular pair.
#[derive(Debug, Clone)]
pub struct NuclearBall<F: Scalar> {
    rows: usize,
    cols: usize,
    radius: F,
    power_iters: usize,
    tol: F,
    seed: u64,
    nominal_quality: F,
    /// Test mode: report the measured quality ratio against a dense SVD
    /// reference (matrices up to DENSE_SVD_LIMIT only).
    pub report_measured_quality: bool,
}

impl<F: Scalar> NuclearBall<F> {
    pub fn new(rows: usize, cols: usize, radius: F, power_iters: usize, tol: F, seed: u64) -> Result<Self> {
        if !(radius > F::zero()) {
            return Err(Error::InvalidInput("nuclear radius must be > 0".into()));
        }
        Ok(NuclearBall {
            rows,
            cols,
            radius,
            power_iters,
            tol,
            seed,
            nominal_quality: F::one(),
            report_measured_quality: false,
        })
    }

    pub fn with_nominal_quality(mut self, delta: F) -> Self {
        self.nominal_quality = delta;
        self
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }
}

impl<F: Scalar> LinearOracle<F> for NuclearBall<F> {
    fn solve(&self, grad: &Point<F>, _x: &Point<F>) -> Result<LmoAnswer<F>> {
        let Some((rows, cols)) = grad.matrix_shape() else {
            return Err(Error::DimensionMismatch {
                left: format!("{}x{} matrix", self.rows, self.cols),
                right: "non-matrix gradient".into(),
            });
        };
        if (rows, cols) != (self.rows, self.cols) {
            return Err(Error::DimensionMismatch {
                left: format!("{}x{}", self.rows, self.cols),
                right: format!("{rows}x{cols}"),
            });
        }
        let data = grad.to_dense();
        let triple = linalg::dominant_singular_triple(
            &data,
            rows,
            cols,
            self.power_iters,
            self.tol,
            self.seed,
        );
        let left: Vec<F> = triple.left.iter().map(|&x| -x).collect();
        let atom = if triple.sigma > F::zero() {
            Atom::rank_one(left, triple.right, self.radius)?
        } else {
            // Zero gradient: any unit pair works.
            let mut u = vec![F::zero(); rows];
            let mut v = vec![F::zero(); cols];
            u[0] = -F::one();
            v[0] = F::one();
            Atom::rank_one(u, v, self.radius)?
        };
        let value = grad.inner(&atom.materialize(0)?)?;
        let quality = if self.report_measured_quality && rows.max(cols) <= DENSE_SVD_LIMIT {
            let sigma_ref = F::cast(linalg::sigma_max(&data, rows, cols));
            if sigma_ref > F::zero() {
                (value.abs() / (self.radius * sigma_ref)).min(F::one())
            } else {
                F::one()
            }
        } else {
            self.nominal_quality
        };
        Ok(LmoAnswer { atom, value, quality, quality_verified: triple.converged })
    }

    fn dim(&self) -> usize {
        self.rows * self.cols
    }

    fn initial_atom(&self) -> Atom<F> {
        let mut u = vec![F::zero(); self.rows];
        let mut v = vec![F::zero(); self.cols];
        u[0] = -F::one();
        v[0] = F::one();
        Atom::rank_one(u, v, self.radius).expect("unit pair")
    }

    fn quality(&self) -> F {
        self.nominal_quality
    }

    fn support(&self, u: &Point<F>) -> Option<F> {
        let (rows, cols) = u.matrix_shape()?;
        if rows.max(cols) > DENSE_SVD_LIMIT {
            return None;
        }
        let sigma = linalg::sigma_max(&u.to_dense(), rows, cols);
        Some(self.radius * F::cast(sigma))
    }
}

/// A finite atom dictionary, optionally symmetrized (B = A union -A) for
/// matching pursuit. Ties go to the earliest atom, positive orientation first.
#[derive(Debug, Clone)]
pub struct FiniteAtomSet<F: Scalar> {
    atoms: Vec<Atom<F>>,
    dim: usize,
    symmetrize: bool,
}

impl<F: Scalar> FiniteAtomSet<F> {
    pub fn new(atoms: Vec<Atom<F>>, dim: usize) -> Result<Self> {
        Self::build(atoms, dim, false)
    }

    /// Dictionary extended with the negation of every atom.
    pub fn symmetrized(atoms: Vec<Atom<F>>, dim: usize) -> Result<Self> {
        Self::build(atoms, dim, true)
    }

    fn build(atoms: Vec<Atom<F>>, dim: usize, symmetrize: bool) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidInput("atom set must be non-empty".into()));
        }
        Ok(FiniteAtomSet { atoms, dim, symmetrize })
    }

    pub fn atoms(&self) -> &[Atom<F>] {
        &self.atoms
    }
}

impl<F: Scalar> LinearOracle<F> for FiniteAtomSet<F> {
    fn solve(&self, grad: &Point<F>, _x: &Point<F>) -> Result<LmoAnswer<F>> {
        let mut best: Option<(F, Atom<F>)> = None;
        for atom in &self.atoms {
            let ip = grad.inner(&atom.materialize(self.dim)?)?;
            let candidates: &[(F, bool)] = if self.symmetrize {
                &[(ip, false), (-ip, true)]
            } else {
                &[(ip, false)]
            };
            for &(value, negate) in candidates {
                if best.as_ref().is_none_or(|(b, _)| value < *b) {
                    let chosen = if negate { atom.negated()? } else { atom.clone() };
                    best = Some((value, chosen));
                }
            }
        }
        let (value, atom) = best.expect("non-empty atom set");
        Ok(LmoAnswer { atom, value, quality: F::one(), quality_verified: true })
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn initial_atom(&self) -> Atom<F> {
        self.atoms[0].clone()
    }

    fn support(&self, u: &Point<F>) -> Option<F> {
        let mut best: Option<F> = None;
        for atom in &self.atoms {
            let ip = u.inner(&atom.materialize(self.dim).ok()?).ok()?;
            let val = if self.symmetrize { ip.abs() } else { ip };
            best = Some(best.map_or(val, |b: F| b.max(val)));
        }
        best
    }
}

/// Wrapper that degrades an exact oracle to exactly quality delta by mixing
/// the answer with the current iterate: s' = delta s + (1 - delta) x, so that
/// <g, s' - x> = delta <g, s - x>.
#[derive(Debug, Clone)]
pub struct DegradedLmo<F: Scalar, L> {
    inner: L,
    delta: F,
}

impl<F: Scalar, L: LinearOracle<F>> DegradedLmo<F, L> {
    pub fn new(inner: L, delta: F) -> Result<Self> {
        if !(delta > F::zero() && delta <= F::one()) {
            return Err(Error::InvalidConfig("delta must be in (0, 1]".into()));
        }
        Ok(DegradedLmo { inner, delta })
    }
}

impl<F: Scalar, L: LinearOracle<F>> LinearOracle<F> for DegradedLmo<F, L> {
    fn solve(&self, grad: &Point<F>, x: &Point<F>) -> Result<LmoAnswer<F>> {
        let base = self.inner.solve(grad, x)?;
        let mut blend = base.atom.materialize(self.inner.dim())?;
        blend.scale(self.delta);
        blend.add_scaled(F::one() - self.delta, x)?;
        let value = grad.inner(&blend)?;
        let atom = Atom::dense(blend.to_dense());
        Ok(LmoAnswer { atom, value, quality: self.delta, quality_verified: base.quality_verified })
    }

    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn initial_atom(&self) -> Atom<F> {
        self.inner.initial_atom()
    }

    fn quality(&self) -> F {
        self.delta
    }

    fn support(&self, u: &Point<F>) -> Option<F> {
        self.inner.support(u)
    }
}

/// Answer of the away oracle over the active set.
#[derive(Debug, Clone)]
pub struct AwayAnswer<F: Scalar> {
    pub id: AtomId,
    pub atom: Atom<F>,
    /// <grad, v> at the selected atom.
    pub value: F,
    pub weight: F,
}

/// Atom of the active set that correlates the most with the gradient
/// (the steepest ascent atom). Ties break by atom-id order.
pub fn away_oracle<F: Scalar>(set: &ActiveSet<F>, grad: &Point<F>) -> Result<AwayAnswer<F>> {
    let dim = set.iterate().dim();
    let mut best: Option<AwayAnswer<F>> = None;
    for (id, atom, weight) in set.iter() {
        let value = grad.inner(&atom.materialize(dim)?)?;
        if best.as_ref().is_none_or(|b| value > b.value) {
            best = Some(AwayAnswer { id: id.clone(), atom: atom.clone(), value, weight });
        }
    }
    best.ok_or(Error::EmptyActiveSet)
}

/// Constraint-set descriptor for support-function evaluation.
#[derive(Debug, Clone)]
pub enum ConstraintSet<F: Scalar> {
    L1Ball { radius: F },
    Simplex,
    NuclearBall { radius: F },
}

/// Support function sup{<u, a> : a in the set}. Nuclear balls are limited
/// to matrices of side at most DENSE_SVD_LIMIT.
pub fn support_function<F: Scalar>(set: &ConstraintSet<F>, u: &Point<F>) -> Result<F> {
    match set {
        ConstraintSet::L1Ball { radius } => Ok(*radius * u.inf_norm()),
        ConstraintSet::Simplex => {
            let g = u.to_dense();
            g.into_iter()
                .reduce(|a, b| a.max(b))
                .ok_or_else(|| Error::InvalidInput("empty point".into()))
        }
        ConstraintSet::NuclearBall { radius } => {
            let Some((rows, cols)) = u.matrix_shape() else {
                return Err(Error::DimensionMismatch {
                    left: "matrix".into(),
                    right: "vector".into(),
                });
            };
            if rows.max(cols) > DENSE_SVD_LIMIT {
                return Err(Error::Unsupported(format!(
                    "dense SVD limited to {DENSE_SVD_LIMIT}x{DENSE_SVD_LIMIT} matrices"
                )));
            }
            Ok(*radius * F::cast(linalg::sigma_max(&u.to_dense(), rows, cols)))
        }
    }
}

/// Spec-level free functions mirroring the oracle methods.
pub fn l1_ball_lmo<F: Scalar>(grad: &Point<F>, radius: F) -> Result<LmoAnswer<F>> {
    L1Ball::new(grad.dim(), radius)?.solve(grad, &Point::zeros(grad.dim()))
}

pub fn simplex_lmo<F: Scalar>(grad: &Point<F>) -> Result<LmoAnswer<F>> {
    Simplex::new(grad.dim()).solve(grad, &Point::zeros(grad.dim()))
}

pub fn nuclear_ball_lmo<F: Scalar>(
    grad: &Point<F>,
    radius: F,
    power_iters: usize,
    tol: F,
    seed: u64,
) -> Result<LmoAnswer<F>> {
    let (rows, cols) = grad.matrix_shape().ok_or(Error::DimensionMismatch {
        left: "matrix".into(),
        right: "vector".into(),
    })?;
    NuclearBall::new(rows, cols, radius, power_iters, tol, seed)?
        .solve(grad, &Point::zero_matrix(rows, cols))
}

pub fn mp_lmo<F: Scalar>(dictionary: &FiniteAtomSet<F>, grad: &Point<F>) -> Result<LmoAnswer<F>> {
    dictionary.solve(grad, &Point::zeros(dictionary.dim()))
}

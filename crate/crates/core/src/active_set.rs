//! Active-set bookkeeping: the convex decomposition x = sum of alpha_v * v
//! maintained by the away-steps and pairwise variants.

use std::collections::BTreeMap;

use crate::atom::{Atom, AtomId};
use crate::error::{Error, Result};
use crate::point::Point;
use crate::scalar::Scalar;
use crate::trace::StepKind;

/// Weights below this are treated as exactly zero and the atom dropped.
const WEIGHT_FLOOR: f64 = 1e-12;
/// The cached iterate is recomputed from scratch this often to bound drift.
const REBUILD_PERIOD: usize = 1000;

/// A step size is considered to hit its cap within 1e-12 relative.
pub(crate) fn step_hits_max<F: Scalar>(gamma: F, gamma_max: F) -> bool {
    if !gamma_max.is_finite() {
        return false;
    }
    gamma >= gamma_max - F::cast(1e-12) * gamma_max.abs()
}

/// Map atom id -> (atom, weight) plus the cached iterate.
#[derive(Debug, Clone)]
pub struct ActiveSet<F: Scalar> {
    entries: BTreeMap<AtomId, (Atom<F>, F)>,
    iterate: Point<F>,
    updates: usize,
}

impl<F: Scalar> ActiveSet<F> {
    /// The set {atom: 1} in an ambient space of flattened dimension `dim`.
    pub fn singleton(atom: Atom<F>, dim: usize) -> Result<Self> {
        let iterate = densified(atom.materialize(dim)?);
        let mut entries = BTreeMap::new();
        entries.insert(atom.id(), (atom, F::one()));
        Ok(ActiveSet { entries, iterate, updates: 0 })
    }

    /// Build from an explicit convex combination (weights must sum to 1).
    pub fn from_weighted(atoms: Vec<(Atom<F>, F)>, dim: usize) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::EmptyActiveSet);
        }
        let total: F = atoms.iter().map(|&(_, w)| w).sum();
        if (total - F::one()).abs() > F::cast(1e-9) {
            return Err(Error::InvalidInput(format!(
                "weights sum to {total}, expected 1"
            )));
        }
        let mut entries = BTreeMap::new();
        let mut iterate = zero_like(&atoms[0].0, dim)?;
        for (atom, weight) in atoms {
            if !(weight > F::zero()) {
                return Err(Error::InvalidInput("weights must be positive".into()));
            }
            iterate.add_scaled(weight, &atom.materialize(dim)?)?;
            let slot = entries.entry(atom.id()).or_insert((atom, F::zero()));
            slot.1 += weight;
        }
        Ok(ActiveSet { entries, iterate, updates: 0 })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Cached iterate x = sum of alpha_v * v.
    pub fn iterate(&self) -> &Point<F> {
        &self.iterate
    }

    pub fn weight(&self, id: &AtomId) -> Option<F> {
        self.entries.get(id).map(|&(_, w)| w)
    }

    pub fn contains(&self, id: &AtomId) -> bool {
        self.entries.contains_key(id)
    }

    /// Entries in atom-id order.
    pub fn iter(&self) -> impl Iterator<Item = (&AtomId, &Atom<F>, F)> {
        self.entries.iter().map(|(id, (atom, w))| (id, atom, *w))
    }

    fn dim(&self) -> usize {
        self.iterate.dim()
    }

    /// Recompute the convex combination from scratch.
    pub fn materialized(&self) -> Result<Point<F>> {
        let mut out = match &self.iterate {
            Point::Matrix { rows, cols, .. } => Point::zero_matrix(*rows, *cols),
            other => Point::zeros(other.dim()),
        };
        for (atom, weight) in self.entries.values() {
            out.add_scaled(*weight, &atom.materialize(self.dim())?)?;
        }
        Ok(out)
    }

    /// FW update: scale every weight by (1 - gamma) and give gamma to `s`.
    /// A full step (gamma = 1) restarts the set at {s: 1}.
    pub fn apply_fw_step(&mut self, s: &Atom<F>, gamma: F) -> Result<()> {
        if !(gamma >= F::zero() && gamma <= F::one()) {
            return Err(Error::Contract(format!("fw step {gamma} outside [0, 1]")));
        }
        let dim = self.dim();
        if step_hits_max(gamma, F::one()) {
            self.iterate = densified(s.materialize(dim)?);
            self.entries.clear();
            self.entries.insert(s.id(), (s.clone(), F::one()));
            self.updates = 0;
            return Ok(());
        }
        let scale = F::one() - gamma;
        for (_, w) in self.entries.values_mut() {
            *w *= scale;
        }
        let slot = self
            .entries
            .entry(s.id())
            .or_insert((s.clone(), F::zero()));
        slot.1 += gamma;
        // x <- (1 - gamma) x + gamma s
        self.iterate.scale(scale);
        self.iterate.add_scaled(gamma, &s.materialize(dim)?)?;
        self.finish_update()
    }

    /// Away update: move mass away from `v`. Returns `Drop` when the atom
    /// leaves the set (gamma hit its cap), `Good` otherwise.
    pub fn apply_away_step(&mut self, v: &AtomId, gamma: F, gamma_max: F) -> Result<StepKind> {
        let Some(&(_, weight)) = self.entries.get(v) else {
            return Err(Error::AtomNotActive);
        };
        if !(gamma >= F::zero()) || gamma > gamma_max + F::cast(1e-9) * gamma_max.abs() {
            return Err(Error::Contract(format!(
                "away step {gamma} outside [0, {gamma_max}]"
            )));
        }
        let dim = self.dim();
        let dropped = step_hits_max(gamma, gamma_max);
        let grow = F::one() + gamma;
        let v_atom = self.entries.get(v).map(|(a, _)| a.clone()).expect("checked above");
        for (id, (_, w)) in self.entries.iter_mut() {
            if id == v {
                *w = grow * weight - gamma;
            } else {
                *w *= grow;
            }
        }
        if dropped {
            self.entries.remove(v);
        }
        // x <- (1 + gamma) x - gamma v
        self.iterate.scale(grow);
        self.iterate.add_scaled(-gamma, &v_atom.materialize(dim)?)?;
        self.finish_update()?;
        Ok(if dropped { StepKind::Drop } else { StepKind::Good })
    }

    /// Pairwise update: move `gamma` of mass from `v` to `s`. When gamma
    /// empties `v`, this is a `Drop` if `s` already was in the set and a
    /// `Swap` otherwise.
    pub fn apply_pairwise_step(&mut self, s: &Atom<F>, v: &AtomId, gamma: F) -> Result<StepKind> {
        let Some(&(_, weight)) = self.entries.get(v) else {
            return Err(Error::AtomNotActive);
        };
        if !(gamma >= F::zero()) || gamma > weight + F::cast(1e-9) * weight {
            return Err(Error::Contract(format!(
                "pairwise step {gamma} outside [0, {weight}]"
            )));
        }
        let s_id = s.id();
        if s_id == *v {
            return Ok(StepKind::Good);
        }
        let dim = self.dim();
        let emptied = step_hits_max(gamma, weight);
        let s_was_active = self.entries.contains_key(&s_id);
        let v_atom = self.entries.get(v).map(|(a, _)| a.clone()).expect("checked above");
        if emptied {
            self.entries.remove(v);
        } else if let Some((_, w)) = self.entries.get_mut(v) {
            *w -= gamma;
        }
        let slot = self.entries.entry(s_id).or_insert((s.clone(), F::zero()));
        slot.1 += gamma;
        // x <- x + gamma (s - v)
        self.iterate.add_scaled(gamma, &s.materialize(dim)?)?;
        self.iterate.add_scaled(-gamma, &v_atom.materialize(dim)?)?;
        self.finish_update()?;
        Ok(match (emptied, s_was_active) {
            (false, _) => StepKind::Good,
            (true, true) => StepKind::Drop,
            (true, false) => StepKind::Swap,
        })
    }

    fn finish_update(&mut self) -> Result<()> {
        let floor = F::cast(WEIGHT_FLOOR);
        self.entries.retain(|_, (_, w)| *w > floor);
        if self.entries.is_empty() {
            return Err(Error::EmptyActiveSet);
        }
        let total: F = self.entries.values().map(|&(_, w)| w).sum();
        // Renormalize only on real drift so that zero steps stay identities.
        if (total - F::one()).abs() > F::epsilon() * F::cast(4.0) {
            for (_, w) in self.entries.values_mut() {
                *w /= total;
            }
        }
        self.updates += 1;
        if self.updates >= REBUILD_PERIOD {
            self.iterate = self.materialized()?;
            self.updates = 0;
        }
        Ok(())
    }
}

fn densified<F: Scalar>(point: Point<F>) -> Point<F> {
    match point {
        Point::Sparse { .. } => Point::Dense(point.to_dense()),
        other => other,
    }
}

fn zero_like<F: Scalar>(atom: &Atom<F>, dim: usize) -> Result<Point<F>> {
    Ok(match atom.materialize(dim)? {
        Point::Matrix { rows, cols, .. } => Point::zero_matrix(rows, cols),
        _ => Point::zeros(dim),
    })
}

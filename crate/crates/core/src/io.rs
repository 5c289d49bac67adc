//! Dataset readers (libsvm text, ratings triplets) and deterministic
//! synthetic problem generators.

use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::objectives::Quadratic;
use crate::scalar::Scalar;

/// Sparse design matrix with +-1 labels.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseDataset<F: Scalar> {
    pub rows: Vec<Vec<(usize, F)>>,
    pub labels: Vec<F>,
    pub dim: usize,
}

/// Ratings triplets with contiguous 0-based ids.
#[derive(Debug, Clone, PartialEq)]
pub struct Ratings<F: Scalar> {
    pub triplets: Vec<(usize, usize, F)>,
    pub n_users: usize,
    pub n_items: usize,
}

/// Parse libsvm text: `label idx:val idx:val ...` with 1-based, strictly
/// ascending indices. Blank lines and `#` comments are skipped; labels are
/// coerced to +-1 (values > 0 map to +1, everything else to -1).
pub fn parse_libsvm<F: Scalar, R: Read>(reader: R) -> Result<SparseDataset<F>> {
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    let mut dim = 0usize;
    for (lineno, line) in BufReader::new(reader).lines().enumerate() {
        let lineno = lineno + 1;
        let line = line?;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut tokens = content.split_whitespace();
        let label_token = tokens.next().expect("non-empty line has a first token");
        let raw: f64 = label_token.parse().map_err(|_| Error::Parse {
            line: lineno,
            message: format!("bad label token '{label_token}'"),
        })?;
        labels.push(if raw > 0.0 { F::one() } else { -F::one() });

        let mut row = Vec::new();
        let mut prev_index: Option<usize> = None;
        for token in tokens {
            let (idx, val) = token.split_once(':').ok_or_else(|| Error::Parse {
                line: lineno,
                message: format!("expected idx:val, got '{token}'"),
            })?;
            let index: usize = idx.parse().map_err(|_| Error::Parse {
                line: lineno,
                message: format!("bad feature index '{idx}'"),
            })?;
            if index == 0 {
                return Err(Error::Parse {
                    line: lineno,
                    message: "feature indices are 1-based".into(),
                });
            }
            let value: f64 = val.parse().map_err(|_| Error::Parse {
                line: lineno,
                message: format!("bad feature value '{val}'"),
            })?;
            let zero_based = index - 1;
            if prev_index.is_some_and(|p| zero_based <= p) {
                return Err(Error::Parse {
                    line: lineno,
                    message: format!("non-ascending feature index {index}"),
                });
            }
            prev_index = Some(zero_based);
            dim = dim.max(index);
            row.push((zero_based, F::cast(value)));
        }
        rows.push(row);
    }
    Ok(SparseDataset { rows, labels, dim })
}

pub fn read_libsvm<F: Scalar>(path: &Path) -> Result<SparseDataset<F>> {
    parse_libsvm(File::open(path)?)
}

/// Inverse of [`parse_libsvm`] on valid data (bit-exact round trip).
pub fn write_libsvm<F: Scalar, W: Write>(dataset: &SparseDataset<F>, mut writer: W) -> Result<()> {
    for (row, label) in dataset.rows.iter().zip(dataset.labels.iter()) {
        write!(writer, "{label}")?;
        for &(index, value) in row {
            write!(writer, " {}:{}", index + 1, value)?;
        }
        writeln!(writer)?;
    }
    Ok(())
}

/// Parse ratings triplets, one `user,item,rating` (or `user::item::rating`)
/// per line, reindexing ids to be contiguous and 0-based in order of first
/// appearance. Duplicate (user, item) pairs are rejected.
pub fn parse_ratings<F: Scalar, R: Read>(reader: R) -> Result<Ratings<F>> {
    let mut users: Vec<u64> = Vec::new();
    let mut items: Vec<u64> = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    let mut triplets = Vec::new();
    for (lineno, line) in BufReader::new(reader).lines().enumerate() {
        let lineno = lineno + 1;
        let line = line?;
        let content = line.trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = if content.contains("::") {
            content.split("::").collect()
        } else {
            content.split(',').collect()
        };
        if fields.len() < 3 {
            return Err(Error::Parse {
                line: lineno,
                message: format!("expected user,item,rating, got '{content}'"),
            });
        }
        let user: u64 = fields[0].trim().parse().map_err(|_| Error::Parse {
            line: lineno,
            message: format!("bad user id '{}'", fields[0]),
        })?;
        let item: u64 = fields[1].trim().parse().map_err(|_| Error::Parse {
            line: lineno,
            message: format!("bad item id '{}'", fields[1]),
        })?;
        let rating: f64 = fields[2].trim().parse().map_err(|_| Error::Parse {
            line: lineno,
            message: format!("bad rating '{}'", fields[2]),
        })?;
        if !seen.insert((user, item)) {
            return Err(Error::InvalidInput(format!(
                "duplicate rating for user {user}, item {item} at line {lineno}"
            )));
        }
        let u = reindex(&mut users, user);
        let i = reindex(&mut items, item);
        triplets.push((u, i, F::cast(rating)));
    }
    Ok(Ratings { triplets, n_users: users.len(), n_items: items.len() })
}

pub fn read_ratings<F: Scalar>(path: &Path) -> Result<Ratings<F>> {
    parse_ratings(File::open(path)?)
}

fn reindex(order: &mut Vec<u64>, raw: u64) -> usize {
    match order.iter().position(|&x| x == raw) {
        Some(i) => i,
        None => {
            order.push(raw);
            order.len() - 1
        }
    }
}

/// Synthetic problem family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProblemKind {
    L1Logistic,
    NuclearHuber,
    SimplexQuadratic,
    MpLeastSquares,
}

impl std::str::FromStr for ProblemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "l1_logistic" => Ok(ProblemKind::L1Logistic),
            "nuclear_huber" => Ok(ProblemKind::NuclearHuber),
            "simplex_quadratic" => Ok(ProblemKind::SimplexQuadratic),
            "mp_leastsquares" => Ok(ProblemKind::MpLeastSquares),
            other => Err(Error::InvalidInput(format!("unknown problem '{other}'"))),
        }
    }
}

impl ProblemKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ProblemKind::L1Logistic => "l1_logistic",
            ProblemKind::NuclearHuber => "nuclear_huber",
            ProblemKind::SimplexQuadratic => "simplex_quadratic",
            ProblemKind::MpLeastSquares => "mp_leastsquares",
        }
    }
}

/// A generated desk-scale problem instance.
#[derive(Debug, Clone)]
pub enum SynthProblem<F: Scalar> {
    L1Logistic { dataset: SparseDataset<F>, planted: Vec<F> },
    NuclearHuber { observed: Vec<(usize, usize, F)>, rows: usize, cols: usize },
    SimplexQuadratic { objective: Quadratic<F> },
    MpLeastSquares { design: Vec<F>, rows: usize, dim: usize, targets: Vec<F> },
}

/// Deterministic synthetic instance for the given kind; identical seeds
/// produce bit-identical instances.
pub fn synth_problem<F: Scalar>(
    kind: ProblemKind,
    dim: usize,
    n_samples: usize,
    seed: u64,
) -> Result<SynthProblem<F>> {
    if dim < 2 {
        return Err(Error::InvalidInput("synthetic problems need dim >= 2".into()));
    }
    match kind {
        ProblemKind::L1Logistic => {
            let (dataset, planted) = synth_l1_logistic(dim, n_samples.max(2), seed);
            Ok(SynthProblem::L1Logistic { dataset, planted })
        }
        ProblemKind::NuclearHuber => {
            let (observed, rows, cols) = synth_nuclear_huber(dim, seed);
            Ok(SynthProblem::NuclearHuber { observed, rows, cols })
        }
        ProblemKind::SimplexQuadratic => Ok(SynthProblem::SimplexQuadratic {
            objective: synth_simplex_quadratic(dim, seed)?,
        }),
        ProblemKind::MpLeastSquares => {
            let (design, rows, targets) = synth_mp_least_squares(dim, seed);
            Ok(SynthProblem::MpLeastSquares { design, rows, dim, targets })
        }
    }
}

/// Correlated Gaussian design (shared factor plus iid noise, as in real
/// text/feature data) with a planted sparse coefficient vector; labels are
/// the signs of noisy planted margins.
pub fn synth_l1_logistic<F: Scalar>(
    dim: usize,
    n_samples: usize,
    seed: u64,
) -> (SparseDataset<F>, Vec<F>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let support = (dim / 10).clamp(1, dim);
    let mut planted = vec![0.0f64; dim];
    for coef in planted.iter_mut().take(support) {
        let magnitude: f64 = rng.random_range(0.5..1.5);
        *coef = if rng.random_bool(0.5) { magnitude } else { -magnitude };
    }
    let loadings: Vec<f64> = (0..dim)
        .map(|j| if j % 2 == 0 { 0.55 } else { -0.55 })
        .collect();
    let mut rows = Vec::with_capacity(n_samples);
    let mut labels = Vec::with_capacity(n_samples);
    for _ in 0..n_samples {
        let factor: f64 = rng.sample(StandardNormal);
        let features: Vec<f64> = loadings
            .iter()
            .map(|&c| rng.sample::<f64, _>(StandardNormal) + factor * c)
            .collect();
        let margin: f64 = features
            .iter()
            .zip(planted.iter())
            .map(|(a, b)| a * b)
            .sum::<f64>()
            + 0.1 * rng.sample::<f64, _>(StandardNormal);
        labels.push(if margin > 0.0 { F::one() } else { -F::one() });
        rows.push(
            features
                .into_iter()
                .enumerate()
                .map(|(j, v)| (j, F::cast(v)))
                .collect(),
        );
    }
    (
        SparseDataset { rows, labels, dim },
        planted.into_iter().map(F::cast).collect(),
    )
}

/// Planted rank-3 matrix with roughly 30% observed entries plus noise.
pub fn synth_nuclear_huber<F: Scalar>(dim: usize, seed: u64) -> (Vec<(usize, usize, F)>, usize, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows = dim;
    let cols = dim;
    let rank = 3usize.min(dim);
    let scale = 1.0 / (rank as f64).sqrt();
    let u: Vec<f64> = (0..rows * rank)
        .map(|_| rng.sample::<f64, _>(StandardNormal) * scale)
        .collect();
    let v: Vec<f64> = (0..cols * rank)
        .map(|_| rng.sample::<f64, _>(StandardNormal) * scale)
        .collect();
    let mut observed = Vec::new();
    for i in 0..rows {
        for j in 0..cols {
            if rng.random_bool(0.3) {
                let value: f64 = (0..rank).map(|k| u[i * rank + k] * v[j * rank + k]).sum::<f64>()
                    + 0.05 * rng.sample::<f64, _>(StandardNormal);
                observed.push((i, j, F::cast(value)));
            }
        }
    }
    if observed.is_empty() {
        observed.push((0, 0, F::one()));
    }
    (observed, rows, cols)
}

/// Random PSD quadratic Q = M^T M + 0.1 I with the unconstrained optimum
/// pushed outside the simplex so the constrained optimum sits on a face.
pub fn synth_simplex_quadratic<F: Scalar>(dim: usize, seed: u64) -> Result<Quadratic<F>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m: Vec<f64> = (0..dim * dim)
        .map(|_| rng.sample::<f64, _>(StandardNormal) / (dim as f64).sqrt())
        .collect();
    let mut q = vec![0.0f64; dim * dim];
    for r in 0..dim {
        for i in 0..dim {
            for j in 0..dim {
                q[i * dim + j] += m[r * dim + i] * m[r * dim + j];
            }
        }
    }
    for i in 0..dim {
        q[i * dim + i] += 0.1;
    }
    // Target point with at least one negative coordinate.
    let mut target: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
    if target.iter().all(|&x| x >= 0.0) {
        target[0] = -target[0].abs() - 0.5;
    }
    let b: Vec<f64> = (0..dim)
        .map(|i| (0..dim).map(|j| q[i * dim + j] * target[j]).sum())
        .collect();
    Quadratic::new(q.into_iter().map(F::cast).collect(), b.into_iter().map(F::cast).collect())
}

/// Well-conditioned overdetermined design (2 dim x dim, perturbed stacked
/// identities) for least squares over the canonical basis dictionary. The
/// residual at the optimum stays bounded away from zero.
pub fn synth_mp_least_squares<F: Scalar>(dim: usize, seed: u64) -> (Vec<F>, usize, Vec<F>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows = 2 * dim;
    let mut a = vec![0.0f64; rows * dim];
    for block in 0..2 {
        let diag = if block == 0 { 1.0 } else { 0.5 };
        for i in 0..dim {
            let r = block * dim + i;
            for j in 0..dim {
                a[r * dim + j] = 0.05 * rng.sample::<f64, _>(StandardNormal)
                    + if i == j { diag } else { 0.0 };
            }
        }
    }
    let targets: Vec<f64> = (0..rows).map(|_| rng.sample(StandardNormal)).collect();
    (
        a.into_iter().map(F::cast).collect(),
        rows,
        targets.into_iter().map(F::cast).collect(),
    )
}

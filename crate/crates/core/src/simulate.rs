//! Finite-sample Monte Carlo kriging on an interval.
//!
//! A replicate draws one Gaussian-process path jointly at the grid nodes and
//! at a denser set of held-out points, fits the posterior mean of a
//! (possibly different) covariance model to the nodes and records the mean
//! squared error at the held-out points.
//!
//! Everything here is a pure function of its inputs and seeds. Dense linear
//! algebra runs single-threaded so results do not depend on thread counts;
//! parallelism is over replicates only.

use faer::dyn_stack::{MemBuffer, MemStack};
use faer::linalg::cholesky::llt::factor::{cholesky_in_place, cholesky_in_place_scratch};
use faer::linalg::triangular_solve::{solve_lower_triangular_in_place, solve_upper_triangular_in_place};
use faer::{Mat, Par};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::spectral::{CovarianceModel, Family, GridDesign, Profile};

/// Diagonal jitter tried first for every factorization.
pub const BASE_JITTER: f64 = 1e-8;
/// Largest jitter tried before giving up.
pub const MAX_JITTER: f64 = 1e-4;
/// Held-out points per grid interval.
pub const TEST_DENSITY: usize = 5;
/// Two points closer than this are treated as the same location.
pub const COINCIDENCE: f64 = 1e-12;

/// `size` equally spaced nodes on `interval`, endpoints included.
pub fn build_grid(size: usize, interval: (f64, f64)) -> Result<GridDesign> {
    GridDesign::finite(size, interval)
}

/// Held-out points at the midpoints of a grid `h / TEST_DENSITY` finer than
/// `grid`, so none of them coincides with a node.
pub fn test_points(grid: &GridDesign) -> Result<Vec<f64>> {
    let ((a, b), n) = finite_parts(grid)?;
    let m = (n - 1) * TEST_DENSITY;
    let step = (b - a) / m as f64;
    Ok((0..m).map(|j| a + (j as f64 + 0.5) * step).collect())
}

fn finite_parts(grid: &GridDesign) -> Result<((f64, f64), usize)> {
    match (grid.extent(), grid.size(), grid.dimension()) {
        (Some(extent), Some(size), 1) => Ok((extent, size)),
        _ => Err(Error::InvalidDesign(
            "simulation needs a finite one-dimensional grid".to_string(),
        )),
    }
}

/// A sampled path at the grid nodes and at held-out points.
#[derive(Debug, Clone, PartialEq)]
pub struct Realization {
    grid: GridDesign,
    values: Vec<f64>,
    test_points: Vec<f64>,
    test_values: Vec<f64>,
    seed: u64,
    jitter_used: f64,
}

impl Realization {
    pub fn grid(&self) -> &GridDesign {
        &self.grid
    }

    /// Values at `grid.points()`.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Held-out locations, ascending.
    pub fn test_points(&self) -> &[f64] {
        &self.test_points
    }

    pub fn test_values(&self) -> &[f64] {
        &self.test_values
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn jitter_used(&self) -> f64 {
        self.jitter_used
    }

    /// The same locations with every value multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= factor);
        out.test_values.iter_mut().for_each(|v| *v *= factor);
        out
    }
}

/// Cholesky factor of `[kernel(i, j)] + jitter I`, escalating the jitter by
/// ×10 from `start` up to [`MAX_JITTER`]. The upper triangle of the returned
/// matrix is not referenced.
fn factor_with_jitter(n: usize, kernel: impl Fn(usize, usize) -> f64, start: f64) -> Result<(Mat<f64>, f64)> {
    let base = Mat::<f64>::from_fn(n, n, |i, j| if j <= i { kernel(i, j) } else { 0.0 });
    let mut buffer = MemBuffer::new(cholesky_in_place_scratch::<f64>(n, Par::Seq, Default::default()));
    let mut jitter = start.max(BASE_JITTER);
    loop {
        let mut l = base.clone();
        for i in 0..n {
            l[(i, i)] += jitter;
        }
        let stack = MemStack::new(&mut buffer);
        if cholesky_in_place(l.as_mut(), Default::default(), Par::Seq, stack, Default::default()).is_ok() {
            return Ok((l, jitter));
        }
        if jitter >= MAX_JITTER * (1.0 - 1e-12) {
            return Err(Error::NotPositiveDefinite { jitter });
        }
        jitter = (jitter * 10.0).min(MAX_JITTER);
    }
}

/// Path of `model` at the grid nodes and the default held-out points.
pub fn sample_realization(model: &CovarianceModel, grid: &GridDesign, seed: u64) -> Result<Realization> {
    sample_realization_at(model, grid, &test_points(grid)?, seed)
}

/// Path of `model` at the grid nodes and at `test_points`, sampled jointly
/// as `L z` with `L L^T = K + jitter I` and `z` standard normal from a
/// ChaCha20 stream seeded with `seed`.
pub fn sample_realization_at(
    model: &CovarianceModel,
    grid: &GridDesign,
    test_points: &[f64],
    seed: u64,
) -> Result<Realization> {
    let ((a, b), _) = finite_parts(grid)?;
    let nodes = grid.points();
    let mut held_out = test_points.to_vec();
    held_out.sort_by(f64::total_cmp);
    for &x in &held_out {
        if !(x >= a && x <= b) {
            return Err(Error::ExtrapolationRequest(x));
        }
    }
    if held_out.windows(2).any(|w| w[1] - w[0] <= COINCIDENCE) {
        return Err(Error::InvalidArgument("held-out points must be distinct".to_string()));
    }
    if let Some(&x) = held_out.iter().find(|&&x| nearest_node(&nodes, x).1 <= COINCIDENCE) {
        return Err(Error::InvalidArgument(format!(
            "held-out point {x} coincides with a grid node"
        )));
    }

    let all: Vec<f64> = nodes.iter().chain(&held_out).copied().collect();
    let (l, jitter) = factor_with_jitter(all.len(), |i, j| model.covariance(all[i] - all[j]), BASE_JITTER)?;

    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let z: Vec<f64> = (0..all.len()).map(|_| StandardNormal.sample(&mut rng)).collect();
    let joint: Vec<f64> = (0..all.len())
        .map(|i| (0..=i).map(|j| l[(i, j)] * z[j]).sum())
        .collect();
    let (values, test_values) = joint.split_at(nodes.len());
    Ok(Realization {
        grid: grid.clone(),
        values: values.to_vec(),
        test_points: held_out,
        test_values: test_values.to_vec(),
        seed,
        jitter_used: jitter,
    })
}

/// Index of and distance to the node nearest to `x` on a sorted node list.
fn nearest_node(nodes: &[f64], x: f64) -> (usize, f64) {
    let i = nodes.partition_point(|&p| p < x);
    [i.saturating_sub(1), i.min(nodes.len() - 1)]
        .into_iter()
        .map(|k| (k, (nodes[k] - x).abs()))
        .min_by(|p, q| p.1.total_cmp(&q.1))
        .expect("grid has at least two nodes")
}

/// Posterior mean of a zero-mean process given exact observations, with the
/// covariance regularized by a diagonal jitter.
#[derive(Debug, Clone)]
pub struct Kriging {
    model: CovarianceModel,
    points: Vec<f64>,
    weights: Vec<f64>,
    jitter: f64,
}

impl Kriging {
    /// Solve `(K + jitter I) α = y` through a Cholesky factor; the jitter
    /// escalates from `jitter` when the factorization fails.
    pub fn fit(model: &CovarianceModel, points: &[f64], values: &[f64], jitter: f64) -> Result<Self> {
        if points.len() != values.len() {
            return Err(Error::LengthMismatch(points.len(), values.len()));
        }
        if points.is_empty() {
            return Err(Error::InvalidArgument("no observations".to_string()));
        }
        let n = points.len();
        let (l, jitter) = factor_with_jitter(n, |i, j| model.covariance(points[i] - points[j]), jitter)?;
        let mut rhs = Mat::<f64>::from_fn(n, 1, |i, _| values[i]);
        solve_lower_triangular_in_place(l.as_ref(), rhs.as_mut(), Par::Seq);
        solve_upper_triangular_in_place(l.as_ref().transpose(), rhs.as_mut(), Par::Seq);
        Ok(Self {
            model: *model,
            points: points.to_vec(),
            weights: (0..n).map(|i| rhs[(i, 0)]).collect(),
            jitter,
        })
    }

    /// Jitter actually used in the factorization.
    pub fn jitter(&self) -> f64 {
        self.jitter
    }

    /// `k(x)^T α` at each location.
    pub fn predict(&self, at: &[f64]) -> Vec<f64> {
        at.iter()
            .map(|&x| {
                self.points
                    .iter()
                    .zip(&self.weights)
                    .map(|(&p, &w)| self.model.covariance(x - p) * w)
                    .sum()
            })
            .collect()
    }
}

/// Predictions and true values at held-out locations.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictionSet {
    pub test_points: Vec<f64>,
    pub predicted: Vec<f64>,
    pub truth: Vec<f64>,
}

/// Kriging predictions at `test_points` from the node values of
/// `realization`, using `used_model` and the realization's jitter.
///
/// Every test point must lie inside the grid interval, away from the nodes,
/// and among the realization's held-out points (which supply the truth).
pub fn krige_predict(
    used_model: &CovarianceModel,
    realization: &Realization,
    test_points: &[f64],
) -> Result<PredictionSet> {
    let ((a, b), _) = finite_parts(&realization.grid)?;
    let nodes = realization.grid.points();
    let mut truth = Vec::with_capacity(test_points.len());
    for &x in test_points {
        if !(x >= a && x <= b) {
            return Err(Error::ExtrapolationRequest(x));
        }
        if nearest_node(&nodes, x).1 <= COINCIDENCE {
            return Err(Error::InvalidArgument(format!(
                "test point {x} coincides with a grid node"
            )));
        }
        let held = &realization.test_points;
        let i = held.partition_point(|&p| p < x - COINCIDENCE);
        match held.get(i) {
            Some(&p) if (p - x).abs() <= COINCIDENCE => truth.push(realization.test_values[i]),
            _ => return Err(Error::InvalidArgument(format!("no sampled value at test point {x}"))),
        }
    }
    let kriging = Kriging::fit(used_model, &nodes, &realization.values, realization.jitter_used)?;
    Ok(PredictionSet {
        test_points: test_points.to_vec(),
        predicted: kriging.predict(test_points),
        truth,
    })
}

/// Mean squared prediction error over the test points.
pub fn empirical_error(pred: &PredictionSet) -> Result<f64> {
    if pred.predicted.is_empty() {
        return Err(Error::EmptyTestSet);
    }
    if pred.predicted.len() != pred.truth.len() {
        return Err(Error::LengthMismatch(pred.predicted.len(), pred.truth.len()));
    }
    let sum: f64 = pred
        .predicted
        .iter()
        .zip(&pred.truth)
        .map(|(p, t)| (p - t) * (p - t))
        .sum();
    Ok(sum / pred.predicted.len() as f64)
}

/// One Monte Carlo cell: the true and used covariance and the sample size
/// on `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub family_true: Family,
    pub theta: f64,
    pub family_used: Family,
    pub theta_prime: f64,
    pub size: usize,
}

impl Cell {
    pub fn matched(family: Family, theta: f64, size: usize) -> Self {
        Self {
            family_true: family,
            theta,
            family_used: family,
            theta_prime: theta,
            size,
        }
    }

    /// Grid step `1 / (S - 1)`.
    pub fn step(&self) -> f64 {
        1.0 / (self.size as f64 - 1.0)
    }

    pub fn grid(&self) -> Result<GridDesign> {
        build_grid(self.size, (0.0, 1.0))
    }

    // Covariances coincide across profiles, so the simulator fixes one.
    pub fn true_model(&self) -> Result<CovarianceModel> {
        CovarianceModel::new(self.family_true, self.theta, Profile::Consistent)
    }

    pub fn used_model(&self) -> Result<CovarianceModel> {
        CovarianceModel::new(self.family_used, self.theta_prime, Profile::Consistent)
    }
}

/// Per-replicate errors of one cell.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorSamples {
    pub cell: Cell,
    pub replicate_errors: Vec<f64>,
    pub seed_base: u64,
}

impl ErrorSamples {
    pub fn step(&self) -> f64 {
        self.cell.step()
    }

    pub fn mean(&self) -> f64 {
        self.replicate_errors.iter().sum::<f64>() / self.replicate_errors.len() as f64
    }
}

/// Seed of replicate `index`: the SplitMix64 output for state
/// `seed_base + (index + 1) γ`, γ the 64-bit golden-ratio increment. Distinct
/// replicates get well-separated seeds and the ChaCha20 streams they key are
/// independent.
pub fn replicate_seed(seed_base: u64, index: u64) -> u64 {
    const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
    let mut z = seed_base.wrapping_add(index.wrapping_add(1).wrapping_mul(GAMMA));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Error of a single replicate sampled with `seed`.
pub fn run_trial(cell: &Cell, seed: u64) -> Result<f64> {
    let realization = sample_realization(&cell.true_model()?, &cell.grid()?, seed)?;
    let used = cell.used_model()?;
    let pred = krige_predict(&used, &realization, realization.test_points())?;
    empirical_error(&pred)
}

/// `replicates` independent trials with seeds from [`replicate_seed`].
pub fn run_monte_carlo(cell: &Cell, replicates: usize, seed_base: u64) -> Result<ErrorSamples> {
    let used = [(cell.family_used, cell.theta_prime)];
    let mut out = run_monte_carlo_paired(cell.family_true, cell.theta, &used, cell.size, replicates, seed_base)?;
    Ok(out.pop().expect("one used model"))
}

/// Monte Carlo for several used models on shared realizations: replicate
/// `i` of every returned cell is evaluated on the same sampled path, so the
/// samples are paired by replicate.
pub fn run_monte_carlo_paired(
    family_true: Family,
    theta: f64,
    used: &[(Family, f64)],
    size: usize,
    replicates: usize,
    seed_base: u64,
) -> Result<Vec<ErrorSamples>> {
    if replicates == 0 {
        return Err(Error::InvalidArgument("replicates must be at least 1".to_string()));
    }
    let cells: Vec<Cell> = used
        .iter()
        .map(|&(family_used, theta_prime)| Cell {
            family_true,
            theta,
            family_used,
            theta_prime,
            size,
        })
        .collect();
    let grid = build_grid(size, (0.0, 1.0))?;
    let truth = CovarianceModel::new(family_true, theta, Profile::Consistent)?;
    let models = cells.iter().map(Cell::used_model).collect::<Result<Vec<_>>>()?;

    let per_replicate: Vec<Result<Vec<f64>>> = with_thread_cap(|| {
        (0..replicates)
            .into_par_iter()
            .map(|i| {
                let seed = replicate_seed(seed_base, i as u64);
                let tag = |e: Error| Error::Replicate {
                    index: i,
                    source: Box::new(e),
                };
                let realization = sample_realization(&truth, &grid, seed).map_err(tag)?;
                models
                    .iter()
                    .map(|m| {
                        krige_predict(m, &realization, realization.test_points())
                            .and_then(|p| empirical_error(&p))
                            .map_err(tag)
                    })
                    .collect()
            })
            .collect()
    });

    let mut errors = vec![Vec::with_capacity(replicates); cells.len()];
    for row in per_replicate {
        for (k, e) in row?.into_iter().enumerate() {
            errors[k].push(e);
        }
    }
    Ok(cells
        .into_iter()
        .zip(errors)
        .map(|(cell, replicate_errors)| ErrorSamples {
            cell,
            replicate_errors,
            seed_base,
        })
        .collect())
}

/// Run `f` on a pool capped by the `GRIDKRIG_THREADS` environment variable,
/// or on the global pool when it is unset or invalid.
pub fn with_thread_cap<R: Send>(f: impl FnOnce() -> R + Send) -> R {
    let cap = std::env::var("GRIDKRIG_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0);
    match cap.and_then(|n| rayon::ThreadPoolBuilder::new().num_threads(n).build().ok()) {
        Some(pool) => pool.install(f),
        None => f(),
    }
}

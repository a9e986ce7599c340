//! Monte Carlo comparison of the estimators.
//!
//! A cell fixes (ρ, n, p, σ²). Its design matrix is drawn once as
//! x_ij = sqrt(1 − ρ²) z_ij + ρ z_i,p+1 from n(p + 1) standard normals, and the
//! true β is the unit eigenvector of X'X for λ_max. Each replication redraws
//! only the errors, refits and records ‖α̂ − α‖² per estimator; AMSE is the
//! mean over replications.
//!
//! Random stream map, per cell seed: stream 0 draws the design, stream r + 1
//! draws the errors of replication r. Results therefore do not depend on the
//! order in which replications or cells run, and the final means are summed
//! sequentially in replication order.

use std::collections::BTreeMap;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::{estimate_from, EstimatorId, EstimatorInputs};
use crate::regression::{mse_ols, shrink, CanonicalDesign};
use crate::stochastics::{derive_seed, RandomStream};

pub const GRID_RHOS: [f64; 3] = [0.90, 0.95, 0.99];
pub const GRID_NS: [usize; 3] = [50, 100, 200];
pub const GRID_PS: [usize; 2] = [4, 8];
pub const GRID_SIGMA2S: [f64; 2] = [1.0, 5.0];
pub const DEFAULT_REPLICATIONS: usize = 5000;

pub const DESIGN_STREAM: u64 = 0;

pub fn replication_stream(replication: usize) -> u64 {
    replication as u64 + 1
}

/// One factor combination of the experiment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimulationCell {
    pub rho: f64,
    pub n: usize,
    pub p: usize,
    pub sigma2: f64,
    pub replications: usize,
    pub seed: u64,
}

impl SimulationCell {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        if !(self.rho >= 0.0 && self.rho < 1.0) {
            return bad(format!("rho must lie in [0, 1), got {}", self.rho));
        }
        if self.p == 0 || self.n <= self.p {
            return bad(format!(
                "need n > p >= 1, got n = {}, p = {}",
                self.n, self.p
            ));
        }
        if !(self.sigma2 > 0.0 && self.sigma2.is_finite()) {
            return bad(format!("sigma2 must be positive, got {}", self.sigma2));
        }
        if self.replications == 0 {
            return bad("replications must be at least 1".into());
        }
        Ok(())
    }
}

/// The 36 cells of the full factor grid, ordered by p, σ², ρ, n. Each cell's
/// seed is derived from `base_seed` and its position in this list.
pub fn standard_grid(base_seed: u64, replications: usize) -> Vec<SimulationCell> {
    let mut cells = Vec::with_capacity(36);
    for &p in &GRID_PS {
        for &sigma2 in &GRID_SIGMA2S {
            for &rho in &GRID_RHOS {
                for &n in &GRID_NS {
                    let seed = derive_seed(base_seed, cells.len() as u64);
                    cells.push(SimulationCell {
                        rho,
                        n,
                        p,
                        sigma2,
                        replications,
                        seed,
                    });
                }
            }
        }
    }
    cells
}

/// Collinear design x_ij = sqrt(1 − ρ²) z_ij + ρ z_i,p+1, drawn row by row.
pub fn generate_x(cell: &SimulationCell, stream: &mut RandomStream) -> DMatrix<f64> {
    let (n, p) = (cell.n, cell.p);
    let a = (1.0 - cell.rho * cell.rho).sqrt();
    let mut z = vec![0.0; p + 1];
    let mut x = DMatrix::zeros(n, p);
    for i in 0..n {
        stream.fill_standard_normal(&mut z);
        for j in 0..p {
            x[(i, j)] = a * z[j] + cell.rho * z[p];
        }
    }
    x
}

/// Fixed design plus the true coefficients in both coordinate systems.
#[derive(Debug, Clone)]
pub struct SimulationTruth {
    pub design: Arc<CanonicalDesign>,
    pub beta: DVector<f64>,
    pub alpha: DVector<f64>,
}

impl SimulationTruth {
    pub fn x(&self) -> &DMatrix<f64> {
        self.design.x()
    }
}

/// β = unit eigenvector of λ_max(X'X), α = D'β.
pub fn make_truth(x: DMatrix<f64>) -> Result<SimulationTruth> {
    let design = Arc::new(CanonicalDesign::new(x)?);
    let beta = design.rotation().column(0).clone_owned();
    let alpha = design.rotation().tr_mul(&beta);
    Ok(SimulationTruth {
        design,
        beta,
        alpha,
    })
}

/// Per-estimator AMSE of one cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellResult {
    pub cell: SimulationCell,
    pub amse: BTreeMap<EstimatorId, f64>,
    /// Standard error of each AMSE (replication standard deviation / sqrt R).
    pub std_error: BTreeMap<EstimatorId, f64>,
    /// Replications where the estimator's formula was undefined and the OLS
    /// error was recorded in its place.
    pub degenerate_count: BTreeMap<EstimatorId, usize>,
    /// σ² Σ 1/λ_j of the realized design: the expected OLS AMSE.
    pub realized_mse_ols: f64,
}

const NUM_EST: usize = EstimatorId::ALL.len();

struct Replication {
    sq_err: [f64; NUM_EST],
    degenerate: [bool; NUM_EST],
}

fn response(truth: &SimulationTruth, sigma: f64, stream: &mut RandomStream) -> DVector<f64> {
    let mut y = truth.x() * &truth.beta;
    for v in y.iter_mut() {
        *v += sigma * stream.next_normal();
    }
    y
}

fn sq_dist(a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).powi(2)).sum()
}

fn run_replication(
    cell: &SimulationCell,
    truth: &SimulationTruth,
    replication: usize,
) -> Result<Replication> {
    let mut stream = RandomStream::new(cell.seed, replication_stream(replication));
    let y = response(truth, cell.sigma2.sqrt(), &mut stream);
    let model = truth.design.fit(&y, cell.n - cell.p)?;
    let inputs = EstimatorInputs::from_model(&model);
    let ols_err = sq_dist(model.alpha_ols(), &truth.alpha);

    let mut rep = Replication {
        sq_err: [0.0; NUM_EST],
        degenerate: [false; NUM_EST],
    };
    for id in EstimatorId::ALL {
        let idx = id.index();
        match estimate_from(id, &inputs) {
            Ok(est) => {
                let fitted = shrink(inputs.lambdas, inputs.alpha, |_| est.k);
                rep.sq_err[idx] = sq_dist(&fitted, &truth.alpha);
            }
            Err(Error::DegenerateCoefficient { .. } | Error::NonPositiveVariance { .. }) => {
                rep.sq_err[idx] = ols_err;
                rep.degenerate[idx] = true;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(rep)
}

fn collect_replications<T: Send>(
    count: usize,
    f: impl Fn(usize) -> Result<T> + Sync + Send,
) -> Result<Vec<T>> {
    #[cfg(feature = "parallel")]
    {
        (0..count).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..count).map(f).collect()
    }
}

fn mean_and_se(values: impl Iterator<Item = f64> + Clone, count: usize) -> (f64, f64) {
    let r = count as f64;
    let mean = values.clone().sum::<f64>() / r;
    if count < 2 {
        return (mean, f64::NAN);
    }
    let var = values.map(|v| (v - mean).powi(2)).sum::<f64>() / (r - 1.0);
    (mean, (var / r).sqrt())
}

/// Runs every replication of one cell.
pub fn run_cell(cell: &SimulationCell) -> Result<CellResult> {
    cell.validate()?;
    let mut design_stream = RandomStream::new(cell.seed, DESIGN_STREAM);
    let truth = make_truth(generate_x(cell, &mut design_stream))?;
    run_cell_with_truth(cell, &truth)
}

/// Runs a cell on a caller-supplied design; only the errors are random.
pub fn run_cell_with_truth(cell: &SimulationCell, truth: &SimulationTruth) -> Result<CellResult> {
    cell.validate()?;
    if truth.design.n() != cell.n || truth.design.p() != cell.p {
        return Err(Error::InvalidArgument(format!(
            "design is {}x{}, cell expects {}x{}",
            truth.design.n(),
            truth.design.p(),
            cell.n,
            cell.p
        )));
    }
    let reps = collect_replications(cell.replications, |r| run_replication(cell, truth, r))?;

    let mut amse = BTreeMap::new();
    let mut std_error = BTreeMap::new();
    let mut degenerate_count = BTreeMap::new();
    for id in EstimatorId::ALL {
        let idx = id.index();
        let (mean, se) = mean_and_se(reps.iter().map(|r| r.sq_err[idx]), reps.len());
        amse.insert(id, mean);
        std_error.insert(id, se);
        degenerate_count.insert(id, reps.iter().filter(|r| r.degenerate[idx]).count());
    }
    Ok(CellResult {
        cell: *cell,
        amse,
        std_error,
        degenerate_count,
        realized_mse_ols: mse_ols(truth.design.lambdas(), cell.sigma2)?,
    })
}

fn annotate(index: usize, cell: &SimulationCell, e: Error) -> Error {
    Error::Cell {
        index,
        rho: cell.rho,
        n: cell.n,
        p: cell.p,
        sigma2: cell.sigma2,
        source: Box::new(e),
    }
}

/// Runs each cell independently, keeping failures alongside successes.
pub fn run_cells(cells: &[SimulationCell]) -> Vec<Result<CellResult>> {
    let one = |(i, c): (usize, &SimulationCell)| run_cell(c).map_err(|e| annotate(i, c, e));
    #[cfg(feature = "parallel")]
    {
        cells.par_iter().enumerate().map(one).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        cells.iter().enumerate().map(one).collect()
    }
}

/// Runs a grid of cells, failing on the first (lowest-index) failed cell.
pub fn run_grid(cells: &[SimulationCell]) -> Result<Vec<CellResult>> {
    if cells.is_empty() {
        return Err(Error::InvalidArgument("simulation grid is empty".into()));
    }
    run_cells(cells).into_iter().collect()
}

/// Monte Carlo mean of ‖α̂_R − α‖² for a fixed scalar k on a fixed design.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloMean {
    pub mean: f64,
    pub std_error: f64,
}

pub fn replicate_fixed_k(
    truth: &SimulationTruth,
    sigma2: f64,
    k: f64,
    replications: usize,
    seed: u64,
) -> Result<MonteCarloMean> {
    if replications == 0 {
        return Err(Error::InvalidArgument(
            "replications must be at least 1".into(),
        ));
    }
    if !(k >= 0.0 && k.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "invalid ridge parameter {k}"
        )));
    }
    let n = truth.design.n();
    let df = n - truth.design.p();
    let errs = collect_replications(replications, |r| {
        let mut stream = RandomStream::new(seed, replication_stream(r));
        let y = response(truth, sigma2.sqrt(), &mut stream);
        let model = truth.design.fit(&y, df)?;
        let fitted = shrink(model.lambdas(), model.alpha_ols().as_slice(), |_| k);
        Ok(sq_dist(&fitted, &truth.alpha))
    })?;
    let (mean, std_error) = mean_and_se(errs.iter().copied(), errs.len());
    Ok(MonteCarloMean { mean, std_error })
}

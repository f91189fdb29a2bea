/*
Copyright 2026 The slrcov Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

//! Replication harness: generate a population covariance, sample, fit and
//! score, many times over with derived seeds.

use rayon::prelude::*;
use serde::Serialize;

use crate::datagen::{
    derive_seed, gen_banded_cov, gen_block_cov, sample_covariance, sample_gaussian,
};
use crate::datagen::{BandedModelSpec, BlockModelSpec};
use crate::error::{Error, Result};
use crate::linalg::SymMatrix;
use crate::metrics::{rate_fit, RateFit, RecoveryMetrics};
use crate::solver::{solve, SolverConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum PopulationModel {
    Block { p: usize, k: usize },
    Banded { p: usize },
}

impl PopulationModel {
    pub fn p(&self) -> usize {
        match *self {
            PopulationModel::Block { p, .. } | PopulationModel::Banded { p } => p,
        }
    }

    /// The banded model ignores `seed`.
    pub fn generate(&self, seed: u64) -> Result<SymMatrix> {
        match *self {
            PopulationModel::Block { p, k } => gen_block_cov(&BlockModelSpec { p, k, seed }),
            PopulationModel::Banded { p } => Ok(gen_banded_cov(&BandedModelSpec { p })),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentSpec {
    pub model: PopulationModel,
    pub n: usize,
    pub solver: SolverConfig,
    pub replications: usize,
    pub base_seed: u64,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        if self.replications == 0 {
            return Err(Error::InvalidArgument(
                "replications must be at least 1".into(),
            ));
        }
        if self.n < 2 {
            return Err(Error::InvalidArgument(format!(
                "n must be at least 2, got {}",
                self.n
            )));
        }
        if let PopulationModel::Block { p, k } = self.model {
            if k == 0 || k > p {
                return Err(Error::InvalidArgument(format!("k exceeds p ({k} > {p})")));
            }
        }
        self.solver.validate()
    }
}

/// One row of the per-run table.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RunRecord {
    pub run: usize,
    pub seed: u64,
    pub p: usize,
    pub ar_true: usize,
    pub ar_est: usize,
    pub sp_true: f64,
    pub sp_est: f64,
    pub fpr: f64,
    pub tpr: f64,
    pub time_s: f64,
    pub frob_error: f64,
    pub iterations: usize,
    pub converged: bool,
    pub fpr_undefined: bool,
    pub tpr_undefined: bool,
    pub conventional_fpr: f64,
    pub conventional_tpr: f64,
}

impl RunRecord {
    fn new(run: usize, seed: u64, p: usize, m: &RecoveryMetrics) -> Self {
        RunRecord {
            run,
            seed,
            p,
            ar_true: m.ar_true,
            ar_est: m.ar_est,
            sp_true: m.sp_true,
            sp_est: m.sp_est,
            fpr: m.fpr,
            tpr: m.tpr,
            time_s: m.wall_seconds,
            frob_error: m.frob_error,
            iterations: m.iterations,
            converged: m.converged,
            fpr_undefined: m.fpr_undefined,
            tpr_undefined: m.tpr_undefined,
            conventional_fpr: m.conventional_fpr,
            conventional_tpr: m.conventional_tpr,
        }
    }
}

/// Averages over replications, in table column order.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SummaryRow {
    pub p: usize,
    pub ar_true: f64,
    pub ar_est: f64,
    pub sp_true: f64,
    pub sp_est: f64,
    pub fpr: f64,
    pub tpr: f64,
    pub time_s: f64,
}

impl SummaryRow {
    pub fn mean_of(p: usize, runs: &[RunRecord]) -> Self {
        let mean = |f: fn(&RunRecord) -> f64| runs.iter().map(f).sum::<f64>() / runs.len() as f64;
        SummaryRow {
            p,
            ar_true: mean(|r| r.ar_true as f64),
            ar_est: mean(|r| r.ar_est as f64),
            sp_true: mean(|r| r.sp_true),
            sp_est: mean(|r| r.sp_est),
            fpr: mean(|r| r.fpr),
            tpr: mean(|r| r.tpr),
            time_s: mean(|r| r.time_s),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentOutcome {
    pub runs: Vec<RunRecord>,
    pub summary: SummaryRow,
}

impl ExperimentOutcome {
    pub fn mean_frob_error(&self) -> f64 {
        self.runs.iter().map(|r| r.frob_error).sum::<f64>() / self.runs.len() as f64
    }

    pub fn converged_runs(&self) -> usize {
        self.runs.iter().filter(|r| r.converged).count()
    }

    pub fn mean_iterations(&self) -> f64 {
        self.runs.iter().map(|r| r.iterations as f64).sum::<f64>() / self.runs.len() as f64
    }
}

/// Population covariance and sample covariance of replication `run`.
pub fn replication_data(spec: &ExperimentSpec, run: usize) -> Result<(u64, SymMatrix, SymMatrix)> {
    let seed = derive_seed(spec.base_seed, run as u64);
    let truth = spec.model.generate(derive_seed(seed, 0))?;
    let samples = sample_gaussian(&truth, spec.n, derive_seed(seed, 1))?;
    let sample_cov = sample_covariance(&samples)?;
    Ok((seed, truth, sample_cov))
}

pub fn run_replication(spec: &ExperimentSpec, run: usize) -> Result<RunRecord> {
    let (seed, truth, sample_cov) = replication_data(spec, run)?;
    let result = solve(&sample_cov, &spec.solver)?;
    let metrics = RecoveryMetrics::evaluate(&truth, &result)?;
    Ok(RunRecord::new(run, seed, spec.model.p(), &metrics))
}

/// Runs all replications (in parallel) and averages them. A hard failure
/// in any run aborts the experiment with that run's index; non-convergence
/// is only recorded.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentOutcome> {
    spec.validate()?;
    let runs = (0..spec.replications)
        .into_par_iter()
        .map(|run| {
            run_replication(spec, run).map_err(|e| Error::RunFailed {
                run,
                source: Box::new(e),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let summary = SummaryRow::mean_of(spec.model.p(), &runs);
    Ok(ExperimentOutcome { runs, summary })
}

#[derive(Clone, Debug)]
pub struct RateSpec {
    pub model: PopulationModel,
    pub sample_sizes: Vec<usize>,
    pub solver: SolverConfig,
    pub replications: usize,
    pub base_seed: u64,
    /// When set to `n₀`, the solver's λ and τ apply at `n₀` and are scaled
    /// by `√(n₀/n)` at sample size `n`. Fixed penalties leave a bias that
    /// does not shrink with `n`.
    pub penalty_reference_n: Option<usize>,
}

impl RateSpec {
    /// Solver configuration used at sample size `n`.
    pub fn solver_at(&self, n: usize) -> SolverConfig {
        let mut config = self.solver.clone();
        if let Some(n0) = self.penalty_reference_n {
            let factor = (n0 as f64 / n as f64).sqrt();
            config.lambda *= factor;
            config.tau *= factor;
        }
        config
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RatePoint {
    pub n: usize,
    pub mean_frob_error: f64,
}

#[derive(Clone, Debug)]
pub struct RateOutcome {
    pub points: Vec<RatePoint>,
    pub fit: RateFit,
}

fn check_sample_sizes(sizes: &[usize]) -> Result<()> {
    if sizes.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "rate study needs at least 3 sample sizes, got {}",
            sizes.len()
        )));
    }
    let mut sorted = sizes.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != sizes.len() {
        return Err(Error::InvalidArgument(
            "sample sizes must be distinct".into(),
        ));
    }
    Ok(())
}

/// Mean Frobenius error for each sample size, and the fitted log-log slope.
/// Replication `r` uses the same population covariance at every `n`.
pub fn run_rate(spec: &RateSpec) -> Result<RateOutcome> {
    check_sample_sizes(&spec.sample_sizes)?;
    if spec.penalty_reference_n == Some(0) {
        return Err(Error::InvalidArgument(
            "penalty reference n must be positive".into(),
        ));
    }
    let mut points = Vec::with_capacity(spec.sample_sizes.len());
    for &n in &spec.sample_sizes {
        let outcome = run_experiment(&ExperimentSpec {
            model: spec.model,
            n,
            solver: spec.solver_at(n),
            replications: spec.replications,
            base_seed: spec.base_seed,
        })?;
        points.push(RatePoint {
            n,
            mean_frob_error: outcome.mean_frob_error(),
        });
    }
    fit_points(points)
}

/// Rate study on exact `c / √n` errors, bypassing data generation.
pub fn synthetic_rate(sample_sizes: &[usize], scale: f64) -> Result<RateOutcome> {
    check_sample_sizes(sample_sizes)?;
    let points = sample_sizes
        .iter()
        .map(|&n| RatePoint {
            n,
            mean_frob_error: scale / (n as f64).sqrt(),
        })
        .collect();
    fit_points(points)
}

fn fit_points(points: Vec<RatePoint>) -> Result<RateOutcome> {
    let pairs: Vec<(usize, f64)> = points.iter().map(|p| (p.n, p.mean_frob_error)).collect();
    let fit = rate_fit(&pairs)?;
    Ok(RateOutcome { points, fit })
}

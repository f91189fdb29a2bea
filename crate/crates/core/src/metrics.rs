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

//! Recovery metrics: sparsity, approximate rank, the selection rates FPR and
//! TPR, Frobenius error, and a log-log rate fit.
//!
//! FPR and TPR follow the predicted-count convention: their denominators are
//! the numbers of entries the *estimate* sets to zero and nonzero,
//!
//! ```text
//! FPR = #{σ0_ij ≠ 0, σ̂_ij = 0} / #{σ̂_ij = 0}
//! TPR = #{σ0_ij ≠ 0, σ̂_ij ≠ 0} / #{σ̂_ij ≠ 0}
//! ```
//!
//! The textbook rates, normalized by the true zero and nonzero counts, are
//! reported separately as `conventional_fpr` and `conventional_tpr`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{approximate_rank, SymMatrix, DEFAULT_RANK_GAMMA};
use crate::solver::SolveResult;

/// Zero tolerance for matrices that went through a PSD projection.
pub const PROJECTED_ZERO_TOL: f64 = 1e-8;

/// Fraction of entries with `|a_ij| > zero_tol`.
pub fn sparsity(m: &SymMatrix, zero_tol: f64) -> f64 {
    let n = m.dim();
    if n == 0 {
        return 0.0;
    }
    count_nonzero(m, zero_tol) as f64 / (n * n) as f64
}

fn count_nonzero(m: &SymMatrix, zero_tol: f64) -> usize {
    m.as_slice().iter().filter(|x| x.abs() > zero_tol).count()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct SelectionRates {
    pub fpr: f64,
    pub tpr: f64,
    /// The estimate has no zero entries, so `fpr` is reported as 0.
    pub fpr_undefined: bool,
    /// The estimate has no nonzero entries, so `tpr` is reported as 0.
    pub tpr_undefined: bool,
    pub conventional_fpr: f64,
    pub conventional_tpr: f64,
}

/// Counts of the 2×2 support confusion table, indexed by
/// (truth nonzero, estimate nonzero).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SupportCounts {
    pub true_nonzero_est_nonzero: usize,
    pub true_nonzero_est_zero: usize,
    pub true_zero_est_nonzero: usize,
    pub true_zero_est_zero: usize,
}

pub fn support_counts(
    truth: &SymMatrix,
    estimate: &SymMatrix,
    zero_tol: f64,
) -> Result<SupportCounts> {
    truth.ensure_same_dim(estimate)?;
    let mut c = SupportCounts::default();
    for (&t, &e) in truth.as_slice().iter().zip(estimate.as_slice()) {
        match (t.abs() > zero_tol, e.abs() > zero_tol) {
            (true, true) => c.true_nonzero_est_nonzero += 1,
            (true, false) => c.true_nonzero_est_zero += 1,
            (false, true) => c.true_zero_est_nonzero += 1,
            (false, false) => c.true_zero_est_zero += 1,
        }
    }
    Ok(c)
}

fn ratio(num: usize, den: usize) -> (f64, bool) {
    if den == 0 {
        (0.0, true)
    } else {
        (num as f64 / den as f64, false)
    }
}

pub fn fpr_tpr(truth: &SymMatrix, estimate: &SymMatrix, zero_tol: f64) -> Result<SelectionRates> {
    let c = support_counts(truth, estimate, zero_tol)?;
    let est_zero = c.true_nonzero_est_zero + c.true_zero_est_zero;
    let est_nonzero = c.true_nonzero_est_nonzero + c.true_zero_est_nonzero;
    let (fpr, fpr_undefined) = ratio(c.true_nonzero_est_zero, est_zero);
    let (tpr, tpr_undefined) = ratio(c.true_nonzero_est_nonzero, est_nonzero);
    let (conventional_fpr, _) = ratio(
        c.true_zero_est_nonzero,
        c.true_zero_est_nonzero + c.true_zero_est_zero,
    );
    let (conventional_tpr, _) = ratio(
        c.true_nonzero_est_nonzero,
        c.true_nonzero_est_nonzero + c.true_nonzero_est_zero,
    );
    Ok(SelectionRates {
        fpr,
        tpr,
        fpr_undefined,
        tpr_undefined,
        conventional_fpr,
        conventional_tpr,
    })
}

/// `‖estimate - truth‖_F`
pub fn frobenius_error(truth: &SymMatrix, estimate: &SymMatrix) -> Result<f64> {
    truth.ensure_same_dim(estimate)?;
    Ok(estimate.distance(truth))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
}

/// Least-squares line through `(ln n, ln error)`.
pub fn rate_fit(points: &[(usize, f64)]) -> Result<RateFit> {
    if points.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "rate fit needs at least 3 points, got {}",
            points.len()
        )));
    }
    if let Some(&(n, e)) = points
        .iter()
        .find(|&&(n, e)| n == 0 || !(e > 0.0) || !e.is_finite())
    {
        return Err(Error::InvalidArgument(format!(
            "rate fit needs n > 0 and finite positive errors, got ({n}, {e})"
        )));
    }
    let xs: Vec<f64> = points.iter().map(|&(n, _)| (n as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, e)| e.ln()).collect();
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument(
            "rate fit needs distinct sample sizes".into(),
        ));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    Ok(RateFit {
        slope,
        intercept: my - slope * mx,
    })
}

/// Everything reported for one fitted replication.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RecoveryMetrics {
    pub frob_error: f64,
    pub sp_true: f64,
    pub sp_est: f64,
    pub ar_true: usize,
    pub ar_est: usize,
    pub fpr: f64,
    pub tpr: f64,
    pub fpr_undefined: bool,
    pub tpr_undefined: bool,
    pub conventional_fpr: f64,
    pub conventional_tpr: f64,
    pub iterations: usize,
    pub converged: bool,
    pub wall_seconds: f64,
}

impl RecoveryMetrics {
    /// Scores a solve against the population covariance.
    ///
    /// Sparsity and selection rates are read from the sparse `Σ` iterate with
    /// zero tolerance 0; approximate rank and Frobenius error from the PSD
    /// estimate.
    pub fn evaluate(truth: &SymMatrix, result: &SolveResult) -> Result<Self> {
        let rates = fpr_tpr(truth, &result.sparse_estimate, 0.0)?;
        Ok(RecoveryMetrics {
            frob_error: frobenius_error(truth, &result.estimate)?,
            sp_true: sparsity(truth, 0.0),
            sp_est: sparsity(&result.sparse_estimate, 0.0),
            ar_true: approximate_rank(truth, DEFAULT_RANK_GAMMA)?,
            ar_est: approximate_rank(&result.estimate, DEFAULT_RANK_GAMMA)?,
            fpr: rates.fpr,
            tpr: rates.tpr,
            fpr_undefined: rates.fpr_undefined,
            tpr_undefined: rates.tpr_undefined,
            conventional_fpr: rates.conventional_fpr,
            conventional_tpr: rates.conventional_tpr,
            iterations: result.iterations,
            converged: result.converged,
            wall_seconds: result.wall_seconds,
        })
    }
}

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

//! Proximal maps used by the ADMM iteration and the soft-thresholding
//! estimator used as a warm start.

use crate::error::{Error, Result};
use crate::linalg::{psd_project, SymMatrix};

/// Which entries the ℓ1 penalty acts on.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Penalty {
    /// Every entry, diagonal included.
    #[default]
    Full,
    /// Off-diagonal entries only; the diagonal passes through unshrunk.
    OffDiagonal,
}

impl Penalty {
    pub fn from_penalize_diagonal(penalize_diagonal: bool) -> Self {
        if penalize_diagonal {
            Penalty::Full
        } else {
            Penalty::OffDiagonal
        }
    }

    /// The ℓ1 penalty value of `m` under this pattern.
    pub fn l1(self, m: &SymMatrix) -> f64 {
        match self {
            Penalty::Full => m.l1_norm(),
            Penalty::OffDiagonal => m.l1_norm_off_diagonal(),
        }
    }
}

#[inline]
fn soft(x: f64, threshold: f64) -> f64 {
    if x > threshold {
        x - threshold
    } else if x < -threshold {
        x + threshold
    } else {
        0.0
    }
}

fn check_threshold(threshold: f64) -> Result<()> {
    if threshold >= 0.0 && threshold.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "shrinkage threshold must be finite and non-negative, got {threshold}"
        )))
    }
}

/// Entrywise soft thresholding `max(|m_ij| - t, 0) · sign(m_ij)` over all
/// entries, with `sign(0) = 0`.
pub fn shrink(m: &SymMatrix, threshold: f64) -> Result<SymMatrix> {
    shrink_with(m, threshold, Penalty::Full)
}

pub fn shrink_with(m: &SymMatrix, threshold: f64, penalty: Penalty) -> Result<SymMatrix> {
    check_threshold(threshold)?;
    Ok(match penalty {
        Penalty::Full => m.map(|x| soft(x, threshold)),
        Penalty::OffDiagonal => {
            m.map_indexed(|i, j, x| if i == j { x } else { soft(x, threshold) })
        }
    })
}

/// Γ-update: `(Σᵏ + μΛᵏ - μτI)₊`.
pub fn gamma_step(
    sigma_k: &SymMatrix,
    lambda_k: &SymMatrix,
    mu: f64,
    tau: f64,
) -> Result<SymMatrix> {
    sigma_k.ensure_same_dim(lambda_k)?;
    check_mu(mu)?;
    psd_project(&sigma_k.add_scaled(mu, lambda_k).shift_diagonal(-mu * tau))
}

/// Σ-update: `μ/(μ+1) · Shrink(Σ_n + Γᵏ⁺¹/μ - Λᵏ, λ)`.
pub fn sigma_step(
    sample_cov: &SymMatrix,
    gamma_next: &SymMatrix,
    lambda_k: &SymMatrix,
    mu: f64,
    lambda: f64,
) -> Result<SymMatrix> {
    sigma_step_with(sample_cov, gamma_next, lambda_k, mu, lambda, Penalty::Full)
}

pub fn sigma_step_with(
    sample_cov: &SymMatrix,
    gamma_next: &SymMatrix,
    lambda_k: &SymMatrix,
    mu: f64,
    lambda: f64,
    penalty: Penalty,
) -> Result<SymMatrix> {
    sample_cov.ensure_same_dim(gamma_next)?;
    sample_cov.ensure_same_dim(lambda_k)?;
    check_mu(mu)?;
    let p = sample_cov
        .add_scaled(1.0 / mu, gamma_next)
        .add_scaled(-1.0, lambda_k);
    let factor = mu / (mu + 1.0);
    Ok(shrink_with(&p, lambda, penalty)?.scale(factor))
}

/// `Σ_st = Shrink(Σ_n - τI, λ)`, the minimizer of
/// `½‖Σ - (Σ_n - τI)‖²_F + λ‖Σ‖₁` without the PSD constraint. It is not
/// PSD in general.
pub fn soft_threshold_estimator(
    sample_cov: &SymMatrix,
    lambda: f64,
    tau: f64,
) -> Result<SymMatrix> {
    soft_threshold_estimator_with(sample_cov, lambda, tau, Penalty::Full)
}

pub fn soft_threshold_estimator_with(
    sample_cov: &SymMatrix,
    lambda: f64,
    tau: f64,
    penalty: Penalty,
) -> Result<SymMatrix> {
    shrink_with(&sample_cov.shift_diagonal(-tau), lambda, penalty)
}

fn check_mu(mu: f64) -> Result<()> {
    if mu > 0.0 && mu.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "mu must be positive, got {mu}"
        )))
    }
}

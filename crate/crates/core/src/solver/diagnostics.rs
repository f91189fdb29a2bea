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

//! Optimality diagnostics: objective value, KKT residuals and the weighted
//! norm under which the ADMM iterates contract.

use serde::Serialize;

use crate::error::Result;
use crate::linalg::{eigh, nuclear_norm, SymMatrix};
use crate::operators::Penalty;

/// `½‖m - Σ_n‖²_F + λ‖m‖₁ + τ‖m‖_*`.
pub fn objective(m: &SymMatrix, sample_cov: &SymMatrix, lambda: f64, tau: f64) -> Result<f64> {
    objective_with(m, sample_cov, lambda, tau, Penalty::Full)
}

pub fn objective_with(
    m: &SymMatrix,
    sample_cov: &SymMatrix,
    lambda: f64,
    tau: f64,
    penalty: Penalty,
) -> Result<f64> {
    m.ensure_same_dim(sample_cov)?;
    let fit = 0.5 * m.distance(sample_cov).powi(2);
    Ok(fit + lambda * penalty.l1(m) + tau * nuclear_norm(m)?)
}

/// Objective of a PSD matrix, using `‖m‖_* = tr(m)`.
pub(crate) fn objective_psd(
    m: &SymMatrix,
    sample_cov: &SymMatrix,
    lambda: f64,
    tau: f64,
    penalty: Penalty,
) -> f64 {
    0.5 * m.distance(sample_cov).powi(2) + lambda * penalty.l1(m) + tau * m.trace()
}

/// `(1/μ)‖v_lambda‖²_F + μ‖v_sigma‖²_F`, the squared norm of the pair
/// `V = (Λ, Σ)` under `H = Diag(I/μ, μI)`.
///
/// At `μ = 1` the ADMM iterates contract towards any solution in this norm.
/// For other `μ` the contraction holds with the two weights exchanged, not
/// necessarily with these.
pub fn h_norm_sq(v_lambda: &SymMatrix, v_sigma: &SymMatrix, mu: f64) -> f64 {
    v_lambda.frobenius_norm_sq() / mu + mu * v_sigma.frobenius_norm_sq()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct KktResiduals {
    /// Violation of `Λ ∈ τ·∂‖Γ‖_* + N_{PSD}(Γ)`.
    pub gamma_stationarity: f64,
    /// Violation of `(Σ_n - Σ - Λ)/λ ∈ ∂‖Σ‖₁` (entrywise max).
    pub sigma_stationarity: f64,
    /// `‖Σ - Γ‖_F`
    pub consensus: f64,
}

impl KktResiduals {
    pub fn max(&self) -> f64 {
        self.gamma_stationarity
            .max(self.sigma_stationarity)
            .max(self.consensus)
    }
}

/// KKT residuals of a candidate primal-dual point `(Σ̂, Γ̂, Λ̂)`.
pub fn kkt_residuals(
    estimate: &SymMatrix,
    dual: &SymMatrix,
    gamma: &SymMatrix,
    sample_cov: &SymMatrix,
    lambda: f64,
    tau: f64,
) -> Result<KktResiduals> {
    kkt_residuals_with(
        estimate,
        dual,
        gamma,
        sample_cov,
        lambda,
        tau,
        Penalty::Full,
    )
}

pub fn kkt_residuals_with(
    estimate: &SymMatrix,
    dual: &SymMatrix,
    gamma: &SymMatrix,
    sample_cov: &SymMatrix,
    lambda: f64,
    tau: f64,
    penalty: Penalty,
) -> Result<KktResiduals> {
    estimate.ensure_same_dim(dual)?;
    estimate.ensure_same_dim(gamma)?;
    estimate.ensure_same_dim(sample_cov)?;
    Ok(KktResiduals {
        gamma_stationarity: gamma_stationarity(dual, gamma, tau)?,
        sigma_stationarity: sigma_stationarity(estimate, dual, sample_cov, lambda, penalty),
        consensus: estimate.distance(gamma),
    })
}

fn sigma_stationarity(
    estimate: &SymMatrix,
    dual: &SymMatrix,
    sample_cov: &SymMatrix,
    lambda: f64,
    penalty: Penalty,
) -> f64 {
    let n = estimate.dim();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let residual = sample_cov.get(i, j) - estimate.get(i, j) - dual.get(i, j);
            let unpenalized = lambda == 0.0 || (penalty == Penalty::OffDiagonal && i == j);
            let violation = if unpenalized {
                residual.abs()
            } else {
                let g = residual / lambda;
                let s = estimate.get(i, j);
                if s != 0.0 {
                    (g - s.signum()).abs()
                } else {
                    (g.abs() - 1.0).max(0.0)
                }
            };
            worst = worst.max(violation);
        }
    }
    worst
}

/// On the range of `Γ` the dual must act as `τI`; on its null space the
/// compressed dual `Q_nᵀ Λ Q_n` must satisfy `λ_max ≤ τ`. Returns the larger
/// of the two deviations.
fn gamma_stationarity(dual: &SymMatrix, gamma: &SymMatrix, tau: f64) -> Result<f64> {
    let n = gamma.dim();
    if n == 0 {
        return Ok(0.0);
    }
    let eig = eigh(gamma)?;
    let cutoff = 1e-9 * eig.max_eigenvalue().abs().max(1.0);

    let mut range_dev: f64 = 0.0;
    let mut null_basis: Vec<&[f64]> = Vec::new();
    let mut null_images: Vec<Vec<f64>> = Vec::new();
    for (j, &value) in eig.eigenvalues().iter().enumerate() {
        let u = eig.eigenvector(j);
        let image = apply(dual, u);
        if value > cutoff {
            let dev = image
                .iter()
                .zip(u)
                .map(|(w, x)| (w - tau * x).powi(2))
                .sum::<f64>()
                .sqrt();
            range_dev = range_dev.max(dev);
        } else {
            null_basis.push(u);
            null_images.push(image);
        }
    }

    let k = null_basis.len();
    if k == 0 {
        return Ok(range_dev);
    }
    let mut compressed = Vec::with_capacity(k * k);
    for a in &null_basis {
        for w in &null_images {
            compressed.push(a.iter().zip(w).map(|(x, y)| x * y).sum::<f64>());
        }
    }
    let compressed = SymMatrix::from_row_major(k, compressed)?;
    let null_violation = (eigh(&compressed)?.max_eigenvalue() - tau).max(0.0);
    Ok(range_dev.max(null_violation))
}

fn apply(m: &SymMatrix, v: &[f64]) -> Vec<f64> {
    (0..m.dim())
        .map(|i| m.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

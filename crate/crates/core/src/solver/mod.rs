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

//! ADMM for
//!
//! ```text
//! min_Σ  ½‖Σ - Σ_n‖²_F + λ‖Σ‖₁ + τ‖Σ‖_*   s.t.  Σ ⪰ 0
//! ```
//!
//! split as `Σ = Γ` with the PSD constraint and nuclear norm on `Γ`. Each
//! iteration runs, in order,
//!
//! ```text
//! Γᵏ⁺¹ = (Σᵏ + μΛᵏ - μτI)₊
//! Σᵏ⁺¹ = μ/(μ+1) · Shrink(Σ_n + Γᵏ⁺¹/μ - Λᵏ, λ)
//! Λᵏ⁺¹ = Λᵏ - (Γᵏ⁺¹ - Σᵏ⁺¹)/μ
//! ```
//!
//! and stops once `max(‖Γᵏ⁺¹ - Γᵏ‖_F, ‖Σᵏ⁺¹ - Σᵏ‖_F) ≤ tol`.

mod diagnostics;

pub use diagnostics::{
    h_norm_sq, kkt_residuals, kkt_residuals_with, objective, objective_with, KktResiduals,
};

use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{eigh, SymMatrix};
use crate::operators::{gamma_step, sigma_step_with, soft_threshold_estimator_with, Penalty};

/// Starting point `Σ⁰`.
#[derive(Clone, Debug, Default, PartialEq)]
pub enum InitMode {
    #[default]
    Zero,
    /// The soft-thresholding estimator `Shrink(Σ_n - τI, λ)`.
    SoftThreshold,
    Custom(SymMatrix),
}

/// Starting multiplier `Λ⁰`.
#[derive(Clone, Debug, Default, PartialEq)]
pub enum DualInit {
    #[default]
    AllOnes,
    Zero,
    Custom(SymMatrix),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    /// Weight of the elementwise ℓ1 penalty.
    pub lambda: f64,
    /// Weight of the nuclear-norm penalty.
    pub tau: f64,
    /// Penalty parameter of the augmented Lagrangian.
    pub mu: f64,
    pub tol: f64,
    pub max_iter: usize,
    pub init_mode: InitMode,
    pub lambda0_mode: DualInit,
    pub penalize_diagonal: bool,
    /// Record `‖Vᵏ⁺¹ - Vᵏ‖²_H` for each step in [`AdmmState::h_distance`].
    pub track_h_distance: bool,
    /// Keep per-iteration [`TraceRow`]s in the result.
    pub record_trace: bool,
    /// With `InitMode::SoftThreshold`, return `Σ_st` directly when it is
    /// already PSD (it is then the exact minimizer).
    pub soft_threshold_shortcut: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            lambda: 0.0,
            tau: 0.0,
            mu: 1.0,
            tol: 5e-4,
            max_iter: 1000,
            init_mode: InitMode::Zero,
            lambda0_mode: DualInit::AllOnes,
            penalize_diagonal: true,
            track_h_distance: false,
            record_trace: false,
            soft_threshold_shortcut: false,
        }
    }
}

impl SolverConfig {
    pub fn new(lambda: f64, tau: f64) -> Self {
        SolverConfig {
            lambda,
            tau,
            ..Default::default()
        }
    }

    pub fn with_mu(mut self, mu: f64) -> Self {
        self.mu = mu;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn with_init(mut self, init_mode: InitMode) -> Self {
        self.init_mode = init_mode;
        self
    }

    pub fn with_dual_init(mut self, lambda0_mode: DualInit) -> Self {
        self.lambda0_mode = lambda0_mode;
        self
    }

    pub fn with_trace(mut self) -> Self {
        self.record_trace = true;
        self
    }

    pub fn penalty(&self) -> Penalty {
        Penalty::from_penalize_diagonal(self.penalize_diagonal)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return bad(format!(
                "lambda must be finite and >= 0, got {}",
                self.lambda
            ));
        }
        if !(self.tau >= 0.0 && self.tau.is_finite()) {
            return bad(format!("tau must be finite and >= 0, got {}", self.tau));
        }
        if !(self.mu > 0.0 && self.mu.is_finite()) {
            return bad(format!("mu must be finite and > 0, got {}", self.mu));
        }
        if !(self.tol > 0.0) {
            return bad(format!("tol must be > 0, got {}", self.tol));
        }
        if self.max_iter == 0 {
            return bad("max_iter must be at least 1".to_string());
        }
        Ok(())
    }
}

/// One ADMM iterate `(Σᵏ, Γᵏ, Λᵏ)` with the step sizes that produced it.
///
/// Only `Σᵏ` and `Λᵏ` feed the next step. `Γ⁰` is set to `Σ⁰`, which only
/// affects the first reported `residual_gamma`.
#[derive(Clone, Debug)]
pub struct AdmmState {
    pub sigma: SymMatrix,
    pub gamma: SymMatrix,
    pub dual: SymMatrix,
    pub iter: usize,
    /// `‖Γᵏ - Γᵏ⁻¹‖_F`, infinite before the first step.
    pub residual_gamma: f64,
    /// `‖Σᵏ - Σᵏ⁻¹‖_F`, infinite before the first step.
    pub residual_sigma: f64,
    /// `‖Γᵏ - Σᵏ‖_F`
    pub primal_gap: f64,
    /// `‖Vᵏ - Vᵏ⁻¹‖²_H` when tracking is enabled.
    pub h_distance: Option<f64>,
}

impl AdmmState {
    pub fn initialize(sample_cov: &SymMatrix, config: &SolverConfig) -> Result<Self> {
        let p = sample_cov.dim();
        let sigma = match &config.init_mode {
            InitMode::Zero => SymMatrix::zeros(p),
            InitMode::SoftThreshold => soft_threshold_estimator_with(
                sample_cov,
                config.lambda,
                config.tau,
                config.penalty(),
            )?,
            InitMode::Custom(m) => {
                sample_cov.ensure_same_dim(m)?;
                m.clone()
            }
        };
        let dual = match &config.lambda0_mode {
            DualInit::AllOnes => SymMatrix::filled(p, 1.0),
            DualInit::Zero => SymMatrix::zeros(p),
            DualInit::Custom(m) => {
                sample_cov.ensure_same_dim(m)?;
                m.clone()
            }
        };
        Ok(AdmmState {
            gamma: sigma.clone(),
            sigma,
            dual,
            iter: 0,
            residual_gamma: f64::INFINITY,
            residual_sigma: f64::INFINITY,
            primal_gap: 0.0,
            h_distance: None,
        })
    }

    /// The stopping quantity `max(residual_gamma, residual_sigma)`.
    pub fn max_residual(&self) -> f64 {
        self.residual_gamma.max(self.residual_sigma)
    }

    pub fn step(&self, sample_cov: &SymMatrix, config: &SolverConfig) -> Result<AdmmState> {
        step(self, sample_cov, config)
    }
}

/// One Γ, Σ, Λ update.
pub fn step(state: &AdmmState, sample_cov: &SymMatrix, config: &SolverConfig) -> Result<AdmmState> {
    sample_cov.ensure_same_dim(&state.sigma)?;
    let iteration = state.iter + 1;
    let mu = config.mu;
    let non_finite = || Error::NonFiniteIterate { iteration };

    if !state.sigma.is_finite() || !state.dual.is_finite() || !state.dual.scale(mu).is_finite() {
        return Err(non_finite());
    }
    let gamma = gamma_step(&state.sigma, &state.dual, mu, config.tau)?;
    let sigma = sigma_step_with(
        sample_cov,
        &gamma,
        &state.dual,
        mu,
        config.lambda,
        config.penalty(),
    )?;
    let dual = state.dual.add_scaled(-1.0 / mu, &(&gamma - &sigma));
    if !gamma.is_finite() || !sigma.is_finite() || !dual.is_finite() {
        return Err(non_finite());
    }

    let h_distance = config
        .track_h_distance
        .then(|| h_norm_sq(&(&dual - &state.dual), &(&sigma - &state.sigma), mu));
    Ok(AdmmState {
        residual_gamma: gamma.distance(&state.gamma),
        residual_sigma: sigma.distance(&state.sigma),
        primal_gap: gamma.distance(&sigma),
        h_distance,
        iter: iteration,
        sigma,
        gamma,
        dual,
    })
}

/// Per-iteration diagnostics. `objective` is evaluated at `Γᵏ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TraceRow {
    pub iter: usize,
    pub residual_gamma: f64,
    pub residual_sigma: f64,
    pub primal_gap: f64,
    pub objective: f64,
    pub h_distance: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    /// The final `Γ` iterate, PSD by construction.
    pub estimate: SymMatrix,
    /// The final `Σ` iterate, carrying the exact zeros of the shrinkage
    /// step. Sparsity patterns are read from this matrix.
    pub sparse_estimate: SymMatrix,
    pub dual: SymMatrix,
    pub iterations: usize,
    pub converged: bool,
    /// `(‖Γᵏ - Γᵏ⁻¹‖_F, ‖Σᵏ - Σᵏ⁻¹‖_F)` at exit.
    pub final_residuals: (f64, f64),
    pub primal_gap: f64,
    pub kkt_residuals: KktResiduals,
    /// Objective at `estimate`.
    pub objective: f64,
    pub trace: Option<Vec<TraceRow>>,
    /// True when the PSD soft-thresholding estimator was returned without
    /// iterating.
    pub shortcut: bool,
    pub wall_seconds: f64,
}

/// Runs ADMM from the configured starting point until the stopping rule
/// fires or `max_iter` steps have been taken.
///
/// Exhausting `max_iter` is not an error: the result has
/// `converged == false`. A non-finite iterate is.
pub fn solve(sample_cov: &SymMatrix, config: &SolverConfig) -> Result<SolveResult> {
    config.validate()?;
    if !sample_cov.is_finite() {
        return Err(Error::InvalidArgument(
            "sample covariance has non-finite entries".into(),
        ));
    }
    let start = Instant::now();
    let penalty = config.penalty();

    if config.soft_threshold_shortcut && config.init_mode == InitMode::SoftThreshold {
        if let Some(result) = try_shortcut(sample_cov, config, start)? {
            return Ok(result);
        }
    }

    let mut state = AdmmState::initialize(sample_cov, config)?;
    let mut trace = config.record_trace.then(Vec::new);
    let mut converged = false;
    while state.iter < config.max_iter {
        state = step(&state, sample_cov, config)?;
        if let Some(rows) = trace.as_mut() {
            rows.push(TraceRow {
                iter: state.iter,
                residual_gamma: state.residual_gamma,
                residual_sigma: state.residual_sigma,
                primal_gap: state.primal_gap,
                objective: diagnostics::objective_psd(
                    &state.gamma,
                    sample_cov,
                    config.lambda,
                    config.tau,
                    penalty,
                ),
                h_distance: state.h_distance,
            });
        }
        if state.max_residual() <= config.tol {
            converged = true;
            break;
        }
    }

    let kkt = kkt_residuals_with(
        &state.sigma,
        &state.dual,
        &state.gamma,
        sample_cov,
        config.lambda,
        config.tau,
        penalty,
    )?;
    let objective = objective_with(&state.gamma, sample_cov, config.lambda, config.tau, penalty)?;
    Ok(SolveResult {
        iterations: state.iter,
        converged,
        final_residuals: (state.residual_gamma, state.residual_sigma),
        primal_gap: state.primal_gap,
        kkt_residuals: kkt,
        objective,
        trace,
        shortcut: false,
        wall_seconds: start.elapsed().as_secs_f64(),
        estimate: state.gamma,
        sparse_estimate: state.sigma,
        dual: state.dual,
    })
}

fn try_shortcut(
    sample_cov: &SymMatrix,
    config: &SolverConfig,
    start: Instant,
) -> Result<Option<SolveResult>> {
    let penalty = config.penalty();
    let st = soft_threshold_estimator_with(sample_cov, config.lambda, config.tau, penalty)?;
    let min = eigh(&st)?.min_eigenvalue();
    if min < -1e-12 * st.frobenius_norm() {
        return Ok(None);
    }
    // At a PSD Σ_st the multiplier τI certifies optimality.
    let dual = SymMatrix::identity(st.dim()).scale(config.tau);
    let kkt = kkt_residuals_with(
        &st,
        &dual,
        &st,
        sample_cov,
        config.lambda,
        config.tau,
        penalty,
    )?;
    let objective = objective_with(&st, sample_cov, config.lambda, config.tau, penalty)?;
    Ok(Some(SolveResult {
        estimate: st.clone(),
        sparse_estimate: st,
        dual,
        iterations: 0,
        converged: true,
        final_residuals: (0.0, 0.0),
        primal_gap: 0.0,
        kkt_residuals: kkt,
        objective,
        trace: config.record_trace.then(Vec::new),
        shortcut: true,
        wall_seconds: start.elapsed().as_secs_f64(),
    }))
}

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

//! Simultaneously sparse and low-rank covariance estimation.
//!
//! Given a sample covariance `Σ_n`, the estimator is
//!
//! ```text
//! Σ̂ = argmin_{Σ ⪰ 0}  ½‖Σ - Σ_n‖²_F + λ‖Σ‖₁ + τ‖Σ‖_*
//! ```
//!
//! where `‖·‖₁` is the elementwise ℓ1 norm (diagonal included) and `‖·‖_*`
//! the nuclear norm. [`solver::solve`] computes it with an ADMM whose two
//! subproblems are a PSD projection and an entrywise soft threshold.
//!
//! ```
//! use slrcov::datagen::{gen_banded_cov, sample_covariance, sample_gaussian, BandedModelSpec};
//! use slrcov::solver::{solve, SolverConfig};
//!
//! let truth = gen_banded_cov(&BandedModelSpec { p: 20 });
//! let samples = sample_gaussian(&truth, 50, 1).unwrap();
//! let sample_cov = sample_covariance(&samples).unwrap();
//!
//! let fit = solve(&sample_cov, &SolverConfig::new(0.5, 0.75)).unwrap();
//! assert!(fit.converged);
//! assert!(fit.kkt_residuals.max() < 1e-2);
//! ```
//!
//! The guide under `book/` walks through the model, the algorithm and the
//! experiment harness; its code blocks are compiled as doc-tests of this
//! crate.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod datagen;
pub mod error;
pub mod experiment;
pub mod io;
pub mod linalg;
pub mod metrics;
pub mod operators;
pub mod solver;

pub use error::{Error, Result};
pub use linalg::SymMatrix;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/estimator.md")]
    mod estimator {}
    #[doc = include_str!("../../../book/src/linear-algebra.md")]
    mod linear_algebra {}
    #[doc = include_str!("../../../book/src/admm.md")]
    mod admm {}
    #[doc = include_str!("../../../book/src/data.md")]
    mod data {}
    #[doc = include_str!("../../../book/src/metrics.md")]
    mod metrics {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
    #[doc = include_str!("../../../book/src/formats.md")]
    mod formats {}
}

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

//! Dense symmetric linear algebra: eigendecomposition, projection onto the
//! PSD cone, PSD square roots, matrix norms and approximate rank.

mod eigen;
mod matrix;

pub use eigen::{eigh, eigh_with_sweep_cap, EigenDecomposition, MAX_SWEEPS, OFF_DIAGONAL_TOL};
pub use matrix::SymMatrix;

use serde::Serialize;

use crate::error::{Error, Result};

/// Default γ of [`approximate_rank`].
pub const DEFAULT_RANK_GAMMA: f64 = 1e-3;

/// Frobenius-nearest PSD matrix: `U · Diag(max(λ, 0)) · Uᵀ`.
pub fn psd_project(m: &SymMatrix) -> Result<SymMatrix> {
    Ok(eigh(m)?.reconstruct_with(|x| x.max(0.0)))
}

/// Symmetric PSD square root.
///
/// Eigenvalues in `[-1e-6 ‖m‖_F, 0)` are treated as rounding noise and
/// clamped to zero; anything more negative is rejected.
pub fn sqrt_psd(m: &SymMatrix) -> Result<SymMatrix> {
    let eig = eigh(m)?;
    let floor = -1e-6 * m.frobenius_norm();
    let min = eig.min_eigenvalue();
    if min < floor {
        return Err(Error::NotPsd {
            min_eigenvalue: min,
        });
    }
    Ok(eig.reconstruct_with(|x| x.max(0.0).sqrt()))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Norms {
    pub frobenius: f64,
    /// Sum of `|m_ij|` over all entries, diagonal included.
    pub l1_elementwise: f64,
    /// Sum of `|λ_i|`.
    pub nuclear: f64,
}

pub fn norms(m: &SymMatrix) -> Result<Norms> {
    Ok(Norms {
        frobenius: m.frobenius_norm(),
        l1_elementwise: m.l1_norm(),
        nuclear: nuclear_norm(m)?,
    })
}

pub fn nuclear_norm(m: &SymMatrix) -> Result<f64> {
    Ok(eigh(m)?.eigenvalues().iter().map(|x| x.abs()).sum())
}

/// Smallest `r` with `σ_{r+1} / σ_1 <= gamma`, where the singular values
/// `σ` are the absolute eigenvalues sorted in decreasing order and
/// `σ_{p+1} = 0`. The zero matrix has approximate rank 0.
pub fn approximate_rank(m: &SymMatrix, gamma: f64) -> Result<usize> {
    let eig = eigh(m)?;
    approximate_rank_from_eigenvalues(eig.eigenvalues(), gamma)
}

/// [`approximate_rank`] for a precomputed spectrum (any order, any sign).
pub fn approximate_rank_from_eigenvalues(eigenvalues: &[f64], gamma: f64) -> Result<usize> {
    if !(gamma > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "approximate rank needs gamma > 0, got {gamma}"
        )));
    }
    let mut singular: Vec<f64> = eigenvalues.iter().map(|x| x.abs()).collect();
    singular.sort_by(|a, b| b.total_cmp(a));
    let Some(&largest) = singular.first() else {
        return Ok(0);
    };
    if largest == 0.0 {
        return Ok(0);
    }
    let p = singular.len();
    let rank = (1..=p)
        .find(|&r| singular.get(r).copied().unwrap_or(0.0) / largest <= gamma)
        .unwrap_or(p);
    Ok(rank)
}

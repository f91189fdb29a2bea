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

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFiniteEntry { row: usize, col: usize },

    #[error(
        "Jacobi eigensolver did not converge for a {dim}x{dim} matrix \
         (off-diagonal residual {off_diagonal:e} after {sweeps} sweeps)"
    )]
    EigenNotConverged {
        dim: usize,
        off_diagonal: f64,
        sweeps: usize,
    },

    #[error("matrix not PSD: smallest eigenvalue {min_eigenvalue:e}")]
    NotPsd { min_eigenvalue: f64 },

    #[error("non-finite value in ADMM iterate at iteration {iteration}")]
    NonFiniteIterate { iteration: usize },

    #[error("parse error at line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("matrix is not square: {rows} rows, {cols} columns")]
    NotSquare { rows: usize, cols: usize },

    #[error("replication {run} failed: {source}")]
    RunFailed {
        run: usize,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures of the numerics (eigensolver, NaN iterates, non-PSD
    /// input to a square root), as opposed to bad arguments or I/O.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::EigenNotConverged { .. }
            | Error::NotPsd { .. }
            | Error::NonFiniteIterate { .. } => true,
            Error::RunFailed { source, .. } => source.is_numerical(),
            _ => false,
        }
    }

    pub fn is_io(&self) -> bool {
        match self {
            Error::Io(_) => true,
            Error::RunFailed { source, .. } => source.is_io(),
            _ => false,
        }
    }
}

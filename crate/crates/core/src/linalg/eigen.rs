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

use crate::error::{Error, Result};
use crate::linalg::SymMatrix;

/// Sweep cap of the cyclic Jacobi iteration.
pub const MAX_SWEEPS: usize = 100;

/// Convergence threshold on the off-diagonal Frobenius norm, relative to the
/// Frobenius norm of the input.
pub const OFF_DIAGONAL_TOL: f64 = 1e-12;

/// Eigenvalues in non-increasing order with matching orthonormal eigenvectors.
///
/// Each eigenvector is normalized so that its first component of magnitude
/// above `1e-12` is positive; together with the deterministic Jacobi sweep
/// order this makes the output reproducible bit for bit.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    values: Vec<f64>,
    // Row j holds eigenvector j, i.e. the storage is Uᵀ in row-major order.
    basis: Vec<f64>,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.values
    }

    /// Eigenvector `j` (unit 2-norm), aligned with `eigenvalues()[j]`.
    pub fn eigenvector(&self, j: usize) -> &[f64] {
        let n = self.dim();
        &self.basis[j * n..(j + 1) * n]
    }

    /// The eigenvector matrix `U` in row-major order; column `j` is
    /// eigenvector `j`.
    pub fn vectors(&self) -> Vec<f64> {
        let n = self.dim();
        let mut u = vec![0.0; n * n];
        for j in 0..n {
            for i in 0..n {
                u[i * n + j] = self.basis[j * n + i];
            }
        }
        u
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    /// `U · Diag(f(λ)) · Uᵀ`. Only the upper triangle is accumulated and then
    /// mirrored, so the result is exactly symmetric.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> SymMatrix {
        let n = self.dim();
        let mut out = vec![0.0; n * n];
        for (j, &lambda) in self.values.iter().enumerate() {
            let w = f(lambda);
            if w == 0.0 {
                continue;
            }
            let u = self.eigenvector(j);
            for i in 0..n {
                let c = w * u[i];
                if c == 0.0 {
                    continue;
                }
                let row = &mut out[i * n + i..(i + 1) * n];
                for (o, &uk) in row.iter_mut().zip(&u[i..]) {
                    *o += c * uk;
                }
            }
        }
        for i in 0..n {
            for k in (i + 1)..n {
                out[k * n + i] = out[i * n + k];
            }
        }
        SymMatrix::from_symmetric_unchecked(n, out)
    }

    pub fn reconstruct(&self) -> SymMatrix {
        self.reconstruct_with(|x| x)
    }
}

/// Symmetric eigendecomposition by cyclic Jacobi rotations.
///
/// Sweeps run in row-cyclic order until the off-diagonal Frobenius norm drops
/// to `OFF_DIAGONAL_TOL * ‖m‖_F`, failing after `MAX_SWEEPS` sweeps.
pub fn eigh(m: &SymMatrix) -> Result<EigenDecomposition> {
    eigh_with_sweep_cap(m, MAX_SWEEPS)
}

/// [`eigh`] with an explicit sweep cap.
pub fn eigh_with_sweep_cap(m: &SymMatrix, max_sweeps: usize) -> Result<EigenDecomposition> {
    let n = m.dim();
    let mut a = m.as_slice().to_vec();
    let mut basis = vec![0.0; n * n];
    for i in 0..n {
        basis[i * n + i] = 1.0;
    }

    let threshold = OFF_DIAGONAL_TOL * m.frobenius_norm();
    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&a, n);
        if off <= threshold {
            break;
        }
        if sweeps == max_sweeps {
            return Err(Error::EigenNotConverged {
                dim: n,
                off_diagonal: off,
                sweeps,
            });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut basis, n, p, q, sweeps >= 4);
            }
        }
        sweeps += 1;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j * n + j].total_cmp(&a[i * n + i]));

    let values = order.iter().map(|&i| a[i * n + i]).collect();
    let mut sorted = Vec::with_capacity(n * n);
    for &i in &order {
        let v = &basis[i * n..(i + 1) * n];
        let flip = v.iter().find(|x| x.abs() > 1e-12).is_some_and(|&x| x < 0.0);
        if flip {
            sorted.extend(v.iter().map(|x| -x));
        } else {
            sorted.extend_from_slice(v);
        }
    }
    Ok(EigenDecomposition {
        values,
        basis: sorted,
    })
}

fn off_diagonal_norm(a: &[f64], n: usize) -> f64 {
    let mut sum = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            sum += a[i * n + j] * a[i * n + j];
        }
    }
    (2.0 * sum).sqrt()
}

/// Annihilates `a[p][q]` with one plane rotation, updating `a` in place and
/// accumulating the rotation into rows `p`, `q` of `basis`.
fn rotate(a: &mut [f64], basis: &mut [f64], n: usize, p: usize, q: usize, allow_skip: bool) {
    let apq = a[p * n + q];
    if apq == 0.0 {
        return;
    }
    let app = a[p * n + p];
    let aqq = a[q * n + q];

    // Late sweeps: drop entries too small to change either diagonal element.
    let g = 100.0 * apq.abs();
    if allow_skip && app.abs() + g == app.abs() && aqq.abs() + g == aqq.abs() {
        a[p * n + q] = 0.0;
        a[q * n + p] = 0.0;
        return;
    }

    let h = aqq - app;
    let t = if h.abs() + g == h.abs() {
        apq / h
    } else {
        let theta = 0.5 * h / apq;
        let t = 1.0 / (theta.abs() + (theta * theta + 1.0).sqrt());
        if theta < 0.0 {
            -t
        } else {
            t
        }
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    {
        let (row_p, row_q) = two_rows_mut(a, n, p, q);
        for (x, y) in row_p.iter_mut().zip(row_q.iter_mut()) {
            let (xp, yq) = (*x, *y);
            *x = c * xp - s * yq;
            *y = s * xp + c * yq;
        }
    }
    a[p * n + p] = app - t * apq;
    a[q * n + q] = aqq + t * apq;
    a[p * n + q] = 0.0;
    a[q * n + p] = 0.0;
    for k in 0..n {
        if k != p && k != q {
            a[k * n + p] = a[p * n + k];
            a[k * n + q] = a[q * n + k];
        }
    }

    let (vp, vq) = two_rows_mut(basis, n, p, q);
    for (x, y) in vp.iter_mut().zip(vq.iter_mut()) {
        let (xp, yq) = (*x, *y);
        *x = c * xp - s * yq;
        *y = s * xp + c * yq;
    }
}

fn two_rows_mut(a: &mut [f64], n: usize, p: usize, q: usize) -> (&mut [f64], &mut [f64]) {
    debug_assert!(p < q);
    let (head, tail) = a.split_at_mut(q * n);
    (&mut head[p * n..(p + 1) * n], &mut tail[..n])
}

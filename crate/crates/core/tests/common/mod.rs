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

//! Test-only reference implementations. Nothing here calls into the
//! solver or the crate's eigensolver: eigendecompositions go through
//! nalgebra and the minimizers are computed by different algorithms.

#![allow(dead_code)]

use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;
use rand_distr::StandardNormal;
use slrcov::SymMatrix;

pub fn to_na(m: &SymMatrix) -> DMatrix<f64> {
    DMatrix::from_row_slice(m.dim(), m.dim(), m.as_slice())
}

pub fn from_na(m: &DMatrix<f64>) -> SymMatrix {
    let n = m.nrows();
    let data: Vec<f64> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| m[(i, j)])
        .collect();
    SymMatrix::from_row_major(n, data).unwrap()
}

pub fn na_eigenvalues(m: &SymMatrix) -> Vec<f64> {
    let mut v: Vec<f64> = SymmetricEigen::new(to_na(m))
        .eigenvalues
        .iter()
        .copied()
        .collect();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

fn na_project(m: &DMatrix<f64>) -> DMatrix<f64> {
    let eig = SymmetricEigen::new(m.clone());
    let clamped = eig.eigenvalues.map(|x| x.max(0.0));
    &eig.eigenvectors * DMatrix::from_diagonal(&clamped) * eig.eigenvectors.transpose()
}

pub fn na_psd_project(m: &SymMatrix) -> SymMatrix {
    from_na(&na_project(&to_na(m)))
}

fn soft(x: f64, t: f64) -> f64 {
    x.signum() * (x.abs() - t).max(0.0)
}

/// `½‖m - Σ_n‖²_F + λ‖m‖₁ + τ‖m‖_*` with the nuclear norm from nalgebra.
pub fn objective(m: &SymMatrix, sample_cov: &SymMatrix, lambda: f64, tau: f64) -> f64 {
    let nuclear: f64 = na_eigenvalues(m).iter().map(|x| x.abs()).sum();
    0.5 * m.distance(sample_cov).powi(2) + lambda * m.l1_norm() + tau * nuclear
}

/// Projected subgradient descent on the PSD cone with steps `1/k`.
///
/// On the cone `‖Σ‖_* = tr Σ`, so the objective there is
/// `½‖Σ - (Σ_n - τI)‖² + λ‖Σ‖₁ + const` and its subgradient is
/// `Σ - Σ_n + τI + λ·sign(Σ)`. Returns the best iterate seen.
pub fn projected_subgradient(
    sample_cov: &SymMatrix,
    lambda: f64,
    tau: f64,
    iterations: usize,
) -> SymMatrix {
    let n = sample_cov.dim();
    let target = to_na(sample_cov) - DMatrix::identity(n, n) * tau;
    let value = |x: &DMatrix<f64>| {
        0.5 * (x - &target).norm_squared() + lambda * x.iter().map(|v| v.abs()).sum::<f64>()
    };
    let mut x = DMatrix::zeros(n, n);
    let mut best = x.clone();
    let mut best_value = value(&x);
    for k in 1..=iterations {
        let g = (&x - &target) + x.map(|v| lambda * v.signum() * (v != 0.0) as u8 as f64);
        x = na_project(&(&x - g / k as f64));
        x = (&x + x.transpose()) * 0.5;
        let v = value(&x);
        if v < best_value {
            best_value = v;
            best = x.clone();
        }
    }
    from_na(&best)
}

/// The minimizer is `prox_{λ‖·‖₁ + ι_PSD}(Σ_n - τI)`; computed with the
/// Dykstra-like proximal splitting of Bauschke and Combettes, alternating an
/// entrywise soft threshold and an eigenvalue clamp until the iterate stops
/// moving.
pub fn dykstra_minimizer(sample_cov: &SymMatrix, lambda: f64, tau: f64) -> SymMatrix {
    let n = sample_cov.dim();
    let mut x = to_na(sample_cov) - DMatrix::identity(n, n) * tau;
    let mut p = DMatrix::zeros(n, n);
    let mut q = DMatrix::zeros(n, n);
    for _ in 0..2_000_000 {
        let y = (&x + &p).map(|v| soft(v, lambda));
        p = &x + &p - &y;
        let yq = &y + &q;
        let next = na_project(&yq);
        let next = (&next + next.transpose()) * 0.5;
        q = yq - &next;
        let moved = (&next - &x).norm();
        x = next;
        if moved < 1e-14 {
            break;
        }
    }
    from_na(&x)
}

pub fn random_symmetric<R: Rng>(rng: &mut R, p: usize, scale: f64) -> SymMatrix {
    let data: Vec<f64> = (0..p * p)
        .map(|_| scale * rng.sample::<f64, _>(StandardNormal))
        .collect();
    SymMatrix::from_row_major(p, data).unwrap()
}

/// `A Aᵀ / m` for a Gaussian `p × m` matrix with random `m`, so rank-deficient
/// instances occur.
pub fn random_sample_cov<R: Rng>(rng: &mut R, p: usize) -> SymMatrix {
    let m = rng.random_range(2..=p + 3);
    let a: Vec<f64> = (0..p * m)
        .map(|_| rng.sample::<f64, _>(StandardNormal))
        .collect();
    let mut data = vec![0.0; p * p];
    for i in 0..p {
        for j in 0..p {
            data[i * p + j] = (0..m).map(|l| a[i * m + l] * a[j * m + l]).sum::<f64>() / m as f64;
        }
    }
    SymMatrix::from_row_major(p, data).unwrap()
}

/// Minimum over 2×2 PSD `[[a, b], [b, c]]` with `a, c` on a grid of the
/// given step over `[0, bound]` of `f(a, b, c)`. For fixed `(a, c)` the best
/// `b` is the unconstrained optimum `b_opt(a, c)` clipped to `|b| ≤ √(ac)`,
/// valid whenever `f` is a convex quadratic in `b` with that optimum.
pub fn psd_grid_min_2x2(
    bound: f64,
    step: f64,
    b_opt: impl Fn(f64, f64) -> f64,
    f: impl Fn(f64, f64, f64) -> f64,
) -> (f64, [f64; 3]) {
    let steps = (bound / step).round() as usize;
    let mut best = (f64::INFINITY, [0.0; 3]);
    for ia in 0..=steps {
        let a = ia as f64 * step;
        for ic in 0..=steps {
            let c = ic as f64 * step;
            let r = (a * c).sqrt();
            let b = b_opt(a, c).clamp(-r, r);
            let v = f(a, b, c);
            if v < best.0 {
                best = (v, [a, b, c]);
            }
        }
    }
    best
}

/// Confusion counts by direct enumeration over index pairs.
pub fn brute_force_rates(truth: &SymMatrix, est: &SymMatrix) -> (f64, f64) {
    let n = truth.dim();
    let (mut tn_ez, mut ez, mut tn_en, mut en) = (0usize, 0usize, 0usize, 0usize);
    for i in 0..n {
        for j in 0..n {
            let t = truth.get(i, j) != 0.0;
            let e = est.get(i, j) != 0.0;
            if e {
                en += 1;
                if t {
                    tn_en += 1;
                }
            } else {
                ez += 1;
                if t {
                    tn_ez += 1;
                }
            }
        }
    }
    let r = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };
    (r(tn_ez, ez), r(tn_en, en))
}

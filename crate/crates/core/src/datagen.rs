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

//! Synthetic population covariances, Gaussian sampling and the sample
//! covariance.
//!
//! Randomness comes from `Xoshiro256PlusPlus` seeded through
//! `SeedableRng::seed_from_u64` (SplitMix64 expansion). Uniform variates use
//! `rand`'s `random_range`; standard normals use `rand_distr::StandardNormal`
//! (ziggurat). Both are portable, so a seed reproduces the same matrices on
//! every platform.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::error::{Error, Result};
use crate::linalg::{sqrt_psd, SymMatrix};

pub type ModelRng = Xoshiro256PlusPlus;

pub fn rng_from_seed(seed: u64) -> ModelRng {
    Xoshiro256PlusPlus::seed_from_u64(seed)
}

/// Mixes `(base, index)` into an independent 64-bit seed (SplitMix64
/// finalizer applied twice). Used for per-replication seeds so results do
/// not depend on scheduling order.
pub fn derive_seed(base: u64, index: u64) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }
    mix(base ^ mix(index))
}

/// Block-diagonal model with `k` rank-one blocks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockModelSpec {
    pub p: usize,
    pub k: usize,
    pub seed: u64,
}

/// Banded model `σ_ij = max(1 - |i - j|/10, 0)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BandedModelSpec {
    pub p: usize,
}

/// Bandwidth denominator of the banded model.
pub const BAND_WIDTH: f64 = 10.0;

/// Cut-point grouping used by [`gen_block_cov`]; see [`block_sizes`].
pub const BLOCK_CUT_GROUPING: usize = 4;

/// Partition `{0, .., p-1}` into `k` nonempty contiguous blocks.
///
/// Draws `k·g - 1` distinct cut points uniformly from `{1, .., p-1}` and
/// keeps every `g`-th one as a block boundary, with `g = grouping` reduced
/// to `p / k` when `p` is too small. `g = 1` is the plain uniform-cut-point
/// partition (block proportions roughly Dirichlet(1, .., 1)); larger `g`
/// gives proportions roughly Dirichlet(g, .., g), i.e. more even blocks with
/// `E Σ (s_b/p)² ≈ (g + 1)/(k·g + 1)`.
pub fn block_sizes(p: usize, k: usize, grouping: usize, rng: &mut ModelRng) -> Result<Vec<usize>> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    if k > p {
        return Err(Error::InvalidArgument(format!("k exceeds p ({k} > {p})")));
    }
    let g = grouping.clamp(1, p / k);
    let mut cuts: Vec<usize> = index::sample(rng, p - 1, k * g - 1)
        .into_iter()
        .map(|c| c + 1)
        .collect();
    cuts.sort_unstable();
    let mut sizes = Vec::with_capacity(k);
    let mut prev = 0;
    for c in cuts
        .into_iter()
        .skip(g - 1)
        .step_by(g)
        .chain(std::iter::once(p))
    {
        sizes.push(c - prev);
        prev = c;
    }
    Ok(sizes)
}

/// Block-diagonal matrix with blocks `v_b v_bᵀ` laid out in order.
pub fn block_cov_from_vectors(blocks: &[Vec<f64>]) -> Result<SymMatrix> {
    let p: usize = blocks.iter().map(Vec::len).sum();
    let mut data = vec![0.0; p * p];
    let mut offset = 0;
    for v in blocks {
        for (a, &va) in v.iter().enumerate() {
            for (b, &vb) in v.iter().enumerate() {
                data[(offset + a) * p + offset + b] = va * vb;
            }
        }
        offset += v.len();
    }
    SymMatrix::from_row_major(p, data)
}

/// Block model covariance: random block sizes from [`block_sizes`] with
/// [`BLOCK_CUT_GROUPING`], each block `v vᵀ` with `v_i ~ Uniform[-1, 1]`
/// i.i.d., so the rank is exactly `k`.
pub fn gen_block_cov(spec: &BlockModelSpec) -> Result<SymMatrix> {
    gen_block_cov_with_grouping(spec, BLOCK_CUT_GROUPING)
}

pub fn gen_block_cov_with_grouping(spec: &BlockModelSpec, grouping: usize) -> Result<SymMatrix> {
    let mut rng = rng_from_seed(spec.seed);
    let sizes = block_sizes(spec.p, spec.k, grouping, &mut rng)?;
    let blocks: Vec<Vec<f64>> = sizes
        .iter()
        .map(|&s| (0..s).map(|_| rng.random_range(-1.0..=1.0)).collect())
        .collect();
    block_cov_from_vectors(&blocks)
}

pub fn gen_banded_cov(spec: &BandedModelSpec) -> SymMatrix {
    let p = spec.p;
    let mut data = Vec::with_capacity(p * p);
    for i in 0..p {
        for j in 0..p {
            let d = i.abs_diff(j) as f64;
            data.push((1.0 - d / BAND_WIDTH).max(0.0));
        }
    }
    SymMatrix::from_symmetric_unchecked(p, data)
}

/// `n` observations of dimension `p`, one per row.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleSet {
    n: usize,
    p: usize,
    data: Vec<f64>,
}

impl SampleSet {
    pub fn new(n: usize, p: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * p {
            return Err(Error::DimensionMismatch {
                expected: n * p,
                found: data.len(),
            });
        }
        if let Some(idx) = data.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFiniteEntry {
                row: idx / p.max(1),
                col: idx % p.max(1),
            });
        }
        Ok(SampleSet { n, p, data })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let p = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(n * p);
        for row in rows {
            let row = row.as_ref();
            if row.len() != p {
                return Err(Error::DimensionMismatch {
                    expected: p,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::new(n, p, data)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn sample(&self, l: usize) -> &[f64] {
        &self.data[l * self.p..(l + 1) * self.p]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.p.max(1)).take(self.n)
    }
}

/// `X_l = Σ^{1/2} z_l` with `z_l` i.i.d. standard normal.
pub fn sample_gaussian(cov: &SymMatrix, n: usize, seed: u64) -> Result<SampleSet> {
    let root = sqrt_psd(cov)?;
    let p = cov.dim();
    let mut rng = rng_from_seed(seed);
    let mut data = Vec::with_capacity(n * p);
    let mut z = vec![0.0; p];
    for _ in 0..n {
        for zi in z.iter_mut() {
            *zi = rng.sample(StandardNormal);
        }
        for i in 0..p {
            data.push(root.row(i).iter().zip(&z).map(|(a, b)| a * b).sum());
        }
    }
    SampleSet::new(n, p, data)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Centering {
    /// `1/(n-1) Σ (X_l - X̄)(X_l - X̄)ᵀ`
    #[default]
    Mean,
    /// `1/n Σ X_l X_lᵀ`, for data known to have zero mean.
    None,
}

/// Sample covariance `1/(n-1) Σ_l (X_l - X̄)(X_l - X̄)ᵀ`.
pub fn sample_covariance(samples: &SampleSet) -> Result<SymMatrix> {
    sample_covariance_with(samples, Centering::Mean)
}

pub fn sample_covariance_with(samples: &SampleSet, centering: Centering) -> Result<SymMatrix> {
    let (n, p) = (samples.n, samples.p);
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "sample covariance needs at least 2 samples, got {n}"
        )));
    }
    let mean = match centering {
        Centering::Mean => {
            let mut mean = vec![0.0; p];
            for x in samples.iter() {
                for (m, v) in mean.iter_mut().zip(x) {
                    *m += v;
                }
            }
            mean.iter_mut().for_each(|m| *m /= n as f64);
            mean
        }
        Centering::None => vec![0.0; p],
    };
    let denom = match centering {
        Centering::Mean => (n - 1) as f64,
        Centering::None => n as f64,
    };

    let mut acc = vec![0.0; p * p];
    let mut centered = vec![0.0; p];
    for x in samples.iter() {
        for ((c, v), m) in centered.iter_mut().zip(x).zip(&mean) {
            *c = v - m;
        }
        for i in 0..p {
            let ci = centered[i];
            if ci == 0.0 {
                continue;
            }
            for j in i..p {
                acc[i * p + j] += ci * centered[j];
            }
        }
    }
    for i in 0..p {
        for j in i..p {
            let v = acc[i * p + j] / denom;
            acc[i * p + j] = v;
            acc[j * p + i] = v;
        }
    }
    Ok(SymMatrix::from_symmetric_unchecked(p, acc))
}

//! Random rotations and the per-sample generator contract.
//!
//! Every Monte Carlo sample draws from its own ChaCha stream keyed by
//! `(seed, sample index)`, so results never depend on how samples are
//! scheduled across threads.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Rotation};

/// Generator for sample `index` of a run seeded with `seed`.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SamplerKind {
    /// Ordered product of one-parameter subgroups with uniform angles.
    #[default]
    SubgroupProduct,
    /// Haar measure on SO(n).
    Haar,
}

impl SamplerKind {
    pub fn sample<R: Rng + ?Sized>(self, n: usize, rng: &mut R) -> Rotation {
        match self {
            SamplerKind::SubgroupProduct => random_rotation_product(n, rng),
            SamplerKind::Haar => haar_rotation(n, rng),
        }
    }
}

impl fmt::Display for SamplerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SamplerKind::SubgroupProduct => "paper",
            SamplerKind::Haar => "haar",
        })
    }
}

impl FromStr for SamplerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" | "product" | "subgroup-product" => Ok(SamplerKind::SubgroupProduct),
            "haar" => Ok(SamplerKind::Haar),
            other => Err(Error::InvalidConfig(format!("unknown sampler '{other}'"))),
        }
    }
}

/// Coordinate planes `(a, b)`, `a < b`, in the canonical order of the basis
/// `ξ_{ab} = e_b e_aᵗ − e_a e_bᵗ` of so(n).
pub fn canonical_planes(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect()
}

/// `R = Π_j exp(t_j ξ_{i_j})`: `m = n(n−1)/2` angles uniform on `[0, 2π]`
/// applied to the canonical generators in a uniformly random order.
///
/// This is not Haar measure. For `n ≤ 1` the product is empty and the
/// identity is returned.
pub fn random_rotation_product<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Rotation {
    let planes = canonical_planes(n);
    let angles: Vec<f64> = (0..planes.len()).map(|_| rng.random_range(0.0..=TAU)).collect();
    let mut order: Vec<usize> = (0..planes.len()).collect();
    order.shuffle(rng);

    let mut acc = Matrix::identity(n);
    for (&plane, &t) in order.iter().zip(&angles) {
        let (a, b) = planes[plane];
        let (s, c) = t.sin_cos();
        acc.rotate_columns(a, b, c, s);
    }
    Rotation::new_unchecked(acc)
}

/// Haar-distributed rotation: QR of a Gaussian matrix with the sign of each
/// column fixed by the diagonal of R, then one column flipped if needed to
/// land in SO(n).
pub fn haar_rotation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Rotation {
    // Columns of a Gaussian matrix, orthonormalized by modified Gram-Schmidt
    // with one reorthogonalization pass.
    let mut cols: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect())
        .collect();
    for j in 0..n {
        for _ in 0..2 {
            for k in 0..j {
                let (done, rest) = cols.split_at_mut(j);
                let proj: f64 = done[k].iter().zip(rest[0].iter()).map(|(a, b)| a * b).sum();
                for (x, q) in rest[0].iter_mut().zip(&done[k]) {
                    *x -= proj * q;
                }
            }
        }
        let norm = cols[j].iter().map(|x| x * x).sum::<f64>().sqrt();
        // norm > 0 with probability one; the R diagonal is then positive.
        for x in cols[j].iter_mut() {
            *x /= norm;
        }
    }
    let mut q = Matrix::zeros(n);
    for (j, col) in cols.iter().enumerate() {
        for (i, &x) in col.iter().enumerate() {
            q[(i, j)] = x;
        }
    }
    if n > 0 && q.determinant() < 0.0 {
        for i in 0..n {
            q[(i, 0)] = -q[(i, 0)];
        }
    }
    Rotation::new_unchecked(q)
}

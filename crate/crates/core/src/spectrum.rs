use std::ops::Index;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Eigenvalues with multiplicity, in descending order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Spectrum(Vec<f64>);

impl Spectrum {
    /// Wraps already ordered values, rejecting ascents and non-finite entries.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        check_finite(&values)?;
        if let Some(k) = values.windows(2).position(|w| w[0] < w[1]) {
            return Err(Error::NotDescending(k));
        }
        Ok(Spectrum(values))
    }

    /// Sorts arbitrary values into descending order.
    pub fn sorted(mut values: Vec<f64>) -> Result<Self> {
        check_finite(&values)?;
        values.sort_by(|a, b| b.total_cmp(a));
        Ok(Spectrum(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn l1_norm(&self) -> f64 {
        self.0.iter().map(|v| v.abs()).sum()
    }

    /// `(ν₁, ν₁, ν₂, ν₂, …)`: the spectrum of the same operator read as a real matrix.
    pub fn doubled(&self) -> Spectrum {
        Spectrum(self.0.iter().flat_map(|&v| [v, v]).collect())
    }

    /// Odd slots `(σ₁, σ₃, …)` and even slots `(σ₂, σ₄, …)`.
    pub fn interlaced_halves(&self) -> Result<(Spectrum, Spectrum)> {
        if !self.0.len().is_multiple_of(2) {
            return Err(Error::OddLength(self.0.len()));
        }
        let odd = self.0.iter().step_by(2).copied().collect();
        let even = self.0.iter().skip(1).step_by(2).copied().collect();
        Ok((Spectrum(odd), Spectrum(even)))
    }

    pub fn scaled(&self, factor: f64) -> Result<Spectrum> {
        Spectrum::sorted(self.0.iter().map(|v| v * factor).collect())
    }

    /// Largest absolute slot-wise difference.
    pub fn max_abs_diff(&self, other: &Spectrum) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| (a - b).abs()).fold(
            if self.0.len() == other.0.len() {
                0.0
            } else {
                f64::INFINITY
            },
            f64::max,
        )
    }
}

fn check_finite(values: &[f64]) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(k) => Err(Error::NonFinite(k)),
        None => Ok(()),
    }
}

impl Index<usize> for Spectrum {
    type Output = f64;

    fn index(&self, k: usize) -> &f64 {
        &self.0[k]
    }
}

impl TryFrom<Vec<f64>> for Spectrum {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Spectrum::new(values)
    }
}

impl From<Spectrum> for Vec<f64> {
    fn from(s: Spectrum) -> Vec<f64> {
        s.0
    }
}

//! Inertia and angular momentum of point-mass configurations.

use crate::error::{Error, Result};
use crate::linalg::{Matrix, SkewMatrix, SymMatrix};

const CENTER_OF_MASS_TOL: f64 = 1e-10;

/// `N` point masses in ℝ^dim, stored as the `dim × N` matrix `X` whose
/// columns are the positions (or velocities) of the bodies.
#[derive(Debug, Clone, PartialEq)]
pub struct MassConfiguration {
    dim: usize,
    /// Row-major `dim × N`.
    coords: Vec<f64>,
    masses: Vec<f64>,
}

impl MassConfiguration {
    /// `columns[k]` is the vector of body `k`. Requires positive masses and
    /// `Σ m_k x_k = 0`.
    pub fn new(dim: usize, columns: &[Vec<f64>], masses: &[f64]) -> Result<Self> {
        if columns.len() != masses.len() {
            return Err(Error::DimensionMismatch {
                expected: masses.len(),
                found: columns.len(),
            });
        }
        if let Some(m) = masses.iter().find(|&&m| !(m > 0.0 && m.is_finite())) {
            return Err(Error::InvalidConfig(format!("mass {m} is not positive")));
        }
        let bodies = masses.len();
        let mut coords = vec![0.0; dim * bodies];
        for (k, col) in columns.iter().enumerate() {
            if col.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: col.len(),
                });
            }
            for (i, &x) in col.iter().enumerate() {
                coords[i * bodies + k] = x;
            }
        }
        let cfg = MassConfiguration {
            dim,
            coords,
            masses: masses.to_vec(),
        };
        let scale = cfg.masses.iter().sum::<f64>() * cfg.coords.iter().fold(1.0_f64, |a, x| a.max(x.abs()));
        let offset = cfg.weighted_sum().iter().map(|v| v * v).sum::<f64>().sqrt();
        if offset > CENTER_OF_MASS_TOL * scale {
            return Err(Error::CenterOfMass(offset));
        }
        Ok(cfg)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bodies(&self) -> usize {
        self.masses.len()
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn coord(&self, i: usize, k: usize) -> f64 {
        self.coords[i * self.bodies() + k]
    }

    /// Applies a linear map to every body, keeping the masses.
    pub fn map_linear(&self, a: &Matrix) -> Result<MassConfiguration> {
        if a.n() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: a.n(),
            });
        }
        let columns: Vec<Vec<f64>> = (0..self.bodies())
            .map(|k| {
                (0..self.dim)
                    .map(|i| (0..self.dim).map(|l| a[(i, l)] * self.coord(l, k)).sum())
                    .collect()
            })
            .collect();
        MassConfiguration::new(self.dim, &columns, &self.masses)
    }

    fn weighted_sum(&self) -> Vec<f64> {
        (0..self.dim)
            .map(|i| (0..self.bodies()).map(|k| self.masses[k] * self.coord(i, k)).sum())
            .collect()
    }
}

/// `S = X M Xᵗ`, i.e. `s_ij = Σ_k m_k r_ik r_jk`.
pub fn inertia_matrix(cfg: &MassConfiguration) -> SymMatrix {
    let n = cfg.dim;
    let mut s = Matrix::zeros(n);
    for i in 0..n {
        for j in i..n {
            let v: f64 = (0..cfg.bodies())
                .map(|k| cfg.masses[k] * cfg.coord(i, k) * cfg.coord(j, k))
                .sum();
            s[(i, j)] = v;
            s[(j, i)] = v;
        }
    }
    SymMatrix::symmetrize(&s)
}

/// `C = −X M Yᵗ + Y M Xᵗ`, i.e. `c_ij = Σ_k m_k (−r_ik v_jk + r_jk v_ik)`.
pub fn angular_momentum(pos: &MassConfiguration, vel: &MassConfiguration) -> Result<SkewMatrix> {
    if pos.dim != vel.dim {
        return Err(Error::DimensionMismatch {
            expected: pos.dim,
            found: vel.dim,
        });
    }
    if pos.bodies() != vel.bodies() {
        return Err(Error::DimensionMismatch {
            expected: pos.bodies(),
            found: vel.bodies(),
        });
    }
    if pos.masses != vel.masses {
        return Err(Error::InvalidConfig(
            "positions and velocities carry different masses".into(),
        ));
    }
    let n = pos.dim;
    let mut c = Matrix::zeros(n);
    for i in 0..n {
        for j in i + 1..n {
            let v: f64 = (0..pos.bodies())
                .map(|k| pos.masses[k] * (-pos.coord(i, k) * vel.coord(j, k) + pos.coord(j, k) * vel.coord(i, k)))
                .sum();
            c[(i, j)] = v;
            c[(j, i)] = -v;
        }
    }
    Ok(SkewMatrix::antisymmetrize(&c))
}

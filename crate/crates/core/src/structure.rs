//! Hermitian structures on ℝ^{2p} and the frequency map.
//!
//! A hermitian structure is stored through a rotation `R` with `J = Rᵗ J₀ R`,
//! where `J₀ = [[0, −I], [I, 0]]` in the basis `(x₁…x_p, y₁…y_p)`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{eigen_sym, Matrix, Rotation, SkewMatrix, SymMatrix};
use crate::sampling::SamplerKind;
use crate::spectrum::Spectrum;

/// Relative pairing tolerance for `J`-hermitian spectra.
pub const PAIRING_TOL: f64 = 1e-8;
const STRUCTURE_TOL: f64 = 1e-12;

/// `J₀ = [[0, −I], [I, 0]]`.
pub fn standard_complex_structure(p: usize) -> Matrix {
    let id = Matrix::identity(p);
    let zero = Matrix::zeros(p);
    Matrix::from_blocks(&zero, &id.scale(-1.0), &id, &zero).expect("blocks share size p")
}

#[derive(Debug, Clone, PartialEq)]
pub struct HermitianStructure {
    p: usize,
    rotation: Rotation,
    j: Matrix,
}

impl HermitianStructure {
    /// `J = Rᵗ J₀ R`. Fails if `R` is not `2p × 2p` or the result is not an
    /// orthogonal complex structure to within `1e-12` per entry.
    pub fn from_rotation(p: usize, rotation: Rotation) -> Result<Self> {
        if rotation.n() != 2 * p {
            return Err(Error::DimensionMismatch {
                expected: 2 * p,
                found: rotation.n(),
            });
        }
        let j = rotation.matrix().congruence(&standard_complex_structure(p));
        let hs = HermitianStructure { p, rotation, j };
        hs.check()?;
        Ok(hs)
    }

    pub fn standard(p: usize) -> Self {
        HermitianStructure::from_rotation(p, Rotation::identity(2 * p)).expect("J₀ is valid")
    }

    fn check(&self) -> Result<()> {
        let id = Matrix::identity(2 * self.p);
        let square = &(&self.j * &self.j) + &id;
        let dev = square.max_abs_diff(&Matrix::zeros(2 * self.p));
        let orth = self.j.congruence(&id).max_abs_diff(&id);
        let worst = dev.max(orth);
        if worst > STRUCTURE_TOL {
            return Err(Error::Consistency(format!(
                "J is not an orthogonal complex structure (deviation {worst:e})"
            )));
        }
        Ok(())
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn rotation(&self) -> &Rotation {
        &self.rotation
    }

    /// The matrix of `J`.
    pub fn matrix(&self) -> &Matrix {
        &self.j
    }

    /// `J⁻¹ S J + S`, which commutes with `J`.
    pub fn hermitian_part(&self, s0: &SymMatrix) -> Result<SymMatrix> {
        self.check_size(s0)?;
        s0.conjugate_by(&self.j).add(s0)
    }

    fn check_size(&self, s0: &SymMatrix) -> Result<()> {
        if s0.n() != 2 * self.p {
            return Err(Error::DimensionMismatch {
                expected: 2 * self.p,
                found: s0.n(),
            });
        }
        Ok(())
    }
}

/// Hermitian structure drawn by pushing a random rotation through `R ↦ Rᵗ J₀ R`.
pub fn random_hermitian_structure<R: Rng + ?Sized>(
    p: usize,
    sampler: SamplerKind,
    rng: &mut R,
) -> Result<HermitianStructure> {
    HermitianStructure::from_rotation(p, sampler.sample(2 * p, rng))
}

/// The structure with matrix `[[0, −ρ⁻¹], [ρ, 0]]`.
///
/// It equals `Rᵗ J₀ R` for `R = diag(I, ρᵗ)`, and maps the span of the first
/// `p` basis vectors onto its orthogonal complement.
pub fn adapted_structure(p: usize, rho: &Rotation) -> Result<HermitianStructure> {
    if rho.n() != p {
        return Err(Error::DimensionMismatch {
            expected: p,
            found: rho.n(),
        });
    }
    let r = Matrix::from_blocks(
        &Matrix::identity(p),
        &Matrix::zeros(p),
        &Matrix::zeros(p),
        &rho.matrix().transpose(),
    )?;
    HermitianStructure::from_rotation(p, Rotation::new_unchecked(r))
}

/// Collapses a `2p` spectrum of doubled form to its `p` values.
///
/// Consecutive pairs must agree to within `PAIRING_TOL · scale`; each output
/// value is the pair average.
pub fn pair_eigenvalues(spectrum: &Spectrum, scale: f64) -> Result<Spectrum> {
    if !spectrum.len().is_multiple_of(2) {
        return Err(Error::OddLength(spectrum.len()));
    }
    let tol = PAIRING_TOL * scale;
    let mut nu = Vec::with_capacity(spectrum.len() / 2);
    for (k, pair) in spectrum.values().chunks_exact(2).enumerate() {
        let gap = pair[0] - pair[1];
        if gap > tol {
            return Err(Error::Consistency(format!(
                "eigenvalues {} and {} do not pair (gap {gap:e} > {tol:e})",
                2 * k + 1,
                2 * k + 2
            )));
        }
        nu.push(0.5 * (pair[0] + pair[1]));
    }
    Spectrum::new(nu)
}

/// Ordered spectrum `(ν₁ ≥ … ≥ ν_p)` of `J⁻¹ S₀ J + S₀` viewed as a complex
/// `p × p` matrix.
pub fn frequency_map(j: &HermitianStructure, s0: &SymMatrix) -> Result<Spectrum> {
    let h = j.hermitian_part(s0)?;
    pair_eigenvalues(&eigen_sym(&h).values, s0.frobenius_norm())
}

/// The same spectrum computed as `J₀⁻¹ S J₀ + S = S − J₀ S J₀` with
/// `S = R S₀ R⁻¹`. Returns the full `2p` spectrum alongside the paired values.
pub fn frequency_map_conjugated(rotation: &Rotation, s0: &SymMatrix) -> Result<(Spectrum, Spectrum)> {
    let n = s0.n();
    if rotation.n() != n || !n.is_multiple_of(2) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: rotation.n(),
        });
    }
    let c = conjugated_hermitian_part(rotation, s0);
    let full = eigen_sym(&c).values;
    let nu = pair_eigenvalues(&full, s0.frobenius_norm())?;
    Ok((full, nu))
}

pub(crate) fn conjugated_hermitian_part(rotation: &Rotation, s0: &SymMatrix) -> SymMatrix {
    let j0 = standard_complex_structure(s0.n() / 2);
    // S = R S₀ Rᵗ
    let s = s0.conjugate_by(&rotation.matrix().transpose());
    let j0_s_j0 = &(&j0 * s.matrix()) * &j0;
    SymMatrix::symmetrize(&(s.matrix() - &j0_s_j0))
}

/// Angular momentum `S₀J + JS₀` of the rigid rotation `e^{tJ} X₀`.
pub fn relative_equilibrium_momentum(s0: &SymMatrix, j: &HermitianStructure) -> Result<SkewMatrix> {
    j.check_size(s0)?;
    let sj = s0.matrix() * j.matrix();
    let js = j.matrix() * s0.matrix();
    Ok(SkewMatrix::antisymmetrize(&(&sj + &js)))
}

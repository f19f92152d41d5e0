//! Half-space descriptions of Horn polytopes and membership tests.
//!
//! A polytope is never enumerated by vertices; it is the trace hyperplane
//! intersected with the Horn inequalities indexed by `T^p_r`, `r < p`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::horn::{HornTriple, TripleCache};
use crate::linalg::{eigenvalues_sym, Matrix, SymMatrix};
use crate::sampling::{sample_rng, SamplerKind};
use crate::spectrum::Spectrum;

/// Relative tolerance used for both default membership margins.
pub const DEFAULT_RELATIVE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PartitionKind {
    /// `σ₋ = (σ₁, σ₃, …)`, `σ₊ = (σ₂, σ₄, …)`.
    Interlaced,
    /// `σ₋` takes the listed 1-based positions of `σ`, `σ₊` the rest.
    Custom { minus_positions: Vec<usize> },
}

/// Split of a `2p` spectrum into two `p` spectra.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionPair {
    pub sigma: Spectrum,
    pub minus: Spectrum,
    pub plus: Spectrum,
    pub kind: PartitionKind,
}

impl PartitionPair {
    pub fn interlaced(sigma: &Spectrum) -> Result<Self> {
        let (minus, plus) = sigma.interlaced_halves()?;
        Ok(PartitionPair {
            sigma: sigma.clone(),
            minus,
            plus,
            kind: PartitionKind::Interlaced,
        })
    }

    pub fn from_minus_positions(sigma: &Spectrum, positions: &[usize]) -> Result<Self> {
        let n = sigma.len();
        if !n.is_multiple_of(2) {
            return Err(Error::OddLength(n));
        }
        let mut sorted = positions.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != n / 2 || sorted.iter().any(|&k| k == 0 || k > n) {
            return Err(Error::InvalidPartition(format!(
                "need {} distinct positions in 1..={n}, got {positions:?}",
                n / 2
            )));
        }
        let (mut minus, mut plus) = (Vec::new(), Vec::new());
        for (k, &v) in sigma.values().iter().enumerate() {
            if sorted.binary_search(&(k + 1)).is_ok() {
                minus.push(v);
            } else {
                plus.push(v);
            }
        }
        Ok(PartitionPair {
            sigma: sigma.clone(),
            minus: Spectrum::new(minus)?,
            plus: Spectrum::new(plus)?,
            kind: PartitionKind::Custom {
                minus_positions: sorted,
            },
        })
    }

    pub fn p(&self) -> usize {
        self.minus.len()
    }

    /// Checks `multiset(minus) ∪ multiset(plus) = multiset(sigma)` and, for
    /// the interlaced kind, the slot assignment.
    pub fn validate(&self) -> Result<()> {
        let p = self.sigma.len() / 2;
        if !self.sigma.len().is_multiple_of(2) || self.minus.len() != p || self.plus.len() != p {
            return Err(Error::InvalidPartition("halves must have length p".into()));
        }
        let merged = Spectrum::sorted([self.minus.values(), self.plus.values()].concat())?;
        if merged != self.sigma {
            return Err(Error::InvalidPartition("halves do not recombine into sigma".into()));
        }
        if self.kind == PartitionKind::Interlaced {
            let (m, pl) = self.sigma.interlaced_halves()?;
            if m != self.minus || pl != self.plus {
                return Err(Error::InvalidPartition("halves are not interlaced".into()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Inequality {
    #[serde(with = "triple_json")]
    pub triple: HornTriple,
    pub alpha_sum: f64,
    pub beta_sum: f64,
}

impl Inequality {
    /// `Σ_I α + Σ_J β − Σ_K ν`.
    pub fn slack(&self, nu: &[f64]) -> f64 {
        self.alpha_sum + self.beta_sum - self.triple.k().select_sum(nu)
    }
}

/// Trace hyperplane plus Horn inequalities for spectra of `a + b` with
/// `spec(a) = α`, `spec(b) = β`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolytopeSpec {
    pub p: usize,
    pub trace_sum: f64,
    pub inequalities: Vec<Inequality>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Membership {
    pub trace_residual: f64,
    /// `+∞` when there are no inequalities.
    pub min_slack: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub trace: f64,
    pub inequality: f64,
}

impl Tolerances {
    /// `1e-9 · max(1, |Σσ|)` and `1e-9 · max(1, ‖σ‖₁)`.
    pub fn for_sigma(sigma: &Spectrum) -> Self {
        Tolerances::scaled(DEFAULT_RELATIVE_TOL, sigma)
    }

    pub fn scaled(relative: f64, sigma: &Spectrum) -> Self {
        Tolerances {
            trace: relative * sigma.sum().abs().max(1.0),
            inequality: relative * sigma.l1_norm().max(1.0),
        }
    }
}

impl Membership {
    pub fn is_inside(&self, tol: &Tolerances) -> bool {
        self.trace_residual.abs() <= tol.trace && self.min_slack >= -tol.inequality
    }
}

impl PolytopeSpec {
    pub fn horn(alpha: &Spectrum, beta: &Spectrum, cache: &mut TripleCache) -> Result<Self> {
        let p = alpha.len();
        if beta.len() != p {
            return Err(Error::DimensionMismatch {
                expected: p,
                found: beta.len(),
            });
        }
        if p == 0 {
            return Err(Error::InvalidConfig("empty spectra".into()));
        }
        let inequalities = cache
            .table(p)
            .inequality_triples()
            .map(|t| Inequality {
                triple: t.clone(),
                alpha_sum: t.i().select_sum(alpha.values()),
                beta_sum: t.j().select_sum(beta.values()),
            })
            .collect();
        Ok(PolytopeSpec {
            p,
            trace_sum: alpha.sum() + beta.sum(),
            inequalities,
        })
    }

    pub fn membership_slack(&self, nu: &Spectrum) -> Result<Membership> {
        if nu.len() != self.p {
            return Err(Error::DimensionMismatch {
                expected: self.p,
                found: nu.len(),
            });
        }
        let min_slack = self
            .inequalities
            .iter()
            .map(|q| q.slack(nu.values()))
            .fold(f64::INFINITY, f64::min);
        Ok(Membership {
            trace_residual: nu.sum() - self.trace_sum,
            min_slack,
        })
    }

    /// Slack of every inequality, in table order.
    pub fn slacks(&self, nu: &Spectrum) -> Result<Vec<f64>> {
        if nu.len() != self.p {
            return Err(Error::DimensionMismatch {
                expected: self.p,
                found: nu.len(),
            });
        }
        Ok(self.inequalities.iter().map(|q| q.slack(nu.values())).collect())
    }
}

/// `P₁`: spectra of `a + b` with `spec(a) = σ₋`, `spec(b) = σ₊` from the partition.
pub fn build_p1(sigma: &Spectrum, partition: &PartitionPair, cache: &mut TripleCache) -> Result<PolytopeSpec> {
    if &partition.sigma != sigma {
        return Err(Error::InvalidPartition(
            "partition belongs to a different spectrum".into(),
        ));
    }
    partition.validate()?;
    PolytopeSpec::horn(&partition.minus, &partition.plus, cache)
}

/// `P`: spectra of `A + B` with `spec(A) = spec(B) = σ`.
pub fn build_p(sigma: &Spectrum, cache: &mut TripleCache) -> Result<PolytopeSpec> {
    PolytopeSpec::horn(sigma, sigma, cache)
}

pub fn check_p_membership(sigma: &Spectrum, gamma_hat: &Spectrum, cache: &mut TripleCache) -> Result<Membership> {
    if gamma_hat.len() != sigma.len() {
        return Err(Error::DimensionMismatch {
            expected: sigma.len(),
            found: gamma_hat.len(),
        });
    }
    build_p(sigma, cache)?.membership_slack(gamma_hat)
}

/// Orthogonal projection onto the diagonal: `ν_k = (γ̂_{2k−1} + γ̂_{2k}) / 2`.
pub fn project_to_delta(gamma_hat: &Spectrum) -> Result<Spectrum> {
    if !gamma_hat.len().is_multiple_of(2) {
        return Err(Error::OddLength(gamma_hat.len()));
    }
    Spectrum::new(
        gamma_hat
            .values()
            .chunks_exact(2)
            .map(|w| 0.5 * (w[0] + w[1]))
            .collect(),
    )
}

/// `Σ_k (γ̂_{2k−1} − γ̂_{2k})² < 2 tol²`.
pub fn is_hermitian_spectrum(gamma_hat: &Spectrum, tol: f64) -> bool {
    if !gamma_hat.len().is_multiple_of(2) {
        return false;
    }
    let gap2: f64 = gamma_hat.values().chunks_exact(2).map(|w| (w[0] - w[1]).powi(2)).sum();
    gap2 < 2.0 * tol * tol
}

/// Sorted spectrum of `diag(minus) + ρᵗ diag(plus) ρ`.
pub fn rotated_sum_spectrum(minus: &Spectrum, plus: &Spectrum, rho: &Matrix) -> Spectrum {
    let a = SymMatrix::from_diagonal(minus.values());
    let b = SymMatrix::from_diagonal(plus.values()).conjugate_by(rho);
    eigenvalues_sym(&a.add(&b).expect("equal sizes"))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartitionReport {
    pub samples: usize,
    pub inside: usize,
    pub fraction: f64,
    /// `max(0, −minSlack)` over all samples.
    pub max_violation: f64,
    pub worst_trace_residual: f64,
}

/// Samples spectra of `a + ρ⁻¹ b ρ` for the custom split and tests them
/// against the interlaced `P₁`.
pub fn compare_partitions(
    sigma: &Spectrum,
    custom: &PartitionPair,
    samples: usize,
    seed: u64,
    sampler: SamplerKind,
    cache: &mut TripleCache,
) -> Result<PartitionReport> {
    if &custom.sigma != sigma {
        return Err(Error::InvalidPartition(
            "partition belongs to a different spectrum".into(),
        ));
    }
    custom.validate()?;
    let p1 = build_p1(sigma, &PartitionPair::interlaced(sigma)?, cache)?;
    let tol = Tolerances::for_sigma(sigma);
    let mut report = PartitionReport {
        samples,
        inside: 0,
        fraction: 0.0,
        max_violation: 0.0,
        worst_trace_residual: 0.0,
    };
    for index in 0..samples {
        let mut rng = sample_rng(seed, index as u64);
        let rho = sampler.sample(custom.p(), &mut rng);
        let nu = rotated_sum_spectrum(&custom.minus, &custom.plus, rho.matrix());
        let m = p1.membership_slack(&nu)?;
        if m.is_inside(&tol) {
            report.inside += 1;
        }
        report.max_violation = report.max_violation.max(-m.min_slack);
        report.worst_trace_residual = report.worst_trace_residual.max(m.trace_residual.abs());
    }
    report.fraction = if samples == 0 {
        1.0
    } else {
        report.inside as f64 / samples as f64
    };
    Ok(report)
}

mod triple_json {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::horn::HornTriple;

    #[derive(Serialize, Deserialize)]
    struct Raw {
        p: usize,
        i: Vec<usize>,
        j: Vec<usize>,
        k: Vec<usize>,
    }

    pub fn serialize<S: Serializer>(t: &HornTriple, s: S) -> Result<S::Ok, S::Error> {
        Raw {
            p: t.p(),
            i: t.i().elements().to_vec(),
            j: t.j().elements().to_vec(),
            k: t.k().elements().to_vec(),
        }
        .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<HornTriple, D::Error> {
        let raw = Raw::deserialize(d)?;
        HornTriple::from_vecs(raw.p, raw.i, raw.j, raw.k).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spectrum(v: &[f64]) -> Spectrum {
        Spectrum::new(v.to_vec()).unwrap()
    }

    fn reference_sigma() -> Spectrum {
        spectrum(&[13.0, 8.0, 5.0, 3.0, 2.0, 1.0].map(|v| v / 32.0))
    }

    #[test]
    fn p1_for_reference_spectrum() {
        let sigma = reference_sigma();
        let mut cache = TripleCache::new();
        let pair = PartitionPair::interlaced(&sigma).unwrap();
        assert_eq!(pair.minus, spectrum(&[13.0 / 32.0, 5.0 / 32.0, 2.0 / 32.0]));
        assert_eq!(pair.plus, spectrum(&[8.0 / 32.0, 3.0 / 32.0, 1.0 / 32.0]));
        let spec = build_p1(&sigma, &pair, &mut cache).unwrap();
        assert_eq!(spec.trace_sum, 1.0);
        assert_eq!(spec.inequalities.len(), 12);

        let m = spec.membership_slack(&spectrum(&[0.5, 0.3125, 0.1875])).unwrap();
        assert_eq!(m.trace_residual, 0.0);
        assert!(m.min_slack >= 0.0);

        let m = spec.membership_slack(&spectrum(&[1.0, 0.0, 0.0])).unwrap();
        assert_eq!(m.trace_residual, 0.0);
        assert!(m.min_slack <= -11.0 / 32.0);
        let first = spec
            .inequalities
            .iter()
            .find(|q| q.triple.to_string() == "({1}, {1}, {1})")
            .unwrap();
        assert_eq!(first.slack(&[1.0, 0.0, 0.0]), -11.0 / 32.0);
        assert!(spec.membership_slack(&spectrum(&[1.0, 0.0])).is_err());
    }

    #[test]
    fn p1_single_point_when_p_is_one() {
        let sigma = spectrum(&[0.7, 0.2]);
        let mut cache = TripleCache::new();
        let spec = build_p1(&sigma, &PartitionPair::interlaced(&sigma).unwrap(), &mut cache).unwrap();
        assert!(spec.inequalities.is_empty());
        let m = spec.membership_slack(&spectrum(&[0.7 + 0.2])).unwrap();
        assert_eq!(m.trace_residual, 0.0);
        assert_eq!(m.min_slack, f64::INFINITY);
    }

    #[test]
    fn scalar_spectrum_pins_a_point() {
        let c = 0.3;
        let sigma = spectrum(&[c; 6]);
        let mut cache = TripleCache::new();
        let spec = build_p1(&sigma, &PartitionPair::interlaced(&sigma).unwrap(), &mut cache).unwrap();
        let m = spec.membership_slack(&spectrum(&[2.0 * c; 3])).unwrap();
        assert_eq!((m.trace_residual, m.min_slack), (0.0, 0.0));
        let tol = Tolerances::for_sigma(&sigma);
        let bumped = spectrum(&[2.0 * c + 1e-6, 2.0 * c, 2.0 * c - 1e-6]);
        assert!(!spec.membership_slack(&bumped).unwrap().is_inside(&tol));
    }

    #[test]
    fn custom_partition() {
        let sigma = reference_sigma();
        let pair = PartitionPair::from_minus_positions(&sigma, &[1, 2, 3]).unwrap();
        assert_eq!(pair.minus, spectrum(&[13.0 / 32.0, 8.0 / 32.0, 5.0 / 32.0]));
        pair.validate().unwrap();
        assert!(PartitionPair::from_minus_positions(&sigma, &[1, 1, 2]).is_err());
        assert!(PartitionPair::from_minus_positions(&sigma, &[1, 2, 7]).is_err());

        let mut broken = pair.clone();
        broken.plus = spectrum(&[1.0, 0.0, 0.0]);
        assert!(broken.validate().is_err());
        let mut cache = TripleCache::new();
        assert!(build_p1(&sigma, &broken, &mut cache).is_err());
    }

    #[test]
    fn projection_examples() {
        assert_eq!(
            project_to_delta(&spectrum(&[6.0, 4.0, 3.0, 1.0])).unwrap(),
            spectrum(&[5.0, 2.0])
        );
        assert_eq!(
            project_to_delta(&spectrum(&[1.0, 0.0, 0.0, 0.0])).unwrap(),
            spectrum(&[0.5, 0.0])
        );
        let nu = spectrum(&[0.9, 0.4, -0.1]);
        assert_eq!(project_to_delta(&nu.doubled()).unwrap(), nu);
        assert_eq!(project_to_delta(&spectrum(&[1.0])), Err(Error::OddLength(1)));
    }

    #[test]
    fn hermitian_criterion() {
        assert!(is_hermitian_spectrum(&spectrum(&[5.0, 5.0, 2.0, 2.0]), 1e-12));
        assert!(!is_hermitian_spectrum(&spectrum(&[6.0, 4.0, 3.0, 1.0]), 0.1));
        assert!(!is_hermitian_spectrum(&spectrum(&[1.0, 1.0, 1.0]), 1.0));
    }

    #[test]
    fn p_membership_examples() {
        let sigma = reference_sigma();
        let mut cache = TripleCache::new();
        let twice = sigma.scaled(2.0).unwrap();
        let m = check_p_membership(&sigma, &twice, &mut cache).unwrap();
        assert_eq!(m.trace_residual, 0.0);
        assert!(m.min_slack >= 0.0);

        let spike = spectrum(&[2.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let p = build_p(&sigma, &mut cache).unwrap();
        let first = p
            .inequalities
            .iter()
            .find(|q| q.triple.to_string() == "({1}, {1}, {1})")
            .unwrap();
        assert_eq!(first.slack(spike.values()), 2.0 * 13.0 / 32.0 - 2.0);
        assert!(p.membership_slack(&spike).unwrap().min_slack < 0.0);
        assert!(check_p_membership(&sigma, &spectrum(&[1.0, 1.0]), &mut cache).is_err());
    }

    #[test]
    fn interlaced_partition_compares_to_itself() {
        let sigma = reference_sigma();
        let mut cache = TripleCache::new();
        let pair = PartitionPair::interlaced(&sigma).unwrap();
        let r = compare_partitions(&sigma, &pair, 200, 5, SamplerKind::SubgroupProduct, &mut cache).unwrap();
        assert_eq!(r.fraction, 1.0);
    }

    #[test]
    fn single_complex_dimension_partitions_agree() {
        let sigma = spectrum(&[0.7, 0.2]);
        let mut cache = TripleCache::new();
        let swapped = PartitionPair::from_minus_positions(&sigma, &[2]).unwrap();
        let r = compare_partitions(&sigma, &swapped, 10, 5, SamplerKind::SubgroupProduct, &mut cache).unwrap();
        assert_eq!((r.inside, r.worst_trace_residual), (10, 0.0));
    }

    #[test]
    fn spec_json_round_trip() {
        let sigma = reference_sigma();
        let mut cache = TripleCache::new();
        let spec = build_p1(&sigma, &PartitionPair::interlaced(&sigma).unwrap(), &mut cache).unwrap();
        let text = serde_json::to_string(&spec).unwrap();
        let back: PolytopeSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, spec);
    }
}

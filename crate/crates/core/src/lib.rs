//! Horn polytopes for sums of real symmetric matrices and the frequency map
//! of hermitian structures.
//!
//! The crate covers:
//! - dense symmetric linear algebra with a Jacobi eigensolver ([`linalg`]),
//! - inertia and angular momentum of point masses ([`mechanics`]),
//! - random rotations and hermitian structures ([`sampling`], [`structure`]),
//! - Horn triples `T^p_r` and the domino doubling map ([`horn`]),
//! - half-space membership in the Horn polytopes ([`polytope`]),
//! - seeded Monte Carlo runs with CSV/JSON output ([`experiments`]).

pub mod error;
pub mod experiments;
pub mod horn;
pub mod linalg;
pub mod mechanics;
pub mod polytope;
pub mod sampling;
pub mod spectrum;
pub mod structure;

pub use error::{Error, Result};
pub use horn::{
    domino_double, generate_t, generate_u, horn_inequality_slack, verify_domino_theorem, DominoReport, HornTriple,
    IndexSet, TripleCache, TripleTable,
};
pub use linalg::{eigen_sym, eigenvalues_sym, Matrix, Rotation, SkewMatrix, SymMatrix};
pub use mechanics::{angular_momentum, inertia_matrix, MassConfiguration};
pub use polytope::{
    build_p, build_p1, check_p_membership, compare_partitions, is_hermitian_spectrum, project_to_delta, Membership,
    PartitionPair, PolytopeSpec, Tolerances,
};
pub use sampling::{haar_rotation, random_rotation_product, sample_rng, SamplerKind};
pub use spectrum::Spectrum;
pub use structure::{
    adapted_structure, frequency_map, frequency_map_conjugated, random_hermitian_structure,
    relative_equilibrium_momentum, standard_complex_structure, HermitianStructure,
};

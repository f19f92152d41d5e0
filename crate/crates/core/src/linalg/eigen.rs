use crate::linalg::{Matrix, SymMatrix};
use crate::spectrum::Spectrum;

pub const JACOBI_MAX_SWEEPS: usize = 100;
const RELATIVE_OFF_DIAGONAL_TOL: f64 = 1e-14;

/// `S = V · diag(values) · Vᵗ`, with the eigenvectors as the columns of `V`.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Spectrum,
    pub vectors: Matrix,
    pub sweeps: usize,
}

impl EigenDecomposition {
    /// `V · diag(values) · Vᵗ`.
    pub fn reconstruct(&self) -> Matrix {
        let lambda = Matrix::from_diagonal(self.values.values());
        &(&self.vectors * &lambda) * &self.vectors.transpose()
    }
}

pub fn eigenvalues_sym(s: &SymMatrix) -> Spectrum {
    eigen_sym(s).values
}

/// Cyclic Jacobi diagonalization.
///
/// Sweeps over all `(p, q)` pairs until the off-diagonal Frobenius norm drops
/// below `1e-14 · ‖S‖_F`, or after [`JACOBI_MAX_SWEEPS`] sweeps.
pub fn eigen_sym(s: &SymMatrix) -> EigenDecomposition {
    let n = s.n();
    let mut a = s.matrix().clone();
    let mut v = Matrix::identity(n);
    let threshold = RELATIVE_OFF_DIAGONAL_TOL * s.frobenius_norm();

    let mut sweeps = 0;
    while sweeps < JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&a) <= threshold {
            break;
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                // Entries below the rounding level of both diagonal terms are dropped.
                let g = 100.0 * apq.abs();
                if sweeps > 4 && a[(p, p)].abs() + g == a[(p, p)].abs() && a[(q, q)].abs() + g == a[(q, q)].abs() {
                    a[(p, q)] = 0.0;
                    a[(q, p)] = 0.0;
                    continue;
                }
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].total_cmp(&a[(i, i)]));
    let values = order.iter().map(|&i| a[(i, i)]).collect();
    let mut vectors = Matrix::zeros(n);
    for (col, &src) in order.iter().enumerate() {
        for row in 0..n {
            vectors[(row, col)] = v[(row, src)];
        }
    }
    EigenDecomposition {
        values: Spectrum::new(values).expect("sorted diagonal of a finite matrix"),
        vectors,
        sweeps,
    }
}

fn off_diagonal_norm(a: &Matrix) -> f64 {
    let n = a.n();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)] * a[(i, j)];
            }
        }
    }
    acc.sqrt()
}

/// One Jacobi rotation annihilating `a[p][q]`, accumulated into `v`.
fn rotate(a: &mut Matrix, v: &mut Matrix, p: usize, q: usize) {
    let n = a.n();
    let apq = a[(p, q)];
    let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    a[(p, p)] -= t * apq;
    a[(q, q)] += t * apq;
    a[(p, q)] = 0.0;
    a[(q, p)] = 0.0;
    for r in 0..n {
        if r == p || r == q {
            continue;
        }
        let arp = a[(r, p)];
        let arq = a[(r, q)];
        let new_rp = c * arp - s * arq;
        let new_rq = s * arp + c * arq;
        a[(r, p)] = new_rp;
        a[(p, r)] = new_rp;
        a[(r, q)] = new_rq;
        a[(q, r)] = new_rq;
    }
    for r in 0..n {
        let vrp = v[(r, p)];
        let vrq = v[(r, q)];
        v[(r, p)] = c * vrp - s * vrq;
        v[(r, q)] = s * vrp + c * vrq;
    }
}

//! Symmetric-definite 3×3 eigenproblems `A v = λ B v`.
//!
//! The pencil is reduced to a standard symmetric problem with the Cholesky
//! factor of `B` and solved by cyclic Jacobi rotations, which stay accurate
//! for clustered or repeated eigenvalues.

use super::matrix::{Mat3, Vec3};
use crate::error::{Error, Result};

/// Eigen-decomposition of a symmetric-definite pencil.
#[derive(Clone, Copy, Debug)]
pub struct PencilEigen {
    /// Eigenvalues, sorted descending.
    pub values: [f64; 3],
    /// `B`-orthonormal eigenvectors, `vectors[i]` belongs to `values[i]`.
    pub vectors: [Vec3; 3],
    /// Smallest pairwise eigenvalue separation.
    pub min_gap: f64,
    /// Set when `min_gap` is below the configured degeneracy threshold.
    pub degenerate: bool,
}

/// Jacobi eigen-decomposition of a symmetric matrix. Returns eigenvalues and
/// the orthonormal eigenvector matrix (columns), unsorted.
pub fn symmetric_eig3(a: &Mat3) -> ([f64; 3], Mat3) {
    let mut m = *a;
    let mut v = Mat3::IDENTITY;
    let scale = m.frobenius().max(f64::MIN_POSITIVE);
    for _sweep in 0..64 {
        let off = (m[(0, 1)].powi(2) + m[(0, 2)].powi(2) + m[(1, 2)].powi(2)).sqrt();
        if off <= 1e-300 || off <= f64::EPSILON * 1e-3 * scale {
            break;
        }
        for (p, q) in [(0usize, 1usize), (0, 2), (1, 2)] {
            let apq = m[(p, q)];
            if apq == 0.0 {
                continue;
            }
            let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
            let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
            let t = if theta == 0.0 { 1.0 } else { t };
            let c = 1.0 / (t * t + 1.0).sqrt();
            let s = t * c;
            // m <- Jᵀ m J with the rotation acting on rows/columns p, q
            for k in 0..3 {
                let mkp = m[(k, p)];
                let mkq = m[(k, q)];
                m[(k, p)] = c * mkp - s * mkq;
                m[(k, q)] = s * mkp + c * mkq;
            }
            for k in 0..3 {
                let mpk = m[(p, k)];
                let mqk = m[(q, k)];
                m[(p, k)] = c * mpk - s * mqk;
                m[(q, k)] = s * mpk + c * mqk;
            }
            for k in 0..3 {
                let vkp = v[(k, p)];
                let vkq = v[(k, q)];
                v[(k, p)] = c * vkp - s * vkq;
                v[(k, q)] = s * vkp + c * vkq;
            }
        }
    }
    ([m[(0, 0)], m[(1, 1)], m[(2, 2)]], v)
}

/// Solves `A v = λ B v` for symmetric `A` and symmetric positive-definite `B`.
///
/// Eigenvalues come back sorted descending; each eigenvector is scaled to
/// unit `B`-norm and its largest-magnitude component is made positive.
pub fn generalized_sym_eig3(a: &Mat3, b: &Mat3, degenerate_gap: f64) -> Result<PencilEigen> {
    let l = b.cholesky().ok_or(Error::NotPositiveDefinite)?;
    let linv = l.inverse().ok_or(Error::NotPositiveDefinite)?;
    let c = linv * *a * linv.transpose();
    // symmetrize away rounding
    let c = Mat3::symmetric_from(|i, j| 0.5 * (c[(i, j)] + c[(j, i)]));
    let (vals, w) = symmetric_eig3(&c);
    let back = linv.transpose();

    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| vals[j].total_cmp(&vals[i]));

    let mut values = [0.0; 3];
    let mut vectors = [[0.0; 3]; 3];
    for (slot, &k) in order.iter().enumerate() {
        values[slot] = vals[k];
        let mut vec = back.mul_vec(&w.column(k));
        let norm = b.form(&vec, &vec).sqrt();
        for x in vec.iter_mut() {
            *x /= norm;
        }
        canonicalize_sign(&mut vec);
        vectors[slot] = vec;
    }
    let min_gap = (values[0] - values[1]).min(values[1] - values[2]);
    Ok(PencilEigen {
        values,
        vectors,
        min_gap,
        degenerate: min_gap < degenerate_gap,
    })
}

/// Flips `v` so that its largest-magnitude component is positive.
pub fn canonicalize_sign(v: &mut Vec3) {
    let mut k = 0;
    for i in 1..3 {
        if v[i].abs() > v[k].abs() {
            k = i;
        }
    }
    if v[k] < 0.0 {
        for x in v.iter_mut() {
            *x = -*x;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_pencil() {
        let e = generalized_sym_eig3(&Mat3::diag([3.0, 2.0, 1.0]), &Mat3::IDENTITY, 1e-9).unwrap();
        assert_eq!(e.values, [3.0, 2.0, 1.0]);
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((e.vectors[i][j] - want).abs() < 1e-15);
            }
        }
        assert!(!e.degenerate);
    }

    #[test]
    fn repeated_eigenvalue_flags_degeneracy() {
        // det(A - λB) = (2 - 2λ)(2 - λ)² → λ ∈ {1, 2, 2}
        let e = generalized_sym_eig3(&Mat3::diag([2.0; 3]), &Mat3::diag([2.0, 1.0, 1.0]), 1e-9)
            .unwrap();
        assert!((e.values[0] - 2.0).abs() < 1e-14);
        assert!((e.values[1] - 2.0).abs() < 1e-14);
        assert!((e.values[2] - 1.0).abs() < 1e-14);
        assert!(e.degenerate);
    }

    #[test]
    fn indefinite_b_is_rejected() {
        let r = generalized_sym_eig3(&Mat3::IDENTITY, &Mat3::diag([1.0, 0.0, 1.0]), 1e-9);
        assert_eq!(r.unwrap_err(), Error::NotPositiveDefinite);
    }

    #[test]
    fn sign_canonicalization() {
        let mut v = [0.1, -0.9, 0.3];
        canonicalize_sign(&mut v);
        assert_eq!(v, [-0.1, 0.9, -0.3]);
    }
}

use super::point::{dot, Point5};
use crate::error::{Error, Result};

/// Pre-normalization norm below which the four inputs count as dependent.
pub const DEGENERATE_NORM: f64 = 1e-10;

fn det4(m: &[[f64; 4]; 4]) -> f64 {
    // Laplace expansion along the first row through 2×2 minors of rows 2-3.
    let s0 = m[2][0] * m[3][1] - m[2][1] * m[3][0];
    let s1 = m[2][0] * m[3][2] - m[2][2] * m[3][0];
    let s2 = m[2][0] * m[3][3] - m[2][3] * m[3][0];
    let s3 = m[2][1] * m[3][2] - m[2][2] * m[3][1];
    let s4 = m[2][1] * m[3][3] - m[2][3] * m[3][1];
    let s5 = m[2][2] * m[3][3] - m[2][3] * m[3][2];
    let c0 = m[1][1] * s5 - m[1][2] * s4 + m[1][3] * s3;
    let c1 = m[1][0] * s5 - m[1][2] * s2 + m[1][3] * s1;
    let c2 = m[1][0] * s4 - m[1][1] * s2 + m[1][3] * s0;
    let c3 = m[1][0] * s3 - m[1][1] * s1 + m[1][2] * s0;
    m[0][0] * c0 - m[0][1] * c1 + m[0][2] * c2 - m[0][3] * c3
}

/// Generalized cross product of four vectors in ℝ⁵: the cofactor expansion
/// of the 5×5 determinant whose first row is symbolic. Not normalized.
pub fn cross4(v: [&Point5; 4]) -> Point5 {
    let mut out = Point5::ZERO;
    for col in 0..5 {
        let mut minor = [[0.0; 4]; 4];
        for (r, vec) in v.iter().enumerate() {
            let mut c = 0;
            for k in 0..5 {
                if k != col {
                    minor[r][c] = vec[k];
                    c += 1;
                }
            }
        }
        let sign = if col % 2 == 0 { 1.0 } else { -1.0 };
        out[col] = sign * det4(&minor);
    }
    out
}

/// Unit vector orthogonal to all four inputs.
///
/// The cofactor vector is polished with one Gram–Schmidt pass against the
/// orthonormalized inputs so orthogonality holds to rounding.
pub fn normal_complement(v1: &Point5, v2: &Point5, v3: &Point5, v4: &Point5) -> Result<Point5> {
    let raw = cross4([v1, v2, v3, v4]);
    let norm = raw.norm();
    // the cofactor vector scales with the product of the input lengths
    let scale = v1.norm() * v2.norm() * v3.norm() * v4.norm();
    if !(norm >= DEGENERATE_NORM) || !(norm > 1e-14 * scale) {
        return Err(Error::DegenerateFrame { norm });
    }
    let mut y = raw.scale(1.0 / norm);

    let mut basis: Vec<Point5> = Vec::with_capacity(4);
    for v in [v1, v2, v3, v4] {
        let mut q = *v;
        for b in &basis {
            q = q.axpy(-dot(&q, b), b);
        }
        let n = q.norm();
        if n > 0.0 {
            basis.push(q.scale(1.0 / n));
        }
    }
    for b in &basis {
        y = y.axpy(-dot(&y, b), b);
    }
    Ok(y.scale(1.0 / y.norm()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_aligned_complement() {
        let e: Vec<Point5> = (0..4).map(Point5::basis).collect();
        let y = normal_complement(&e[0], &e[1], &e[2], &e[3]).unwrap();
        assert!((y[4].abs() - 1.0).abs() < 1e-15);
        for k in 0..4 {
            assert_eq!(y[k], 0.0);
        }
    }

    #[test]
    fn repeated_vector_is_degenerate() {
        let a = Point5([1.0, 2.0, 0.0, 0.5, 0.1]);
        let b = Point5([0.0, 1.0, 1.0, 0.0, 0.0]);
        let c = Point5([0.3, 0.0, 0.0, 1.0, 0.0]);
        let r = normal_complement(&a, &b, &a, &c);
        assert!(matches!(r, Err(Error::DegenerateFrame { .. })));
    }

    #[test]
    fn det4_matches_identity_and_permutation() {
        let mut id = [[0.0; 4]; 4];
        for i in 0..4 {
            id[i][i] = 1.0;
        }
        assert_eq!(det4(&id), 1.0);
        id.swap(0, 1);
        assert_eq!(det4(&id), -1.0);
    }
}

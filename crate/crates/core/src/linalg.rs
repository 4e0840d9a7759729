//! Small dense Hermitian eigensolvers.

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Eigen-decomposition of the Hermitian matrix `[[a, b], [b*, d]]`.
///
/// Returns eigenvalues in ascending order with matching orthonormal
/// eigenvectors `[v_lo, v_hi]`. A vanishing off-diagonal yields the
/// computational basis vectors, lower diagonal entry first (ties keep
/// the original order).
pub(crate) fn hermitian2_eigen(a: f64, b: Complex64, d: f64) -> ([f64; 2], [[Complex64; 2]; 2]) {
    let mid = 0.5 * (a + d);
    let half_gap = 0.5 * (a - d);
    let r = half_gap.hypot(b.norm());

    if b.norm() == 0.0 {
        return if a <= d {
            ([a, d], [[ONE, ZERO], [ZERO, ONE]])
        } else {
            ([d, a], [[ZERO, ONE], [ONE, ZERO]])
        };
    }

    // Pick the eigenvector formula that avoids cancellation, then take its
    // orthogonal complement for the other eigenvalue.
    let (lo, hi) = if half_gap >= 0.0 {
        // (H - λ₊ I) v = 0 with v = (r + h, b*)
        let hi = normalize([Complex64::new(r + half_gap, 0.0), b.conj()]);
        (orthogonal(&hi), hi)
    } else {
        // (H - λ₋ I) v = 0 with v = (h - r, b*) rewritten as (r - h, -b*)
        let lo = normalize([Complex64::new(r - half_gap, 0.0), -b.conj()]);
        (lo, orthogonal(&lo))
    };
    ([mid - r, mid + r], [lo, hi])
}

fn normalize(v: [Complex64; 2]) -> [Complex64; 2] {
    let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    [v[0] / n, v[1] / n]
}

fn orthogonal(v: &[Complex64; 2]) -> [Complex64; 2] {
    [-v[1].conj(), v[0].conj()]
}

pub(crate) fn hermitian2_eigen_matrix(m: &Matrix2<Complex64>) -> ([f64; 2], [[Complex64; 2]; 2]) {
    hermitian2_eigen(m[(0, 0)].re, m[(0, 1)], m[(1, 1)].re)
}

fn off_diagonal_norm(m: &Matrix4<Complex64>) -> f64 {
    let mut acc = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            if i != j {
                acc += m[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Largest entrywise modulus.
pub(crate) fn max_abs(m: &Matrix4<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub(crate) const JACOBI_TOLERANCE: f64 = 1e-13;
const JACOBI_MAX_SWEEPS: usize = 64;

/// Cyclic complex Jacobi iteration for a Hermitian 4×4 matrix.
///
/// Each rotation diagonalizes one 2×2 principal submatrix exactly. Returns
/// unsorted eigenvalues and the accumulated unitary whose columns are the
/// eigenvectors.
pub(crate) fn jacobi_hermitian4(h: &Matrix4<Complex64>) -> ([f64; 4], Matrix4<Complex64>) {
    let mut a = *h;
    let mut v = Matrix4::<Complex64>::identity();

    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&a) < JACOBI_TOLERANCE {
            break;
        }
        for p in 0..3 {
            for q in (p + 1)..4 {
                if a[(p, q)].norm() == 0.0 {
                    continue;
                }
                let (_, [g0, g1]) = hermitian2_eigen(a[(p, p)].re, a[(p, q)], a[(q, q)].re);
                // columns of the 2×2 rotation G are g0, g1; A ← G† A G, V ← V G
                for k in 0..4 {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * g0[0] + akq * g0[1];
                    a[(k, q)] = akp * g1[0] + akq * g1[1];
                }
                for k in 0..4 {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = g0[0].conj() * apk + g0[1].conj() * aqk;
                    a[(q, k)] = g1[0].conj() * apk + g1[1].conj() * aqk;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
                for k in 0..4 {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * g0[0] + vkq * g0[1];
                    v[(k, q)] = vkp * g1[0] + vkq * g1[1];
                }
            }
        }
    }

    let values = [a[(0, 0)].re, a[(1, 1)].re, a[(2, 2)].re, a[(3, 3)].re];
    (values, v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_pair(a: f64, b: Complex64, d: f64) {
        let (vals, vecs) = hermitian2_eigen(a, b, d);
        assert!(vals[0] <= vals[1]);
        let m = Matrix2::new(Complex64::new(a, 0.0), b, b.conj(), Complex64::new(d, 0.0));
        for (val, vec) in vals.iter().zip(vecs.iter()) {
            let x = nalgebra::Vector2::new(vec[0], vec[1]);
            let r = m * x - x * Complex64::new(*val, 0.0);
            assert!(r.norm() < 1e-13, "residual {}", r.norm());
            assert!((x.norm() - 1.0).abs() < 1e-14);
        }
        let overlap = vecs[0][0].conj() * vecs[1][0] + vecs[0][1].conj() * vecs[1][1];
        assert!(overlap.norm() < 1e-14);
    }

    #[test]
    fn two_by_two_cases() {
        check_pair(1.0, Complex64::new(0.3, -0.2), -0.5);
        check_pair(-0.5, Complex64::new(0.3, -0.2), 1.0);
        check_pair(0.0, Complex64::new(0.0, 1.0), 0.0);
        check_pair(1e8, Complex64::new(1e-3, 0.0), -1e8);
        check_pair(2.0, Complex64::new(0.0, 0.0), -1.0);
    }

    #[test]
    #[rustfmt::skip]
    fn jacobi_dense_case() {
        let c = |re, im| Complex64::new(re, im);
        let h = Matrix4::new(
            c(1.0, 0.0), c(0.2, 0.1), c(-0.3, 0.4), c(0.0, -0.7),
            c(0.2, -0.1), c(-2.0, 0.0), c(0.5, 0.0), c(0.1, 0.1),
            c(-0.3, -0.4), c(0.5, 0.0), c(0.3, 0.0), c(0.9, -0.2),
            c(0.0, 0.7), c(0.1, -0.1), c(0.9, 0.2), c(1.5, 0.0),
        );
        let (vals, v) = jacobi_hermitian4(&h);
        let d = Matrix4::from_diagonal(&nalgebra::Vector4::from_iterator(
            vals.iter().map(|&x| Complex64::new(x, 0.0)),
        ));
        let rebuilt = v * d * v.adjoint();
        assert!(max_abs(&(rebuilt - h)) < 1e-13);
        assert!(max_abs(&(v.adjoint() * v - Matrix4::identity())) < 1e-14);
    }
}

//! Symmetric eigensolver: Householder reduction to tridiagonal form followed
//! by the implicit QL iteration with Wilkinson-type shifts.
//!
//! The reduction keeps the whole trailing block symmetric instead of only its
//! lower triangle. That doubles the update work but turns every inner loop
//! into a contiguous row sweep, which is what matters for `p` in the
//! thousands.

use alloc::vec;
use alloc::vec::Vec;

use super::matrix::Matrix;
use crate::{Error, Result};

/// Iterations allowed per eigenvalue before giving up.
const MAX_QL_ITERATIONS: usize = 60;

/// Eigenvalues and (optionally) orthonormal eigenvectors, ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigen {
    pub values: Vec<f64>,
    /// Column `j` is the eigenvector of `values[j]`.
    pub vectors: Option<Matrix>,
}

fn check_input(a: &Matrix) -> Result<()> {
    if a.rows() != a.cols() {
        return Err(Error::argument(
            "matrix",
            alloc::format!("must be square, got {}×{}", a.rows(), a.cols()),
        ));
    }
    if a.as_slice().iter().any(|x| !x.is_finite()) {
        return Err(Error::argument("matrix", "entries must be finite"));
    }
    Ok(())
}

/// Symmetrised working copy built from the lower triangle.
fn working_copy(a: &Matrix) -> Vec<f64> {
    let n = a.rows();
    let mut z = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let v = a.get(i, j);
            z[i * n + j] = v;
            z[j * n + i] = v;
        }
    }
    z
}

/// Householder tridiagonalisation in place. On return `d` holds the
/// diagonal and `e[1..]` the subdiagonal. With `vectors`, `z` is replaced by
/// the orthogonal transformation.
fn tridiagonalize(z: &mut [f64], n: usize, d: &mut [f64], e: &mut [f64], vectors: bool) {
    let mut q = vec![0.0; n];
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let scale: f64 = z[i * n..i * n + i].iter().map(|x| libm::fabs(*x)).sum();
            if scale == 0.0 {
                e[i] = z[i * n + l];
            } else {
                for k in 0..i {
                    z[i * n + k] /= scale;
                    h += z[i * n + k] * z[i * n + k];
                }
                let f = z[i * n + l];
                let g = if f >= 0.0 {
                    -libm::sqrt(h)
                } else {
                    libm::sqrt(h)
                };
                e[i] = scale * g;
                h -= f * g;
                z[i * n + l] = f - g;
                // p = A u / h, K = uᵀp / 2h, q = p − K u
                let mut f = 0.0;
                for j in 0..i {
                    if vectors {
                        z[j * n + i] = z[i * n + j] / h;
                    }
                    let (row_j, row_i) = (&z[j * n..j * n + i], &z[i * n..i * n + i]);
                    let g: f64 = row_j.iter().zip(row_i).map(|(a, b)| a * b).sum();
                    e[j] = g / h;
                    f += e[j] * z[i * n + j];
                }
                let hh = f / (h + h);
                for j in 0..i {
                    q[j] = e[j] - hh * z[i * n + j];
                    e[j] = q[j];
                }
                // A ← A − u qᵀ − q uᵀ on the leading i×i block
                for j in 0..i {
                    let (uj, qj) = (z[i * n + j], q[j]);
                    let (head, tail) = z.split_at_mut(i * n);
                    let u = &tail[..i];
                    let row = &mut head[j * n..j * n + i];
                    for k in 0..i {
                        row[k] -= uj * q[k] + qj * u[k];
                    }
                }
            }
        } else {
            e[i] = z[i * n + l];
        }
        d[i] = h;
    }
    if n > 0 {
        d[0] = 0.0;
        e[0] = 0.0;
    }
    for i in 0..n {
        if vectors {
            if d[i] != 0.0 {
                for j in 0..i {
                    let mut g = 0.0;
                    for k in 0..i {
                        g += z[i * n + k] * z[k * n + j];
                    }
                    for k in 0..i {
                        z[k * n + j] -= g * z[k * n + i];
                    }
                }
            }
            d[i] = z[i * n + i];
            z[i * n + i] = 1.0;
            for j in 0..i {
                z[j * n + i] = 0.0;
                z[i * n + j] = 0.0;
            }
        } else {
            d[i] = z[i * n + i];
        }
    }
}

/// Implicit QL on the tridiagonal matrix `(d, e)`; `e[1..]` is the
/// subdiagonal on entry and destroyed on return.
fn ql_implicit(d: &mut [f64], e: &mut [f64], z: Option<&mut [f64]>, n: usize) -> Result<()> {
    let mut z = z;
    for i in 1..n {
        e[i - 1] = e[i];
    }
    if n > 0 {
        e[n - 1] = 0.0;
    }
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = libm::fabs(d[m]) + libm::fabs(d[m + 1]);
                if libm::fabs(e[m]) <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_QL_ITERATIONS {
                return Err(Error::NoConvergence {
                    index: l,
                    iterations: MAX_QL_ITERATIONS,
                    dim: n,
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = libm::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + libm::copysign(r, g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = libm::hypot(f, g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(z) = z.as_deref_mut() {
                    for k in 0..n {
                        let f = z[k * n + i + 1];
                        z[k * n + i + 1] = s * z[k * n + i] + c * f;
                        z[k * n + i] = c * z[k * n + i] - s * f;
                    }
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// All eigenvalues of a symmetric matrix, ascending. Only the lower triangle
/// is read.
pub fn eigenvalues_sym(a: &Matrix) -> Result<Vec<f64>> {
    check_input(a)?;
    let n = a.rows();
    let mut z = working_copy(a);
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tridiagonalize(&mut z, n, &mut d, &mut e, false);
    ql_implicit(&mut d, &mut e, None, n)?;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// Eigenvalues and eigenvectors of a symmetric matrix, ascending. Only the
/// lower triangle is read.
pub fn eigen_sym(a: &Matrix) -> Result<Eigen> {
    check_input(a)?;
    let n = a.rows();
    let mut z = working_copy(a);
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tridiagonalize(&mut z, n, &mut d, &mut e, true);
    ql_implicit(&mut d, &mut e, Some(&mut z), n)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| d[x].total_cmp(&d[y]));
    let values = order.iter().map(|&j| d[j]).collect();
    let mut vectors = Matrix::zeros(n, n);
    for (col, &j) in order.iter().enumerate() {
        for k in 0..n {
            vectors.set(k, col, z[k * n + j]);
        }
    }
    Ok(Eigen {
        values,
        vectors: Some(vectors),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulation::matrix::correlation_matrix;
    use crate::simulation::sampling::{replicate_rng, sample_matrix, Distribution};
    use rand::Rng;

    fn random_symmetric(n: usize, seed: u64) -> Matrix {
        let mut rng = replicate_rng(seed, 0);
        let mut a = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let v: f64 = rng.random::<f64>() * 2.0 - 1.0;
                a.set(i, j, v);
                a.set(j, i, v);
            }
        }
        a
    }

    #[test]
    fn identity_and_two_by_two() {
        assert_eq!(eigenvalues_sym(&Matrix::identity(5)).unwrap(), vec![1.0; 5]);
        let rho = 0.3;
        let a = Matrix::from_rows(&[&[1.0, rho], &[rho, 1.0]]).unwrap();
        let v = eigenvalues_sym(&a).unwrap();
        assert!((v[0] - 0.7).abs() < 1e-15 && (v[1] - 1.3).abs() < 1e-15);
        assert!(eigenvalues_sym(&Matrix::zeros(0, 0)).unwrap().is_empty());
        assert_eq!(
            eigenvalues_sym(&Matrix::from_rows(&[&[4.0]]).unwrap()).unwrap(),
            vec![4.0]
        );
    }

    #[test]
    fn trace_identities() {
        let a = random_symmetric(50, 3);
        let v = eigenvalues_sym(&a).unwrap();
        let tr = a.trace();
        let fro2 = a.frobenius() * a.frobenius();
        let s1: f64 = v.iter().sum();
        let s2: f64 = v.iter().map(|x| x * x).sum();
        assert!(((s1 - tr) / tr.abs().max(1.0)).abs() < 1e-8);
        assert!(((s2 - fro2) / fro2).abs() < 1e-8);
        assert!(v.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn residuals_and_orthogonality() {
        for (n, seed) in [(1, 1), (2, 2), (7, 3), (64, 4), (150, 5)] {
            let a = random_symmetric(n, seed);
            let eig = eigen_sym(&a).unwrap();
            let v = eig.vectors.unwrap();
            let norm = a.frobenius();
            for j in 0..n {
                let mut res = 0.0;
                for i in 0..n {
                    let av: f64 = (0..n).map(|k| a.get(i, k) * v.get(k, j)).sum();
                    res += (av - eig.values[j] * v.get(i, j)).powi(2);
                }
                assert!(res.sqrt() <= 1e-10 * norm, "n={n} j={j}");
                for j2 in 0..n {
                    let dot: f64 = (0..n).map(|k| v.get(k, j) * v.get(k, j2)).sum();
                    let expect = if j == j2 { 1.0 } else { 0.0 };
                    assert!((dot - expect).abs() < 1e-10);
                }
            }
            let values_only = eigenvalues_sym(&a).unwrap();
            for (x, y) in values_only.iter().zip(&eig.values) {
                assert!((x - y).abs() < 1e-12 * norm.max(1.0));
            }
        }
    }

    #[test]
    fn agrees_with_nalgebra() {
        let a = random_symmetric(80, 9);
        let ours = eigenvalues_sym(&a).unwrap();
        let m = nalgebra::DMatrix::from_fn(80, 80, |i, j| a.get(i, j));
        let mut theirs: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
        theirs.sort_by(f64::total_cmp);
        for (x, y) in ours.iter().zip(&theirs) {
            assert!((x - y).abs() < 1e-11, "{x} vs {y}");
        }
    }

    #[test]
    fn correlation_spectrum_is_nonnegative() {
        let x = sample_matrix(120, 60, Distribution::student_t(1.0).unwrap(), 8).unwrap();
        let r = correlation_matrix(&x).unwrap();
        let v = eigenvalues_sym(&r).unwrap();
        let norm = r.frobenius();
        assert!(v[0] >= -1e-8 * norm);
        assert!((v.iter().sum::<f64>() - 120.0).abs() < 1e-6 * 120.0);
        // rank at most n = 60
        assert!(v[..60].iter().all(|x| x.abs() < 1e-8 * norm));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(eigenvalues_sym(&Matrix::zeros(2, 3)).is_err());
        let a = Matrix::from_rows(&[&[1.0, f64::NAN], &[f64::NAN, 1.0]]).unwrap();
        assert!(eigenvalues_sym(&a).is_err());
    }

    #[test]
    fn clustered_and_diagonal_spectra() {
        let mut a = Matrix::zeros(6, 6);
        for i in 0..6 {
            a.set(i, i, (i % 2) as f64);
        }
        let v = eigenvalues_sym(&a).unwrap();
        assert_eq!(v, vec![0.0, 0.0, 0.0, 1.0, 1.0, 1.0]);
        // all-ones matrix: one eigenvalue n, the rest zero
        let n = 30;
        let ones = Matrix::from_row_major(n, n, vec![1.0; n * n]).unwrap();
        let v = eigenvalues_sym(&ones).unwrap();
        assert!((v[n - 1] - n as f64).abs() < 1e-12);
        assert!(v[..n - 1].iter().all(|x| x.abs() < 1e-12));
    }
}

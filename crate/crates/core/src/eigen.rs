//! Cyclic Jacobi eigensolver. Complex Hermitian input `A + iB` is solved
//! through the real symmetric embedding `[[A, -B], [B, A]]`, whose spectrum
//! is that of the input with every eigenvalue doubled.

use num_complex::Complex64;

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};

/// Off-diagonal Frobenius norm below which iteration stops.
pub const OFF_DIAGONAL_TOL: f64 = 1e-13;
/// Largest accepted |m_ij - conj(m_ji)|.
pub const HERMITIAN_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;

/// Eigen-decomposition of a real symmetric matrix given row-major.
/// Returns ascending eigenvalues and the matching eigenvectors.
pub fn jacobi_symmetric(mut a: Vec<f64>, n: usize) -> (Vec<f64>, Vec<Vec<f64>>) {
    assert_eq!(a.len(), n * n);
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let scale = a.iter().map(|x| x * x).sum::<f64>().sqrt().max(1.0);
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j] * a[i * n + j])
            .sum::<f64>()
            .sqrt();
        if off < OFF_DIAGONAL_TOL * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k * n + p], a[k * n + q]);
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p * n + k], a[q * n + k]);
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let (vkp, vkq) = (v[k * n + p], v[k * n + q]);
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].total_cmp(&a[j * n + j]));
    let values = order.iter().map(|&i| a[i * n + i]).collect();
    let vectors = order
        .iter()
        .map(|&i| (0..n).map(|k| v[k * n + i]).collect())
        .collect();
    (values, vectors)
}

/// Ascending eigenvalues and unit eigenvectors of a Hermitian matrix.
/// On the complex path, vectors belonging to a degenerate eigenvalue are not
/// guaranteed to be mutually orthogonal.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<Complex64>>,
}

pub fn hermitian_eigen(m: &DenseMatrix) -> Result<HermitianEigen> {
    let dev = m.hermitian_deviation();
    if dev > HERMITIAN_TOL {
        return Err(Error::NotHermitian(dev));
    }
    let n = m.dim();
    let entries: Vec<Complex64> = (0..n * n).map(|k| m.get(k / n, k % n)).collect();
    Ok(hermitian_eigen_raw(&entries, n))
}

/// Same as [`hermitian_eigen`] on a row-major slice, without the check.
pub fn hermitian_eigen_raw(entries: &[Complex64], n: usize) -> HermitianEigen {
    if entries.iter().all(|z| z.im == 0.0) {
        let (values, vecs) = jacobi_symmetric(entries.iter().map(|z| z.re).collect(), n);
        let vectors = vecs
            .into_iter()
            .map(|v| v.into_iter().map(|x| Complex64::new(x, 0.0)).collect())
            .collect();
        return HermitianEigen { values, vectors };
    }
    let n2 = 2 * n;
    let mut big = vec![0.0; n2 * n2];
    for i in 0..n {
        for j in 0..n {
            // symmetrize so that tiny hermiticity errors do not leak in
            let z = (entries[i * n + j] + entries[j * n + i].conj()) * 0.5;
            big[i * n2 + j] = z.re;
            big[(i + n) * n2 + j + n] = z.re;
            big[i * n2 + j + n] = -z.im;
            big[(i + n) * n2 + j] = z.im;
        }
    }
    let (vals, vecs) = jacobi_symmetric(big, n2);
    let mut values = Vec::with_capacity(n);
    let mut vectors = Vec::with_capacity(n);
    for k in (0..n2).step_by(2) {
        values.push(0.5 * (vals[k] + vals[k + 1]));
        let v = &vecs[k];
        let mut z: Vec<Complex64> = (0..n).map(|i| Complex64::new(v[i], v[i + n])).collect();
        let norm = z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        z.iter_mut().for_each(|c| *c /= norm);
        vectors.push(z);
    }
    HermitianEigen { values, vectors }
}

/// Eigenvector for the largest eigenvalue, with that eigenvalue.
pub fn top_eigenpair(entries: &[Complex64], n: usize) -> (f64, Vec<Complex64>) {
    let mut e = hermitian_eigen_raw(entries, n);
    let v = e.vectors.pop().expect("nonempty spectrum");
    (*e.values.last().expect("nonempty spectrum"), v)
}

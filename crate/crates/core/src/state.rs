//! σ-diagonal states `ρ = Σ r_μ P_μ` on C^d ⊗ C^d, d = 2^n, where
//! `P_μ = |Ψ_μ⟩⟨Ψ_μ|` and `|Ψ_μ⟩ = (1 ⊗ σ_μ)|Ψ₊⟩`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::dense::{DenseMatrix, GaussianRational, Mode};
use crate::eigen::{hermitian_eigen, hermitian_eigen_raw};
use crate::error::{Error, Result};
use crate::pattern::Pattern;
use crate::pauli::PauliString;

/// Minimum eigenvalue above which a partial transpose counts as positive.
pub const PPT_TOL: f64 = 1e-10;
/// Largest n for dense constructions (dimension 64).
pub const MAX_QUBITS: usize = 3;

fn check_n(n: usize) -> Result<()> {
    if (1..=MAX_QUBITS).contains(&n) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "n = {n} outside 1..={MAX_QUBITS}"
        )))
    }
}

/// `(1/√d) Σ_i |i⟩ ⊗ |i⟩`.
pub fn symmetric_vector(n: usize) -> Vec<Complex64> {
    basis_vector(&PauliString::identity(n))
}

/// `|Ψ_m⟩` with entries `(1/√d) (σ_m)_{j,i}` at index `i·d + j`.
pub fn basis_vector(m: &PauliString) -> Vec<Complex64> {
    let d = 1usize << m.len();
    let scale = 1.0 / (d as f64).sqrt();
    let (rows, phases) = m.monomial();
    let mut v = vec![Complex64::new(0.0, 0.0); d * d];
    for i in 0..d {
        v[i * d + rows[i]] = phases[i].to_complex() * scale;
    }
    v
}

/// Exact Gram matrix of all `4^n` basis vectors, ordered by string code.
/// The common factor `1/d` is carried exactly.
pub fn basis_gram_exact(n: usize) -> Result<DenseMatrix> {
    check_n(n)?;
    let d = 1usize << n;
    let count = d * d;
    let unscaled: Vec<Vec<GaussianRational>> = (0..count)
        .map(|c| {
            let (rows, phases) = PauliString::from_code(c, n).monomial();
            let mut v = vec![GaussianRational::zero(); count];
            for i in 0..d {
                v[i * d + rows[i]] = phases[i].to_gaussian();
            }
            v
        })
        .collect();
    let inv_d = GaussianRational::real(BigRational::new(1.into(), BigInt::from(d)));
    let mut data = Vec::with_capacity(count * count);
    for a in &unscaled {
        for b in &unscaled {
            let mut s = GaussianRational::zero();
            for (x, y) in a.iter().zip(b) {
                if !x.is_zero() && !y.is_zero() {
                    s += &(&x.conj() * y);
                }
            }
            data.push(&s * &inv_d);
        }
    }
    DenseMatrix::from_exact(count, data)
}

/// Probability vector over Pauli strings, indexed by string code.
#[derive(Clone, Debug, PartialEq)]
pub struct SigmaDiagonalState {
    n: usize,
    r: Vec<BigRational>,
}

impl SigmaDiagonalState {
    pub fn new(n: usize, r: Vec<BigRational>) -> Result<Self> {
        check_n(n)?;
        if r.len() != 1 << (2 * n) {
            return Err(Error::Dimension {
                expected: 1 << (2 * n),
                got: r.len(),
            });
        }
        if let Some(i) = r.iter().position(|x| x.is_negative()) {
            return Err(Error::NegativeCoefficient(i));
        }
        let total: BigRational = r.iter().sum();
        if total != BigRational::from_integer(1.into()) {
            return Err(Error::NotNormalized(format!("sum = {total}")));
        }
        Ok(Self { n, r })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        check_n(n)?;
        let count = 1usize << (2 * n);
        let w = BigRational::new(1.into(), BigInt::from(count));
        Self::new(n, vec![w; count])
    }

    pub fn pure(s: &PauliString) -> Result<Self> {
        let n = s.len();
        check_n(n)?;
        let mut r = vec![BigRational::zero(); 1 << (2 * n)];
        r[s.code()] = BigRational::from_integer(1.into());
        Self::new(n, r)
    }

    /// The lattice state `ρ_I = (1/N_I) Σ_{p∈I} P_p` (n = 2).
    pub fn lattice(pattern: Pattern) -> Result<Self> {
        let count = pattern.len();
        if count == 0 {
            return Err(Error::EmptyPattern);
        }
        let w = BigRational::new(1.into(), BigInt::from(count));
        let r = (0..16)
            .map(|b| {
                if pattern.mask() >> b & 1 == 1 {
                    w.clone()
                } else {
                    BigRational::zero()
                }
            })
            .collect();
        Self::new(2, r)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.r
    }

    pub fn coefficient(&self, s: &PauliString) -> &BigRational {
        &self.r[s.code()]
    }
}

/// Exact density matrix, accumulated projector by projector.
pub fn density_matrix(s: &SigmaDiagonalState) -> DenseMatrix {
    diagonal_operator(s.n, &s.r).expect("state length matches n")
}

/// `Σ_μ w_μ P_μ` for arbitrary rational weights indexed by string code.
/// Each `P_μ` has only d² nonzero entries, `(1/d) σ_{ji} conj(σ_{lk})`.
pub fn diagonal_operator(n: usize, weights: &[BigRational]) -> Result<DenseMatrix> {
    check_n(n)?;
    let d = 1usize << n;
    let dim = d * d;
    if weights.len() != dim {
        return Err(Error::Dimension {
            expected: dim,
            got: weights.len(),
        });
    }
    let mut data = vec![GaussianRational::zero(); dim * dim];
    let inv_d = BigRational::new(1.into(), BigInt::from(d));
    for (code, r) in weights.iter().enumerate() {
        if r.is_zero() {
            continue;
        }
        let w = GaussianRational::real(r * &inv_d);
        let (rows, phases) = PauliString::from_code(code, n).monomial();
        for i in 0..d {
            for k in 0..d {
                let ph = phases[i] * phases[k].conj();
                let row = i * d + rows[i];
                let col = k * d + rows[k];
                data[row * dim + col] += &(&ph.to_gaussian() * &w);
            }
        }
    }
    Ok(DenseMatrix::Exact { dim, data })
}

/// Transpose of the second tensor factor: `((i,j),(k,l)) ↦ ((i,l),(k,j))`.
pub fn partial_transpose(m: &DenseMatrix, n: usize) -> Result<DenseMatrix> {
    let d = 1usize << n;
    if m.dim() != d * d {
        return Err(Error::Dimension {
            expected: d * d,
            got: m.dim(),
        });
    }
    Ok(m.permute_entries(|row, col| {
        let (i, j) = (row / d, row % d);
        let (k, l) = (col / d, col % d);
        (i * d + l, k * d + j)
    }))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralReport {
    pub eigenvalues: Vec<f64>,
    pub min_eigenvalue: f64,
    pub tolerance: f64,
}

impl SpectralReport {
    fn from_values(eigenvalues: Vec<f64>) -> Self {
        let min_eigenvalue = eigenvalues.first().copied().unwrap_or(0.0);
        SpectralReport {
            eigenvalues,
            min_eigenvalue,
            tolerance: PPT_TOL,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.min_eigenvalue >= -self.tolerance
    }
}

pub fn hermitian_eigenvalues(m: &DenseMatrix) -> Result<SpectralReport> {
    Ok(SpectralReport::from_values(hermitian_eigen(m)?.values))
}

/// PPT test through the spectrum of the partial transpose. Returns the
/// verdict and the smallest eigenvalue.
pub fn ppt_spectral(s: &SigmaDiagonalState) -> (bool, f64) {
    let pt = partial_transpose(&density_matrix(s), s.n).expect("dimension matches n");
    let report = hermitian_eigenvalues(&pt).expect("partial transpose is hermitian");
    (report.is_positive(), report.min_eigenvalue)
}

/// `4·N_I·ρ_I^Γ` as a matrix of Gaussian integers `(re, im)`, built without
/// rationals. Entry-for-entry equal to the exact route scaled by `4·N_I`.
pub fn lattice_partial_transpose_scaled(pattern: Pattern) -> Vec<(i64, i64)> {
    const D: usize = 4;
    const DIM: usize = 16;
    let mut data = vec![(0i64, 0i64); DIM * DIM];
    for p in pattern.points() {
        let (rows, phases) = p.string().monomial();
        for i in 0..D {
            for k in 0..D {
                let (re, im) = (phases[i] * phases[k].conj()).to_ints();
                // entry ((i, rows[i]), (k, rows[k])) moves to ((i, rows[k]), (k, rows[i]))
                let row = i * D + rows[k];
                let col = k * D + rows[i];
                let e = &mut data[row * DIM + col];
                e.0 += re;
                e.1 += im;
            }
        }
    }
    data
}

/// Spectral PPT test for a lattice state on the integer route.
pub fn lattice_ppt_spectral(pattern: Pattern) -> Result<(bool, f64)> {
    let count = pattern.len();
    if count == 0 {
        return Err(Error::EmptyPattern);
    }
    let entries: Vec<Complex64> = lattice_partial_transpose_scaled(pattern)
        .into_iter()
        .map(|(re, im)| Complex64::new(re as f64, im as f64))
        .collect();
    let eig = hermitian_eigen_raw(&entries, 16);
    let min = eig.values[0] / (4.0 * count as f64);
    Ok((min >= -PPT_TOL, min))
}

fn check_bell(r: &[BigRational; 4]) -> Result<()> {
    if let Some(i) = r.iter().position(|x| x.is_negative()) {
        return Err(Error::NegativeCoefficient(i));
    }
    let total: BigRational = r.iter().sum();
    if total != BigRational::from_integer(1.into()) {
        return Err(Error::NotNormalized(format!("sum = {total}")));
    }
    Ok(())
}

/// Eigenvalues of the partial transpose of an n = 1 σ-diagonal state: the
/// eigenvalue on `|Ψ_α⟩` is `(1 − 2 r_{[α,2]}) / 2`.
pub fn bell_pt_coefficients(r: &[BigRational; 4]) -> Result<[BigRational; 4]> {
    check_bell(r)?;
    let half = BigRational::new(1.into(), 2.into());
    Ok(std::array::from_fn(|alpha| &half - &r[alpha ^ 2]))
}

/// Bell-diagonal states are separable exactly when no weight exceeds 1/2.
pub fn bell_separable(r: &[BigRational; 4]) -> Result<bool> {
    check_bell(r)?;
    let half = BigRational::new(1.into(), 2.into());
    Ok(r.iter().all(|x| *x <= half))
}

/// Float view of an exact state, for callers that only need numerics.
pub fn density_matrix_float(s: &SigmaDiagonalState) -> DenseMatrix {
    let m = density_matrix(s);
    debug_assert_eq!(m.mode(), Mode::Exact);
    m.to_float()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::rational;
    use crate::pauli::PauliString;

    fn q(a: i64, b: i64) -> BigRational {
        rational(a, b)
    }

    #[test]
    fn basis_vector_examples() {
        let s = PauliString::new(&[0, 0]).unwrap();
        assert_eq!(basis_vector(&s), symmetric_vector(2));
        let psi = basis_vector(&PauliString::new(&[3]).unwrap());
        let h = 1.0 / 2f64.sqrt();
        let expect = [h, 0.0, 0.0, -h];
        for (a, b) in psi.iter().zip(expect) {
            assert!((a - Complex64::new(b, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn gram_is_identity() {
        for n in 1..=2 {
            let g = basis_gram_exact(n).unwrap();
            assert_eq!(g, DenseMatrix::identity(1 << (2 * n), Mode::Exact));
        }
    }

    #[test]
    fn uniform_state_is_maximally_mixed() {
        for n in 1..=2 {
            let rho = density_matrix(&SigmaDiagonalState::uniform(n).unwrap());
            let dim = 1 << (2 * n);
            let expect = DenseMatrix::identity(dim, Mode::Exact)
                .scale_exact(&GaussianRational::real(q(1, dim as i64)));
            assert_eq!(rho, expect);
        }
    }

    #[test]
    fn pure_identity_state_is_projector_on_symmetric_vector() {
        let rho = density_matrix(&SigmaDiagonalState::pure(&PauliString::identity(2)).unwrap());
        let v = symmetric_vector(2);
        for i in 0..16 {
            for j in 0..16 {
                assert!((rho.get(i, j) - v[i] * v[j].conj()).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn projector_matches_outer_product() {
        for code in 0..16 {
            let s = PauliString::from_code(code, 2);
            let rho = density_matrix(&SigmaDiagonalState::pure(&s).unwrap());
            let v = basis_vector(&s);
            for i in 0..16 {
                for j in 0..16 {
                    assert!((rho.get(i, j) - v[i] * v[j].conj()).norm() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn partial_transpose_of_bell_projector_is_half_flip() {
        let rho = density_matrix(&SigmaDiagonalState::pure(&PauliString::identity(1)).unwrap());
        let pt = partial_transpose(&rho, 1).unwrap();
        let mut flip = vec![GaussianRational::zero(); 16];
        for i in 0..2 {
            for j in 0..2 {
                flip[(i * 2 + j) * 4 + j * 2 + i] = GaussianRational::real(q(1, 2));
            }
        }
        assert_eq!(pt, DenseMatrix::from_exact(4, flip).unwrap());
        let spec = hermitian_eigenvalues(&pt).unwrap();
        let expect = [-0.5, 0.5, 0.5, 0.5];
        for (a, b) in spec.eigenvalues.iter().zip(expect) {
            assert!((a - b).abs() < 1e-12);
        }
        assert_eq!(partial_transpose(&pt, 1).unwrap(), rho);
        assert!(partial_transpose(&rho, 2).is_err());
    }

    #[test]
    fn rejects_bad_states() {
        assert!(matches!(
            SigmaDiagonalState::new(1, vec![q(1, 2), q(1, 2), q(1, 2), q(-1, 2)]),
            Err(Error::NegativeCoefficient(3))
        ));
        assert!(SigmaDiagonalState::new(1, vec![q(1, 2); 4]).is_err());
        assert!(SigmaDiagonalState::new(1, vec![q(1, 2); 3]).is_err());
        assert!(SigmaDiagonalState::uniform(4).is_err());
    }

    #[test]
    fn maximally_mixed_is_ppt() {
        let (ok, min) = ppt_spectral(&SigmaDiagonalState::uniform(2).unwrap());
        assert!(ok);
        assert!((min - 1.0 / 16.0).abs() < 1e-12);
    }

    #[test]
    fn bell_examples() {
        let quarter = [q(1, 4), q(1, 4), q(1, 4), q(1, 4)];
        assert_eq!(bell_pt_coefficients(&quarter).unwrap(), quarter);
        let c = bell_pt_coefficients(&[q(1, 1), q(0, 1), q(0, 1), q(0, 1)]).unwrap();
        assert_eq!(c.iter().filter(|x| **x == q(-1, 2)).count(), 1);
        let c = bell_pt_coefficients(&[q(1, 2), q(1, 2), q(0, 1), q(0, 1)]).unwrap();
        assert!(c.iter().all(|x| !x.is_negative()));
        assert!(bell_separable(&quarter).unwrap());
        assert!(!bell_separable(&[q(3, 5), q(2, 5), q(0, 1), q(0, 1)]).unwrap());
        assert!(bell_separable(&[q(1, 2), q(1, 2), q(0, 1), q(0, 1)]).unwrap());
        assert!(bell_pt_coefficients(&std::array::from_fn(|_| q(1, 2))).is_err());
    }

    #[test]
    fn bell_coefficients_are_eigenvalues_on_basis_vectors() {
        // ρ^Γ |Ψ_α⟩ = c_α |Ψ_α⟩ under this module's labeling
        let r = [q(1, 10), q(2, 10), q(3, 10), q(4, 10)];
        let c = bell_pt_coefficients(&r).unwrap();
        let state = SigmaDiagonalState::new(1, r.to_vec()).unwrap();
        let pt = partial_transpose(&density_matrix(&state), 1).unwrap();
        for (alpha, c_alpha) in c.iter().enumerate() {
            let v = basis_vector(&PauliString::from_code(alpha, 1));
            let ca: f64 = num_traits::ToPrimitive::to_f64(c_alpha).unwrap();
            for i in 0..4 {
                let w: Complex64 = (0..4).map(|j| pt.get(i, j) * v[j]).sum();
                assert!((w - v[i] * ca).norm() < 1e-14);
            }
        }
    }
}

//! Pauli strings with exact phases.
//!
//! Index 0 is the identity and 1, 2, 3 are σx, σy, σz in the basis where σz
//! is diagonal. A string `(μ_1, …, μ_n)` stands for `σ_{μ_1} ⊗ … ⊗ σ_{μ_n}`
//! with the first factor most significant in the Kronecker product.

use std::fmt;

use crate::dense::{DenseMatrix, GaussianRational, Mode};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PauliIndex(u8);

impl PauliIndex {
    pub const I: PauliIndex = PauliIndex(0);
    pub const X: PauliIndex = PauliIndex(1);
    pub const Y: PauliIndex = PauliIndex(2);
    pub const Z: PauliIndex = PauliIndex(3);

    pub fn new(v: u8) -> Result<Self> {
        if v < 4 {
            Ok(PauliIndex(v))
        } else {
            Err(Error::BadIndex(v))
        }
    }

    pub fn value(self) -> u8 {
        self.0
    }

    fn flips(self) -> bool {
        self.0 == 1 || self.0 == 2
    }

    /// Exponent k of i^k for the nonzero entry in column `col`.
    fn entry_phase(self, col: usize) -> u8 {
        match (self.0, col) {
            (2, 0) => 1,
            (2, _) => 3,
            (3, 1) => 2,
            _ => 0,
        }
    }
}

/// A fourth root of unity, stored as the exponent k in i^k.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_exponent(k: u8) -> Self {
        Phase(k & 3)
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn conj(self) -> Phase {
        Phase((4 - self.0) & 3)
    }

    pub fn to_gaussian(self) -> GaussianRational {
        match self.0 {
            0 => GaussianRational::from_ints(1, 0),
            1 => GaussianRational::from_ints(0, 1),
            2 => GaussianRational::from_ints(-1, 0),
            _ => GaussianRational::from_ints(0, -1),
        }
    }

    /// `(re, im)` as small integers.
    pub fn to_ints(self) -> (i64, i64) {
        match self.0 {
            0 => (1, 0),
            1 => (0, 1),
            2 => (-1, 0),
            _ => (0, -1),
        }
    }

    pub fn to_complex(self) -> num_complex::Complex64 {
        let (re, im) = self.to_ints();
        num_complex::Complex64::new(re as f64, im as f64)
    }
}

impl std::ops::Mul for Phase {
    type Output = Phase;

    fn mul(self, other: Phase) -> Phase {
        Phase((self.0 + other.0) & 3)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(["+1", "+i", "-1", "-i"][self.0 as usize])
    }
}

/// σ_a σ_b = η σ_[a,b]. The index part is a XOR b.
pub fn pauli_product(a: PauliIndex, b: PauliIndex) -> (PauliIndex, Phase) {
    let c = PauliIndex(a.0 ^ b.0);
    if a.0 == 0 || b.0 == 0 || a.0 == b.0 {
        return (c, Phase::ONE);
    }
    let cyclic = matches!((a.0, b.0), (1, 2) | (2, 3) | (3, 1));
    (c, if cyclic { Phase::I } else { Phase::MINUS_I })
}

/// True when the single-qubit factors anticommute.
fn anticommute(a: PauliIndex, b: PauliIndex) -> bool {
    a.0 != 0 && b.0 != 0 && a.0 != b.0
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PauliString(Vec<PauliIndex>);

impl PauliString {
    pub fn new(indices: &[u8]) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::InvalidParameter("empty pauli string".into()));
        }
        indices
            .iter()
            .map(|&v| PauliIndex::new(v))
            .collect::<Result<Vec<_>>>()
            .map(PauliString)
    }

    pub fn identity(n: usize) -> Self {
        PauliString(vec![PauliIndex::I; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn indices(&self) -> &[PauliIndex] {
        &self.0
    }

    /// Base-4 code with the first factor least significant, so that for
    /// n = 2 the code of `(α, β)` is the lattice bit `4β + α`.
    pub fn code(&self) -> usize {
        self.0.iter().rev().fold(0, |acc, p| acc * 4 + p.0 as usize)
    }

    pub fn from_code(mut code: usize, n: usize) -> Self {
        let mut v = Vec::with_capacity(n);
        for _ in 0..n {
            v.push(PauliIndex((code & 3) as u8));
            code >>= 2;
        }
        PauliString(v)
    }

    pub fn all(n: usize) -> impl Iterator<Item = PauliString> {
        (0..1usize << (2 * n)).map(move |c| PauliString::from_code(c, n))
    }

    /// Column-to-row map and entry phases of the monomial matrix.
    pub fn monomial(&self) -> (Vec<usize>, Vec<Phase>) {
        let n = self.0.len();
        let d = 1usize << n;
        let mut rows = vec![0; d];
        let mut phases = vec![Phase::ONE; d];
        for col in 0..d {
            let mut row = col;
            let mut k = 0u8;
            for (f, p) in self.0.iter().enumerate() {
                let shift = n - 1 - f;
                let bit = (col >> shift) & 1;
                if p.flips() {
                    row ^= 1 << shift;
                }
                k += p.entry_phase(bit);
            }
            rows[col] = row;
            phases[col] = Phase::from_exponent(k);
        }
        (rows, phases)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", p.0)?;
        }
        f.write_str(")")
    }
}

pub fn string_product(a: &PauliString, b: &PauliString) -> Result<(PauliString, Phase)> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    let mut phase = Phase::ONE;
    let v =
        a.0.iter()
            .zip(&b.0)
            .map(|(&x, &y)| {
                let (c, eta) = pauli_product(x, y);
                phase = phase * eta;
                c
            })
            .collect();
    Ok((PauliString(v), phase))
}

pub fn commutes(a: &PauliString, b: &PauliString) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    let odd =
        a.0.iter()
            .zip(&b.0)
            .filter(|(&x, &y)| anticommute(x, y))
            .count()
            % 2;
    Ok(odd == 0)
}

/// Sign s with σᵀ = s·σ: −1 iff the number of σy factors is odd.
pub fn transposition_sign(a: &PauliString) -> i8 {
    if a.0.iter().filter(|p| p.0 == 2).count() % 2 == 1 {
        -1
    } else {
        1
    }
}

pub fn dense(a: &PauliString, mode: Mode) -> DenseMatrix {
    let (rows, phases) = a.monomial();
    let d = rows.len();
    let mut m = DenseMatrix::zeros(d, Mode::Exact);
    if let DenseMatrix::Exact { data, .. } = &mut m {
        for col in 0..d {
            data[rows[col] * d + col] = phases[col].to_gaussian();
        }
    }
    match mode {
        Mode::Exact => m,
        Mode::Float => m.to_float(),
    }
}

/// A point `(α, β)` of the 4x4 lattice, identified with σ_α ⊗ σ_β.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticePoint {
    alpha: u8,
    beta: u8,
}

impl LatticePoint {
    pub const ORIGIN: LatticePoint = LatticePoint { alpha: 0, beta: 0 };

    pub fn new(alpha: u8, beta: u8) -> Result<Self> {
        if alpha < 4 && beta < 4 {
            Ok(LatticePoint { alpha, beta })
        } else {
            Err(Error::BadPoint(alpha, beta))
        }
    }

    pub fn alpha(self) -> u8 {
        self.alpha
    }

    pub fn beta(self) -> u8 {
        self.beta
    }

    /// Bit index `4β + α`.
    pub fn bit(self) -> u8 {
        4 * self.beta + self.alpha
    }

    pub fn from_bit(bit: u8) -> Self {
        LatticePoint {
            alpha: bit & 3,
            beta: (bit >> 2) & 3,
        }
    }

    pub fn all() -> impl Iterator<Item = LatticePoint> {
        (0..16).map(LatticePoint::from_bit)
    }

    pub fn string(self) -> PauliString {
        PauliString(vec![PauliIndex(self.alpha), PauliIndex(self.beta)])
    }

    pub fn commutes_with(self, other: LatticePoint) -> bool {
        let x = anticommute(PauliIndex(self.alpha), PauliIndex(other.alpha));
        let y = anticommute(PauliIndex(self.beta), PauliIndex(other.beta));
        x == y
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.alpha, self.beta)
    }
}

/// τ_t(p) = ([t.α, p.α], [t.β, p.β]).
pub fn tau(t: LatticePoint, p: LatticePoint) -> LatticePoint {
    LatticePoint {
        alpha: t.alpha ^ p.alpha,
        beta: t.beta ^ p.beta,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(v: &[u8]) -> PauliString {
        PauliString::new(v).unwrap()
    }

    fn matrix_of(a: u8) -> DenseMatrix {
        let g = |r, i| GaussianRational::from_ints(r, i);
        let data = match a {
            0 => vec![g(1, 0), g(0, 0), g(0, 0), g(1, 0)],
            1 => vec![g(0, 0), g(1, 0), g(1, 0), g(0, 0)],
            2 => vec![g(0, 0), g(0, -1), g(0, 1), g(0, 0)],
            _ => vec![g(1, 0), g(0, 0), g(0, 0), g(-1, 0)],
        };
        DenseMatrix::from_exact(2, data).unwrap()
    }

    #[test]
    fn single_factor_matches_textbook_matrices() {
        for a in 0..4 {
            assert_eq!(dense(&ps(&[a]), Mode::Exact), matrix_of(a));
        }
    }

    #[test]
    fn product_examples() {
        let idx = |v| PauliIndex::new(v).unwrap();
        assert_eq!(pauli_product(idx(0), idx(2)), (idx(2), Phase::ONE));
        assert_eq!(pauli_product(idx(1), idx(1)), (idx(0), Phase::ONE));
        let (c, eta) = pauli_product(idx(1), idx(2));
        assert_eq!(c, idx(3));
        let lhs = matrix_of(1).matmul(&matrix_of(2)).unwrap();
        assert_eq!(lhs, matrix_of(3).scale_exact(&eta.to_gaussian()));
        assert_eq!(eta, Phase::I);
    }

    #[test]
    fn product_table_against_matrices() {
        for a in 0..4u8 {
            for b in 0..4u8 {
                let (c, eta) = pauli_product(PauliIndex(a), PauliIndex(b));
                let lhs = matrix_of(a).matmul(&matrix_of(b)).unwrap();
                assert_eq!(lhs, matrix_of(c.0).scale_exact(&eta.to_gaussian()));
                // [a,·] is a permutation and the cycling property holds
                assert_eq!(pauli_product(PauliIndex(a), c).0, PauliIndex(b));
                assert_eq!(pauli_product(PauliIndex(b), PauliIndex(a)).0, c);
            }
            let mut image: Vec<u8> = (0..4).map(|b| a ^ b).collect();
            image.sort();
            assert_eq!(image, vec![0, 1, 2, 3]);
        }
    }

    #[test]
    fn string_examples() {
        assert_eq!(
            string_product(&ps(&[0, 0]), &ps(&[2, 3])).unwrap(),
            (ps(&[2, 3]), Phase::ONE)
        );
        assert_eq!(
            string_product(&ps(&[1, 2]), &ps(&[1, 2])).unwrap(),
            (ps(&[0, 0]), Phase::ONE)
        );
        let (s, eta) = string_product(&ps(&[1, 0]), &ps(&[2, 0])).unwrap();
        assert_eq!(s, ps(&[3, 0]));
        let lhs = dense(&ps(&[1, 0]), Mode::Exact)
            .matmul(&dense(&ps(&[2, 0]), Mode::Exact))
            .unwrap();
        assert_eq!(lhs, dense(&s, Mode::Exact).scale_exact(&eta.to_gaussian()));
        assert!(string_product(&ps(&[1]), &ps(&[1, 1])).is_err());
    }

    #[test]
    fn commutation_examples() {
        assert!(commutes(&ps(&[0, 1]), &ps(&[0, 1])).unwrap());
        assert!(!commutes(&ps(&[1, 0]), &ps(&[2, 0])).unwrap());
        assert!(commutes(&ps(&[1, 2]), &ps(&[2, 1])).unwrap());
        assert!(commutes(&ps(&[1]), &ps(&[1, 2])).is_err());
    }

    #[test]
    fn transposition_examples() {
        assert_eq!(transposition_sign(&ps(&[0, 0])), 1);
        assert_eq!(transposition_sign(&ps(&[2, 0])), -1);
        assert_eq!(transposition_sign(&ps(&[2, 2])), 1);
    }

    #[test]
    fn dense_examples() {
        assert_eq!(
            dense(&ps(&[0]), Mode::Exact),
            DenseMatrix::identity(2, Mode::Exact)
        );
        assert_eq!(
            dense(&ps(&[1, 3]), Mode::Exact),
            matrix_of(1).kron(&matrix_of(3))
        );
    }

    #[test]
    fn tau_examples() {
        let p = |a, b| LatticePoint::new(a, b).unwrap();
        assert_eq!(tau(p(0, 0), p(2, 3)), p(2, 3));
        assert_eq!(tau(p(1, 2), p(1, 2)), p(0, 0));
        assert_eq!(tau(p(1, 0), p(2, 0)), p(3, 0));
        assert!(LatticePoint::new(4, 0).is_err());
    }

    #[test]
    fn codes_round_trip() {
        for c in 0..64 {
            assert_eq!(PauliString::from_code(c, 3).code(), c);
        }
        assert_eq!(ps(&[3, 1]).code(), 7);
        assert_eq!(LatticePoint::new(3, 1).unwrap().bit(), 7);
    }

    #[test]
    fn phase_display() {
        assert_eq!(Phase::MINUS_I.to_string(), "-i");
        assert_eq!(Phase::I * Phase::I, Phase::MINUS_ONE);
        assert_eq!(Phase::I.conj(), Phase::MINUS_I);
    }
}

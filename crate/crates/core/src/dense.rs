//! Dense complex matrices with either exact Gaussian-rational or `f64`
//! entries. Exact mode is the default for anything that ends up in a
//! certificate; float mode exists for the eigensolvers.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// `re + i·im` with arbitrary-precision rational parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        Self {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        Self {
            re: BigRational::from_integer(BigInt::from(re)),
            im: BigRational::from_integer(BigInt::from(im)),
        }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_ints(1, 0)
    }

    pub fn i() -> Self {
        Self::from_ints(0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}i", self.im),
            (false, false) => {
                let sign = if self.im.is_negative() { '-' } else { '+' };
                write!(f, "{}{}{}i", self.re, sign, self.im.abs())
            }
        }
    }
}

impl Add for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl Sub for &GaussianRational {
    type Output = GaussianRational;
    fn sub(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl Mul for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re.clone(), -self.im.clone())
    }
}

impl AddAssign<&GaussianRational> for GaussianRational {
    fn add_assign(&mut self, o: &GaussianRational) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Float,
}

/// Square matrix stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub enum DenseMatrix {
    Exact {
        dim: usize,
        data: Vec<GaussianRational>,
    },
    Float {
        dim: usize,
        data: Vec<Complex64>,
    },
}

impl DenseMatrix {
    pub fn zeros(dim: usize, mode: Mode) -> Self {
        match mode {
            Mode::Exact => DenseMatrix::Exact {
                dim,
                data: vec![GaussianRational::zero(); dim * dim],
            },
            Mode::Float => DenseMatrix::Float {
                dim,
                data: vec![Complex64::new(0.0, 0.0); dim * dim],
            },
        }
    }

    pub fn identity(dim: usize, mode: Mode) -> Self {
        let mut m = Self::zeros(dim, mode);
        for i in 0..dim {
            match &mut m {
                DenseMatrix::Exact { data, .. } => data[i * dim + i] = GaussianRational::one(),
                DenseMatrix::Float { data, .. } => data[i * dim + i] = Complex64::new(1.0, 0.0),
            }
        }
        m
    }

    pub fn from_exact(dim: usize, data: Vec<GaussianRational>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::Dimension {
                expected: dim * dim,
                got: data.len(),
            });
        }
        Ok(DenseMatrix::Exact { dim, data })
    }

    pub fn from_float(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::Dimension {
                expected: dim * dim,
                got: data.len(),
            });
        }
        Ok(DenseMatrix::Float { dim, data })
    }

    pub fn dim(&self) -> usize {
        match self {
            DenseMatrix::Exact { dim, .. } | DenseMatrix::Float { dim, .. } => *dim,
        }
    }

    pub fn mode(&self) -> Mode {
        match self {
            DenseMatrix::Exact { .. } => Mode::Exact,
            DenseMatrix::Float { .. } => Mode::Float,
        }
    }

    /// Entry as a float regardless of mode.
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        match self {
            DenseMatrix::Exact { dim, data } => data[i * dim + j].to_complex(),
            DenseMatrix::Float { dim, data } => data[i * dim + j],
        }
    }

    pub fn get_exact(&self, i: usize, j: usize) -> Option<&GaussianRational> {
        match self {
            DenseMatrix::Exact { dim, data } => Some(&data[i * dim + j]),
            DenseMatrix::Float { .. } => None,
        }
    }

    pub fn to_float(&self) -> DenseMatrix {
        match self {
            DenseMatrix::Exact { dim, data } => DenseMatrix::Float {
                dim: *dim,
                data: data.iter().map(GaussianRational::to_complex).collect(),
            },
            m @ DenseMatrix::Float { .. } => m.clone(),
        }
    }

    fn check_same(&self, other: &DenseMatrix) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(())
    }

    /// Matrix product. Mixed-mode operands yield a float result.
    pub fn matmul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        self.check_same(other)?;
        let n = self.dim();
        match (self, other) {
            (DenseMatrix::Exact { data: a, .. }, DenseMatrix::Exact { data: b, .. }) => {
                let mut out = vec![GaussianRational::zero(); n * n];
                for i in 0..n {
                    for k in 0..n {
                        let aik = &a[i * n + k];
                        if aik.is_zero() {
                            continue;
                        }
                        for j in 0..n {
                            let bkj = &b[k * n + j];
                            if !bkj.is_zero() {
                                out[i * n + j] += &(aik * bkj);
                            }
                        }
                    }
                }
                Ok(DenseMatrix::Exact { dim: n, data: out })
            }
            _ => {
                let (a, b) = (self.to_float(), other.to_float());
                let (a, b) = (a.float_data(), b.float_data());
                let mut out = vec![Complex64::new(0.0, 0.0); n * n];
                for i in 0..n {
                    for k in 0..n {
                        let aik = a[i * n + k];
                        for j in 0..n {
                            out[i * n + j] += aik * b[k * n + j];
                        }
                    }
                }
                Ok(DenseMatrix::Float { dim: n, data: out })
            }
        }
    }

    fn float_data(&self) -> &[Complex64] {
        match self {
            DenseMatrix::Float { data, .. } => data,
            DenseMatrix::Exact { .. } => unreachable!("float_data on exact matrix"),
        }
    }

    fn zip_with(
        &self,
        other: &DenseMatrix,
        fe: impl Fn(&GaussianRational, &GaussianRational) -> GaussianRational,
        ff: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<DenseMatrix> {
        self.check_same(other)?;
        let dim = self.dim();
        Ok(match (self, other) {
            (DenseMatrix::Exact { data: a, .. }, DenseMatrix::Exact { data: b, .. }) => {
                DenseMatrix::Exact {
                    dim,
                    data: a.iter().zip(b).map(|(x, y)| fe(x, y)).collect(),
                }
            }
            _ => {
                let (a, b) = (self.to_float(), other.to_float());
                DenseMatrix::Float {
                    dim,
                    data: a
                        .float_data()
                        .iter()
                        .zip(b.float_data())
                        .map(|(x, y)| ff(*x, *y))
                        .collect(),
                }
            }
        })
    }

    pub fn add(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        self.zip_with(other, |x, y| x + y, |x, y| x + y)
    }

    pub fn sub(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        self.zip_with(other, |x, y| x - y, |x, y| x - y)
    }

    pub fn scale_exact(&self, s: &GaussianRational) -> DenseMatrix {
        match self {
            DenseMatrix::Exact { dim, data } => DenseMatrix::Exact {
                dim: *dim,
                data: data.iter().map(|x| x * s).collect(),
            },
            DenseMatrix::Float { dim, data } => {
                let s = s.to_complex();
                DenseMatrix::Float {
                    dim: *dim,
                    data: data.iter().map(|x| x * s).collect(),
                }
            }
        }
    }

    pub fn scale(&self, s: Complex64) -> DenseMatrix {
        let f = self.to_float();
        DenseMatrix::Float {
            dim: f.dim(),
            data: f.float_data().iter().map(|x| x * s).collect(),
        }
    }

    fn map_indices(&self, f: impl Fn(usize, usize) -> (usize, usize), conj: bool) -> DenseMatrix {
        let n = self.dim();
        match self {
            DenseMatrix::Exact { data, .. } => {
                let mut out = vec![GaussianRational::zero(); n * n];
                for i in 0..n {
                    for j in 0..n {
                        let (a, b) = f(i, j);
                        let v = &data[i * n + j];
                        out[a * n + b] = if conj { v.conj() } else { v.clone() };
                    }
                }
                DenseMatrix::Exact { dim: n, data: out }
            }
            DenseMatrix::Float { data, .. } => {
                let mut out = vec![Complex64::new(0.0, 0.0); n * n];
                for i in 0..n {
                    for j in 0..n {
                        let (a, b) = f(i, j);
                        let v = data[i * n + j];
                        out[a * n + b] = if conj { v.conj() } else { v };
                    }
                }
                DenseMatrix::Float { dim: n, data: out }
            }
        }
    }

    pub fn transpose(&self) -> DenseMatrix {
        self.map_indices(|i, j| (j, i), false)
    }

    pub fn adjoint(&self) -> DenseMatrix {
        self.map_indices(|i, j| (j, i), true)
    }

    /// Entry permutation used by partial transposition.
    pub(crate) fn permute_entries(
        &self,
        f: impl Fn(usize, usize) -> (usize, usize),
    ) -> DenseMatrix {
        self.map_indices(f, false)
    }

    pub fn kron(&self, other: &DenseMatrix) -> DenseMatrix {
        let (n, m) = (self.dim(), other.dim());
        let d = n * m;
        match (self, other) {
            (DenseMatrix::Exact { data: a, .. }, DenseMatrix::Exact { data: b, .. }) => {
                let mut out = vec![GaussianRational::zero(); d * d];
                for i1 in 0..n {
                    for j1 in 0..n {
                        let x = &a[i1 * n + j1];
                        if x.is_zero() {
                            continue;
                        }
                        for i2 in 0..m {
                            for j2 in 0..m {
                                out[(i1 * m + i2) * d + j1 * m + j2] = x * &b[i2 * m + j2];
                            }
                        }
                    }
                }
                DenseMatrix::Exact { dim: d, data: out }
            }
            _ => {
                let (a, b) = (self.to_float(), other.to_float());
                let (a, b) = (a.float_data(), b.float_data());
                let mut out = vec![Complex64::new(0.0, 0.0); d * d];
                for i1 in 0..n {
                    for j1 in 0..n {
                        for i2 in 0..m {
                            for j2 in 0..m {
                                out[(i1 * m + i2) * d + j1 * m + j2] =
                                    a[i1 * n + j1] * b[i2 * m + j2];
                            }
                        }
                    }
                }
                DenseMatrix::Float { dim: d, data: out }
            }
        }
    }

    pub fn trace_exact(&self) -> Option<GaussianRational> {
        match self {
            DenseMatrix::Exact { dim, data } => {
                let mut t = GaussianRational::zero();
                for i in 0..*dim {
                    t += &data[i * dim + i];
                }
                Some(t)
            }
            DenseMatrix::Float { .. } => None,
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|i| self.get(i, i)).sum()
    }

    /// Largest |m_ij - conj(m_ji)|.
    pub fn hermitian_deviation(&self) -> f64 {
        let n = self.dim();
        let mut dev: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                dev = dev.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian_exact(&self) -> bool {
        match self {
            DenseMatrix::Exact { dim, data } => {
                (0..*dim).all(|i| (i..*dim).all(|j| data[i * dim + j] == data[j * dim + i].conj()))
            }
            DenseMatrix::Float { .. } => self.hermitian_deviation() == 0.0,
        }
    }

    pub fn max_abs_diff(&self, other: &DenseMatrix) -> f64 {
        let n = self.dim().min(other.dim());
        let mut d: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                d = d.max((self.get(i, j) - other.get(i, j)).norm());
            }
        }
        d
    }

    /// Number of nonzero entries (exact zero test in exact mode).
    pub fn nnz(&self) -> usize {
        match self {
            DenseMatrix::Exact { data, .. } => data.iter().filter(|x| !x.is_zero()).count(),
            DenseMatrix::Float { data, .. } => data.iter().filter(|x| x.norm() != 0.0).count(),
        }
    }
}

#[cfg(test)]
pub(crate) fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_arithmetic() {
        let i = GaussianRational::i();
        assert_eq!(&i * &i, GaussianRational::from_ints(-1, 0));
        let z = GaussianRational::new(rational(1, 2), rational(-3, 4));
        assert_eq!(z.to_string(), "1/2-3/4i");
        assert_eq!(z.norm_sqr(), rational(13, 16));
        assert_eq!(&z * &z.conj(), GaussianRational::real(rational(13, 16)));
    }

    #[test]
    fn identity_products() {
        let id = DenseMatrix::identity(3, Mode::Exact);
        assert_eq!(id.matmul(&id).unwrap(), id);
        assert_eq!(id.trace_exact().unwrap(), GaussianRational::from_ints(3, 0));
        let f = id.to_float();
        assert_eq!(f.matmul(&id).unwrap().mode(), Mode::Float);
        assert!(id.matmul(&DenseMatrix::identity(2, Mode::Exact)).is_err());
    }

    #[test]
    fn kron_dimensions_and_trace() {
        let a = DenseMatrix::identity(2, Mode::Exact);
        let b = DenseMatrix::identity(4, Mode::Exact);
        let k = a.kron(&b);
        assert_eq!(k.dim(), 8);
        assert_eq!(k, DenseMatrix::identity(8, Mode::Exact));
    }
}

//! Exact phase-1 simplex for `A x = b, x ≥ 0` with Bland's rule.
//!
//! The tableau runs on `Ratio<i64>` with checked arithmetic and is rerun on
//! `BigRational` if anything overflows, so results are always exact.

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, Signed, Zero};

/// Exact field operations that may refuse to overflow.
pub trait ExactScalar: Clone + PartialOrd + Zero + One + Signed {
    fn from_i64(v: i64) -> Self;
    fn add_c(&self, o: &Self) -> Option<Self>;
    fn sub_c(&self, o: &Self) -> Option<Self>;
    fn mul_c(&self, o: &Self) -> Option<Self>;
    fn div_c(&self, o: &Self) -> Option<Self>;
    fn to_big(&self) -> BigRational;
}

impl ExactScalar for Ratio<i64> {
    fn from_i64(v: i64) -> Self {
        Ratio::from_integer(v)
    }
    fn add_c(&self, o: &Self) -> Option<Self> {
        self.checked_add(o)
    }
    fn sub_c(&self, o: &Self) -> Option<Self> {
        self.checked_sub(o)
    }
    fn mul_c(&self, o: &Self) -> Option<Self> {
        self.checked_mul(o)
    }
    fn div_c(&self, o: &Self) -> Option<Self> {
        self.checked_div(o)
    }
    fn to_big(&self) -> BigRational {
        BigRational::new(BigInt::from(*self.numer()), BigInt::from(*self.denom()))
    }
}

impl ExactScalar for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn add_c(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn sub_c(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul_c(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn div_c(&self, o: &Self) -> Option<Self> {
        if o.is_zero() {
            None
        } else {
            Some(self / o)
        }
    }
    fn to_big(&self) -> BigRational {
        self.clone()
    }
}

/// Marker for arithmetic overflow in the fixed-width pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Overflow;

/// Phase-1 simplex over `T`. `a` is `m × n`, `b ≥ 0` has length `m`.
/// Returns a basic feasible solution, or `None` when infeasible.
pub fn phase_one<T: ExactScalar>(
    a: &[Vec<i64>],
    b: &[i64],
) -> std::result::Result<Option<Vec<T>>, Overflow> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    assert!(
        b.iter().all(|&x| x >= 0),
        "right-hand side must be nonnegative"
    );
    let width = n + m + 1;
    // columns: x_0..x_{n-1}, artificials, rhs
    let mut t: Vec<Vec<T>> = (0..m)
        .map(|i| {
            let mut row: Vec<T> = a[i].iter().map(|&v| T::from_i64(v)).collect();
            row.extend((0..m).map(|k| if k == i { T::one() } else { T::zero() }));
            row.push(T::from_i64(b[i]));
            row
        })
        .collect();
    let mut basis: Vec<usize> = (n..n + m).collect();
    // reduced costs of the phase-1 objective Σ artificials
    let mut cost: Vec<T> = vec![T::zero(); width];
    for row in &t {
        for j in 0..width {
            if j < n || j == width - 1 {
                cost[j] = cost[j].sub_c(&row[j]).ok_or(Overflow)?;
            }
        }
    }
    while let Some(enter) = (0..n + m).find(|&j| cost[j].is_negative()) {
        let mut leave: Option<(usize, T)> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let ratio = t[i][width - 1].div_c(&t[i][enter]).ok_or(Overflow)?;
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((r, _)) = leave else {
            // unbounded direction; cannot happen for a phase-1 objective
            break;
        };
        let piv = t[r][enter].clone();
        for x in t[r].iter_mut() {
            *x = x.div_c(&piv).ok_or(Overflow)?;
        }
        let pivot_row = t[r].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i == r || row[enter].is_zero() {
                continue;
            }
            let f = row[enter].clone();
            for j in 0..width {
                if !pivot_row[j].is_zero() {
                    row[j] = row[j]
                        .sub_c(&f.mul_c(&pivot_row[j]).ok_or(Overflow)?)
                        .ok_or(Overflow)?;
                }
            }
        }
        if !cost[enter].is_zero() {
            let f = cost[enter].clone();
            for j in 0..width {
                if !pivot_row[j].is_zero() {
                    cost[j] = cost[j]
                        .sub_c(&f.mul_c(&pivot_row[j]).ok_or(Overflow)?)
                        .ok_or(Overflow)?;
                }
            }
        }
        basis[r] = enter;
    }
    // objective value is -cost[rhs]
    if !cost[width - 1].is_zero() {
        return Ok(None);
    }
    let mut x = vec![T::zero(); n];
    for (i, &v) in basis.iter().enumerate() {
        if v < n {
            x[v] = t[i][width - 1].clone();
        }
    }
    Ok(Some(x))
}

/// Exact feasibility of `A x = b, x ≥ 0`.
pub fn feasible_point(a: &[Vec<i64>], b: &[i64]) -> Option<Vec<BigRational>> {
    match phase_one::<Ratio<i64>>(a, b) {
        Ok(sol) => sol.map(|x| x.iter().map(ExactScalar::to_big).collect()),
        Err(Overflow) => phase_one::<BigRational>(a, b).expect("big rationals do not overflow"),
    }
}

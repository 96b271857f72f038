//! Separability certificates built from special quadruples.
//!
//! A weight vector `c_Q ≥ 0` over quadruples inside `I` with
//! `Σ_{Q∋p} c_Q / 4 = 1/N_I` for every `p ∈ I` writes `ρ_I` as the convex
//! combination `Σ c_Q ρ_Q`. Two searches are provided: the rational
//! feasibility problem, solved exactly by the simplex method, and
//! repetition-free uniform coverings (every point in exactly M distinct
//! quadruples), found by exhaustive search.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::pattern::Pattern;
use crate::pauli::LatticePoint;
use crate::quadruples::{catalog, quadruples_inside, quadruples_inside_through};
use crate::simplex::feasible_point;

/// A weighted collection of catalog quadruples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Covering {
    /// Catalog indices, ascending.
    pub quadruple_indices: Vec<usize>,
    /// Convex weights `c_Q`, summing to 1.
    pub weights: Vec<BigRational>,
    /// How often each quadruple is taken once the weights are scaled to
    /// integers (all ones for a repetition-free covering).
    pub counts: Vec<BigInt>,
    /// Common number of quadruples through every point, M.
    pub multiplicity: BigInt,
    /// Number of quadruples counted with repetition, N_Q.
    pub cardinality: BigInt,
}

impl Covering {
    /// Repetition-free covering with equal weights `1/N_Q`. Returns `None`
    /// unless every point of the pattern lies in the same number of the
    /// given quadruples and all of them are inside the pattern.
    pub fn from_quadruples(pattern: Pattern, indices: &[usize]) -> Option<Covering> {
        let cat = catalog();
        let mut idx = indices.to_vec();
        idx.sort_unstable();
        idx.dedup();
        if idx.is_empty() || idx.len() != indices.len() || idx.iter().any(|&i| i >= cat.len()) {
            return None;
        }
        let m = pattern.mask();
        if idx
            .iter()
            .any(|&i| cat.all[i].mask() & m != cat.all[i].mask())
        {
            return None;
        }
        let mult: Vec<usize> = pattern
            .points()
            .map(|p| idx.iter().filter(|&&i| cat.all[i].contains(p)).count())
            .collect();
        if mult.iter().any(|&x| x != mult[0]) {
            return None;
        }
        let n_q = idx.len();
        Some(Covering {
            weights: vec![BigRational::new(1.into(), BigInt::from(n_q)); n_q],
            counts: vec![BigInt::one(); n_q],
            quadruple_indices: idx,
            multiplicity: BigInt::from(mult[0]),
            cardinality: BigInt::from(n_q),
        })
    }

    /// Covering from a solution `x_Q` of `Σ_{Q∋p} x_Q = 1`.
    fn from_lp(pattern: Pattern, indices: &[usize], x: &[BigRational]) -> Covering {
        let scale = x
            .iter()
            .filter(|v| !v.is_zero())
            .fold(BigInt::one(), |l, v| l.lcm(v.denom()));
        let four_over_n = BigRational::new(4.into(), BigInt::from(pattern.len()));
        let mut quadruple_indices = Vec::new();
        let mut weights = Vec::new();
        let mut counts = Vec::new();
        for (&i, v) in indices.iter().zip(x) {
            if v.is_zero() {
                continue;
            }
            quadruple_indices.push(i);
            weights.push(v * &four_over_n);
            counts.push((v * BigRational::from_integer(scale.clone())).to_integer());
        }
        let cardinality = counts.iter().sum();
        Covering {
            quadruple_indices,
            weights,
            counts,
            multiplicity: scale,
            cardinality,
        }
    }

    pub fn is_repetition_free(&self) -> bool {
        self.counts.iter().all(One::is_one)
    }

    pub fn len(&self) -> usize {
        self.quadruple_indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quadruple_indices.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FeasibilityStatus {
    Feasible,
    Infeasible,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeasibilityResult {
    pub status: FeasibilityStatus,
    pub solution: Option<Covering>,
}

impl FeasibilityResult {
    pub fn is_feasible(&self) -> bool {
        self.status == FeasibilityStatus::Feasible
    }

    fn infeasible() -> Self {
        FeasibilityResult {
            status: FeasibilityStatus::Infeasible,
            solution: None,
        }
    }
}

/// Exact rational feasibility of a quadruple decomposition of `ρ_I`.
pub fn find_uniform_covering(pattern: Pattern) -> Result<FeasibilityResult> {
    if pattern.len() < 4 {
        return Err(Error::TooFewPoints(pattern.len()));
    }
    if pattern
        .points()
        .any(|p| quadruples_inside_through(pattern, p) == 0)
    {
        return Ok(FeasibilityResult::infeasible());
    }
    let cat = catalog();
    let inside = quadruples_inside(pattern);
    let a: Vec<Vec<i64>> = pattern
        .points()
        .map(|p| {
            inside
                .iter()
                .map(|&i| cat.all[i].contains(p) as i64)
                .collect()
        })
        .collect();
    let b = vec![1; a.len()];
    Ok(match feasible_point(&a, &b) {
        Some(x) => {
            let cov = Covering::from_lp(pattern, &inside, &x);
            debug_assert!(verify_decomposition(pattern, &cov));
            FeasibilityResult {
                status: FeasibilityStatus::Feasible,
                solution: Some(cov),
            }
        }
        None => FeasibilityResult::infeasible(),
    })
}

struct SetCoverSearch<'a> {
    quads: &'a [u16],
    points: Vec<u8>,
    target: u8,
    count: [u8; 16],
    /// 0 undecided, 1 taken, 2 excluded
    state: Vec<u8>,
    chosen: Vec<usize>,
}

impl SetCoverSearch<'_> {
    fn usable(&self, q: usize) -> bool {
        self.state[q] == 0 && bits(self.quads[q]).all(|b| self.count[b as usize] < self.target)
    }

    fn solve(&mut self) -> bool {
        // most constrained unfinished point
        let mut pick: Option<(usize, u8)> = None;
        for &p in &self.points {
            let need = self.target - self.count[p as usize];
            if need == 0 {
                continue;
            }
            let avail = (0..self.quads.len())
                .filter(|&q| self.quads[q] >> p & 1 == 1 && self.usable(q))
                .count();
            if avail < need as usize {
                return false;
            }
            if pick.is_none_or(|(a, _)| avail < a) {
                pick = Some((avail, p));
            }
        }
        let Some((_, p)) = pick else {
            return true;
        };
        let candidates: Vec<usize> = (0..self.quads.len())
            .filter(|&q| self.quads[q] >> p & 1 == 1 && self.usable(q))
            .collect();
        let mut excluded = Vec::new();
        let mut found = false;
        for q in candidates {
            if !self.usable(q) {
                continue;
            }
            self.take(q, true);
            if self.solve() {
                found = true;
                break;
            }
            self.take(q, false);
            self.state[q] = 2;
            excluded.push(q);
        }
        for q in excluded {
            self.state[q] = 0;
        }
        found
    }

    fn take(&mut self, q: usize, on: bool) {
        for b in bits(self.quads[q]) {
            if on {
                self.count[b as usize] += 1;
            } else {
                self.count[b as usize] -= 1;
            }
        }
        if on {
            self.state[q] = 1;
            self.chosen.push(q);
        } else {
            self.state[q] = 0;
            self.chosen.pop();
        }
    }
}

fn bits(mask: u16) -> impl Iterator<Item = u8> {
    (0..16u8).filter(move |b| mask >> b & 1 == 1)
}

/// Repetition-free uniform covering with the smallest multiplicity, found
/// by exhaustive search. `None` when no such collection exists.
pub fn find_set_covering(pattern: Pattern) -> Option<Covering> {
    if pattern.len() < 4 {
        return None;
    }
    let cat = catalog();
    let inside = quadruples_inside(pattern);
    let quads: Vec<u16> = inside.iter().map(|&i| cat.all[i].mask()).collect();
    let points: Vec<u8> = pattern.points().map(LatticePoint::bit).collect();
    let max_m = pattern
        .points()
        .map(|p| quadruples_inside_through(pattern, p))
        .min()
        .unwrap_or(0);
    let n = pattern.len() as usize;
    for m in 1..=max_m {
        if !(m * n).is_multiple_of(4) {
            continue;
        }
        let mut search = SetCoverSearch {
            quads: &quads,
            points: points.clone(),
            target: m as u8,
            count: [0; 16],
            state: vec![0; quads.len()],
            chosen: Vec::new(),
        };
        if search.solve() {
            let idx: Vec<usize> = search.chosen.iter().map(|&q| inside[q]).collect();
            let cov = Covering::from_quadruples(pattern, &idx)
                .expect("search returns a uniform covering");
            debug_assert_eq!(cov.multiplicity, BigInt::from(m));
            return Some(cov);
        }
    }
    None
}

/// Exact check of `ρ_I = Σ c_Q ρ_Q` in coefficient space: every point of
/// the pattern receives `1/N_I`, every other point 0.
pub fn verify_decomposition(pattern: Pattern, c: &Covering) -> bool {
    let cat = catalog();
    if pattern.is_empty()
        || c.quadruple_indices.len() != c.weights.len()
        || c.quadruple_indices.iter().any(|&i| i >= cat.len())
        || c.weights.iter().any(|w| !w.is_positive())
    {
        return false;
    }
    let mut acc = vec![BigRational::zero(); 16];
    for (&i, w) in c.quadruple_indices.iter().zip(&c.weights) {
        for p in cat.all[i].points() {
            acc[p.bit() as usize] += w;
        }
    }
    let target = BigRational::new(4.into(), BigInt::from(pattern.len()));
    (0..16u8).all(|b| {
        let want = if pattern.mask() >> b & 1 == 1 {
            target.clone()
        } else {
            BigRational::zero()
        };
        acc[b as usize] == want
    })
}

/// `4·N_Q = M·N_I`.
pub fn covering_relation_check(n_i: u64, m: u64, n_q: u64) -> bool {
    4 * n_q == m * n_i
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::LatticePoint;

    fn pt(a: u8, b: u8) -> LatticePoint {
        LatticePoint::new(a, b).unwrap()
    }

    fn idx(points: [(u8, u8); 4]) -> usize {
        let m = Pattern::from_points(points.map(|(a, b)| pt(a, b))).mask();
        catalog().index_of(m).expect("special quadruple")
    }

    fn grid(s: &str) -> Pattern {
        Pattern::parse(s).unwrap()
    }

    #[test]
    fn two_fold_covering_of_ten_points() {
        let i = grid(".xxx\n.xxx\n.xxx\nx...");
        let listed = [
            idx([(0, 0), (1, 1), (2, 2), (3, 3)]),
            idx([(0, 0), (2, 1), (3, 2), (1, 3)]),
            idx([(2, 1), (3, 1), (2, 3), (3, 3)]),
            idx([(1, 1), (3, 1), (1, 2), (3, 2)]),
            idx([(1, 2), (2, 2), (1, 3), (2, 3)]),
        ];
        let cov = Covering::from_quadruples(i, &listed).unwrap();
        assert_eq!(cov.multiplicity, BigInt::from(2));
        assert_eq!(cov.cardinality, BigInt::from(5));
        assert!(verify_decomposition(i, &cov));
        let lp = find_uniform_covering(i).unwrap();
        assert!(lp.is_feasible());
        assert!(verify_decomposition(i, lp.solution.as_ref().unwrap()));
        let set = find_set_covering(i).unwrap();
        assert_eq!(set.multiplicity, BigInt::from(2));
        assert_eq!(set.cardinality, BigInt::from(5));
    }

    #[test]
    fn perturbed_weight_fails() {
        let i = grid(".xxx\n.x.x\n.xxx\n....");
        let cov = find_set_covering(i).unwrap();
        assert!(verify_decomposition(i, &cov));
        let mut bad = cov.clone();
        bad.weights[0] += BigRational::new(1.into(), 1000.into());
        assert!(!verify_decomposition(i, &bad));
    }

    #[test]
    fn npt_pattern_is_infeasible() {
        let i = grid("..x.\nx..x\n..x.\n...x");
        assert!(!find_uniform_covering(i).unwrap().is_feasible());
        assert!(find_set_covering(i).is_none());
        assert_eq!(
            find_uniform_covering(Pattern::new(0b111)),
            Err(Error::TooFewPoints(3))
        );
    }

    #[test]
    fn singleton_coverings() {
        for (k, q) in catalog().all.iter().enumerate() {
            let lp = find_uniform_covering(q.pattern()).unwrap();
            let sol = lp.solution.unwrap();
            assert_eq!(sol.quadruple_indices, vec![k]);
            assert!(sol.is_repetition_free());
        }
    }

    #[test]
    fn relation_examples() {
        assert!(covering_relation_check(10, 2, 5));
        assert!(covering_relation_check(8, 2, 4));
        assert!(!covering_relation_check(9, 2, 5));
    }

    #[test]
    fn full_lattice_has_a_partition() {
        let cov = find_set_covering(Pattern::FULL).unwrap();
        assert_eq!(cov.multiplicity, BigInt::from(1));
        assert_eq!(cov.cardinality, BigInt::from(4));
    }
}

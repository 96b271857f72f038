//! Special quadruples: 4-point subsets whose translate through the origin
//! consists of pairwise commuting Pauli strings. Each one is a rank-4
//! separable lattice state and saturates the crit1 bound.

use std::collections::HashMap;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pattern::Pattern;
use crate::pauli::{tau, LatticePoint};

/// The 15 quadruples through the origin, origin omitted, as `(α, β)`.
const Q00: [[(u8, u8); 3]; 15] = [
    [(0, 1), (1, 0), (1, 1)],
    [(0, 2), (2, 0), (2, 2)],
    [(0, 3), (3, 0), (3, 3)],
    [(1, 1), (2, 2), (3, 3)],
    [(1, 2), (2, 3), (3, 1)],
    [(0, 1), (2, 1), (2, 0)],
    [(0, 2), (1, 2), (1, 0)],
    [(0, 3), (1, 3), (1, 0)],
    [(1, 1), (2, 3), (3, 2)],
    [(1, 3), (2, 2), (3, 1)],
    [(0, 1), (3, 1), (3, 0)],
    [(0, 2), (3, 2), (3, 0)],
    [(0, 3), (2, 3), (2, 0)],
    [(1, 2), (2, 1), (3, 3)],
    [(1, 3), (2, 1), (3, 2)],
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Quadruple {
    points: [LatticePoint; 4],
}

impl Quadruple {
    fn from_mask(mask: u16) -> Self {
        let v: Vec<LatticePoint> = Pattern::new(mask).points().collect();
        Quadruple {
            points: [v[0], v[1], v[2], v[3]],
        }
    }

    /// Sorted by bit index.
    pub fn points(&self) -> &[LatticePoint; 4] {
        &self.points
    }

    pub fn mask(&self) -> u16 {
        self.points.iter().fold(0, |m, p| m | 1 << p.bit())
    }

    pub fn pattern(&self) -> Pattern {
        Pattern::new(self.mask())
    }

    pub fn contains(&self, p: LatticePoint) -> bool {
        self.points.contains(&p)
    }

    pub fn translate(&self, t: LatticePoint) -> Quadruple {
        let m = self
            .points
            .iter()
            .fold(0u16, |m, &p| m | 1 << tau(t, p).bit());
        Quadruple::from_mask(m)
    }
}

pub fn q00_catalog() -> Vec<Quadruple> {
    Q00.iter()
        .map(|q| {
            let m = q.iter().fold(1u16, |m, &(a, b)| m | 1 << (4 * b + a));
            Quadruple::from_mask(m)
        })
        .collect()
}

fn q00_masks() -> &'static [u16] {
    static MASKS: OnceLock<Vec<u16>> = OnceLock::new();
    MASKS.get_or_init(|| q00_catalog().iter().map(Quadruple::mask).collect())
}

/// All 60 special quadruples with a per-point index.
#[derive(Debug)]
pub struct QuadrupleCatalog {
    pub all: Vec<Quadruple>,
    /// Indices into `all` of the quadruples through each point, by bit.
    pub through: [Vec<usize>; 16],
    index: HashMap<u16, usize>,
}

impl QuadrupleCatalog {
    fn build() -> Self {
        let mut masks: Vec<u16> = LatticePoint::all()
            .flat_map(|t| {
                q00_catalog()
                    .into_iter()
                    .map(move |q| q.translate(t).mask())
            })
            .collect();
        masks.sort_unstable();
        masks.dedup();
        let all: Vec<Quadruple> = masks.iter().map(|&m| Quadruple::from_mask(m)).collect();
        let through = std::array::from_fn(|b| {
            (0..all.len())
                .filter(|&i| all[i].mask() >> b & 1 == 1)
                .collect()
        });
        let index = masks.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        QuadrupleCatalog {
            all,
            through,
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.all.len()
    }

    pub fn is_empty(&self) -> bool {
        self.all.is_empty()
    }

    pub fn index_of(&self, mask: u16) -> Option<usize> {
        self.index.get(&mask).copied()
    }

    pub fn get(&self, i: usize) -> &Quadruple {
        &self.all[i]
    }
}

/// Shared read-only catalog, built on first use.
pub fn catalog() -> &'static QuadrupleCatalog {
    static CATALOG: OnceLock<QuadrupleCatalog> = OnceLock::new();
    CATALOG.get_or_init(QuadrupleCatalog::build)
}

pub fn catalog_all() -> &'static QuadrupleCatalog {
    catalog()
}

fn check_four(points: &[LatticePoint]) -> Result<u16> {
    if points.len() != 4 {
        return Err(Error::InvalidParameter(format!(
            "expected 4 points, got {}",
            points.len()
        )));
    }
    let mask = Pattern::from_points(points.iter().copied()).mask();
    if mask.count_ones() != 4 {
        return Err(Error::DuplicatePoints);
    }
    Ok(mask)
}

/// Membership route: translate the first point to the origin and look the
/// set up in the 15-element list.
pub fn is_special_by_catalog(points: &[LatticePoint]) -> Result<bool> {
    check_four(points)?;
    let t = points[0];
    let m = points.iter().fold(0u16, |m, &p| m | 1 << tau(t, p).bit());
    Ok(q00_masks().contains(&m))
}

/// Commutation route: the translated strings pairwise commute.
pub fn is_special_by_commutation(points: &[LatticePoint]) -> Result<bool> {
    check_four(points)?;
    let t = points[0];
    let moved: Vec<LatticePoint> = points.iter().map(|&p| tau(t, p)).collect();
    Ok(moved
        .iter()
        .enumerate()
        .all(|(i, a)| moved[i + 1..].iter().all(|b| a.commutes_with(*b))))
}

pub fn is_special(points: &[LatticePoint]) -> Result<bool> {
    let by_catalog = is_special_by_catalog(points)?;
    debug_assert_eq!(Ok(by_catalog), is_special_by_commutation(points));
    Ok(by_catalog)
}

/// Catalog indices of the quadruples contained in the pattern.
pub fn quadruples_inside(pattern: Pattern) -> Vec<usize> {
    let m = pattern.mask();
    catalog()
        .all
        .iter()
        .enumerate()
        .filter(|(_, q)| q.mask() & m == q.mask())
        .map(|(i, _)| i)
        .collect()
}

/// Quadruples through `p` contained in the pattern.
pub fn quadruples_inside_through(pattern: Pattern, p: LatticePoint) -> usize {
    let m = pattern.mask();
    let cat = catalog();
    cat.through[p.bit() as usize]
        .iter()
        .filter(|&&i| cat.all[i].mask() & m == cat.all[i].mask())
        .count()
}

/// A point of the pattern lying in no quadruple contained in the pattern
/// (lowest bit first).
pub fn quadruple_free_point(pattern: Pattern) -> Option<LatticePoint> {
    pattern
        .points()
        .find(|&p| quadruples_inside_through(pattern, p) == 0)
}

/// `σ_α ⊗ σ_β |v⟩` on C^4.
pub fn apply_point(p: LatticePoint, v: &[Complex64]) -> Vec<Complex64> {
    let (rows, phases) = p.string().monomial();
    let mut out = vec![Complex64::new(0.0, 0.0); 4];
    for col in 0..4 {
        out[rows[col]] += phases[col].to_complex() * v[col];
    }
    out
}

/// `⟨φ|σ_p|ψ⟩`.
pub fn amplitude(phi: &[Complex64], p: LatticePoint, psi: &[Complex64]) -> Complex64 {
    let w = apply_point(p, psi);
    phi.iter().zip(&w).map(|(a, b)| a.conj() * b).sum()
}

/// `(1/4) Σ_{p∈Q} |⟨φ|σ_p|ψ⟩|²`.
pub fn saturation(q: &Quadruple, psi: &[Complex64], phi: &[Complex64]) -> f64 {
    q.points
        .iter()
        .map(|&p| amplitude(phi, p, psi).norm_sqr())
        .sum::<f64>()
        / 4.0
}

/// Vectors `(ψ, φ)` attaining `(1/4) Σ_{p∈Q} |⟨φ|σ_p|ψ⟩|² = 1`.
///
/// ψ spans the joint +1 eigenspace of the translated strings, obtained by
/// applying the projectors `(1 + σ)/2` to the computational basis vector
/// with the largest image; φ = σ_t ψ for the translation point t.
pub fn saturating_vectors(q: &Quadruple) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    if !is_special(&q.points)? {
        return Err(Error::NotSpecial);
    }
    let t = q.points[0];
    let gens: Vec<LatticePoint> = q
        .points
        .iter()
        .map(|&p| tau(t, p))
        .filter(|&p| p != LatticePoint::ORIGIN)
        .take(2)
        .collect();
    let project = |v: Vec<Complex64>| {
        gens.iter().fold(v, |v, &g| {
            let w = apply_point(g, &v);
            v.iter().zip(&w).map(|(a, b)| (a + b) * 0.5).collect()
        })
    };
    let (psi, norm) = (0..4)
        .map(|k| {
            let mut e = vec![Complex64::new(0.0, 0.0); 4];
            e[k] = Complex64::new(1.0, 0.0);
            let v = project(e);
            let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            (v, norm)
        })
        .fold((Vec::new(), -1.0), |best, cand| {
            if cand.1 > best.1 {
                cand
            } else {
                best
            }
        });
    let psi: Vec<Complex64> = psi.into_iter().map(|c| c / norm).collect();
    let phi = apply_point(t, &psi);
    Ok((psi, phi))
}

/// Structure of the complement of a pattern seen from a quadruple-free
/// point, which is translated to the origin first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplementAnalysis {
    pub pivot: LatticePoint,
    pub complement_size: usize,
    /// Complement after translating `pivot` to the origin.
    pub translated_complement: Vec<LatticePoint>,
    /// A largest pairwise anticommuting subset of the translated complement.
    pub max_anticommuting_set: Vec<LatticePoint>,
    pub has_k1_or_k2_form: bool,
    pub has_3plus1_structure: bool,
}

fn anticommuting(a: LatticePoint, b: LatticePoint) -> bool {
    !a.commutes_with(b)
}

fn max_anticommuting(points: &[LatticePoint]) -> Vec<LatticePoint> {
    fn grow(
        points: &[LatticePoint],
        start: usize,
        current: &mut Vec<LatticePoint>,
        best: &mut Vec<LatticePoint>,
    ) {
        if current.len() > best.len() {
            *best = current.clone();
        }
        for i in start..points.len() {
            if current.len() + (points.len() - i) <= best.len() {
                return;
            }
            let p = points[i];
            if current.iter().all(|&c| anticommuting(c, p)) {
                current.push(p);
                grow(points, i + 1, current, best);
                current.pop();
            }
        }
    }
    let mut best = Vec::new();
    grow(points, 0, &mut Vec::new(), &mut best);
    best
}

/// `{σ_{0i}, σ_{0j}, σ_{1k}, σ_{2k}, σ_{3k}}` with `{i,j,k} = {1,2,3}`, or
/// the same with the two coordinates swapped.
pub fn matches_k_template(points: &[LatticePoint]) -> bool {
    if points.len() != 5 {
        return false;
    }
    let mask = Pattern::from_points(points.iter().copied()).mask();
    k_templates().contains(&mask)
}

fn k_templates() -> &'static [u16] {
    static T: OnceLock<Vec<u16>> = OnceLock::new();
    T.get_or_init(|| {
        let mut out = Vec::new();
        for k in 1..4u8 {
            let (i, j) = match k {
                1 => (2, 3),
                2 => (1, 3),
                _ => (1, 2),
            };
            let k1 = [(0, i), (0, j), (1, k), (2, k), (3, k)];
            let p = |(a, b): (u8, u8)| 1u16 << (4 * b + a);
            out.push(k1.iter().fold(0, |m, &x| m | p(x)));
            out.push(k1.iter().fold(0, |m, &(a, b)| m | p((b, a))));
        }
        out
    })
}

pub fn pairwise_anticommuting(points: &[LatticePoint]) -> bool {
    points
        .iter()
        .enumerate()
        .all(|(i, &a)| points[i + 1..].iter().all(|&b| anticommuting(a, b)))
}

fn subsets_of_five(points: &[LatticePoint]) -> impl Iterator<Item = [LatticePoint; 5]> + '_ {
    let n = points.len();
    (0..n).flat_map(move |a| {
        (a + 1..n).flat_map(move |b| {
            (b + 1..n).flat_map(move |c| {
                (c + 1..n).flat_map(move |d| {
                    (d + 1..n).map(move |e| [points[a], points[b], points[c], points[d], points[e]])
                })
            })
        })
    })
}

pub fn analyze_complement(pattern: Pattern) -> Result<ComplementAnalysis> {
    let pivot = quadruple_free_point(pattern).ok_or(Error::NoQuadrupleFreePoint)?;
    let comp: Vec<LatticePoint> = pattern
        .complement()
        .points()
        .map(|p| tau(pivot, p))
        .collect();
    let max_set = max_anticommuting(&comp);
    let has_k =
        subsets_of_five(&comp).any(|s| pairwise_anticommuting(&s) && matches_k_template(&s));
    let mut has_3plus1 = false;
    'outer: for (ia, &a) in comp.iter().enumerate() {
        for (ib, &b) in comp.iter().enumerate().skip(ia + 1) {
            if !anticommuting(a, b) {
                continue;
            }
            for &c in comp.iter().skip(ib + 1) {
                if !anticommuting(a, c) || !anticommuting(b, c) {
                    continue;
                }
                let triple = [a, b, c];
                let found = comp.iter().any(|&d| {
                    !triple.contains(&d)
                        && triple.iter().filter(|&&x| x.commutes_with(d)).count() == 1
                });
                if found {
                    has_3plus1 = true;
                    break 'outer;
                }
            }
        }
    }
    Ok(ComplementAnalysis {
        pivot,
        complement_size: comp.len(),
        translated_complement: comp,
        max_anticommuting_set: max_set,
        has_k1_or_k2_form: has_k,
        has_3plus1_structure: has_3plus1,
    })
}

/// All pairwise anticommuting 5-subsets of the lattice.
pub fn five_anticommuting_sets() -> Vec<[LatticePoint; 5]> {
    let all: Vec<LatticePoint> = LatticePoint::all().collect();
    subsets_of_five(&all)
        .filter(|s| pairwise_anticommuting(s))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(a: u8, b: u8) -> LatticePoint {
        LatticePoint::new(a, b).unwrap()
    }

    fn grid(s: &str) -> Pattern {
        Pattern::parse(s).unwrap()
    }

    #[test]
    fn q00_examples() {
        let q = q00_catalog();
        assert_eq!(q.len(), 15);
        let has = |pts: [LatticePoint; 4]| {
            q.iter()
                .any(|x| x.mask() == Pattern::from_points(pts).mask())
        };
        assert!(has([pt(0, 0), pt(0, 1), pt(1, 0), pt(1, 1)]));
        assert!(has([pt(0, 0), pt(1, 1), pt(2, 2), pt(3, 3)]));
    }

    #[test]
    fn q00_list_equals_commuting_triples() {
        // every commuting triple through the origin closed under products
        let mut derived = Vec::new();
        for a in 1..16u8 {
            for b in a + 1..16 {
                let (pa, pb) = (LatticePoint::from_bit(a), LatticePoint::from_bit(b));
                let c = tau(pa, pb);
                if pa.commutes_with(pb) && c.bit() > b {
                    derived.push(1u16 | 1 << a | 1 << b | 1 << c.bit());
                }
            }
        }
        derived.sort();
        let mut listed: Vec<u16> = q00_catalog().iter().map(Quadruple::mask).collect();
        listed.sort();
        assert_eq!(derived, listed);
    }

    #[test]
    fn is_special_examples() {
        assert!(is_special(&[pt(0, 0), pt(0, 1), pt(1, 0), pt(1, 1)]).unwrap());
        assert!(!is_special(&[pt(0, 0), pt(0, 1), pt(0, 2), pt(0, 3)]).unwrap());
        assert!(!pt(0, 1).commutes_with(pt(0, 2)));
        let q = [pt(1, 2), pt(0, 2), pt(1, 0), pt(0, 0)];
        assert!(is_special_by_catalog(&q).unwrap());
        assert!(is_special_by_commutation(&q).unwrap());
        assert_eq!(
            is_special(&[pt(0, 0), pt(0, 0), pt(1, 0), pt(1, 1)]),
            Err(Error::DuplicatePoints)
        );
    }

    #[test]
    fn catalog_shape() {
        let cat = catalog_all();
        assert_eq!(cat.len(), 60);
        assert!(cat.through.iter().all(|t| t.len() == 15));
        assert_eq!(cat.through[pt(2, 3).bit() as usize].len(), 15);
        for q in &cat.all {
            assert!(is_special(q.points()).unwrap());
            assert_eq!(
                cat.through
                    .iter()
                    .filter(|t| t.contains(&cat.index_of(q.mask()).unwrap()))
                    .count(),
                4
            );
        }
    }

    #[test]
    fn inside_examples() {
        assert_eq!(quadruples_inside(Pattern::FULL).len(), 60);
        assert!(quadruples_inside(Pattern::new(0b111)).is_empty());
        assert_eq!(quadruple_free_point(Pattern::FULL), None);
        let seven = grid("..xx\nx..x\n.x.x\n....");
        assert!(quadruple_free_point(seven).is_some());
    }

    #[test]
    fn saturating_examples() {
        let diag = Quadruple::from_mask(
            Pattern::from_points([pt(0, 0), pt(0, 3), pt(3, 0), pt(3, 3)]).mask(),
        );
        let (psi, _) = saturating_vectors(&diag).unwrap();
        assert_eq!(psi.iter().filter(|c| c.norm() > 1e-12).count(), 1);
        for q in &catalog().all {
            let (psi, phi) = saturating_vectors(q).unwrap();
            assert!((saturation(q, &psi, &phi) - 1.0).abs() < 1e-10);
            for p in LatticePoint::all().filter(|p| !q.contains(*p)) {
                assert!(amplitude(&phi, p, &psi).norm() < 1e-10);
            }
        }
        let bad = Quadruple::from_mask(0x000f);
        assert_eq!(saturating_vectors(&bad), Err(Error::NotSpecial));
    }

    #[test]
    fn k1_complement() {
        // I^c = two points of C_0 plus R_3 without its C_0 point
        let comp = Pattern::from_points([pt(0, 1), pt(0, 2), pt(1, 3), pt(2, 3), pt(3, 3)]);
        let a = analyze_complement(comp.complement()).unwrap();
        assert_eq!(a.complement_size, 5);
        assert_eq!(a.max_anticommuting_set.len(), 5);
        assert!(a.has_k1_or_k2_form);
        assert_eq!(
            analyze_complement(Pattern::FULL),
            Err(Error::NoQuadrupleFreePoint)
        );
    }

    #[test]
    fn template_count() {
        let sets = five_anticommuting_sets();
        assert_eq!(sets.len(), 6);
        assert!(sets.iter().all(|s| matches_k_template(s)));
    }
}

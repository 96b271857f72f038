//! Lattice symmetries that carry special quadruples to special quadruples.
//!
//! Candidates are a τ translation followed by a permutation of rows and of
//! columns. Only candidates preserving the quadruple catalog are kept, so
//! invariance of every verdict under the group is a consequence of how the
//! criteria are built rather than an assumption.

use std::collections::HashSet;
use std::sync::OnceLock;

use crate::pattern::Pattern;
use crate::pauli::{tau, LatticePoint};
use crate::quadruples::catalog;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SymmetryElement {
    pub translation: LatticePoint,
    pub row_perm: [u8; 4],
    pub col_perm: [u8; 4],
}

impl SymmetryElement {
    pub const IDENTITY: SymmetryElement = SymmetryElement {
        translation: LatticePoint::ORIGIN,
        row_perm: [0, 1, 2, 3],
        col_perm: [0, 1, 2, 3],
    };

    pub fn translation(t: LatticePoint) -> Self {
        SymmetryElement {
            translation: t,
            ..Self::IDENTITY
        }
    }

    pub fn apply_point(&self, p: LatticePoint) -> LatticePoint {
        let q = tau(self.translation, p);
        LatticePoint::from_bit(
            4 * self.row_perm[q.beta() as usize] + self.col_perm[q.alpha() as usize],
        )
    }

    /// Image of every bit.
    pub fn point_map(&self) -> [u8; 16] {
        std::array::from_fn(|b| self.apply_point(LatticePoint::from_bit(b as u8)).bit())
    }
}

pub fn apply_symmetry(g: &SymmetryElement, pattern: Pattern) -> Pattern {
    Pattern::from_points(pattern.points().map(|p| g.apply_point(p)))
}

fn permutations4() -> Vec<[u8; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4u8 {
        for b in 0..4u8 {
            for c in 0..4u8 {
                for d in 0..4u8 {
                    let p = [a, b, c, d];
                    if (0..4).all(|x| p.contains(&x)) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

fn map_mask(map: &[u8; 16], mask: u16) -> u16 {
    (0..16).fold(0, |m, b| {
        if mask >> b & 1 == 1 {
            m | 1 << map[b]
        } else {
            m
        }
    })
}

/// The validated group, with its distinct induced point permutations.
#[derive(Debug)]
pub struct SymmetryGroup {
    /// Catalog-preserving candidates.
    pub elements: Vec<SymmetryElement>,
    /// Number of candidates examined.
    pub candidates: usize,
    /// Distinct point permutations induced by `elements`.
    pub point_maps: Vec<[u8; 16]>,
    /// `images[k][row][nibble]`: image of one row's bits under map k.
    images: Vec<[[u16; 16]; 4]>,
}

impl SymmetryGroup {
    fn build() -> Self {
        let quads: HashSet<u16> = catalog().all.iter().map(|q| q.mask()).collect();
        let perms = permutations4();
        let mut elements = Vec::new();
        let mut candidates = 0;
        for t in LatticePoint::all() {
            for rp in &perms {
                for cp in &perms {
                    candidates += 1;
                    let g = SymmetryElement {
                        translation: t,
                        row_perm: *rp,
                        col_perm: *cp,
                    };
                    let map = g.point_map();
                    if quads.iter().all(|&q| quads.contains(&map_mask(&map, q))) {
                        elements.push(g);
                    }
                }
            }
        }
        let mut seen = HashSet::new();
        let mut point_maps = Vec::new();
        for g in &elements {
            let m = g.point_map();
            if seen.insert(m) {
                point_maps.push(m);
            }
        }
        let images = point_maps
            .iter()
            .map(|map| {
                std::array::from_fn(|row| {
                    std::array::from_fn(|nib| map_mask(map, (nib as u16) << (4 * row)))
                })
            })
            .collect();
        SymmetryGroup {
            elements,
            candidates,
            point_maps,
            images,
        }
    }

    fn image(&self, k: usize, mask: u16) -> u16 {
        let t = &self.images[k];
        t[0][(mask & 15) as usize]
            | t[1][(mask >> 4 & 15) as usize]
            | t[2][(mask >> 8 & 15) as usize]
            | t[3][(mask >> 12) as usize]
    }

    /// All distinct images of a pattern.
    pub fn orbit(&self, pattern: Pattern) -> Vec<Pattern> {
        let mut v: Vec<u16> = (0..self.images.len())
            .map(|k| self.image(k, pattern.mask()))
            .collect();
        v.sort_unstable();
        v.dedup();
        v.into_iter().map(Pattern::new).collect()
    }
}

pub fn group() -> &'static SymmetryGroup {
    static GROUP: OnceLock<SymmetryGroup> = OnceLock::new();
    GROUP.get_or_init(SymmetryGroup::build)
}

/// Smallest mask in the orbit of the pattern.
pub fn canonical_form(pattern: Pattern) -> Pattern {
    let g = group();
    let m = (0..g.images.len())
        .map(|k| g.image(k, pattern.mask()))
        .min()
        .unwrap_or(pattern.mask());
    Pattern::new(m)
}

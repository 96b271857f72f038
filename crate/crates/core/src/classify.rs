//! The decision pipeline and the exhaustive census.
//!
//! Order: combinatorial PPT test, quadruple-free point, rational
//! feasibility, repetition-free covering. Only the last yields SEPARABLE;
//! an LP solution without a repetition-free covering is kept as metadata
//! and the verdict stays UNDECIDED.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::covering::{find_set_covering, find_uniform_covering, verify_decomposition, Covering};
use crate::error::{Error, Result};
use crate::pattern::{ppt_combinatorial, prop_ppt2_point, prop_ppt3_point, Pattern};
use crate::pauli::LatticePoint;
use crate::quadruples::{quadruple_free_point, quadruples_inside_through};
use crate::state::lattice_ppt_spectral;
use crate::symmetry::{canonical_form, group};
use crate::witness::delta_max_estimate;

/// The rank-11 pattern left open by the quadruple methods.
pub const RANK11: Pattern = Pattern::new(0x9b77);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Verdict {
    NptEntangled,
    PptEntangled,
    Separable,
    Undecided,
}

impl Verdict {
    pub const ALL: [Verdict; 4] = [
        Verdict::NptEntangled,
        Verdict::PptEntangled,
        Verdict::Separable,
        Verdict::Undecided,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::NptEntangled => "NPT_ENTANGLED",
            Verdict::PptEntangled => "PPT_ENTANGLED",
            Verdict::Separable => "SEPARABLE",
            Verdict::Undecided => "UNDECIDED",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Certificate {
    /// Line count above `N_I/2` at this point.
    ViolatingPoint {
        point: LatticePoint,
        line_count: u32,
    },
    QuadrupleFreePoint {
        point: LatticePoint,
        delta_estimate: Option<f64>,
    },
    Covering(Covering),
    None,
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::ViolatingPoint { .. } => "violating_point",
            Certificate::QuadrupleFreePoint { .. } => "quadruple_free_point",
            Certificate::Covering(_) => "covering",
            Certificate::None => "none",
        }
    }

    /// One-line description used in tables.
    pub fn summary(&self) -> String {
        match self {
            Certificate::ViolatingPoint { point, line_count } => {
                format!("violating {point} count {line_count}")
            }
            Certificate::QuadrupleFreePoint { point, .. } => format!("quadruple-free {point}"),
            Certificate::Covering(c) => format!(
                "covering M={} N_Q={} ({} quadruples)",
                c.multiplicity,
                c.cardinality,
                c.len()
            ),
            Certificate::None => "none".to_string(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Flags {
    pub ppt: bool,
    pub prop_ppt2_hit: Option<LatticePoint>,
    pub prop_ppt3_hit: Option<LatticePoint>,
    pub quadruple_free: bool,
    /// `(is PPT, smallest eigenvalue)` of the partial transpose, on demand.
    pub spectral_ppt: Option<(bool, f64)>,
    pub lp_feasible: bool,
    pub integer_covering: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Classification {
    pub pattern: Pattern,
    pub verdict: Verdict,
    pub certificate: Certificate,
    pub flags: Flags,
    /// The rational decomposition, when one exists but no repetition-free
    /// covering does.
    pub lp_covering: Option<Covering>,
    /// `min_{p∈I}` of the number of quadruples through p inside I.
    pub min_quadruples_through: usize,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ClassifyOptions {
    pub spectral: bool,
    /// Attach a seesaw estimate of δ to a quadruple-free certificate.
    pub delta_estimate: bool,
}

pub fn classify(pattern: Pattern) -> Result<Classification> {
    classify_with(pattern, &ClassifyOptions::default())
}

pub fn classify_with(pattern: Pattern, opts: &ClassifyOptions) -> Result<Classification> {
    let ppt = ppt_combinatorial(pattern)?;
    let qfree = quadruple_free_point(pattern);
    let spectral_ppt = if opts.spectral {
        Some(lattice_ppt_spectral(pattern)?)
    } else {
        None
    };
    let mut flags = Flags {
        ppt: ppt.ppt,
        prop_ppt2_hit: prop_ppt2_point(pattern),
        prop_ppt3_hit: prop_ppt3_point(pattern),
        quadruple_free: qfree.is_some(),
        spectral_ppt,
        lp_feasible: false,
        integer_covering: false,
    };
    let min_quadruples_through = pattern
        .points()
        .map(|p| quadruples_inside_through(pattern, p))
        .min()
        .unwrap_or(0);
    let mut out = Classification {
        pattern,
        verdict: Verdict::Undecided,
        certificate: Certificate::None,
        flags,
        lp_covering: None,
        min_quadruples_through,
    };
    if let Some(point) = ppt.violating_point {
        out.verdict = Verdict::NptEntangled;
        out.certificate = Certificate::ViolatingPoint {
            point,
            line_count: pattern.line_count(point),
        };
        return Ok(out);
    }
    if let Some(point) = qfree {
        let delta_estimate = if opts.delta_estimate {
            Some(delta_max_estimate(pattern, point)?)
        } else {
            None
        };
        out.verdict = Verdict::PptEntangled;
        out.certificate = Certificate::QuadrupleFreePoint {
            point,
            delta_estimate,
        };
        return Ok(out);
    }
    // no quadruple-free point, so N_I ≥ 4
    let lp = find_uniform_covering(pattern)?;
    flags.lp_feasible = lp.is_feasible();
    if flags.lp_feasible {
        if let Some(c) = find_set_covering(pattern) {
            debug_assert!(verify_decomposition(pattern, &c));
            flags.integer_covering = true;
            out.verdict = Verdict::Separable;
            out.certificate = Certificate::Covering(c);
        } else {
            out.lp_covering = lp.solution;
        }
    }
    out.flags = flags;
    Ok(out)
}

/// The open rank-11 case.
pub fn classify_rank11_conjecture() -> Classification {
    classify(RANK11).expect("nonempty pattern")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CensusMode {
    Raw,
    Orbits,
}

#[derive(Clone, Debug)]
pub struct CensusOptions {
    pub mode: CensusMode,
    pub spectral: bool,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions {
            mode: CensusMode::Raw,
            spectral: true,
            jobs: None,
        }
    }
}

/// Per-pattern outcome kept by the census.
#[derive(Clone, Debug, PartialEq)]
pub struct PatternRecord {
    pub mask: u16,
    pub verdict: Verdict,
    pub ppt: bool,
    pub ppt2: bool,
    pub ppt3: bool,
    pub quadruple_free: bool,
    pub lp_feasible: bool,
    pub integer_covering: bool,
    pub spectral: Option<(bool, f64)>,
    pub covering_verified: bool,
    pub certificate: String,
}

impl PatternRecord {
    fn from_classification(c: &Classification) -> Self {
        let covering_verified = match &c.certificate {
            Certificate::Covering(cov) => verify_decomposition(c.pattern, cov),
            _ => false,
        };
        PatternRecord {
            mask: c.pattern.mask(),
            verdict: c.verdict,
            ppt: c.flags.ppt,
            ppt2: c.flags.prop_ppt2_hit.is_some(),
            ppt3: c.flags.prop_ppt3_hit.is_some(),
            quadruple_free: c.flags.quadruple_free,
            lp_feasible: c.flags.lp_feasible,
            integer_covering: c.flags.integer_covering,
            spectral: c.flags.spectral_ppt,
            covering_verified,
            certificate: c.certificate.summary(),
        }
    }

    fn same_class(&self, o: &PatternRecord) -> bool {
        self.verdict == o.verdict
            && self.ppt == o.ppt
            && self.quadruple_free == o.quadruple_free
            && self.lp_feasible == o.lp_feasible
            && self.integer_covering == o.integer_covering
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrbitRow {
    pub canonical: PatternRecord,
    pub size: u64,
}

/// Tally over PPT patterns: `(PPT2 ∨ PPT3)` against the
/// existence of a quadruple-free point.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EquivalenceTally {
    pub ppt_patterns: u64,
    pub both: u64,
    pub neither: u64,
    pub hit_only: u64,
    pub quadruple_free_only: u64,
    pub counterexamples: Vec<u16>,
}

impl EquivalenceTally {
    pub fn holds(&self) -> bool {
        self.hit_only == 0 && self.quadruple_free_only == 0
    }

    fn add(&mut self, r: &PatternRecord, weight: u64) {
        if !r.ppt {
            return;
        }
        self.ppt_patterns += weight;
        match (r.ppt2 || r.ppt3, r.quadruple_free) {
            (true, true) => self.both += weight,
            (false, false) => self.neither += weight,
            (true, false) => {
                self.hit_only += weight;
                self.counterexamples.push(r.mask);
            }
            (false, true) => {
                self.quadruple_free_only += weight;
                self.counterexamples.push(r.mask);
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SpectralTally {
    pub checked: u64,
    pub agreements: u64,
    pub disagreements: Vec<u16>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CensusReport {
    pub mode: CensusMode,
    /// Patterns covered, counting orbit weights.
    pub patterns: u64,
    /// Patterns actually run through the pipeline.
    pub classified: u64,
    pub totals: BTreeMap<Verdict, u64>,
    pub orbit_totals: BTreeMap<Verdict, u64>,
    pub orbits: Vec<OrbitRow>,
    pub spectral: Option<SpectralTally>,
    pub equivalence: EquivalenceTally,
    pub separable_all_ppt: bool,
    pub coverings_verified: bool,
    /// Verdict and flags constant on every orbit checked.
    pub orbit_constant: bool,
    pub orbits_checked: u64,
    /// PPT patterns with a rational decomposition but no repetition-free covering.
    pub lp_only: u64,
}

impl CensusReport {
    pub fn total(&self) -> u64 {
        self.totals.values().sum()
    }

    pub fn spectral_line(&self) -> Option<String> {
        self.spectral
            .as_ref()
            .map(|s| format!("{}/{}", s.agreements, s.checked))
    }
}

fn record(mask: u16, spectral: bool) -> PatternRecord {
    let opts = ClassifyOptions {
        spectral,
        delta_estimate: false,
    };
    let c = classify_with(Pattern::new(mask), &opts).expect("nonempty pattern");
    PatternRecord::from_classification(&c)
}

fn empty_totals() -> BTreeMap<Verdict, u64> {
    Verdict::ALL.iter().map(|&v| (v, 0)).collect()
}

pub fn census(opts: &CensusOptions) -> Result<CensusReport> {
    match opts.jobs {
        Some(0) => Err(Error::InvalidParameter("jobs must be at least 1".into())),
        Some(j) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(j)
                .build()
                .map_err(|e| Error::InvalidParameter(e.to_string()))?;
            Ok(pool.install(|| census_inner(opts)))
        }
        None => Ok(census_inner(opts)),
    }
}

fn census_inner(opts: &CensusOptions) -> CensusReport {
    match opts.mode {
        CensusMode::Raw => census_raw(opts.spectral),
        CensusMode::Orbits => census_orbits(opts.spectral),
    }
}

fn tally_spectral<'a>(records: impl Iterator<Item = (&'a PatternRecord, u64)>) -> SpectralTally {
    let mut t = SpectralTally::default();
    for (r, w) in records {
        if let Some((sp, _)) = r.spectral {
            t.checked += w;
            if sp == r.ppt {
                t.agreements += w;
            } else {
                t.disagreements.push(r.mask);
            }
        }
    }
    t
}

fn census_raw(spectral: bool) -> CensusReport {
    let records: Vec<PatternRecord> = (1..=u16::MAX)
        .into_par_iter()
        .map(|m| record(m, spectral))
        .collect();
    let mut totals = empty_totals();
    let mut equivalence = EquivalenceTally::default();
    for r in &records {
        *totals.get_mut(&r.verdict).expect("all verdicts present") += 1;
        equivalence.add(r, 1);
    }
    let canon: Vec<u16> = records
        .par_iter()
        .map(|r| canonical_form(Pattern::new(r.mask)).mask())
        .collect();
    let mut sizes: BTreeMap<u16, u64> = BTreeMap::new();
    let mut orbit_constant = true;
    for (r, &c) in records.iter().zip(&canon) {
        *sizes.entry(c).or_default() += 1;
        orbit_constant &= r.same_class(&records[c as usize - 1]);
    }
    let orbits: Vec<OrbitRow> = sizes
        .iter()
        .map(|(&c, &size)| OrbitRow {
            canonical: records[c as usize - 1].clone(),
            size,
        })
        .collect();
    finish(
        CensusMode::Raw,
        &records.iter().map(|r| (r, 1)).collect::<Vec<_>>(),
        totals,
        orbits,
        equivalence,
        orbit_constant,
        spectral,
    )
}

fn census_orbits(spectral: bool) -> CensusReport {
    let mut sizes: BTreeMap<u16, u64> = BTreeMap::new();
    for m in 1..=u16::MAX {
        *sizes
            .entry(canonical_form(Pattern::new(m)).mask())
            .or_default() += 1;
    }
    let reps: Vec<(u16, u64)> = sizes.into_iter().collect();
    let g = group();
    // each representative against one other member of its orbit
    let checks: Vec<(PatternRecord, bool)> = reps
        .par_iter()
        .enumerate()
        .map(|(k, &(mask, _))| {
            let r = record(mask, spectral);
            let elem = &g.elements[(k * 7919 + 1) % g.elements.len()];
            let image = crate::symmetry::apply_symmetry(elem, Pattern::new(mask));
            let other = record(image.mask(), false);
            let same = r.same_class(&other);
            (r, same)
        })
        .collect();
    let mut totals = empty_totals();
    let mut equivalence = EquivalenceTally::default();
    let mut orbits = Vec::with_capacity(reps.len());
    let mut orbit_constant = true;
    for ((r, same), &(_, size)) in checks.into_iter().zip(&reps) {
        *totals.get_mut(&r.verdict).expect("all verdicts present") += size;
        equivalence.add(&r, size);
        orbit_constant &= same;
        orbits.push(OrbitRow { canonical: r, size });
    }
    let owned: Vec<(PatternRecord, u64)> = orbits
        .iter()
        .map(|o| (o.canonical.clone(), o.size))
        .collect();
    let weighted: Vec<(&PatternRecord, u64)> = owned.iter().map(|(r, w)| (r, *w)).collect();
    finish(
        CensusMode::Orbits,
        &weighted,
        totals,
        orbits,
        equivalence,
        orbit_constant,
        spectral,
    )
}

fn finish(
    mode: CensusMode,
    records: &[(&PatternRecord, u64)],
    totals: BTreeMap<Verdict, u64>,
    orbits: Vec<OrbitRow>,
    equivalence: EquivalenceTally,
    orbit_constant: bool,
    spectral: bool,
) -> CensusReport {
    let mut orbit_totals = empty_totals();
    for o in &orbits {
        *orbit_totals
            .get_mut(&o.canonical.verdict)
            .expect("all verdicts present") += 1;
    }
    let separable_all_ppt = records
        .iter()
        .all(|(r, _)| r.verdict != Verdict::Separable || r.ppt);
    let coverings_verified = records
        .iter()
        .all(|(r, _)| r.verdict != Verdict::Separable || r.covering_verified);
    let lp_only = records
        .iter()
        .filter(|(r, _)| r.lp_feasible && !r.integer_covering)
        .map(|(_, w)| w)
        .sum();
    CensusReport {
        mode,
        patterns: records.iter().map(|(_, w)| w).sum(),
        classified: records.len() as u64,
        totals,
        orbit_totals,
        orbits_checked: orbits.len() as u64,
        orbits,
        spectral: spectral.then(|| tally_spectral(records.iter().copied())),
        equivalence,
        separable_all_ppt,
        coverings_verified,
        orbit_constant,
        lp_only,
    }
}

/// Whether `(PPT2 ∨ PPT3) ⇔ quadruple-free point` over all PPT patterns,
/// with the tally and any counterexamples.
pub fn equivalence_check_final_proposition() -> EquivalenceTally {
    let records: Vec<PatternRecord> = (1..=u16::MAX)
        .into_par_iter()
        .map(|m| {
            let p = Pattern::new(m);
            let ppt = ppt_combinatorial(p).expect("nonempty").ppt;
            PatternRecord {
                mask: m,
                verdict: Verdict::Undecided,
                ppt,
                ppt2: prop_ppt2_point(p).is_some(),
                ppt3: prop_ppt3_point(p).is_some(),
                quadruple_free: quadruple_free_point(p).is_some(),
                lp_feasible: false,
                integer_covering: false,
                spectral: None,
                covering_verified: false,
                certificate: String::new(),
            }
        })
        .collect();
    equivalence_over(&records)
}

/// The tally restricted to the given patterns; NPT ones are skipped.
pub fn equivalence_on(patterns: &[Pattern]) -> EquivalenceTally {
    let records: Vec<PatternRecord> = patterns.iter().map(|p| record(p.mask(), false)).collect();
    equivalence_over(&records)
}

fn equivalence_over(records: &[PatternRecord]) -> EquivalenceTally {
    let mut t = EquivalenceTally::default();
    for r in records {
        t.add(r, 1);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadruples::catalog;

    fn grid(s: &str) -> Pattern {
        Pattern::parse(s).unwrap()
    }

    fn pt(a: u8, b: u8) -> LatticePoint {
        LatticePoint::new(a, b).unwrap()
    }

    #[test]
    fn reference_fixtures() {
        for g in [".xx.\nx..x\n.xx.\nx.x.", "..x.\nx..x\n..x.\n...x"] {
            let c = classify(grid(g)).unwrap();
            assert_eq!(c.verdict, Verdict::NptEntangled);
            assert!(
                matches!(c.certificate, Certificate::ViolatingPoint { point, .. } if point == pt(2, 2))
            );
        }
        for g in ["..xx\nx..x\n.x.x\n....", ".xxx\nx.xx\n..xx\n...."] {
            let c = classify(grid(g)).unwrap();
            assert_eq!(c.verdict, Verdict::PptEntangled);
            assert_eq!(c.flags.prop_ppt2_hit, Some(pt(0, 0)));
        }
        let c = classify(grid("x..x\n.xx.\nxx.x\nxx.x")).unwrap();
        assert_eq!(c.verdict, Verdict::PptEntangled);
        assert_eq!(c.flags.prop_ppt2_hit, None);
        assert!(c.flags.prop_ppt3_hit.is_some());
    }

    #[test]
    fn separable_fixtures() {
        let c = classify(grid(".xxx\n.xxx\n.xxx\nx...")).unwrap();
        assert_eq!(c.verdict, Verdict::Separable);
        let Certificate::Covering(cov) = &c.certificate else {
            panic!()
        };
        assert_eq!(cov.multiplicity, 2.into());
        assert_eq!(cov.cardinality, 5.into());
        assert!(verify_decomposition(c.pattern, cov));
        for g in [
            ".xxx\n.x.x\n.xxx\n....",
            ".xxx\n.x.x\n.x.x\nx...",
            ".xxx\n.x.x\n.xxx\nx...",
        ] {
            assert_eq!(
                classify(grid(g)).unwrap().verdict,
                Verdict::Separable,
                "{g}"
            );
        }
    }

    #[test]
    fn rank11_undecided() {
        let c = classify_rank11_conjecture();
        assert_eq!(c.verdict, Verdict::Undecided);
        assert!(c.flags.ppt);
        assert!(c.min_quadruples_through >= 3);
        assert!(c.flags.lp_feasible);
        assert!(!c.flags.integer_covering);
        assert!(c.lp_covering.is_some());
    }

    #[test]
    fn quadruples_are_separable() {
        let cat = catalog();
        for i in 0..cat.len() {
            let c = classify(cat.get(i).pattern()).unwrap();
            assert_eq!(c.verdict, Verdict::Separable);
            let Certificate::Covering(cov) = &c.certificate else {
                panic!()
            };
            assert_eq!(cov.quadruple_indices, vec![i]);
        }
    }

    #[test]
    fn empty_pattern_rejected() {
        assert_eq!(classify(Pattern::new(0)), Err(Error::EmptyPattern));
    }

    #[test]
    fn spectral_flag_on_demand() {
        let opts = ClassifyOptions {
            spectral: true,
            delta_estimate: false,
        };
        let c = classify_with(grid(".xx.\nx..x\n.xx.\nx.x."), &opts).unwrap();
        let (ppt, min) = c.flags.spectral_ppt.unwrap();
        assert!(!ppt && min < 0.0);
        assert!(classify(Pattern::FULL)
            .unwrap()
            .flags
            .spectral_ppt
            .is_none());
    }

    #[test]
    fn equivalence_on_fixtures() {
        let pats: Vec<Pattern> = [
            "..xx\nx..x\n.x.x\n....",
            ".xxx\nx.xx\n..xx\n....",
            "x..x\n.xx.\nxx.x\nxx.x",
        ]
        .iter()
        .map(|g| grid(g))
        .collect();
        let t = equivalence_on(&pats);
        assert!(t.holds());
        assert_eq!(t.both, 3);
        let npt = equivalence_on(&[grid(".xx.\nx..x\n.xx.\nx.x.")]);
        assert_eq!(npt.ppt_patterns, 0);
    }
}

use num_bigint::BigInt;

use lattice_core::classify::{
    census, classify, classify_rank11_conjecture, CensusMode, CensusOptions, Certificate, Verdict,
};
use lattice_core::covering::{covering_relation_check, verify_decomposition, Covering};
use lattice_core::quadruples::{catalog, quadruple_free_point};
use lattice_core::witness::{delta_max_estimate_with, SeesawOptions};
use lattice_core::{LatticePoint, Pattern};

fn pt(a: u8, b: u8) -> LatticePoint {
    LatticePoint::new(a, b).unwrap()
}

fn quad(points: [(u8, u8); 4]) -> usize {
    let p = Pattern::from_points(points.iter().map(|&(a, b)| pt(a, b)));
    catalog()
        .index_of(p.mask())
        .unwrap_or_else(|| panic!("{} is not special", p.hex()))
}

#[test]
fn listed_decomposition_of_eight_point_pattern() {
    let pattern = Pattern::parse(".xxx\n.x.x\n.x.x\nx...").unwrap();
    let indices = [
        quad([(0, 0), (1, 1), (3, 2), (2, 3)]),
        quad([(0, 0), (3, 1), (1, 2), (2, 3)]),
        quad([(1, 1), (3, 1), (1, 3), (3, 3)]),
        quad([(1, 2), (3, 2), (1, 3), (3, 3)]),
    ];
    let c = Covering::from_quadruples(pattern, &indices).unwrap();
    assert_eq!(c.multiplicity, BigInt::from(2));
    assert_eq!(c.cardinality, BigInt::from(4));
    assert!(c.is_repetition_free());
    assert!(verify_decomposition(pattern, &c));
    assert!(covering_relation_check(8, 2, 4));
}

#[test]
fn uneven_quadruple_sets_are_not_coverings() {
    let pattern = Pattern::parse(".xxx\n.x.x\n.x.x\nx...").unwrap();
    let indices = [
        quad([(0, 0), (1, 1), (3, 2), (2, 3)]),
        quad([(1, 1), (3, 1), (1, 3), (3, 3)]),
    ];
    assert!(Covering::from_quadruples(pattern, &indices).is_none());
}

#[test]
fn separable_fixtures_carry_checked_coverings() {
    for g in [
        ".xxx\n.xxx\n.xxx\nx...",
        ".xxx\n.x.x\n.xxx\n....",
        ".xxx\n.x.x\n.xxx\nx...",
    ] {
        let c = classify(Pattern::parse(g).unwrap()).unwrap();
        assert_eq!(c.verdict, Verdict::Separable, "{g}");
        let Certificate::Covering(cov) = &c.certificate else {
            panic!("no covering for {g}");
        };
        assert!(verify_decomposition(c.pattern, cov));
        let n = c.pattern.len() as u64;
        let m: u64 = cov.multiplicity.clone().try_into().unwrap();
        let q: u64 = cov.cardinality.clone().try_into().unwrap();
        assert!(covering_relation_check(n, m, q));
    }
}

#[test]
fn rank_eleven_has_only_a_repeated_decomposition() {
    let r = classify_rank11_conjecture();
    assert_eq!(r.verdict, Verdict::Undecided);
    let lp = r.lp_covering.expect("rational decomposition");
    assert!(!lp.is_repetition_free());
    assert!(verify_decomposition(r.pattern, &lp));
}

#[test]
fn orbit_census_is_deterministic_and_matches_raw() {
    let orbit_opts = CensusOptions {
        mode: CensusMode::Orbits,
        spectral: false,
        jobs: None,
    };
    let a = census(&orbit_opts).unwrap();
    let b = census(&CensusOptions {
        jobs: Some(2),
        ..orbit_opts.clone()
    })
    .unwrap();
    assert_eq!(a.orbits.len(), 316);
    assert_eq!(a.totals, b.totals);
    assert_eq!(
        a.orbits
            .iter()
            .map(|o| (o.canonical.mask, o.size))
            .collect::<Vec<_>>(),
        b.orbits
            .iter()
            .map(|o| (o.canonical.mask, o.size))
            .collect::<Vec<_>>()
    );
    let raw = census(&CensusOptions {
        mode: CensusMode::Raw,
        spectral: false,
        jobs: None,
    })
    .unwrap();
    assert_eq!(raw.totals, a.totals);
    assert_eq!(raw.total(), 65535);
    assert_eq!(raw.totals[&Verdict::NptEntangled], 54112);
    assert_eq!(raw.totals[&Verdict::PptEntangled], 2688);
    assert_eq!(raw.totals[&Verdict::Separable], 7775);
    assert_eq!(raw.totals[&Verdict::Undecided], 960);
    assert!(raw.equivalence.holds());
    assert!(raw.separable_all_ppt && raw.coverings_verified);
}

#[test]
fn ppt_entangled_orbits_admit_positive_delta() {
    let opts = CensusOptions {
        mode: CensusMode::Orbits,
        spectral: false,
        jobs: None,
    };
    let report = census(&opts).unwrap();
    let seesaw = SeesawOptions {
        restarts: 8,
        iterations: 200,
        ..SeesawOptions::default()
    };
    let entangled: Vec<Pattern> = report
        .orbits
        .iter()
        .filter(|o| o.canonical.verdict == Verdict::PptEntangled)
        .map(|o| Pattern::new(o.canonical.mask))
        .collect();
    assert_eq!(entangled.len(), 17);
    for p in entangled.iter().step_by(4) {
        let q = quadruple_free_point(*p).unwrap();
        let d = delta_max_estimate_with(*p, q, &seesaw, 12).unwrap();
        assert!(d > 0.0, "{} at {q}", p.hex());
    }
}

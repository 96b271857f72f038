//! Plain-text output for terminals.

use std::fmt::Write;

use lattice_core::classify::{Certificate, Classification};
use lattice_core::covering::Covering;
use lattice_core::quadruples::catalog;
use lattice_core::{LatticePoint, Pattern};

/// Grid with axes; `mark` overrides the cell symbol at chosen points.
pub fn grid(pattern: Pattern, mark: impl Fn(LatticePoint) -> Option<char>) -> String {
    let mut out = String::new();
    for beta in (0..4u8).rev() {
        let _ = write!(out, "  {beta} |");
        for alpha in 0..4u8 {
            let p = LatticePoint::new(alpha, beta).expect("in range");
            let c = mark(p).unwrap_or(if pattern.contains(p) { 'x' } else { '.' });
            let _ = write!(out, " {c}");
        }
        out.push('\n');
    }
    out.push_str("      -------\n      0 1 2 3\n");
    out
}

fn covering_lines(out: &mut String, c: &Covering) {
    let cat = catalog();
    let _ = writeln!(
        out,
        "covering: M = {}, N_Q = {}, {} quadruples{}",
        c.multiplicity,
        c.cardinality,
        c.len(),
        if c.is_repetition_free() {
            ""
        } else {
            " (with repetition)"
        }
    );
    for ((&i, w), k) in c.quadruple_indices.iter().zip(&c.weights).zip(&c.counts) {
        let pts: Vec<String> = cat.get(i).points().iter().map(|p| p.to_string()).collect();
        let _ = writeln!(out, "  Q{i:<2} {}  weight {w}  count {k}", pts.join(" "));
    }
}

fn opt_point(p: Option<LatticePoint>) -> String {
    p.map_or_else(|| "none".to_string(), |p| p.to_string())
}

pub fn classification(c: &Classification) -> String {
    let mut out = String::new();
    let (headline, marked) = match &c.certificate {
        Certificate::ViolatingPoint { point, line_count } => (
            format!(
                "{}, violating point {point} sees {line_count} > {}/2 pattern points",
                c.verdict,
                c.pattern.len()
            ),
            Some(*point),
        ),
        Certificate::QuadrupleFreePoint {
            point,
            delta_estimate,
        } => {
            let delta = delta_estimate.map_or(String::new(), |d| format!(", delta up to {d:.6}"));
            (
                format!("{}, quadruple-free point {point}{delta}", c.verdict),
                Some(*point),
            )
        }
        Certificate::Covering(cv) => (
            format!(
                "{}, covering with M = {} and N_Q = {}",
                c.verdict, cv.multiplicity, cv.cardinality
            ),
            None,
        ),
        Certificate::None => (format!("{}, no certificate", c.verdict), None),
    };
    let _ = writeln!(out, "{headline}");
    let _ = writeln!(
        out,
        "pattern {}  N_I = {}",
        c.pattern.hex(),
        c.pattern.len()
    );
    out.push_str(&grid(c.pattern, |p| (Some(p) == marked).then_some('@')));
    let f = &c.flags;
    let _ = writeln!(
        out,
        "ppt {}  ppt2 hit {}  ppt3 hit {}  quadruple-free {}",
        f.ppt,
        opt_point(f.prop_ppt2_hit),
        opt_point(f.prop_ppt3_hit),
        f.quadruple_free
    );
    let _ = writeln!(
        out,
        "lp feasible {}  integer covering {}  min quadruples through a point {}",
        f.lp_feasible, f.integer_covering, c.min_quadruples_through
    );
    if let Some((ok, min)) = f.spectral_ppt {
        let _ = writeln!(out, "spectral ppt {ok}  smallest eigenvalue {min:.3e}");
    }
    if let Certificate::Covering(cv) = &c.certificate {
        covering_lines(&mut out, cv);
    }
    if let Some(cv) = &c.lp_covering {
        out.push_str("rational decomposition found, but no repetition-free covering:\n");
        covering_lines(&mut out, cv);
    }
    out
}

pub fn quadruples(point: Option<LatticePoint>) -> String {
    let cat = catalog();
    let indices: Vec<usize> = match point {
        Some(p) => cat.through[p.bit() as usize].clone(),
        None => (0..cat.len()).collect(),
    };
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{} quadruples{}",
        indices.len(),
        point.map_or(String::new(), |p| format!(" through {p}"))
    );
    for i in indices {
        let q = cat.get(i);
        let pts: Vec<String> = q.points().iter().map(|p| p.to_string()).collect();
        let _ = writeln!(out, "\nQ{i} {} {}", q.pattern().hex(), pts.join(" "));
        out.push_str(&grid(q.pattern(), |_| None));
    }
    out
}

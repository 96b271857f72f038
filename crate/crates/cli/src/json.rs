//! JSON shapes shared by the command line and the HTTP API. Exact
//! rationals are strings; keys come out sorted.

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use lattice_core::classify::{
    CensusMode, CensusReport, Certificate, Classification, OrbitRow, PatternRecord,
};
use lattice_core::covering::Covering;
use lattice_core::quadruples::catalog;
use lattice_core::witness::{DiagonalCoefficients, Family, WitnessReport};
use lattice_core::{LatticePoint, Pattern};

pub const SCHEMA_VERSION: &str = "1";

pub fn point(p: LatticePoint) -> Value {
    json!([p.alpha(), p.beta()])
}

pub fn rational(x: &BigRational) -> Value {
    Value::String(x.to_string())
}

fn float(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

pub fn pattern(p: Pattern) -> Value {
    json!({
        "mask": p.hex(),
        "n": p.len(),
        "points": p.points().map(point).collect::<Vec<_>>(),
        "grid": p.render(),
    })
}

pub fn covering(c: &Covering) -> Value {
    let cat = catalog();
    let quads: Vec<Value> = c
        .quadruple_indices
        .iter()
        .zip(&c.weights)
        .zip(&c.counts)
        .map(|((&i, w), k)| {
            json!({
                "index": i,
                "points": cat.get(i).points().iter().map(|&p| point(p)).collect::<Vec<_>>(),
                "weight": rational(w),
                "count": k.to_string(),
            })
        })
        .collect();
    json!({
        "multiplicity": c.multiplicity.to_string(),
        "cardinality": c.cardinality.to_string(),
        "repetition_free": c.is_repetition_free(),
        "quadruples": quads,
    })
}

pub fn certificate(c: &Certificate) -> Value {
    match c {
        Certificate::ViolatingPoint {
            point: p,
            line_count,
        } => json!({
            "kind": c.kind(),
            "point": point(*p),
            "line_count": line_count,
        }),
        Certificate::QuadrupleFreePoint {
            point: p,
            delta_estimate,
        } => json!({
            "kind": c.kind(),
            "point": point(*p),
            "delta_estimate": delta_estimate.map_or(Value::Null, float),
        }),
        Certificate::Covering(cov) => {
            let mut v = covering(cov);
            v["kind"] = json!(c.kind());
            v
        }
        Certificate::None => json!({ "kind": c.kind() }),
    }
}

pub fn classification(c: &Classification) -> Value {
    let f = &c.flags;
    json!({
        "pattern": pattern(c.pattern),
        "verdict": c.verdict.as_str(),
        "certificate": certificate(&c.certificate),
        "flags": {
            "ppt": f.ppt,
            "prop_ppt2_hit": f.prop_ppt2_hit.map_or(Value::Null, point),
            "prop_ppt3_hit": f.prop_ppt3_hit.map_or(Value::Null, point),
            "quadruple_free": f.quadruple_free,
            "spectral_ppt": f.spectral_ppt.map_or(Value::Null, |(ok, _)| json!(ok)),
            "spectral_min_eigenvalue": f.spectral_ppt.map_or(Value::Null, |(_, m)| float(m)),
            "lp_feasible": f.lp_feasible,
            "integer_covering": f.integer_covering,
        },
        "lp_covering": c.lp_covering.as_ref().map_or(Value::Null, covering),
        "min_quadruples_through": c.min_quadruples_through,
    })
}

pub fn coefficients(lam: &DiagonalCoefficients) -> Value {
    let family = match &lam.family {
        Family::TraceMap | Family::Custom => json!({ "name": lam.family.name() }),
        Family::SingleDelta { point: p, delta } => json!({
            "name": lam.family.name(),
            "point": point(*p),
            "delta": rational(delta),
        }),
        Family::Gamma { t, mu } => json!({ "name": lam.family.name(), "t": t, "mu": mu }),
        Family::PhiV { mu } => json!({ "name": lam.family.name(), "mu": mu }),
    };
    json!({
        "family": family,
        "lambda": lam.lambda().iter().map(rational).collect::<Vec<_>>(),
        "lambda_float": lam.as_f64().into_iter().map(float).collect::<Vec<_>>(),
    })
}

pub fn witness_report(r: &WitnessReport, lam: &DiagonalCoefficients) -> Value {
    let margin = r.margin();
    json!({
        "lhs": rational(&r.lhs),
        "threshold": rational(&r.threshold),
        "margin": rational(&margin),
        "margin_float": margin.to_f64().map_or(Value::Null, float),
        "sup_estimate": r.sup_estimate.map_or(Value::Null, float),
        "verdict": r.verdict.as_str(),
        "provenance": r.provenance,
        "coefficients": coefficients(lam),
    })
}

fn record(r: &PatternRecord) -> Value {
    json!({
        "mask": format!("0x{:04x}", r.mask),
        "n": r.mask.count_ones(),
        "verdict": r.verdict.as_str(),
        "ppt": r.ppt,
        "ppt2": r.ppt2,
        "ppt3": r.ppt3,
        "quadruple_free": r.quadruple_free,
        "lp_feasible": r.lp_feasible,
        "integer_covering": r.integer_covering,
        "certificate": r.certificate,
    })
}

fn orbit(o: &OrbitRow) -> Value {
    let mut v = record(&o.canonical);
    v["orbit_size"] = json!(o.size);
    v
}

pub fn census_summary(r: &CensusReport) -> Value {
    let totals: serde_json::Map<String, Value> = r
        .totals
        .iter()
        .map(|(v, n)| (v.as_str().to_string(), json!(n)))
        .collect();
    let orbit_totals: serde_json::Map<String, Value> = r
        .orbit_totals
        .iter()
        .map(|(v, n)| (v.as_str().to_string(), json!(n)))
        .collect();
    let e = &r.equivalence;
    json!({
        "mode": match r.mode { CensusMode::Raw => "raw", CensusMode::Orbits => "orbits" },
        "patterns": r.patterns,
        "classified": r.classified,
        "orbits": r.orbits.len(),
        "totals": totals,
        "orbit_totals": orbit_totals,
        "spectral": r.spectral.as_ref().map_or(Value::Null, |s| json!({
            "checked": s.checked,
            "agreements": s.agreements,
            "disagreements": s.disagreements.iter().map(|m| format!("0x{m:04x}")).collect::<Vec<_>>(),
        })),
        "equivalence": {
            "holds": e.holds(),
            "ppt_patterns": e.ppt_patterns,
            "hit_and_quadruple_free": e.both,
            "neither": e.neither,
            "hit_only": e.hit_only,
            "quadruple_free_only": e.quadruple_free_only,
            "counterexamples": e.counterexamples.iter().map(|m| format!("0x{m:04x}")).collect::<Vec<_>>(),
        },
        "separable_all_ppt": r.separable_all_ppt,
        "coverings_verified": r.coverings_verified,
        "orbit_constant": r.orbit_constant,
        "orbits_checked": r.orbits_checked,
        "lp_only": r.lp_only,
    })
}

pub fn census(r: &CensusReport) -> Value {
    json!({
        "schema": SCHEMA_VERSION,
        "summary": census_summary(r),
        "orbits": r.orbits.iter().map(orbit).collect::<Vec<_>>(),
    })
}

/// CSV with one row per canonical orbit.
pub fn census_csv(r: &CensusReport) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "canonical_mask",
        "N_I",
        "verdict",
        "ppt",
        "ppt2",
        "ppt3",
        "quadruple_free",
        "lp_feasible",
        "integer_covering",
        "orbit_size",
        "certificate",
    ])?;
    for o in &r.orbits {
        let c = &o.canonical;
        w.write_record([
            format!("0x{:04x}", c.mask),
            c.mask.count_ones().to_string(),
            c.verdict.as_str().to_string(),
            c.ppt.to_string(),
            c.ppt2.to_string(),
            c.ppt3.to_string(),
            c.quadruple_free.to_string(),
            c.lp_feasible.to_string(),
            c.integer_covering.to_string(),
            o.size.to_string(),
            c.certificate.clone(),
        ])?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| csv::Error::from(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn envelope(request: Value, result: Value, timing_ms: f64) -> Value {
    json!({
        "version": SCHEMA_VERSION,
        "request": request,
        "result": result,
        "timing_ms": (timing_ms * 1000.0).round() / 1000.0,
    })
}

pub fn error(message: &str) -> Value {
    json!({ "version": SCHEMA_VERSION, "error": message })
}

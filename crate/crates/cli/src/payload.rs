//! Request evaluation shared by the command line and the HTTP handlers, so
//! both emit the same result payloads.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::FromPrimitive;
use serde::Deserialize;
use serde_json::{json, Value};

use lattice_core::classify::{classify_with, ClassifyOptions};
use lattice_core::quadruples::{catalog_all, quadruple_free_point, quadruples_inside_through};
use lattice_core::witness::{
    delta_max_estimate_with, gamma_t_coefficients, gamma_t_expectation_with, phi_v_values, seesaw,
    witness_value, DiagonalCoefficients, PhiV, SeesawOptions, GAMMA_MU, PHI_V_MU,
};
use lattice_core::{LatticePoint, Pattern};

use crate::json;

#[derive(Debug, thiserror::Error)]
pub enum AppError {
    #[error("{0}")]
    Parse(lattice_core::Error),
    #[error("{0}")]
    Invalid(String),
}

impl From<lattice_core::Error> for AppError {
    fn from(e: lattice_core::Error) -> Self {
        match e {
            lattice_core::Error::Parse { .. }
            | lattice_core::Error::BadPoint(..)
            | lattice_core::Error::BadIndex(_) => AppError::Parse(e),
            other => AppError::Invalid(other.to_string()),
        }
    }
}

pub type AppResult<T> = Result<T, AppError>;

pub fn parse_pattern(text: &str) -> AppResult<Pattern> {
    Pattern::parse(text).map_err(AppError::Parse)
}

/// `"(a,b)"` or `"a,b"`.
pub fn parse_point(text: &str) -> AppResult<LatticePoint> {
    let t = text.trim();
    let inner = t
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .unwrap_or(t);
    let bad = || {
        AppError::Invalid(format!(
            "bad point {text:?}, expected a,b with 0 <= a,b <= 3"
        ))
    };
    let (a, b) = inner.split_once(',').ok_or_else(bad)?;
    let a: u8 = a.trim().parse().map_err(|_| bad())?;
    let b: u8 = b.trim().parse().map_err(|_| bad())?;
    LatticePoint::new(a, b).map_err(|_| bad())
}

pub fn classify(pattern: Pattern, spectral: bool, delta: bool) -> AppResult<Value> {
    let opts = ClassifyOptions {
        spectral,
        delta_estimate: delta,
    };
    Ok(json::classification(&classify_with(pattern, &opts)?))
}

pub fn quadruples(point: Option<LatticePoint>) -> Value {
    let all = catalog_all();
    let indices: Vec<usize> = match point {
        Some(p) => all.through[p.bit() as usize].clone(),
        None => (0..all.len()).collect(),
    };
    let entries: Vec<Value> = indices
        .iter()
        .map(|&i| {
            let q = all.get(i);
            json!({
                "index": i,
                "mask": q.pattern().hex(),
                "points": q.points().iter().map(|&p| json::point(p)).collect::<Vec<_>>(),
                "grid": q.pattern().render(),
            })
        })
        .collect();
    json!({
        "point": point.map_or(Value::Null, json::point),
        "count": entries.len(),
        "quadruples": entries,
    })
}

/// One component of V for the Φ_V family.
#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
pub struct VEntry {
    pub point: [u8; 2],
    #[serde(default)]
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct WitnessParams {
    /// Point for the single-δ family.
    pub point: Option<[u8; 2]>,
    /// δ as a rational string such as "1/8".
    pub delta: Option<String>,
    pub t: Option<f64>,
    pub mu: Option<f64>,
    #[serde(default)]
    pub v: Vec<VEntry>,
    /// Run the seesaw estimate of the positivity supremum (default true).
    pub sup: Option<bool>,
    pub restarts: Option<usize>,
    pub seed: Option<u64>,
}

impl WitnessParams {
    fn seesaw_options(&self) -> SeesawOptions {
        let d = SeesawOptions::default();
        SeesawOptions {
            restarts: self.restarts.unwrap_or(d.restarts),
            seed: self.seed.unwrap_or(d.seed),
            ..d
        }
    }

    fn sup(&self, lam: &DiagonalCoefficients) -> Option<f64> {
        self.sup
            .unwrap_or(true)
            .then(|| seesaw(lam, &self.seesaw_options(), &[]).best())
    }
}

fn point_of(p: [u8; 2]) -> AppResult<LatticePoint> {
    LatticePoint::new(p[0], p[1])
        .map_err(|_| AppError::Invalid(format!("bad point ({},{})", p[0], p[1])))
}

pub fn witness(pattern: Pattern, family: &str, params: &WitnessParams) -> AppResult<Value> {
    if pattern.is_empty() {
        return Err(AppError::Invalid("empty pattern".into()));
    }
    match family {
        "delta" => witness_delta(pattern, params),
        "gamma" => witness_gamma(pattern, params),
        "phiv" => witness_phiv(pattern, params),
        other => Err(AppError::Invalid(format!(
            "unknown family {other:?}, expected delta, gamma or phiv"
        ))),
    }
}

fn witness_delta(pattern: Pattern, params: &WitnessParams) -> AppResult<Value> {
    let p = match params.point {
        Some(p) => point_of(p)?,
        None => quadruple_free_point(pattern)
            .unwrap_or_else(|| pattern.points().next().expect("nonempty")),
    };
    if !pattern.contains(p) {
        return Err(AppError::Invalid(format!(
            "point {p} is not in the pattern"
        )));
    }
    let delta_max = delta_max_estimate_with(pattern, p, &params.seesaw_options(), 30)?;
    let delta = match &params.delta {
        Some(s) => s.trim().parse::<BigRational>().map_err(|_| {
            AppError::Invalid(format!("bad delta {s:?}, expected a rational like 1/8"))
        })?,
        None => BigRational::from_f64(delta_max).expect("finite"),
    };
    let lam = DiagonalCoefficients::single_delta(pattern, p, delta)?;
    let mut report = witness_value(pattern, &lam)?;
    report.sup_estimate = params.sup(&lam);
    Ok(json!({
        "family": "delta",
        "pattern": json::pattern(pattern),
        "point": json::point(p),
        "quadruples_through_point": quadruples_inside_through(pattern, p),
        "quadruple_free": quadruples_inside_through(pattern, p) == 0,
        "delta_max": delta_max,
        "witness": json::witness_report(&report, &lam),
    }))
}

fn witness_gamma(pattern: Pattern, params: &WitnessParams) -> AppResult<Value> {
    let t = params.t.unwrap_or(0.01);
    let mu = params.mu.unwrap_or(GAMMA_MU);
    let g = gamma_t_coefficients(t)?;
    let lam = g.stormer(t, mu)?;
    let mut report = witness_value(pattern, &lam)?;
    report.sup_estimate = params.sup(&lam);
    let expectation = gamma_t_expectation_with(pattern, t, mu)?;
    Ok(json!({
        "family": "gamma",
        "pattern": json::pattern(pattern),
        "t": t,
        "mu": mu,
        "g": {
            "g00": g.g00,
            "g0i": g.g0i,
            "gi0": g.gi0,
        },
        "expectation": expectation,
        "witness": json::witness_report(&report, &lam),
    }))
}

fn witness_phiv(pattern: Pattern, params: &WitnessParams) -> AppResult<Value> {
    if params.v.is_empty() {
        return Err(AppError::Invalid(
            "phiv needs at least one component of V".into(),
        ));
    }
    let entries = params
        .v
        .iter()
        .map(|e| Ok((point_of(e.point)?, Complex64::new(e.re, e.im))))
        .collect::<AppResult<Vec<_>>>()?;
    let v = PhiV::new(&entries)?;
    let values = phi_v_values(pattern, &v)?;
    if (values.closed_form - values.dense).abs() > 1e-10 {
        return Err(AppError::Invalid(format!(
            "closed form {} disagrees with dense trace {}",
            values.closed_form, values.dense
        )));
    }
    let mu = params.mu.unwrap_or(PHI_V_MU);
    let lam = v.stormer(mu)?;
    let mut report = witness_value(pattern, &lam)?;
    report.sup_estimate = params.sup(&lam);
    let components: Vec<Value> = PhiV::support()
        .iter()
        .map(|&p| {
            let c = v.coefficient(p);
            json!({ "point": json::point(p), "re": c.re, "im": c.im })
        })
        .collect();
    Ok(json!({
        "family": "phiv",
        "pattern": json::pattern(pattern),
        "v": components,
        "value": values.closed_form,
        "dense_value": values.dense,
        "mu": mu,
        "witness": json::witness_report(&report, &lam),
    }))
}

//! Diagonal positive-map witnesses.
//!
//! A diagonal map `Λ[X] = Σ_s λ_s σ_s X σ_s` with `λ ≥ 0` is positive iff
//! `Σ_s λ_s |⟨φ|σ_s|ψ⟩|² ≤ 1` for all unit ψ, φ. For such a map a lattice
//! state violating `Σ_{s∈I} λ_s ≤ N_I/4` is entangled. The supremum is only
//! estimated here (seesaw); certificates come from the combinatorial tests.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dense::{DenseMatrix, GaussianRational, Mode};
use crate::eigen::top_eigenpair;
use crate::error::{Error, Result};
use crate::pattern::Pattern;
use crate::pauli::{dense, transposition_sign, LatticePoint, PauliString};
use crate::quadruples::{catalog, quadruple_free_point, quadruples_inside, saturating_vectors};
use crate::state::{density_matrix, diagonal_operator, SigmaDiagonalState};

/// Numerical slack on the positivity bound `sup ≤ 1`.
pub const SUP_TOL: f64 = 1e-9;
/// δ estimates below this are indistinguishable from 0 under `SUP_TOL`.
pub const DELTA_FLOOR: f64 = 1e-8;
/// Default Størmer scale for the Γ^t family.
pub const GAMMA_MU: f64 = 4.0;
/// Default Størmer scale for the Φ_V family.
pub const PHI_V_MU: f64 = 2.0;

/// Where a coefficient family comes from; decides whether a violated
/// inequality certifies entanglement.
#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    TraceMap,
    /// Trace-map coefficients with `λ_p = (1+δ)/4` at one point of I and
    /// zero elsewhere outside I.
    SingleDelta {
        point: LatticePoint,
        delta: BigRational,
    },
    Gamma {
        t: f64,
        mu: f64,
    },
    PhiV {
        mu: f64,
    },
    Custom,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::TraceMap => "trace",
            Family::SingleDelta { .. } => "delta",
            Family::Gamma { .. } => "gamma",
            Family::PhiV { .. } => "phiv",
            Family::Custom => "custom",
        }
    }
}

/// Nonnegative coefficients `λ_s`, indexed by string code.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalCoefficients {
    n: usize,
    lambda: Vec<BigRational>,
    pub family: Family,
}

fn q(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn exact_f64(x: f64) -> Result<BigRational> {
    BigRational::from_f64(x).ok_or_else(|| Error::InvalidParameter(format!("not finite: {x}")))
}

impl DiagonalCoefficients {
    pub fn new(n: usize, lambda: Vec<BigRational>) -> Result<Self> {
        let dim = 1usize << (2 * n);
        if lambda.len() != dim {
            return Err(Error::Dimension {
                expected: dim,
                got: lambda.len(),
            });
        }
        if let Some(i) = lambda.iter().position(|x| x.is_negative()) {
            return Err(Error::NegativeCoefficient(i));
        }
        Ok(DiagonalCoefficients {
            n,
            lambda,
            family: Family::Custom,
        })
    }

    /// Exact binary values of the given floats.
    pub fn from_f64(n: usize, lambda: &[f64]) -> Result<Self> {
        let exact = lambda
            .iter()
            .map(|&x| exact_f64(x))
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, exact)
    }

    /// `λ_s = 1/2^n`, the trace map `X ↦ Tr(X) 1`.
    pub fn trace_map(n: usize) -> Self {
        let dim = 1usize << (2 * n);
        DiagonalCoefficients {
            n,
            lambda: vec![q(1, 1i64 << n); dim],
            family: Family::TraceMap,
        }
    }

    /// `λ = 1/4` on I, `(1+δ)/4` at p, and 0 off I.
    pub fn single_delta(pattern: Pattern, p: LatticePoint, delta: BigRational) -> Result<Self> {
        if !pattern.contains(p) {
            return Err(Error::PointNotInPattern(p.alpha(), p.beta()));
        }
        if delta.is_negative() {
            return Err(Error::InvalidParameter("delta must be nonnegative".into()));
        }
        let quarter = q(1, 4);
        let lambda = LatticePoint::all()
            .map(|s| {
                if s == p {
                    (BigRational::from_integer(1.into()) + &delta) * &quarter
                } else if pattern.contains(s) {
                    quarter.clone()
                } else {
                    BigRational::zero()
                }
            })
            .collect();
        Ok(DiagonalCoefficients {
            n: 2,
            lambda,
            family: Family::SingleDelta { point: p, delta },
        })
    }

    /// `λ = 1/4` on the points of a quadruple, 0 elsewhere.
    pub fn on_points(points: &[LatticePoint]) -> Self {
        let mut lambda = vec![BigRational::zero(); 16];
        for p in points {
            lambda[p.bit() as usize] = q(1, 4);
        }
        DiagonalCoefficients {
            n: 2,
            lambda,
            family: Family::Custom,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lambda(&self) -> &[BigRational] {
        &self.lambda
    }

    pub fn at(&self, p: LatticePoint) -> &BigRational {
        &self.lambda[p.bit() as usize]
    }

    pub fn as_f64(&self) -> Vec<f64> {
        self.lambda
            .iter()
            .map(|x| x.to_f64().unwrap_or(f64::NAN))
            .collect()
    }

    /// Whether the family is a positive map by construction, and which
    /// statement says so.
    fn positivity_basis(&self, pattern: Pattern) -> Option<&'static str> {
        match &self.family {
            Family::TraceMap => Some("trace map"),
            Family::Gamma { .. } => Some("positive semigroup map, Størmer shift"),
            Family::PhiV { .. } => Some("positive map Tr - T - V†XV, Størmer shift"),
            Family::SingleDelta { point, .. } => {
                if quadruple_free_point(pattern) == Some(*point)
                    || crate::quadruples::quadruples_inside_through(pattern, *point) == 0
                {
                    Some("quadruple-free point: small delta keeps the map positive")
                } else {
                    None
                }
            }
            Family::Custom => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessVerdict {
    EntanglementCertified,
    Inconclusive,
}

impl WitnessVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            WitnessVerdict::EntanglementCertified => "entanglement_certified",
            WitnessVerdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WitnessReport {
    /// `Σ_{s∈I} λ_s`.
    pub lhs: BigRational,
    /// `N_I / 4`.
    pub threshold: BigRational,
    pub sup_estimate: Option<f64>,
    pub verdict: WitnessVerdict,
    /// Reason the coefficient family is a positive map, when it is known.
    pub provenance: Option<&'static str>,
}

impl WitnessReport {
    pub fn margin(&self) -> BigRational {
        &self.lhs - &self.threshold
    }
}

/// `Σ_{s∈I} λ_s` against `N_I/4`.
pub fn witness_value(pattern: Pattern, lam: &DiagonalCoefficients) -> Result<WitnessReport> {
    if lam.n != 2 {
        return Err(Error::Dimension {
            expected: 16,
            got: lam.lambda.len(),
        });
    }
    let lhs: BigRational = pattern.points().map(|p| lam.at(p).clone()).sum();
    let threshold = q(pattern.len() as i64, 4);
    let provenance = lam.positivity_basis(pattern);
    let verdict = if lhs > threshold && provenance.is_some() {
        WitnessVerdict::EntanglementCertified
    } else {
        WitnessVerdict::Inconclusive
    };
    Ok(WitnessReport {
        lhs,
        threshold,
        sup_estimate: None,
        verdict,
        provenance,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeesawOptions {
    pub restarts: usize,
    pub iterations: usize,
    pub tolerance: f64,
    pub seed: u64,
    /// Stop as soon as some run exceeds this value.
    pub stop_above: Option<f64>,
}

impl Default for SeesawOptions {
    fn default() -> Self {
        SeesawOptions {
            restarts: 64,
            iterations: 500,
            tolerance: 1e-12,
            seed: 0x5eed,
            stop_above: None,
        }
    }
}

/// One alternating-maximization run.
#[derive(Clone, Debug)]
pub struct SeesawRun {
    /// Objective after every half-step.
    pub trace: Vec<f64>,
    pub psi: Vec<Complex64>,
    pub phi: Vec<Complex64>,
}

impl SeesawRun {
    pub fn value(&self) -> f64 {
        self.trace.last().copied().unwrap_or(0.0)
    }

    pub fn is_monotone(&self) -> bool {
        self.trace.windows(2).all(|w| w[1] >= w[0] - 1e-12)
    }
}

#[derive(Clone, Debug)]
pub struct SeesawResult {
    pub runs: Vec<SeesawRun>,
}

impl SeesawResult {
    pub fn best(&self) -> f64 {
        self.runs
            .iter()
            .map(SeesawRun::value)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn all_monotone(&self) -> bool {
        self.runs.iter().all(SeesawRun::is_monotone)
    }
}

/// The strings as monomials `(rows, phases)`, weighted by λ; zero weights dropped.
fn weighted_monomials(lam: &DiagonalCoefficients) -> Vec<(f64, Vec<usize>, Vec<Complex64>)> {
    lam.lambda
        .iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(code, x)| {
            let (rows, phases) = PauliString::from_code(code, lam.n).monomial();
            let phases = phases.iter().map(|p| p.to_complex()).collect();
            (x.to_f64().unwrap_or(0.0), rows, phases)
        })
        .collect()
}

fn apply(rows: &[usize], phases: &[Complex64], v: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
    for (c, x) in v.iter().enumerate() {
        out[rows[c]] += phases[c] * x;
    }
    out
}

/// `Σ λ_s (σ_s v)(σ_s v)†`, row-major.
fn dressed(terms: &[(f64, Vec<usize>, Vec<Complex64>)], v: &[Complex64]) -> Vec<Complex64> {
    let d = v.len();
    let mut m = vec![Complex64::new(0.0, 0.0); d * d];
    for (w, rows, phases) in terms {
        let u = apply(rows, phases, v);
        for i in 0..d {
            for j in 0..d {
                m[i * d + j] += *w * u[i] * u[j].conj();
            }
        }
    }
    m
}

/// `Σ λ_s |⟨φ|σ_s|ψ⟩|²`.
pub fn objective(lam: &DiagonalCoefficients, psi: &[Complex64], phi: &[Complex64]) -> f64 {
    weighted_monomials(lam)
        .iter()
        .map(|(w, rows, phases)| {
            let u = apply(rows, phases, psi);
            let a: Complex64 = phi.iter().zip(&u).map(|(x, y)| x.conj() * y).sum();
            w * a.norm_sqr()
        })
        .sum()
}

fn random_unit(rng: &mut ChaCha8Rng, d: usize) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..d)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-3 {
            return v.into_iter().map(|c| c / norm).collect();
        }
    }
}

fn run_once(
    terms: &[(f64, Vec<usize>, Vec<Complex64>)],
    start: Vec<Complex64>,
    opts: &SeesawOptions,
) -> SeesawRun {
    let d = start.len();
    let mut psi = start;
    let mut phi;
    let mut trace = Vec::new();
    let mut last = f64::NEG_INFINITY;
    loop {
        let (v, top) = top_eigenpair(&dressed(terms, &psi), d);
        phi = top;
        trace.push(v);
        let (w, top) = top_eigenpair(&dressed(terms, &phi), d);
        psi = top;
        trace.push(w);
        let done = w - last < opts.tolerance || trace.len() >= 2 * opts.iterations;
        last = w;
        if done {
            break;
        }
    }
    SeesawRun { trace, psi, phi }
}

/// Alternating maximization of `Σ λ_s |⟨φ|σ_s|ψ⟩|²`, starting from each
/// seed ψ and then from random unit vectors.
pub fn seesaw(
    lam: &DiagonalCoefficients,
    opts: &SeesawOptions,
    seeds: &[Vec<Complex64>],
) -> SeesawResult {
    let terms = weighted_monomials(lam);
    let d = 1usize << lam.n;
    let mut runs = Vec::new();
    if terms.is_empty() {
        runs.push(SeesawRun {
            trace: vec![0.0],
            psi: vec![Complex64::new(1.0, 0.0); 1],
            phi: vec![Complex64::new(1.0, 0.0); 1],
        });
        return SeesawResult { runs };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let starts = seeds
        .iter()
        .cloned()
        .chain((0..opts.restarts).map(|_| random_unit(&mut rng, d)));
    for s in starts {
        let run = run_once(&terms, s, opts);
        let stop = opts.stop_above.is_some_and(|b| run.value() > b);
        runs.push(run);
        if stop {
            break;
        }
    }
    SeesawResult { runs }
}

/// Heuristic lower bound on the block-positivity supremum.
pub fn seesaw_sup(lam: &DiagonalCoefficients, restarts: usize, iters: usize) -> f64 {
    let opts = SeesawOptions {
        restarts: restarts.max(1),
        iterations: iters.max(1),
        ..SeesawOptions::default()
    };
    seesaw(lam, &opts, &[]).best()
}

/// Largest δ in (0, 4] for which the single-δ family at p still looks
/// positive to the seesaw, by bisection. Saturating vectors of every
/// quadruple inside I seed each test, so a covered point gives 0.
pub fn delta_max_estimate(pattern: Pattern, p: LatticePoint) -> Result<f64> {
    delta_max_estimate_with(pattern, p, &SeesawOptions::default(), 30)
}

pub fn delta_max_estimate_with(
    pattern: Pattern,
    p: LatticePoint,
    opts: &SeesawOptions,
    steps: usize,
) -> Result<f64> {
    if !pattern.contains(p) {
        return Err(Error::PointNotInPattern(p.alpha(), p.beta()));
    }
    let cat = catalog();
    let seeds: Vec<Vec<Complex64>> = quadruples_inside(pattern)
        .into_iter()
        .filter_map(|i| saturating_vectors(cat.get(i)).ok())
        .map(|(psi, _)| psi)
        .collect();
    let opts = SeesawOptions {
        stop_above: Some(1.0 + SUP_TOL),
        ..opts.clone()
    };
    let feasible = |delta: f64| -> Result<bool> {
        let lam = DiagonalCoefficients::single_delta(pattern, p, exact_f64(delta)?)?;
        Ok(seesaw(&lam, &opts, &seeds).best() <= 1.0 + SUP_TOL)
    };
    if feasible(4.0)? {
        return Ok(4.0);
    }
    let (mut lo, mut hi) = (0.0f64, 4.0f64);
    for _ in 0..steps {
        let mid = 0.5 * (lo + hi);
        if feasible(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // with the 1e-9 slack a saturated quadruple only rules out δ > 4e-9
    Ok(if lo < DELTA_FLOOR { 0.0 } else { lo })
}

/// Signed coefficients of the Γ^t semigroup map before the Størmer shift.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GammaCoefficients {
    pub g00: f64,
    /// At the points (0, i).
    pub g0i: [f64; 3],
    /// At the points (i, 0).
    pub gi0: [f64; 3],
}

const GAMMA_SIGNS: [f64; 3] = [1.0, -1.0, 1.0];

pub fn gamma_t_coefficients(t: f64) -> Result<GammaCoefficients> {
    if !t.is_finite() || t < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "t must be finite and >= 0, got {t}"
        )));
    }
    let e = (-4.0 * t).exp();
    let a = (1.0 + 3.0 * e) / 4.0;
    let b = (3.0 + e) / 4.0;
    let c = (1.0 - e) / 4.0;
    Ok(GammaCoefficients {
        g00: a * b,
        g0i: GAMMA_SIGNS.map(|s| s * a * c),
        gi0: [c * b; 3],
    })
}

impl GammaCoefficients {
    /// Signed coefficient at a lattice point (zero off the axes).
    pub fn at(&self, p: LatticePoint) -> f64 {
        match (p.alpha(), p.beta()) {
            (0, 0) => self.g00,
            (0, i) => self.g0i[i as usize - 1],
            (i, 0) => self.gi0[i as usize - 1],
            _ => 0.0,
        }
    }

    /// `λ = 1/4 − g/μ`.
    pub fn stormer(&self, t: f64, mu: f64) -> Result<DiagonalCoefficients> {
        if mu.is_nan() || mu <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "mu must be positive, got {mu}"
            )));
        }
        let vals: Vec<f64> = LatticePoint::all()
            .map(|p| 0.25 - self.at(p) / mu)
            .collect();
        let mut lam = DiagonalCoefficients::from_f64(2, &vals)?;
        lam.family = Family::Gamma { t, mu };
        Ok(lam)
    }
}

/// `Σ_{s∈I} λ_s(t) − N_I/4` for the shifted Γ^t family with μ = 4.
pub fn gamma_t_expectation(pattern: Pattern, t: f64) -> Result<f64> {
    gamma_t_expectation_with(pattern, t, GAMMA_MU)
}

pub fn gamma_t_expectation_with(pattern: Pattern, t: f64, mu: f64) -> Result<f64> {
    let g = gamma_t_coefficients(t)?;
    if mu.is_nan() || mu <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "mu must be positive, got {mu}"
        )));
    }
    Ok(-pattern.points().map(|p| g.at(p)).sum::<f64>() / mu)
}

/// Coefficients of `V = Σ_{α≠2} v_{α2} σ_{α2} + Σ_{β≠2} v_{2β} σ_{2β}`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhiV {
    entries: Vec<(LatticePoint, Complex64)>,
}

impl PhiV {
    /// Points where V may have support.
    pub fn support() -> [LatticePoint; 6] {
        let p = |a, b| LatticePoint::new(a, b).expect("valid point");
        [p(0, 2), p(1, 2), p(3, 2), p(2, 0), p(2, 1), p(2, 3)]
    }

    pub fn new(entries: &[(LatticePoint, Complex64)]) -> Result<Self> {
        let support = Self::support();
        let mut full: Vec<(LatticePoint, Complex64)> = support
            .iter()
            .map(|&p| (p, Complex64::new(0.0, 0.0)))
            .collect();
        for &(p, v) in entries {
            let slot = full
                .iter_mut()
                .find(|(s, _)| *s == p)
                .ok_or_else(|| Error::InvalidParameter(format!("V has no component at {p}")))?;
            slot.1 += v;
        }
        let norm: f64 = full.iter().map(|(_, v)| v.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalized(format!("sum of |v|^2 is {norm}")));
        }
        Ok(PhiV { entries: full })
    }

    pub fn coefficient(&self, p: LatticePoint) -> Complex64 {
        self.entries
            .iter()
            .find(|(s, _)| *s == p)
            .map_or(Complex64::new(0.0, 0.0), |(_, v)| *v)
    }

    /// Diagonal Choi coefficients `φ_s = (1 − ε_s)/4 − |v_s|²`.
    pub fn diagonal(&self) -> [f64; 16] {
        let mut out = [0.0; 16];
        for p in LatticePoint::all() {
            let flip = if transposition_sign(&p.string()) < 0 {
                0.5
            } else {
                0.0
            };
            out[p.bit() as usize] = flip - self.coefficient(p).norm_sqr();
        }
        out
    }

    /// The operator V on C^4.
    pub fn operator(&self) -> DenseMatrix {
        let mut acc = DenseMatrix::zeros(4, Mode::Float);
        for &(p, v) in &self.entries {
            if v != Complex64::new(0.0, 0.0) {
                acc = acc
                    .add(&dense(&p.string(), Mode::Float).scale(v))
                    .expect("same dimension");
            }
        }
        acc
    }

    /// Størmer-shifted coefficients `1/4 − φ_s/μ` (nonnegative for μ ≥ 2).
    pub fn stormer(&self, mu: f64) -> Result<DiagonalCoefficients> {
        let vals: Vec<f64> = self.diagonal().iter().map(|f| 0.25 - f / mu).collect();
        let mut lam = DiagonalCoefficients::from_f64(2, &vals)?;
        lam.family = Family::PhiV { mu };
        Ok(lam)
    }
}

/// `Tr(ρ_I · id⊗Φ_V[P₊])`, both ways.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhiVValue {
    pub closed_form: f64,
    pub dense: f64,
}

/// Mean value of the Choi matrix of `Φ_V = Tr − T − V†·V` on ρ_I.
/// Returns the closed form after checking it against the dense trace.
pub fn phi_v_witness(pattern: Pattern, v: &PhiV) -> Result<f64> {
    let val = phi_v_values(pattern, v)?;
    if (val.closed_form - val.dense).abs() > 1e-10 {
        return Err(Error::InvalidParameter(format!(
            "closed form {} disagrees with dense trace {}",
            val.closed_form, val.dense
        )));
    }
    Ok(val.closed_form)
}

pub fn phi_v_values(pattern: Pattern, v: &PhiV) -> Result<PhiVValue> {
    let n_i = pattern.len();
    if n_i == 0 {
        return Err(Error::EmptyPattern);
    }
    let diag = v.diagonal();
    let closed_form = pattern
        .points()
        .map(|p| diag[p.bit() as usize])
        .sum::<f64>()
        / n_i as f64;
    let rho = density_matrix(&SigmaDiagonalState::lattice(pattern)?).to_float();
    let choi = phi_v_choi(v);
    let dense = rho.matmul(&choi)?.trace().re;
    Ok(PhiVValue { closed_form, dense })
}

/// `id⊗Φ_V[P₊]` with P₊ normalized on C^4 ⊗ C^4.
pub fn phi_v_choi(v: &PhiV) -> DenseMatrix {
    let d = 4;
    let dim = d * d;
    let mut p_plus = vec![Complex64::new(0.0, 0.0); dim * dim];
    let mut flip = vec![Complex64::new(0.0, 0.0); dim * dim];
    for i in 0..d {
        for j in 0..d {
            p_plus[(i * d + i) * dim + j * d + j] = Complex64::new(0.25, 0.0);
            flip[(i * d + j) * dim + j * d + i] = Complex64::new(0.25, 0.0);
        }
    }
    let p_plus = DenseMatrix::from_float(dim, p_plus).expect("square");
    let flip = DenseMatrix::from_float(dim, flip).expect("square");
    let trace_part = DenseMatrix::identity(dim, Mode::Float).scale(Complex64::new(0.25, 0.0));
    let lift = DenseMatrix::identity(d, Mode::Float).kron(&v.operator());
    let v_part = lift
        .adjoint()
        .matmul(&p_plus)
        .and_then(|m| m.matmul(&lift))
        .expect("same dimension");
    trace_part
        .sub(&flip)
        .and_then(|m| m.sub(&v_part))
        .expect("same dimension")
}

/// `M = Σ_s λ_s sign_s (1⊗σ_s) P₊ (1⊗σ_s) = Σ_s λ_s sign_s P_s`, exact.
pub fn choi_matrix(lam: &DiagonalCoefficients, signs: Option<&[i8]>) -> Result<DenseMatrix> {
    let weights: Vec<BigRational> = match signs {
        None => lam.lambda.clone(),
        Some(s) => {
            if s.len() != lam.lambda.len() {
                return Err(Error::LengthMismatch(lam.lambda.len(), s.len()));
            }
            lam.lambda
                .iter()
                .zip(s)
                .map(|(x, &sg)| x * BigRational::from_integer(sg.into()))
                .collect()
        }
    };
    diagonal_operator(lam.n, &weights)
}

/// Transposition signs `ε_s` of all strings on n qubits.
pub fn transposition_signs(n: usize) -> Vec<i8> {
    PauliString::all(n)
        .map(|s| transposition_sign(&s))
        .collect()
}

/// `Tr(M ρ)` by dense multiplication.
pub fn choi_expectation(m: &DenseMatrix, rho: &SigmaDiagonalState) -> GaussianRational {
    let r = density_matrix(rho);
    let prod = m.matmul(&r).expect("same dimension");
    prod.trace_exact().expect("exact matrices")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::Pattern;

    fn pt(a: u8, b: u8) -> LatticePoint {
        LatticePoint::new(a, b).unwrap()
    }

    fn grid(s: &str) -> Pattern {
        Pattern::parse(s).unwrap()
    }

    const PPT_SEVEN: &str = "..xx\nx..x\n.x.x\n....";
    const PPT_NINE: &str = ".xxx\nx.xx\n..xx\n....";
    const PPT_TEN: &str = "x..x\n.xx.\nxx.x\nxx.x";

    #[test]
    fn witness_value_examples() {
        let i = grid(PPT_SEVEN);
        let r = witness_value(i, &DiagonalCoefficients::trace_map(2)).unwrap();
        assert_eq!(r.lhs, r.threshold);
        assert_eq!(r.verdict, WitnessVerdict::Inconclusive);

        let p = i.points().next().unwrap();
        let lam = DiagonalCoefficients::single_delta(i, p, q(1, 8)).unwrap();
        let r = witness_value(i, &lam).unwrap();
        assert_eq!(r.lhs, q(i.len() as i64, 4) + q(1, 32));

        let zero = DiagonalCoefficients::new(2, vec![BigRational::zero(); 16]).unwrap();
        assert!(witness_value(i, &zero).unwrap().lhs.is_zero());
    }

    #[test]
    fn negative_coefficient_rejected() {
        let mut v = vec![q(1, 16); 16];
        v[3] = q(-1, 16);
        assert_eq!(
            DiagonalCoefficients::new(2, v),
            Err(Error::NegativeCoefficient(3))
        );
    }

    #[test]
    fn seesaw_trace_map_is_one() {
        let r = seesaw(
            &DiagonalCoefficients::trace_map(2),
            &SeesawOptions {
                restarts: 8,
                ..Default::default()
            },
            &[],
        );
        assert!(r.all_monotone());
        assert!((r.best() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn seesaw_single_string() {
        let mut v = vec![BigRational::zero(); 16];
        v[pt(1, 2).bit() as usize] = q(1, 1);
        let lam = DiagonalCoefficients::new(2, v).unwrap();
        assert!((seesaw_sup(&lam, 4, 100) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn quadruple_family_saturates() {
        let cat = catalog();
        for i in 0..cat.len() {
            let quad = cat.get(i);
            let lam = DiagonalCoefficients::on_points(quad.points());
            let (psi, phi) = saturating_vectors(quad).unwrap();
            assert!((objective(&lam, &psi, &phi) - 1.0).abs() < 1e-9);
            let r = seesaw(
                &lam,
                &SeesawOptions {
                    restarts: 0,
                    ..Default::default()
                },
                &[psi],
            );
            assert!(r.best() >= 1.0 - 1e-9);
            assert!(r.best() <= 1.0 + 1e-9);
        }
    }

    #[test]
    fn gamma_coefficients_limits() {
        let g = gamma_t_coefficients(0.0).unwrap();
        assert_eq!(g.g00, 1.0);
        assert!(g.g0i.iter().chain(&g.gi0).all(|&x| x == 0.0));
        let g = gamma_t_coefficients(60.0).unwrap();
        assert!((g.g00 - 3.0 / 16.0).abs() < 1e-15);
        // the suprema are 1/12 (at e^{-4t} = 1/3) and 3/16 (t → ∞), not 1/16
        for k in 0..200 {
            let g = gamma_t_coefficients(k as f64 * 0.05).unwrap();
            assert!(g.g0i.iter().all(|&x| x <= 1.0 / 12.0 + 1e-15));
            assert!(g.gi0.iter().all(|&x| x <= 3.0 / 16.0 + 1e-15));
            assert!(g.g00 <= 1.0 && g.g0i[1] <= 0.0);
        }
        let peak = gamma_t_coefficients(3f64.ln() / 4.0).unwrap();
        assert!((peak.g0i[0] - 1.0 / 12.0).abs() < 1e-15);
        assert!(gamma_t_coefficients(-1.0).is_err());
    }

    #[test]
    fn gamma_exposes_small_ppt_entangled() {
        assert!(gamma_t_expectation(grid(PPT_SEVEN), 0.01).unwrap() > 0.0);
        assert!(gamma_t_expectation(grid(PPT_NINE), 0.01).unwrap() > 0.0);
        for t in [0.0, 0.01, 0.5, 3.0] {
            assert!(gamma_t_expectation(Pattern::FULL, t).unwrap() <= 1e-15);
        }
        let lam = gamma_t_coefficients(0.01)
            .unwrap()
            .stormer(0.01, GAMMA_MU)
            .unwrap();
        let r = witness_value(grid(PPT_SEVEN), &lam).unwrap();
        assert_eq!(r.verdict, WitnessVerdict::EntanglementCertified);
    }

    fn v12(weight: f64) -> PhiV {
        let rest = (1.0 - weight).sqrt();
        PhiV::new(&[
            (pt(1, 2), Complex64::new(weight.sqrt(), 0.0)),
            (pt(2, 0), Complex64::new(0.0, rest)),
        ])
        .unwrap()
    }

    #[test]
    fn phi_v_examples() {
        let i = grid(PPT_TEN);
        assert!((phi_v_witness(i, &v12(1.0)).unwrap() + 0.05).abs() < 1e-12);
        assert!(phi_v_witness(i, &v12(0.5)).unwrap().abs() < 1e-12);
        // (2,0) is not in the pattern, so only v_12 matters
        assert!((phi_v_witness(i, &v12(0.0)).unwrap() - 0.05).abs() < 1e-12);
    }

    #[test]
    fn phi_v_normalization() {
        let bad = PhiV::new(&[(pt(1, 2), Complex64::new(0.5, 0.0))]);
        assert!(matches!(bad, Err(Error::NotNormalized(_))));
        let off = PhiV::new(&[(pt(1, 1), Complex64::new(1.0, 0.0))]);
        assert!(matches!(off, Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn phi_v_stormer_nonnegative() {
        let lam = v12(1.0).stormer(PHI_V_MU).unwrap();
        assert!(lam.lambda().iter().all(|x| !x.is_negative()));
    }

    #[test]
    fn choi_examples() {
        let m = choi_matrix(&DiagonalCoefficients::trace_map(2), None).unwrap();
        assert_eq!(
            m,
            DenseMatrix::identity(16, Mode::Exact).scale_exact(&GaussianRational::real(q(1, 4)))
        );

        let s = PauliString::new(&[1, 2]).unwrap();
        let mut v = vec![BigRational::zero(); 16];
        v[s.code()] = q(1, 1);
        let m = choi_matrix(&DiagonalCoefficients::new(2, v).unwrap(), None).unwrap();
        assert_eq!(m, density_matrix(&SigmaDiagonalState::pure(&s).unwrap()));

        let signs = transposition_signs(2);
        let quarter = DiagonalCoefficients::new(2, vec![q(1, 4); 16]).unwrap();
        let m = choi_matrix(&quarter, Some(&signs)).unwrap();
        let spec = crate::state::hermitian_eigenvalues(&m).unwrap();
        assert!(spec.min_eigenvalue < -0.1);
    }

    #[test]
    fn delta_zero_when_covered() {
        // full lattice: every point lies in a quadruple inside
        let d = delta_max_estimate_with(
            Pattern::FULL,
            pt(0, 0),
            &SeesawOptions {
                restarts: 2,
                ..Default::default()
            },
            12,
        )
        .unwrap();
        assert_eq!(d, 0.0);
        assert!(
            delta_max_estimate(grid(PPT_TEN), pt(2, 3)).is_err()
                || grid(PPT_TEN).contains(pt(2, 3))
        );
    }

    #[test]
    fn delta_positive_at_quadruple_free_point() {
        for g in [PPT_TEN, PPT_SEVEN] {
            let i = grid(g);
            let p = quadruple_free_point(i).unwrap();
            let d = delta_max_estimate(i, p).unwrap();
            assert!(d > 1e-3, "{g}: {d}");
        }
    }
}

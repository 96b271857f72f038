use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use lattice_cli::json;
use lattice_cli::payload::{self, AppError, VEntry, WitnessParams};
use lattice_cli::render;
use lattice_cli::server::{self, AppState};
use lattice_core::classify::{census, classify_with, CensusMode, CensusOptions, ClassifyOptions};
use lattice_core::Pattern;

const EXIT_USAGE: u8 = 2;
const EXIT_IO: u8 = 3;
const EXIT_PORT: u8 = 4;

#[derive(Parser)]
#[command(
    name = "lattice",
    version,
    about = "Entanglement classification of lattice states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify one pattern given as a grid, a hex mask or (a,b) pairs.
    Classify {
        /// Pattern text; read from stdin when omitted or "-".
        pattern: Option<String>,
        /// Also compute the partial-transpose spectrum.
        #[arg(long)]
        spectral: bool,
        /// Estimate δ at a quadruple-free point (seesaw, slow).
        #[arg(long)]
        delta: bool,
        #[arg(long)]
        json: bool,
    },
    /// Classify every nonempty pattern and write census.json and census.csv.
    Census {
        /// Classify one representative per symmetry orbit.
        #[arg(long)]
        orbits: bool,
        /// Output directory.
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long)]
        jobs: Option<usize>,
        /// Skip the spectral cross-check.
        #[arg(long)]
        no_spectral: bool,
    },
    /// List the special quadruples, or those through one point.
    Quadruples {
        point: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate a witness family on a pattern (JSON output).
    Witness {
        pattern: String,
        #[arg(long, value_enum)]
        family: Family,
        /// Point for the delta family, as a,b.
        #[arg(long)]
        point: Option<String>,
        /// δ for the delta family, rational such as 1/8.
        #[arg(long)]
        delta: Option<String>,
        #[arg(long)]
        t: Option<f64>,
        #[arg(long)]
        mu: Option<f64>,
        /// Component of V for phiv, as a,b=re or a,b=re:im; repeatable.
        #[arg(long = "v")]
        v: Vec<String>,
        /// Skip the seesaw supremum estimate.
        #[arg(long)]
        no_sup: bool,
        #[arg(long)]
        restarts: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Serve the JSON API.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        bind: String,
        /// census.json written by `lattice census`, for /census/summary.
        #[arg(long)]
        census: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Delta,
    Gamma,
    Phiv,
}

impl Family {
    fn name(self) -> &'static str {
        match self {
            Family::Delta => "delta",
            Family::Gamma => "gamma",
            Family::Phiv => "phiv",
        }
    }
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn read_pattern(arg: Option<String>) -> Result<String, ExitCode> {
    match arg.as_deref() {
        Some(s) if s != "-" => Ok(s.to_string()),
        _ => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| fail(EXIT_IO, e))?;
            Ok(buf)
        }
    }
}

// Write errors (a closed pipe, say) are ignored rather than panicking.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn print_json(v: &Value) {
    emit(&format!(
        "{}\n",
        serde_json::to_string_pretty(v).expect("serializable")
    ));
}

fn ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1000.0
}

fn parse_v(text: &str) -> Result<VEntry, AppError> {
    let bad = || AppError::Invalid(format!("bad --v {text:?}, expected a,b=re or a,b=re:im"));
    let (p, val) = text.split_once('=').ok_or_else(bad)?;
    let p = payload::parse_point(p)?;
    let (re, im) = match val.split_once(':') {
        Some((r, i)) => (
            r.trim().parse().map_err(|_| bad())?,
            i.trim().parse().map_err(|_| bad())?,
        ),
        None => (val.trim().parse().map_err(|_| bad())?, 0.0),
    };
    Ok(VEntry {
        point: [p.alpha(), p.beta()],
        re,
        im,
    })
}

fn cmd_classify(text: String, spectral: bool, delta: bool, as_json: bool) -> ExitCode {
    let start = Instant::now();
    let pattern = match payload::parse_pattern(&text) {
        Ok(p) => p,
        Err(e) => return fail(EXIT_USAGE, e),
    };
    if as_json {
        match payload::classify(pattern, spectral, delta) {
            Ok(v) => {
                let req = json!({ "pattern": text.trim(), "spectral": spectral, "delta": delta });
                print_json(&json::envelope(req, v, ms(start)));
                ExitCode::SUCCESS
            }
            Err(e) => fail(EXIT_USAGE, e),
        }
    } else {
        let opts = ClassifyOptions {
            spectral,
            delta_estimate: delta,
        };
        match classify_with(pattern, &opts) {
            Ok(c) => {
                emit(&render::classification(&c));
                ExitCode::SUCCESS
            }
            Err(e) => fail(EXIT_USAGE, e),
        }
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), ExitCode> {
    std::fs::write(path, contents).map_err(|e| fail(EXIT_IO, format!("{}: {e}", path.display())))
}

fn cmd_census(orbits: bool, out: PathBuf, jobs: Option<usize>, no_spectral: bool) -> ExitCode {
    if let Err(e) = std::fs::create_dir_all(&out) {
        return fail(EXIT_IO, format!("{}: {e}", out.display()));
    }
    let opts = CensusOptions {
        mode: if orbits {
            CensusMode::Orbits
        } else {
            CensusMode::Raw
        },
        spectral: !no_spectral,
        jobs,
    };
    let start = Instant::now();
    let report = match census(&opts) {
        Ok(r) => r,
        Err(e) => return fail(EXIT_USAGE, e),
    };
    let elapsed = start.elapsed();
    let csv = match json::census_csv(&report) {
        Ok(c) => c,
        Err(e) => return fail(EXIT_IO, e),
    };
    let body = serde_json::to_string_pretty(&json::census(&report)).expect("serializable");
    for (name, contents) in [("census.json", body.as_str()), ("census.csv", csv.as_str())] {
        if let Err(code) = write_file(&out.join(name), contents) {
            return code;
        }
    }
    for (v, n) in &report.totals {
        println!("{:<14} {n}", v.as_str());
    }
    println!("total          {}", report.total());
    println!("orbits         {}", report.orbits.len());
    if let Some(line) = report.spectral_line() {
        println!("spectral agreement {line}");
    }
    let e = &report.equivalence;
    println!(
        "equivalence    {} over {} PPT patterns ({} hit and quadruple-free, {} neither, {} counterexamples)",
        if e.holds() { "holds" } else { "FAILS" },
        e.ppt_patterns,
        e.both,
        e.neither,
        e.counterexamples.len()
    );
    for m in &e.counterexamples {
        println!("  counterexample 0x{m:04x}");
    }
    println!("orbit constant {}", report.orbit_constant);
    println!("lp only        {}", report.lp_only);
    println!("elapsed        {:.1}s", elapsed.as_secs_f64());
    ExitCode::SUCCESS
}

fn cmd_quadruples(point: Option<String>, as_json: bool) -> ExitCode {
    let start = Instant::now();
    let p = match point.as_deref().map(payload::parse_point).transpose() {
        Ok(p) => p,
        Err(e) => return fail(EXIT_USAGE, e),
    };
    if as_json {
        print_json(&json::envelope(
            json!({ "point": point }),
            payload::quadruples(p),
            ms(start),
        ));
    } else {
        emit(&render::quadruples(p));
    }
    ExitCode::SUCCESS
}

#[allow(clippy::too_many_arguments)]
fn cmd_witness(
    text: String,
    family: Family,
    point: Option<String>,
    delta: Option<String>,
    t: Option<f64>,
    mu: Option<f64>,
    v: Vec<String>,
    no_sup: bool,
    restarts: Option<usize>,
    seed: Option<u64>,
) -> ExitCode {
    let start = Instant::now();
    let pattern: Pattern = match payload::parse_pattern(&text) {
        Ok(p) => p,
        Err(e) => return fail(EXIT_USAGE, e),
    };
    let build = || -> Result<WitnessParams, AppError> {
        let point = point
            .as_deref()
            .map(payload::parse_point)
            .transpose()?
            .map(|p| [p.alpha(), p.beta()]);
        Ok(WitnessParams {
            point,
            delta: delta.clone(),
            t,
            mu,
            v: v.iter().map(|s| parse_v(s)).collect::<Result<_, _>>()?,
            sup: no_sup.then_some(false),
            restarts,
            seed,
        })
    };
    let params = match build() {
        Ok(p) => p,
        Err(e) => return fail(EXIT_USAGE, e),
    };
    match payload::witness(pattern, family.name(), &params) {
        Ok(result) => {
            let req = json!({ "pattern": text.trim(), "family": family.name() });
            print_json(&json::envelope(req, result, ms(start)));
            ExitCode::SUCCESS
        }
        Err(e) => fail(EXIT_USAGE, e),
    }
}

fn load_census(path: &Path) -> Result<Value, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    v.get("summary")
        .cloned()
        .ok_or_else(|| format!("{}: no summary section", path.display()))
}

fn cmd_serve(port: u16, bind: String, census: Option<PathBuf>) -> ExitCode {
    let census = match census.as_deref().map(load_census).transpose() {
        Ok(c) => c,
        Err(e) => return fail(EXIT_IO, e),
    };
    let rt = match tokio::runtime::Runtime::new() {
        Ok(rt) => rt,
        Err(e) => return fail(EXIT_IO, e),
    };
    match rt.block_on(server::serve(&bind, port, AppState { census })) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.port_busy() => fail(EXIT_PORT, e),
        Err(e) => fail(EXIT_IO, e),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match cli.command {
        Command::Classify {
            pattern,
            spectral,
            delta,
            json,
        } => match read_pattern(pattern) {
            Ok(text) => cmd_classify(text, spectral, delta, json),
            Err(code) => code,
        },
        Command::Census {
            orbits,
            out,
            jobs,
            no_spectral,
        } => cmd_census(orbits, out, jobs, no_spectral),
        Command::Quadruples { point, json } => cmd_quadruples(point, json),
        Command::Witness {
            pattern,
            family,
            point,
            delta,
            t,
            mu,
            v,
            no_sup,
            restarts,
            seed,
        } => cmd_witness(
            pattern, family, point, delta, t, mu, v, no_sup, restarts, seed,
        ),
        Command::Serve { port, bind, census } => cmd_serve(port, bind, census),
    }
}

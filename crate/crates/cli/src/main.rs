//! `floermod` — command-line workbench over `floermod-core`.
//!
//! Exit codes: 0 on success, 2 on schema or input errors, 3 on numerical
//! non-convergence. All reports are JSON with a `"schema": 1` field and embed
//! the seed; output is byte-identical across repeated runs on the same input.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use floermod_core::catalog::{self, LagrangianObject};
use floermod_core::curves::{self, CurveFile, Family, PlaneCurve};
use floermod_core::hochschild;
use floermod_core::kumod::{self, GradedKuModule, JordanBlock, KuError};
use floermod_core::novikov::{self, Exp, NovikovNum};
use floermod_core::potentials::{self, CriticalLocusReport, LaurentPoly};
use floermod_core::selftest;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

#[derive(Parser)]
#[command(name = "floermod", version, about = "Floer-module computations over the Novikov field")]
struct Cli {
    /// Seed for randomized oracles; embedded in reports.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Truncate Novikov coefficients of loaded modules at this exponent
    /// (integer or `num/den`).
    #[arg(long, global = true)]
    cutoff: Option<String>,
    /// Denominator used when quantizing real areas to exact exponents.
    #[arg(long = "quantize-denominator", global = true, default_value_t = novikov::DEFAULT_QUANTIZE_DENOM)]
    quantize_denominator: i128,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Monotonicity parameter of the torus over a closed plane curve.
    Tau {
        /// Curve file (`{"schema":1,"closed":...,"segments":[...]}`).
        #[arg(long)]
        curve: PathBuf,
        #[arg(long)]
        n: u32,
        /// Torus family: LC or TC.
        #[arg(long)]
        family: String,
        /// Write an SVG sketch of the curve.
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// Representative curve realizing a given tau.
    Curve {
        /// Target tau, as a decimal or `num/den`.
        #[arg(long)]
        tau: String,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        family: String,
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// Superpotential of the family and its critical locus.
    Potential {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        family: String,
        /// Grid points per phase circle when sampling the unitary torus.
        #[arg(long, default_value_t = 8)]
        grid: usize,
    },
    /// Inspect a module file: dimensions, block decomposition, generators.
    Module {
        #[arg(long)]
        module: PathBuf,
    },
    /// Ext dimensions between two modules.
    Ext {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// Floer-theoretic displaceability verdict for two catalog objects.
    Displace {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// Catalog objects matching the split-generators of a module.
    Match {
        #[arg(long)]
        module: PathBuf,
        /// Cross-check against this n (defaults to the module's own).
        #[arg(long)]
        n: Option<u32>,
        /// Prefer T3-torus objects for negative-valuation eigenvalues (n = 3).
        #[arg(long = "prefer-t3")]
        prefer_t3: bool,
    },
    /// Formality certificate for the endomorphism algebra at a weight cap.
    Formality {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = hochschild::DEFAULT_CAP)]
        cap: usize,
        /// Also write the report to this path.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Run the full acceptance suite; nonzero exit on any failure.
    Selftest,
}

/// Error carrying the process exit code mandated for its class.
struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn schema(msg: impl Into<String>) -> Self {
        CliError { code: 2, message: msg.into() }
    }

    fn numerical(msg: impl Into<String>) -> Self {
        CliError { code: 3, message: msg.into() }
    }

    fn from_curve(e: curves::CurveError) -> Self {
        use curves::CurveError::*;
        match e {
            QuadratureNotConverged(_) | BranchContinuationFailed(_) | TooCloseToCritical(_)
            | AtCriticalValue => CliError::numerical(e.to_string()),
            NotClosed | Disconnected | SelfIntersecting | TauOutOfRange(_) => {
                CliError::schema(e.to_string())
            }
        }
    }

    fn from_ku(e: KuError) -> Self {
        match e {
            KuError::IllConditioned => CliError::numerical(e.to_string()),
            _ => CliError::schema(e.to_string()),
        }
    }

    fn from_catalog(e: catalog::CatalogError) -> Self {
        match e {
            catalog::CatalogError::Module(m) => CliError::from_ku(m),
            catalog::CatalogError::Arithmetic => CliError::numerical(e.to_string()),
            _ => CliError::schema(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let seed = cli.seed;
    let cutoff = cli.cutoff.as_deref().map(parse_exp).transpose()?;
    let qden = cli.quantize_denominator;
    if qden <= 0 {
        return Err(CliError::schema("--quantize-denominator must be positive"));
    }
    match cli.cmd {
        Cmd::Tau { curve, n, family, plot } => {
            let family = parse_family(&family)?;
            let c = load_curve(&curve)?;
            let tau = curves::tau_of_curve(&c, n, family).map_err(CliError::from_curve)?;
            if let Some(p) = plot {
                write_file(&p, &curves::plot_svg(&c))?;
            }
            let q = novikov::quantize(tau, qden);
            let report = TauReport {
                schema: 1,
                seed,
                n,
                family,
                tau,
                tau_quantized: (*q.numer(), *q.denom()),
                maslov_index: curves::maslov_index(n, family),
            };
            emit(&cli.out, &report)
        }
        Cmd::Curve { tau, n, family, plot } => {
            let family = parse_family(&family)?;
            let tau = parse_real(&tau)?;
            let c = curves::curve_of_tau(tau, n, family).map_err(CliError::from_curve)?;
            let achieved = curves::tau_of_curve(&c, n, family).map_err(CliError::from_curve)?;
            if let Some(p) = plot {
                write_file(&p, &curves::plot_svg(&c))?;
            }
            let report = CurveReport {
                schema: 1,
                seed,
                n,
                family,
                tau_requested: tau,
                tau_achieved: achieved,
                curve: CurveFile { schema: 1, closed: c.closed, segments: c.segments },
            };
            emit(&cli.out, &report)
        }
        Cmd::Potential { n, family, grid } => {
            let family = parse_family(&family)?;
            let w = match family {
                Family::LC => {
                    if n < 2 {
                        return Err(CliError::schema("LC potential requires n >= 2"));
                    }
                    potentials::potential_lc(n)
                }
                Family::TC => {
                    if n != 3 {
                        return Err(CliError::schema("TC potential requires n = 3"));
                    }
                    potentials::potential_tc()
                }
            };
            let locus = potentials::critical_locus_check(&w, grid);
            let report = PotentialReport { schema: 1, seed, n, family, potential: w, critical_locus: locus };
            emit(&cli.out, &report)
        }
        Cmd::Module { module } => {
            let m = load_module(&module, cutoff)?;
            let jd = kumod::jordan_decompose(&m).map_err(CliError::from_ku)?;
            let generators = kumod::split_decompose(&m)
                .map_err(CliError::from_ku)?
                .into_iter()
                .map(|(g, mult)| generator_json(&g, mult))
                .collect();
            let report = ModuleReport {
                schema: 1,
                seed,
                n: m.n,
                dim_even: m.dim_even,
                dim_odd: m.dim_odd,
                u_parity: m.u_parity(),
                blocks: jd.blocks,
                residual: jd.residual,
                generators,
            };
            emit(&cli.out, &report)
        }
        Cmd::Ext { a, b } => {
            let ma = load_module(&a, cutoff)?;
            let mb = load_module(&b, cutoff)?;
            let ext = kumod::ext(&ma, &mb).map_err(CliError::from_ku)?;
            emit(&cli.out, &ExtReport { schema: 1, seed, ext: [ext.0, ext.1] })
        }
        Cmd::Displace { a, b } => {
            let oa = load_object(&a)?;
            let ob = load_object(&b)?;
            let rep = catalog::displaceability_report(&oa, &ob).map_err(CliError::from_catalog)?;
            emit(&cli.out, &DisplaceReport { schema: 1, seed, report: rep })
        }
        Cmd::Match { module, n, prefer_t3 } => {
            let m = load_module(&module, cutoff)?;
            if let Some(n) = n {
                if n != m.n {
                    return Err(CliError::schema(format!(
                        "--n {} does not match the module's n = {}",
                        n, m.n
                    )));
                }
            }
            let objects = catalog::match_generators(&m, prefer_t3).map_err(CliError::from_catalog)?;
            emit(&cli.out, &MatchReport { schema: 1, seed, n: m.n, prefer_t3, objects })
        }
        Cmd::Formality { n, cap, report } => {
            let rep = hochschild::formality_certificate(n, cap).map_err(|e| match e {
                hochschild::HochschildError::Module(m) => CliError::from_ku(m),
                other => CliError::schema(other.to_string()),
            })?;
            let out = FormalityOut { schema: 1, seed, report: rep };
            if let Some(p) = report {
                write_file(&p, &to_json(&out)?)?;
            }
            emit(&cli.out, &out)
        }
        Cmd::Selftest => {
            let mut ok = true;
            for (i, (name, f)) in selftest::criteria().into_iter().enumerate() {
                let r = selftest::run_criterion(i + 1, name, f);
                println!(
                    "criterion {:2} [{}] {} — {} ({:.2} s)",
                    r.index,
                    if r.passed { "PASS" } else { "FAIL" },
                    r.name,
                    r.detail,
                    r.seconds
                );
                ok &= r.passed;
            }
            if ok {
                Ok(ExitCode::SUCCESS)
            } else {
                Err(CliError::schema("self-test criteria failed"))
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct TauReport {
    schema: u32,
    seed: u64,
    n: u32,
    family: Family,
    tau: f64,
    tau_quantized: (i128, i128),
    maslov_index: u32,
}

#[derive(Serialize)]
struct CurveReport {
    schema: u32,
    seed: u64,
    n: u32,
    family: Family,
    tau_requested: f64,
    tau_achieved: f64,
    curve: CurveFile,
}

#[derive(Serialize)]
struct PotentialReport {
    schema: u32,
    seed: u64,
    n: u32,
    family: Family,
    potential: LaurentPoly,
    critical_locus: CriticalLocusReport,
}

#[derive(Serialize)]
struct ModuleReport {
    schema: u32,
    seed: u64,
    n: u32,
    dim_even: usize,
    dim_odd: usize,
    u_parity: u8,
    blocks: Vec<JordanBlock>,
    residual: f64,
    generators: Vec<GeneratorJson>,
}

#[derive(Serialize)]
struct GeneratorJson {
    kind: &'static str,
    alpha: NovikovNum,
    #[serde(skip_serializing_if = "Option::is_none")]
    parity: Option<u8>,
    tower_depth: usize,
    multiplicity: usize,
}

#[derive(Serialize)]
struct ExtReport {
    schema: u32,
    seed: u64,
    ext: [usize; 2],
}

#[derive(Serialize)]
struct DisplaceReport {
    schema: u32,
    seed: u64,
    #[serde(flatten)]
    report: catalog::DisplaceabilityReport,
}

#[derive(Serialize)]
struct MatchReport {
    schema: u32,
    seed: u64,
    n: u32,
    prefer_t3: bool,
    objects: Vec<LagrangianObject>,
}

#[derive(Serialize)]
struct FormalityOut {
    schema: u32,
    seed: u64,
    #[serde(flatten)]
    report: hochschild::FormalityReport,
}

fn generator_json(g: &kumod::Generator, mult: usize) -> GeneratorJson {
    match g {
        kumod::Generator::S { alpha, parity, tower_depth } => GeneratorJson {
            kind: "S",
            alpha: alpha.clone(),
            parity: Some(*parity),
            tower_depth: *tower_depth,
            multiplicity: mult,
        },
        kumod::Generator::STilde { alpha, tower_depth } => GeneratorJson {
            kind: "STilde",
            alpha: alpha.clone(),
            parity: None,
            tower_depth: *tower_depth,
            multiplicity: mult,
        },
    }
}

// ---------------------------------------------------------------------------
// Input files
// ---------------------------------------------------------------------------

#[derive(Deserialize)]
struct ModuleFile {
    schema: u32,
    module: GradedKuModule,
}

#[derive(Deserialize)]
struct ObjectFile {
    schema: u32,
    object: LagrangianObject,
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::schema(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents)
        .map_err(|e| CliError::schema(format!("cannot write {}: {e}", path.display())))
}

fn load_curve(path: &Path) -> Result<PlaneCurve, CliError> {
    let text = read_file(path)?;
    let f: CurveFile = serde_json::from_str(&text)
        .map_err(|e| CliError::schema(format!("{}: {e}", path.display())))?;
    if f.schema != 1 {
        return Err(CliError::schema(format!("{}: unsupported schema {}", path.display(), f.schema)));
    }
    PlaneCurve::new(f.segments, f.closed)
        .map_err(|e| CliError::schema(format!("{}: {e}", path.display())))
}

fn load_module(path: &Path, cutoff: Option<Exp>) -> Result<GradedKuModule, CliError> {
    let text = read_file(path)?;
    let f: ModuleFile = serde_json::from_str(&text)
        .map_err(|e| CliError::schema(format!("{}: {e}", path.display())))?;
    if f.schema != 1 {
        return Err(CliError::schema(format!("{}: unsupported schema {}", path.display(), f.schema)));
    }
    let m = f.module;
    match cutoff {
        None => Ok(m),
        Some(c) => {
            let u = m.u.map(|x| x.with_cutoff(Some(c)));
            GradedKuModule::new(m.n, m.dim_even, m.dim_odd, u)
                .map_err(|e| CliError::schema(e.to_string()))
        }
    }
}

fn load_object(path: &Path) -> Result<LagrangianObject, CliError> {
    let text = read_file(path)?;
    let f: ObjectFile = serde_json::from_str(&text)
        .map_err(|e| CliError::schema(format!("{}: {e}", path.display())))?;
    if f.schema != 1 {
        return Err(CliError::schema(format!("{}: unsupported schema {}", path.display(), f.schema)));
    }
    Ok(f.object)
}

// ---------------------------------------------------------------------------
// Flag parsing and output
// ---------------------------------------------------------------------------

fn parse_family(s: &str) -> Result<Family, CliError> {
    match s {
        "LC" => Ok(Family::LC),
        "TC" => Ok(Family::TC),
        _ => Err(CliError::schema(format!("unknown family {s:?}; expected LC or TC"))),
    }
}

/// Parse an exact exponent: `8`, `-3/2`, ...
fn parse_exp(s: &str) -> Result<Exp, CliError> {
    let parse_int =
        |t: &str| t.trim().parse::<i128>().map_err(|e| CliError::schema(format!("{s:?}: {e}")));
    match s.split_once('/') {
        Some((num, den)) => {
            let d = parse_int(den)?;
            if d == 0 {
                return Err(CliError::schema(format!("{s:?}: zero denominator")));
            }
            Ok(Ratio::new(parse_int(num)?, d))
        }
        None => Ok(Ratio::from_integer(parse_int(s)?)),
    }
}

/// Parse a real parameter given as a decimal or a `num/den` rational.
fn parse_real(s: &str) -> Result<f64, CliError> {
    if s.contains('/') {
        let e = parse_exp(s)?;
        return Ok(*e.numer() as f64 / *e.denom() as f64);
    }
    s.trim().parse::<f64>().map_err(|e| CliError::schema(format!("{s:?}: {e}")))
}

fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::schema(format!("serialization failed: {e}")))?;
    text.push('\n');
    Ok(text)
}

fn emit<T: Serialize>(out: &Option<PathBuf>, value: &T) -> Result<ExitCode, CliError> {
    let text = to_json(value)?;
    match out {
        Some(p) => write_file(p, &text)?,
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

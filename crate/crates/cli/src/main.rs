use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use ultrafine::chain::{PerturbationConfig, SamplingConfig};
use ultrafine::format::{load_algebra_file, report_to_json};
use ultrafine::lie::{find_jh_flag, roots, Functional, JordanHolderFlag, LieAlgebra};
use ultrafine::linalg::Subspace;
use ultrafine::orbits::nilpotent_cross_section;
use ultrafine::polarize::{check_polarization, descending_sequence, pukanszky_containment_check};
use ultrafine::scalar::{format_rational, Rational};
use ultrafine::stratify::layer_label;
use ultrafine::{solvability_report, Error};

const EXIT_USAGE: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_INVARIANT: u8 = 3;
const EXIT_OPENNESS: u8 = 4;

/// Fine and ultrafine coadjoint layers of completely solvable Lie algebras.
///
/// INPUT is a JSON or TOML algebra file, or `catalog:<name>`. Functionals
/// are read in flag coordinates unless --defining-basis is given.
#[derive(Parser, Debug)]
#[command(name = "ultrafine", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Print a human-readable summary on stderr.
    #[arg(long, global = true)]
    verbose: bool,

    /// Read functionals in the defining basis instead of the flag basis.
    #[arg(long, global = true)]
    defining_basis: bool,

    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Tolerance for floating-point checks on non-nilpotent algebras.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tolerance: f64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate an algebra and its flag, and print the roots.
    Check { input: String },
    /// Print the layer label of a functional.
    Layer {
        input: String,
        /// Comma-separated rationals, e.g. `1,0,-1/2`.
        #[arg(allow_hyphen_values = true)]
        xi: String,
    },
    /// Print the Vergne polarization, its descending sequence, and checks.
    Polarize {
        input: String,
        #[arg(allow_hyphen_values = true)]
        xi: String,
        /// Sample count for the Pukánszky containment check.
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Move a functional to the canonical point of its orbit (nilpotent only).
    OrbitRep {
        input: String,
        #[arg(allow_hyphen_values = true)]
        xi: String,
    },
    /// Enumerate layers, order them into a chain, and check openness.
    Report {
        input: String,
        #[arg(long, default_value_t = 2000)]
        samples: usize,
        /// Number of halving steps for perturbations.
        #[arg(long, default_value_t = 20)]
        perturb: u32,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvariantViolation(_) | Error::ZeroingStepUnsolvable { .. } => EXIT_INVARIANT,
            _ => EXIT_VALIDATION,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type CliResult = Result<u8, Failure>;

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
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn load(input: &str) -> Result<(LieAlgebra, Option<JordanHolderFlag>), Failure> {
    let file = load_algebra_file(input)?;
    let alg = file.to_algebra()?;
    let flag = file.to_flag(&alg)?;
    Ok((alg, flag))
}

fn load_with_flag(input: &str) -> Result<JordanHolderFlag, Failure> {
    let (alg, flag) = load(input)?;
    match flag {
        Some(f) => Ok(f),
        None => Ok(find_jh_flag(&alg)?),
    }
}

fn read_functional(cli: &Cli, flag: &JordanHolderFlag, xi: &str) -> Result<Functional, Failure> {
    let xi = Functional::parse(xi)?;
    if xi.dim() != flag.dim() {
        return Err(Error::DimensionMismatch {
            expected: flag.dim(),
            found: xi.dim(),
        }
        .into());
    }
    if cli.defining_basis {
        Ok(flag.functional_to_flag(&xi)?)
    } else {
        Ok(xi)
    }
}

fn emit(v: &Value) {
    write_stdout(&format!("{}\n", serde_json::to_string_pretty(v).expect("serializable")));
}

fn write_stdout(s: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(s.as_bytes()).and_then(|_| out.flush());
}

fn rationals(v: &[Rational]) -> Value {
    v.iter().map(format_rational).collect::<Vec<_>>().into()
}

fn subspace_json(s: &Subspace<Rational>) -> Value {
    serde_json::to_value(s).expect("serializable")
}

fn flag_json(flag: &JordanHolderFlag) -> Value {
    json!({
        "basis": flag.basis_names(),
        "matrix": flag.basis_rows().iter().map(|r| rationals(r)).collect::<Vec<_>>(),
    })
}

fn run(cli: &Cli) -> CliResult {
    match &cli.command {
        Command::Check { input } => check(cli, input),
        Command::Layer { input, xi } => {
            let flag = load_with_flag(input)?;
            let xi = read_functional(cli, &flag, xi)?;
            let label = layer_label(&flag, &roots(&flag), &xi)?;
            if cli.verbose {
                eprintln!("{}: orbit dimension {}", flag.algebra().name(), label.orbit_dim());
            }
            emit(&serde_json::to_value(&label).expect("serializable"));
            Ok(0)
        }
        Command::Polarize { input, xi, samples } => {
            let flag = load_with_flag(input)?;
            let xi = read_functional(cli, &flag, xi)?;
            let trace = descending_sequence(&flag, &xi)?;
            let p = trace.polarization().clone();
            let checks = check_polarization(&flag, &xi, &p)?;
            let puk = pukanszky_containment_check(&flag, &xi, &p, *samples, cli.tolerance, cli.seed)?;
            if cli.verbose {
                eprintln!(
                    "p = {} (dim {}), d = {}, max residual {:e}",
                    p,
                    p.dim(),
                    trace.d,
                    puk.max_residual
                );
            }
            emit(&json!({
                "polarization": subspace_json(&p),
                "trace": {
                    "d": trace.d,
                    "chain": trace.chain.iter().map(subspace_json).collect::<Vec<_>>(),
                    "i": trace.i,
                    "j": trace.j,
                },
                "check": checks,
                "pukanszky": {
                    "samples": puk.samples,
                    "exact": puk.exact,
                    "max_residual_approx": puk.max_residual,
                    "within_tolerance": puk.within_tolerance,
                    "dimension_count_holds": puk.dimension_count_holds,
                },
            }));
            if !checks.is_polarization() || !checks.contains_stabilizer || !puk.within_tolerance || !puk.dimension_count_holds {
                return Err(Failure {
                    code: EXIT_INVARIANT,
                    message: "the Vergne polarization failed a polarization check".into(),
                });
            }
            Ok(0)
        }
        Command::OrbitRep { input, xi } => {
            let flag = load_with_flag(input)?;
            let xi = read_functional(cli, &flag, xi)?;
            let rep = nilpotent_cross_section(&flag, &xi)?;
            if cli.verbose {
                eprintln!("{} -> {} using {} factor(s)", xi, rep.representative, rep.word.len());
            }
            emit(&serde_json::to_value(&rep).expect("serializable"));
            Ok(0)
        }
        Command::Report { input, samples, perturb } => {
            let flag = load_with_flag(input)?;
            let sampling = SamplingConfig {
                samples: *samples,
                seed: cli.seed,
                ..SamplingConfig::default()
            };
            let perturbation = PerturbationConfig {
                depth: *perturb,
                seed: cli.seed,
                ..PerturbationConfig::default()
            };
            let report = solvability_report(&flag, &sampling, &perturbation)?;
            write_stdout(&report_to_json(&report));
            if cli.verbose {
                eprintln!("{}: chain length {} (upper bound)", report.algebra.name, report.chain_length);
                for (r, l) in report.layers.iter().enumerate() {
                    eprintln!(
                        "  L{}: k={:?} e={:?} orbit_dim={} samples={}",
                        r + 1,
                        l.label.fine.0,
                        l.label.ultrafine.e,
                        l.orbit_dim,
                        l.sample_count
                    );
                }
                eprintln!(
                    "  openness: {} perturbations, {} violation(s)",
                    report.openness.checked,
                    report.openness.violations.len()
                );
            }
            Ok(if report.openness.passed() { 0 } else { EXIT_OPENNESS })
        }
    }
}

fn check(cli: &Cli, input: &str) -> CliResult {
    let (alg, given) = load(input)?;
    let flag = match given {
        Some(f) => Ok(f),
        None => find_jh_flag(&alg),
    };
    let nilpotent = alg.is_nilpotent();
    let out = match flag {
        Ok(flag) => {
            let classification = if nilpotent { "nilpotent" } else { "completely solvable" };
            json!({
                "algebra": alg.name(),
                "dim": alg.dim(),
                "basis": alg.basis_names(),
                "classification": classification,
                "unimodular": alg.is_unimodular(),
                "flag": flag_json(&flag),
                "roots": roots(&flag),
            })
        }
        Err(Error::FlagNotFound(msg)) => json!({
            "algebra": alg.name(),
            "dim": alg.dim(),
            "basis": alg.basis_names(),
            "classification": "flag not found",
            "unimodular": alg.is_unimodular(),
            "flag": Value::Null,
            "roots": Value::Null,
            "message": msg,
        }),
        Err(e) => return Err(e.into()),
    };
    if cli.verbose {
        eprintln!("{}: {}", alg.name(), out["classification"].as_str().unwrap_or_default());
    }
    emit(&out);
    Ok(0)
}

use std::collections::BTreeMap;
use std::fs;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use coxl2::complexes::{
    barycentric_subdivision, even_subcomplex, is_ghs, odd_removal_chain, rational_homology,
    to_json, write_complex, Complex, ComplexFile, Tiebreak,
};
use coxl2::davis::{
    read_weighted_complex, write_weighted_complex, BoundaryCondition, CubeCatalog, Restriction,
    WeightedComplex,
};
use coxl2::harness::{self, ComplexExpr, Scenario, SuiteBudget};
use coxl2::racg::{growth_series, Ball, CoxeterSystem, WeightAssignment};
use coxl2::spectral::{attach_checks, default_eps_grid, vn_betti_estimate, EstimatorOptions};
use coxl2::{Error, Result};
use serde_json::{json, Value};

/// Right-angled Coxeter groups, Davis complexes and weighted L²-Betti numbers.
///
/// Worker threads are taken from COXL2_WORKERS (default: all cores).
/// Exit codes: 0 pass, 1 verdict failure, 2 configuration error.
#[derive(Parser)]
#[command(name = "coxl2", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write its report directory.
    Run {
        scenario: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the verification suite.
    Verify {
        #[arg(long, default_value = "default")]
        budget: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build and inspect simplicial complexes.
    #[command(subcommand)]
    Complex(ComplexCmd),
    /// Balls and growth series of the Coxeter group.
    #[command(subcommand)]
    Racg(RacgCmd),
    /// Truncations of the Davis complex.
    #[command(subcommand)]
    Davis(DavisCmd),
    /// Weighted L²-Betti number estimates.
    #[command(subcommand)]
    Betti(BettiCmd),
    /// Identity checks on a report.
    #[command(subcommand)]
    Invariants(InvariantsCmd),
}

/// A complex file or a builder expression such as `subdivide(boundary_simplex(3))`.
#[derive(Args)]
struct Input {
    complex: String,
}

impl Input {
    fn load(&self) -> Result<Complex> {
        load_complex(&self.complex)
    }
}

fn load_complex(text: &str) -> Result<Complex> {
    if Path::new(text).is_file() {
        return coxl2::complexes::read_complex(Path::new(text));
    }
    text.parse::<ComplexExpr>()
        .map_err(|_| {
            Error::Config(format!(
                "`{text}` is neither a file nor a builder expression"
            ))
        })?
        .eval(Path::new("."))
}

#[derive(Subcommand)]
enum ComplexCmd {
    /// f-vector, flagness, homology and grading.
    Info(Input),
    /// Barycentric subdivision, graded by face dimension.
    Subdivide {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Full subcomplex on the even-graded vertices.
    Even {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Odd-removal chain down to the even part.
    Chain {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        reverse: bool,
    },
    /// Generalized homology sphere certificate.
    Ghs(Input),
    /// Link of a vertex.
    Link {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        vertex: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum RacgCmd {
    /// Shells of the ball of radius R as normal-form words.
    Ball {
        #[arg(long)]
        complex: String,
        #[arg(long)]
        radius: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Uniform growth series as numerator/denominator coefficients.
    Growth {
        #[arg(long)]
        complex: String,
        #[arg(long)]
        uniform: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum DavisCmd {
    /// Assemble a truncated weighted cochain complex and dump it.
    Build {
        #[arg(long)]
        complex: String,
        #[arg(long)]
        radius: usize,
        /// Weight spec (`1/3`, `a=1/2,b=1/3`) or a JSON file holding one.
        #[arg(long)]
        q: String,
        #[arg(long, default_value = "neumann")]
        bc: BoundaryCondition,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum BettiCmd {
    /// Estimate one degree from a dumped complex.
    Estimate {
        #[arg(long)]
        wc: PathBuf,
        #[arg(long)]
        degree: usize,
        /// `default` or a comma-separated list of thresholds.
        #[arg(long, default_value = "default")]
        eps_grid: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a sweep config (scenario format) into a report directory.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum InvariantsCmd {
    /// Recompute the identity checks of a report directory.
    Check {
        #[arg(long)]
        report: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => Ok(fs::write(p, text)?),
        None => {
            let mut stdout = std::io::stdout().lock();
            match writeln!(stdout, "{}", text.trim_end()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
                _ => Ok(()),
            }
        }
    }
}

fn emit_complex(out: Option<&Path>, c: &Complex) -> Result<()> {
    match out {
        Some(p) => write_complex(p, c),
        None => emit(None, &to_json(c)?),
    }
}

fn weights(sys: &CoxeterSystem, spec: &str) -> Result<WeightAssignment> {
    if !Path::new(spec).is_file() {
        return WeightAssignment::parse(sys, spec);
    }
    let v: Value = serde_json::from_str(&fs::read_to_string(spec)?)?;
    match v {
        Value::String(s) => WeightAssignment::parse(sys, &s),
        Value::Number(n) => WeightAssignment::parse(sys, &n.to_string()),
        Value::Object(m) => {
            let mut map = BTreeMap::new();
            for (k, v) in m {
                let text = match v {
                    Value::String(s) => s,
                    other => other.to_string(),
                };
                map.insert(k, coxl2::rational::parse_q(&text)?);
            }
            WeightAssignment::from_map(sys, &map)
        }
        _ => Err(Error::Config(format!(
            "{spec}: expected a weight string or an object"
        ))),
    }
}

/// `Ok(true)` is a pass, `Ok(false)` a verdict failure.
fn dispatch(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Run { scenario, out } => {
            let s = Scenario::load(&scenario)?;
            let base = scenario.parent().unwrap_or(Path::new("."));
            let complex = s.build(base)?;
            let report = harness::run(&s, base)?;
            let dir = out.unwrap_or_else(|| PathBuf::from(format!("report-{}", s.name)));
            harness::write_report_dir(&dir, &report, &complex)?;
            emit(None, &harness::summary_text(&report))?;
            Ok(report.passed())
        }
        Command::Verify { budget, out } => {
            let b = SuiteBudget::named(&budget)?;
            let report = harness::verify_suite(&b)?;
            if let Some(dir) = out {
                fs::create_dir_all(&dir)?;
                fs::write(
                    dir.join("suite.json"),
                    serde_json::to_string_pretty(&report)? + "\n",
                )?;
                fs::write(dir.join("summary.txt"), report.summary())?;
            }
            emit(None, &report.summary())?;
            Ok(report.passed())
        }
        Command::Complex(cmd) => complex_cmd(cmd).map(|_| true),
        Command::Racg(cmd) => racg_cmd(cmd).map(|_| true),
        Command::Davis(DavisCmd::Build {
            complex,
            radius,
            q,
            bc,
            out,
        }) => {
            let l = load_complex(&complex)?;
            let sys = CoxeterSystem::from_complex(&l)?;
            let w = weights(&sys, &q)?;
            let catalog = CubeCatalog::build(&sys, radius)?;
            let wc = WeightedComplex::assemble(&catalog, &w, bc, Restriction::Full)?;
            let mut f = BufWriter::new(fs::File::create(&out)?);
            write_weighted_complex(&wc, &mut f)?;
            eprintln!("cells per dimension: {:?}", wc.counts());
            Ok(true)
        }
        Command::Betti(BettiCmd::Estimate {
            wc,
            degree,
            eps_grid,
            out,
        }) => {
            let wc = read_weighted_complex(BufReader::new(fs::File::open(&wc)?))?;
            let grid = if eps_grid == "default" {
                default_eps_grid()
            } else {
                eps_grid
                    .split(',')
                    .map(|t| {
                        t.trim()
                            .parse::<f64>()
                            .map_err(|_| Error::Config(format!("bad threshold `{t}`")))
                    })
                    .collect::<Result<_>>()?
            };
            let opts = EstimatorOptions {
                eps_grid: grid,
                ..Default::default()
            };
            let est = vn_betti_estimate(&wc, degree, &opts)?;
            emit(out.as_deref(), &serde_json::to_string_pretty(&est)?)?;
            Ok(est.is_sane(1e-9) && est.trace_identity_holds(1e-9))
        }
        Command::Betti(BettiCmd::Sweep { config, out }) => {
            let s = Scenario::load(&config)?;
            let base = config.parent().unwrap_or(Path::new("."));
            let complex = s.build(base)?;
            let report = harness::run(&s, base)?;
            harness::write_report_dir(&out, &report, &complex)?;
            emit(None, &harness::summary_text(&report))?;
            Ok(report.passed())
        }
        Command::Invariants(InvariantsCmd::Check { report, out }) => {
            let (mut run, complex) = harness::read_report_dir(&report)?;
            let name = run.scenario.name.clone();
            attach_checks(&name, &complex, &mut run.sweep, &run.scenario.q)?;
            let checks = run.all_checks();
            emit(out.as_deref(), &serde_json::to_string_pretty(&checks)?)?;
            Ok(checks.iter().all(|c| c.status.passed()))
        }
    }
}

fn complex_cmd(cmd: ComplexCmd) -> Result<()> {
    match cmd {
        ComplexCmd::Info(input) => {
            let c = input.load()?;
            let info = json!({
                "vertices": c.vertex_count(),
                "dim": c.dim(),
                "f_vector": c.f_vector(),
                "flag": c.is_flag(),
                "pure": c.is_pure(),
                "graded": c.is_graded(),
                "rational_homology": rational_homology(&c),
            });
            emit(None, &serde_json::to_string_pretty(&info)?)
        }
        ComplexCmd::Subdivide { input, out } => {
            emit_complex(out.as_deref(), &barycentric_subdivision(&input.load()?))
        }
        ComplexCmd::Even { input, out } => {
            emit_complex(out.as_deref(), &even_subcomplex(&input.load()?)?)
        }
        ComplexCmd::Chain { input, reverse } => {
            let c = input.load()?;
            let tiebreak = if reverse {
                Tiebreak::ReverseLexicographic
            } else {
                Tiebreak::Lexicographic
            };
            let chain = odd_removal_chain(&c, tiebreak)?;
            let mut a = chain.start.clone();
            let mut steps = Vec::new();
            for s in &chain.steps {
                let split = coxl2::complexes::link_split_check(&a, &s.removed)?;
                steps.push(json!({
                    "removed": s.removed,
                    "grading": s.grading,
                    "f_vector": s.complex.f_vector(),
                    "link_split_verified": split.verified,
                }));
                a = s.complex.clone();
            }
            let v = json!({ "steps": steps, "end": ComplexFile::from(&chain.end) });
            emit(None, &serde_json::to_string_pretty(&v)?)
        }
        ComplexCmd::Ghs(input) => emit(
            None,
            &serde_json::to_string_pretty(&is_ghs(&input.load()?))?,
        ),
        ComplexCmd::Link { input, vertex, out } => {
            emit_complex(out.as_deref(), &input.load()?.vertex_link(&vertex)?)
        }
    }
}

fn racg_cmd(cmd: RacgCmd) -> Result<()> {
    match cmd {
        RacgCmd::Ball {
            complex,
            radius,
            out,
        } => {
            let sys = CoxeterSystem::from_complex(&load_complex(&complex)?)?;
            let ball = Ball::new(&sys, radius)?;
            emit(
                out.as_deref(),
                &serde_json::to_string_pretty(&ball.shells())?,
            )
        }
        RacgCmd::Growth {
            complex,
            uniform,
            out,
        } => {
            if !uniform {
                return Err(Error::Config(
                    "only --uniform growth series are emitted".into(),
                ));
            }
            let sys = CoxeterSystem::from_complex(&load_complex(&complex)?)?;
            emit(
                out.as_deref(),
                &serde_json::to_string_pretty(&growth_series(&sys).to_json())?,
            )
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("COXL2_WORKERS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    match dispatch(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

mod report;

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use geoquant::expr::{Expr, SymbolTable, DEFAULT_SEED};
use geoquant::operator::DiffOperator;
use geoquant::polarization::Distribution;
use geoquant::prequant::{check_integrality, prequantum_operator, ManifoldDescriptor, ManifoldKind};
use geoquant::representation::{quantize_momentum, quantize_schrodinger};
use geoquant::semiclassic::OneDofSystem;
use geoquant::symplectic::{hamiltonian_vector_field, poisson_bracket, Chart};
use geoquant::verify::{self, Suite};
use geoquant::Error;
use serde_json::{json, Value};

use report::{Failure, Outcome, Report};

#[derive(Parser, Debug)]
#[command(name = "geoquant", version, about = "Geometric quantization on cotangent bundles")]
struct Cli {
    /// Chart descriptor JSON file; defaults to the canonical chart on T*R.
    #[arg(long, global = true)]
    chart: Option<String>,
    /// Value of hbar; overrides the chart's binding.
    #[arg(long, global = true)]
    hbar: Option<f64>,
    /// Print the JSON report instead of human-readable text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for random corpora and equality sampling.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Poisson bracket {f, g}.
    Bracket { f: String, g: String },
    /// Hamiltonian vector field X_f.
    Xfield { f: String },
    /// Quantize f in a representation.
    Quantize {
        #[arg(long, value_enum)]
        rep: Representation,
        f: String,
    },
    /// Geometric checks.
    Check {
        #[command(subcommand)]
        what: CheckCommand,
    },
    /// Bohr-Sommerfeld spectrum of p^2/(2m) + V(q), optionally against a finite-difference oracle.
    BsSpectrum(BsArgs),
    /// Run a built-in residual corpus.
    Verify {
        #[arg(value_enum)]
        suite: SuiteArg,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Representation {
    Schrodinger,
    Momentum,
    Prequantum,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SuiteArg {
    Dirac,
    Jacobi,
    Fourier,
}

#[derive(Args, Debug)]
struct DistributionArg {
    /// `vertical`, `horizontal`, or a JSON file {"span": [[...], ...]}.
    #[arg(long, default_value = "vertical")]
    distribution: String,
}

#[derive(Subcommand, Debug)]
enum CheckCommand {
    /// Whether X_f preserves the distribution.
    Polarized {
        f: String,
        #[command(flatten)]
        dist: DistributionArg,
    },
    Lagrangian {
        #[command(flatten)]
        dist: DistributionArg,
    },
    Involutive {
        #[command(flatten)]
        dist: DistributionArg,
    },
    Real {
        #[command(flatten)]
        dist: DistributionArg,
    },
    /// Integrality of [omega/(2 pi hbar)].
    Integrality {
        #[arg(long, value_enum)]
        manifold: ManifoldArg,
        /// Total area, e.g. `4pi` or `12.566`; required for sphere and torus.
        #[arg(long)]
        area: Option<String>,
        /// Degrees of freedom of the cotangent bundle.
        #[arg(long, default_value_t = 1)]
        n: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ManifoldArg {
    Sphere,
    Torus,
    Cotangent,
}

#[derive(Args, Debug)]
struct BsArgs {
    /// Potential V(q).
    potential: String,
    #[arg(long, default_value_t = 1.0)]
    mass: f64,
    /// Maslov offset d.
    #[arg(long, default_value_t = 0.5)]
    maslov: f64,
    #[arg(long, default_value_t = 5)]
    n_max: usize,
    /// Interior nodes of the oracle grid.
    #[arg(long, default_value_t = 4000)]
    grid_n: usize,
    /// Half-length of the oracle interval.
    #[arg(long, default_value_t = 12.0)]
    half_length: f64,
    /// Skip the finite-difference oracle.
    #[arg(long)]
    no_oracle: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, args) = describe(&cli);
    let chart_text = match &cli.chart {
        Some(path) => match std::fs::read_to_string(path) {
            Ok(t) => Some(t),
            Err(e) => {
                let report = Report::new(name, args, None, Err(Failure::input(format!("cannot read {path}: {e}"))));
                return report.emit(cli.json);
            }
        },
        None => None,
    };
    let outcome = run(&cli, chart_text.as_deref());
    Report::new(name, args, chart_text.as_deref(), outcome).emit(cli.json)
}

/// Command name and its arguments, echoed in the report.
fn describe(cli: &Cli) -> (String, BTreeMap<String, Value>) {
    let mut args = BTreeMap::new();
    if let Some(c) = &cli.chart {
        args.insert("chart".into(), json!(c));
    }
    if let Some(h) = cli.hbar {
        args.insert("hbar".into(), json!(h));
    }
    args.insert("seed".into(), json!(cli.seed));
    let name = match &cli.command {
        Command::Bracket { f, g } => {
            args.insert("f".into(), json!(f));
            args.insert("g".into(), json!(g));
            "bracket"
        }
        Command::Xfield { f } => {
            args.insert("f".into(), json!(f));
            "xfield"
        }
        Command::Quantize { rep, f } => {
            args.insert("rep".into(), json!(format!("{rep:?}").to_lowercase()));
            args.insert("f".into(), json!(f));
            "quantize"
        }
        Command::Check { what } => {
            let (sub, extra) = match what {
                CheckCommand::Polarized { f, dist } => {
                    ("polarized", json!({"f": f, "distribution": dist.distribution}))
                }
                CheckCommand::Lagrangian { dist } => ("lagrangian", json!({"distribution": dist.distribution})),
                CheckCommand::Involutive { dist } => ("involutive", json!({"distribution": dist.distribution})),
                CheckCommand::Real { dist } => ("real", json!({"distribution": dist.distribution})),
                CheckCommand::Integrality { manifold, area, n } => {
                    ("integrality", json!({"manifold": format!("{manifold:?}").to_lowercase(), "area": area, "n": n}))
                }
            };
            args.insert("what".into(), json!(sub));
            if let Value::Object(m) = extra {
                args.extend(m);
            }
            "check"
        }
        Command::BsSpectrum(b) => {
            args.insert("potential".into(), json!(b.potential));
            args.insert("mass".into(), json!(b.mass));
            args.insert("maslov".into(), json!(b.maslov));
            args.insert("nMax".into(), json!(b.n_max));
            args.insert("gridN".into(), json!(b.grid_n));
            args.insert("L".into(), json!(b.half_length));
            args.insert("oracle".into(), json!(!b.no_oracle));
            "bs-spectrum"
        }
        Command::Verify { suite } => {
            args.insert("suite".into(), json!(format!("{suite:?}").to_lowercase()));
            "verify"
        }
    };
    (name.to_string(), args)
}

fn load_chart(cli: &Cli, text: Option<&str>) -> Result<Arc<Chart>, Error> {
    let chart = match text {
        Some(t) => Chart::from_json(t)?,
        None => Chart::canonical(1)?,
    };
    let chart = match cli.hbar {
        Some(h) => chart.with_hbar(h)?,
        None => chart,
    };
    Ok(Arc::new(chart))
}

fn load_distribution(chart: &Arc<Chart>, arg: &DistributionArg) -> Result<Distribution, Failure> {
    match arg.distribution.as_str() {
        "vertical" => Ok(Distribution::vertical(chart)),
        "horizontal" => Ok(Distribution::horizontal(chart)),
        path => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure::input(format!("cannot read {path}: {e}")))?;
            Ok(Distribution::from_json(chart, &text)?)
        }
    }
}

fn operator_payload(op: &DiffOperator) -> Value {
    let terms: Vec<Value> = op.labelled_terms().into_iter().map(|(a, c)| json!([a, c])).collect();
    json!({"operator": op.to_string(), "terms": terms})
}

/// Parses an area such as `4pi`, `4*pi*0.3` or `12.5`.
fn parse_area(text: &str) -> Result<f64, Failure> {
    let mut spaced = String::with_capacity(text.len() + 4);
    let mut prev: Option<char> = None;
    for c in text.chars() {
        if prev.is_some_and(|p| p.is_ascii_digit() || p == ')') && c.is_alphabetic() {
            spaced.push('*');
        }
        spaced.push(c);
        prev = Some(c);
    }
    let table = SymbolTable::new().with_parameter("pi", Some(PI)).map_err(Error::from)?;
    let e = Expr::parse(&spaced, &table).map_err(Error::from)?;
    Ok(e.evaluate(&table.bindings()).map_err(Error::from)?)
}

fn run(cli: &Cli, chart_text: Option<&str>) -> Outcome {
    match &cli.command {
        Command::Bracket { f, g } => {
            let chart = load_chart(cli, chart_text)?;
            let b = poisson_bracket(&chart.parse(f)?, &chart.parse(g)?, &chart)?;
            Ok((json!({"bracket": b.to_string()}), format!("{{{f}, {g}}} = {b}")))
        }
        Command::Xfield { f } => {
            let chart = load_chart(cli, chart_text)?;
            let x = hamiltonian_vector_field(&chart.parse(f)?, &chart)?;
            let components: Vec<String> = x.components().iter().map(ToString::to_string).collect();
            Ok((json!({"field": x.to_string(), "components": components}), format!("X_f = {x}")))
        }
        Command::Quantize { rep, f } => {
            let chart = load_chart(cli, chart_text)?;
            let f = chart.parse(f)?;
            let op = match rep {
                Representation::Schrodinger => quantize_schrodinger(&f, &chart)?,
                Representation::Momentum => quantize_momentum(&f, &chart)?,
                Representation::Prequantum => prequantum_operator(&f, &chart)?,
            };
            let mut text = format!("{op}");
            for (a, c) in op.labelled_terms() {
                text.push_str(&format!("\n  {a:<16} {c}"));
            }
            Ok((operator_payload(&op), text))
        }
        Command::Check { what } => run_check(cli, chart_text, what),
        Command::BsSpectrum(b) => {
            let hbar = cli.hbar.unwrap_or(1.0);
            let sys = OneDofSystem::parse(&b.potential)?.with_mass(b.mass)?.with_hbar(hbar)?.with_maslov(b.maslov)?;
            let report =
                if b.no_oracle { sys.bs_levels(b.n_max)? } else { sys.bs_report(b.n_max, b.grid_n, b.half_length)? };
            let mut text =
                format!("{:>3}  {:>20}  {:>20}  {:>20}  {:>10}", "n", "action", "E_bs", "E_oracle", "relError");
            for l in &report.levels {
                let opt = |x: Option<f64>| x.map_or("-".to_string(), |v| format!("{v:.12}"));
                text.push_str(&format!(
                    "\n{:>3}  {:>20.12}  {:>20.12}  {:>20}  {:>10}{}",
                    l.n,
                    l.action,
                    l.e_bs,
                    opt(l.e_oracle),
                    l.rel_error.map_or("-".to_string(), |v| format!("{v:.3e}")),
                    if l.degenerate { "  (degenerate orbit)" } else { "" }
                ));
            }
            Ok((serde_json::to_value(&report).expect("report serializes"), text))
        }
        Command::Verify { suite } => {
            let suite = match suite {
                SuiteArg::Dirac => Suite::Dirac,
                SuiteArg::Jacobi => Suite::Jacobi,
                SuiteArg::Fourier => Suite::Fourier,
            };
            let r = verify::run(suite, cli.seed)?;
            let mut text =
                format!("{}: {}/{} passed, worst residual {:e}", suite.name(), r.passed, r.cases, r.worst_residual);
            for c in &r.checks {
                text.push_str(&format!(
                    "\n  {}: {}/{} passed, worst residual {:e}",
                    c.name, c.passed, c.cases, c.worst_residual
                ));
                for input in &c.failures {
                    text.push_str(&format!("\n    failed: {input}"));
                }
            }
            if !r.all_passed() {
                return Err(Failure::verification(text));
            }
            Ok((serde_json::to_value(&r).expect("report serializes"), text))
        }
    }
}

fn run_check(cli: &Cli, chart_text: Option<&str>, what: &CheckCommand) -> Outcome {
    let verdict = |name: &str, result: bool, witness: Option<String>| {
        let text = match &witness {
            Some(w) => format!("{name}: {result} (witness: {w})"),
            None => format!("{name}: {result}"),
        };
        (json!({"result": result, "witness": witness}), text)
    };
    match what {
        CheckCommand::Polarized { f, dist } => {
            let chart = load_chart(cli, chart_text)?;
            let d = load_distribution(&chart, dist)?;
            let w = d.preservation_witness(&chart.parse(f)?)?;
            Ok(verdict("polarized", w.is_none(), w.map(|v| v.to_string())))
        }
        CheckCommand::Lagrangian { dist } => {
            let chart = load_chart(cli, chart_text)?;
            let d = load_distribution(&chart, dist)?;
            Ok(verdict("lagrangian", d.is_lagrangian()?, None))
        }
        CheckCommand::Involutive { dist } => {
            let chart = load_chart(cli, chart_text)?;
            let d = load_distribution(&chart, dist)?;
            let w = d.involutivity_witness()?;
            Ok(verdict("involutive", w.is_none(), w.map(|v| v.to_string())))
        }
        CheckCommand::Real { dist } => {
            let chart = load_chart(cli, chart_text)?;
            let d = load_distribution(&chart, dist)?;
            Ok(verdict("real", d.is_real()?, None))
        }
        CheckCommand::Integrality { manifold, area, n } => {
            let area = || match area {
                Some(a) => parse_area(a),
                None => Err(Failure::input("--area is required for this manifold")),
            };
            let kind = match manifold {
                ManifoldArg::Sphere => ManifoldKind::Sphere { area: area()? },
                ManifoldArg::Torus => ManifoldKind::Torus2 { area: area()? },
                ManifoldArg::Cotangent => ManifoldKind::CotangentBundle { n: *n },
            };
            let m = ManifoldDescriptor::new(kind, cli.hbar.unwrap_or(1.0))?;
            let r = check_integrality(&m);
            let text = match r.integer_class {
                Some(k) => format!("integrality: true (class {k})"),
                None => format!("integrality: false (witness: class value {})", r.class_value),
            };
            let witness = (!r.quantizable).then_some(r.class_value);
            Ok((
                json!({
                    "result": r.quantizable,
                    "integerClass": r.integer_class,
                    "classValue": r.class_value,
                    "witness": witness,
                }),
                text,
            ))
        }
    }
}

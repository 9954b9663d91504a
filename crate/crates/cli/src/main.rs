//! `bottbord`: cobordism obstructions for small covers and quasitoric
//! manifolds over products of simplices.
//!
//! Reports go to stdout as JSON. Exit codes: 0 success, 1 verification
//! counterexample, 2 input or usage error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bottbord_core::charclass::{first_sw, pontryagin_numbers, sw_numbers};
use bottbord_core::charmatrix::{Mode, ReducedVectorMatrix};
use bottbord_core::cobordism::{quasitoric_sw_numbers, verdict, verify, VerifyParams};
use bottbord_core::enumerate::{batch_run, FamilySpec};
use bottbord_core::par::Execution;
use bottbord_core::poly::{Gf2, Q};
use bottbord_core::ring::{CohomologyRing, DegreeScale, EngineKind, RingScalar};
use bottbord_core::Error;
use clap::{Parser, Subcommand};
use serde::Deserialize;
use serde_json::{json, Map, Value};

#[derive(Parser)]
#[command(
    name = "bottbord",
    version,
    about = "Cobordism obstructions over products of simplices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the vertex condition at every vertex.
    Validate { file: PathBuf },
    /// Orientability, triangularizability and the principal-minor predicate.
    Classify { file: PathBuf },
    /// Stiefel-Whitney and/or Pontryagin numbers.
    Numbers {
        file: PathBuf,
        #[arg(long)]
        sw: bool,
        #[arg(long)]
        pontryagin: bool,
    },
    /// Unoriented and oriented cobordism verdict.
    Cobordism { file: PathBuf },
    /// Relations, engine and per-degree ranks of the cohomology ring.
    Ring {
        file: PathBuf,
        #[arg(long)]
        poincare: bool,
    },
    /// Run a built-in verifier.
    Verify {
        theorem: String,
        #[arg(long, value_delimiter = ',')]
        dims: Option<Vec<i64>>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        l: Option<usize>,
        #[arg(long)]
        bound: Option<i64>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        b: Option<Vec<i64>>,
        #[arg(long, value_delimiter = ',')]
        orders: Option<Vec<usize>>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Evaluate a matrix family and write JSONL records.
    Enumerate {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct InputDocument {
    dims: Vec<i64>,
    coefficients: Mode,
    rows: Vec<Vec<i64>>,
}

enum Failure {
    Input(String),
    Counterexample(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = std::result::Result<Value, Failure>;

fn read_matrix(path: &Path) -> std::result::Result<ReducedVectorMatrix, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let doc: InputDocument =
        serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Ok(ReducedVectorMatrix::parse(&doc.dims, doc.coefficients, doc.rows)?)
}

fn read_valid(path: &Path) -> std::result::Result<ReducedVectorMatrix, Failure> {
    let a = read_matrix(path)?;
    a.require_characteristic()?;
    Ok(a)
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn classify(a: &ReducedVectorMatrix) -> Outcome {
    let tri = a.triangularize();
    let orientable = match a.mode() {
        Mode::Integer => true,
        Mode::ModTwo => {
            let ring = CohomologyRing::<Gf2>::build(a, DegreeScale::SmallCover)?;
            first_sw(&ring).is_zero()
        }
    };
    let mut out = Map::new();
    out.insert("orientable".into(), json!(orientable));
    if a.polytope().is_cube() && a.mode() == Mode::ModTwo {
        out.insert("orientability_sum_test".into(), json!(a.orientability_column_test()?));
    }
    out.insert("triangularizable".into(), json!(tri.is_ok()));
    out.insert(
        "permutation".into(),
        tri.as_ref().map_or(Value::Null, |t| json!(t.permutation)),
    );
    out.insert(
        "unipotent_upper_triangular".into(),
        json!(a.is_unipotent_upper_triangular()),
    );
    let minors = a.principal_minors_all_one();
    out.insert("principal_minors_all_one".into(), json!(minors));
    if a.mode() == Mode::Integer {
        out.insert("generalized_bott".into(), json!(minors));
    } else {
        out.insert("generalized_real_bott".into(), json!(minors));
    }
    Ok(Value::Object(out))
}

fn numbers(a: &ReducedVectorMatrix, sw: bool, pontryagin: bool) -> Outcome {
    let (sw, pontryagin) = if !sw && !pontryagin {
        (true, true)
    } else {
        (sw, pontryagin)
    };
    let mut out = Map::new();
    match a.mode() {
        Mode::ModTwo => {
            if pontryagin && !sw {
                return Err(Failure::Input("Pontryagin numbers need integer coefficients".into()));
            }
            let ring = CohomologyRing::<Gf2>::build(a, DegreeScale::SmallCover)?;
            out.insert("sw".into(), to_value(&sw_numbers(&ring)?));
        }
        Mode::Integer => {
            if sw {
                out.insert("sw".into(), to_value(&quasitoric_sw_numbers(a)?));
            }
            if pontryagin {
                let ring = CohomologyRing::<Q>::build(a, DegreeScale::Quasitoric)?;
                out.insert("pontryagin".into(), to_value(&pontryagin_numbers(&ring)?));
            }
        }
    }
    Ok(Value::Object(out))
}

fn ring_report<C: RingScalar>(ring: &CohomologyRing<C>, poincare: bool) -> Value {
    let mut out = Map::new();
    let engine = match ring.engine() {
        EngineKind::Triangular => "triangular",
        EngineKind::Generic => "generic",
    };
    out.insert("engine".into(), json!(engine));
    out.insert("permutation".into(), json!(ring.permutation()));
    out.insert("nvars".into(), json!(ring.nvars()));
    out.insert(
        "relations".into(),
        json!(ring.relations().iter().map(|g| g.to_string()).collect::<Vec<_>>()),
    );
    out.insert("top_monomial".into(), json!(ring.top_monomial().to_string()));
    if poincare {
        let ranks = ring.poincare_ranks();
        out.insert("total_rank".into(), json!(ranks.iter().sum::<usize>()));
        out.insert("poincare".into(), json!(ranks));
    }
    Value::Object(out)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Validate { file } => Ok(to_value(&read_matrix(&file)?.validate())),
        Command::Classify { file } => classify(&read_valid(&file)?),
        Command::Numbers { file, sw, pontryagin } => numbers(&read_valid(&file)?, sw, pontryagin),
        Command::Cobordism { file } => Ok(to_value(&verdict(&read_valid(&file)?)?)),
        Command::Ring { file, poincare } => {
            let a = read_valid(&file)?;
            Ok(match a.mode() {
                Mode::ModTwo => ring_report(&CohomologyRing::<Gf2>::build(&a, DegreeScale::SmallCover)?, poincare),
                Mode::Integer => ring_report(&CohomologyRing::<Q>::build(&a, DegreeScale::Quasitoric)?, poincare),
            })
        }
        Command::Verify {
            theorem,
            dims,
            n,
            k,
            l,
            bound,
            samples,
            b,
            orders,
            seed,
        } => {
            let params = VerifyParams {
                dims,
                n,
                k,
                l,
                bound,
                samples,
                b,
                orders,
                seed,
            };
            let result = verify(&theorem, &params)?;
            eprintln!("{theorem}: {} instances in {:.3?}", result.instances, result.elapsed);
            let value = to_value(&result);
            if result.passed {
                Ok(value)
            } else {
                Err(Failure::Counterexample(value))
            }
        }
        Command::Enumerate { spec, out } => {
            let text =
                std::fs::read_to_string(&spec).map_err(|e| Failure::Input(format!("{}: {e}", spec.display())))?;
            let spec: FamilySpec =
                serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", spec.display())))?;
            Ok(to_value(&batch_run(&spec, &out, Execution::default())?))
        }
    }
}

fn print(value: &Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("json values serialize")
    );
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(value) => {
            print(&value);
            ExitCode::SUCCESS
        }
        Err(Failure::Counterexample(value)) => {
            print(&value);
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

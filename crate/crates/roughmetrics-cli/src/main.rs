//! Command-line front end: load space and ordered-set files, dispatch the
//! library operations and emit JSON (or CSV) reports.
//!
//! Exit codes: 0 for completed runs including negative mathematical outcomes
//! (a non-Euclidean space or a failed check is a result, not a fault);
//! 2 parse or structural error, 3 domain error, 4 precondition not met,
//! 5 search budget exhausted.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use roughmetrics::embed::{schoenberg_embed, SchoenbergOutcome};
use roughmetrics::ordered::{
    bounded_turning_constant, discrete_diameter, discrete_length, elementary_combination_check,
    lambda_required_contracting, lambda_required_expanding, medial_theta_required, OrderedSet,
    OrderedSetFile,
};
use roughmetrics::search::{max_sra_subset, max_sra_subset_exhaustive};
use roughmetrics::space::SpaceFile;
use roughmetrics::sra::{
    is_ultrametric, sra_check, sra_required_alpha, sra_required_alpha_table, unc_check,
};
use roughmetrics::witness::{constants, extract_sra_subset};
use roughmetrics::{Error, FiniteMetricSpace};

#[derive(Parser)]
#[command(name = "roughmetrics", version, about = "Finite metric space analysis toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Numeric tolerance for metric validation and comparisons.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tolerance: f64,

    /// Write the report to this path instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Report format (csv only for coordinate and table outputs).
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Seed echoed into the report; all operations are deterministic.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Check the metric axioms of a space file.
    Validate { space: PathBuf },
    /// Required SRA parameter and related invariants of a space.
    Analyze {
        space: PathBuf,
        /// Also check the SRA(α) condition at this α.
        #[arg(long)]
        alpha: Option<f64>,
        /// Also run the δ-uniform non-convexity check at this δ.
        #[arg(long)]
        unc_delta: Option<f64>,
        /// Include the per-triple table in the report.
        #[arg(long)]
        table: bool,
    },
    /// Rough self-monotonicity requirements of an ordered set.
    OrderCheck {
        set: PathBuf,
        /// Also run the elementary combination check at this λ.
        #[arg(long)]
        lambda: Option<f64>,
    },
    /// Build a named construction and emit it as a space file.
    Construct {
        #[arg(long)]
        family: String,
        /// Family parameters as a JSON object.
        #[arg(long)]
        params: Option<String>,
        #[arg(long)]
        name: Option<String>,
    },
    /// Largest SRA(α) subset of a space.
    Search {
        space: PathBuf,
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
        /// Cross-check with plain enumeration (n ≤ 24).
        #[arg(long)]
        exhaustive: bool,
    },
    /// Extract a certified K-point SRA(α) subset from an ordered set.
    Extract {
        set: PathBuf,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
    },
    /// Isometric Euclidean coordinates via the Gram construction.
    Embed {
        space: PathBuf,
        /// Index of the base point mapped to the origin.
        #[arg(long, default_value_t = 0)]
        base: usize,
    },
    /// Derived constant bundle for the index-walk machinery.
    Constants {
        #[arg(long)]
        theta: f64,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        alpha: Option<f64>,
    },
    /// Greedy separated-set counts over a radius grid.
    Probe {
        space: PathBuf,
        /// Decreasing radii, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        radii: Vec<f64>,
    },
}

enum Failure {
    Parse(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Parse(_) => 2,
            Failure::Lib(Error::Structure(_)) => 2,
            Failure::Lib(Error::Domain(_)) => 3,
            Failure::Lib(Error::Precondition(_)) => 4,
            Failure::Lib(Error::Budget(_)) => 5,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Parse(m) => format!("parse error: {m}"),
            Failure::Lib(e) => e.to_string(),
        }
    }
}

enum Report {
    Json(Value),
    /// Already formatted CSV text.
    Csv(String),
    /// JSON report with a nonzero exit code (metric violation on load).
    JsonWithCode(Value, u8),
}

fn load_space(path: &Path, tol: f64) -> Result<FiniteMetricSpace, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
    let file: SpaceFile = serde_json::from_str(&text)
        .map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
    let space = file.build()?;
    let report = space.validate(tol);
    if !report.passed {
        return Err(Failure::Lib(Error::Domain(format!(
            "metric violation in {}: {}",
            path.display(),
            serde_json::to_string(&report.violations).unwrap()
        ))));
    }
    Ok(space)
}

fn load_ordered(path: &Path, tol: f64) -> Result<OrderedSet, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
    let file: OrderedSetFile = serde_json::from_str(&text)
        .map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
    let set = file.build()?;
    let report = set.space().validate(tol);
    if !report.passed {
        return Err(Failure::Lib(Error::Domain(format!(
            "metric violation in {}",
            path.display()
        ))));
    }
    Ok(set)
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    let tol = cli.tolerance;
    match &cli.command {
        Command::Validate { space } => {
            let text = fs::read_to_string(space)
                .map_err(|e| Failure::Parse(format!("{}: {e}", space.display())))?;
            let file: SpaceFile = serde_json::from_str(&text)
                .map_err(|e| Failure::Parse(format!("{}: {e}", space.display())))?;
            let built = file.build()?;
            let report = built.validate(tol);
            let value = json!({
                "name": built.name(),
                "points": built.len(),
                "validation": report,
            });
            if report.passed {
                Ok(Report::Json(value))
            } else {
                Ok(Report::JsonWithCode(value, 3))
            }
        }
        Command::Analyze {
            space,
            alpha,
            unc_delta,
            table,
        } => {
            let s = load_space(space, tol)?;
            let sra = if *table {
                sra_required_alpha_table(&s)?
            } else {
                sra_required_alpha(&s)?
            };
            if cli.format == Format::Csv {
                let entries = sra_required_alpha_table(&s)?;
                let mut csv = String::from("i,j,k,required_alpha\n");
                for e in entries.per_triple_table.unwrap_or_default() {
                    csv.push_str(&format!("{},{},{},{:?}\n", e.i, e.j, e.k, e.required_alpha));
                }
                return Ok(Report::Csv(csv));
            }
            let mut value = json!({
                "name": s.name(),
                "points": s.len(),
                "sra": sra,
                "ultrametric": is_ultrametric(&s, tol),
                "max_lp_exponent": s.max_lp_exponent(),
            });
            if let Some(alpha) = alpha {
                let (passed, witness) = sra_check(&s, *alpha, tol);
                value["alpha_check"] = json!({
                    "alpha": alpha,
                    "passed": passed,
                    "witness_triple": witness,
                });
            }
            if let Some(delta) = unc_delta {
                value["unc"] = serde_json::to_value(unc_check(&s, *delta)?).unwrap();
            }
            Ok(Report::Json(value))
        }
        Command::OrderCheck { set, lambda } => {
            let s = load_ordered(set, tol)?;
            let mut value = json!({
                "points": s.len(),
                "lambda_required_contracting": lambda_required_contracting(&s),
                "lambda_required_expanding": lambda_required_expanding(&s),
                "medial_theta_required": medial_theta_required(&s),
                "bounded_turning_constant": bounded_turning_constant(&s),
                "discrete_length": discrete_length(&s),
                "discrete_diameter": discrete_diameter(&s),
            });
            if let Some(lambda) = lambda {
                value["combination_check"] =
                    serde_json::to_value(elementary_combination_check(&s, *lambda, tol)).unwrap();
            }
            Ok(Report::Json(value))
        }
        Command::Construct {
            family,
            params,
            name,
        } => {
            let params: Value = match params {
                Some(text) => serde_json::from_str(text)
                    .map_err(|e| Failure::Parse(format!("--params: {e}")))?,
                None => Value::Null,
            };
            let mut space = roughmetrics::constructions::build(family, &params)?;
            if let Some(name) = name {
                space = space.rename(name.clone());
            }
            Ok(Report::Json(serde_json::to_value(space.to_file()).unwrap()))
        }
        Command::Search {
            space,
            alpha,
            budget,
            exhaustive,
        } => {
            let s = load_space(space, tol)?;
            let result = if *exhaustive {
                max_sra_subset_exhaustive(&s, *alpha)?
            } else {
                max_sra_subset(&s, *alpha, *budget)?
            };
            Ok(Report::Json(json!({
                "name": s.name(),
                "alpha": alpha,
                "result": result,
            })))
        }
        Command::Extract {
            set,
            alpha,
            k,
            budget,
        } => {
            let s = load_ordered(set, tol)?;
            let outcome = extract_sra_subset(&s, *alpha, *k, *budget)?;
            Ok(Report::Json(json!({
                "alpha": alpha,
                "k": k,
                "outcome": outcome,
            })))
        }
        Command::Embed { space, base } => {
            let s = load_space(space, tol)?;
            match schoenberg_embed(&s, *base)? {
                SchoenbergOutcome::Embedded(result) => {
                    if cli.format == Format::Csv {
                        let mut csv = format!(
                            "# norm={}\n",
                            match result.target_norm {
                                roughmetrics::Norm::Euclidean => "euclidean",
                                roughmetrics::Norm::Taxicab => "taxicab",
                            }
                        );
                        for (label, row) in s.labels().iter().zip(&result.coords) {
                            csv.push_str(label);
                            for x in row {
                                csv.push_str(&format!(",{x:?}"));
                            }
                            csv.push('\n');
                        }
                        return Ok(Report::Csv(csv));
                    }
                    Ok(Report::Json(json!({
                        "name": s.name(),
                        "embedded": true,
                        "result": result,
                    })))
                }
                SchoenbergOutcome::NotEuclidean { min_eigenvalue } => Ok(Report::Json(json!({
                    "name": s.name(),
                    "embedded": false,
                    "min_eigenvalue": min_eigenvalue,
                }))),
            }
        }
        Command::Constants { theta, m, alpha } => {
            let bundle = constants(*theta, *m, *alpha)?;
            Ok(Report::Json(serde_json::to_value(bundle).unwrap()))
        }
        Command::Probe { space, radii } => {
            let s = load_space(space, tol)?;
            let count = s.doubling_probe(radii)?;
            Ok(Report::Json(json!({
                "name": s.name(),
                "radii": radii,
                "count": count,
            })))
        }
    }
}

fn emit(cli: &Cli, text: &str) -> Result<(), Failure> {
    match &cli.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::Parse(format!("{}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            let (text, code) = match report {
                Report::Json(mut value) => {
                    if let (Some(seed), Some(obj)) = (cli.seed, value.as_object_mut()) {
                        obj.insert("seed".into(), json!(seed));
                    }
                    (serde_json::to_string_pretty(&value).unwrap(), 0)
                }
                Report::Csv(text) => (text.trim_end().to_string(), 0),
                Report::JsonWithCode(value, code) => {
                    (serde_json::to_string_pretty(&value).unwrap(), code)
                }
            };
            if let Err(e) = emit(&cli, &text) {
                eprintln!("{}", e.message());
                return ExitCode::from(e.code());
            }
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("{}", e.message());
            ExitCode::from(e.code())
        }
    }
}

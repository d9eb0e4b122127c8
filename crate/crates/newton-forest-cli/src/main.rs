use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use newton_forest::analysis::{analyze, analyze_at, Analysis};
use newton_forest::audit::{audit, AuditReport};
use newton_forest::generate::{generate, GeneratorConfig};
use newton_forest::io::{export_dot, parse, serialize, DotLabels};
use newton_forest::report::{audit_entry, combs_text, decomposition_entry, report_json, report_text};
use newton_forest::tree::{validate_axioms, Diagnostic, Tree};
use newton_forest::{multiplicity, AnalysisError};

const THREADS_VAR: &str = "NEWTON_FOREST_THREADS";

#[derive(Parser)]
#[command(name = "newton-forest", version, about = "Exact invariants of abstract Newton trees at infinity")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the axioms and minimal completeness.
    Validate { file: PathBuf },
    /// Print the full ledger report.
    Analyze {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Decompose only at this initial vertex.
        #[arg(long)]
        z: Option<String>,
    },
    /// Print the comb decompositions.
    Combs {
        file: PathBuf,
        #[arg(long)]
        z: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run the theorem audits on one file or on a generated corpus.
    Audit(AuditArgs),
    /// Graphviz export.
    Dot {
        file: PathBuf,
        /// Label vertices with N and Δ̃.
        #[arg(long)]
        with_report: bool,
    },
    /// Emit a generated tree as an .ntree document.
    Gen {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 40)]
        max_cells: usize,
        /// Keep only rational trees.
        #[arg(long)]
        rational: bool,
        /// Keep only trees with this Δ̃(𝒩).
        #[arg(long, allow_hyphen_values = true)]
        delta_tilde: Option<i64>,
    },
}

#[derive(Args)]
struct AuditArgs {
    #[arg(conflicts_with = "gen", required_unless_present = "gen")]
    file: Option<PathBuf>,
    /// Number of generated trees.
    #[arg(long)]
    gen: Option<u64>,
    /// First seed; tree i uses seed + i.
    #[arg(long, default_value_t = 0, requires = "gen")]
    seed: u64,
    #[arg(long, default_value_t = 40, requires = "gen")]
    max_cells: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

/// Process outcome with its exit status.
enum Failure {
    Invalid(String),
    Usage(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Invalid(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Internal(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Invalid(m) | Failure::Usage(m) | Failure::Internal(m) => m,
        }
    }
}

fn describe(t: &Tree, diagnostics: &[Diagnostic]) -> String {
    diagnostics
        .iter()
        .map(|d| {
            let cells: Vec<&str> = d.cells.iter().map(|&c| t.id(c)).collect();
            format!("{}: {} [{}]", d.rule, d.message, cells.join(", "))
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn load(path: &Path) -> Result<Tree, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    parse(&text).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn from_analysis_error(t: &Tree, e: AnalysisError) -> Failure {
    match &e {
        AnalysisError::Invalid(d) | AnalysisError::NotMinimallyComplete(d) => {
            Failure::Invalid(format!("{e}\n{}", describe(t, d)))
        }
        AnalysisError::Precondition(_) => Failure::Usage(e.to_string()),
        AnalysisError::Inconsistent(_) => Failure::Internal(e.to_string()),
    }
}

fn load_analysis(path: &Path, z: Option<&str>) -> Result<Analysis, Failure> {
    let t = load(path)?;
    let z = match z {
        Some(id) => Some(t.find(id).ok_or_else(|| Failure::Usage(format!("no cell named `{id}`")))?),
        None => None,
    };
    analyze_at(t.clone(), z).map_err(|e| from_analysis_error(&t, e))
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("values always serialize")
}

fn validate(path: &Path) -> Result<String, Failure> {
    let t = load(path)?;
    let diagnostics = validate_axioms(&t);
    if !diagnostics.is_empty() {
        return Err(Failure::Invalid(format!("invalid tree\n{}", describe(&t, &diagnostics))));
    }
    let info = multiplicity::classify(&t, &multiplicity::multiplicities(&t));
    if !info.minimally_complete {
        return Err(Failure::Invalid(format!("not minimally complete\n{}", describe(&t, &info.diagnostics))));
    }
    Ok("minimally complete".into())
}

fn audit_verdict(report: &AuditReport, text: String) -> Result<String, Failure> {
    if report.is_clean() {
        Ok(text)
    } else {
        Err(Failure::Internal(text))
    }
}

fn audit_file(path: &Path, format: Format) -> Result<String, Failure> {
    let a = load_analysis(path, None)?;
    let report = audit(&a);
    let text = match format {
        Format::Json => pretty(&audit_entry(&report)),
        Format::Text => {
            let mut out: Vec<String> =
                report.failures().map(|o| format!("FAIL {}: {}", o.id, o.witnesses.join("; "))).collect();
            out.push(format!("{} failures", report.failures().count()));
            out.join("\n")
        }
    };
    audit_verdict(&report, text)
}

/// Per-seed result of the corpus audit.
enum SeedResult {
    Clean,
    Failed(Vec<String>),
    Broken(String),
}

fn audit_seed(seed: u64, max_cells: usize) -> SeedResult {
    let config = GeneratorConfig { seed, max_cells, ..Default::default() };
    let tree = match generate(&config) {
        Ok(t) => t,
        Err(e) => return SeedResult::Broken(format!("seed {seed}: {e}")),
    };
    match analyze(tree) {
        Ok(a) => {
            let report = audit(&a);
            let lines: Vec<String> =
                report.failures().map(|o| format!("seed {seed}: FAIL {}: {}", o.id, o.witnesses.join("; "))).collect();
            if lines.is_empty() {
                SeedResult::Clean
            } else {
                SeedResult::Failed(lines)
            }
        }
        Err(e) => SeedResult::Broken(format!("seed {seed}: {e}")),
    }
}

fn thread_count() -> Result<Option<usize>, Failure> {
    match std::env::var(THREADS_VAR) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Failure::Usage(format!("{THREADS_VAR} must be a positive integer, got `{v}`"))),
        },
    }
}

fn audit_corpus(count: u64, seed: u64, max_cells: usize) -> Result<String, Failure> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_count()? {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| Failure::Internal(e.to_string()))?;
    let results: Vec<SeedResult> =
        pool.install(|| (0..count).into_par_iter().map(|i| audit_seed(seed.wrapping_add(i), max_cells)).collect());
    let mut lines = vec![];
    let (mut failed, mut broken) = (0, 0);
    for r in results {
        match r {
            SeedResult::Clean => {}
            SeedResult::Failed(l) => {
                failed += 1;
                lines.extend(l);
            }
            SeedResult::Broken(l) => {
                broken += 1;
                lines.push(l);
            }
        }
    }
    lines.push(format!("{count} trees, {failed} failures, {broken} errors"));
    let text = lines.join("\n");
    if failed + broken == 0 {
        Ok(text)
    } else {
        Err(Failure::Internal(text))
    }
}

fn run(cli: Cli) -> Result<String, Failure> {
    match cli.command {
        Command::Validate { file } => validate(&file),
        Command::Analyze { file, format, z } => {
            let a = load_analysis(&file, z.as_deref())?;
            let report = audit(&a);
            let text = match format {
                Format::Json => pretty(&report_json(&a, Some(&report))),
                Format::Text => report_text(&a, Some(&report)),
            };
            audit_verdict(&report, text)
        }
        Command::Combs { file, z, format } => {
            let a = load_analysis(&file, z.as_deref())?;
            Ok(match format {
                Format::Json => pretty(&serde_json::Value::Array(
                    a.decompositions.iter().map(|d| decomposition_entry(&a, d)).collect(),
                )),
                Format::Text => combs_text(&a),
            })
        }
        Command::Audit(args) => match (args.file, args.gen) {
            (Some(file), _) => audit_file(&file, args.format),
            (None, Some(n)) => audit_corpus(n, args.seed, args.max_cells),
            (None, None) => Err(Failure::Usage("give a file or --gen".into())),
        },
        Command::Dot { file, with_report } => {
            if with_report {
                let a = load_analysis(&file, None)?;
                let labels = DotLabels {
                    multiplicity: a.ledger.vertices.iter().map(|(&c, v)| (c, v.n.clone())).collect(),
                    delta_tilde: a.ledger.vertices.iter().map(|(&c, v)| (c, v.delta_tilde.clone())).collect(),
                };
                Ok(export_dot(&a.tree, Some(&labels)))
            } else {
                let t = load(&file)?;
                Ok(export_dot(&t, None))
            }
        }
        Command::Gen { seed, max_cells, rational, delta_tilde } => {
            let config =
                GeneratorConfig { seed, max_cells, rational, target_delta_tilde: delta_tilde, ..Default::default() };
            let t = generate(&config).map_err(|e| Failure::Usage(e.to_string()))?;
            serialize(&t).map_err(|e| Failure::Internal(e.to_string()))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            if !out.ends_with('\n') {
                println!();
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            // audit listings go to stdout so they can be piped; the reason goes to stderr
            match &f {
                Failure::Internal(m) => println!("{m}"),
                _ => eprintln!("error: {}", f.message()),
            }
            ExitCode::from(f.code())
        }
    }
}

//! Command-line front end.
//!
//! Exit codes: 0 success, 1 a negative verdict (inconsistent, arbitrage),
//! 2 unreadable or invalid input, 3 a completion request on inconsistent
//! input.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::json;

use crate::cone::{common_cone_completion, path_consistent, verify_common_completion, ConeError, PathWitness};
use crate::consistency::{chain_consistent, common_completion, completion_unique, Chain, ConsistencyError};
use crate::io::{parse_document, to_json, ConeDoc, ConePairDoc, DocumentError, MarketDoc, RelationDoc, RelationPairDoc};
use crate::pareto::pareto_improvement;
use crate::relation::Relation;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_INCONSISTENT: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "relcon", version, about = "Consistency and completion of relations, markets and cones")]
struct Cli {
    /// json: document on stdout, summary on stderr; text: summary on stdout
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Report the axioms a relation satisfies
    Classify { file: PathBuf },
    /// Decide chain consistency of a relation pair
    Consistent { file: PathBuf },
    /// Common total completion of a consistent relation pair
    Complete { file: PathBuf },
    /// Look for an arbitrage chain in a market
    Arbitrage { file: PathBuf },
    /// Cone operations
    Cone {
        #[command(subcommand)]
        command: ConeCommand,
    },
    /// Pareto improvement between two cone preferences
    Pareto { file: PathBuf },
}

#[derive(Debug, Subcommand)]
enum ConeCommand {
    /// Decide path consistency of a cone pair
    Check { file: PathBuf },
    /// Completion functional of a path-consistent cone pair
    Complete { file: PathBuf },
    /// Facets, linear part and extreme rays of a single cone
    Describe { file: PathBuf },
}

struct Outcome {
    code: i32,
    doc: serde_json::Value,
    summary: String,
}

impl Outcome {
    fn new(code: i32, doc: serde_json::Value, summary: impl Into<String>) -> Self {
        Self {
            code,
            doc,
            summary: summary.into(),
        }
    }
}

struct Failure(String);

impl From<DocumentError> for Failure {
    fn from(e: DocumentError) -> Self {
        Failure(e.to_string())
    }
}

fn load<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    parse_document(&text).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn located<T>(path: &Path, r: Result<T, DocumentError>) -> Result<T, Failure> {
    r.map_err(|e| Failure(format!("{}: {e}", path.display())))
}

/// Runs the command line `args` (program name first) and returns the exit
/// code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(o) => {
            let result = match cli.format {
                Format::Json => out
                    .write_all(to_json(&o.doc).as_bytes())
                    .and_then(|_| writeln!(err, "{}", o.summary)),
                Format::Text => writeln!(out, "{}", o.summary),
            };
            if result.is_err() {
                return EXIT_INVALID;
            }
            o.code
        }
        Err(Failure(message)) => {
            let _ = writeln!(err, "error: {message}");
            EXIT_INVALID
        }
    }
}

fn execute(command: &Command) -> Result<Outcome, Failure> {
    match command {
        Command::Classify { file } => classify(file),
        Command::Consistent { file } => consistent(file),
        Command::Complete { file } => complete(file),
        Command::Arbitrage { file } => arbitrage(file),
        Command::Cone { command } => match command {
            ConeCommand::Check { file } => cone_check(file),
            ConeCommand::Complete { file } => cone_complete(file),
            ConeCommand::Describe { file } => cone_describe(file),
        },
        Command::Pareto { file } => pareto(file),
    }
}

fn chain_doc(chain: &Chain) -> serde_json::Value {
    json!({ "nodes": chain.nodes(), "tags": chain.tags() })
}

fn pairs_doc(r: &Relation) -> Vec<[String; 2]> {
    r.id_pairs().into_iter().map(|(a, b)| [a, b]).collect()
}

fn pair_error(path: &Path, e: ConsistencyError) -> Failure {
    Failure(format!("{}: {e}", path.display()))
}

fn classify(path: &Path) -> Result<Outcome, Failure> {
    let doc: RelationDoc = load(path)?;
    let r = located(path, doc.to_relation())?;
    let report = r.classify();
    let doc = serde_json::to_value(report).expect("report serializes");
    let mut summary = String::new();
    for (k, v) in doc.as_object().expect("report is an object") {
        let _ = writeln!(summary, "{k}: {v}");
    }
    Ok(Outcome::new(EXIT_OK, doc, summary.trim_end()))
}

fn consistent(path: &Path) -> Result<Outcome, Failure> {
    let doc: RelationPairDoc = load(path)?;
    let (r1, r2) = located(path, doc.to_relations())?;
    let verdict = chain_consistent(&r1, &r2).map_err(|e| pair_error(path, e))?;
    Ok(match verdict.witness() {
        None => Outcome::new(
            EXIT_OK,
            json!({ "consistent": true, "witness": null }),
            "consistent",
        ),
        Some(chain) => Outcome::new(
            EXIT_NEGATIVE,
            json!({ "consistent": false, "witness": chain_doc(chain) }),
            format!("inconsistent: {chain}"),
        ),
    })
}

fn complete(path: &Path) -> Result<Outcome, Failure> {
    let doc: RelationPairDoc = load(path)?;
    let (r1, r2) = located(path, doc.to_relations())?;
    match common_completion(&r1, &r2) {
        Ok(t) => {
            let unique = completion_unique(&r1, &r2).map_err(|e| pair_error(path, e))?;
            let listed = t
                .id_pairs()
                .iter()
                .map(|(a, b)| format!("({a}, {b})"))
                .collect::<Vec<_>>()
                .join(" ");
            Ok(Outcome::new(
                EXIT_OK,
                json!({ "consistent": true, "pairs": pairs_doc(&t), "unique": unique }),
                format!("completion: {listed}\nunique: {unique}"),
            ))
        }
        Err(ConsistencyError::Inconsistent(chain)) => Ok(Outcome::new(
            EXIT_INCONSISTENT,
            json!({ "consistent": false, "witness": chain_doc(&chain) }),
            format!("inconsistent: {chain}"),
        )),
        Err(e) => Err(pair_error(path, e)),
    }
}

fn arbitrage(path: &Path) -> Result<Outcome, Failure> {
    let doc: MarketDoc = load(path)?;
    let market = located(path, doc.to_market())?;
    Ok(match market.detect_arbitrage() {
        None => Outcome::new(
            EXIT_OK,
            json!({ "arbitrage": false, "chain": null }),
            "no arbitrage",
        ),
        Some(chain) => Outcome::new(
            EXIT_NEGATIVE,
            json!({ "arbitrage": true, "chain": chain }),
            format!("arbitrage: {chain}"),
        ),
    })
}

fn witness_doc(w: &PathWitness) -> serde_json::Value {
    serde_json::to_value(w).expect("witness serializes")
}

fn cone_error(path: &Path, e: ConeError) -> Failure {
    Failure(format!("{}: {e}", path.display()))
}

fn cone_check(path: &Path) -> Result<Outcome, Failure> {
    let doc: ConePairDoc = load(path)?;
    let (c1, c2) = located(path, doc.to_cones())?;
    let verdict = path_consistent(&c1, &c2).map_err(|e| cone_error(path, e))?;
    Ok(match verdict.witness() {
        None => Outcome::new(
            EXIT_OK,
            json!({ "path_consistent": true, "witness": null }),
            "path-consistent",
        ),
        Some(w) => Outcome::new(
            EXIT_NEGATIVE,
            json!({ "path_consistent": false, "witness": witness_doc(w) }),
            format!("not path-consistent: {w}"),
        ),
    })
}

fn cone_complete(path: &Path) -> Result<Outcome, Failure> {
    let doc: ConePairDoc = load(path)?;
    let (c1, c2) = located(path, doc.to_cones())?;
    match common_cone_completion(&c1, &c2) {
        Ok(f) => {
            let verified = verify_common_completion(&c1, &c2, &f);
            let summary = format!("functional: ({})", f.to_strings().join(", "));
            Ok(Outcome::new(
                EXIT_OK,
                json!({ "path_consistent": true, "functional": f, "verified": verified }),
                summary,
            ))
        }
        Err(ConeError::Inconsistent(w)) => Ok(Outcome::new(
            EXIT_INCONSISTENT,
            json!({ "path_consistent": false, "witness": witness_doc(&w) }),
            format!("not path-consistent: {w}"),
        )),
        Err(e) => Err(cone_error(path, e)),
    }
}

fn cone_describe(path: &Path) -> Result<Outcome, Failure> {
    let doc: ConeDoc = load(path)?;
    let c = located(path, doc.to_cone())?;
    let facets = c.facets();
    let lin = c.linear_part_basis();
    let rays = c.extreme_rays();
    let total = c.is_total();
    let summary = format!(
        "{} facet inequalities, linear part of dimension {}, {} extreme rays, total: {total}",
        facets.len(),
        lin.len(),
        rays.len()
    );
    Ok(Outcome::new(
        EXIT_OK,
        json!({
            "dim": c.dim(),
            "facets": facets,
            "linear_part_basis": lin,
            "extreme_rays": rays,
            "total": total,
        }),
        summary,
    ))
}

fn pareto(path: &Path) -> Result<Outcome, Failure> {
    #[derive(Serialize)]
    struct Doc<T: Serialize> {
        improvement: Option<T>,
    }
    let doc: ConePairDoc = load(path)?;
    let (c1, c2) = located(path, doc.to_cones())?;
    let imp = pareto_improvement(&c1, &c2).map_err(|e| cone_error(path, e))?;
    let summary = match &imp {
        None => "none".to_owned(),
        Some(i) => format!(
            "improvement: delta = {}, strict for agent 1: {}, strict for agent 2: {}",
            i.delta, i.strict_for_1, i.strict_for_2
        ),
    };
    let doc = serde_json::to_value(Doc { improvement: imp }).expect("improvement serializes");
    Ok(Outcome::new(EXIT_OK, doc, summary))
}

//! `defeasor`: rank a defeasible knowledge base, answer queries under the
//! four closures, list bases and cross-check the library against the oracle.

mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use defeasor_core::oracle::{cross_check, Agreement, OracleCheck};
use defeasor_core::{
    is_classically_consistent, parse_concept, parse_kb, parse_query, BaseOrder, Closure, Error, KnowledgeBase,
    OracleBounds, Query, Rank, Reasoner, DEFAULT_NODE_BUDGET,
};

const EXIT_PARSE: u8 = 2;
const EXIT_INCONSISTENT: u8 = 3;
const EXIT_RESOURCE: u8 = 4;
const EXIT_INFINITE_RANK: u8 = 5;
const EXIT_DISAGREE: u8 = 6;
const EXIT_UNKNOWN: u8 = 7;

#[derive(Parser, Debug)]
#[command(name = "defeasor", version, about = "Defeasible reasoning for ALC knowledge bases with typicality")]
struct Cli {
    /// Tableau expansion budget per satisfiability test.
    #[arg(long, global = true, env = "DEFEASOR_NODE_BUDGET", default_value_t = DEFAULT_NODE_BUDGET)]
    node_budget: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the level sequence, strata and the rank of every default antecedent.
    Rank {
        kb: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Decide a query; exits 0 when entailed and 1 when not.
    Query {
        kb: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        /// `C ~> D` for a defeasible query, `C => D` for a strict one.
        query: String,
        #[arg(long)]
        json: bool,
        /// Report entailment-check counts.
        #[arg(long)]
        stats: bool,
    },
    /// List the maximal bases of a focus concept, grouped by rank.
    Bases {
        kb: PathBuf,
        #[arg(long)]
        concept: String,
        #[arg(long, value_enum)]
        order: Order,
        #[arg(long)]
        json: bool,
    },
    /// Cross-check the library against the model oracle.
    Oracle {
        kb: PathBuf,
        #[arg(long, value_enum)]
        check: Check,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        max_atoms: Option<u64>,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        max_domain: Option<u64>,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        max_rank: Option<u64>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Rc,
    Sk,
    Mp,
    Lex,
}

impl From<Mode> for Closure {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Rc => Closure::Rational,
            Mode::Sk => Closure::Skeptical,
            Mode::Mp => Closure::Mp,
            Mode::Lex => Closure::Lex,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Order {
    Mp,
    Lex,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Check {
    RcVsModels,
    SkVsDisk,
    MpVsBp,
    Exceptional,
}

impl From<Check> for OracleCheck {
    fn from(c: Check) -> Self {
        match c {
            Check::RcVsModels => OracleCheck::RcVsModels,
            Check::SkVsDisk => OracleCheck::SkVsDisk,
            Check::MpVsBp => OracleCheck::MpVsBp,
            Check::Exceptional => OracleCheck::Exceptional,
        }
    }
}

/// A failure with its exit code.
struct Failure(u8, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) => EXIT_PARSE,
            Error::ResourceLimit { .. } | Error::CandidateBudget { .. } => EXIT_RESOURCE,
            Error::InfiniteRank(_) => EXIT_INFINITE_RANK,
            Error::BoundsExceeded(_) | Error::BoundsInsufficient(_) | Error::NotRoleFree => EXIT_UNKNOWN,
        };
        Failure(code, e.to_string())
    }
}

/// What to print and how to exit.
struct Outcome {
    stdout: String,
    warnings: Vec<String>,
    code: u8,
}

fn load(path: &Path) -> Result<KnowledgeBase, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure(EXIT_PARSE, format!("cannot read {}: {e}", path.display())))?;
    parse_kb(&text).map_err(|e| Failure(EXIT_PARSE, format!("{}:{e}", path.display())))
}

fn json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report serializes") + "\n"
}

fn infinite_rank_warning(c: &impl std::fmt::Display) -> String {
    format!("warning: `{c}` has infinite rank, so every typicality inclusion on it holds vacuously")
}

fn run(cli: Cli) -> Result<Outcome, Failure> {
    let budget = cli.node_budget;
    match cli.command {
        Command::Rank { kb, json: as_json } => {
            let kb = load(&kb)?;
            if !is_classically_consistent(&kb)? {
                return Err(Failure(EXIT_INCONSISTENT, "strict part and assertions are classically inconsistent".into()));
            }
            let r = Reasoner::with_budget(&kb, budget)?;
            let report = report::RankReport::new(&kb, &r)?;
            let warnings = report
                .ranks
                .iter()
                .filter(|(_, rank)| rank.is_infinite())
                .map(|(c, _)| infinite_rank_warning(c))
                .collect();
            let stdout = if as_json { json(&report) } else { report.text() };
            Ok(Outcome { stdout, warnings, code: 0 })
        }
        Command::Query { kb, mode, query, json: as_json, stats } => {
            let kb = load(&kb)?;
            let query = parse_query(&query).map_err(|e| Failure(EXIT_PARSE, format!("query:{e}")))?.normalize();
            let r = Reasoner::with_budget(&kb, budget)?;
            let report = report::QueryReport::new(&r, &query, mode.into(), stats)?;
            let mut warnings = Vec::new();
            if let (Query::Defeasible(b, _), Some(Rank::Infinite)) = (&query, report.rank) {
                warnings.push(infinite_rank_warning(b));
            }
            let stdout = if as_json { json(&report) } else { report.text() };
            Ok(Outcome { stdout, warnings, code: if report.answer { 0 } else { 1 } })
        }
        Command::Bases { kb, concept, order, json: as_json } => {
            let kb = load(&kb)?;
            let focus = parse_concept(&concept).map_err(|e| Failure(EXIT_PARSE, format!("concept:{e}")))?;
            let r = Reasoner::with_budget(&kb, budget)?;
            let order = match order {
                Order::Mp => BaseOrder::Mp,
                Order::Lex => BaseOrder::Lex,
            };
            let report = report::BasesReport::new(&r, &focus, order)?;
            let stdout = if as_json { json(&report) } else { report.text() };
            Ok(Outcome { stdout, warnings: Vec::new(), code: 0 })
        }
        Command::Oracle { kb, check, max_atoms, max_domain, max_rank, json: as_json } => {
            let kb = load(&kb)?;
            let mut bounds = OracleBounds::desk();
            let size = |v: u64| usize::try_from(v).unwrap_or(usize::MAX);
            if let Some(n) = max_atoms {
                bounds.max_atoms = size(n);
            }
            if let Some(n) = max_domain {
                bounds.max_domain = size(n);
            }
            if let Some(n) = max_rank {
                bounds.max_rank = size(n);
            }
            let r = Reasoner::with_budget(&kb, budget)?;
            let result = cross_check(&kb, &r, check.into(), &bounds)?;
            let code = match result.verdict {
                Agreement::Agree => 0,
                Agreement::Disagree => EXIT_DISAGREE,
                Agreement::Unknown => EXIT_UNKNOWN,
            };
            let stdout = if as_json { json(&result) } else { report::oracle_text(&result) };
            Ok(Outcome { stdout, warnings: Vec::new(), code })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            for w in &out.warnings {
                eprintln!("{w}");
            }
            print!("{}", out.stdout);
            ExitCode::from(out.code)
        }
        Err(Failure(code, message)) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}

//! Command-line front end for more-or-less CP-net reasoning.
//!
//! Exit codes: 0 success (query verdicts go to stdout), 1 bench disagreement
//! or internal error, 2 unreadable or malformed input, 3 validation failure,
//! 4 resource cap exceeded.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use mlcp::bench::{run_bench, BenchConfig, BenchError};
use mlcp::dominance::{dominates_in, dominates_rep_exhaustive, MoreOrLessNet, SearchOptions};
use mlcp::generate::{random_ml_net, GenSpec};
use mlcp::oracle::{induced_graph, oracle_path, DEFAULT_CAP};
use mlcp::{
    check_more_or_less, dominates_naive, optimize, order_outcomes, parse_cpnet, parse_cpnet_unchecked, serialize_cpnet,
    validate_structure, CpNet, Error, Outcome,
};

#[derive(Parser)]
#[command(name = "mlcp", version, about = "Reasoning over more-or-less CP-nets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check structure and report monotonicity of every variable.
    Validate { file: PathBuf },
    /// Best completion of a partial assignment.
    Optimize {
        file: PathBuf,
        /// Fixed values, e.g. `X=2,Y=a`.
        #[arg(long)]
        given: Option<String>,
    },
    /// Order outcomes so that none precedes an outcome dominating it.
    Order {
        file: PathBuf,
        #[arg(required = true)]
        outcomes: Vec<String>,
    },
    /// Does `better` dominate `worse`?
    Dominate(DominateArgs),
    /// Dominance by brute-force reachability.
    Oracle {
        file: PathBuf,
        #[command(flatten)]
        query: Query,
        #[command(flatten)]
        cap: OracleCap,
    },
    /// Induced preference graph in DOT format.
    Graph {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        cap: OracleCap,
    },
    /// Print a random more-or-less net.
    Gen {
        #[arg(long)]
        vars: usize,
        #[arg(long)]
        domain: usize,
        #[arg(long, default_value_t = 0)]
        parents: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Compare restricted and naive search on random nets.
    Bench(BenchArgs),
}

#[derive(Args)]
struct Query {
    #[arg(long)]
    better: String,
    #[arg(long)]
    worse: String,
}

#[derive(Args)]
struct OracleCap {
    /// Outcome budget for brute-force reasoning.
    #[arg(long, env = "MLCP_ORACLE_CAP", default_value_t = DEFAULT_CAP)]
    cap: u64,
}

#[derive(Args)]
struct DominateArgs {
    file: PathBuf,
    #[command(flatten)]
    query: Query,
    /// Search over every improving flip instead of representative values.
    #[arg(long, group = "engine")]
    naive: bool,
    /// Answer by brute-force reachability.
    #[arg(long, group = "engine")]
    oracle: bool,
    /// Repeat the search for every admissible representative choice.
    #[arg(long, group = "engine")]
    rep_exhaustive: bool,
    /// Print the witness, one outcome per line.
    #[arg(long)]
    show_sequence: bool,
    /// Print search statistics.
    #[arg(long)]
    stats: bool,
    #[arg(long, default_value_t = mlcp::dominance::DEFAULT_MAX_EXPANSIONS)]
    max_expansions: u64,
    #[command(flatten)]
    cap: OracleCap,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    trials: usize,
    #[arg(long)]
    vars: usize,
    #[arg(long)]
    domain: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// At most this many parents per variable (default: min(2, vars - 1)).
    #[arg(long)]
    parents: Option<usize>,
    #[arg(long, default_value_t = 10)]
    queries: usize,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Where to write the offending net if the searches disagree.
    #[arg(long, default_value = "mlcp-repro.mlcp")]
    repro: PathBuf,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match run(cli.command, &mut out) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    for cause in e.chain() {
        if let Some(err) = cause.downcast_ref::<Error>() {
            return match err {
                Error::Parse { .. } | Error::Outcome(_) | Error::Invalid(_) | Error::Precondition(_) => 2,
                Error::Structure(_)
                | Error::NotMoreOrLess(_)
                | Error::NotImproving(_)
                | Error::NotIrreducible(_)
                | Error::BadRepMap(_) => 3,
                Error::BudgetExceeded { .. } | Error::ExpansionCap { .. } | Error::TooManyCombinations { .. } => 4,
                Error::Invariant(_) => 1,
            };
        }
        if cause.downcast_ref::<io::Error>().is_some() {
            return 2;
        }
    }
    1
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load(path: &Path) -> Result<CpNet> {
    let text = read_text(path)?;
    parse_cpnet(&text).with_context(|| format!("in {}", path.display()))
}

fn outcome(net: &CpNet, literal: &str) -> Result<Outcome> {
    net.parse_outcome(literal)
        .with_context(|| format!("outcome `{literal}`"))
}

fn verdict(b: bool) -> &'static str {
    if b {
        "true"
    } else {
        "false"
    }
}

fn run(command: Command, out: &mut impl Write) -> Result<u8> {
    match command {
        Command::Validate { file } => {
            let text = read_text(&file)?;
            let net = parse_cpnet_unchecked(&text).with_context(|| format!("in {}", file.display()))?;
            let structure = validate_structure(&net);
            write!(out, "{structure}")?;
            if !structure.is_valid() {
                writeln!(out, "structure: INVALID ({})", structure.summary())?;
                return Ok(3);
            }
            writeln!(out, "structure: ok")?;
            write!(out, "{}", check_more_or_less(&net).render(&net))?;
        }
        Command::Optimize { file, given } => {
            let net = load(&file)?;
            let partial = match given.as_deref() {
                Some(literal) => net
                    .parse_assignment(literal)
                    .with_context(|| format!("assignment `{literal}`"))?,
                None => vec![None; net.len()],
            };
            writeln!(out, "{}", net.format_outcome(&optimize(&net, &partial)?))?;
        }
        Command::Order { file, outcomes } => {
            let net = load(&file)?;
            let items = outcomes
                .iter()
                .map(|s| outcome(&net, s))
                .collect::<Result<Vec<_>>>()?;
            for o in order_outcomes(&net, &items)? {
                writeln!(out, "{}", net.format_outcome(&o))?;
            }
        }
        Command::Dominate(args) => dominate(args, out)?,
        Command::Oracle { file, query, cap } => {
            let net = load(&file)?;
            let (better, worse) = (outcome(&net, &query.better)?, outcome(&net, &query.worse)?);
            let path = oracle_path(&net, &better, &worse, cap.cap)?;
            writeln!(out, "{}", verdict(path.is_some()))?;
        }
        Command::Graph { file, out: path, cap } => {
            let net = load(&file)?;
            let dot = induced_graph(&net, cap.cap)?.to_dot(&net);
            match path {
                Some(path) => fs::write(&path, dot).with_context(|| format!("cannot write {}", path.display()))?,
                None => out.write_all(dot.as_bytes())?,
            }
        }
        Command::Gen {
            vars,
            domain,
            parents,
            seed,
        } => {
            let net = random_ml_net(GenSpec::new(vars, domain, parents, seed)?)?;
            out.write_all(serialize_cpnet(&net).as_bytes())?;
        }
        Command::Bench(args) => return bench(args, out),
    }
    Ok(0)
}

fn dominate(args: DominateArgs, out: &mut impl Write) -> Result<()> {
    let net = load(&args.file)?;
    let (better, worse) = (outcome(&net, &args.query.better)?, outcome(&net, &args.query.worse)?);
    if args.oracle {
        let path = oracle_path(&net, &better, &worse, args.cap.cap)?;
        writeln!(out, "{}", verdict(path.is_some()))?;
        if args.show_sequence {
            for o in path.iter().flatten() {
                writeln!(out, "{}", net.format_outcome(o))?;
            }
        }
        return Ok(());
    }
    let result = if args.naive {
        dominates_naive(&net, &better, &worse, args.max_expansions)?
    } else {
        let ml = MoreOrLessNet::new(&net)?;
        let opts = SearchOptions {
            max_expansions: args.max_expansions,
            ..SearchOptions::default()
        };
        if args.rep_exhaustive {
            let r = dominates_rep_exhaustive(&ml, &better, &worse, &opts)?;
            writeln!(out, "{}", verdict(r.entailed))?;
            if args.stats {
                writeln!(out, "maps={} nodes={}", r.combinations, r.nodes_expanded)?;
            }
            return Ok(());
        }
        dominates_in(&ml, &better, &worse, &opts)?
    };
    writeln!(out, "{}", verdict(result.entailed))?;
    if args.show_sequence {
        for o in result.witness.iter().flatten() {
            writeln!(out, "{}", net.format_outcome(o))?;
        }
    }
    if args.stats {
        writeln!(out, "{}", result.stats.render())?;
    }
    Ok(())
}

fn bench(args: BenchArgs, out: &mut impl Write) -> Result<u8> {
    let mut cfg = BenchConfig::new(args.trials, args.vars, args.domain, args.seed);
    cfg.queries_per_trial = args.queries;
    if let Some(p) = args.parents {
        cfg.max_parents = p;
    }
    let report = match run_bench(&cfg) {
        Ok(report) => report,
        Err(BenchError::Disagreement(d)) => {
            fs::write(&args.repro, d.reproducer())
                .with_context(|| format!("cannot write {}", args.repro.display()))?;
            eprintln!(
                "error: verdicts disagree on {} (better {}, worse {}); net written to {}",
                d.net.name(),
                d.net.format_outcome(&d.better),
                d.net.format_outcome(&d.worse),
                args.repro.display()
            );
            return Ok(1);
        }
        Err(BenchError::Failed(e)) => return Err(e.into()),
    };
    match &args.csv {
        Some(path) => {
            let file = fs::File::create(path).with_context(|| format!("cannot write {}", path.display()))?;
            report.write_csv(file)?;
        }
        None => report.write_csv(&mut *out)?,
    }
    eprintln!("{}", report.summary());
    Ok(0)
}

//! Batch front end for the cutpoint toolkit.
//!
//! Exit codes: 0 success, 1 failed invariant check, 2 invalid input,
//! 3 pipeline precondition failure.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use cutpoint::binarize::{two_matrix_pfa, TwoMatrixOptions};
use cutpoint::construction::{backward_pfa, forward_pfa, ForwardOptions};
use cutpoint::pcp::{
    gpcp_to_json, instance_from_json, pcp_to_json, Instance, SearchLimits, SearchResult,
};
use cutpoint::pfa::{Comparison, Emptiness, Pfa};
use cutpoint::rational::Rational;
use cutpoint::semithue::{reduction_chain, word_problem_from_json};
use cutpoint::verify::{run_suite, CheckConfig, DEFAULT_SEED};

#[derive(Parser)]
#[command(
    name = "cutpoint",
    about = "Build, check and run small cutpoint automata constructed from word-matching problems",
    version
)]
struct Cli {
    /// Optional JSON config supplying defaults for numeric flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build an automaton from an instance file and write it as JSON.
    Build(BuildArgs),
    /// Evaluate an automaton on one word.
    Eval(EvalArgs),
    /// Bounded searches: instance solving, rewriting reachability,
    /// automaton emptiness.
    Solve(SolveArgs),
    /// Run a named invariant suite (or `all`).
    Check(CheckArgs),
    /// Run the rewriting-system reduction chain and emit instance files.
    Convert(ConvertArgs),
    /// Print and verify the published empty-word counterexample.
    Counterexample,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Variant {
    /// 7-state doubly stochastic automaton, cutpoint 1/7.
    Forward7,
    /// 6-state row-stochastic automaton with fractional outputs, cutpoint 1/6.
    Backward6,
    /// Two-matrix automaton over {a,b}.
    TwoMatrix,
}

#[derive(Args)]
struct BuildArgs {
    #[arg(long, value_enum)]
    variant: Variant,
    /// Instance file (kind "pcp").
    #[arg(long)]
    input: PathBuf,
    /// Where to write the automaton JSON.
    #[arg(long)]
    output: PathBuf,
    /// Where to write the build report JSON.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Blend constant override, e.g. 1/1000.
    #[arg(long)]
    alpha: Option<String>,
    /// Use weak acceptance (≥ cutpoint) instead of strict.
    #[arg(long)]
    weak: bool,
    /// Ignore structure markers instead of merging the forced pair.
    #[arg(long)]
    no_merge: bool,
}

#[derive(Args)]
struct EvalArgs {
    /// Automaton JSON file.
    #[arg(long)]
    pfa: PathBuf,
    /// Input word, one alphabet symbol per character.
    #[arg(long)]
    word: String,
}

#[derive(Args)]
struct SolveArgs {
    /// Plain instance file.
    #[arg(long)]
    pcp: Option<PathBuf>,
    /// Generalized instance file.
    #[arg(long)]
    gpcp: Option<PathBuf>,
    /// Rewriting word problem file.
    #[arg(long)]
    semithue: Option<PathBuf>,
    /// Automaton JSON file (bounded emptiness search).
    #[arg(long)]
    pfa: Option<PathBuf>,
    /// Maximum solution length for instance searches.
    #[arg(long)]
    max_steps: Option<usize>,
    /// Maximum overhang length kept during instance searches.
    #[arg(long)]
    max_overhang: Option<usize>,
    /// Maximum derivation depth for rewriting reachability.
    #[arg(long)]
    depth: Option<usize>,
    /// Maximum word length for the emptiness search.
    #[arg(long)]
    max_len: Option<usize>,
    /// Skip the empty word in the emptiness search.
    #[arg(long)]
    exclude_empty: bool,
}

#[derive(Args)]
struct CheckArgs {
    /// Suite name: multiplicative, equality-detection, column-stochastic,
    /// pipeline-algebra, binary-reduction, code-uniqueness, chain-parity,
    /// counterexample, or all.
    suite: String,
    #[arg(long)]
    trials: Option<usize>,
    /// Seed for randomized suites (default 1729).
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    max_len: Option<usize>,
    /// Emit the outcomes as a JSON array instead of text lines.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ConvertArgs {
    /// Rewriting word problem file.
    #[arg(long)]
    semithue: PathBuf,
    /// Directory for the emitted instance files.
    #[arg(long)]
    out_dir: PathBuf,
    /// Emit every intermediate stage, not just the final binary instance.
    #[arg(long)]
    emit_all: bool,
}

/// Defaults that a config file may supply; explicit flags win.
#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    seed: Option<u64>,
    trials: Option<usize>,
    max_steps: Option<usize>,
    max_overhang: Option<usize>,
    max_len: Option<usize>,
    depth: Option<usize>,
    alpha: Option<String>,
}

enum Failure {
    /// Exit 2: unreadable or malformed input.
    BadInput(String),
    /// Exit 3: a pipeline precondition rejected a well-formed input.
    Precondition(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::BadInput(_) => 2,
            Failure::Precondition(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::BadInput(m) | Failure::Precondition(m) => m,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::BadInput(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents)
        .map_err(|e| Failure::BadInput(format!("cannot write {}: {e}", path.display())))
}

fn load_config(path: &Option<PathBuf>) -> Result<FileConfig, Failure> {
    match path {
        None => Ok(FileConfig::default()),
        Some(p) => serde_json::from_str(&read_file(p)?)
            .map_err(|e| Failure::BadInput(format!("bad config {}: {e}", p.display()))),
    }
}

fn load_pcp(path: &Path) -> Result<cutpoint::PcpInstance, Failure> {
    match instance_from_json(&read_file(path)?) {
        Ok(Instance::Pcp(p)) => Ok(p),
        Ok(Instance::Gpcp(_)) => Err(Failure::BadInput(format!(
            "{} holds a generalized instance; this command needs kind \"pcp\"",
            path.display()
        ))),
        Err(e) => Err(Failure::BadInput(format!("{}: {e}", path.display()))),
    }
}

fn load_gpcp(path: &Path) -> Result<cutpoint::GpcpInstance, Failure> {
    match instance_from_json(&read_file(path)?) {
        Ok(Instance::Gpcp(g)) => Ok(g),
        Ok(Instance::Pcp(_)) => Err(Failure::BadInput(format!(
            "{} holds a plain instance; this command needs kind \"gpcp\"",
            path.display()
        ))),
        Err(e) => Err(Failure::BadInput(format!("{}: {e}", path.display()))),
    }
}

fn parse_alpha(flag: &Option<String>, config: &FileConfig) -> Result<Option<Rational>, Failure> {
    let source = flag.as_ref().or(config.alpha.as_ref());
    match source {
        None => Ok(None),
        Some(s) => s
            .parse::<Rational>()
            .map(Some)
            .map_err(|e| Failure::BadInput(format!("bad blend constant {s:?}: {e}"))),
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let config = load_config(&cli.config)?;
    match cli.command {
        Command::Build(args) => build(args, &config),
        Command::Eval(args) => eval(args),
        Command::Solve(args) => solve(args, &config),
        Command::Check(args) => check(args, &config),
        Command::Convert(args) => convert(args),
        Command::Counterexample => counterexample(),
    }
}

fn build(args: BuildArgs, config: &FileConfig) -> Result<u8, Failure> {
    let mut instance = load_pcp(&args.input)?;
    if args.no_merge {
        instance = instance
            .with_structure(None, None)
            .expect("clearing markers cannot fail");
    }
    let alpha = parse_alpha(&args.alpha, config)?;
    let comparison = if args.weak {
        Comparison::Weak
    } else {
        Comparison::Strict
    };

    let build = match args.variant {
        Variant::Forward7 => {
            let options = ForwardOptions {
                reverse_and_merge: instance.forced_end().is_some(),
                alpha,
                comparison,
            };
            forward_pfa(&instance, &options).map_err(|e| Failure::Precondition(e.to_string()))?
        }
        Variant::Backward6 => {
            // The backward build consumes a forced start pair; an instance
            // carrying only a forced end pair is reversed first.
            let instance = if instance.forced_start().is_none() && instance.forced_end().is_some() {
                instance.reverse()
            } else {
                instance
            };
            if alpha.is_some() {
                return Err(Failure::BadInput(
                    "the backward variant does not blend; --alpha is not accepted".to_string(),
                ));
            }
            backward_pfa(&instance, comparison).map_err(|e| Failure::Precondition(e.to_string()))?
        }
        Variant::TwoMatrix => {
            let options = TwoMatrixOptions { alpha, comparison };
            let built = two_matrix_pfa(&instance, &options)
                .map_err(|e| Failure::Precondition(e.to_string()))?;
            cutpoint::construction::PipelineBuild {
                pfa: built.pfa,
                report: built.report,
            }
        }
    };

    write_file(&args.output, &build.pfa.to_json())?;
    if let Some(report_path) = &args.report {
        write_file(report_path, &build.report.to_json())?;
    }
    println!(
        "wrote {}-state automaton over {} symbols (cutpoint {}) to {}",
        build.pfa.automaton.dim(),
        build.pfa.automaton.alphabet().len(),
        build.pfa.cutpoint,
        args.output.display()
    );
    Ok(0)
}

fn eval(args: EvalArgs) -> Result<u8, Failure> {
    let pfa = Pfa::from_json(&read_file(&args.pfa)?)
        .map_err(|e| Failure::BadInput(format!("{}: {e}", args.pfa.display())))?;
    let value = pfa
        .value(&args.word)
        .map_err(|e| Failure::BadInput(e.to_string()))?;
    let accepted = match pfa.comparison {
        Comparison::Strict => value > pfa.cutpoint,
        Comparison::Weak => value >= pfa.cutpoint,
    };
    let mode = match pfa.comparison {
        Comparison::Strict => ">",
        Comparison::Weak => ">=",
    };
    println!("value = {value}");
    println!(
        "{} (cutpoint {} {})",
        if accepted { "accept" } else { "reject" },
        mode,
        pfa.cutpoint
    );
    Ok(0)
}

fn limits(args: &SolveArgs, config: &FileConfig) -> SearchLimits {
    let max_steps = args.max_steps.or(config.max_steps).unwrap_or(32);
    let max_overhang = args.max_overhang.or(config.max_overhang).unwrap_or(64);
    SearchLimits::new(max_steps).with_overhang(max_overhang)
}

fn print_search_result(result: SearchResult<cutpoint::IndexSequence>, limits: &SearchLimits) {
    match result {
        SearchResult::Found(seq) => println!("solution: {seq}"),
        SearchResult::Closed => {
            println!("closed: the reachable configuration space holds no solution")
        }
        SearchResult::Exhausted => println!(
            "exhausted: limits reached before the search closed (max-steps {}, max-overhang {})",
            limits.max_steps, limits.max_overhang
        ),
    }
}

fn solve(args: SolveArgs, config: &FileConfig) -> Result<u8, Failure> {
    let inputs = [
        args.pcp.is_some(),
        args.gpcp.is_some(),
        args.semithue.is_some(),
        args.pfa.is_some(),
    ]
    .iter()
    .filter(|b| **b)
    .count();
    if inputs != 1 {
        return Err(Failure::BadInput(
            "pass exactly one of --pcp, --gpcp, --semithue, --pfa".to_string(),
        ));
    }

    if let Some(path) = &args.pcp {
        let instance = load_pcp(path)?;
        let limits = limits(&args, config);
        print_search_result(instance.bounded_solve(&limits), &limits);
    } else if let Some(path) = &args.gpcp {
        let instance = load_gpcp(path)?;
        let limits = limits(&args, config);
        print_search_result(instance.bounded_solve(&limits), &limits);
    } else if let Some(path) = &args.semithue {
        let problem = word_problem_from_json(&read_file(path)?)
            .map_err(|e| Failure::BadInput(format!("{}: {e}", path.display())))?;
        let depth = args.depth.or(config.depth).unwrap_or(16);
        match problem
            .system
            .bounded_derives(&problem.source, &problem.target, depth)
        {
            SearchResult::Found(path) => println!("derivation: {}", path.join(" -> ")),
            SearchResult::Closed => {
                println!("closed: the target is not reachable from the source")
            }
            SearchResult::Exhausted => {
                println!("exhausted: depth {depth} reached before the search closed")
            }
        }
    } else if let Some(path) = &args.pfa {
        let pfa = Pfa::from_json(&read_file(path)?)
            .map_err(|e| Failure::BadInput(format!("{}: {e}", path.display())))?;
        let max_len = args.max_len.or(config.max_len).unwrap_or(6);
        match pfa.bounded_emptiness(max_len, args.exclude_empty) {
            Emptiness::Witness(word) => {
                if word.is_empty() {
                    println!("accepted word: (empty)");
                } else {
                    println!("accepted word: {word}");
                }
            }
            Emptiness::EmptyWithinBound { max_len } => {
                println!("no accepted word within length {max_len} (bounded search only)")
            }
        }
    }
    Ok(0)
}

fn check(args: CheckArgs, config: &FileConfig) -> Result<u8, Failure> {
    let defaults = CheckConfig::default();
    let check_config = CheckConfig {
        trials: args.trials.or(config.trials).unwrap_or(defaults.trials),
        seed: args.seed.or(config.seed).unwrap_or(DEFAULT_SEED),
        max_len: args.max_len.or(config.max_len).unwrap_or(defaults.max_len),
    };
    let outcomes = run_suite(&args.suite, &check_config).ok_or_else(|| {
        Failure::BadInput(format!(
            "unknown suite {:?}; known suites: {} and all",
            args.suite,
            cutpoint::verify::SUITES.join(", ")
        ))
    })?;
    let all_passed = outcomes.iter().all(|o| o.passed);
    if args.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&outcomes).expect("outcomes serialize")
        );
    } else {
        for outcome in &outcomes {
            println!(
                "{} {}: {}",
                if outcome.passed { "PASS" } else { "FAIL" },
                outcome.name,
                outcome.details
            );
        }
    }
    Ok(if all_passed { 0 } else { 1 })
}

fn convert(args: ConvertArgs) -> Result<u8, Failure> {
    let problem = word_problem_from_json(&read_file(&args.semithue)?)
        .map_err(|e| Failure::BadInput(format!("{}: {e}", args.semithue.display())))?;
    let chain = reduction_chain(&problem).map_err(|e| Failure::Precondition(e.to_string()))?;
    fs::create_dir_all(&args.out_dir)
        .map_err(|e| Failure::BadInput(format!("cannot create {}: {e}", args.out_dir.display())))?;

    let binary_path = args.out_dir.join("pcp2.json");
    if args.emit_all {
        let gpcp_path = args.out_dir.join("gpcp.json");
        let five_path = args.out_dir.join("pcp5.json");
        write_file(&gpcp_path, &gpcp_to_json(&chain.gpcp))?;
        write_file(&five_path, &pcp_to_json(&chain.five_letter))?;
        write_file(&binary_path, &pcp_to_json(&chain.binary))?;
        println!(
            "wrote {} ({} pairs), {} ({} pairs), {} ({} pairs)",
            gpcp_path.display(),
            chain.gpcp.len(),
            five_path.display(),
            chain.five_letter.len(),
            binary_path.display(),
            chain.binary.len()
        );
    } else {
        write_file(&binary_path, &pcp_to_json(&chain.binary))?;
        println!(
            "wrote {} ({} pairs over a binary alphabet)",
            binary_path.display(),
            chain.binary.len()
        );
    }
    Ok(0)
}

fn counterexample() -> Result<u8, Failure> {
    let (instance, witness) = cutpoint::semithue::empty_word_counterexample();
    println!("three-pair instance over {{a, b}}:");
    for (i, pair) in instance.pairs().iter().enumerate() {
        let bottom = if pair.bottom.is_empty() {
            "(empty)"
        } else {
            &pair.bottom
        };
        println!("  pair {}: top {:10}  bottom {}", i + 1, pair.top, bottom);
    }
    let (top, bottom) = instance
        .apply(&witness)
        .expect("witness indices are in range");
    let solves = top == bottom;
    println!("witness {witness}: both rows spell {top}");
    println!(
        "verified: {} (first index {} ≠ 1; pair 2 has an empty bottom word)",
        solves,
        witness.as_slice()[0]
    );
    Ok(if solves { 0 } else { 1 })
}

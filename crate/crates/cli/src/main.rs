use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use rich_words::eertree::{defect, first_non_rich_prefix, Antimorphism, Eertree};
use rich_words::exact::Exponent;
use rich_words::generators::{verify_all, word_r, RMethod};
use rich_words::numeration::PellRep;
use rich_words::repetitions::critical_exponent;
use rich_words::reproduce::{analyze_r, reproduce, ReportEnvelope, ReproduceOptions, Target};
use rich_words::search::{run_search_with, RunOptions, SearchConfig, SearchMode, Threshold};
use rich_words::{parse_symbols, render_symbols, Word};

#[derive(Parser)]
#[command(name = "richwords", version, about = "Rich words, the word r, and power-avoiding searches")]
struct Cli {
    /// Output format for commands that support both.
    #[arg(long, global = true, value_enum, env = "RICHWORDS_FORMAT", default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Pell numeration: encode an integer or decode a digit string (msd first).
    Pell {
        #[command(subcommand)]
        op: PellOp,
    },
    /// Print a prefix of r.
    Generate {
        #[arg(long, default_value = "phi-tau")]
        method: RMethod,
        #[arg(long)]
        length: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the morphism identities up to index K.
    VerifyMorphisms {
        #[arg(long, default_value_t = 12)]
        max_k: usize,
    },
    /// Is the word rich? Exits 1 if not.
    CheckRich(WordInput),
    /// Palindromic graph (eertree) of a word.
    Palgraph {
        #[arg(long)]
        word: String,
    },
    /// Critical exponent of a finite word, as a/b.
    CriticalExponent {
        #[command(flatten)]
        input: WordInput,
        /// Only look at the first L symbols.
        #[arg(long)]
        max_length: Option<usize>,
    },
    /// Repetition table for a prefix of r.
    AnalyzeR {
        #[arg(long, default_value_t = 20_000)]
        length: usize,
    },
    /// Theta-defect of a word (plain reversal unless --theta is given).
    Defect {
        #[command(flatten)]
        input: WordInput,
        /// Letter involution as a digit string: symbol i maps to the i-th digit.
        #[arg(long)]
        theta: Option<String>,
    },
    /// Backtracking search for long rich words avoiding high powers.
    Search(SearchArgs),
    /// Rerun one of the published computations and report pass/fail.
    Reproduce {
        target: Target,
        #[arg(long)]
        max_length: Option<usize>,
        #[arg(long)]
        node_budget: Option<u64>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
}

#[derive(Subcommand)]
enum PellOp {
    Encode { n: u64 },
    Decode { digits: String },
}

#[derive(Args)]
struct WordInput {
    /// The word itself, as digits.
    #[arg(long, conflicts_with_all = ["input", "stdin"])]
    word: Option<String>,
    #[arg(long, conflicts_with = "stdin")]
    input: Option<PathBuf>,
    #[arg(long)]
    stdin: bool,
}

impl WordInput {
    fn read(&self) -> Result<Word> {
        let text = match (&self.word, &self.input, self.stdin) {
            (Some(w), _, _) => w.clone(),
            (None, Some(path), _) => fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?,
            (None, None, true) => {
                let mut s = String::new();
                io::stdin().read_to_string(&mut s)?;
                s
            }
            (None, None, false) => bail!("give the word with --word, --input FILE or --stdin"),
        };
        Ok(parse_symbols(&text)?)
    }
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    alphabet: u8,
    /// Rational threshold A/B.
    #[arg(long, required_unless_present = "surd", conflicts_with = "surd")]
    threshold: Option<Exponent>,
    /// Surd threshold A+Bsqrt2/C.
    #[arg(long)]
    surd: Option<String>,
    #[arg(long, default_value = "exhaustive")]
    mode: SearchMode,
    #[arg(long)]
    max_depth: Option<usize>,
    #[arg(long)]
    node_budget: Option<u64>,
    /// Write a checkpoint here every --checkpoint-interval nodes and at the end.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    #[arg(long, default_value_t = 1_000_000)]
    checkpoint_interval: u64,
    #[arg(long)]
    resume: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long)]
    split_depth: Option<usize>,
    /// Recompute incremental state from scratch near the root.
    #[arg(long)]
    validate: bool,
}

enum Outcome {
    Pass,
    Fail,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn emit(text: &str) -> Result<()> {
    let mut out = io::stdout().lock();
    let written = out.write_all(text.as_bytes()).and_then(|_| match text.ends_with('\n') {
        true => Ok(()),
        false => out.write_all(b"\n"),
    });
    match written {
        // A closed pipe (as with `| head`) is not an error.
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn emit_json(command: &str, config: Value, pass: Option<bool>, payload: Value) -> Result<()> {
    let envelope = ReportEnvelope::new(command, config, pass, payload);
    emit(&serde_json::to_string_pretty(&envelope)?)
}

fn verdict(pass: bool) -> Outcome {
    if pass {
        Outcome::Pass
    } else {
        Outcome::Fail
    }
}

fn run(cli: Cli) -> Result<Outcome> {
    let json = cli.format == Format::Json;
    match cli.command {
        Command::Pell { op } => {
            let (input, output) = match op {
                PellOp::Encode { n } => (n.to_string(), PellRep::encode(n).to_string()),
                PellOp::Decode { digits } => {
                    let rep: PellRep = digits.parse()?;
                    if !rep.is_canonical() {
                        bail!("{digits} is not a canonical Pell representation");
                    }
                    (digits, rep.decode()?.to_string())
                }
            };
            if json {
                emit_json("pell", json!({"input": input}), None, json!({"output": output}))?;
            } else {
                emit(&output)?;
            }
            Ok(Outcome::Pass)
        }
        Command::Generate { method, length, out } => {
            let word = render_symbols(&word_r(method, length));
            match out {
                Some(path) => fs::write(&path, format!("{word}\n")).with_context(|| format!("writing {}", path.display()))?,
                None if json => emit_json(
                    "generate",
                    json!({"method": method.name(), "length": length}),
                    None,
                    json!({"word": word}),
                )?,
                None => emit(&word)?,
            }
            Ok(Outcome::Pass)
        }
        Command::VerifyMorphisms { max_k } => {
            let report = verify_all(max_k);
            let pass = report.all_hold();
            if json {
                emit_json("verify-morphisms", json!({"max_k": max_k}), Some(pass), serde_json::to_value(&report)?)?;
            } else {
                for c in report.failures() {
                    emit(&format!("FAIL {} at {}", c.identity, c.index))?;
                }
                emit(&format!("{} identity checks, {}", report.checks.len(), if pass { "all hold" } else { "some fail" }))?;
            }
            Ok(verdict(pass))
        }
        Command::CheckRich(input) => {
            let word = input.read()?;
            let failure = first_non_rich_prefix(&word);
            let palindromes = rich_words::eertree::distinct_palindromes(&word);
            if json {
                emit_json(
                    "check-rich",
                    json!({"length": word.len()}),
                    Some(failure.is_none()),
                    json!({"rich": failure.is_none(), "distinct_palindromes": palindromes, "first_non_rich_prefix": failure}),
                )?;
            } else {
                match failure {
                    None => emit(&format!("rich (length {}, {} distinct palindromes)", word.len(), palindromes))?,
                    Some(n) => emit(&format!("not rich: the prefix of length {n} is the first that is not rich"))?,
                }
            }
            Ok(verdict(failure.is_none()))
        }
        Command::Palgraph { word } => {
            let w = parse_symbols(&word)?;
            let alphabet = w.iter().max().map_or(1, |&m| m + 1);
            let graph = Eertree::from_word(alphabet, &w)?.palindrome_graph();
            match cli.format {
                Format::Json => emit(&serde_json::to_string_pretty(&graph)?)?,
                _ => emit(&graph.to_dot())?,
            }
            Ok(Outcome::Pass)
        }
        Command::CriticalExponent { input, max_length } => {
            let mut word = input.read()?;
            if let Some(l) = max_length {
                word.truncate(l);
            }
            let e = critical_exponent(&word)?;
            if json {
                emit_json(
                    "critical-exponent",
                    json!({"length": word.len()}),
                    None,
                    json!({"critical_exponent": e, "approx": e.to_f64()}),
                )?;
            } else {
                emit(&format!("{e} (~{:.6})", e.to_f64()))?;
            }
            Ok(Outcome::Pass)
        }
        Command::AnalyzeR { length } => {
            let analysis = analyze_r(length)?;
            let pass = analysis.predictions_hold();
            match cli.format {
                Format::Json => emit_json("analyze-r", json!({"length": length}), Some(pass), serde_json::to_value(&analysis)?)?,
                _ => {
                    emit(&analysis.to_csv())?;
                    let periods: Vec<String> = analysis
                        .high_power_periods
                        .iter()
                        .map(|&p| format!("{p}={}", PellRep::encode(p as u64)))
                        .collect();
                    eprintln!("high-power periods (exponent >= 5/2): {}", periods.join(" "));
                    eprintln!("critical exponent of the prefix: {}", analysis.critical_exponent);
                }
            }
            Ok(verdict(pass))
        }
        Command::Defect { input, theta } => {
            let word = input.read()?;
            let theta = match theta {
                Some(map) => Antimorphism::new(parse_symbols(&map)?)?,
                None => Antimorphism::reversal(word.iter().max().map_or(1, |&m| m + 1)),
            };
            let d = defect(&word, &theta)?;
            if json {
                emit_json("defect", json!({"length": word.len()}), None, json!({"defect": d}))?;
            } else {
                emit(&d.to_string())?;
            }
            Ok(Outcome::Pass)
        }
        Command::Search(args) => search(args, json),
        Command::Reproduce { target, max_length, node_budget, workers } => {
            let options = ReproduceOptions { max_length, node_budget, workers };
            let report = reproduce(target, &options)?;
            if cli.format == Format::Text {
                emit(&format!("{} {}", target, if report.pass { "PASS" } else { "FAIL" }))?;
                emit(&serde_json::to_string_pretty(&report.payload)?)?;
            } else {
                emit_json(&format!("reproduce {target}"), report.config, Some(report.pass), report.payload)?;
            }
            Ok(verdict(report.pass))
        }
    }
}

fn search(args: SearchArgs, json: bool) -> Result<Outcome> {
    let threshold = match (args.threshold, &args.surd) {
        (Some(t), None) => Threshold::Rational(t),
        (None, Some(s)) => Threshold::Surd(s.parse()?),
        _ => bail!("give exactly one of --threshold and --surd"),
    };
    let mut config = SearchConfig::new(args.alphabet, threshold, args.mode);
    config.max_depth = args.max_depth;
    config.node_budget = args.node_budget;
    config.validate = args.validate;
    if args.checkpoint.is_some() {
        config.checkpoint_interval = Some(args.checkpoint_interval);
    }
    let options = RunOptions {
        workers: args.workers,
        split_depth: args.split_depth,
        checkpoint_path: args.checkpoint,
        resume_path: args.resume,
    };
    let result = run_search_with(&config, &options).map_err(|e| anyhow!(e))?;
    if json {
        emit_json("search", serde_json::to_value(&config)?, None, serde_json::to_value(&result)?)?;
    } else {
        emit(&format!(
            "longest {} ({})\nwitness {}\nnodes {}\nwall_time_ms {}",
            result.longest_length,
            if result.exhausted {
                "exhausted"
            } else if result.budget_hit {
                "node budget reached"
            } else {
                "depth cap reached"
            },
            result.witness,
            result.nodes_explored,
            result.wall_time_ms
        ))?;
    }
    Ok(Outcome::Pass)
}

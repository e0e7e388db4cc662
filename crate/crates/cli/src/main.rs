use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use hrgpsr::bench::{self, BenchConfig, Engine, Family};
use hrgpsr::cfa::{cfa_to_dot, conflicts, dump_cfa};
use hrgpsr::cyk::cyk_parse_with_timeout;
use hrgpsr::engine::{Outcome, ParseConfig, ParseSession, Strategy};
use hrgpsr::{build_cfa, bundled, parse_grammar, Grammar, Hypergraph};

#[derive(Parser)]
#[command(name = "hrgpsr", version, about = "Parse hypergraphs with hyperedge replacement grammars")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the characteristic automaton of a grammar and its conflicts.
    Cfa {
        /// Grammar file, or one of the bundled names sierpinski, sp, flowchart.
        grammar: String,
        /// Emit Graphviz instead of the text dump.
        #[arg(long)]
        dot: bool,
    },
    /// Parse a graph file.
    Parse {
        grammar: String,
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = StrategyArg::Dfs)]
        strategy: StrategyArg,
        #[arg(long)]
        memo: bool,
        #[arg(long)]
        trace: bool,
        #[arg(long, value_enum, default_value_t = EngineArg::Gpsr)]
        engine: EngineArg,
        /// Print the final memo store.
        #[arg(long)]
        dump_memo: bool,
        #[arg(long)]
        max_steps: Option<u64>,
        /// Timeout in seconds.
        #[arg(long)]
        timeout: Option<f64>,
    },
    /// Time the parsers on generated inputs and write CSV.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "sierpinski")]
        grammar: Vec<Family>,
        /// Sizes as `lo..hi`, `lo..hi/step` or a comma separated list.
        #[arg(long, default_value = "1..20")]
        n: String,
        #[arg(long, value_delimiter = ',', default_value = "cyk,gpsr-dfs,gpsr-memo")]
        engines: Vec<Engine>,
        /// Output file; standard output if absent.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long, default_value_t = 5)]
        reps: usize,
        /// Per-cell timeout in seconds.
        #[arg(long, default_value_t = 60.0)]
        timeout: f64,
        /// Leave the timing column empty, for byte-stable output.
        #[arg(long)]
        no_timings: bool,
    },
    /// Write a generated benchmark graph.
    Gen {
        #[arg(long)]
        grammar: Family,
        #[arg(long)]
        n: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Dfs,
    Bfs,
    Prio,
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Gpsr,
    Cyk,
}

fn load_grammar(arg: &str) -> Result<Grammar> {
    if let Some(g) = bundled::by_name(arg) {
        return Ok(g);
    }
    let text = fs::read_to_string(arg).with_context(|| format!("reading grammar {arg}"))?;
    parse_grammar(&text).with_context(|| format!("parsing grammar {arg}"))
}

fn parse_sizes(s: &str) -> Result<Vec<usize>> {
    if let Some((lo, rest)) = s.split_once("..") {
        let (hi, step) = match rest.split_once('/') {
            Some((hi, step)) => (hi, step.parse()?),
            None => (rest, 1),
        };
        if step == 0 {
            bail!("step must be positive");
        }
        let (lo, hi): (usize, usize) = (lo.parse()?, hi.parse()?);
        return Ok((lo..=hi).step_by(step).collect());
    }
    s.split(',')
        .map(|x| x.trim().parse().with_context(|| format!("bad size `{x}`")))
        .collect()
}

fn outcome_name(o: Outcome) -> &'static str {
    match o {
        Outcome::Accepted => "accepted",
        Outcome::Rejected => "rejected",
        Outcome::StepLimit => "step-limit",
        Outcome::Timeout => "timeout",
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.downcast_ref::<io::Error>().is_some_and(|e| e.kind() == io::ErrorKind::BrokenPipe) => {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Cfa { grammar, dot } => {
            let g = load_grammar(&grammar)?;
            let cfa = build_cfa(&g)?;
            if dot {
                write!(out, "{}", cfa_to_dot(&cfa))?;
            } else {
                write!(out, "{}", dump_cfa(&cfa))?;
                let cs = conflicts(&cfa);
                writeln!(out, "# {} conflict states", cs.len())?;
                for c in cs {
                    writeln!(out, "conflict q{} ({} params)", c.state, cfa.state(c.state).param_count)?;
                    for a in c.actions {
                        writeln!(out, "  {a}")?;
                    }
                }
            }
        }
        Command::Parse {
            grammar,
            graph,
            strategy,
            memo,
            trace,
            engine,
            dump_memo,
            max_steps,
            timeout,
        } => {
            let g = load_grammar(&grammar)?;
            let text = fs::read_to_string(&graph).with_context(|| format!("reading {}", graph.display()))?;
            let input = Hypergraph::parse(&text).with_context(|| format!("parsing {}", graph.display()))?;
            let timeout = timeout.map(Duration::from_secs_f64);
            match engine {
                EngineArg::Cyk => {
                    let r = cyk_parse_with_timeout(&g, &input, timeout);
                    writeln!(out, "{} items={} time={:.3}ms", outcome_name(r.outcome), r.items, r.elapsed.as_secs_f64() * 1e3)?;
                    if r.outcome == Outcome::Rejected {
                        std::process::exit(1);
                    }
                }
                EngineArg::Gpsr => {
                    let strategy = match strategy {
                        StrategyArg::Dfs => Strategy::DepthFirst,
                        StrategyArg::Bfs => Strategy::BreadthFirst,
                        StrategyArg::Prio => Strategy::Priority,
                    };
                    let mut config = ParseConfig::new(strategy, memo);
                    config.trace = trace;
                    config.timeout = timeout;
                    if let Some(m) = max_steps {
                        config.max_steps = m;
                    }
                    let cfa = build_cfa(&g)?;
                    let mut session = match ParseSession::new(&cfa, &input, config) {
                        Ok(s) => s,
                        Err(e) => {
                            writeln!(out, "rejected: {e}")?;
                            std::process::exit(1);
                        }
                    };
                    let r = session.run();
                    for line in session.trace() {
                        writeln!(out, "{line}")?;
                    }
                    if dump_memo {
                        for line in session.dump_memo() {
                            writeln!(out, "memo {line}")?;
                        }
                    }
                    writeln!(
                        out,
                        "{} steps={} gss={} memo={} time={:.3}ms",
                        outcome_name(r.outcome),
                        r.steps,
                        r.gss_nodes,
                        r.memo_pairs,
                        r.elapsed.as_secs_f64() * 1e3
                    )?;
                    if !r.accepted() {
                        std::process::exit(1);
                    }
                }
            }
        }
        Command::Bench {
            grammar,
            n,
            engines,
            csv,
            reps,
            timeout,
            no_timings,
        } => {
            let config = BenchConfig {
                reps,
                timeout: Duration::from_secs_f64(timeout),
                ..BenchConfig::default()
            };
            let rows = bench::run_bench(&grammar, &parse_sizes(&n)?, &engines, &config);
            match csv {
                Some(path) => {
                    let f = fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
                    bench::write_csv(&rows, f, !no_timings)?;
                }
                None => bench::write_csv(&rows, out, !no_timings)?,
            }
        }
        Command::Gen { grammar, n, output } => {
            let text = grammar.generate(n).to_text();
            match output {
                Some(path) => fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?,
                None => write!(out, "{text}")?,
            }
        }
    }
    Ok(())
}

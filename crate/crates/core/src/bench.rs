//! Benchmark families and a small timing harness.

use std::collections::BTreeSet;
use std::fmt;
use std::io;
use std::str::FromStr;
use std::time::Duration;

use serde::Serialize;

use crate::bundled;
use crate::cfa::{build_cfa, Cfa};
use crate::cyk::cyk_parse_with_timeout;
use crate::engine::{parse, Outcome, ParseConfig, Strategy};
use crate::grammar::Grammar;
use crate::hypergraph::{Hypergraph, Label, NodeId};

fn graph(literals: Vec<(Label, Vec<u32>)>) -> Hypergraph {
    Hypergraph::new(
        literals
            .into_iter()
            .map(|(l, a)| (l, a.into_iter().map(NodeId).collect())),
        &BTreeSet::new(),
    )
    .expect("generated literals are well-formed")
}

/// Sierpinski graph with `2n+1` triangles, split as evenly as possible into
/// a top, bottom-left and bottom-right part.
pub fn gen_sierpinski(n: usize) -> Hypergraph {
    fn build(n: usize, x: u32, y: u32, z: u32, next: &mut u32, out: &mut Vec<(Label, Vec<u32>)>) {
        if n == 0 {
            out.push((Label::terminal("t", 3), vec![x, y, z]));
            return;
        }
        let k = (n - 1) / 3;
        let m = (n - k - 1) / 2;
        let (u, w, v) = (*next, *next + 1, *next + 2);
        *next += 3;
        build(k, x, u, w, next, out);
        build(m, u, y, v, next, out);
        build(n - k - m - 1, w, v, z, next, out);
    }
    let mut out = Vec::new();
    let mut next = 3;
    build(n, 0, 1, 2, &mut next, &mut out);
    graph(out)
}

/// Four parallel chains of `n` edges each between a source and a sink.
pub fn gen_sp(n: usize) -> Hypergraph {
    assert!(n >= 1, "S_n needs n >= 1");
    let (s, t) = (0, 1);
    let mut next = 2;
    let mut out = Vec::new();
    for _ in 0..4 {
        let mut prev = s;
        for i in 0..n {
            let to = if i + 1 == n {
                t
            } else {
                next += 1;
                next - 1
            };
            out.push((Label::terminal("e", 2), vec![prev, to]));
            prev = to;
        }
    }
    graph(out)
}

/// Sizes of the left and right subtrees of a complete binary tree with `n`
/// nodes.
fn complete_split(n: usize) -> (usize, usize) {
    if n <= 1 {
        return (0, 0);
    }
    let h = usize::BITS - 1 - n.leading_zeros();
    let half = 1usize << (h - 1);
    let last = n - ((1usize << h) - 1);
    let left = (half - 1) + last.min(half);
    (left, n - 1 - left)
}

/// Structured flowchart with `n` conditions arranged as a complete binary
/// tree and `3n+1` instructions.
pub fn gen_flowchart(n: usize) -> Hypergraph {
    fn build(n: usize, x: u32, y: u32, next: &mut u32, out: &mut Vec<(Label, Vec<u32>)>) {
        let mut fresh = || {
            *next += 1;
            *next - 1
        };
        if n == 0 {
            out.push((Label::terminal("instr", 2), vec![x, y]));
            return;
        }
        let (m, m2) = complete_split(n);
        let (u, v) = (fresh(), fresh());
        out.push((Label::terminal("cond", 3), vec![x, u, v]));
        let u2 = fresh();
        out.push((Label::terminal("instr", 2), vec![u, u2]));
        build(m, u2, y, next, out);
        let v2 = *next;
        *next += 1;
        out.push((Label::terminal("instr", 2), vec![v, v2]));
        build(m2, v2, y, next, out);
    }
    let mut out = vec![(Label::terminal("begin", 1), vec![0])];
    let mut next = 2;
    build(n, 0, 1, &mut next, &mut out);
    out.push((Label::terminal("end", 1), vec![1]));
    graph(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Sierpinski,
    SeriesParallel,
    Flowchart,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Sierpinski, Family::SeriesParallel, Family::Flowchart];

    pub fn name(self) -> &'static str {
        match self {
            Family::Sierpinski => "sierpinski",
            Family::SeriesParallel => "sp",
            Family::Flowchart => "flowchart",
        }
    }

    pub fn grammar(self) -> Grammar {
        match self {
            Family::Sierpinski => bundled::sierpinski(),
            Family::SeriesParallel => bundled::series_parallel(),
            Family::Flowchart => bundled::flowchart(),
        }
    }

    pub fn generate(self, n: usize) -> Hypergraph {
        match self {
            Family::Sierpinski => gen_sierpinski(n),
            Family::SeriesParallel => gen_sp(n),
            Family::Flowchart => gen_flowchart(n),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sierpinski" => Ok(Family::Sierpinski),
            "sp" | "series-parallel" => Ok(Family::SeriesParallel),
            "flowchart" => Ok(Family::Flowchart),
            _ => Err(format!("unknown grammar family `{s}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Engine {
    Cyk,
    GpsrDfs,
    GpsrBfs,
    GpsrPrio,
    GpsrMemo,
}

impl Engine {
    pub const ALL: [Engine; 5] = [
        Engine::Cyk,
        Engine::GpsrDfs,
        Engine::GpsrBfs,
        Engine::GpsrPrio,
        Engine::GpsrMemo,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Engine::Cyk => "cyk",
            Engine::GpsrDfs => "gpsr-dfs",
            Engine::GpsrBfs => "gpsr-bfs",
            Engine::GpsrPrio => "gpsr-prio",
            Engine::GpsrMemo => "gpsr-memo",
        }
    }

    pub fn parse_config(self) -> Option<ParseConfig> {
        match self {
            Engine::Cyk => None,
            Engine::GpsrDfs => Some(ParseConfig::new(Strategy::DepthFirst, false)),
            Engine::GpsrBfs => Some(ParseConfig::new(Strategy::BreadthFirst, false)),
            Engine::GpsrPrio => Some(ParseConfig::new(Strategy::Priority, false)),
            Engine::GpsrMemo => Some(ParseConfig::new(Strategy::DepthFirst, true)),
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Engine {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Engine::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| format!("unknown engine `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub parser: String,
    pub grammar: String,
    pub n: usize,
    /// `accepted`, `rejected`, `timeout` or `step-limit`.
    pub status: String,
    /// Median over repetitions; absent on timeout.
    pub elapsed_ms: Option<f64>,
    pub steps: Option<u64>,
    pub memo_pairs: Option<usize>,
    /// GSS nodes for GPSR, nonterminal chart items for CYK.
    pub created: Option<usize>,
}

impl BenchRow {
    pub fn accepted(&self) -> bool {
        self.status == "accepted"
    }

    pub fn timed_out(&self) -> bool {
        self.status == "timeout"
    }
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub reps: usize,
    pub timeout: Duration,
    pub warmup: bool,
    /// Skip larger inputs for an engine once it has timed out.
    pub skip_after_timeout: bool,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            reps: 5,
            timeout: Duration::from_secs(60),
            warmup: true,
            skip_after_timeout: true,
        }
    }
}

fn status(o: Outcome) -> &'static str {
    match o {
        Outcome::Accepted => "accepted",
        Outcome::Rejected => "rejected",
        Outcome::StepLimit => "step-limit",
        Outcome::Timeout => "timeout",
    }
}

struct Run {
    outcome: Outcome,
    elapsed: Duration,
    steps: Option<u64>,
    memo_pairs: Option<usize>,
    created: usize,
}

fn run_once(engine: Engine, grammar: &Grammar, cfa: &Cfa, g: &Hypergraph, timeout: Duration) -> Run {
    match engine.parse_config() {
        None => {
            let r = cyk_parse_with_timeout(grammar, g, Some(timeout));
            Run {
                outcome: r.outcome,
                elapsed: r.elapsed,
                steps: None,
                memo_pairs: None,
                created: r.items,
            }
        }
        Some(mut cfg) => {
            cfg.timeout = Some(timeout);
            let r = parse(cfa, g, &cfg);
            Run {
                outcome: r.outcome,
                elapsed: r.elapsed,
                steps: Some(r.steps),
                memo_pairs: cfg.memo.then_some(r.memo_pairs),
                created: r.gss_nodes,
            }
        }
    }
}

/// Times one engine on one instance; the result is the median of `reps`
/// runs after an optional discarded warm-up run.
pub fn run_cell(family: Family, n: usize, engine: Engine, cfa: &Cfa, config: &BenchConfig) -> BenchRow {
    let grammar = cfa.grammar();
    let g = family.generate(n);
    let mut row = BenchRow {
        parser: engine.name().to_string(),
        grammar: family.name().to_string(),
        n,
        status: String::new(),
        elapsed_ms: None,
        steps: None,
        memo_pairs: None,
        created: None,
    };
    if config.warmup {
        let w = run_once(engine, grammar, cfa, &g, config.timeout);
        if w.outcome == Outcome::Timeout {
            row.status = status(w.outcome).to_string();
            return row;
        }
    }
    let mut times = Vec::new();
    let mut last = None;
    for _ in 0..config.reps.max(1) {
        let r = run_once(engine, grammar, cfa, &g, config.timeout);
        if r.outcome == Outcome::Timeout {
            row.status = status(r.outcome).to_string();
            return row;
        }
        times.push(r.elapsed);
        last = Some(r);
    }
    times.sort();
    let median = times[times.len() / 2];
    let r = last.expect("at least one repetition");
    row.status = status(r.outcome).to_string();
    row.elapsed_ms = Some(median.as_secs_f64() * 1000.0);
    row.steps = r.steps;
    row.memo_pairs = r.memo_pairs;
    row.created = Some(r.created);
    row
}

/// Runs every (family, n, engine) cell sequentially.
pub fn run_bench(families: &[Family], ns: &[usize], engines: &[Engine], config: &BenchConfig) -> Vec<BenchRow> {
    let mut rows = Vec::new();
    for &family in families {
        let cfa = build_cfa(&family.grammar()).expect("bundled grammars have finite automata");
        for &engine in engines {
            let mut timed_out = false;
            for &n in ns {
                if family == Family::SeriesParallel && n == 0 {
                    continue;
                }
                if timed_out && config.skip_after_timeout {
                    rows.push(BenchRow {
                        parser: engine.name().to_string(),
                        grammar: family.name().to_string(),
                        n,
                        status: "timeout".to_string(),
                        elapsed_ms: None,
                        steps: None,
                        memo_pairs: None,
                        created: None,
                    });
                    continue;
                }
                let row = run_cell(family, n, engine, &cfa, config);
                timed_out = row.timed_out();
                rows.push(row);
            }
        }
    }
    rows
}

/// Writes rows as CSV; without timings the output is machine independent.
pub fn write_csv<W: io::Write>(rows: &[BenchRow], out: W, timings: bool) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        let mut row = row.clone();
        if !timings {
            row.elapsed_ms = None;
        }
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

/// Least-squares line through `(n, size)` points: (slope, intercept, largest
/// residual relative to the observed value).
pub fn linear_fit(points: &[(f64, f64)]) -> (f64, f64, f64) {
    let k = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = if sxx == 0.0 { 0.0 } else { sxy / sxx };
    let intercept = my - slope * mx;
    let worst = points
        .iter()
        .map(|&(x, y)| ((slope * x + intercept) - y).abs() / y.abs().max(1.0))
        .fold(0.0, f64::max);
    (slope, intercept, worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyk::cyk_parse;

    #[test]
    fn sierpinski_sizes() {
        assert_eq!(gen_sierpinski(0).len(), 1);
        assert_eq!(gen_sierpinski(10).len(), 21);
        for n in 0..=12 {
            assert_eq!(gen_sierpinski(n).len(), 2 * n + 1);
        }
    }

    #[test]
    fn t3_matches_worked_example() {
        let worked_example = Hypergraph::parse(
            "t(1,2,3) t(2,4,5) t(3,6,7) t(4,8,9) t(5,9,10) t(6,10,11) t(7,11,12)",
        )
        .unwrap();
        let reordered = worked_example.permute(&[0, 1, 3, 4, 2, 5, 6]).unwrap();
        let t3 = gen_sierpinski(3);
        assert!(t3.canonical_relabel().equivalent(&reordered.canonical_relabel()));
    }

    #[test]
    fn series_parallel_shape() {
        let s1 = gen_sp(1);
        assert_eq!(s1.len(), 4);
        assert_eq!(s1.node_count(), 2);
        let s2 = gen_sp(2);
        assert_eq!(s2.len(), 8);
        assert_eq!(s2.node_count(), 6);
    }

    #[test]
    fn flowchart_shape() {
        let f0 = gen_flowchart(0);
        assert_eq!(f0.to_text().split_whitespace().collect::<Vec<_>>(), ["begin(0)", "instr(0,1)", "end(1)"]);
        for n in 0..=12 {
            let f = gen_flowchart(n);
            assert_eq!(f.len(), 4 * n + 3);
            let count = |l: &str| f.literals().iter().filter(|x| x.label.name() == l).count();
            assert_eq!(count("cond"), n);
            assert_eq!(count("instr"), 3 * n + 1);
        }
        assert_eq!(complete_split(2), (1, 0));
        assert_eq!(complete_split(3), (1, 1));
        assert_eq!(complete_split(6), (3, 2));
    }

    #[test]
    fn generated_graphs_are_members() {
        for f in Family::ALL {
            let g = f.grammar();
            for n in 1..=3 {
                assert!(cyk_parse(&g, &f.generate(n)).accepted(), "{f} {n}");
            }
        }
    }

    #[test]
    fn single_cell_csv() {
        let cfg = BenchConfig {
            reps: 1,
            ..Default::default()
        };
        let rows = run_bench(&[Family::Sierpinski], &[2], &[Engine::GpsrMemo], &cfg);
        assert_eq!(rows.len(), 1);
        assert!(rows[0].accepted());
        let mut a = Vec::new();
        write_csv(&rows, &mut a, false).unwrap();
        let text = String::from_utf8(a).unwrap();
        assert!(text.starts_with("parser,grammar,n,status,elapsed_ms,steps,memo_pairs,created\n"));
        assert!(text.contains("gpsr-memo,sierpinski,2,accepted,,"));
    }

    #[test]
    fn fit_of_a_line_is_exact() {
        let pts: Vec<(f64, f64)> = (1..=5).map(|n| (n as f64, 7.0 * n as f64 + 2.0)).collect();
        let (slope, intercept, worst) = linear_fit(&pts);
        assert!((slope - 7.0).abs() < 1e-9 && (intercept - 2.0).abs() < 1e-9 && worst < 1e-9);
    }

    #[test]
    fn names_round_trip() {
        for e in Engine::ALL {
            assert_eq!(e.name().parse::<Engine>().unwrap(), e);
        }
        for f in Family::ALL {
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
        }
    }
}

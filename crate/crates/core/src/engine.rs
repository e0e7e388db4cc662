//! Generalized predictive shift-reduce parsing over a graph-structured stack.
//!
//! Each GSS node holds a concrete CFA state (its parameters bound to input
//! nodes) and the set of input edges read on the stacks through it. Nodes
//! are shared only when state, binding and read set coincide. A node counts
//! as read when it is the start node or attached to a read edge.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use fixedbitset::FixedBitSet;

use crate::cfa::{Cfa, ReduceLabel, StateId, Transition, TriggerPosition};
use crate::grammar::{find_start_binding, StartError};
use crate::hypergraph::{EdgeSet, Hypergraph, NodeId};
use crate::memo::{MemoPair, MemoStore};

pub const DEFAULT_MAX_STEPS: u64 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    DepthFirst,
    BreadthFirst,
    /// Depth-first, trying the actions of a node in order of rule priority.
    Priority,
}

#[derive(Debug, Clone)]
pub struct ParseConfig {
    pub strategy: Strategy,
    pub memo: bool,
    pub max_steps: u64,
    pub timeout: Option<Duration>,
    pub trace: bool,
}

impl Default for ParseConfig {
    fn default() -> Self {
        ParseConfig {
            strategy: Strategy::DepthFirst,
            memo: false,
            max_steps: DEFAULT_MAX_STEPS,
            timeout: None,
            trace: false,
        }
    }
}

impl ParseConfig {
    pub fn new(strategy: Strategy, memo: bool) -> Self {
        ParseConfig {
            strategy,
            memo,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Accepted,
    Rejected,
    StepLimit,
    Timeout,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseResult {
    pub outcome: Outcome,
    pub steps: u64,
    pub gss_nodes: usize,
    pub memo_pairs: usize,
    pub elapsed: Duration,
}

impl ParseResult {
    pub fn accepted(&self) -> bool {
        self.outcome == Outcome::Accepted
    }
}

#[derive(Debug, Clone)]
pub struct GssNode {
    pub state: StateId,
    /// Input nodes bound to the state's parameters (dense ids, see
    /// [`ParseSession::graph`]).
    pub binding: Vec<NodeId>,
    pub read: EdgeSet,
    pub read_nodes: FixedBitSet,
    pub preds: Vec<usize>,
    processed: bool,
}

impl GssNode {
    pub fn is_read(&self, n: NodeId) -> bool {
        self.read_nodes.contains(n.0 as usize)
    }
}

#[derive(Debug, Clone, Copy)]
enum Work {
    Node(usize),
    /// Reduces of an already processed node through a link added later.
    ReduceVia(usize, usize),
}

/// An action offered at a GSS node.
#[derive(Debug, Clone)]
enum Action {
    MemoGoto(usize, usize),
    Shift(usize, usize),
    Reduce(ReduceLabel),
}

enum Link {
    New(usize),
    Existing(usize),
    Known,
}

pub struct ParseSession<'a> {
    cfa: &'a Cfa,
    config: ParseConfig,
    graph: Hypergraph,
    original: Vec<NodeId>,
    all_edges: EdgeSet,
    by_label: HashMap<crate::hypergraph::Label, Vec<usize>>,
    by_attachment: HashMap<(crate::hypergraph::Label, usize, NodeId), Vec<usize>>,
    nodes: Vec<GssNode>,
    shared: HashMap<(StateId, Vec<NodeId>, EdgeSet), usize>,
    work: VecDeque<Work>,
    memo: MemoStore,
    steps: u64,
    accepted: bool,
    trace: Vec<String>,
}

impl<'a> ParseSession<'a> {
    /// Creates a session with a single stack holding the initial state bound
    /// to the start node.
    pub fn new(cfa: &'a Cfa, input: &Hypergraph, config: ParseConfig) -> Result<Self, StartError> {
        let start = find_start_binding(input, cfa.grammar().selector())?;
        let original: Vec<NodeId> = input.nodes().iter().copied().collect();
        let dense: HashMap<NodeId, NodeId> = original
            .iter()
            .enumerate()
            .map(|(i, &n)| (n, NodeId(i as u32)))
            .collect();
        let graph = input.rename(&dense).expect("dense renaming is injective");
        let mut by_label: HashMap<_, Vec<usize>> = HashMap::new();
        let mut by_attachment: HashMap<_, Vec<usize>> = HashMap::new();
        for l in graph.literals() {
            by_label.entry(l.label.clone()).or_default().push(l.edge_id);
            for (p, &n) in l.attachment.iter().enumerate() {
                by_attachment
                    .entry((l.label.clone(), p, n))
                    .or_default()
                    .push(l.edge_id);
            }
        }
        let mut read_nodes = FixedBitSet::with_capacity(original.len());
        read_nodes.insert(dense[&start].0 as usize);
        let mut s = ParseSession {
            cfa,
            all_edges: graph.all_edges(),
            config,
            graph,
            original,
            by_label,
            by_attachment,
            nodes: Vec::new(),
            shared: HashMap::new(),
            work: VecDeque::new(),
            memo: MemoStore::new(),
            steps: 0,
            accepted: false,
            trace: Vec::new(),
        };
        let root = GssNode {
            state: cfa.initial,
            binding: vec![dense[&start]],
            read: EdgeSet::with_capacity(s.graph.len()),
            read_nodes,
            preds: Vec::new(),
            processed: false,
        };
        s.shared
            .insert((root.state, root.binding.clone(), root.read.clone()), 0);
        s.nodes.push(root);
        s.work.push_back(Work::Node(0));
        Ok(s)
    }

    /// The input graph with nodes renumbered densely from 0, as referenced
    /// by GSS nodes and memo pairs.
    pub fn graph(&self) -> &Hypergraph {
        &self.graph
    }

    pub fn original_node(&self, n: NodeId) -> NodeId {
        self.original[n.0 as usize]
    }

    pub fn gss(&self) -> &[GssNode] {
        &self.nodes
    }

    pub fn memo(&self) -> &MemoStore {
        &self.memo
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn trace(&self) -> &[String] {
        &self.trace
    }

    /// Memo pairs as sorted lines over the original node ids.
    pub fn dump_memo(&self) -> Vec<String> {
        let mut lines: Vec<String> = self
            .memo
            .pairs()
            .map(|p| {
                let att: Vec<String> = p
                    .attachment
                    .iter()
                    .map(|&n| self.original_node(n).0.to_string())
                    .collect();
                format!("{}({}) <- {}", p.label.name(), att.join(","), p.subgraph)
            })
            .collect();
        lines.sort();
        lines
    }

    /// Valid memo pairs for each nonterminal transition at a GSS node, in
    /// the order memo-gotos are tried.
    pub fn memo_candidates(&self, node: usize) -> Vec<(usize, &MemoPair)> {
        let n = &self.nodes[node];
        let is_read = |x: NodeId| n.is_read(x);
        let mut hits: Vec<(usize, &MemoPair)> = Vec::new();
        for &t in &self.cfa.state(n.state).gotos {
            let tr = self.cfa.transition(t);
            for p in self.memo.lookup(&tr.trigger, &n.binding, &n.read, &is_read) {
                hits.push((t, p));
            }
        }
        hits.sort_by(|a, b| b.1.size().cmp(&a.1.size()).then(a.1.seq.cmp(&b.1.seq)));
        hits
    }

    /// Terminal edges that fit a shift transition at a GSS node.
    fn shift_candidates(&self, node: &GssNode, tr: &Transition) -> Vec<usize> {
        let trig = &tr.trigger;
        let bound = trig.positions.iter().enumerate().find_map(|(p, pos)| match *pos {
            TriggerPosition::Param(i) => Some((p, node.binding[i])),
            _ => None,
        });
        let pool = match bound {
            Some((p, n)) => self.by_attachment.get(&(trig.label.clone(), p, n)),
            None => self.by_label.get(&trig.label),
        };
        let Some(pool) = pool else {
            return Vec::new();
        };
        pool.iter()
            .copied()
            .filter(|&e| {
                !node.read.contains(e)
                    && fits(&trig.positions, &self.graph.literal(e).attachment, node)
            })
            .collect()
    }

    fn actions(&self, id: usize) -> Vec<Action> {
        let node = &self.nodes[id];
        let state = self.cfa.state(node.state);
        let mut actions = Vec::new();
        if self.config.memo {
            for (t, p) in self.memo_candidates(id) {
                actions.push(Action::MemoGoto(t, p.seq));
            }
        }
        let mut shifts = Vec::new();
        for &t in &state.shifts {
            for e in self.shift_candidates(node, self.cfa.transition(t)) {
                shifts.push((e, t));
            }
        }
        shifts.sort();
        actions.extend(shifts.into_iter().map(|(e, t)| Action::Shift(t, e)));
        actions.extend(self.cfa.regular_reduces(node.state).cloned().map(Action::Reduce));
        if self.config.strategy == Strategy::Priority {
            actions.sort_by_key(|a| self.priority(a));
        }
        actions
    }

    fn priority(&self, a: &Action) -> (u8, u8) {
        match a {
            Action::MemoGoto(..) => (0, 0),
            Action::Shift(t, _) => (1, self.cfa.transition(*t).priority),
            Action::Reduce(r) => (1, self.cfa.grammar().rule(r.rule).priority),
        }
    }

    /// Adds (or shares) a node with predecessor `pred`.
    fn push_node(
        &mut self,
        state: StateId,
        binding: Vec<NodeId>,
        read: EdgeSet,
        read_nodes: FixedBitSet,
        pred: usize,
    ) -> Link {
        let key = (state, binding, read);
        if let Some(&id) = self.shared.get(&key) {
            if self.nodes[id].preds.contains(&pred) {
                return Link::Known;
            }
            self.nodes[id].preds.push(pred);
            return Link::Existing(id);
        }
        let id = self.nodes.len();
        self.shared.insert(key.clone(), id);
        let (state, binding, read) = key;
        self.nodes.push(GssNode {
            state,
            binding,
            read,
            read_nodes,
            preds: vec![pred],
            processed: false,
        });
        if self.cfa.state(state).accepting && self.nodes[id].read == self.all_edges {
            self.accepted = true;
            if self.config.memo {
                let start = self.cfa.grammar().start().clone();
                self.memo.insert(&start, &[], &self.all_edges, &self.graph);
            }
        }
        Link::New(id)
    }

    fn bind(&self, tr: &Transition, base: &GssNode, attachment: &[NodeId]) -> Vec<NodeId> {
        tr.target_binding
            .iter()
            .map(|pos| match *pos {
                TriggerPosition::Param(i) => base.binding[i],
                TriggerPosition::Fresh(j) | TriggerPosition::Seen(j) => {
                    let p = tr
                        .trigger
                        .positions
                        .iter()
                        .position(|q| matches!(q, TriggerPosition::Fresh(k) | TriggerPosition::Seen(k) if *k == j))
                        .expect("placeholder occurs in trigger");
                    attachment[p]
                }
            })
            .collect()
    }

    fn shift(&mut self, from: usize, t: usize, e: usize) -> (Link, String) {
        let tr = self.cfa.transition(t);
        let node = &self.nodes[from];
        let att = self.graph.literal(e).attachment.clone();
        let binding = self.bind(tr, node, &att);
        let mut read = node.read.clone();
        read.insert(e);
        let mut read_nodes = node.read_nodes.clone();
        for n in &att {
            read_nodes.insert(n.0 as usize);
        }
        let target = tr.target;
        let link = self.push_node(target, binding, read, read_nodes, from);
        (link, format!("shift {e}"))
    }

    fn memo_goto(&mut self, from: usize, t: usize, seq: usize) -> (Link, String) {
        let tr = self.cfa.transition(t);
        let pair = self.memo.get(seq).clone();
        let node = &self.nodes[from];
        let binding = self.bind(tr, node, &pair.attachment);
        let read = node.read.union(&pair.subgraph);
        let mut read_nodes = node.read_nodes.clone();
        for e in pair.subgraph.iter() {
            for n in &self.graph.literal(e).attachment {
                read_nodes.insert(n.0 as usize);
            }
        }
        let desc = format!("memo {} <- {}", self.fmt_literal(&pair.label, &pair.attachment), pair.subgraph);
        let target = tr.target;
        (self.push_node(target, binding, read, read_nodes, from), desc)
    }

    /// Reduce at `top`, optionally only through the link `top -> via`.
    fn reduce(&mut self, top: usize, r: &ReduceLabel, via: Option<usize>) -> Vec<(Link, String)> {
        let rule = self.cfa.grammar().rule(r.rule);
        let depth = rule.rhs.len();
        let label = rule.lhs.label.clone();
        let mut frontier: Vec<usize> = match via {
            Some(p) => vec![p],
            None => self.nodes[top].preds.clone(),
        };
        for _ in 1..depth {
            let mut next = Vec::new();
            let mut seen = HashSet::new();
            for &n in &frontier {
                for &p in &self.nodes[n].preds {
                    if seen.insert(p) {
                        next.push(p);
                    }
                }
            }
            frontier = next;
        }
        let attachment: Vec<NodeId> = r.lhs.iter().map(|&p| self.nodes[top].binding[p]).collect();
        let mut out = Vec::new();
        for base in frontier {
            let sub = self.nodes[top].read.difference(&self.nodes[base].read);
            if self.config.memo {
                self.memo.insert(&label, &attachment, &sub, &self.graph);
            }
            let lit = self.fmt_literal(&label, &attachment);
            let b = &self.nodes[base];
            let gotos: Vec<usize> = self
                .cfa
                .state(b.state)
                .gotos
                .iter()
                .copied()
                .filter(|&t| {
                    let trig = &self.cfa.transition(t).trigger;
                    trig.label == label && fits(&trig.positions, &attachment, b)
                })
                .collect();
            if gotos.is_empty() {
                out.push((Link::Known, format!("reduce r{} {lit} at {}: no goto", r.rule, self.fmt_node(base))));
            }
            for t in gotos {
                let tr = self.cfa.transition(t);
                let binding = self.bind(tr, &self.nodes[base], &attachment);
                let read = self.nodes[top].read.clone();
                let read_nodes = self.nodes[top].read_nodes.clone();
                let link = self.push_node(tr.target, binding, read, read_nodes, base);
                out.push((link, format!("reduce r{} {lit}", r.rule)));
            }
        }
        out
    }

    fn fmt_literal(&self, label: &crate::hypergraph::Label, att: &[NodeId]) -> String {
        let ns: Vec<String> = att.iter().map(|&n| self.original_node(n).0.to_string()).collect();
        format!("{}({})", label.name(), ns.join(","))
    }

    /// `<q3;2,4,5,1,3;{0,1}>`
    pub fn fmt_node(&self, id: usize) -> String {
        let n = &self.nodes[id];
        let b: Vec<String> = n.binding.iter().map(|&x| self.original_node(x).0.to_string()).collect();
        format!("<q{};{};{}>", n.state, b.join(","), n.read)
    }

    /// Runs until the first accepting stack, an empty worklist, or a limit.
    pub fn run(&mut self) -> ParseResult {
        let started = Instant::now();
        let deadline = self.config.timeout.map(|t| started + t);
        let outcome = loop {
            if self.accepted {
                break Outcome::Accepted;
            }
            let work = match self.config.strategy {
                Strategy::BreadthFirst => self.work.pop_front(),
                _ => self.work.pop_back(),
            };
            let Some(work) = work else {
                break Outcome::Rejected;
            };
            if self.steps >= self.config.max_steps {
                self.work.push_back(work);
                break Outcome::StepLimit;
            }
            if let Some(d) = deadline {
                if self.steps.is_multiple_of(64) && Instant::now() >= d {
                    break Outcome::Timeout;
                }
            }
            self.steps += 1;
            self.step(work);
        };
        ParseResult {
            outcome,
            steps: self.steps,
            gss_nodes: self.nodes.len(),
            memo_pairs: self.memo.len(),
            elapsed: started.elapsed(),
        }
    }

    fn step(&mut self, work: Work) {
        let mut results: Vec<(Link, String)> = Vec::new();
        let top = match work {
            Work::Node(id) => {
                self.nodes[id].processed = true;
                for a in self.actions(id) {
                    match a {
                        Action::MemoGoto(t, seq) => results.push(self.memo_goto(id, t, seq)),
                        Action::Shift(t, e) => results.push(self.shift(id, t, e)),
                        Action::Reduce(r) => results.extend(self.reduce(id, &r, None)),
                    }
                    if self.accepted {
                        break;
                    }
                }
                id
            }
            Work::ReduceVia(id, pred) => {
                let reduces: Vec<ReduceLabel> = self.cfa.regular_reduces(self.nodes[id].state).cloned().collect();
                for r in reduces {
                    results.extend(self.reduce(id, &r, Some(pred)));
                    if self.accepted {
                        break;
                    }
                }
                id
            }
        };
        if self.config.trace {
            let mut line = format!("{:>4} {}", self.steps, self.fmt_node(top));
            if let Work::ReduceVia(_, pred) = work {
                let _ = write!(line, " via {}", self.fmt_node(pred));
            }
            if results.is_empty() {
                line.push_str("\n       dead end");
            }
            for (link, desc) in &results {
                let target = match link {
                    Link::New(id) | Link::Existing(id) => self.fmt_node(*id),
                    Link::Known => String::new(),
                };
                let _ = write!(line, "\n       {desc}");
                if !target.is_empty() {
                    let _ = write!(line, " -> {target}");
                }
            }
            if self.accepted {
                line.push_str("\n       accept");
            }
            self.trace.push(line);
        }
        let mut next: Vec<Work> = Vec::new();
        for (link, _) in results {
            match link {
                Link::New(id) => next.push(Work::Node(id)),
                Link::Existing(id) => {
                    if self.nodes[id].processed {
                        let pred = *self.nodes[id].preds.last().expect("new link");
                        next.push(Work::ReduceVia(id, pred));
                    }
                }
                Link::Known => {}
            }
        }
        match self.config.strategy {
            Strategy::BreadthFirst => self.work.extend(next),
            _ => self.work.extend(next.into_iter().rev()),
        }
    }
}

/// Whether an edge attached to `attachment` fits trigger `positions` at a
/// GSS node: parameters must match, unread placeholders must be unread and
/// read placeholders read.
fn fits(positions: &[TriggerPosition], attachment: &[NodeId], node: &GssNode) -> bool {
    positions.iter().zip(attachment).all(|(pos, &n)| match *pos {
        TriggerPosition::Param(i) => node.binding[i] == n,
        TriggerPosition::Fresh(_) => !node.is_read(n),
        TriggerPosition::Seen(_) => node.is_read(n),
    })
}

/// Parses `graph`; a graph without a valid start node is rejected in zero
/// steps.
pub fn parse(cfa: &Cfa, graph: &Hypergraph, config: &ParseConfig) -> ParseResult {
    match ParseSession::new(cfa, graph, config.clone()) {
        Ok(mut s) => s.run(),
        Err(_) => ParseResult {
            outcome: Outcome::Rejected,
            steps: 0,
            gss_nodes: 0,
            memo_pairs: 0,
            elapsed: Duration::ZERO,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundled;
    use crate::cfa::build_cfa;

    const WORKED_EXAMPLE: &str = "t(1,2,3) t(2,4,5) t(3,6,7) t(4,8,9) t(5,9,10) t(6,10,11) t(7,11,12)";

    fn session<'a>(cfa: &'a Cfa, text: &str, memo: bool) -> ParseSession<'a> {
        let mut cfg = ParseConfig::new(Strategy::DepthFirst, memo);
        cfg.trace = true;
        ParseSession::new(cfa, &Hypergraph::parse(text).unwrap(), cfg).unwrap()
    }

    #[test]
    fn worked_example_without_memo() {
        let cfa = build_cfa(&bundled::sierpinski()).unwrap();
        let mut s = session(&cfa, WORKED_EXAMPLE, false);
        assert_eq!(s.fmt_node(0), "<q0;1;{}>");
        let r = s.run();
        assert!(r.accepted(), "{}", s.trace().join("\n"));
        assert_eq!(r.steps, 24, "{}", s.trace().join("\n"));
    }

    #[test]
    fn worked_example_with_memo() {
        let cfa = build_cfa(&bundled::sierpinski()).unwrap();
        let mut s = session(&cfa, WORKED_EXAMPLE, true);
        let r = s.run();
        assert!(r.accepted(), "{}", s.trace().join("\n"));
        assert_eq!(r.steps, 18, "{}", s.trace().join("\n"));
    }

    #[test]
    fn first_steps_follow_the_trace() {
        let cfa = build_cfa(&bundled::sierpinski()).unwrap();
        let mut s = session(&cfa, WORKED_EXAMPLE, false);
        s.run();
        let t = s.trace();
        assert!(t[0].contains("shift 0 -> <q2;1,2,3;{0}>"), "{}", t[0]);
        assert!(t[1].contains("reduce r2 D(1,2,3) -> <q1;1,2,3;{0}>"), "{}", t[1]);
        assert!(t[4].starts_with("   5 <q3;2,4,5,1,3;{0,1}>"), "{}", t[4]);
        assert!(t[4].contains("shift 2") && t[4].contains("shift 3"), "{}", t[4]);
        let dead = t.iter().find(|l| l.contains("<q5;3,10,12,5;{0,1,2,5,6}>") && l.contains("dead end"));
        assert!(dead.is_some(), "{}", t.join("\n"));
    }

    #[test]
    fn memo_store_after_dead_end() {
        let cfa = build_cfa(&bundled::sierpinski()).unwrap();
        let mut cfg = ParseConfig::new(Strategy::DepthFirst, true);
        cfg.max_steps = 16;
        let g = Hypergraph::parse(WORKED_EXAMPLE).unwrap();
        let mut s = ParseSession::new(&cfa, &g, cfg).unwrap();
        assert_eq!(s.run().outcome, Outcome::StepLimit);
        let dump = s.dump_memo();
        assert_eq!(dump.len(), 9, "{dump:?}");
        assert!(dump.contains(&"D(3,10,12) <- {2,5,6}".to_string()));
        assert!(dump.contains(&"D(2,8,10) <- {1,3,4}".to_string()));
    }

    #[test]
    fn single_triangle() {
        let cfa = build_cfa(&bundled::sierpinski()).unwrap();
        for strategy in [Strategy::DepthFirst, Strategy::BreadthFirst, Strategy::Priority] {
            for memo in [false, true] {
                let r = parse(&cfa, &Hypergraph::parse("t(1,2,3)").unwrap(), &ParseConfig::new(strategy, memo));
                assert!(r.accepted());
                assert_eq!(r.steps, 2);
            }
        }
    }

    #[test]
    fn start_errors() {
        let cfa = build_cfa(&bundled::sierpinski()).unwrap();
        let empty = Hypergraph::empty();
        assert_eq!(
            ParseSession::new(&cfa, &empty, ParseConfig::default()).err(),
            Some(StartError::EmptyGraph)
        );
        let two = Hypergraph::parse("t(1,2,3) t(4,5,6)").unwrap();
        assert!(matches!(
            ParseSession::new(&cfa, &two, ParseConfig::default()).err(),
            Some(StartError::Ambiguous(_))
        ));
        assert!(!parse(&cfa, &two, &ParseConfig::default()).accepted());
    }

    #[test]
    fn rejects_incomplete_graph() {
        let cfa = build_cfa(&bundled::sierpinski()).unwrap();
        let six = "t(1,2,3) t(2,4,5) t(3,6,7) t(4,8,9) t(5,9,10) t(6,10,11)";
        for memo in [false, true] {
            let r = parse(&cfa, &Hypergraph::parse(six).unwrap(), &ParseConfig::new(Strategy::DepthFirst, memo));
            assert_eq!(r.outcome, Outcome::Rejected);
        }
    }

    #[test]
    fn step_limit_is_distinct_from_reject() {
        let cfa = build_cfa(&bundled::sierpinski()).unwrap();
        let mut cfg = ParseConfig::default();
        cfg.max_steps = 3;
        let r = parse(&cfa, &Hypergraph::parse(WORKED_EXAMPLE).unwrap(), &cfg);
        assert_eq!(r.outcome, Outcome::StepLimit);
        assert_eq!(r.steps, 3);
    }

    #[test]
    fn series_parallel_shares_nodes() {
        let cfa = build_cfa(&bundled::series_parallel()).unwrap();
        let g = Hypergraph::parse("e(1,2) e(1,2) e(2,3)").unwrap();
        for strategy in [Strategy::DepthFirst, Strategy::BreadthFirst] {
            let mut s = ParseSession::new(&cfa, &g, ParseConfig::new(strategy, false)).unwrap();
            assert!(s.run().accepted());
            let mut keys = HashSet::new();
            for n in s.gss() {
                assert!(keys.insert((n.state, n.binding.clone(), n.read.clone())));
            }
        }
    }
}

//! Hyperedge replacement grammars: representation, the grammar file format,
//! rule application, random derivation, bounded language enumeration and
//! start-node selection.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::hypergraph::{GraphError, Hypergraph, Label, LabelKind, Literal, NodeId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrammarError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: label `{label}` used with {got} nodes but declared with arity {arity}")]
    Arity {
        line: usize,
        label: String,
        arity: usize,
        got: usize,
    },
    #[error("line {line}: label `{0}` is not declared as terminal or nonterminal", .label)]
    UnknownLabel { line: usize, label: String },
    #[error("line {line}: left-hand side node `{node}` does not occur on the right-hand side")]
    LhsNotInRhs { line: usize, node: String },
    #[error("invalid grammar: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DeriveError {
    #[error("literal at position {0} is not a nonterminal matching the rule")]
    WrongLiteral(usize),
    #[error("match does not map rule node {0}")]
    IncompleteMatch(NodeId),
    #[error("match is not injective")]
    NotInjective,
    #[error("match does not map the left-hand side onto the replaced literal")]
    LhsMismatch,
    #[error("rule node mapped to host node {0} that is not attached to the replaced literal")]
    Collision(NodeId),
    #[error("no terminal graph within {0} edges is reachable")]
    BudgetTooSmall(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StartError {
    #[error("input graph is empty")]
    EmptyGraph,
    #[error("input graph has isolated node {0}")]
    IsolatedNode(NodeId),
    #[error("no node satisfies the start-node selector")]
    NoCandidate,
    #[error("start-node selector is ambiguous: nodes {0:?}")]
    Ambiguous(Vec<NodeId>),
}

/// `lhs -> rhs`. Rule nodes are numbered 0.. with the left-hand side nodes
/// first, then right-hand side nodes in order of first occurrence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub index: usize,
    pub lhs: Literal,
    pub rhs: Hypergraph,
    pub priority: u8,
    pub node_names: Vec<String>,
}

impl Rule {
    pub fn node_count(&self) -> usize {
        self.node_names.len()
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lit = |l: &Literal| {
            let names: Vec<&str> = l
                .attachment
                .iter()
                .map(|n| self.node_names[n.0 as usize].as_str())
                .collect();
            format!("{}({})", l.label.name(), names.join(","))
        };
        write!(f, "rule {}", self.index)?;
        if self.priority != 1 {
            write!(f, " prio {}", self.priority)?;
        }
        write!(f, ": {} ->", lit(&self.lhs))?;
        for l in self.rhs.literals() {
            write!(f, " {}", lit(l))?;
        }
        write!(f, ";")
    }
}

/// One incidence condition: the node is attached at `position` (1-based) of
/// exactly `count` edges labeled `label`, and, if given, to exactly `total`
/// edges overall.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelectorClause {
    pub label: String,
    pub position: usize,
    pub count: usize,
    pub total: Option<usize>,
}

/// Identifies the unique start node of an input graph and the start-rule
/// node it is bound to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StartSelector {
    pub var: String,
    pub rule_node: NodeId,
    pub clauses: Vec<SelectorClause>,
}

impl StartSelector {
    pub fn matches(&self, graph: &Hypergraph, node: NodeId) -> bool {
        let total = graph
            .literals()
            .iter()
            .filter(|l| l.attachment.contains(&node))
            .count();
        self.clauses.iter().all(|c| {
            let count = graph
                .literals()
                .iter()
                .filter(|l| {
                    l.label.name() == c.label && l.attachment.get(c.position - 1) == Some(&node)
                })
                .count();
            count == c.count && c.total.is_none_or(|t| t == total)
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grammar {
    labels: Vec<Label>,
    rules: Vec<Rule>,
    start: Label,
    selector: StartSelector,
}

impl Grammar {
    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn rule(&self, index: usize) -> &Rule {
        &self.rules[index]
    }

    pub fn start(&self) -> &Label {
        &self.start
    }

    pub fn selector(&self) -> &StartSelector {
        &self.selector
    }

    pub fn start_rule(&self) -> &Rule {
        self.rules
            .iter()
            .find(|r| r.lhs.label == self.start)
            .expect("validated grammar has a start rule")
    }

    pub fn label(&self, name: &str) -> Option<&Label> {
        self.labels.iter().find(|l| l.name() == name)
    }

    pub fn terminals(&self) -> impl Iterator<Item = &Label> {
        self.labels.iter().filter(|l| l.is_terminal())
    }

    /// Copy of the grammar with the given rule priorities replaced.
    pub fn with_priorities(&self, priorities: &[(usize, u8)]) -> Grammar {
        let mut g = self.clone();
        for &(r, p) in priorities {
            g.rules[r].priority = p;
        }
        g
    }

    /// Minimum number of terminal edges derivable from each nonterminal.
    pub fn min_sizes(&self) -> HashMap<Label, usize> {
        let mut min: HashMap<Label, usize> = HashMap::new();
        loop {
            let mut changed = false;
            for r in &self.rules {
                let mut size = 0usize;
                let mut ok = true;
                for l in r.rhs.literals() {
                    if l.label.is_terminal() {
                        size += 1;
                    } else if let Some(&m) = min.get(&l.label) {
                        size += m;
                    } else {
                        ok = false;
                        break;
                    }
                }
                if ok && min.get(&r.lhs.label).is_none_or(|&m| size < m) {
                    min.insert(r.lhs.label.clone(), size);
                    changed = true;
                }
            }
            if !changed {
                return min;
            }
        }
    }

    /// Serializes back to the grammar file format.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for l in &self.labels {
            if *l == self.start {
                continue;
            }
            let kw = if l.is_terminal() { "terminal" } else { "nonterminal" };
            s.push_str(&format!("{kw} {l};\n"));
        }
        s.push_str(&format!("start {};\n", self.start.name()));
        s.push_str(&format!("startnode {} where ", self.selector.var));
        let clauses: Vec<String> = self
            .selector
            .clauses
            .iter()
            .map(|c| {
                let mut t = format!("{} position {} count {}", c.label, c.position, c.count);
                if let Some(total) = c.total {
                    t.push_str(&format!(" total {total}"));
                }
                t
            })
            .collect();
        s.push_str(&clauses.join(" and "));
        s.push_str(";\n");
        for r in &self.rules {
            s.push_str(&r.to_string());
            s.push('\n');
        }
        s
    }
}

struct Statement<'a> {
    line: usize,
    text: &'a str,
}

fn statements(text: &str) -> Vec<Statement<'_>> {
    // Statements end with `;`. Comments run from `#` to end of line.
    let mut out = Vec::new();
    let mut start: Option<(usize, usize)> = None;
    let mut line = 1;
    let mut in_comment = false;
    for (i, c) in text.char_indices() {
        if c == '\n' {
            line += 1;
            in_comment = false;
            continue;
        }
        if in_comment {
            continue;
        }
        if c == '#' {
            in_comment = true;
            continue;
        }
        if c == ';' {
            if let Some((s, l)) = start.take() {
                out.push(Statement {
                    line: l,
                    text: &text[s..i],
                });
            }
            continue;
        }
        if start.is_none() && !c.is_whitespace() {
            start = Some((i, line));
        }
    }
    if let Some((s, l)) = start {
        out.push(Statement {
            line: l,
            text: &text[s..],
        });
    }
    out
}

fn strip_comments(s: &str) -> String {
    s.lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .collect::<Vec<_>>()
        .join(" ")
}

fn is_ident(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_alphanumeric() || c == '_')
}

/// Parses `name(a,b,c)` into the name and the argument list.
fn parse_literal_text(s: &str, line: usize) -> Result<(String, Vec<String>), GrammarError> {
    let syntax = |msg: String| GrammarError::Syntax { line, msg };
    let s = s.trim();
    let open = s
        .find('(')
        .ok_or_else(|| syntax(format!("expected `label(...)`, found `{s}`")))?;
    if !s.ends_with(')') {
        return Err(syntax(format!("missing `)` in `{s}`")));
    }
    let name = s[..open].trim();
    if !is_ident(name) {
        return Err(syntax(format!("invalid label `{name}`")));
    }
    let inner = s[open + 1..s.len() - 1].trim();
    let args: Vec<String> = if inner.is_empty() {
        Vec::new()
    } else {
        inner.split(',').map(|a| a.trim().to_string()).collect()
    };
    for a in &args {
        if !is_ident(a) {
            return Err(syntax(format!("invalid node name `{a}`")));
        }
    }
    Ok((name.to_string(), args))
}

/// Splits `a(x) b(y,z)` into literal substrings.
fn split_literals(s: &str, line: usize) -> Result<Vec<&str>, GrammarError> {
    let mut out = Vec::new();
    let mut rest = s.trim();
    while !rest.is_empty() {
        let close = rest.find(')').ok_or_else(|| GrammarError::Syntax {
            line,
            msg: format!("missing `)` in `{rest}`"),
        })?;
        out.push(&rest[..=close]);
        rest = rest[close + 1..].trim();
    }
    Ok(out)
}

fn parse_label_decl(s: &str, line: usize) -> Result<(String, usize), GrammarError> {
    let (name, arity) = s.split_once('/').ok_or_else(|| GrammarError::Syntax {
        line,
        msg: format!("expected `name/arity`, found `{s}`"),
    })?;
    let name = name.trim();
    if !is_ident(name) {
        return Err(GrammarError::Syntax {
            line,
            msg: format!("invalid label `{name}`"),
        });
    }
    let arity = arity.trim().parse().map_err(|_| GrammarError::Syntax {
        line,
        msg: format!("invalid arity `{}`", arity.trim()),
    })?;
    Ok((name.to_string(), arity))
}

/// Parses a grammar from its text format. See the crate README for the syntax.
pub fn parse_grammar(text: &str) -> Result<Grammar, GrammarError> {
    let mut labels: BTreeMap<String, Label> = BTreeMap::new();
    let mut label_order: Vec<String> = Vec::new();
    let mut start_name: Option<(String, usize)> = None;
    let mut selector_text: Option<(String, usize)> = None;
    let mut raw_rules: Vec<(usize, usize, u8, String, String)> = Vec::new();

    for st in statements(text) {
        let line = st.line;
        let body = strip_comments(st.text);
        let body = body.trim();
        let (kw, rest) = body.split_once(char::is_whitespace).unwrap_or((body, ""));
        let rest = rest.trim();
        match kw {
            "terminal" | "nonterminal" => {
                let kind = if kw == "terminal" {
                    LabelKind::Terminal
                } else {
                    LabelKind::Nonterminal
                };
                for decl in rest.split(',') {
                    let (name, arity) = parse_label_decl(decl, line)?;
                    if labels.contains_key(&name) {
                        return Err(GrammarError::Syntax {
                            line,
                            msg: format!("label `{name}` declared twice"),
                        });
                    }
                    label_order.push(name.clone());
                    labels.insert(name.clone(), Label::new(&name, arity, kind));
                }
            }
            "start" => {
                if !is_ident(rest) {
                    return Err(GrammarError::Syntax {
                        line,
                        msg: format!("invalid start symbol `{rest}`"),
                    });
                }
                start_name = Some((rest.to_string(), line));
            }
            "startnode" => selector_text = Some((rest.to_string(), line)),
            _ if kw.starts_with("rule") => {
                let (head, prod) = body.split_once(':').ok_or_else(|| GrammarError::Syntax {
                    line,
                    msg: "expected `rule N: lhs -> rhs`".into(),
                })?;
                let head: Vec<&str> = head.split_whitespace().collect();
                let (index, priority) = match head.as_slice() {
                    ["rule", i] => (i.parse().ok(), Some(1)),
                    ["rule", i, "prio", p] => (i.parse().ok(), p.parse().ok()),
                    _ => (None, None),
                };
                let (Some(index), Some(priority)) = (index, priority) else {
                    return Err(GrammarError::Syntax {
                        line,
                        msg: format!("malformed rule header `{}`", head.join(" ")),
                    });
                };
                if !(1..=2).contains(&priority) {
                    return Err(GrammarError::Syntax {
                        line,
                        msg: format!("priority must be 1 or 2, got {priority}"),
                    });
                }
                let (lhs, rhs) = prod.split_once("->").ok_or_else(|| GrammarError::Syntax {
                    line,
                    msg: "expected `->`".into(),
                })?;
                raw_rules.push((line, index, priority, lhs.to_string(), rhs.to_string()));
            }
            _ => {
                return Err(GrammarError::Syntax {
                    line,
                    msg: format!("unknown statement `{kw}`"),
                })
            }
        }
    }

    let (start_name, start_line) =
        start_name.ok_or_else(|| GrammarError::Invalid("missing `start` declaration".into()))?;
    match labels.get(&start_name) {
        Some(l) if l.arity() != 0 || l.is_terminal() => {
            return Err(GrammarError::Invalid(format!(
                "start symbol `{start_name}` must be a nonterminal of arity 0"
            )))
        }
        Some(_) => {}
        None => {
            label_order.push(start_name.clone());
            labels.insert(start_name.clone(), Label::nonterminal(&start_name, 0));
        }
    }
    let start = labels[&start_name].clone();

    let mut rules = Vec::new();
    for (pos, (line, index, priority, lhs_text, rhs_text)) in raw_rules.into_iter().enumerate() {
        if index != pos {
            return Err(GrammarError::Syntax {
                line,
                msg: format!("rule index {index} out of order, expected {pos}"),
            });
        }
        let resolve = |name: &str, nargs: usize| -> Result<Label, GrammarError> {
            let l = labels.get(name).ok_or_else(|| GrammarError::UnknownLabel {
                line,
                label: name.to_string(),
            })?;
            if l.arity() != nargs {
                return Err(GrammarError::Arity {
                    line,
                    label: name.to_string(),
                    arity: l.arity(),
                    got: nargs,
                });
            }
            Ok(l.clone())
        };
        let mut names: Vec<String> = Vec::new();
        let node_of = |n: &str, names: &mut Vec<String>| -> NodeId {
            match names.iter().position(|x| x == n) {
                Some(i) => NodeId(i as u32),
                None => {
                    names.push(n.to_string());
                    NodeId(names.len() as u32 - 1)
                }
            }
        };
        let (lname, largs) = parse_literal_text(&lhs_text, line)?;
        let llabel = resolve(&lname, largs.len())?;
        if llabel.is_terminal() {
            return Err(GrammarError::Syntax {
                line,
                msg: format!("left-hand side `{lname}` must be a nonterminal"),
            });
        }
        let latt: Vec<NodeId> = largs.iter().map(|a| node_of(a, &mut names)).collect();
        if latt.iter().collect::<BTreeSet<_>>().len() != latt.len() {
            return Err(GrammarError::Syntax {
                line,
                msg: "left-hand side nodes must be pairwise distinct".into(),
            });
        }
        let lhs_count = names.len();
        let mut rhs_lits = Vec::new();
        let mut rhs_nodes = BTreeSet::new();
        for lt in split_literals(&rhs_text, line)? {
            let (name, args) = parse_literal_text(lt, line)?;
            let label = resolve(&name, args.len())?;
            let att: Vec<NodeId> = args.iter().map(|a| node_of(a, &mut names)).collect();
            rhs_nodes.extend(att.iter().copied());
            rhs_lits.push((label, att));
        }
        if rhs_lits.is_empty() {
            return Err(GrammarError::Syntax {
                line,
                msg: "right-hand side must contain at least one literal".into(),
            });
        }
        for (i, name) in names.iter().enumerate().take(lhs_count) {
            if !rhs_nodes.contains(&NodeId(i as u32)) {
                return Err(GrammarError::LhsNotInRhs {
                    line,
                    node: name.clone(),
                });
            }
        }
        let rhs = Hypergraph::new(rhs_lits, &BTreeSet::new()).map_err(|e| {
            GrammarError::Syntax {
                line,
                msg: e.to_string(),
            }
        })?;
        rules.push(Rule {
            index,
            lhs: Literal {
                edge_id: 0,
                label: llabel,
                attachment: latt,
            },
            rhs,
            priority,
            node_names: names,
        });
    }

    let start_rules: Vec<&Rule> = rules.iter().filter(|r| r.lhs.label == start).collect();
    if start_rules.len() != 1 {
        return Err(GrammarError::Invalid(format!(
            "expected exactly one rule for start symbol `{start_name}`, found {}",
            start_rules.len()
        )));
    }
    let start_rule = start_rules[0];
    if rules
        .iter()
        .any(|r| r.rhs.literals().iter().any(|l| l.label == start))
    {
        return Err(GrammarError::Invalid(
            "start symbol must not occur on a right-hand side".into(),
        ));
    }

    let (sel_text, sel_line) = selector_text
        .ok_or_else(|| GrammarError::Invalid("missing `startnode` declaration".into()))?;
    let selector = parse_selector(&sel_text, sel_line, start_rule, &labels)?;
    let _ = start_line;

    let labels = label_order.iter().map(|n| labels[n].clone()).collect();
    Ok(Grammar {
        labels,
        rules,
        start,
        selector,
    })
}

fn parse_selector(
    text: &str,
    line: usize,
    start_rule: &Rule,
    labels: &BTreeMap<String, Label>,
) -> Result<StartSelector, GrammarError> {
    let syntax = |msg: String| GrammarError::Syntax { line, msg };
    let (var, clauses_text) = text
        .split_once(" where ")
        .ok_or_else(|| syntax("expected `startnode VAR where ...`".into()))?;
    let var = var.trim().to_string();
    let rule_node = start_rule
        .node_names
        .iter()
        .position(|n| *n == var)
        .map(|i| NodeId(i as u32))
        .ok_or_else(|| syntax(format!("`{var}` is not a node of the start rule")))?;
    let mut clauses = Vec::new();
    for clause in clauses_text.split(" and ") {
        let toks: Vec<&str> = clause.split_whitespace().collect();
        let (label, position, count, total) = match toks.as_slice() {
            [l, "position", p, "count", c] => (*l, p.parse().ok(), c.parse().ok(), None),
            [l, "position", p, "count", c, "total", t] => {
                (*l, p.parse().ok(), c.parse().ok(), t.parse().ok())
            }
            _ => (
                "",
                None,
                None,
                Some(usize::MAX), // marks a malformed clause
            ),
        };
        let (Some(position), Some(count)) = (position, count) else {
            return Err(syntax(format!("malformed selector clause `{}`", clause.trim())));
        };
        let l = labels.get(label).ok_or_else(|| GrammarError::UnknownLabel {
            line,
            label: label.to_string(),
        })?;
        if !l.is_terminal() || position == 0 || position > l.arity() {
            return Err(syntax(format!(
                "selector clause needs a terminal label and a position in 1..={}",
                l.arity()
            )));
        }
        clauses.push(SelectorClause {
            label: label.to_string(),
            position,
            count,
            total,
        });
    }
    Ok(StartSelector {
        var,
        rule_node,
        clauses,
    })
}

/// Replaces the nonterminal literal at `position` of `host` by the rule's
/// right-hand side renamed by `matching` (rule node -> host node).
pub fn apply_rule(
    host: &Hypergraph,
    position: usize,
    rule: &Rule,
    matching: &HashMap<NodeId, NodeId>,
) -> Result<Hypergraph, DeriveError> {
    let target = host
        .literals()
        .get(position)
        .filter(|l| !l.label.is_terminal() && l.label == rule.lhs.label)
        .ok_or(DeriveError::WrongLiteral(position))?;
    let mut image = HashSet::new();
    for i in 0..rule.node_count() {
        let n = NodeId(i as u32);
        let m = *matching.get(&n).ok_or(DeriveError::IncompleteMatch(n))?;
        if !image.insert(m) {
            return Err(DeriveError::NotInjective);
        }
    }
    let lhs_image: Vec<NodeId> = rule.lhs.attachment.iter().map(|n| matching[n]).collect();
    if lhs_image != target.attachment {
        return Err(DeriveError::LhsMismatch);
    }
    for m in &image {
        if host.nodes().contains(m) && !target.attachment.contains(m) {
            return Err(DeriveError::Collision(*m));
        }
    }
    let rhs = rule.rhs.rename(matching)?;
    Ok(host.splice(position, &rhs))
}

/// Expands the nonterminal at `position` with `rule`, binding rule-internal
/// nodes to fresh ids drawn from `next_fresh`.
fn expand(
    host: &Hypergraph,
    position: usize,
    rule: &Rule,
    next_fresh: &mut u32,
) -> Result<Hypergraph, DeriveError> {
    let target = &host.literals()[position];
    let mut matching = HashMap::new();
    for (i, n) in rule.lhs.attachment.iter().enumerate() {
        matching.insert(*n, target.attachment[i]);
    }
    for i in rule.lhs.attachment.len()..rule.node_count() {
        matching.insert(NodeId(i as u32), NodeId(*next_fresh));
        *next_fresh += 1;
    }
    apply_rule(host, position, rule, &matching)
}

fn start_graph(grammar: &Grammar) -> Hypergraph {
    Hypergraph::from_literal(grammar.start().clone(), Vec::new()).expect("arity 0")
}

fn lower_bound(g: &Hypergraph, min: &HashMap<Label, usize>) -> usize {
    g.literals()
        .iter()
        .map(|l| {
            if l.label.is_terminal() {
                1
            } else {
                min.get(&l.label).copied().unwrap_or(usize::MAX / 4)
            }
        })
        .sum()
}

/// Derives a random terminal graph with at most `max_terminal_edges` edges by
/// repeatedly expanding the leftmost nonterminal.
pub fn derive_random(
    grammar: &Grammar,
    seed: u64,
    max_terminal_edges: usize,
) -> Result<Hypergraph, DeriveError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let min = grammar.min_sizes();
    let mut g = start_graph(grammar);
    if lower_bound(&g, &min) > max_terminal_edges {
        return Err(DeriveError::BudgetTooSmall(max_terminal_edges));
    }
    let mut fresh = 1u32;
    for _ in 0..100_000 {
        let Some(pos) = g.literals().iter().position(|l| !l.label.is_terminal()) else {
            return Ok(g);
        };
        let label = &g.literals()[pos].label;
        let rest = lower_bound(&g, &min) - min[label];
        let mut feasible: Vec<(&Rule, usize)> = grammar
            .rules()
            .iter()
            .filter(|r| &r.lhs.label == label)
            .map(|r| (r, rest + lower_bound(&r.rhs, &min)))
            .filter(|&(_, size)| size <= max_terminal_edges)
            .collect();
        if feasible.is_empty() {
            return Err(DeriveError::BudgetTooSmall(max_terminal_edges));
        }
        // The closer the lower bound is to the budget, the more likely the
        // smallest feasible rule is taken.
        let pressure = rest as f64 / max_terminal_edges.max(1) as f64;
        let rule = if rng.gen_bool(pressure.clamp(0.0, 1.0)) {
            feasible.sort_by_key(|&(r, size)| (size, r.index));
            feasible[0].0
        } else {
            feasible[rng.gen_range(0..feasible.len())].0
        };
        g = expand(&g, pos, rule, &mut fresh)?;
    }
    Err(DeriveError::BudgetTooSmall(max_terminal_edges))
}

fn graph_key(g: &Hypergraph, sort: bool) -> String {
    let mut lits: Vec<String> = g.literals().iter().map(|l| l.to_string()).collect();
    if sort {
        lits.sort();
    }
    lits.join(" ")
}

/// All terminal graphs with at most `max_terminal_edges` edges, deduplicated
/// up to literal permutation and first-occurrence node relabeling. The
/// result is sorted by size, then by canonical text.
pub fn enumerate_language(grammar: &Grammar, max_terminal_edges: usize) -> Vec<Hypergraph> {
    let min = grammar.min_sizes();
    let mut results: BTreeMap<(usize, String), Hypergraph> = BTreeMap::new();
    let mut seen_forms: HashSet<String> = HashSet::new();
    let mut stack = vec![start_graph(grammar)];
    while let Some(g) = stack.pop() {
        let Some(pos) = g.literals().iter().position(|l| !l.label.is_terminal()) else {
            let canon = g.canonical_relabel();
            let key = graph_key(&canon, true);
            results.entry((canon.len(), key)).or_insert(canon);
            continue;
        };
        let mut fresh = g.max_node().map_or(0, |n| n.0 + 1);
        for rule in grammar
            .rules()
            .iter()
            .filter(|r| r.lhs.label == g.literals()[pos].label)
        {
            let next = expand(&g, pos, rule, &mut fresh).expect("leftmost expansion");
            if lower_bound(&next, &min) > max_terminal_edges {
                continue;
            }
            let canon = next.canonical_relabel();
            if seen_forms.insert(graph_key(&canon, false)) {
                stack.push(canon);
            }
        }
    }
    results.into_values().collect()
}

/// Finds the unique node of `graph` selected by `selector`.
pub fn find_start_binding(graph: &Hypergraph, selector: &StartSelector) -> Result<NodeId, StartError> {
    if graph.is_empty() {
        return Err(StartError::EmptyGraph);
    }
    if let Some(&n) = graph.isolated_nodes().first() {
        return Err(StartError::IsolatedNode(n));
    }
    let candidates: Vec<NodeId> = graph
        .nodes()
        .iter()
        .copied()
        .filter(|&n| selector.matches(graph, n))
        .collect();
    match candidates.as_slice() {
        [] => Err(StartError::NoCandidate),
        [n] => Ok(*n),
        _ => Err(StartError::Ambiguous(candidates)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundled;

    fn ids(v: &[u32]) -> Vec<NodeId> {
        v.iter().map(|&n| NodeId(n)).collect()
    }

    fn tgraph(lits: &[[u32; 3]]) -> Hypergraph {
        Hypergraph::new(
            lits.iter().map(|a| (Label::terminal("t", 3), ids(a))),
            &BTreeSet::new(),
        )
        .unwrap()
    }

    fn dgraph(lits: &[[u32; 3]]) -> Hypergraph {
        Hypergraph::new(
            lits.iter().map(|a| (Label::nonterminal("D", 3), ids(a))),
            &BTreeSet::new(),
        )
        .unwrap()
    }

    fn matching(pairs: &[(u32, u32)]) -> HashMap<NodeId, NodeId> {
        pairs.iter().map(|&(a, b)| (NodeId(a), NodeId(b))).collect()
    }

    #[test]
    fn parses_bundled_grammars() {
        let s = bundled::sierpinski();
        assert_eq!(s.rules().len(), 3);
        assert_eq!(s.start(), &Label::nonterminal("Z", 0));
        assert_eq!(s.label("D"), Some(&Label::nonterminal("D", 3)));
        assert_eq!(s.label("t"), Some(&Label::terminal("t", 3)));
        assert_eq!(s.rule(1).node_names, ["x", "y", "z", "u", "w", "v"]);

        let sp = bundled::series_parallel();
        assert_eq!(sp.rules().len(), 4);
        assert!(sp.rules().iter().enumerate().all(|(i, r)| r.index == i));

        let fc = bundled::flowchart();
        assert_eq!(fc.rules().len(), 6);
    }

    #[test]
    fn grammar_text_round_trip() {
        for g in [
            bundled::sierpinski(),
            bundled::series_parallel(),
            bundled::flowchart(),
        ] {
            assert_eq!(parse_grammar(&g.to_text()).unwrap(), g);
        }
    }

    const HEADER: &str = "terminal t/3; nonterminal D/3; start Z;\n\
        startnode x where t position 1 count 1 total 1;\n\
        rule 0: Z() -> D(x,y,z);\n";

    #[test]
    fn rejects_arity_errors() {
        let err = parse_grammar(&format!("{HEADER}rule 1: D(x,y,z) -> t(x,y);")).unwrap_err();
        assert!(matches!(err, GrammarError::Arity { line: 4, .. }), "{err}");
    }

    #[test]
    fn rejects_lhs_nodes_missing_on_rhs() {
        let text = "terminal t/3; nonterminal D/3, E/4; start Z;\n\
            startnode x where t position 1 count 1;\n\
            rule 0: Z() -> D(x,y,z);\n\
            rule 1: E(a,b,c,d) -> t(a,b,c);";
        assert!(matches!(
            parse_grammar(text),
            Err(GrammarError::LhsNotInRhs { .. })
        ));
    }

    #[test]
    fn rejects_unknown_labels_and_bad_syntax() {
        assert!(matches!(
            parse_grammar(&format!("{HEADER}rule 1: D(x,y,z) -> q(x,y,z);")),
            Err(GrammarError::UnknownLabel { .. })
        ));
        assert!(matches!(
            parse_grammar(&format!("{HEADER}rule 1: D(x,y,z) t(x,y,z);")),
            Err(GrammarError::Syntax { .. })
        ));
        assert!(matches!(
            parse_grammar(&format!("{HEADER}rule 3: D(x,y,z) -> t(x,y,z);")),
            Err(GrammarError::Syntax { .. })
        ));
        assert!(parse_grammar("terminal t/3; start Z; rule 0: Z() -> t(x,y,z);").is_err());
    }

    #[test]
    fn derivation_of_worked_example() {
        let g = bundled::sierpinski();
        let z = start_graph(&g);
        let step0 = apply_rule(&z, 0, g.rule(0), &matching(&[(0, 1), (1, 8), (2, 12)])).unwrap();
        assert_eq!(step0, dgraph(&[[1, 8, 12]]));
        let step1 = apply_rule(
            &step0,
            0,
            g.rule(1),
            &matching(&[(0, 1), (1, 8), (2, 12), (3, 2), (4, 3), (5, 10)]),
        )
        .unwrap();
        assert_eq!(step1, dgraph(&[[1, 2, 3], [2, 8, 10], [3, 10, 12]]));

        // u -> 10 collides with a host node that is not attached to D(1,2,3)
        let err = apply_rule(
            &step1,
            0,
            g.rule(1),
            &matching(&[(0, 1), (1, 2), (2, 3), (3, 10), (4, 20), (5, 21)]),
        )
        .unwrap_err();
        assert_eq!(err, DeriveError::Collision(NodeId(10)));
        let err = apply_rule(
            &step1,
            0,
            g.rule(1),
            &matching(&[(0, 1), (1, 2), (2, 3), (3, 20), (4, 20), (5, 21)]),
        )
        .unwrap_err();
        assert_eq!(err, DeriveError::NotInjective);
    }

    #[test]
    fn random_derivations_respect_budget() {
        let s = bundled::sierpinski();
        let one = derive_random(&s, 3, 1).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one.literal(0).label.name(), "t");
        let sp = bundled::series_parallel();
        let e = derive_random(&sp, 3, 1).unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(e.literal(0).label.name(), "e");
        for seed in 0..30 {
            let g = derive_random(&s, seed, 7).unwrap();
            assert!(g.len() <= 7 && g.len() % 2 == 1);
            assert!(g.literals().iter().all(|l| l.label.is_terminal()));
        }
        let fc = bundled::flowchart();
        assert_eq!(derive_random(&fc, 0, 2), Err(DeriveError::BudgetTooSmall(2)));
    }

    #[test]
    fn enumerates_small_sierpinski_languages() {
        let s = bundled::sierpinski();
        let one = enumerate_language(&s, 1);
        assert_eq!(one.len(), 1);
        assert_eq!(one[0], tgraph(&[[0, 1, 2]]));
        assert_eq!(enumerate_language(&s, 2), one);
        let three = enumerate_language(&s, 3);
        assert_eq!(three.iter().map(|g| g.len()).collect::<Vec<_>>(), [1, 3]);
        // ternary trees with k internal nodes: 1, 1, 3, 12
        let sizes = |b| {
            let v = enumerate_language(&s, b);
            (1..=b).step_by(2).map(|n| v.iter().filter(|g| g.len() == n).count()).collect::<Vec<_>>()
        };
        assert_eq!(sizes(7), [1, 1, 3, 12]);
    }

    #[test]
    fn start_node_selection() {
        let s = bundled::sierpinski();
        let worked_example = tgraph(&[
            [1, 2, 3],
            [2, 4, 5],
            [3, 6, 7],
            [4, 8, 9],
            [5, 9, 10],
            [6, 10, 11],
            [7, 11, 12],
        ]);
        assert_eq!(find_start_binding(&worked_example, s.selector()), Ok(NodeId(1)));
        assert!(matches!(
            find_start_binding(&tgraph(&[[1, 2, 3], [4, 5, 6]]), s.selector()),
            Err(StartError::Ambiguous(_))
        ));
        assert_eq!(
            find_start_binding(&Hypergraph::empty(), s.selector()),
            Err(StartError::EmptyGraph)
        );
        let extra: BTreeSet<_> = [NodeId(99)].into();
        let iso = Hypergraph::new([(Label::terminal("t", 3), ids(&[1, 2, 3]))], &extra).unwrap();
        assert_eq!(
            find_start_binding(&iso, s.selector()),
            Err(StartError::IsolatedNode(NodeId(99)))
        );
    }
}

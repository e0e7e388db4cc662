//! Bottom-up chart parser. Chart items are `(label, attachment, edges)`
//! triples; each is derived at most once.

use std::collections::{HashMap, HashSet, VecDeque};
use std::time::{Duration, Instant};

use fixedbitset::FixedBitSet;

use crate::engine::Outcome;
use crate::grammar::{Grammar, Rule};
use crate::hypergraph::{EdgeSet, Hypergraph, Label, NodeId};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CykItem {
    pub label: Label,
    pub attachment: Vec<NodeId>,
    pub subgraph: EdgeSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CykResult {
    pub outcome: Outcome,
    /// Nonterminal items created.
    pub items: usize,
    pub elapsed: Duration,
}

impl CykResult {
    pub fn accepted(&self) -> bool {
        self.outcome == Outcome::Accepted
    }
}

struct Entry {
    label: Label,
    attachment: Vec<NodeId>,
    subgraph: EdgeSet,
    nodes: FixedBitSet,
    internal: FixedBitSet,
}

struct Chart<'g> {
    grammar: &'g Grammar,
    node_count: usize,
    edge_count: usize,
    entries: Vec<Entry>,
    by_label: HashMap<Label, Vec<usize>>,
    by_attachment: HashMap<(Label, usize, NodeId), Vec<usize>>,
    seen: HashSet<(Label, Vec<NodeId>, EdgeSet)>,
    agenda: VecDeque<usize>,
    nonterminals: usize,
}

/// Partial match of one rule's right-hand side.
struct Partial {
    binding: Vec<Option<NodeId>>,
    bound_to: Vec<Option<usize>>,
    edges: EdgeSet,
    nodes: FixedBitSet,
    internal: FixedBitSet,
}

impl<'g> Chart<'g> {
    fn new(grammar: &'g Grammar, graph: &Hypergraph) -> Self {
        let mut chart = Chart {
            grammar,
            node_count: graph.node_count(),
            edge_count: graph.len(),
            entries: Vec::new(),
            by_label: HashMap::new(),
            by_attachment: HashMap::new(),
            seen: HashSet::new(),
            agenda: VecDeque::new(),
            nonterminals: 0,
        };
        for l in graph.literals() {
            let sub = EdgeSet::singleton(graph.len(), l.edge_id);
            let mut nodes = FixedBitSet::with_capacity(chart.node_count);
            for n in &l.attachment {
                nodes.insert(n.0 as usize);
            }
            chart.add(l.label.clone(), l.attachment.clone(), sub, nodes);
        }
        chart
    }

    fn add(&mut self, label: Label, attachment: Vec<NodeId>, subgraph: EdgeSet, nodes: FixedBitSet) -> Option<usize> {
        if !self.seen.insert((label.clone(), attachment.clone(), subgraph.clone())) {
            return None;
        }
        let mut internal = nodes.clone();
        for n in &attachment {
            internal.set(n.0 as usize, false);
        }
        let id = self.entries.len();
        self.by_label.entry(label.clone()).or_default().push(id);
        for (p, &n) in attachment.iter().enumerate() {
            self.by_attachment.entry((label.clone(), p, n)).or_default().push(id);
        }
        if !label.is_terminal() {
            self.nonterminals += 1;
        }
        self.entries.push(Entry {
            label,
            attachment,
            subgraph,
            nodes,
            internal,
        });
        self.agenda.push_back(id);
        Some(id)
    }

    /// Whether entry `e` can fill rhs literal `j` of `rule` given `part`.
    fn fits(&self, rule: &Rule, j: usize, e: &Entry, part: &Partial) -> bool {
        let lit = &rule.rhs.literals()[j];
        for (p, &rn) in lit.attachment.iter().enumerate() {
            let v = e.attachment[p];
            match part.binding[rn.0 as usize] {
                Some(w) if w != v => return false,
                Some(_) => {}
                None => {
                    if part.bound_to[v.0 as usize].is_some() {
                        return false;
                    }
                }
            }
            if part.internal.contains(v.0 as usize) {
                return false;
            }
        }
        e.subgraph.is_disjoint(&part.edges) && e.internal.is_disjoint(&part.nodes)
    }

    fn extend(&self, rule: &Rule, order: &[usize], part: &mut Partial, out: &mut Vec<(Vec<NodeId>, EdgeSet, FixedBitSet)>) {
        let Some((&j, rest)) = order.split_first() else {
            let att = rule
                .lhs
                .attachment
                .iter()
                .map(|n| part.binding[n.0 as usize].expect("lhs nodes occur on the rhs"))
                .collect();
            out.push((att, part.edges.clone(), part.nodes.clone()));
            return;
        };
        let lit = &rule.rhs.literals()[j];
        let bound = lit
            .attachment
            .iter()
            .enumerate()
            .find_map(|(p, n)| part.binding[n.0 as usize].map(|v| (p, v)));
        let pool = match bound {
            Some((p, v)) => self.by_attachment.get(&(lit.label.clone(), p, v)),
            None => self.by_label.get(&lit.label),
        };
        let Some(pool) = pool else {
            return;
        };
        for &c in pool {
            let e = &self.entries[c];
            if !self.fits(rule, j, e, part) {
                continue;
            }
            let saved = (part.edges.clone(), part.nodes.clone(), part.internal.clone());
            let mut newly = Vec::new();
            for (p, &rn) in lit.attachment.iter().enumerate() {
                if part.binding[rn.0 as usize].is_none() {
                    let v = e.attachment[p];
                    part.binding[rn.0 as usize] = Some(v);
                    part.bound_to[v.0 as usize] = Some(rn.0 as usize);
                    newly.push((rn, v));
                }
            }
            part.edges.union_with(&e.subgraph);
            part.nodes.union_with(&e.nodes);
            part.internal.union_with(&e.internal);
            self.extend(rule, rest, part, out);
            for (rn, v) in newly {
                part.binding[rn.0 as usize] = None;
                part.bound_to[v.0 as usize] = None;
            }
            (part.edges, part.nodes, part.internal) = saved;
        }
    }

    /// Rule applications that use entry `id` at some right-hand side position.
    fn combine(&self, id: usize) -> Vec<(Label, Vec<NodeId>, EdgeSet, FixedBitSet)> {
        let item = &self.entries[id];
        let mut results = Vec::new();
        for rule in self.grammar.rules() {
            for (i, lit) in rule.rhs.literals().iter().enumerate() {
                if lit.label != item.label {
                    continue;
                }
                let mut part = Partial {
                    binding: vec![None; rule.node_count()],
                    bound_to: vec![None; self.node_count],
                    edges: EdgeSet::with_capacity(self.edge_count),
                    nodes: FixedBitSet::with_capacity(self.node_count),
                    internal: FixedBitSet::with_capacity(self.node_count),
                };
                if !self.fits(rule, i, item, &part) {
                    continue;
                }
                for (p, &rn) in lit.attachment.iter().enumerate() {
                    let v = item.attachment[p];
                    part.binding[rn.0 as usize] = Some(v);
                    part.bound_to[v.0 as usize] = Some(rn.0 as usize);
                }
                part.edges.union_with(&item.subgraph);
                part.nodes.union_with(&item.nodes);
                part.internal.union_with(&item.internal);
                let order: Vec<usize> = (0..rule.rhs.len()).filter(|&j| j != i).collect();
                let mut out = Vec::new();
                self.extend(rule, &order, &mut part, &mut out);
                for (att, edges, nodes) in out {
                    results.push((rule.lhs.label.clone(), att, edges, nodes));
                }
            }
        }
        results
    }
}

fn dense(graph: &Hypergraph) -> (Hypergraph, Vec<NodeId>) {
    let original: Vec<NodeId> = graph.nodes().iter().copied().collect();
    let map: HashMap<NodeId, NodeId> = original
        .iter()
        .enumerate()
        .map(|(i, &n)| (n, NodeId(i as u32)))
        .collect();
    (graph.rename(&map).expect("dense renaming is injective"), original)
}

fn saturate(chart: &mut Chart, goal: Option<&(Label, Vec<NodeId>, EdgeSet)>, deadline: Option<Instant>) -> Outcome {
    let mut popped = 0u64;
    while let Some(id) = chart.agenda.pop_front() {
        popped += 1;
        if let Some(d) = deadline {
            if popped.is_multiple_of(64) && Instant::now() >= d {
                return Outcome::Timeout;
            }
        }
        for (label, att, edges, nodes) in chart.combine(id) {
            chart.add(label, att, edges, nodes);
            if goal.is_some_and(|g| chart.seen.contains(g)) {
                return Outcome::Accepted;
            }
        }
    }
    match goal {
        Some(g) if chart.seen.contains(g) => Outcome::Accepted,
        _ => Outcome::Rejected,
    }
}

/// Decides membership, stopping at the first derivation of the whole graph.
pub fn cyk_parse(grammar: &Grammar, graph: &Hypergraph) -> CykResult {
    cyk_parse_with_timeout(grammar, graph, None)
}

pub fn cyk_parse_with_timeout(grammar: &Grammar, graph: &Hypergraph, timeout: Option<Duration>) -> CykResult {
    let started = Instant::now();
    if graph.is_empty() || !graph.isolated_nodes().is_empty() {
        return CykResult {
            outcome: Outcome::Rejected,
            items: 0,
            elapsed: started.elapsed(),
        };
    }
    let (g, _) = dense(graph);
    let mut chart = Chart::new(grammar, &g);
    let goal = (grammar.start().clone(), Vec::new(), g.all_edges());
    let outcome = saturate(&mut chart, Some(&goal), timeout.map(|t| started + t));
    CykResult {
        outcome,
        items: chart.nonterminals,
        elapsed: started.elapsed(),
    }
}

/// All nonterminal items derivable on `graph`.
pub fn cyk_items(grammar: &Grammar, graph: &Hypergraph) -> HashSet<CykItem> {
    if graph.is_empty() {
        return HashSet::new();
    }
    let (g, original) = dense(graph);
    let mut chart = Chart::new(grammar, &g);
    saturate(&mut chart, None, None);
    chart
        .entries
        .into_iter()
        .filter(|e| !e.label.is_terminal())
        .map(|e| CykItem {
            label: e.label,
            attachment: e.attachment.iter().map(|n| original[n.0 as usize]).collect(),
            subgraph: e.subgraph,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundled;

    const WORKED_EXAMPLE: &str = "t(1,2,3) t(2,4,5) t(3,6,7) t(4,8,9) t(5,9,10) t(6,10,11) t(7,11,12)";

    fn item(label: Label, att: &[u32], edges: &[usize]) -> CykItem {
        CykItem {
            label,
            attachment: att.iter().map(|&n| NodeId(n)).collect(),
            subgraph: edges.iter().copied().collect(),
        }
    }

    #[test]
    fn single_triangle() {
        let g = bundled::sierpinski();
        let t0 = Hypergraph::parse("t(1,2,3)").unwrap();
        let r = cyk_parse(&g, &t0);
        assert!(r.accepted());
        let items = cyk_items(&g, &t0);
        let d = g.label("D").unwrap().clone();
        let expected: HashSet<CykItem> = [
            item(d, &[1, 2, 3], &[0]),
            item(g.start().clone(), &[], &[0]),
        ]
        .into();
        assert_eq!(items, expected);
    }

    #[test]
    fn worked_example() {
        let g = bundled::sierpinski();
        let worked_example = Hypergraph::parse(WORKED_EXAMPLE).unwrap();
        assert!(cyk_parse(&g, &worked_example).accepted());
        let d = g.label("D").unwrap().clone();
        assert!(cyk_items(&g, &worked_example).contains(&item(d, &[3, 10, 12], &[2, 5, 6])));
        let six = Hypergraph::parse(&WORKED_EXAMPLE[..WORKED_EXAMPLE.rfind(" t(").unwrap()]).unwrap();
        assert_eq!(six.len(), 6);
        assert!(!cyk_parse(&g, &six).accepted());
    }

    #[test]
    fn empty_graph() {
        let g = bundled::sierpinski();
        assert!(cyk_items(&g, &Hypergraph::empty()).is_empty());
        assert!(!cyk_parse(&g, &Hypergraph::empty()).accepted());
    }

    #[test]
    fn glued_nodes_are_rejected() {
        // Both triangles share node 3 at a position where the derivation
        // would need two distinct nodes.
        let g = bundled::sierpinski();
        let bad = Hypergraph::parse("t(1,2,3) t(2,4,3) t(3,5,6)").unwrap();
        assert!(!cyk_parse(&g, &bad).accepted());
    }

    #[test]
    fn series_parallel() {
        let g = bundled::series_parallel();
        for (text, ok) in [
            ("e(1,2)", true),
            ("e(1,2) e(1,2)", true),
            ("e(1,2) e(2,3) e(1,3)", true),
            ("e(1,2) e(2,1)", false),
            ("e(1,2) e(3,4)", false),
        ] {
            assert_eq!(cyk_parse(&g, &Hypergraph::parse(text).unwrap()).accepted(), ok, "{text}");
        }
    }
}

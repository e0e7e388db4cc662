//! Hypergraphs represented as a node set plus an ordered sequence of literals.
//!
//! A literal is a hyperedge `a(x1,...,xk)` whose attachment nodes are pairwise
//! distinct. Two graphs are *equivalent* when they have the same node set and
//! their literal sequences are permutations of each other; parsers must treat
//! equivalent graphs identically.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("label `{label}` has arity {arity} but literal has {got} attachment nodes")]
    ArityMismatch {
        label: String,
        arity: usize,
        got: usize,
    },
    #[error("literal `{label}` is attached to node {node} more than once")]
    DuplicateAttachment { label: String, node: NodeId },
    #[error("renaming maps nodes {a} and {b} to the same node {target}")]
    NonInjectiveRenaming { a: NodeId, b: NodeId, target: NodeId },
    #[error("renaming does not cover node {0}")]
    IncompleteRenaming(NodeId),
    #[error("not a permutation of 0..{0}")]
    NotAPermutation(usize),
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LabelKind {
    Terminal,
    Nonterminal,
}

/// An edge label together with its arity and terminal/nonterminal kind.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label {
    name: Arc<str>,
    arity: usize,
    kind: LabelKind,
}

impl Label {
    pub fn new(name: &str, arity: usize, kind: LabelKind) -> Self {
        Label {
            name: Arc::from(name),
            arity,
            kind,
        }
    }

    pub fn terminal(name: &str, arity: usize) -> Self {
        Label::new(name, arity, LabelKind::Terminal)
    }

    pub fn nonterminal(name: &str, arity: usize) -> Self {
        Label::new(name, arity, LabelKind::Nonterminal)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn kind(&self) -> LabelKind {
        self.kind
    }

    pub fn is_terminal(&self) -> bool {
        self.kind == LabelKind::Terminal
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.name, self.arity)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub u32);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A labeled hyperedge. `edge_id` is the literal's position in its host graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Literal {
    pub edge_id: usize,
    pub label: Label,
    pub attachment: Vec<NodeId>,
}

impl Literal {
    /// Content equality: label and attachment, ignoring the edge id.
    pub fn same_content(&self, other: &Literal) -> bool {
        self.label == other.label && self.attachment == other.attachment
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.label.name())?;
        for (i, n) in self.attachment.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, ")")
    }
}

fn check_literal(label: &Label, attachment: &[NodeId]) -> Result<(), GraphError> {
    if attachment.len() != label.arity() {
        return Err(GraphError::ArityMismatch {
            label: label.name().to_string(),
            arity: label.arity(),
            got: attachment.len(),
        });
    }
    let mut seen = BTreeSet::new();
    for &n in attachment {
        if !seen.insert(n) {
            return Err(GraphError::DuplicateAttachment {
                label: label.name().to_string(),
                node: n,
            });
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Hypergraph {
    nodes: BTreeSet<NodeId>,
    literals: Vec<Literal>,
}

impl Hypergraph {
    pub fn empty() -> Self {
        Hypergraph::default()
    }

    /// Builds a graph from `(label, attachment)` pairs; edge ids follow list order.
    pub fn new<I>(literals: I, extra_nodes: &BTreeSet<NodeId>) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (Label, Vec<NodeId>)>,
    {
        let mut nodes = extra_nodes.clone();
        let mut out = Vec::new();
        for (edge_id, (label, attachment)) in literals.into_iter().enumerate() {
            check_literal(&label, &attachment)?;
            nodes.extend(attachment.iter().copied());
            out.push(Literal {
                edge_id,
                label,
                attachment,
            });
        }
        Ok(Hypergraph {
            nodes,
            literals: out,
        })
    }

    /// Graph consisting of a single literal and exactly its attachment nodes.
    pub fn from_literal(label: Label, attachment: Vec<NodeId>) -> Result<Self, GraphError> {
        Hypergraph::new([(label, attachment)], &BTreeSet::new())
    }

    pub fn nodes(&self) -> &BTreeSet<NodeId> {
        &self.nodes
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn literal(&self, edge_id: usize) -> &Literal {
        &self.literals[edge_id]
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn all_edges(&self) -> EdgeSet {
        let mut s = EdgeSet::with_capacity(self.len());
        for i in 0..self.len() {
            s.insert(i);
        }
        s
    }

    /// Nodes not attached to any literal.
    pub fn isolated_nodes(&self) -> Vec<NodeId> {
        let attached: BTreeSet<NodeId> = self
            .literals
            .iter()
            .flat_map(|l| l.attachment.iter().copied())
            .collect();
        self.nodes.difference(&attached).copied().collect()
    }

    pub fn max_node(&self) -> Option<NodeId> {
        self.nodes.iter().next_back().copied()
    }

    /// Applies an injective node renaming. Every node of the graph must be mapped.
    pub fn rename(&self, renaming: &HashMap<NodeId, NodeId>) -> Result<Self, GraphError> {
        let mut inverse: BTreeMap<NodeId, NodeId> = BTreeMap::new();
        for &n in &self.nodes {
            let target = *renaming.get(&n).ok_or(GraphError::IncompleteRenaming(n))?;
            if let Some(&prev) = inverse.get(&target) {
                return Err(GraphError::NonInjectiveRenaming {
                    a: prev,
                    b: n,
                    target,
                });
            }
            inverse.insert(target, n);
        }
        let literals = self
            .literals
            .iter()
            .map(|l| Literal {
                edge_id: l.edge_id,
                label: l.label.clone(),
                attachment: l.attachment.iter().map(|n| renaming[n]).collect(),
            })
            .collect();
        Ok(Hypergraph {
            nodes: inverse.keys().copied().collect(),
            literals,
        })
    }

    /// `self` followed by `other`; shared nodes are identified.
    pub fn concat(&self, other: &Hypergraph) -> Hypergraph {
        let nodes = self.nodes.union(&other.nodes).copied().collect();
        let literals = self
            .literals
            .iter()
            .chain(other.literals.iter())
            .enumerate()
            .map(|(edge_id, l)| Literal {
                edge_id,
                label: l.label.clone(),
                attachment: l.attachment.clone(),
            })
            .collect();
        Hypergraph { nodes, literals }
    }

    /// Equal node sets and equal literal multisets.
    pub fn equivalent(&self, other: &Hypergraph) -> bool {
        if self.nodes != other.nodes || self.len() != other.len() {
            return false;
        }
        let mut a = self.content_keys();
        let mut b = other.content_keys();
        a.sort();
        b.sort();
        a == b
    }

    fn content_keys(&self) -> Vec<(&Label, &[NodeId])> {
        self.literals
            .iter()
            .map(|l| (&l.label, l.attachment.as_slice()))
            .collect()
    }

    /// Reorders literals: position `i` of the result holds literal `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Result<Self, GraphError> {
        let n = self.len();
        if perm.len() != n {
            return Err(GraphError::NotAPermutation(n));
        }
        let mut seen = vec![false; n];
        for &p in perm {
            if p >= n || seen[p] {
                return Err(GraphError::NotAPermutation(n));
            }
            seen[p] = true;
        }
        let literals = perm
            .iter()
            .enumerate()
            .map(|(edge_id, &p)| Literal {
                edge_id,
                label: self.literals[p].label.clone(),
                attachment: self.literals[p].attachment.clone(),
            })
            .collect();
        Ok(Hypergraph {
            nodes: self.nodes.clone(),
            literals,
        })
    }

    /// Replaces the literal at `position` by the literals of `replacement`,
    /// adding the replacement's nodes. Edge ids are reassigned sequentially.
    pub(crate) fn splice(&self, position: usize, replacement: &Hypergraph) -> Hypergraph {
        let mut nodes = self.nodes.clone();
        nodes.extend(replacement.nodes.iter().copied());
        let literals = self.literals[..position]
            .iter()
            .chain(replacement.literals.iter())
            .chain(self.literals[position + 1..].iter())
            .enumerate()
            .map(|(edge_id, l)| Literal {
                edge_id,
                label: l.label.clone(),
                attachment: l.attachment.clone(),
            })
            .collect();
        Hypergraph { nodes, literals }
    }

    /// Relabels nodes to 0, 1, ... in order of first occurrence (isolated nodes last).
    pub fn canonical_relabel(&self) -> Hypergraph {
        let mut map = HashMap::new();
        let mut next = 0u32;
        for l in &self.literals {
            for &n in &l.attachment {
                map.entry(n).or_insert_with(|| {
                    next += 1;
                    NodeId(next - 1)
                });
            }
        }
        for &n in &self.nodes {
            map.entry(n).or_insert_with(|| {
                next += 1;
                NodeId(next - 1)
            });
        }
        self.rename(&map).expect("first-occurrence relabeling is injective")
    }

    /// Literals whose edge ids are in `edges`, in sequence order.
    pub fn subgraph(&self, edges: &EdgeSet) -> Hypergraph {
        let lits = edges
            .iter()
            .map(|e| (self.literals[e].label.clone(), self.literals[e].attachment.clone()));
        Hypergraph::new(lits, &BTreeSet::new()).expect("literals of a valid graph")
    }

    /// Parses the line-oriented text format: `label(n1,...,nk)` items separated
    /// by whitespace or newlines; `#` starts a comment. Labels are terminals
    /// whose arity is fixed by first use.
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let mut arities: HashMap<String, usize> = HashMap::new();
        let mut lits = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let content = raw.split('#').next().unwrap_or("");
            let mut rest = content.trim();
            while !rest.is_empty() {
                let open = rest.find('(').ok_or_else(|| GraphError::Syntax {
                    line,
                    msg: format!("expected `label(...)`, found `{rest}`"),
                })?;
                let close = rest.find(')').ok_or_else(|| GraphError::Syntax {
                    line,
                    msg: "missing `)`".into(),
                })?;
                if close < open {
                    return Err(GraphError::Syntax {
                        line,
                        msg: "unbalanced parentheses".into(),
                    });
                }
                let name = rest[..open].trim();
                if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_') {
                    return Err(GraphError::Syntax {
                        line,
                        msg: format!("invalid label `{name}`"),
                    });
                }
                let inner = rest[open + 1..close].trim();
                let mut att = Vec::new();
                if !inner.is_empty() {
                    for tok in inner.split(',') {
                        let tok = tok.trim();
                        let n: u32 = tok.parse().map_err(|_| GraphError::Syntax {
                            line,
                            msg: format!("invalid node id `{tok}`"),
                        })?;
                        att.push(NodeId(n));
                    }
                }
                let arity = *arities.entry(name.to_string()).or_insert(att.len());
                let label = Label::terminal(name, arity);
                check_literal(&label, &att).map_err(|e| GraphError::Syntax {
                    line,
                    msg: e.to_string(),
                })?;
                lits.push((label, att));
                rest = rest[close + 1..].trim_start_matches([',', ';']).trim();
            }
        }
        Hypergraph::new(lits, &BTreeSet::new())
    }

    /// One literal per line, in sequence order.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for l in &self.literals {
            s.push_str(&l.to_string());
            s.push('\n');
        }
        s
    }
}

impl fmt::Display for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.literals.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// A set of edge ids of one host graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct EdgeSet(FixedBitSet);

impl EdgeSet {
    pub fn with_capacity(n: usize) -> Self {
        EdgeSet(FixedBitSet::with_capacity(n))
    }

    pub fn singleton(capacity: usize, edge: usize) -> Self {
        let mut s = EdgeSet::with_capacity(capacity);
        s.insert(edge);
        s
    }

    pub fn insert(&mut self, edge: usize) {
        self.0.grow(edge + 1);
        self.0.insert(edge);
    }

    pub fn contains(&self, edge: usize) -> bool {
        self.0.contains(edge)
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.ones()
    }

    pub fn is_disjoint(&self, other: &EdgeSet) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn is_subset(&self, other: &EdgeSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn union(&self, other: &EdgeSet) -> EdgeSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn union_with(&mut self, other: &EdgeSet) {
        if other.0.len() > self.0.len() {
            self.0.grow(other.0.len());
        }
        self.0.union_with(&other.0);
    }

    pub fn difference(&self, other: &EdgeSet) -> EdgeSet {
        let mut s = self.clone();
        s.0.difference_with(&other.0);
        s
    }
}

impl FromIterator<usize> for EdgeSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        let mut s = EdgeSet::default();
        for e in iter {
            s.insert(e);
        }
        s
    }
}

impl fmt::Display for EdgeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

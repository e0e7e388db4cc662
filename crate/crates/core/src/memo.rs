//! Memo store: nonterminal literals together with the input edges they were
//! reduced from, shared by all stacks of one parse.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::cfa::{Trigger, TriggerPosition};
use crate::hypergraph::{EdgeSet, Hypergraph, Label, NodeId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MemoPair {
    pub label: Label,
    pub attachment: Vec<NodeId>,
    pub subgraph: EdgeSet,
    /// Insertion order within the store.
    pub seq: usize,
    /// Nodes of the subgraph that are not attachment nodes.
    pub internal: Vec<NodeId>,
}

impl MemoPair {
    pub fn size(&self) -> usize {
        self.subgraph.len()
    }
}

#[derive(Debug, Clone, Default)]
pub struct MemoStore {
    by_label: HashMap<Label, Vec<MemoPair>>,
    seen: HashSet<(Label, Vec<NodeId>, EdgeSet)>,
    order: Vec<(Label, usize)>,
    by_node: HashMap<(Label, usize, NodeId), Vec<usize>>,
}

impl MemoStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// The pair inserted as number `seq`.
    pub fn get(&self, seq: usize) -> &MemoPair {
        let (label, i) = &self.order[seq];
        &self.by_label[label][*i]
    }

    /// Adds `⟨label(attachment), subgraph⟩`; returns false if already present.
    pub fn insert(
        &mut self,
        label: &Label,
        attachment: &[NodeId],
        subgraph: &EdgeSet,
        graph: &Hypergraph,
    ) -> bool {
        let key = (label.clone(), attachment.to_vec(), subgraph.clone());
        if !self.seen.insert(key) {
            return false;
        }
        let mut nodes = BTreeSet::new();
        for e in subgraph.iter() {
            nodes.extend(graph.literal(e).attachment.iter().copied());
        }
        for n in attachment {
            nodes.remove(n);
        }
        for (pos, &n) in attachment.iter().enumerate() {
            self.by_node.entry((label.clone(), pos, n)).or_default().push(self.order.len());
        }
        let pairs = self.by_label.entry(label.clone()).or_default();
        self.order.push((label.clone(), pairs.len()));
        pairs.push(MemoPair {
            label: label.clone(),
            attachment: attachment.to_vec(),
            subgraph: subgraph.clone(),
            seq: self.order.len() - 1,
            internal: nodes.into_iter().collect(),
        });
        true
    }

    /// All pairs in insertion order.
    pub fn pairs(&self) -> impl Iterator<Item = &MemoPair> {
        (0..self.order.len()).map(|i| self.get(i))
    }

    /// Valid pairs for a nonterminal trigger at a stack whose state binds
    /// `binding` and which has read `read`; `is_read` tells whether a node
    /// has been read on that stack. Largest subgraphs come first, ties in
    /// insertion order.
    pub fn lookup(
        &self,
        trigger: &Trigger,
        binding: &[NodeId],
        read: &EdgeSet,
        is_read: &dyn Fn(NodeId) -> bool,
    ) -> Vec<&MemoPair> {
        let Some(pairs) = self.by_label.get(&trigger.label) else {
            return Vec::new();
        };
        let anchor = trigger.positions.iter().enumerate().find_map(|(pos, p)| match p {
            TriggerPosition::Param(i) => Some((pos, binding[*i])),
            _ => None,
        });
        let fits = |p: &&MemoPair| pair_fits(p, trigger, binding, read, is_read);
        let mut hits: Vec<&MemoPair> = match anchor {
            Some((pos, n)) => match self.by_node.get(&(trigger.label.clone(), pos, n)) {
                Some(seqs) => seqs.iter().map(|&i| self.get(i)).filter(fits).collect(),
                None => Vec::new(),
            },
            None => pairs.iter().filter(fits).collect(),
        };
        hits.sort_by(|a, b| b.size().cmp(&a.size()).then(a.seq.cmp(&b.seq)));
        hits
    }

    /// Lines `D(3,10,12) <- {2,5,6}`, sorted.
    pub fn dump(&self) -> Vec<String> {
        let mut lines: Vec<String> = self
            .by_label
            .values()
            .flatten()
            .map(|p| {
                let att: Vec<String> = p.attachment.iter().map(|n| n.0.to_string()).collect();
                format!("{}({}) <- {}", p.label.name(), att.join(","), p.subgraph)
            })
            .collect();
        lines.sort();
        lines
    }
}

/// Whether `pair` may be reused at a stack: parameter positions must carry
/// the bound nodes, placeholder positions unread (or, for `Seen`, read)
/// nodes, no edge may be read twice, and the pair's internal nodes must
/// still be unread.
pub fn pair_fits(
    pair: &MemoPair,
    trigger: &Trigger,
    binding: &[NodeId],
    read: &EdgeSet,
    is_read: &dyn Fn(NodeId) -> bool,
) -> bool {
    pair.label == trigger.label
        && trigger
            .positions
            .iter()
            .zip(&pair.attachment)
            .all(|(pos, &n)| match *pos {
                TriggerPosition::Param(i) => binding[i] == n,
                TriggerPosition::Fresh(_) => !is_read(n),
                TriggerPosition::Seen(_) => is_read(n),
            })
        && pair.subgraph.is_disjoint(read)
        && pair.internal.iter().all(|&n| !is_read(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use TriggerPosition::{Fresh, Param};

    fn worked_example() -> Hypergraph {
        Hypergraph::parse(
            "t(1,2,3) t(2,4,5) t(3,6,7) t(4,8,9) t(5,9,10) t(6,10,11) t(7,11,12)",
        )
        .unwrap()
    }

    fn edges(ids: &[usize]) -> EdgeSet {
        ids.iter().copied().collect()
    }

    fn n(v: &[u32]) -> Vec<NodeId> {
        v.iter().map(|&i| NodeId(i)).collect()
    }

    fn d() -> Label {
        Label::nonterminal("D", 3)
    }

    /// Store contents after step 16 of the worked depth-first parse.
    fn step16(g: &Hypergraph) -> MemoStore {
        let mut m = MemoStore::new();
        for (att, sub) in [
            (vec![1, 2, 3], vec![0]),
            (vec![2, 4, 5], vec![1]),
            (vec![3, 6, 7], vec![2]),
            (vec![6, 10, 11], vec![5]),
            (vec![7, 11, 12], vec![6]),
            (vec![3, 10, 12], vec![2, 5, 6]),
            (vec![4, 8, 9], vec![3]),
            (vec![5, 9, 10], vec![4]),
            (vec![2, 8, 10], vec![1, 3, 4]),
        ] {
            assert!(m.insert(&d(), &n(&att), &edges(&sub), g));
        }
        m
    }

    #[test]
    fn insert_deduplicates() {
        let g = worked_example();
        let mut m = step16(&g);
        assert_eq!(m.len(), 9);
        assert!(!m.insert(&d(), &n(&[3, 10, 12]), &edges(&[2, 5, 6]), &g));
        assert_eq!(m.len(), 9);
        assert_eq!(m.pairs().next().unwrap().attachment, n(&[1, 2, 3]));
        assert!(m.dump().contains(&"D(3,10,12) <- {2,5,6}".to_string()));
    }

    #[test]
    fn lookup_orders_by_size() {
        let g = worked_example();
        let m = step16(&g);
        // stack at q3(2,8,10,1,3) having read edges {0,1,3,4}
        let binding = n(&[2, 8, 10, 1, 3]);
        let read = edges(&[0, 1, 3, 4]);
        let read_nodes: BTreeSet<u32> = [1, 2, 3, 4, 5, 8, 9, 10].into();
        let is_read = |x: NodeId| read_nodes.contains(&x.0);
        let trig = |pos: Vec<TriggerPosition>| Trigger { label: d(), positions: pos };

        let t1 = trig(vec![Param(1), Fresh(0), Fresh(1)]);
        assert!(m.lookup(&t1, &binding, &read, &is_read).is_empty());

        let t2 = trig(vec![Param(4), Param(2), Fresh(0)]);
        let hits = m.lookup(&t2, &binding, &read, &is_read);
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].attachment, n(&[3, 10, 12]));

        let t3 = trig(vec![Param(4), Fresh(0), Fresh(1)]);
        let hits = m.lookup(&t3, &binding, &read, &is_read);
        assert_eq!(hits.len(), 1, "D(3,10,12) must not fit: node 10 is read");
        assert_eq!(hits[0].attachment, n(&[3, 6, 7]));

        let all = g.all_edges();
        assert!(m.lookup(&t3, &binding, &all, &|_| false).is_empty());
    }

    #[test]
    fn internal_nodes_must_be_unread() {
        let g = worked_example();
        let m = step16(&g);
        let t = Trigger { label: d(), positions: vec![Param(0), Fresh(0), Fresh(1)] };
        let read = edges(&[0]);
        // node 11 is internal to D(3,10,12) <- {2,5,6}
        let is_read = |x: NodeId| [1, 2, 3, 11].contains(&x.0);
        let hits = m.lookup(&t, &n(&[3]), &read, &is_read);
        assert_eq!(hits.iter().map(|p| p.attachment.clone()).collect::<Vec<_>>(), [n(&[3, 6, 7])]);
    }
}

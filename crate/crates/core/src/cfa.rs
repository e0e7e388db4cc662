//! Characteristic finite automaton (CFA) for predictive shift-reduce parsing.
//!
//! States are sets of dotted rule items. Every item records, for each node of
//! its rule, whether the node is already known (bound to one of the state's
//! parameters) or not yet seen. Transitions are triggered by edges whose
//! attached nodes are either parameters of the source state or placeholders
//! for nodes that have not been read yet.
//!
//! Construction follows the LR(0) canonical collection, lifted to graphs:
//!
//! * closure adds dot-0 items for every rule of a nonterminal that follows a
//!   dot, passing known attachment nodes down to the rule's left-hand side;
//! * goto groups items by the label of the literal after the dot and by the
//!   known/unknown pattern of its attachment; each group yields one
//!   transition whose placeholders become new parameters of the target;
//! * targets are merged when their kernels are equal up to a renaming of
//!   parameters. Parameters are numbered canonically: kernel items are
//!   ordered by (known node count, rule, dot), ties are broken by the
//!   lexicographically smallest numbering, and nodes are numbered in order
//!   of first occurrence, left-hand side nodes first.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::grammar::Grammar;
use crate::hypergraph::Label;

pub type StateId = usize;

pub const DEFAULT_MAX_STATES: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CfaError {
    #[error("CFA construction exceeded {0} states")]
    TooManyStates(usize),
}

/// One attachment position of a trigger: a parameter of the source state, a
/// placeholder for a node that has not been read yet, or a placeholder for a
/// node that has been read but whose identity the state no longer tracks.
///
/// Placeholders are numbered by their position among the non-parameter
/// positions of the trigger.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TriggerPosition {
    Param(usize),
    Fresh(usize),
    Seen(usize),
}

/// What an item knows about one of its rule's nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    Unknown,
    /// Already read, but not bound to a parameter.
    Seen,
    Param(usize),
}

impl Slot {
    pub fn param(self) -> Option<usize> {
        match self {
            Slot::Param(p) => Some(p),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Trigger {
    pub label: Label,
    pub positions: Vec<TriggerPosition>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transition {
    pub source: StateId,
    pub trigger: Trigger,
    pub target: StateId,
    /// Binding of each target parameter, in terms of the source state.
    pub target_binding: Vec<TriggerPosition>,
    /// Best rule priority among the items this transition advances.
    pub priority: u8,
}

impl Transition {
    pub fn is_shift(&self) -> bool {
        self.trigger.label.is_terminal()
    }
}

/// A dotted rule. `binding[n]` describes rule node `n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Item {
    pub rule: usize,
    pub dot: usize,
    pub binding: Vec<Slot>,
}

impl Item {
    fn known(&self) -> usize {
        self.binding.iter().filter(|b| b.param().is_some()).count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ReduceLabel {
    pub rule: usize,
    /// Parameters bound to the left-hand side nodes.
    pub lhs: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct CfaState {
    pub id: StateId,
    pub param_count: usize,
    pub kernel: Vec<Item>,
    pub closure: Vec<Item>,
    pub reduces: Vec<ReduceLabel>,
    pub accepting: bool,
    /// Outgoing transitions (indices into `Cfa::transitions`), shifts first.
    pub shifts: Vec<usize>,
    pub gotos: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct Cfa {
    pub states: Vec<CfaState>,
    pub transitions: Vec<Transition>,
    pub initial: StateId,
    pub initial_arity: usize,
    pub start_rule: usize,
    grammar: Grammar,
    unique_incidence: HashSet<(Label, usize)>,
}

impl Cfa {
    pub fn grammar(&self) -> &Grammar {
        &self.grammar
    }

    pub fn state(&self, id: StateId) -> &CfaState {
        &self.states[id]
    }

    pub fn transition(&self, idx: usize) -> &Transition {
        &self.transitions[idx]
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Reduce labels other than the start rule's.
    pub fn regular_reduces(&self, id: StateId) -> impl Iterator<Item = &ReduceLabel> {
        let start = self.start_rule;
        self.states[id].reduces.iter().filter(move |r| r.rule != start)
    }
}

type StateKey = Vec<(usize, usize, Vec<Slot>)>;

struct Canonical {
    kernel: Vec<Item>,
    key: StateKey,
    /// temporary parameter id -> canonical parameter
    mapping: HashMap<usize, usize>,
    param_count: usize,
}

fn number_items(items: &[&Item]) -> (Vec<Item>, HashMap<usize, usize>) {
    let mut mapping = HashMap::new();
    let mut out = Vec::with_capacity(items.len());
    for it in items {
        let binding = it
            .binding
            .iter()
            .map(|b| match *b {
                Slot::Param(t) => {
                    let next = mapping.len();
                    Slot::Param(*mapping.entry(t).or_insert(next))
                }
                other => other,
            })
            .collect();
        out.push(Item {
            rule: it.rule,
            dot: it.dot,
            binding,
        });
    }
    (out, mapping)
}

fn encode(items: &[Item]) -> StateKey {
    items
        .iter()
        .map(|i| (i.rule, i.dot, i.binding.clone()))
        .collect()
}

const MAX_TIE_ORDERINGS: usize = 40_320;

/// Merges kernel items that differ only in which parameters sit at
/// left-hand-side positions; the differing positions become `Seen`.
/// Without this, left-recursive rules nested inside rules that pass down
/// different known end nodes make the number of states unbounded.
fn widen(grammar: &Grammar, items: Vec<Item>) -> Vec<Item> {
    let mut groups: Vec<(Item, Vec<Item>)> = Vec::new();
    let mut index: HashMap<Item, usize> = HashMap::new();
    for it in items {
        let arity = grammar.rule(it.rule).lhs.attachment.len();
        let mut key = it.clone();
        for b in &mut key.binding[..arity] {
            if *b != Slot::Unknown {
                *b = Slot::Seen;
            }
        }
        match index.get(&key) {
            Some(&g) => {
                if !groups[g].1.contains(&it) {
                    groups[g].1.push(it);
                }
            }
            None => {
                index.insert(key.clone(), groups.len());
                groups.push((key, vec![it]));
            }
        }
    }
    let mut out = Vec::new();
    for (mut key, members) in groups {
        if members.len() == 1 {
            out.extend(members);
            continue;
        }
        for (n, b) in key.binding.iter_mut().enumerate() {
            if members.iter().all(|m| m.binding[n] == members[0].binding[n]) {
                *b = members[0].binding[n];
            }
        }
        out.push(key);
    }
    out
}

fn canonicalize(items: Vec<Item>) -> Canonical {
    let mut items: Vec<Item> = items;
    items.sort();
    items.dedup();
    let shape = |i: &Item| {
        (
            i.known(),
            i.rule,
            i.dot,
            i.binding
                .iter()
                .map(|b| match b {
                    Slot::Param(_) => 2u8,
                    Slot::Seen => 1,
                    Slot::Unknown => 0,
                })
                .collect::<Vec<_>>(),
        )
    };
    items.sort_by(|a, b| shape(a).cmp(&shape(b)).then_with(|| a.cmp(b)));
    let mut groups: Vec<Vec<&Item>> = Vec::new();
    for it in &items {
        match groups.last_mut() {
            Some(g) if shape(g[0]) == shape(it) => g.push(it),
            _ => groups.push(vec![it]),
        }
    }
    let orderings: usize = groups
        .iter()
        .try_fold(1usize, |acc, g| {
            (1..=g.len()).try_fold(acc, |a, f| a.checked_mul(f))
        })
        .unwrap_or(usize::MAX);

    let mut best: Option<(StateKey, Vec<Item>, HashMap<usize, usize>)> = None;
    let mut consider = |order: Vec<&Item>| {
        let (numbered, mapping) = number_items(&order);
        let key = encode(&numbered);
        if best.as_ref().is_none_or(|(k, _, _)| key < *k) {
            best = Some((key, numbered, mapping));
        }
    };
    if orderings <= MAX_TIE_ORDERINGS {
        let mut perms: Vec<Vec<Vec<&Item>>> = groups.iter().map(|g| permutations(g)).collect();
        let mut idx = vec![0usize; perms.len()];
        loop {
            let order: Vec<&Item> = idx
                .iter()
                .enumerate()
                .flat_map(|(g, &i)| perms[g][i].iter().copied())
                .collect();
            consider(order);
            let mut g = 0;
            loop {
                if g == idx.len() {
                    break;
                }
                idx[g] += 1;
                if idx[g] < perms[g].len() {
                    break;
                }
                idx[g] = 0;
                g += 1;
            }
            if g == idx.len() {
                break;
            }
        }
        perms.clear();
    } else {
        consider(items.iter().collect());
    }
    let (key, kernel, mapping) = best.expect("at least one ordering");
    let param_count = mapping.len();
    Canonical {
        kernel,
        key,
        mapping,
        param_count,
    }
}

fn permutations<'a>(items: &[&'a Item]) -> Vec<Vec<&'a Item>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, head);
            out.push(p);
        }
    }
    out
}

/// Closure of a kernel, with the best rule priority reaching each item.
fn closure(grammar: &Grammar, kernel: &[Item]) -> (Vec<Item>, Vec<u8>) {
    let mut items: Vec<Item> = kernel.to_vec();
    let mut index: HashMap<Item, usize> = items
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, it)| (it, i))
        .collect();
    let mut parents: Vec<Vec<usize>> = vec![Vec::new(); items.len()];
    let mut i = 0;
    while i < items.len() {
        let it = items[i].clone();
        let rule = grammar.rule(it.rule);
        if let Some(next) = rule.rhs.literals().get(it.dot) {
            if !next.label.is_terminal() {
                for r in grammar.rules().iter().filter(|r| r.lhs.label == next.label) {
                    let mut binding = vec![Slot::Unknown; r.node_count()];
                    for (pos, n) in r.lhs.attachment.iter().enumerate() {
                        binding[n.0 as usize] = it.binding[next.attachment[pos].0 as usize];
                    }
                    let child = Item {
                        rule: r.index,
                        dot: 0,
                        binding,
                    };
                    let ci = *index.entry(child.clone()).or_insert_with(|| {
                        items.push(child);
                        parents.push(Vec::new());
                        items.len() - 1
                    });
                    if ci >= kernel.len() && !parents[ci].contains(&i) {
                        parents[ci].push(i);
                    }
                }
            }
        }
        i += 1;
    }
    let mut prio: Vec<u8> = items
        .iter()
        .enumerate()
        .map(|(i, it)| {
            if i < kernel.len() {
                grammar.rule(it.rule).priority
            } else {
                u8::MAX
            }
        })
        .collect();
    loop {
        let mut changed = false;
        for c in kernel.len()..items.len() {
            for &p in &parents[c] {
                if prio[p] < prio[c] {
                    prio[c] = prio[p];
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    (items, prio)
}

struct Group {
    trigger: Trigger,
    kernel: Vec<Item>,
    priority: u8,
}

/// Groups closure items by the literal after the dot.
fn goto_groups(grammar: &Grammar, items: &[Item], prio: &[u8], param_count: usize) -> Vec<Group> {
    let mut groups: Vec<Group> = Vec::new();
    let mut by_trigger: HashMap<Trigger, usize> = HashMap::new();
    for (it, &p) in items.iter().zip(prio) {
        let rule = grammar.rule(it.rule);
        let Some(next) = rule.rhs.literals().get(it.dot) else {
            continue;
        };
        let mut placeholders = 0;
        let mut binding = it.binding.clone();
        let positions: Vec<TriggerPosition> = next
            .attachment
            .iter()
            .map(|n| {
                let slot = it.binding[n.0 as usize];
                if let Slot::Param(p) = slot {
                    return TriggerPosition::Param(p);
                }
                binding[n.0 as usize] = Slot::Param(param_count + placeholders);
                placeholders += 1;
                if slot == Slot::Seen {
                    TriggerPosition::Seen(placeholders - 1)
                } else {
                    TriggerPosition::Fresh(placeholders - 1)
                }
            })
            .collect();
        let trigger = Trigger {
            label: next.label.clone(),
            positions,
        };
        let advanced = Item {
            rule: it.rule,
            dot: it.dot + 1,
            binding,
        };
        match by_trigger.get(&trigger) {
            Some(&g) => {
                groups[g].kernel.push(advanced);
                groups[g].priority = groups[g].priority.min(p);
            }
            None => {
                by_trigger.insert(trigger.clone(), groups.len());
                groups.push(Group {
                    trigger,
                    kernel: vec![advanced],
                    priority: p,
                });
            }
        }
    }
    groups
}

pub fn build_cfa(grammar: &Grammar) -> Result<Cfa, CfaError> {
    build_cfa_with_limit(grammar, DEFAULT_MAX_STATES)
}

pub fn build_cfa_with_limit(grammar: &Grammar, max_states: usize) -> Result<Cfa, CfaError> {
    let start = grammar.start_rule();
    let mut binding = vec![Slot::Unknown; start.node_count()];
    binding[grammar.selector().rule_node.0 as usize] = Slot::Param(0);
    let init = canonicalize(vec![Item {
        rule: start.index,
        dot: 0,
        binding,
    }]);

    let mut states: Vec<CfaState> = Vec::new();
    let mut transitions: Vec<Transition> = Vec::new();
    let mut by_key: HashMap<StateKey, StateId> = HashMap::new();
    let mut queue = VecDeque::new();

    let mut add_state = |c: Canonical, states: &mut Vec<CfaState>, queue: &mut VecDeque<StateId>| {
        if let Some(&id) = by_key.get(&c.key) {
            return Ok(id);
        }
        if states.len() >= max_states {
            return Err(CfaError::TooManyStates(max_states));
        }
        let id = states.len();
        let reduces: Vec<ReduceLabel> = c
            .kernel
            .iter()
            .filter(|it| it.dot == grammar.rule(it.rule).rhs.len())
            .map(|it| ReduceLabel {
                rule: it.rule,
                lhs: grammar
                    .rule(it.rule)
                    .lhs
                    .attachment
                    .iter()
                    .map(|n| {
                        it.binding[n.0 as usize]
                            .param()
                            .expect("complete items are fully bound")
                    })
                    .collect(),
            })
            .collect();
        let accepting = reduces.iter().any(|r| r.rule == start.index);
        by_key.insert(c.key, id);
        states.push(CfaState {
            id,
            param_count: c.param_count,
            kernel: c.kernel,
            closure: Vec::new(),
            reduces,
            accepting,
            shifts: Vec::new(),
            gotos: Vec::new(),
        });
        queue.push_back(id);
        Ok(id)
    };

    let initial = add_state(init, &mut states, &mut queue)?;
    while let Some(sid) = queue.pop_front() {
        let (items, prio) = closure(grammar, &states[sid].kernel);
        let param_count = states[sid].param_count;
        for group in goto_groups(grammar, &items, &prio, param_count) {
            let canon = canonicalize(widen(grammar, group.kernel));
            let mut target_binding = vec![TriggerPosition::Param(0); canon.param_count];
            for (&temp, &k) in &canon.mapping {
                target_binding[k] = if temp < param_count {
                    TriggerPosition::Param(temp)
                } else {
                    let j = temp - param_count;
                    *group
                        .trigger
                        .positions
                        .iter()
                        .find(|p| matches!(p, TriggerPosition::Fresh(i) | TriggerPosition::Seen(i) if *i == j))
                        .expect("placeholder occurs in trigger")
                };
            }
            let target = add_state(canon, &mut states, &mut queue)?;
            let idx = transitions.len();
            let shift = group.trigger.label.is_terminal();
            transitions.push(Transition {
                source: sid,
                trigger: group.trigger,
                target,
                target_binding,
                priority: group.priority,
            });
            if shift {
                states[sid].shifts.push(idx);
            } else {
                states[sid].gotos.push(idx);
            }
        }
        states[sid].closure = items;
    }

    Ok(Cfa {
        states,
        transitions,
        initial,
        initial_arity: 1,
        start_rule: start.index,
        grammar: grammar.clone(),
        unique_incidence: unique_incidences(grammar),
    })
}

/// Terminal label/position pairs (1-based positions) at which no node of any
/// generated graph can have two incident edges.
///
/// Computed as an upper bound on incidence counts, saturating at 2: for each
/// nonterminal attachment position, the largest number of `label@position`
/// incidences its node can receive from the derived subgraph.
pub fn unique_incidences(grammar: &Grammar) -> HashSet<(Label, usize)> {
    type Counts = BTreeMap<(Label, usize), u8>;
    let add = |acc: &mut Counts, key: (Label, usize), n: u8| {
        let e = acc.entry(key).or_insert(0);
        *e = (*e + n).min(2);
    };
    let mut inc: HashMap<(Label, usize), Counts> = HashMap::new();
    let node_counts = |inc: &HashMap<(Label, usize), Counts>, rule: &crate::grammar::Rule, node| {
        let mut acc = Counts::new();
        for l in rule.rhs.literals() {
            for (j, &n) in l.attachment.iter().enumerate() {
                if n != node {
                    continue;
                }
                if l.label.is_terminal() {
                    add(&mut acc, (l.label.clone(), j + 1), 1);
                } else if let Some(c) = inc.get(&(l.label.clone(), j)) {
                    for (k, &v) in c {
                        add(&mut acc, k.clone(), v);
                    }
                }
            }
        }
        acc
    };
    loop {
        let mut changed = false;
        for r in grammar.rules() {
            for (i, &n) in r.lhs.attachment.iter().enumerate() {
                let counts = node_counts(&inc, r, n);
                let entry = inc.entry((r.lhs.label.clone(), i)).or_default();
                for (k, v) in counts {
                    let e = entry.entry(k).or_insert(0);
                    if v > *e {
                        *e = v;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut shared = HashSet::new();
    for r in grammar.rules() {
        for n in (r.lhs.attachment.len()..r.node_count()).map(|i| crate::hypergraph::NodeId(i as u32)) {
            for (k, v) in node_counts(&inc, r, n) {
                if v >= 2 {
                    shared.insert(k);
                }
            }
        }
    }
    let mut unique = HashSet::new();
    for l in grammar.terminals() {
        for p in 1..=l.arity() {
            if !shared.contains(&(l.clone(), p)) {
                unique.insert((l.clone(), p));
            }
        }
    }
    unique
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Conflict {
    pub state: StateId,
    pub actions: Vec<String>,
}

/// Two distinct shift triggers can never fire in the same configuration if
/// they share a parameter at a position where the label admits at most one
/// incident edge per node.
fn exclusive(cfa: &Cfa, a: &Trigger, b: &Trigger) -> bool {
    a.label == b.label
        && a.positions
            .iter()
            .zip(&b.positions)
            .enumerate()
            .any(|(p, (x, y))| {
                matches!((x, y), (TriggerPosition::Param(i), TriggerPosition::Param(j)) if i == j)
                    && cfa.unique_incidence.contains(&(a.label.clone(), p + 1))
            })
}

/// States offering more than one action: shift/shift on triggers that can
/// fire together, shift/reduce, or reduce/reduce. Accepting is not counted.
pub fn conflicts(cfa: &Cfa) -> Vec<Conflict> {
    let mut out = Vec::new();
    for s in &cfa.states {
        let reduces: Vec<&ReduceLabel> = cfa.regular_reduces(s.id).collect();
        let mut actions = Vec::new();
        for (i, &a) in s.shifts.iter().enumerate() {
            for &b in &s.shifts[i + 1..] {
                let (ta, tb) = (&cfa.transitions[a].trigger, &cfa.transitions[b].trigger);
                if !exclusive(cfa, ta, tb) {
                    actions.push(format!(
                        "shift/shift {} | {}",
                        fmt_trigger(ta),
                        fmt_trigger(tb)
                    ));
                }
            }
            for r in &reduces {
                actions.push(format!(
                    "shift/reduce {} | {}",
                    fmt_trigger(&cfa.transitions[a].trigger),
                    fmt_reduce(cfa, r)
                ));
            }
        }
        for (i, a) in reduces.iter().enumerate() {
            for b in &reduces[i + 1..] {
                actions.push(format!(
                    "reduce/reduce {} | {}",
                    fmt_reduce(cfa, a),
                    fmt_reduce(cfa, b)
                ));
            }
        }
        if !actions.is_empty() {
            out.push(Conflict {
                state: s.id,
                actions,
            });
        }
    }
    out
}

pub fn param_name(i: usize) -> String {
    if i < 26 {
        ((b'a' + i as u8) as char).to_string()
    } else {
        format!("p{i}")
    }
}

pub fn fresh_name(i: usize) -> String {
    const NAMES: [&str; 6] = ["x", "y", "z", "u", "v", "w"];
    match NAMES.get(i) {
        Some(n) => format!("_{n}"),
        None => format!("_{i}"),
    }
}

pub fn seen_name(i: usize) -> String {
    format!("~{}", &fresh_name(i)[1..])
}

fn fmt_position(p: &TriggerPosition) -> String {
    match *p {
        TriggerPosition::Param(i) => param_name(i),
        TriggerPosition::Fresh(i) => fresh_name(i),
        TriggerPosition::Seen(i) => seen_name(i),
    }
}

pub fn fmt_trigger(t: &Trigger) -> String {
    let ps: Vec<String> = t.positions.iter().map(fmt_position).collect();
    format!("{}({})", t.label.name(), ps.join(","))
}

fn fmt_reduce(cfa: &Cfa, r: &ReduceLabel) -> String {
    let lhs = &cfa.grammar.rule(r.rule).lhs;
    let ps: Vec<String> = r.lhs.iter().map(|&p| param_name(p)).collect();
    format!("r{}: {}({})", r.rule, lhs.label.name(), ps.join(","))
}

fn fmt_state(cfa: &Cfa, id: StateId, args: &[String]) -> String {
    let _ = cfa;
    format!("q{id}({})", args.join(","))
}

fn fmt_item(cfa: &Cfa, it: &Item) -> String {
    let rule = cfa.grammar.rule(it.rule);
    let node = |n: crate::hypergraph::NodeId| match it.binding[n.0 as usize] {
        Slot::Param(p) => param_name(p),
        Slot::Seen => "~".to_string(),
        Slot::Unknown => "_".to_string(),
    };
    let lit = |l: &crate::hypergraph::Literal| {
        let ns: Vec<String> = l.attachment.iter().map(|&n| node(n)).collect();
        format!("{}({})", l.label.name(), ns.join(","))
    };
    let mut s = format!("r{}: {} ->", it.rule, lit(&rule.lhs));
    for (i, l) in rule.rhs.literals().iter().enumerate() {
        if i == it.dot {
            s.push_str(" .");
        }
        s.push(' ');
        s.push_str(&lit(l));
    }
    if it.dot == rule.rhs.len() {
        s.push_str(" .");
    }
    s
}

/// Deterministic text listing of states, kernel items, reduce labels and
/// transitions.
pub fn dump_cfa(cfa: &Cfa) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "# {} states, {} transitions, initial q{}",
        cfa.states.len(),
        cfa.transitions.len(),
        cfa.initial
    );
    let mut order: Vec<StateId> = vec![cfa.initial];
    order.extend((0..cfa.states.len()).filter(|&i| i != cfa.initial));
    for id in order {
        let st = &cfa.states[id];
        let params: Vec<String> = (0..st.param_count).map(param_name).collect();
        let _ = write!(s, "state {}", fmt_state(cfa, id, &params));
        for r in &st.reduces {
            let _ = write!(s, " [{}]", fmt_reduce(cfa, r));
        }
        s.push('\n');
        for it in &st.kernel {
            let _ = writeln!(s, "  # {}", fmt_item(cfa, it));
        }
        for &t in st.gotos.iter().chain(&st.shifts) {
            let tr = &cfa.transitions[t];
            let args: Vec<String> = tr.target_binding.iter().map(fmt_position).collect();
            let _ = writeln!(
                s,
                "  {} / {}",
                fmt_trigger(&tr.trigger),
                fmt_state(cfa, tr.target, &args)
            );
        }
    }
    s
}

/// Graphviz rendering of the automaton.
pub fn cfa_to_dot(cfa: &Cfa) -> String {
    let mut s = String::from("digraph cfa {\n  rankdir=LR;\n  node [shape=box];\n");
    for st in &cfa.states {
        let params: Vec<String> = (0..st.param_count).map(param_name).collect();
        let mut label = fmt_state(cfa, st.id, &params);
        for r in &st.reduces {
            label.push_str(&format!("\\n{}", fmt_reduce(cfa, r)));
        }
        let style = if st.reduces.is_empty() { "" } else { ", penwidth=3" };
        let _ = writeln!(s, "  q{} [label=\"{}\"{}];", st.id, label, style);
    }
    for tr in &cfa.transitions {
        let args: Vec<String> = tr.target_binding.iter().map(fmt_position).collect();
        let _ = writeln!(
            s,
            "  q{} -> q{} [label=\"{} / q{}({})\"];",
            tr.source,
            tr.target,
            fmt_trigger(&tr.trigger),
            tr.target,
            args.join(",")
        );
    }
    s.push_str("}\n");
    s
}

impl fmt::Display for Cfa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&dump_cfa(self))
    }
}

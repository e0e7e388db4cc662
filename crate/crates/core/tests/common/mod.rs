#![allow(dead_code)]

use std::collections::BTreeSet;

use hrgpsr::grammar::derive_random;
use hrgpsr::{Grammar, Hypergraph, NodeId};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const WORKED_EXAMPLE: &str = "t(1,2,3) t(2,4,5) t(3,6,7) t(4,8,9) t(5,9,10) t(6,10,11) t(7,11,12)";

pub fn worked_example() -> Hypergraph {
    Hypergraph::parse(WORKED_EXAMPLE).unwrap()
}

pub fn grammars() -> Vec<(&'static str, Grammar)> {
    hrgpsr::bundled::NAMES
        .iter()
        .map(|&n| (n, hrgpsr::bundled::by_name(n).unwrap()))
        .collect()
}

pub fn shuffled(g: &Hypergraph, rng: &mut ChaCha8Rng) -> Hypergraph {
    let mut perm: Vec<usize> = (0..g.len()).collect();
    perm.shuffle(rng);
    g.permute(&perm).unwrap()
}

/// Random literals over the terminal alphabet with a small node pool, so
/// that shared nodes are common.
pub fn random_graph(grammar: &Grammar, rng: &mut ChaCha8Rng, max_edges: usize) -> Hypergraph {
    let labels: Vec<_> = grammar.terminals().cloned().collect();
    let edges = rng.gen_range(1..=max_edges);
    let max_arity = labels.iter().map(|l| l.arity()).max().unwrap_or(1);
    let pool = rng.gen_range(max_arity.max(1)..=edges + 2);
    let nodes: Vec<NodeId> = (0..pool as u32).map(NodeId).collect();
    let lits: Vec<_> = (0..edges)
        .map(|_| {
            let l = labels.choose(rng).unwrap().clone();
            let att: Vec<NodeId> = nodes.choose_multiple(rng, l.arity()).copied().collect();
            (l, att)
        })
        .collect();
    Hypergraph::new(lits, &BTreeSet::new()).unwrap()
}

/// A member of the language with at most `budget` edges, literals shuffled.
pub fn corpus_graph(grammar: &Grammar, seed: u64, budget: usize) -> Hypergraph {
    let g = derive_random(grammar, seed, budget).expect("budget large enough");
    let mut rng = <ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed ^ 0x5eed);
    shuffled(&g, &mut rng)
}

/// Either a language member or one with a single edge removed or relabeled.
pub fn near_miss(grammar: &Grammar, seed: u64, budget: usize) -> Hypergraph {
    let g = corpus_graph(grammar, seed, budget);
    let mut rng = <ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
    let lits = g.literals();
    match rng.gen_range(0..3) {
        0 => g,
        1 if lits.len() > 1 => {
            let drop = rng.gen_range(0..lits.len());
            let rest = lits
                .iter()
                .filter(|l| l.edge_id != drop)
                .map(|l| (l.label.clone(), l.attachment.clone()));
            Hypergraph::new(rest, &BTreeSet::new()).unwrap()
        }
        _ => {
            let mut rest: Vec<_> = lits
                .iter()
                .map(|l| (l.label.clone(), l.attachment.clone()))
                .collect();
            let i = rng.gen_range(0..rest.len());
            rest[i].1.reverse();
            Hypergraph::new(rest, &BTreeSet::new()).unwrap()
        }
    }
}

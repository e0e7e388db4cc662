mod common;

use std::time::Duration;

use hrgpsr::bench::{gen_flowchart, gen_sierpinski, gen_sp, write_csv, run_bench, BenchConfig, Engine, Family};
use hrgpsr::cyk::cyk_parse;
use hrgpsr::engine::{Outcome, ParseConfig, ParseSession, Strategy};
use hrgpsr::{build_cfa, parse};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;

fn all_configs() -> Vec<ParseConfig> {
    let mut v = Vec::new();
    for s in [Strategy::DepthFirst, Strategy::BreadthFirst, Strategy::Priority] {
        for memo in [false, true] {
            v.push(ParseConfig::new(s, memo));
        }
    }
    v
}

#[test]
fn every_configuration_agrees_with_cyk_on_near_misses() {
    for (name, grammar) in grammars() {
        let cfa = build_cfa(&grammar).unwrap();
        let mut accepted = 0;
        for seed in 0..60 {
            let g = near_miss(&grammar, seed, 12);
            let expected = cyk_parse(&grammar, &g).accepted();
            accepted += expected as usize;
            for cfg in all_configs() {
                assert_eq!(
                    parse(&cfa, &g, &cfg).accepted(),
                    expected,
                    "{name} seed {seed} {:?} memo={} on {}",
                    cfg.strategy,
                    cfg.memo,
                    g.to_text()
                );
            }
        }
        assert!(accepted > 10 && accepted < 60, "{name}: {accepted} accepted");
    }
}

#[test]
fn acceptance_is_invariant_under_literal_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (_, grammar) in grammars() {
        let cfa = build_cfa(&grammar).unwrap();
        for seed in 0..15 {
            let g = near_miss(&grammar, seed, 10);
            let base = parse(&cfa, &g, &ParseConfig::default()).accepted();
            for _ in 0..5 {
                let p = shuffled(&g, &mut rng);
                assert_eq!(parse(&cfa, &p, &ParseConfig::default()).accepted(), base);
                assert_eq!(parse(&cfa, &p, &ParseConfig::new(Strategy::DepthFirst, true)).accepted(), base);
            }
        }
    }
}

#[test]
fn parses_are_deterministic() {
    for (_, grammar) in grammars() {
        let cfa = build_cfa(&grammar).unwrap();
        for seed in 0..10 {
            let g = corpus_graph(&grammar, seed, 12);
            for cfg in all_configs() {
                let a = parse(&cfa, &g, &cfg);
                let b = parse(&cfa, &g, &cfg);
                assert_eq!((a.steps, a.gss_nodes, a.memo_pairs), (b.steps, b.gss_nodes, b.memo_pairs));
            }
        }
    }
}

#[test]
fn memo_never_needs_more_steps_on_the_worked_example_orders() {
    let cfa = build_cfa(&hrgpsr::bundled::sierpinski()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..30 {
        let g = shuffled(&worked_example(), &mut rng);
        let plain = parse(&cfa, &g, &ParseConfig::new(Strategy::DepthFirst, false));
        let memo = parse(&cfa, &g, &ParseConfig::new(Strategy::DepthFirst, true));
        assert!(plain.accepted() && memo.accepted());
        assert!(memo.steps <= plain.steps, "{} > {}", memo.steps, plain.steps);
    }
}

#[test]
fn worked_example_memo_store() {
    let cfa = build_cfa(&hrgpsr::bundled::sierpinski()).unwrap();
    let mut s = ParseSession::new(&cfa, &worked_example(), ParseConfig::new(Strategy::DepthFirst, true)).unwrap();
    assert!(s.run().accepted());
    let memo = s.dump_memo();
    for line in ["D(1,2,3) <- {0}", "D(3,10,12) <- {2,5,6}", "D(2,8,10) <- {1,3,4}", "Z() <- {0,1,2,3,4,5,6}"] {
        assert!(memo.contains(&line.to_string()), "{line} missing from {memo:?}");
    }
}

#[test]
fn limits_are_reported_distinctly() {
    let cfa = build_cfa(&hrgpsr::bundled::series_parallel()).unwrap();
    let g = gen_sp(30);
    let mut cfg = ParseConfig::default();
    cfg.max_steps = 5;
    assert_eq!(parse(&cfa, &g, &cfg).outcome, Outcome::StepLimit);
    cfg.max_steps = u64::MAX;
    cfg.timeout = Some(Duration::ZERO);
    assert_eq!(parse(&cfa, &g, &cfg).outcome, Outcome::Timeout);
}

#[test]
fn generated_instances_are_accepted_by_every_engine() {
    for (family, sizes) in [
        (Family::Sierpinski, 0..=12),
        (Family::SeriesParallel, 1..=4),
        (Family::Flowchart, 0..=8),
    ] {
        let grammar = family.grammar();
        let cfa = build_cfa(&grammar).unwrap();
        for n in sizes {
            let g = family.generate(n);
            assert!(cyk_parse(&grammar, &g).accepted(), "cyk {family} {n}");
            for cfg in all_configs() {
                assert!(parse(&cfa, &g, &cfg).accepted(), "{family} {n} {:?} memo={}", cfg.strategy, cfg.memo);
            }
        }
    }
    assert_eq!(gen_sierpinski(12).len(), 25);
    assert_eq!(gen_flowchart(12).len(), 51);
}

#[test]
fn csv_without_timings_is_byte_stable() {
    let config = BenchConfig {
        reps: 1,
        timeout: Duration::from_secs(30),
        ..BenchConfig::default()
    };
    let run = || {
        let rows = run_bench(&Family::ALL, &[1, 3], &Engine::ALL, &config);
        assert!(rows.iter().all(|r| r.accepted()));
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf, false).unwrap();
        String::from_utf8(buf).unwrap()
    };
    let a = run();
    assert_eq!(a, run());
    assert_eq!(a.lines().count(), 1 + 3 * 2 * Engine::ALL.len());
}

#[test]
fn priority_strategy_is_competitive_on_flowcharts() {
    let cfa = build_cfa(&hrgpsr::bundled::flowchart()).unwrap();
    let g = gen_flowchart(20);
    let prio = parse(&cfa, &g, &ParseConfig::new(Strategy::Priority, false));
    let memo = parse(&cfa, &g, &ParseConfig::new(Strategy::DepthFirst, true));
    assert!(prio.accepted() && memo.accepted());
    assert!(prio.steps <= memo.steps * 2, "prio {} vs memo {}", prio.steps, memo.steps);
}

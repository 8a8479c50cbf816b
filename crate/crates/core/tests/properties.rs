//! Randomised properties over the corpus and generated nets.

mod common;

use std::collections::HashSet;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{fixture, random_binary_text, Closure};
use mlcp::dominance::{
    dominates_in, dominates_rep_exhaustive, MoreOrLessNet, RepMap, SearchOptions,
};
use mlcp::generate::{random_ml_net, random_outcome, GenSpec};
use mlcp::oracle::{induced_graph, is_improving_flip, is_improving_sequence, oracle_dominates, ranking_satisfies, DEFAULT_CAP};
use mlcp::{check_more_or_less, dominates_naive, parse_cpnet, serialize_cpnet, validate_structure, CpNet, Outcome};

const CORPUS: [&str; 6] = ["fig1", "fig2", "fig3", "fig4", "fig6a", "fig6b"];

fn spec() -> impl Strategy<Value = GenSpec> {
    (1usize..=4, 2usize..=6, 0usize..=2, any::<u64>()).prop_map(|(n, d, p, seed)| GenSpec {
        n_vars: n,
        max_domain: d,
        max_parents: p.min(n - 1),
        seed,
    })
}

fn net_strategy() -> impl Strategy<Value = CpNet> {
    spec().prop_map(|s| random_ml_net(s).unwrap())
}

fn pruning_variants() -> Vec<SearchOptions> {
    (0..8u8)
        .map(|bits| SearchOptions {
            suffix_fixing: bits & 1 != 0,
            forward_pruning: bits & 2 != 0,
            least_variable_flipping: bits & 4 != 0,
            ..SearchOptions::default()
        })
        .collect()
}

#[test]
fn every_assignment_matches_exactly_one_row() {
    let mut nets: Vec<CpNet> = CORPUS.iter().map(|n| fixture(n)).collect();
    nets.extend((0..20).map(|s| random_ml_net(GenSpec::new(4, 8, 2, s).unwrap()).unwrap()));
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for net in &nets {
        for _ in 0..1000 {
            let o = random_outcome(net, &mut rng);
            for x in net.var_ids() {
                net.lookup_ranking(x, &o).unwrap();
            }
        }
    }
}

#[test]
fn corpus_round_trips_and_keeps_its_verdicts() {
    for name in CORPUS {
        let net = fixture(name);
        let text = serialize_cpnet(&net);
        let again = parse_cpnet(&text).unwrap();
        assert_eq!(again, net, "{name}");
        assert_eq!(serialize_cpnet(&again), text, "{name}");
        assert_eq!(
            check_more_or_less(&again).is_more_or_less,
            name != "fig6a",
            "{name}"
        );
    }
    // The 1000-value range stays a range.
    let text = serialize_cpnet(&fixture("fig2"));
    assert!(text.contains("VAR Price : 1..1000"));
    assert!(text.len() < 2000);
}

/// Consistent rankings are the linear extensions of the flip graph: every
/// ceteris paribus improvement is ranked above what it improves. Checks that
/// reachability is exactly "ranked above in every consistent ranking".
#[test]
fn dominance_is_agreement_of_all_consistent_rankings() {
    let mut nets = vec![];
    for seed in 0..40u64 {
        let net = random_ml_net(GenSpec::new(2 + seed as usize % 2, 3, 1, seed).unwrap()).unwrap();
        if net.outcome_count() <= 8 {
            nets.push(net);
        }
    }
    nets.extend((0..10).map(|s| parse_cpnet(&random_binary_text(s, 3, 2)).unwrap()));
    assert!(nets.len() >= 20);
    for net in &nets {
        let closure = Closure::new(net);
        let n = closure.len();
        let mut above = vec![vec![true; n]; n];
        let mut perm: Vec<usize> = (0..n).collect();
        let mut consistent = 0;
        permutations(&mut perm, 0, &mut |ranking| {
            let mut pos = vec![0; n];
            for (i, &o) in ranking.iter().enumerate() {
                pos[o] = i;
            }
            let ok = (0..n).all(|o| closure.successors[o].iter().all(|&p| pos[p] < pos[o]));
            if ok {
                consistent += 1;
                for a in 0..n {
                    for b in 0..n {
                        above[a][b] &= pos[a] < pos[b];
                    }
                }
            }
        });
        assert!(consistent > 0);
        let reach = closure.matrix();
        for better in 0..n {
            for worse in 0..n {
                assert_eq!(above[better][worse], reach[worse][better], "{}", net.name());
            }
        }
        // The library agrees that each of its own topological sorts is consistent.
        let graph = induced_graph(net, DEFAULT_CAP).unwrap();
        let sorted: Vec<Outcome> = graph.topological_sort().unwrap().into_iter().rev().cloned().collect();
        assert!(ranking_satisfies(net, &sorted, DEFAULT_CAP).unwrap());
    }
}

fn permutations(items: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, visit);
        items.swap(k, i);
    }
}

/// For up to a dozen outcomes, random linear extensions of the flip graph
/// never put a dominated outcome above its dominator.
#[test]
fn random_consistent_rankings_respect_dominance() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for seed in 0..30u64 {
        let net = random_ml_net(GenSpec::new(2 + seed as usize % 2, 4, 1, 100 + seed).unwrap()).unwrap();
        if net.outcome_count() > 12 {
            continue;
        }
        let closure = Closure::new(&net);
        let reach = closure.matrix();
        let n = closure.len();
        for _ in 0..50 {
            // Random topological sort, best first: repeatedly pick any outcome
            // with no unplaced improvement.
            let mut placed = vec![false; n];
            let mut ranking = Vec::with_capacity(n);
            while ranking.len() < n {
                let ready: Vec<usize> = (0..n)
                    .filter(|&o| !placed[o] && closure.successors[o].iter().all(|&p| placed[p]))
                    .collect();
                let &o = ready.choose(&mut rng).unwrap();
                placed[o] = true;
                ranking.push(o);
            }
            let outcomes: Vec<Outcome> = ranking.iter().map(|&i| closure.outcome(&net, i)).collect();
            assert!(ranking_satisfies(&net, &outcomes, DEFAULT_CAP).unwrap());
            for i in 0..n {
                for j in i + 1..n {
                    assert!(!reach[ranking[i]][ranking[j]]);
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_nets_are_valid_more_or_less_and_round_trip(spec in spec()) {
        let net = random_ml_net(spec).unwrap();
        prop_assert!(validate_structure(&net).is_valid());
        prop_assert!(check_more_or_less(&net).is_more_or_less);
        prop_assert!(net.variables().iter().all(|v| v.parents.len() <= spec.max_parents));
        prop_assert!(net.variables().iter().all(|v| v.domain.len() <= spec.max_domain));
        let text = serialize_cpnet(&net);
        let again = parse_cpnet(&text).unwrap();
        prop_assert_eq!(&again, &net);
        prop_assert_eq!(serialize_cpnet(&again), text);
        prop_assert_eq!(serialize_cpnet(&random_ml_net(spec).unwrap()), serialize_cpnet(&net));
    }

    #[test]
    fn parents_precede_children_in_topological_order(net in net_strategy()) {
        let order = net.topological_order();
        let pos: Vec<usize> = {
            let mut pos = vec![0; net.len()];
            for (i, x) in order.iter().enumerate() {
                pos[x.0] = i;
            }
            pos
        };
        prop_assert_eq!(order.len(), net.len());
        for x in net.var_ids() {
            for p in &net.var(x).parents {
                prop_assert!(pos[p.0] < pos[x.0]);
            }
        }
    }

    /// Moving a variable within its category never changes a child's ranking.
    #[test]
    fn children_cannot_see_within_category_moves(net in net_strategy(), seed in any::<u64>()) {
        let ml = MoreOrLessNet::new(&net).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..20 {
            let o = random_outcome(&net, &mut rng);
            for x in net.var_ids() {
                let cat = ml.category(x, o.get(x));
                for v in 0..net.var(x).domain.len() as u32 {
                    if ml.category(x, v) != cat {
                        continue;
                    }
                    let moved = o.with(x, v);
                    for &c in net.children(x) {
                        prop_assert!(net.lookup_ranking(c, &o).unwrap().same_order(net.lookup_ranking(c, &moved).unwrap()));
                    }
                }
            }
        }
    }

    #[test]
    fn binary_nets_are_more_or_less(seed in any::<u64>(), n in 1usize..=7) {
        let net = parse_cpnet(&random_binary_text(seed, n, 3)).unwrap();
        prop_assert!(check_more_or_less(&net).is_more_or_less);
    }

    #[test]
    fn flip_graph_is_a_strict_order(net in net_strategy()) {
        prop_assume!(net.outcome_count() <= 400);
        let graph = induced_graph(&net, DEFAULT_CAP).unwrap();
        prop_assert_eq!(graph.node_count() as u128, net.outcome_count());
        prop_assert!(graph.is_acyclic());
        let closure = Closure::new(&net);
        let mut edges = 0;
        for (i, from) in closure.all(&net).iter().enumerate() {
            let succ: HashSet<usize> = closure.successors[i].iter().copied().collect();
            for to in graph.successors(from) {
                prop_assert!(succ.contains(&closure.position(to)));
                prop_assert!(is_improving_flip(&net, from, to).unwrap());
                edges += 1;
            }
            prop_assert!(!oracle_dominates(&net, from, from, DEFAULT_CAP).unwrap());
        }
        prop_assert_eq!(edges, graph.edge_count());
        prop_assert_eq!(edges, closure.successors.iter().map(Vec::len).sum::<usize>());
        // Transitivity of reachability.
        let reach = closure.matrix();
        for a in 0..reach.len() {
            for b in 0..reach.len() {
                if reach[a][b] {
                    for (via_b, via_a) in reach[b].iter().zip(&reach[a]) {
                        prop_assert!(!via_b || *via_a);
                    }
                }
            }
        }
    }

    /// Each pruning rule, alone or combined, keeps the search exact; witnesses
    /// are valid and land on representatives; the restricted search never
    /// expands more nodes than the naive one.
    #[test]
    fn search_matches_the_oracle_under_every_rule_set(net in net_strategy(), seed in any::<u64>()) {
        prop_assume!(net.outcome_count() <= 1500);
        let ml = MoreOrLessNet::new(&net).unwrap();
        let closure = Closure::new(&net);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..25 {
            let worse = random_outcome(&net, &mut rng);
            let better = if rand::Rng::gen_bool(&mut rng, 0.5) {
                random_outcome(&net, &mut rng)
            } else {
                mlcp::bench::random_walk(&net, &worse, 2 * net.len(), &mut rng).unwrap()
            };
            let expected = better != worse && closure.reachable_from(closure.position(&worse))[closure.position(&better)];
            let naive = dominates_naive(&net, &better, &worse, 1_000_000).unwrap();
            prop_assert_eq!(naive.entailed, expected);
            for opts in pruning_variants() {
                let r = dominates_in(&ml, &better, &worse, &opts).unwrap();
                prop_assert_eq!(r.entailed, expected, "{:?}", opts);
                prop_assert_eq!(r.witness.is_some(), r.entailed);
                if let Some(w) = &r.witness {
                    prop_assert!(is_improving_sequence(&net, w).unwrap());
                    prop_assert_eq!(w.first(), Some(&worse));
                    prop_assert_eq!(w.last(), Some(&better));
                    prop_assert_eq!(r.stats.witness_length, w.len() - 1);
                    let reps: &RepMap = r.reps.as_ref().unwrap();
                    for step in w.windows(2) {
                        for x in step[0].diff(&step[1]) {
                            prop_assert!(reps.get(x).contains(step[1].get(x)));
                        }
                    }
                }
                if opts == SearchOptions::default() {
                    prop_assert!(r.stats.nodes_expanded <= naive.stats.nodes_expanded);
                }
            }
            let all = dominates_rep_exhaustive(&ml, &better, &worse, &SearchOptions::default()).unwrap();
            prop_assert_eq!(all.entailed, expected);
        }
    }

    #[test]
    fn nothing_dominates_itself(net in net_strategy(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let o = random_outcome(&net, &mut rng);
        let ml = MoreOrLessNet::new(&net).unwrap();
        prop_assert!(!dominates_in(&ml, &o, &o, &SearchOptions::default()).unwrap().entailed);
        prop_assert!(!dominates_naive(&net, &o, &o, 10).unwrap().entailed);
    }
}

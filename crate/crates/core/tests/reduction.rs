//! Skip-flipping reduction under every admissible representative map.

mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{fixture, random_nets};
use mlcp::bench::random_walk;
use mlcp::dominance::{is_skip_flipping, reduce_to_skip_with, representative_candidates, MoreOrLessNet, RepMap};
use mlcp::generate::random_outcome;
use mlcp::oracle::{is_improving_sequence, oracle_path, DEFAULT_CAP};
use mlcp::Error;

#[test]
fn reduction_works_for_every_representative_choice() {
    let mut nets = vec![fixture("fig4"), fixture("fig6b"), fixture("fig3")];
    nets.extend(random_nets(30, 12, 4, 6, 2));
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut checked = 0;
    for net in &nets {
        let ml = MoreOrLessNet::new(net).unwrap();
        for _ in 0..5 {
            let worse = random_outcome(net, &mut rng);
            let steps = rng.gen_range(1..=3 * net.len());
            let better = random_walk(net, &worse, steps, &mut rng).unwrap();
            let Some(seq) = oracle_path(net, &better, &worse, DEFAULT_CAP).unwrap() else {
                continue;
            };
            let candidates: Vec<_> = net
                .var_ids()
                .map(|x| representative_candidates(&ml, x, &worse, &better))
                .collect();
            // Vary one variable's choice at a time around the first candidate.
            let base: Vec<_> = candidates.iter().map(|c| c[0]).collect();
            for (i, options) in candidates.iter().enumerate() {
                for &choice in options {
                    let mut sets = base.clone();
                    sets[i] = choice;
                    let reps = RepMap::new(sets);
                    let out = reduce_to_skip_with(&ml, &seq, &reps).unwrap();
                    assert!(is_improving_sequence(net, &out).unwrap());
                    assert!(is_skip_flipping(&ml, &out, &reps).unwrap());
                    assert_eq!((out.first(), out.last()), (Some(&worse), Some(&better)));
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 200, "{checked}");
}

#[test]
fn reduction_rejects_bad_input() {
    let net = fixture("fig4");
    let ml = MoreOrLessNet::new(&net).unwrap();
    let o = |s: &str| common::xy(&net, s);
    let not_improving = vec![o("1a"), o("5b")];
    assert!(matches!(
        mlcp::dominance::reduce_to_skip(&ml, &not_improving),
        Err(Error::NotImproving(_))
    ));
    let reducible = vec![o("1a"), o("2a"), o("3a")];
    assert!(matches!(
        mlcp::dominance::reduce_to_skip(&ml, &reducible),
        Err(Error::NotIrreducible(_))
    ));
    assert!(matches!(mlcp::dominance::reduce_to_skip(&ml, &[]), Err(Error::Precondition(_))));
}

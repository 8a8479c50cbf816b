//! Helpers shared by the integration tests, including a brute-force
//! reachability oracle written independently of the library's.

#![allow(dead_code)]

use std::collections::{HashMap, VecDeque};

use mlcp::generate::{random_ml_net, GenSpec};
use mlcp::{parse_cpnet, Condition, CpNet, Outcome, Ranking, Value};

pub fn fixture(name: &str) -> CpNet {
    parse_cpnet(mlcp::fixtures::fixture(name).expect("known fixture")).expect("fixture parses")
}

/// Outcome of fig4 written as e.g. `5b`.
pub fn xy(net: &CpNet, s: &str) -> Outcome {
    let (x, y) = s.split_at(1);
    net.parse_outcome(&format!("X={x},Y={y}")).unwrap()
}

pub fn xys(net: &CpNet, items: &[&str]) -> Vec<Outcome> {
    items.iter().map(|s| xy(net, s)).collect()
}

fn condition_holds(c: &Condition, v: Value) -> bool {
    match c {
        Condition::Eq(a) => *a == v,
        Condition::Range(lo, hi) => (*lo..=*hi).contains(&v),
        Condition::Set(vs) => vs.contains(&v),
    }
}

/// The ranking of `x` in outcome `values`, found by scanning rows directly.
fn ranking<'a>(net: &'a CpNet, x: usize, values: &[Value]) -> &'a Ranking {
    let var = &net.variables()[x];
    let mut hits = net.cpts()[x].rows.iter().filter(|row| {
        row.conditions
            .iter()
            .zip(&var.parents)
            .all(|(c, p)| condition_holds(c, values[p.0]))
    });
    let row = hits.next().expect("some row matches");
    assert!(hits.next().is_none(), "rows overlap");
    &row.ranking
}

/// Brute-force improving-flip graph over every outcome.
pub struct Closure {
    pub outcomes: Vec<Vec<Value>>,
    index: HashMap<Vec<Value>, usize>,
    pub successors: Vec<Vec<usize>>,
}

impl Closure {
    pub fn new(net: &CpNet) -> Closure {
        let sizes: Vec<usize> = net.variables().iter().map(|v| v.domain.len()).collect();
        let mut outcomes = vec![Vec::new()];
        for &k in &sizes {
            outcomes = outcomes
                .into_iter()
                .flat_map(|o: Vec<Value>| {
                    (0..k as Value).map(move |v| {
                        let mut next = o.clone();
                        next.push(v);
                        next
                    })
                })
                .collect();
        }
        let index: HashMap<Vec<Value>, usize> = outcomes.iter().cloned().zip(0..).collect();
        let successors: Vec<Vec<usize>> = outcomes
            .iter()
            .map(|o| {
                let mut succ = Vec::new();
                for x in 0..sizes.len() {
                    // rank[v] = position of v, 0 most preferred.
                    let mut rank = vec![0usize; sizes[x]];
                    for (pos, v) in ranking(net, x, o).resolved().into_iter().enumerate() {
                        rank[v as usize] = pos;
                    }
                    for v in 0..sizes[x] {
                        if rank[v] < rank[o[x] as usize] {
                            let mut p = o.clone();
                            p[x] = v as Value;
                            succ.push(index[&p]);
                        }
                    }
                }
                succ
            })
            .collect();
        Closure {
            outcomes,
            index,
            successors,
        }
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn position(&self, o: &Outcome) -> usize {
        self.index[o.values()]
    }

    /// `r[j]`: outcome j is reachable from `from` by at least one flip.
    pub fn reachable_from(&self, from: usize) -> Vec<bool> {
        let mut seen = vec![false; self.len()];
        let mut queue: VecDeque<usize> = self.successors[from].iter().copied().collect();
        while let Some(i) = queue.pop_front() {
            if !seen[i] {
                seen[i] = true;
                queue.extend(self.successors[i].iter().copied());
            }
        }
        seen
    }

    /// Reachability from every outcome.
    pub fn matrix(&self) -> Vec<Vec<bool>> {
        (0..self.len()).map(|i| self.reachable_from(i)).collect()
    }

    pub fn outcome(&self, net: &CpNet, i: usize) -> Outcome {
        net.outcome(self.outcomes[i].clone()).unwrap()
    }

    pub fn all(&self, net: &CpNet) -> Vec<Outcome> {
        (0..self.len()).map(|i| self.outcome(net, i)).collect()
    }
}

/// Seeded random more-or-less nets with 1..=max_vars variables.
pub fn random_nets(count: usize, seed: u64, max_vars: usize, max_domain: usize, max_parents: usize) -> Vec<CpNet> {
    (0..count as u64)
        .map(|i| {
            let n = 1 + (i as usize % max_vars);
            let spec = GenSpec::new(n, max_domain, max_parents.min(n - 1), seed.wrapping_mul(1000) + i).unwrap();
            random_ml_net(spec).unwrap()
        })
        .collect()
}

/// Text of a random binary CP-net: a random DAG with one CPT row per parent
/// assignment, each ranking chosen at random. Built without the library's
/// generator.
pub fn random_binary_text(seed: u64, n_vars: usize, max_parents: usize) -> String {
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut text = format!("NET binary{seed}\n");
    for i in 0..n_vars {
        text.push_str(&format!("VAR B{i} : t, f\n"));
    }
    for i in 0..n_vars {
        let mut earlier: Vec<usize> = (0..i).collect();
        earlier.shuffle(&mut rng);
        earlier.truncate(rng.gen_range(0..=max_parents.min(i)));
        earlier.sort_unstable();
        if earlier.is_empty() {
            let order = if rng.gen_bool(0.5) { "t > f" } else { "f > t" };
            text.push_str(&format!("CPT B{i}\n  : {order}\n"));
            continue;
        }
        let names: Vec<String> = earlier.iter().map(|p| format!("B{p}")).collect();
        text.push_str(&format!("CPT B{i} | {}\n", names.join(", ")));
        for mask in 0..(1u32 << earlier.len()) {
            let conds: Vec<String> = names
                .iter()
                .enumerate()
                .map(|(k, n)| format!("{n}={}", if mask >> k & 1 == 0 { "t" } else { "f" }))
                .collect();
            let order = if rng.gen_bool(0.5) { "t > f" } else { "f > t" };
            text.push_str(&format!("  {} : {order}\n", conds.join(" & ")));
        }
    }
    text
}

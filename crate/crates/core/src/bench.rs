//! Restricted versus unrestricted search on seeded random nets.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dominance::{dominates_in, dominates_naive, MoreOrLessNet, SearchOptions, DEFAULT_MAX_EXPANSIONS};
use crate::error::Error;
use crate::generate::{random_ml_net, random_outcome, GenSpec};
use crate::model::{CpNet, Outcome};
use crate::oracle::{improving_flips, oracle_dominates, DEFAULT_CAP};
use crate::parse::serialize_cpnet;

/// CSV header, in column order.
pub const CSV_COLUMNS: [&str; 6] = ["net", "better", "worse", "verdict", "restricted_nodes", "naive_nodes"];

/// Domain size from which a net counts as large for the reduction statistic.
pub const LARGE_DOMAIN: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BenchConfig {
    pub trials: usize,
    pub n_vars: usize,
    pub max_domain: usize,
    pub max_parents: usize,
    pub seed: u64,
    pub queries_per_trial: usize,
    /// Nets with at most this many outcomes are also checked against the oracle.
    pub oracle_cap: u64,
    pub max_expansions: u64,
}

impl BenchConfig {
    pub fn new(trials: usize, n_vars: usize, max_domain: usize, seed: u64) -> Self {
        BenchConfig {
            trials,
            n_vars,
            max_domain,
            max_parents: 2.min(n_vars.saturating_sub(1)),
            seed,
            queries_per_trial: 10,
            oracle_cap: DEFAULT_CAP,
            max_expansions: DEFAULT_MAX_EXPANSIONS,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BenchRecord {
    pub net: String,
    pub better: String,
    pub worse: String,
    pub entailed: bool,
    pub restricted_nodes: u64,
    pub naive_nodes: u64,
    pub agreement: bool,
    /// Some variable of the net has at least [`LARGE_DOMAIN`] values.
    pub large_domain: bool,
}

impl BenchRecord {
    /// Naive nodes per restricted node, counting an empty restricted search as one node.
    pub fn reduction(&self) -> f64 {
        self.naive_nodes as f64 / self.restricted_nodes.max(1) as f64
    }
}

/// A query on which the searches (or the oracle) disagree.
#[derive(Clone, Debug)]
pub struct Disagreement {
    pub net: CpNet,
    pub better: Outcome,
    pub worse: Outcome,
    pub restricted: bool,
    pub naive: bool,
    pub oracle: Option<bool>,
}

impl Disagreement {
    /// The net in `.mlcp` form, with the query in a leading comment.
    pub fn reproducer(&self) -> String {
        let oracle = self.oracle.map_or("-".to_string(), |v| v.to_string());
        format!(
            "# better: {}\n# worse: {}\n# restricted={} naive={} oracle={}\n{}",
            self.net.format_outcome(&self.better),
            self.net.format_outcome(&self.worse),
            self.restricted,
            self.naive,
            oracle,
            serialize_cpnet(&self.net)
        )
    }
}

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("verdicts disagree on net {}", .0.net.name())]
    Disagreement(Box<Disagreement>),
    #[error(transparent)]
    Failed(#[from] Error),
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct BenchReport {
    pub records: Vec<BenchRecord>,
}

impl BenchReport {
    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(CSV_COLUMNS)?;
        for r in &self.records {
            w.write_record([
                r.net.as_str(),
                r.better.as_str(),
                r.worse.as_str(),
                if r.entailed { "true" } else { "false" },
                &r.restricted_nodes.to_string(),
                &r.naive_nodes.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Queries where the restricted search expanded more nodes than the naive one.
    pub fn node_count_violations(&self) -> impl Iterator<Item = &BenchRecord> {
        self.records.iter().filter(|r| r.restricted_nodes > r.naive_nodes)
    }

    /// Median of [`BenchRecord::reduction`] over queries on large-domain nets.
    pub fn median_reduction(&self) -> Option<f64> {
        let mut ratios: Vec<f64> = self
            .records
            .iter()
            .filter(|r| r.large_domain)
            .map(BenchRecord::reduction)
            .collect();
        if ratios.is_empty() {
            return None;
        }
        ratios.sort_by(f64::total_cmp);
        let mid = ratios.len() / 2;
        Some(if ratios.len() % 2 == 1 {
            ratios[mid]
        } else {
            (ratios[mid - 1] + ratios[mid]) / 2.0
        })
    }

    pub fn summary(&self) -> String {
        let entailed = self.records.iter().filter(|r| r.entailed).count();
        let median = self
            .median_reduction()
            .map_or("-".to_string(), |m| format!("{m:.2}"));
        format!(
            "queries={} entailed={} node_count_violations={} median_reduction_large={}",
            self.records.len(),
            entailed,
            self.node_count_violations().count(),
            median
        )
    }
}

/// Runs the benchmark. Half the queries are uniform pairs; the other half end
/// at the end of a random improving walk, so entailed queries are common.
pub fn run_bench(cfg: &BenchConfig) -> Result<BenchReport, BenchError> {
    let mut seeds = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut report = BenchReport::default();
    for _ in 0..cfg.trials {
        let net_seed: u64 = seeds.gen();
        let spec = GenSpec::new(cfg.n_vars, cfg.max_domain, cfg.max_parents, net_seed)?;
        let net = random_ml_net(spec)?;
        let ml = MoreOrLessNet::new(&net)?;
        let large_domain = net.variables().iter().any(|v| v.domain.len() >= LARGE_DOMAIN);
        let use_oracle = net.outcome_count() <= cfg.oracle_cap as u128;
        let mut rng = ChaCha8Rng::seed_from_u64(net_seed);
        let opts = SearchOptions {
            max_expansions: cfg.max_expansions,
            ..SearchOptions::default()
        };
        for q in 0..cfg.queries_per_trial {
            let worse = random_outcome(&net, &mut rng);
            let better = if q % 2 == 0 {
                random_outcome(&net, &mut rng)
            } else {
                let steps = rng.gen_range(1..=2 * net.len());
                random_walk(&net, &worse, steps, &mut rng)?
            };
            let restricted = dominates_in(&ml, &better, &worse, &opts)?;
            let naive = dominates_naive(&net, &better, &worse, cfg.max_expansions)?;
            let oracle = if use_oracle {
                Some(oracle_dominates(&net, &better, &worse, cfg.oracle_cap)?)
            } else {
                None
            };
            let agreement = restricted.entailed == naive.entailed && oracle.is_none_or(|v| v == naive.entailed);
            if !agreement {
                return Err(BenchError::Disagreement(Box::new(Disagreement {
                    net,
                    better,
                    worse,
                    restricted: restricted.entailed,
                    naive: naive.entailed,
                    oracle,
                })));
            }
            report.records.push(BenchRecord {
                net: net.name().to_string(),
                better: net.format_outcome(&better),
                worse: net.format_outcome(&worse),
                entailed: restricted.entailed,
                restricted_nodes: restricted.stats.nodes_expanded,
                naive_nodes: naive.stats.nodes_expanded,
                agreement,
                large_domain,
            });
        }
    }
    Ok(report)
}

/// Up to `steps` random improving flips from `start`.
pub fn random_walk<R: Rng>(net: &CpNet, start: &Outcome, steps: usize, rng: &mut R) -> Result<Outcome, Error> {
    let mut cur = start.clone();
    for _ in 0..steps {
        let flips = improving_flips(net, &cur)?;
        if flips.is_empty() {
            break;
        }
        let (x, v) = flips[rng.gen_range(0..flips.len())];
        cur = cur.with(x, v);
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_bench_agrees_and_is_deterministic() {
        let cfg = BenchConfig::new(5, 3, 5, 11);
        let a = run_bench(&cfg).unwrap();
        let b = run_bench(&cfg).unwrap();
        assert_eq!(a.records.len(), 50);
        assert!(a.records.iter().all(|r| r.agreement));
        let (mut ca, mut cb) = (Vec::new(), Vec::new());
        a.write_csv(&mut ca).unwrap();
        b.write_csv(&mut cb).unwrap();
        assert_eq!(ca, cb);
        let text = String::from_utf8(ca).unwrap();
        assert!(text.starts_with("net,better,worse,verdict,restricted_nodes,naive_nodes\n"));
    }

    #[test]
    fn reproducer_parses_back() {
        let net = random_ml_net(GenSpec::new(3, 4, 2, 5).unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let d = Disagreement {
            better: random_outcome(&net, &mut rng),
            worse: random_outcome(&net, &mut rng),
            net: net.clone(),
            restricted: true,
            naive: false,
            oracle: None,
        };
        let text = d.reproducer();
        assert!(text.starts_with("# better: "));
        assert_eq!(crate::parse::parse_cpnet(&text).unwrap(), net);
    }
}

//! Brute-force semantics: the induced preference graph and everything that can
//! be read off it at desk scale. Dominance is reachability along improving
//! flips; a ranking satisfies the net iff it is a linear extension.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::model::{CpNet, Outcome, Value, VarId};

/// Default outcome budget for graph construction and reachability.
pub const DEFAULT_CAP: u64 = 100_000;

/// Every `(X, v)` such that setting X to `v` in `o` is an improving flip.
/// Variables in topological order, values most preferred first.
pub fn improving_flips(net: &CpNet, o: &Outcome) -> Result<Vec<(VarId, Value)>> {
    let mut flips = Vec::new();
    for &x in net.topological_order() {
        let ranking = net.lookup_ranking(x, o)?;
        flips.extend(ranking.improvements(o.get(x)).map(|v| (x, v)));
    }
    Ok(flips)
}

/// `to` differs from `from` in exactly one variable, and `to`'s value is
/// strictly preferred in `from`'s context.
pub fn is_improving_flip(net: &CpNet, from: &Outcome, to: &Outcome) -> Result<bool> {
    let diff = from.diff(to);
    let [x] = diff.as_slice() else {
        return Ok(false);
    };
    Ok(net.lookup_ranking(*x, from)?.prefers(to.get(*x), from.get(*x)))
}

#[derive(Clone, Debug)]
pub struct PreferenceGraph {
    nodes: Vec<Outcome>,
    index: HashMap<Outcome, usize>,
    /// `edges[i]` holds the outcomes one improving flip away from node `i`.
    edges: Vec<Vec<usize>>,
}

impl PreferenceGraph {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    pub fn nodes(&self) -> &[Outcome] {
        &self.nodes
    }

    pub fn successors(&self, o: &Outcome) -> impl Iterator<Item = &Outcome> {
        self.index
            .get(o)
            .map(|&i| self.edges[i].as_slice())
            .unwrap_or(&[])
            .iter()
            .map(|&j| &self.nodes[j])
    }

    pub fn has_edge(&self, from: &Outcome, to: &Outcome) -> bool {
        match (self.index.get(from), self.index.get(to)) {
            (Some(&i), Some(&j)) => self.edges[i].contains(&j),
            _ => false,
        }
    }

    /// Kahn's algorithm; `None` when the graph has a cycle.
    pub fn topological_sort(&self) -> Option<Vec<&Outcome>> {
        let n = self.nodes.len();
        let mut indegree = vec![0usize; n];
        for targets in &self.edges {
            for &j in targets {
                indegree[j] += 1;
            }
        }
        let mut queue: VecDeque<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(i) = queue.pop_front() {
            order.push(&self.nodes[i]);
            for &j in &self.edges[i] {
                indegree[j] -= 1;
                if indegree[j] == 0 {
                    queue.push_back(j);
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_sort().is_some()
    }

    /// Graphviz DOT; nodes are labelled with outcome literals.
    pub fn to_dot(&self, net: &CpNet) -> String {
        let mut out = format!("digraph \"{}\" {{\n", net.name());
        for (i, o) in self.nodes.iter().enumerate() {
            let _ = writeln!(out, "  n{i} [label=\"{}\"];", net.format_outcome(o));
        }
        for (i, targets) in self.edges.iter().enumerate() {
            for j in targets {
                let _ = writeln!(out, "  n{i} -> n{j};");
            }
        }
        out.push_str("}\n");
        out
    }
}

fn check_budget(net: &CpNet, cap: u64) -> Result<()> {
    let outcomes = net.outcome_count();
    if outcomes > cap as u128 {
        return Err(Error::BudgetExceeded { outcomes, cap });
    }
    Ok(())
}

pub fn induced_graph(net: &CpNet, cap: u64) -> Result<PreferenceGraph> {
    check_budget(net, cap)?;
    let nodes: Vec<Outcome> = net.outcomes().collect();
    let index: HashMap<Outcome, usize> =
        nodes.iter().cloned().enumerate().map(|(i, o)| (o, i)).collect();
    let mut edges = Vec::with_capacity(nodes.len());
    for o in &nodes {
        let targets = improving_flips(net, o)?
            .into_iter()
            .map(|(x, v)| index[&o.with(x, v)])
            .collect();
        edges.push(targets);
    }
    Ok(PreferenceGraph { nodes, index, edges })
}

/// Whether `better` is reachable from `worse` by improving flips. Expands
/// lazily, so only the reachable set counts against `cap`.
pub fn oracle_dominates(net: &CpNet, better: &Outcome, worse: &Outcome, cap: u64) -> Result<bool> {
    Ok(oracle_path(net, better, worse, cap)?.is_some())
}

/// A shortest improving flipping sequence from `worse` to `better`, if any.
/// Shortest sequences are irreducible.
pub fn oracle_path(
    net: &CpNet,
    better: &Outcome,
    worse: &Outcome,
    cap: u64,
) -> Result<Option<Vec<Outcome>>> {
    if better == worse {
        return Ok(None);
    }
    let mut parent: HashMap<Outcome, Option<Outcome>> = HashMap::new();
    parent.insert(worse.clone(), None);
    let mut queue = VecDeque::from([worse.clone()]);
    while let Some(o) = queue.pop_front() {
        for (x, v) in improving_flips(net, &o)? {
            let next = o.with(x, v);
            if parent.contains_key(&next) {
                continue;
            }
            parent.insert(next.clone(), Some(o.clone()));
            if &next == better {
                let mut path = vec![next];
                while let Some(Some(prev)) = parent.get(path.last().unwrap()) {
                    path.push(prev.clone());
                }
                path.reverse();
                return Ok(Some(path));
            }
            if parent.len() as u64 > cap {
                return Err(Error::BudgetExceeded {
                    outcomes: net.outcome_count(),
                    cap,
                });
            }
            queue.push_back(next);
        }
    }
    Ok(None)
}

/// Every consecutive pair is a single-variable strictly improving flip.
pub fn is_improving_sequence(net: &CpNet, seq: &[Outcome]) -> Result<bool> {
    for w in seq.windows(2) {
        if !is_improving_flip(net, &w[0], &w[1])? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// No contiguous interior block can be deleted while keeping an improving
/// sequence with the same endpoints. The prefix and suffix around a block are
/// already improving, so only the new junction needs checking.
pub fn is_irreducible(net: &CpNet, seq: &[Outcome]) -> Result<bool> {
    if !is_improving_sequence(net, seq)? {
        return Err(Error::NotImproving("irreducibility is defined on improving sequences".into()));
    }
    Ok(removable_block(net, seq)?.is_none())
}

/// The first `(i, j)` with `j > i + 1` such that `seq[i] -> seq[j]` is an
/// improving flip, i.e. `seq[i+1..j]` can be removed.
pub(crate) fn removable_block(net: &CpNet, seq: &[Outcome]) -> Result<Option<(usize, usize)>> {
    for i in 0..seq.len() {
        for j in i + 2..seq.len() {
            if is_improving_flip(net, &seq[i], &seq[j])? {
                return Ok(Some((i, j)));
            }
        }
    }
    Ok(None)
}

/// Whether `ranking` (most preferred first) is a linear extension of the
/// induced preference graph, i.e. a ranking consistent with the net.
pub fn ranking_satisfies(net: &CpNet, ranking: &[Outcome], cap: u64) -> Result<bool> {
    let graph = induced_graph(net, cap)?;
    if ranking.len() != graph.node_count() {
        return Ok(false);
    }
    let mut position: HashMap<&Outcome, usize> = HashMap::with_capacity(ranking.len());
    for (i, o) in ranking.iter().enumerate() {
        if !graph.index.contains_key(o) || position.insert(o, i).is_some() {
            return Ok(false);
        }
    }
    for (i, targets) in graph.edges.iter().enumerate() {
        let worse = position[&graph.nodes[i]];
        if targets.iter().any(|&j| position[&graph.nodes[j]] >= worse) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Outcomes reachable from `o` (including `o`) by improving flips.
pub fn reachable_set(net: &CpNet, o: &Outcome, cap: u64) -> Result<HashSet<Outcome>> {
    let mut seen = HashSet::from([o.clone()]);
    let mut stack = vec![o.clone()];
    while let Some(cur) = stack.pop() {
        for (x, v) in improving_flips(net, &cur)? {
            let next = cur.with(x, v);
            if seen.insert(next.clone()) {
                if seen.len() as u64 > cap {
                    return Err(Error::BudgetExceeded {
                        outcomes: net.outcome_count(),
                        cap,
                    });
                }
                stack.push(next);
            }
        }
    }
    Ok(seen)
}

//! Depth-first dominance search, restricted and unrestricted.

use std::collections::HashSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::model::{CpNet, Direction, IntervalSet, Outcome, VarId};
use crate::oracle::improving_flips;

use super::{flip_in_category, flip_out_category, representative_candidates, MoreOrLessNet, RepMap};

/// Default cap on node expansions per query.
pub const DEFAULT_MAX_EXPANSIONS: u64 = 1_000_000;

/// Cap on representative-map combinations tried by [`dominates_rep_exhaustive`].
pub const REP_COMBINATION_CAP: u64 = 10_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    pub suffix_fixing: bool,
    pub forward_pruning: bool,
    /// Only takes effect on nets where every variable has at most one parent.
    pub least_variable_flipping: bool,
    pub max_expansions: u64,
    /// Representative sets to search with; the default map when `None`.
    pub reps: Option<RepMap>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            suffix_fixing: true,
            forward_pruning: true,
            least_variable_flipping: true,
            max_expansions: DEFAULT_MAX_EXPANSIONS,
            reps: None,
        }
    }
}

impl SearchOptions {
    /// All pruning rules off.
    pub fn plain() -> Self {
        SearchOptions {
            suffix_fixing: false,
            forward_pruning: false,
            least_variable_flipping: false,
            ..SearchOptions::default()
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Distinct search nodes whose successors were generated.
    pub nodes_expanded: u64,
    /// Deepest node reached, with the start at depth 0.
    pub max_depth: usize,
    /// Flips in the witness, 0 when there is none.
    pub witness_length: usize,
}

impl SearchStats {
    pub fn render(&self) -> String {
        format!(
            "nodes={} depth={} len={}",
            self.nodes_expanded, self.max_depth, self.witness_length
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DominanceResult {
    pub entailed: bool,
    /// An improving flipping sequence from `worse` to `better`.
    pub witness: Option<Vec<Outcome>>,
    pub stats: SearchStats,
    /// The representative sets used, for restricted searches.
    pub reps: Option<RepMap>,
}

impl DominanceResult {
    fn not_entailed(stats: SearchStats, reps: Option<RepMap>) -> Self {
        DominanceResult {
            entailed: false,
            witness: None,
            stats,
            reps,
        }
    }

    /// Verdict line, then the witness one outcome per line, then the stats.
    pub fn render(&self, net: &CpNet) -> String {
        let mut out = String::from(if self.entailed { "ENTAILED\n" } else { "NOT-ENTAILED\n" });
        for o in self.witness.iter().flatten() {
            let _ = writeln!(out, "{}", net.format_outcome(o));
        }
        let _ = writeln!(out, "{}", self.stats.render());
        out
    }
}

struct Frame {
    /// Outcomes this node added to the current path.
    pushed: usize,
    children: Vec<Outcome>,
    next: usize,
}

/// Chronological backtracking from `worse`. `normalize` returns the forced
/// steps taken on entering a state (possibly none); the goal test and the
/// visited set apply to the state after them.
fn dfs<N, C>(
    worse: &Outcome,
    better: &Outcome,
    cap: u64,
    mut normalize: N,
    mut children: C,
) -> Result<(Option<Vec<Outcome>>, SearchStats)>
where
    N: FnMut(&Outcome) -> Result<Vec<Outcome>>,
    C: FnMut(&Outcome) -> Result<Vec<Outcome>>,
{
    let mut stats = SearchStats::default();
    let mut visited: HashSet<Outcome> = HashSet::new();
    let mut path: Vec<Outcome> = Vec::new();
    let mut stack: Vec<Frame> = Vec::new();
    let mut pending = Some(worse.clone());
    loop {
        if let Some(state) = pending.take() {
            let steps = normalize(&state)?;
            let mut chain = vec![state];
            chain.extend(steps);
            let here = chain.last().expect("chain starts non-empty");
            if here == better {
                path.extend(chain);
                stats.witness_length = path.len() - 1;
                stats.max_depth = stats.max_depth.max(stack.len());
                return Ok((Some(path), stats));
            }
            if visited.insert(here.clone()) {
                stats.nodes_expanded += 1;
                if stats.nodes_expanded > cap {
                    return Err(Error::ExpansionCap { cap });
                }
                let kids = children(here)?;
                stats.max_depth = stats.max_depth.max(stack.len());
                stack.push(Frame {
                    pushed: chain.len(),
                    children: kids,
                    next: 0,
                });
                path.extend(chain);
            }
        }
        let Some(top) = stack.last_mut() else {
            return Ok((None, stats));
        };
        if top.next < top.children.len() {
            pending = Some(top.children[top.next].clone());
            top.next += 1;
        } else {
            path.truncate(path.len() - top.pushed);
            stack.pop();
        }
    }
}

fn check_outcome(net: &CpNet, o: &Outcome, what: &str) -> Result<()> {
    if o.values().len() != net.len() {
        return Err(Error::Outcome(format!(
            "{what} assigns {} variables, the net has {}",
            o.values().len(),
            net.len()
        )));
    }
    for x in net.var_ids() {
        if o.get(x) as usize >= net.var(x).domain.len() {
            return Err(Error::Outcome(format!(
                "{what} gives `{}` an index outside its domain",
                net.var(x).name
            )));
        }
    }
    Ok(())
}

/// Does `better` dominate `worse`? Checks that the net is more-or-less first.
pub fn dominates(net: &CpNet, better: &Outcome, worse: &Outcome, opts: &SearchOptions) -> Result<DominanceResult> {
    dominates_in(&MoreOrLessNet::new(net)?, better, worse, opts)
}

/// Restricted search on an already analysed net.
pub fn dominates_in(
    ml: &MoreOrLessNet<'_>,
    better: &Outcome,
    worse: &Outcome,
    opts: &SearchOptions,
) -> Result<DominanceResult> {
    let net = ml.net();
    check_outcome(net, better, "better outcome")?;
    check_outcome(net, worse, "worse outcome")?;
    let reps = match &opts.reps {
        Some(reps) => {
            reps.validate(ml, worse, better)?;
            reps.clone()
        }
        None => RepMap::default_for(ml, worse, better),
    };
    if better == worse {
        return Ok(DominanceResult::not_entailed(SearchStats::default(), Some(reps)));
    }
    let allowed = if opts.forward_pruning {
        match allowed_values(net, better, worse) {
            Some(allowed) => allowed,
            None => return Ok(DominanceResult::not_entailed(SearchStats::default(), Some(reps))),
        }
    } else {
        net.var_ids().map(|x| IntervalSet::full(net.var(x).domain.len())).collect()
    };
    let least_variable = opts.least_variable_flipping && net.is_tree_structured();

    let normalize = |state: &Outcome| normalize(ml, &reps, state);
    let children = |state: &Outcome| -> Result<Vec<Outcome>> {
        let fixed = suffix_fixed(net, state, better);
        let skip = |x: VarId| opts.suffix_fixing && fixed[x.0];
        if least_variable {
            for &x in net.topological_order() {
                let (cur, goal) = (state.get(x), better.get(x));
                if fixed[x.0] || cur == goal || !net.children(x).iter().all(|c| fixed[c.0]) {
                    continue;
                }
                if net.lookup_ranking(x, state)?.prefers(goal, cur) {
                    return Ok(vec![state.with(x, goal)]);
                }
            }
        }
        let mut out = Vec::new();
        for &x in net.topological_order() {
            if skip(x) {
                continue;
            }
            if let Some(next) = flip_out_category(ml, state, x, reps.get(x))? {
                if allowed[x.0].contains(next.get(x)) {
                    out.push(next);
                }
            }
        }
        Ok(out)
    };

    let (witness, stats) = dfs(worse, better, opts.max_expansions, normalize, children)?;
    Ok(DominanceResult {
        entailed: witness.is_some(),
        witness,
        stats,
        reps: Some(reps),
    })
}

/// The in-category pass: every variable whose value is not representative
/// moves to the representative of its category when that improves. Such
/// flips leave every category, and so every other ranking, unchanged.
fn normalize(ml: &MoreOrLessNet<'_>, reps: &RepMap, state: &Outcome) -> Result<Vec<Outcome>> {
    let net = ml.net();
    let mut steps: Vec<Outcome> = Vec::new();
    let mut cur = state.clone();
    for &x in net.topological_order() {
        let rep = reps.get(x);
        if rep.contains(cur.get(x)) {
            continue;
        }
        if let Some(next) = flip_in_category(ml, &cur, x, rep)? {
            if !rep.contains(next.get(x)) {
                return Err(Error::Invariant(format!(
                    "in-category flip of `{}` missed its representative",
                    net.var(x).name
                )));
            }
            steps.push(next.clone());
            cur = next;
        }
    }
    for &x in net.topological_order() {
        let rep = reps.get(x);
        if !rep.contains(cur.get(x)) && flip_in_category(ml, &cur, x, rep)?.is_some() {
            return Err(Error::Invariant(format!(
                "`{}` would be flipped twice by the in-category pass at {}",
                net.var(x).name,
                net.format_outcome(state)
            )));
        }
    }
    Ok(steps)
}

/// Variables that already hold their target value and whose descendants all
/// do too. No ancestor of the rest is among them, so they never need to move.
fn suffix_fixed(net: &CpNet, state: &Outcome, better: &Outcome) -> Vec<bool> {
    let mut fixed = vec![false; net.len()];
    for &x in net.topological_order().iter().rev() {
        fixed[x.0] = state.get(x) == better.get(x) && net.children(x).iter().all(|c| fixed[c.0]);
    }
    fixed
}

/// Values each variable can take on any improving path from `worse` to
/// `better`. A variable whose reachable rows are all ascending only ever
/// moves up, so it stays between its endpoints (and symmetrically for
/// descending). `None` when some variable would have to move the wrong way.
fn allowed_values(net: &CpNet, better: &Outcome, worse: &Outcome) -> Option<Vec<IntervalSet>> {
    let mut allowed: Vec<IntervalSet> = net
        .var_ids()
        .map(|x| IntervalSet::full(net.var(x).domain.len()))
        .collect();
    for &x in net.topological_order() {
        let parents = &net.var(x).parents;
        let (mut asc, mut desc) = (false, false);
        for row in &net.cpt(x).rows {
            let reachable = row
                .parent_sets()
                .iter()
                .zip(parents)
                .all(|(set, p)| set.intersects(&allowed[p.0]));
            if !reachable {
                continue;
            }
            match row.ranking.direction() {
                Some(Direction::Asc) => asc = true,
                Some(Direction::Desc) => desc = true,
                None => {
                    asc = true;
                    desc = true;
                }
            }
        }
        let (u, w) = (worse.get(x), better.get(x));
        allowed[x.0] = match (asc, desc) {
            (true, false) if u <= w => IntervalSet::new([(u, w)]),
            (false, true) if w <= u => IntervalSet::new([(w, u)]),
            (true, false) | (false, true) => return None,
            _ => continue,
        };
    }
    Some(allowed)
}

/// The unrestricted baseline: every improving flip is a candidate. Works on
/// any structurally valid net.
pub fn dominates_naive(net: &CpNet, better: &Outcome, worse: &Outcome, max_expansions: u64) -> Result<DominanceResult> {
    check_outcome(net, better, "better outcome")?;
    check_outcome(net, worse, "worse outcome")?;
    if better == worse {
        return Ok(DominanceResult::not_entailed(SearchStats::default(), None));
    }
    let children = |state: &Outcome| -> Result<Vec<Outcome>> {
        Ok(improving_flips(net, state)?
            .into_iter()
            .map(|(x, v)| state.with(x, v))
            .collect())
    };
    let (witness, stats) = dfs(worse, better, max_expansions, |_| Ok(Vec::new()), children)?;
    Ok(DominanceResult {
        entailed: witness.is_some(),
        witness,
        stats,
        reps: None,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepExhaustiveResult {
    pub entailed: bool,
    /// Number of representative maps searched.
    pub combinations: u64,
    /// Summed over all maps.
    pub nodes_expanded: u64,
}

/// Runs the restricted search once per admissible representative map and
/// checks that every run returns the same verdict.
pub fn dominates_rep_exhaustive(
    ml: &MoreOrLessNet<'_>,
    better: &Outcome,
    worse: &Outcome,
    opts: &SearchOptions,
) -> Result<RepExhaustiveResult> {
    let net = ml.net();
    check_outcome(net, better, "better outcome")?;
    check_outcome(net, worse, "worse outcome")?;
    let candidates: Vec<_> = net
        .var_ids()
        .map(|x| representative_candidates(ml, x, worse, better))
        .collect();
    let total = candidates
        .iter()
        .fold(1u128, |acc, c| acc.saturating_mul(c.len() as u128));
    if total > REP_COMBINATION_CAP as u128 {
        return Err(Error::TooManyCombinations {
            count: total,
            cap: REP_COMBINATION_CAP,
        });
    }

    let mut pick = vec![0usize; candidates.len()];
    let mut verdict: Option<(bool, RepMap)> = None;
    let mut nodes = 0;
    let mut combinations = 0;
    loop {
        let reps = RepMap::new(pick.iter().zip(&candidates).map(|(&i, c)| c[i]).collect());
        let opts = SearchOptions {
            reps: Some(reps.clone()),
            ..opts.clone()
        };
        let result = dominates_in(ml, better, worse, &opts)?;
        nodes += result.stats.nodes_expanded;
        combinations += 1;
        match &verdict {
            None => verdict = Some((result.entailed, reps)),
            Some((first, first_reps)) if *first != result.entailed => {
                return Err(Error::Invariant(format!(
                    "verdict depends on the representatives: {} gives {first}, {} gives {}",
                    first_reps.render(net),
                    reps.render(net),
                    result.entailed
                )));
            }
            Some(_) => {}
        }
        // Odometer step over the candidate lists.
        let mut i = pick.len();
        loop {
            if i == 0 {
                let entailed = verdict.map(|(v, _)| v).unwrap_or(false);
                return Ok(RepExhaustiveResult {
                    entailed,
                    combinations,
                    nodes_expanded: nodes,
                });
            }
            i -= 1;
            pick[i] += 1;
            if pick[i] < candidates[i].len() {
                break;
            }
            pick[i] = 0;
        }
    }
}

//! Acyclicity and CPT partition checks.
//!
//! A CPT is a list of boxes over its parents' domains (one interval set per
//! parent). The rows partition the parent space when no two boxes intersect
//! and every point is covered. Both checks work on interval endpoints, so a
//! parent with a thousand values split into two intervals costs two segments.

use std::fmt;

use crate::model::{CpNet, IntervalSet, Value, VarId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureReport {
    pub acyclic: bool,
    /// Variables on one parent cycle, in edge order; empty when acyclic.
    pub cycle: Vec<String>,
    pub tables: Vec<TableReport>,
    /// Every ranking is a strict total order over its domain.
    pub rankings_total: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableReport {
    pub var: String,
    pub overlaps: Vec<Overlap>,
    /// A parent assignment region that no row covers, as `(parent, values)`.
    pub gap: Option<Vec<(String, String)>>,
}

impl TableReport {
    pub fn exhaustive(&self) -> bool {
        self.gap.is_none()
    }

    pub fn disjoint(&self) -> bool {
        self.overlaps.is_empty()
    }

    pub fn is_partition(&self) -> bool {
        self.exhaustive() && self.disjoint()
    }
}

/// Two rows (0-based, declaration order) whose conditions intersect.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Overlap {
    pub rows: (usize, usize),
    pub region: Vec<(String, String)>,
}

impl StructureReport {
    pub fn is_valid(&self) -> bool {
        self.acyclic && self.rankings_total && self.tables.iter().all(TableReport::is_partition)
    }

    /// The first problem found, or "ok".
    pub fn summary(&self) -> String {
        if !self.acyclic {
            return format!("parent graph has a cycle: {}", self.cycle.join(" -> "));
        }
        for t in &self.tables {
            if let Some(o) = t.overlaps.first() {
                return format!(
                    "CPT of `{}`: rows {} and {} overlap on {}",
                    t.var,
                    o.rows.0 + 1,
                    o.rows.1 + 1,
                    format_region(&o.region)
                );
            }
            if let Some(gap) = &t.gap {
                return format!("CPT of `{}` does not cover {}", t.var, format_region(gap));
            }
        }
        if !self.rankings_total {
            return "a ranking is not a strict total order".into();
        }
        "ok".into()
    }
}

fn format_region(region: &[(String, String)]) -> String {
    if region.is_empty() {
        return "the empty assignment".into();
    }
    region
        .iter()
        .map(|(p, v)| format!("{p} values {v}"))
        .collect::<Vec<_>>()
        .join(", ")
}

impl fmt::Display for StructureReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.acyclic {
            writeln!(f, "acyclic: yes")?;
        } else {
            writeln!(f, "acyclic: NO ({})", self.cycle.join(" -> "))?;
        }
        for t in &self.tables {
            let verdict = if t.is_partition() { "partition ok" } else { "NOT a partition" };
            writeln!(
                f,
                "cpt {}: {verdict} (exhaustive={}, disjoint={})",
                t.var,
                t.exhaustive(),
                t.disjoint()
            )?;
            for o in &t.overlaps {
                writeln!(
                    f,
                    "  rows {} and {} overlap on {}",
                    o.rows.0 + 1,
                    o.rows.1 + 1,
                    format_region(&o.region)
                )?;
            }
            if let Some(gap) = &t.gap {
                writeln!(f, "  uncovered: {}", format_region(gap))?;
            }
        }
        writeln!(f, "rankings total: {}", if self.rankings_total { "yes" } else { "NO" })
    }
}

pub fn validate_structure(net: &CpNet) -> StructureReport {
    let tables = net.var_ids().map(|id| check_table(net, id)).collect();
    let rankings_total = net.var_ids().all(|id| {
        let len = net.var(id).domain.len();
        net.cpt(id).rows.iter().all(|r| r.ranking.len() == len)
    });
    StructureReport {
        acyclic: net.is_acyclic(),
        cycle: if net.is_acyclic() { Vec::new() } else { find_cycle(net) },
        tables,
        rankings_total,
    }
}

fn find_cycle(net: &CpNet) -> Vec<String> {
    // Variables Kahn could not place all have at least one unplaced parent,
    // so walking unplaced parents must eventually revisit a variable.
    let n = net.len();
    let mut placed = vec![false; n];
    let mut indegree: Vec<usize> = net.variables().iter().map(|v| v.parents.len()).collect();
    let mut stack: Vec<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
    while let Some(i) = stack.pop() {
        placed[i] = true;
        for c in net.children(VarId(i)) {
            indegree[c.0] -= 1;
            if indegree[c.0] == 0 {
                stack.push(c.0);
            }
        }
    }
    let Some(start) = (0..n).find(|&i| !placed[i]) else {
        return Vec::new();
    };
    let mut seen_at = vec![usize::MAX; n];
    let mut walk = Vec::new();
    let mut cur = start;
    while seen_at[cur] == usize::MAX {
        seen_at[cur] = walk.len();
        walk.push(cur);
        cur = net
            .var(VarId(cur))
            .parents
            .iter()
            .find(|p| !placed[p.0])
            .expect("unplaced variable has an unplaced parent")
            .0;
    }
    // The walk follows child -> parent edges; reverse for parent -> child order.
    let mut cycle: Vec<String> = walk[seen_at[cur]..]
        .iter()
        .rev()
        .map(|&i| net.var(VarId(i)).name.clone())
        .collect();
    cycle.push(cycle[0].clone());
    cycle
}

fn check_table(net: &CpNet, id: VarId) -> TableReport {
    let var = net.var(id);
    let rows = &net.cpt(id).rows;
    let mut overlaps = Vec::new();
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            let region: Vec<IntervalSet> = rows[i]
                .parent_sets()
                .iter()
                .zip(rows[j].parent_sets())
                .map(|(a, b)| a.intersect(b))
                .collect();
            if region.iter().all(|s| !s.is_empty()) {
                overlaps.push(Overlap {
                    rows: (i, j),
                    region: describe(net, &var.parents, &region),
                });
            }
        }
    }
    let sizes: Vec<usize> = var.parents.iter().map(|p| net.var(*p).domain.len()).collect();
    let all: Vec<usize> = (0..rows.len()).collect();
    let gap = find_gap(net, id, &sizes, &all, 0).map(|mut segs| {
        // Parents below the recursion depth are unconstrained in the witness.
        while segs.len() < sizes.len() {
            segs.push(IntervalSet::full(sizes[segs.len()]));
        }
        describe(net, &var.parents, &segs)
    });
    TableReport {
        var: var.name.clone(),
        overlaps,
        gap,
    }
}

/// Depth-first split of parent `k`'s domain into elementary segments; returns
/// the segments (for parents `k..`) of a region no candidate row covers.
fn find_gap(
    net: &CpNet,
    id: VarId,
    sizes: &[usize],
    candidates: &[usize],
    k: usize,
) -> Option<Vec<IntervalSet>> {
    let rows = &net.cpt(id).rows;
    if candidates.is_empty() {
        return Some(Vec::new());
    }
    if k == sizes.len() {
        return None;
    }
    if candidates.len() == 1 {
        let row = &rows[candidates[0]];
        let missing = (k..sizes.len()).find(|&p| !row.parent_sets()[p].covers_all(sizes[p]))?;
        let mut segs: Vec<IntervalSet> = (k..missing).map(|p| IntervalSet::full(sizes[p])).collect();
        let covered = row.parent_sets()[missing].intervals();
        let uncovered = complement(covered, sizes[missing]);
        segs.push(uncovered);
        return Some(segs);
    }
    let mut cuts: Vec<Value> = vec![0, sizes[k] as Value];
    for &r in candidates {
        for &(lo, hi) in rows[r].parent_sets()[k].intervals() {
            cuts.push(lo);
            cuts.push(hi + 1);
        }
    }
    cuts.sort_unstable();
    cuts.dedup();
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1] - 1);
        let next: Vec<usize> = candidates
            .iter()
            .copied()
            .filter(|&r| rows[r].parent_sets()[k].contains(lo))
            .collect();
        if let Some(mut rest) = find_gap(net, id, sizes, &next, k + 1) {
            rest.insert(0, IntervalSet::new([(lo, hi)]));
            return Some(rest);
        }
    }
    None
}

fn complement(covered: &[(Value, Value)], len: usize) -> IntervalSet {
    let mut out = Vec::new();
    let mut next = 0;
    for &(lo, hi) in covered {
        if lo > next {
            out.push((next, lo - 1));
        }
        next = hi + 1;
    }
    if (next as usize) < len {
        out.push((next, len as Value - 1));
    }
    IntervalSet::new(out)
}

fn describe(net: &CpNet, parents: &[VarId], sets: &[IntervalSet]) -> Vec<(String, String)> {
    parents
        .iter()
        .zip(sets)
        .map(|(&p, set)| {
            let text = set
                .intervals()
                .iter()
                .map(|&(lo, hi)| {
                    if lo == hi {
                        net.token(p, lo).into_owned()
                    } else {
                        format!("{}..{}", net.token(p, lo), net.token(p, hi))
                    }
                })
                .collect::<Vec<_>>()
                .join(",");
            (net.var(p).name.clone(), text)
        })
        .collect()
}

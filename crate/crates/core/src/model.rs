//! Domain types for multi-valued CP-nets.
//!
//! Values are stored as indices into their variable's [`Domain`]; the index is
//! also the value's rank in the declared total order (index 0 is the least
//! element). Integer ranges are never materialized.

use std::borrow::Cow;
use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Index of a value inside its variable's domain.
pub type Value = u32;

/// Index of a variable inside its net, in declaration order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId(pub usize);

impl VarId {
    pub fn index(self) -> usize {
        self.0
    }
}

/// An ordered domain. The declared sequence is the total order: position is rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Domain {
    List(Vec<String>),
    Range { lo: i64, hi: i64 },
}

impl Domain {
    pub fn list<I, S>(values: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let values: Vec<String> = values.into_iter().map(Into::into).collect();
        if values.len() < 2 {
            return Err(Error::Invalid("domain too small".into()));
        }
        if values.len() > Value::MAX as usize {
            return Err(Error::Invalid("domain too large".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for v in &values {
            if !is_token(v) {
                return Err(Error::Invalid(format!("invalid value token `{v}`")));
            }
            if !seen.insert(v.as_str()) {
                return Err(Error::Invalid(format!("duplicate domain value `{v}`")));
            }
        }
        Ok(Domain::List(values))
    }

    pub fn range(lo: i64, hi: i64) -> Result<Self> {
        if lo >= hi {
            return Err(Error::Invalid(format!(
                "domain too small: integer range {lo}..{hi} needs lo < hi"
            )));
        }
        if (hi as i128 - lo as i128) >= Value::MAX as i128 {
            return Err(Error::Invalid(format!("integer range {lo}..{hi} is too large")));
        }
        Ok(Domain::Range { lo, hi })
    }

    pub fn len(&self) -> usize {
        match self {
            Domain::List(v) => v.len(),
            Domain::Range { lo, hi } => (hi - lo + 1) as usize,
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_range(&self) -> bool {
        matches!(self, Domain::Range { .. })
    }

    pub fn index_of(&self, token: &str) -> Option<Value> {
        match self {
            Domain::List(v) => v.iter().position(|t| t == token).map(|i| i as Value),
            Domain::Range { lo, hi } => {
                let n: i64 = token.parse().ok()?;
                (n >= *lo && n <= *hi).then(|| (n - lo) as Value)
            }
        }
    }

    pub fn token(&self, value: Value) -> Cow<'_, str> {
        match self {
            Domain::List(v) => Cow::Borrowed(v[value as usize].as_str()),
            Domain::Range { lo, .. } => Cow::Owned((lo + value as i64).to_string()),
        }
    }

    pub fn last(&self) -> Value {
        (self.len() - 1) as Value
    }
}

/// Identifier and value tokens: non-empty, no whitespace, none of the grammar's
/// punctuation.
pub(crate) fn is_token(s: &str) -> bool {
    !s.is_empty()
        && !s.contains("..")
        && s
            .chars()
            .all(|c| !c.is_whitespace() && !",=&>:{}|#~".contains(c))
}

/// Which end of the declared order a ranking favours.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    /// Later values are preferred (the declared order is improving).
    Asc,
    /// Earlier values are preferred.
    Desc,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Asc => "ASC",
            Direction::Desc => "DESC",
        })
    }
}

/// A strict total ranking over one variable's domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ranking {
    Asc { len: u32 },
    Desc { len: u32 },
    /// `order` is most-preferred first; `position` is its inverse.
    Explicit { order: Vec<Value>, position: Vec<u32> },
}

impl Ranking {
    pub fn asc(len: usize) -> Self {
        Ranking::Asc { len: len as u32 }
    }

    pub fn desc(len: usize) -> Self {
        Ranking::Desc { len: len as u32 }
    }

    /// An explicit permutation, most preferred first. Must cover `0..len` exactly once.
    pub fn explicit(order: Vec<Value>, len: usize) -> Result<Self> {
        if order.len() != len {
            return Err(Error::Invalid(format!(
                "ranking lists {} values but the domain has {len}",
                order.len()
            )));
        }
        let mut position = vec![u32::MAX; len];
        for (pos, &v) in order.iter().enumerate() {
            let slot = position
                .get_mut(v as usize)
                .ok_or_else(|| Error::Invalid(format!("ranking value {v} out of domain")))?;
            if *slot != u32::MAX {
                return Err(Error::Invalid(format!("duplicate ranking value {v}")));
            }
            *slot = pos as u32;
        }
        Ok(Ranking::Explicit { order, position })
    }

    pub fn len(&self) -> usize {
        match self {
            Ranking::Asc { len } | Ranking::Desc { len } => *len as usize,
            Ranking::Explicit { order, .. } => order.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Rank of `v`; 0 is most preferred.
    pub fn position(&self, v: Value) -> u32 {
        match self {
            Ranking::Asc { len } => len - 1 - v,
            Ranking::Desc { .. } => v,
            Ranking::Explicit { position, .. } => position[v as usize],
        }
    }

    /// The value at rank `pos`.
    pub fn at(&self, pos: u32) -> Value {
        match self {
            Ranking::Asc { len } => len - 1 - pos,
            Ranking::Desc { .. } => pos,
            Ranking::Explicit { order, .. } => order[pos as usize],
        }
    }

    /// Whether `a` is strictly preferred to `b`.
    pub fn prefers(&self, a: Value, b: Value) -> bool {
        self.position(a) < self.position(b)
    }

    pub fn best(&self) -> Value {
        self.at(0)
    }

    /// Values strictly preferred to `v`, most preferred first.
    pub fn improvements(&self, v: Value) -> impl Iterator<Item = Value> + '_ {
        (0..self.position(v)).map(move |p| self.at(p))
    }

    /// The explicit most-preferred-first permutation.
    pub fn resolved(&self) -> Vec<Value> {
        (0..self.len() as u32).map(|p| self.at(p)).collect()
    }

    /// `Some` when this ranking is the declared order or its reverse.
    pub fn direction(&self) -> Option<Direction> {
        match self {
            Ranking::Asc { .. } => Some(Direction::Asc),
            Ranking::Desc { .. } => Some(Direction::Desc),
            Ranking::Explicit { order, .. } => {
                let n = order.len() as u32;
                if order.iter().enumerate().all(|(i, &v)| v == i as u32) {
                    Some(Direction::Desc)
                } else if order.iter().enumerate().all(|(i, &v)| v == n - 1 - i as u32) {
                    Some(Direction::Asc)
                } else {
                    None
                }
            }
        }
    }

    /// Semantic equality: same resolved permutation, whatever the spelling.
    pub fn same_order(&self, other: &Ranking) -> bool {
        if self.len() != other.len() {
            return false;
        }
        match (self.direction(), other.direction()) {
            (Some(a), Some(b)) => a == b,
            (None, None) => (0..self.len() as u32).all(|p| self.at(p) == other.at(p)),
            _ => false,
        }
    }
}

/// Sorted, disjoint, non-adjacent inclusive intervals of values.
#[derive(Clone, Debug, PartialEq, Eq, Default, Hash)]
pub struct IntervalSet(Vec<(Value, Value)>);

impl IntervalSet {
    pub fn new<I: IntoIterator<Item = (Value, Value)>>(intervals: I) -> Self {
        let mut v: Vec<(Value, Value)> = intervals.into_iter().filter(|(a, b)| a <= b).collect();
        v.sort_unstable();
        let mut merged: Vec<(Value, Value)> = Vec::with_capacity(v.len());
        for (lo, hi) in v {
            match merged.last_mut() {
                Some(last) if lo <= last.1.saturating_add(1) => last.1 = last.1.max(hi),
                _ => merged.push((lo, hi)),
            }
        }
        IntervalSet(merged)
    }

    pub fn single(v: Value) -> Self {
        IntervalSet(vec![(v, v)])
    }

    pub fn full(len: usize) -> Self {
        IntervalSet(vec![(0, len as Value - 1)])
    }

    pub fn intervals(&self) -> &[(Value, Value)] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: Value) -> bool {
        self.0
            .binary_search_by(|&(lo, hi)| {
                if hi < v {
                    std::cmp::Ordering::Less
                } else if lo > v {
                    std::cmp::Ordering::Greater
                } else {
                    std::cmp::Ordering::Equal
                }
            })
            .is_ok()
    }

    /// Number of values covered.
    pub fn count(&self) -> u64 {
        self.0.iter().map(|&(lo, hi)| (hi - lo) as u64 + 1).sum()
    }

    pub fn intersect(&self, other: &IntervalSet) -> IntervalSet {
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < self.0.len() && j < other.0.len() {
            let (a0, a1) = self.0[i];
            let (b0, b1) = other.0[j];
            let lo = a0.max(b0);
            let hi = a1.min(b1);
            if lo <= hi {
                out.push((lo, hi));
            }
            if a1 < b1 {
                i += 1;
            } else {
                j += 1;
            }
        }
        IntervalSet(out)
    }

    pub fn intersects(&self, other: &IntervalSet) -> bool {
        !self.intersect(other).is_empty()
    }

    pub fn covers_all(&self, len: usize) -> bool {
        self.0.len() == 1 && self.0[0] == (0, len as Value - 1)
    }

    pub fn first(&self) -> Option<Value> {
        self.0.first().map(|iv| iv.0)
    }
}

/// One parent predicate of a CPT row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Condition {
    Eq(Value),
    /// Inclusive range over the parent's declared order.
    Range(Value, Value),
    Set(Vec<Value>),
}

impl Condition {
    pub fn values(&self) -> IntervalSet {
        match self {
            Condition::Eq(v) => IntervalSet::single(*v),
            Condition::Range(lo, hi) => IntervalSet::new([(*lo, *hi)]),
            Condition::Set(vs) => IntervalSet::new(vs.iter().map(|&v| (v, v))),
        }
    }

    fn max_value(&self) -> Value {
        match self {
            Condition::Eq(v) => *v,
            Condition::Range(lo, hi) => *lo.max(hi),
            Condition::Set(vs) => vs.iter().copied().max().unwrap_or(0),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CptRow {
    /// One predicate per parent, aligned with the variable's parent list.
    pub conditions: Vec<Condition>,
    pub ranking: Ranking,
    matches: Vec<IntervalSet>,
}

impl CptRow {
    pub fn new(conditions: Vec<Condition>, ranking: Ranking) -> Self {
        let matches = conditions.iter().map(Condition::values).collect();
        CptRow {
            conditions,
            ranking,
            matches,
        }
    }

    /// Values each parent may take for this row to apply.
    pub fn parent_sets(&self) -> &[IntervalSet] {
        &self.matches
    }

    pub fn matches(&self, parent_values: impl IntoIterator<Item = Value>) -> bool {
        self.matches
            .iter()
            .zip(parent_values)
            .all(|(set, v)| set.contains(v))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub domain: Domain,
    pub parents: Vec<VarId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cpt {
    pub var: VarId,
    pub rows: Vec<CptRow>,
}

/// An immutable CP-net. Local invariants are checked at construction; acyclicity
/// and CPT partitioning are reported by [`crate::structure::validate_structure`].
#[derive(Clone, Debug)]
pub struct CpNet {
    name: String,
    vars: Vec<Variable>,
    cpts: Vec<Cpt>,
    children: Vec<Vec<VarId>>,
    topo: Vec<VarId>,
    acyclic: bool,
    by_name: HashMap<String, VarId>,
}

impl PartialEq for CpNet {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.vars == other.vars && self.cpts == other.cpts
    }
}

impl Eq for CpNet {}

impl CpNet {
    /// `cpts` may come in any order but must hold exactly one table per variable.
    pub fn new(name: impl Into<String>, vars: Vec<Variable>, cpts: Vec<Cpt>) -> Result<Self> {
        let name = name.into();
        if !is_token(&name) {
            return Err(Error::Invalid(format!("invalid net name `{name}`")));
        }
        if vars.is_empty() {
            return Err(Error::Invalid("net has no variables".into()));
        }
        let n = vars.len();
        let mut by_name = HashMap::with_capacity(n);
        for (i, v) in vars.iter().enumerate() {
            if !is_token(&v.name) {
                return Err(Error::Invalid(format!("invalid variable name `{}`", v.name)));
            }
            if by_name.insert(v.name.clone(), VarId(i)).is_some() {
                return Err(Error::Invalid(format!("duplicate variable `{}`", v.name)));
            }
            if v.domain.len() < 2 {
                return Err(Error::Invalid(format!("domain too small for `{}`", v.name)));
            }
            let mut seen = std::collections::HashSet::new();
            for p in &v.parents {
                if p.0 >= n {
                    return Err(Error::Invalid(format!("`{}` has an unknown parent", v.name)));
                }
                if p.0 == i {
                    return Err(Error::Invalid(format!("`{}` is its own parent", v.name)));
                }
                if !seen.insert(*p) {
                    return Err(Error::Invalid(format!(
                        "`{}` lists parent `{}` twice",
                        v.name, vars[p.0].name
                    )));
                }
            }
        }

        let mut slots: Vec<Option<Cpt>> = vec![None; n];
        for cpt in cpts {
            let var = vars
                .get(cpt.var.0)
                .ok_or_else(|| Error::Invalid("CPT for an unknown variable".into()))?;
            if slots[cpt.var.0].is_some() {
                return Err(Error::Invalid(format!("`{}` has more than one CPT", var.name)));
            }
            check_cpt(&vars, var, &cpt)?;
            let slot = cpt.var.0;
            slots[slot] = Some(cpt);
        }
        let cpts = slots
            .into_iter()
            .enumerate()
            .map(|(i, c)| c.ok_or_else(|| Error::Invalid(format!("`{}` has no CPT", vars[i].name))))
            .collect::<Result<Vec<_>>>()?;

        let mut children = vec![Vec::new(); n];
        for (i, v) in vars.iter().enumerate() {
            for p in &v.parents {
                children[p.0].push(VarId(i));
            }
        }
        let (topo, acyclic) = topological_order(&vars, &children);
        Ok(CpNet {
            name,
            vars,
            cpts,
            children,
            topo,
            acyclic,
            by_name,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn variables(&self) -> &[Variable] {
        &self.vars
    }

    pub fn var_ids(&self) -> impl Iterator<Item = VarId> + '_ {
        (0..self.vars.len()).map(VarId)
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn var(&self, id: VarId) -> &Variable {
        &self.vars[id.0]
    }

    pub fn cpt(&self, id: VarId) -> &Cpt {
        &self.cpts[id.0]
    }

    pub fn cpts(&self) -> &[Cpt] {
        &self.cpts
    }

    pub fn children(&self, id: VarId) -> &[VarId] {
        &self.children[id.0]
    }

    pub fn find(&self, name: &str) -> Option<VarId> {
        self.by_name.get(name).copied()
    }

    pub fn var_id(&self, name: &str) -> Result<VarId> {
        self.find(name)
            .ok_or_else(|| Error::Outcome(format!("unknown variable `{name}`")))
    }

    /// Whether the parent graph is a DAG.
    pub fn is_acyclic(&self) -> bool {
        self.acyclic
    }

    /// Parents before children. On a cyclic net the variables caught in or
    /// behind a cycle trail in declaration order.
    pub fn topological_order(&self) -> &[VarId] {
        &self.topo
    }

    /// Every variable has at most one parent.
    pub fn is_tree_structured(&self) -> bool {
        self.vars.iter().all(|v| v.parents.len() <= 1)
    }

    /// Number of outcomes, saturating at `u128::MAX`.
    pub fn outcome_count(&self) -> u128 {
        self.vars
            .iter()
            .fold(1u128, |acc, v| acc.saturating_mul(v.domain.len() as u128))
    }

    /// The ranking CPT(X) dictates in outcome `o`. Exactly one row must match.
    pub fn lookup_ranking(&self, x: VarId, o: &Outcome) -> Result<&Ranking> {
        let parents = &self.vars[x.0].parents;
        let mut found = None;
        for row in &self.cpts[x.0].rows {
            if row.matches(parents.iter().map(|p| o.get(*p))) {
                if found.is_some() {
                    return Err(Error::Invariant(format!(
                        "several CPT rows of `{}` match {}",
                        self.vars[x.0].name,
                        self.format_outcome(o)
                    )));
                }
                found = Some(&row.ranking);
            }
        }
        found.ok_or_else(|| {
            Error::Invariant(format!(
                "no CPT row of `{}` matches {}",
                self.vars[x.0].name,
                self.format_outcome(o)
            ))
        })
    }

    pub fn token(&self, x: VarId, v: Value) -> Cow<'_, str> {
        self.vars[x.0].domain.token(v)
    }

    /// `X=3,Y=a`, variables in declaration order.
    pub fn format_outcome(&self, o: &Outcome) -> String {
        self.vars
            .iter()
            .zip(o.values())
            .map(|(var, &v)| format!("{}={}", var.name, var.domain.token(v)))
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Parses an assignment literal that may leave variables unset.
    pub fn parse_assignment(&self, literal: &str) -> Result<Vec<Option<Value>>> {
        let mut out = vec![None; self.vars.len()];
        for part in literal.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (name, value) = part
                .split_once('=')
                .ok_or_else(|| Error::Outcome(format!("expected `name=value`, got `{part}`")))?;
            let (name, value) = (name.trim(), value.trim());
            let id = self.var_id(name)?;
            let v = self.vars[id.0].domain.index_of(value).ok_or_else(|| {
                Error::Outcome(format!("`{value}` is not in the domain of `{name}`"))
            })?;
            if out[id.0].replace(v).is_some() {
                return Err(Error::Outcome(format!("`{name}` assigned twice")));
            }
        }
        Ok(out)
    }

    /// Parses a total outcome literal such as `X=3,Y=a`.
    pub fn parse_outcome(&self, literal: &str) -> Result<Outcome> {
        let partial = self.parse_assignment(literal)?;
        let values = partial
            .into_iter()
            .enumerate()
            .map(|(i, v)| {
                v.ok_or_else(|| {
                    Error::Outcome(format!("`{}` is not assigned in `{literal}`", self.vars[i].name))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Outcome(values))
    }

    /// Checks that `values` is a total, in-domain assignment.
    pub fn outcome(&self, values: Vec<Value>) -> Result<Outcome> {
        if values.len() != self.vars.len() {
            return Err(Error::Outcome(format!(
                "expected {} values, got {}",
                self.vars.len(),
                values.len()
            )));
        }
        for (var, &v) in self.vars.iter().zip(&values) {
            if v as usize >= var.domain.len() {
                return Err(Error::Outcome(format!("value {v} out of the domain of `{}`", var.name)));
            }
        }
        Ok(Outcome(values))
    }

    /// All outcomes in mixed-radix order (last variable fastest).
    pub fn outcomes(&self) -> OutcomeIter<'_> {
        OutcomeIter {
            net: self,
            next: Some(vec![0; self.vars.len()]),
        }
    }
}

fn check_cpt(vars: &[Variable], var: &Variable, cpt: &Cpt) -> Result<()> {
    if var.parents.is_empty() && cpt.rows.len() != 1 {
        return Err(Error::Invalid(format!(
            "root variable `{}` needs exactly one unconditional row",
            var.name
        )));
    }
    if cpt.rows.is_empty() {
        return Err(Error::Invalid(format!("CPT of `{}` has no rows", var.name)));
    }
    for row in &cpt.rows {
        if row.conditions.len() != var.parents.len() {
            return Err(Error::Invalid(format!(
                "a row of `{}` constrains {} parents, expected {}",
                var.name,
                row.conditions.len(),
                var.parents.len()
            )));
        }
        for (cond, p) in row.conditions.iter().zip(&var.parents) {
            let plen = vars[p.0].domain.len();
            if cond.max_value() as usize >= plen || cond.values().is_empty() {
                return Err(Error::Invalid(format!(
                    "a row of `{}` has an empty or out-of-domain condition on `{}`",
                    var.name, vars[p.0].name
                )));
            }
        }
        if row.ranking.len() != var.domain.len() {
            return Err(Error::Invalid(format!(
                "a ranking of `{}` does not cover its domain",
                var.name
            )));
        }
    }
    Ok(())
}

/// Kahn's algorithm, ties broken by declaration order.
fn topological_order(vars: &[Variable], children: &[Vec<VarId>]) -> (Vec<VarId>, bool) {
    let n = vars.len();
    let mut indegree: Vec<usize> = vars.iter().map(|v| v.parents.len()).collect();
    let mut ready: std::collections::BTreeSet<usize> =
        (0..n).filter(|&i| indegree[i] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(i) = ready.pop_first() {
        order.push(VarId(i));
        for c in &children[i] {
            indegree[c.0] -= 1;
            if indegree[c.0] == 0 {
                ready.insert(c.0);
            }
        }
    }
    let acyclic = order.len() == n;
    if !acyclic {
        let placed: std::collections::HashSet<_> = order.iter().copied().collect();
        order.extend((0..n).map(VarId).filter(|v| !placed.contains(v)));
    }
    (order, acyclic)
}

/// A total assignment of values to a net's variables, in declaration order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Outcome(Vec<Value>);

impl Outcome {
    pub fn get(&self, x: VarId) -> Value {
        self.0[x.0]
    }

    pub fn values(&self) -> &[Value] {
        &self.0
    }

    pub fn with(&self, x: VarId, v: Value) -> Outcome {
        let mut next = self.clone();
        next.0[x.0] = v;
        next
    }

    pub fn set(&mut self, x: VarId, v: Value) {
        self.0[x.0] = v;
    }

    /// Variables on which the two outcomes disagree.
    pub fn diff(&self, other: &Outcome) -> Vec<VarId> {
        self.0
            .iter()
            .zip(&other.0)
            .enumerate()
            .filter(|(_, (a, b))| a != b)
            .map(|(i, _)| VarId(i))
            .collect()
    }

    pub(crate) fn from_values_unchecked(values: Vec<Value>) -> Self {
        Outcome(values)
    }
}

pub struct OutcomeIter<'a> {
    net: &'a CpNet,
    next: Option<Vec<Value>>,
}

impl Iterator for OutcomeIter<'_> {
    type Item = Outcome;

    fn next(&mut self) -> Option<Outcome> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut i = succ.len();
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            succ[i] += 1;
            if (succ[i] as usize) < self.net.vars[i].domain.len() {
                self.next = Some(succ);
                break;
            }
            succ[i] = 0;
        }
        Some(Outcome(current))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_set_merges_and_intersects() {
        let a = IntervalSet::new([(5, 9), (0, 2), (3, 3)]);
        assert_eq!(a.intervals(), &[(0, 3), (5, 9)]);
        let b = IntervalSet::new([(2, 6)]);
        assert_eq!(a.intersect(&b).intervals(), &[(2, 3), (5, 6)]);
        assert!(a.contains(7) && !a.contains(4));
        assert_eq!(a.count(), 9);
    }

    #[test]
    fn ranking_directions() {
        assert_eq!(Ranking::asc(4).resolved(), vec![3, 2, 1, 0]);
        assert_eq!(Ranking::desc(3).resolved(), vec![0, 1, 2]);
        let e = Ranking::explicit(vec![2, 1, 0], 3).unwrap();
        assert_eq!(e.direction(), Some(Direction::Asc));
        assert!(e.same_order(&Ranking::asc(3)));
        let peaked = Ranking::explicit(vec![1, 0, 2], 3).unwrap();
        assert_eq!(peaked.direction(), None);
        assert!(peaked.prefers(0, 2));
        assert_eq!(peaked.improvements(2).collect::<Vec<_>>(), vec![1, 0]);
    }

    #[test]
    fn explicit_ranking_rejects_duplicates_and_partial_orders() {
        assert!(Ranking::explicit(vec![0, 0], 2).is_err());
        assert!(Ranking::explicit(vec![0], 2).is_err());
        assert!(Ranking::explicit(vec![0, 5], 2).is_err());
    }

    #[test]
    fn domains() {
        assert!(Domain::list(["a"]).is_err());
        assert!(Domain::list(["a", "a"]).is_err());
        assert!(Domain::range(3, 3).is_err());
        let d = Domain::range(-2, 5).unwrap();
        assert_eq!(d.len(), 8);
        assert_eq!(d.index_of("-2"), Some(0));
        assert_eq!(d.token(7), "5");
        assert_eq!(d.index_of("6"), None);
    }
}

//! Monotonic variables and more-or-less nets.
//!
//! A variable is monotonic when every ranking in its table is the declared
//! order or its reverse, and its children's tables change (as the variable
//! alone moves) across at most one boundary of its declared order. That
//! boundary splits the domain into the `less` and `more` categories.

use std::fmt;

use crate::error::{Error, Result};
use crate::model::{CpNet, Direction, IntervalSet, Value, VarId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Category {
    Less,
    More,
}

impl Category {
    pub fn other(self) -> Category {
        match self {
            Category::Less => Category::More,
            Category::More => Category::Less,
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Category::Less => "LESS",
            Category::More => "MORE",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MonotonicityFailure {
    /// Row (0-based) whose ranking is neither the declared order nor its reverse.
    NonMonotoneRanking { row: usize },
    /// A single child changes behaviour at more than one boundary.
    MultipleChangeBoundaries { child: String, boundaries: Vec<Value> },
    /// Each child changes at most once, but not all at the same boundary.
    MisalignedChildBoundaries { boundaries: Vec<Value> },
}

impl fmt::Display for MonotonicityFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MonotonicityFailure::NonMonotoneRanking { row } => {
                write!(f, "non-monotone ranking (row {})", row + 1)
            }
            MonotonicityFailure::MultipleChangeBoundaries { child, boundaries } => {
                write!(f, "multiple change boundaries in child `{child}` ({})", boundaries.len())
            }
            MonotonicityFailure::MisalignedChildBoundaries { boundaries } => {
                write!(f, "misaligned child boundaries ({})", boundaries.len())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotonicityReport {
    pub var: VarId,
    pub name: String,
    pub is_monotonic: bool,
    /// Per row of the variable's own table; `None` for a non-monotone ranking.
    pub direction_by_row: Vec<Option<Direction>>,
    /// Positions `b` (between values `b-1` and `b`) where some child changes.
    pub boundaries: Vec<Value>,
    /// Set whenever the children agree on at most one boundary.
    pub break_point: Option<Value>,
    /// No child pins the boundary, so `c` defaulted to the first value.
    pub c_default: bool,
    pub less: IntervalSet,
    pub more: IntervalSet,
    pub failure: Option<MonotonicityFailure>,
}

impl MonotonicityReport {
    pub fn category(&self, x: Value) -> Option<Category> {
        let c = self.break_point?;
        Some(if x <= c { Category::Less } else { Category::More })
    }
}

/// Which category `x` falls in. Fails for non-monotonic variables and
/// out-of-domain values.
pub fn categories(report: &MonotonicityReport, x: Value) -> Result<Category> {
    if !report.is_monotonic {
        return Err(Error::Precondition(format!("`{}` is not monotonic", report.name)));
    }
    let size = report.less.count() + report.more.count();
    if x as u64 >= size {
        return Err(Error::Outcome(format!("value {x} is not in the domain of `{}`", report.name)));
    }
    Ok(report.category(x).expect("monotonic variables have a break point"))
}

pub fn check_monotonic(net: &CpNet, x: VarId) -> MonotonicityReport {
    let var = net.var(x);
    let len = var.domain.len();
    let direction_by_row: Vec<Option<Direction>> =
        net.cpt(x).rows.iter().map(|r| r.ranking.direction()).collect();
    let mut failure = direction_by_row
        .iter()
        .position(Option::is_none)
        .map(|row| MonotonicityFailure::NonMonotoneRanking { row });

    let mut boundaries: Vec<Value> = Vec::new();
    for &child in net.children(x) {
        let own = child_boundaries(net, x, child);
        if own.len() > 1 && failure.is_none() {
            failure = Some(MonotonicityFailure::MultipleChangeBoundaries {
                child: net.var(child).name.clone(),
                boundaries: own.clone(),
            });
        }
        boundaries.extend(own);
    }
    boundaries.sort_unstable();
    boundaries.dedup();
    if boundaries.len() > 1 && failure.is_none() {
        failure = Some(MonotonicityFailure::MisalignedChildBoundaries {
            boundaries: boundaries.clone(),
        });
    }

    let (break_point, c_default) = match boundaries.as_slice() {
        [] => (Some(0), true),
        [b] => (Some(b - 1), false),
        _ => (None, false),
    };
    let (less, more) = match break_point {
        Some(c) => (IntervalSet::new([(0, c)]), IntervalSet::new([(c + 1, len as Value - 1)])),
        None => (IntervalSet::default(), IntervalSet::full(len)),
    };
    MonotonicityReport {
        var: x,
        name: var.name.clone(),
        is_monotonic: failure.is_none(),
        direction_by_row,
        boundaries,
        break_point,
        c_default,
        less,
        more,
        failure,
    }
}

/// Boundaries of `parent`'s order across which `child`'s table changes while
/// every other parent of `child` stays fixed. Only row interval endpoints are
/// candidates, and two rows can only meet at a boundary if their conditions on
/// the other parents intersect.
fn child_boundaries(net: &CpNet, parent: VarId, child: VarId) -> Vec<Value> {
    let slot = net
        .var(child)
        .parents
        .iter()
        .position(|&p| p == parent)
        .expect("child lists its parent");
    let len = net.var(parent).domain.len() as Value;
    let rows = &net.cpt(child).rows;

    let mut candidates: Vec<Value> = rows
        .iter()
        .flat_map(|r| r.parent_sets()[slot].intervals().iter().flat_map(|&(lo, hi)| [lo, hi + 1]))
        .filter(|&b| b > 0 && b < len)
        .collect();
    candidates.sort_unstable();
    candidates.dedup();

    candidates
        .into_iter()
        .filter(|&b| {
            let below = rows.iter().filter(|r| r.parent_sets()[slot].contains(b - 1));
            below.into_iter().any(|r1| {
                rows.iter()
                    .filter(|r2| r2.parent_sets()[slot].contains(b))
                    .any(|r2| {
                        !r1.ranking.same_order(&r2.ranking)
                            && r1
                                .parent_sets()
                                .iter()
                                .zip(r2.parent_sets())
                                .enumerate()
                                .all(|(t, (s1, s2))| t == slot || s1.intersects(s2))
                    })
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MlReport {
    pub is_more_or_less: bool,
    pub variables: Vec<MonotonicityReport>,
}

impl MlReport {
    pub fn get(&self, x: VarId) -> &MonotonicityReport {
        &self.variables[x.0]
    }

    pub fn offending(&self) -> impl Iterator<Item = &MonotonicityReport> {
        self.variables.iter().filter(|r| !r.is_monotonic)
    }

    /// Category of `v` for variable `x`; only meaningful on a more-or-less net.
    pub fn category(&self, x: VarId, v: Value) -> Category {
        self.variables[x.0]
            .category(v)
            .expect("category queried on a variable without a break point")
    }

    /// One `key=value` line per variable.
    pub fn key_values(&self, net: &CpNet) -> String {
        let mut out = String::new();
        for r in &self.variables {
            let c = r
                .break_point
                .map(|c| net.token(r.var, c).into_owned())
                .unwrap_or_else(|| "-".into());
            let less = if r.break_point.is_some() {
                format_values(net, r.var, &r.less)
            } else {
                "-".into()
            };
            out.push_str(&format!(
                "{} monotonic={} c={c} less={less} c-default={}\n",
                r.name, r.is_monotonic, r.c_default
            ));
        }
        out
    }

    pub fn render(&self, net: &CpNet) -> String {
        let mut out = format!(
            "more-or-less: {}\n",
            if self.is_more_or_less { "yes" } else { "NO" }
        );
        for r in &self.variables {
            let dirs: Vec<String> = r
                .direction_by_row
                .iter()
                .map(|d| d.map_or_else(|| "?".to_string(), |d| d.to_string()))
                .collect();
            out.push_str(&format!("  {}: ", r.name));
            if r.is_monotonic {
                let c = net.token(r.var, r.break_point.unwrap());
                out.push_str(&format!(
                    "monotonic [{}], c={c}{}, less={}, more={}\n",
                    dirs.join(" "),
                    if r.c_default { " (default)" } else { "" },
                    format_values(net, r.var, &r.less),
                    format_values(net, r.var, &r.more),
                ));
            } else {
                out.push_str(&format!(
                    "NOT monotonic: {}\n",
                    r.failure.as_ref().map(ToString::to_string).unwrap_or_default()
                ));
            }
        }
        out
    }
}

fn format_values(net: &CpNet, x: VarId, set: &IntervalSet) -> String {
    let domain = &net.var(x).domain;
    if domain.is_range() {
        set.intervals()
            .iter()
            .map(|&(lo, hi)| format!("{}..{}", domain.token(lo), domain.token(hi)))
            .collect::<Vec<_>>()
            .join(",")
    } else {
        let values: Vec<_> = set
            .intervals()
            .iter()
            .flat_map(|&(lo, hi)| lo..=hi)
            .map(|v| domain.token(v).into_owned())
            .collect();
        format!("{{{}}}", values.join(","))
    }
}

pub fn check_more_or_less(net: &CpNet) -> MlReport {
    let variables: Vec<MonotonicityReport> = net.var_ids().map(|x| check_monotonic(net, x)).collect();
    MlReport {
        is_more_or_less: variables.iter().all(|r| r.is_monotonic),
        variables,
    }
}

//! Dominance testing for more-or-less CP-nets.
//!
//! For a query "does `better` dominate `worse`", every variable gets a
//! representative set: one value from each of its categories, always
//! containing `better`'s value. Restricting flips to representative values
//! keeps the search to at most three values per variable (`worse`'s value plus
//! the two representatives) without losing completeness.

mod search;
mod skip;

pub use search::{
    dominates, dominates_in, dominates_naive, dominates_rep_exhaustive, DominanceResult, RepExhaustiveResult,
    SearchOptions, SearchStats, DEFAULT_MAX_EXPANSIONS, REP_COMBINATION_CAP,
};
pub use skip::{is_skip_flipping, reduce_to_skip, reduce_to_skip_with};

use std::fmt;

use crate::analysis::{check_more_or_less, Category, MlReport};
use crate::error::{Error, Result};
use crate::model::{CpNet, Outcome, Value, VarId};

/// A net that passed the more-or-less check, bundled with its analysis.
#[derive(Clone, Debug)]
pub struct MoreOrLessNet<'a> {
    net: &'a CpNet,
    report: MlReport,
}

impl<'a> MoreOrLessNet<'a> {
    pub fn new(net: &'a CpNet) -> Result<Self> {
        Self::from_report(net, check_more_or_less(net))
    }

    pub fn from_report(net: &'a CpNet, report: MlReport) -> Result<Self> {
        if !net.is_acyclic() {
            return Err(Error::Structure("parent graph has a cycle".into()));
        }
        if !report.is_more_or_less {
            let names: Vec<String> = report
                .offending()
                .map(|r| match &r.failure {
                    Some(f) => format!("`{}` ({f})", r.name),
                    None => format!("`{}`", r.name),
                })
                .collect();
            return Err(Error::NotMoreOrLess(format!("not monotonic: {}", names.join(", "))));
        }
        Ok(MoreOrLessNet { net, report })
    }

    pub fn net(&self) -> &'a CpNet {
        self.net
    }

    pub fn report(&self) -> &MlReport {
        &self.report
    }

    pub fn category(&self, x: VarId, v: Value) -> Category {
        self.report.category(x, v)
    }

    fn break_point(&self, x: VarId) -> Value {
        self.report.get(x).break_point.expect("monotonic variable")
    }

    /// Values of `x` in category `cat`, in declared order.
    fn values_in(&self, x: VarId, cat: Category) -> std::ops::RangeInclusive<Value> {
        let c = self.break_point(x);
        match cat {
            Category::Less => 0..=c,
            Category::More => c + 1..=self.net.var(x).domain.last(),
        }
    }

    /// The value of `cat` adjacent to the break point.
    fn adjacent_to_break(&self, x: VarId, cat: Category) -> Value {
        let c = self.break_point(x);
        match cat {
            Category::Less => c,
            Category::More => c + 1,
        }
    }
}

/// One value from each category of a variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RepresentativeSet {
    pub var: VarId,
    pub less: Value,
    pub more: Value,
}

impl RepresentativeSet {
    /// Builds the set from two values, which must lie in different categories.
    pub fn new(ml: &MoreOrLessNet<'_>, var: VarId, a: Value, b: Value) -> Result<Self> {
        match (ml.category(var, a), ml.category(var, b)) {
            (Category::Less, Category::More) => Ok(RepresentativeSet { var, less: a, more: b }),
            (Category::More, Category::Less) => Ok(RepresentativeSet { var, less: b, more: a }),
            _ => Err(Error::BadRepMap(format!(
                "{} and {} are in the same category of `{}`",
                ml.net.token(var, a),
                ml.net.token(var, b),
                ml.net.var(var).name
            ))),
        }
    }

    pub fn value_in(&self, cat: Category) -> Value {
        match cat {
            Category::Less => self.less,
            Category::More => self.more,
        }
    }

    pub fn contains(&self, v: Value) -> bool {
        v == self.less || v == self.more
    }

    pub fn display<'n>(&self, net: &'n CpNet) -> impl fmt::Display + 'n {
        let (x, less, more) = (self.var, self.less, self.more);
        DisplayRep { net, x, less, more }
    }
}

struct DisplayRep<'n> {
    net: &'n CpNet,
    x: VarId,
    less: Value,
    more: Value,
}

impl fmt::Display for DisplayRep<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}, {}}}", self.net.token(self.x, self.less), self.net.token(self.x, self.more))
    }
}

/// Representative sets for every variable of a query.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RepMap {
    sets: Vec<RepresentativeSet>,
}

impl RepMap {
    pub fn new(sets: Vec<RepresentativeSet>) -> Self {
        RepMap { sets }
    }

    /// The default choice: forced values where the constraints force them,
    /// otherwise the opposite-category value next to the break point.
    pub fn default_for(ml: &MoreOrLessNet<'_>, worse: &Outcome, better: &Outcome) -> RepMap {
        let sets = ml
            .net
            .var_ids()
            .map(|x| {
                let (u, w) = (worse.get(x), better.get(x));
                let (cu, cw) = (ml.category(x, u), ml.category(x, w));
                let free = if cu != cw { u } else { ml.adjacent_to_break(x, cw.other()) };
                RepresentativeSet::new(ml, x, w, free).expect("values lie in different categories")
            })
            .collect();
        RepMap { sets }
    }

    pub fn get(&self, x: VarId) -> &RepresentativeSet {
        &self.sets[x.0]
    }

    pub fn sets(&self) -> &[RepresentativeSet] {
        &self.sets
    }

    /// Checks the constraints tying a map to the endpoints of a query:
    /// `better(X)` is always a member, and `worse(X)` is a member exactly when
    /// the two lie in different categories or are equal.
    pub fn validate(&self, ml: &MoreOrLessNet<'_>, worse: &Outcome, better: &Outcome) -> Result<()> {
        if self.sets.len() != ml.net.len() {
            return Err(Error::BadRepMap(format!(
                "{} sets for {} variables",
                self.sets.len(),
                ml.net.len()
            )));
        }
        for x in ml.net.var_ids() {
            let set = &self.sets[x.0];
            let name = &ml.net.var(x).name;
            if set.var != x {
                return Err(Error::BadRepMap(format!("set for `{name}` is misplaced")));
            }
            if ml.category(x, set.less) != Category::Less || ml.category(x, set.more) != Category::More {
                return Err(Error::BadRepMap(format!("set for `{name}` is not one value per category")));
            }
            let (u, w) = (worse.get(x), better.get(x));
            if !set.contains(w) {
                return Err(Error::BadRepMap(format!("set for `{name}` misses the target value")));
            }
            let forced = ml.category(x, u) != ml.category(x, w) || u == w;
            if set.contains(u) != forced {
                return Err(Error::BadRepMap(format!(
                    "set for `{name}` {} the start value",
                    if forced { "misses" } else { "must not contain" }
                )));
            }
        }
        Ok(())
    }

    pub fn render(&self, net: &CpNet) -> String {
        self.sets
            .iter()
            .map(|s| format!("{}:{}", net.var(s.var).name, s.display(net)))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Every representative set of `x` admissible for the query (`worse`, `better`),
/// ordered by the free value's position in the declared order.
pub fn representative_candidates(
    ml: &MoreOrLessNet<'_>,
    x: VarId,
    worse: &Outcome,
    better: &Outcome,
) -> Vec<RepresentativeSet> {
    let (u, w) = (worse.get(x), better.get(x));
    let (cu, cw) = (ml.category(x, u), ml.category(x, w));
    if cu != cw {
        return vec![RepresentativeSet::new(ml, x, u, w).expect("different categories")];
    }
    ml.values_in(x, cw.other())
        .map(|free| RepresentativeSet::new(ml, x, w, free).expect("different categories"))
        .collect()
}

fn category_flip(
    ml: &MoreOrLessNet<'_>,
    o: &Outcome,
    x: VarId,
    rep: &RepresentativeSet,
    same: bool,
) -> Result<Option<Outcome>> {
    let cur = o.get(x);
    let cat = ml.category(x, cur);
    let target = rep.value_in(if same { cat } else { cat.other() });
    if target == cur || !ml.net.lookup_ranking(x, o)?.prefers(target, cur) {
        return Ok(None);
    }
    Ok(Some(o.with(x, target)))
}

/// Flips `x` to the representative in its current category, if that improves.
pub fn flip_in_category(
    ml: &MoreOrLessNet<'_>,
    o: &Outcome,
    x: VarId,
    rep: &RepresentativeSet,
) -> Result<Option<Outcome>> {
    category_flip(ml, o, x, rep, true)
}

/// Flips `x` to the representative in its other category, if that improves.
pub fn flip_out_category(
    ml: &MoreOrLessNet<'_>,
    o: &Outcome,
    x: VarId,
    rep: &RepresentativeSet,
) -> Result<Option<Outcome>> {
    category_flip(ml, o, x, rep, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_cpnet;

    fn fig4() -> CpNet {
        parse_cpnet(include_str!("../../fixtures/fig4.mlcp")).unwrap()
    }

    fn o(net: &CpNet, s: &str) -> Outcome {
        let (x, y) = s.split_at(1);
        net.parse_outcome(&format!("X={x},Y={y}")).unwrap()
    }

    fn tokens(net: &CpNet, sets: &[RepresentativeSet]) -> Vec<String> {
        sets.iter().map(|s| s.display(net).to_string()).collect()
    }

    #[test]
    fn candidates_follow_the_worked_example() {
        let net = fig4();
        let ml = MoreOrLessNet::new(&net).unwrap();
        let (x, y) = (net.var_id("X").unwrap(), net.var_id("Y").unwrap());
        assert_eq!(
            tokens(&net, &representative_candidates(&ml, x, &o(&net, "4b"), &o(&net, "6a"))),
            ["{1, 6}", "{2, 6}", "{3, 6}"]
        );
        assert_eq!(
            tokens(&net, &representative_candidates(&ml, x, &o(&net, "1a"), &o(&net, "5b"))),
            ["{1, 5}"]
        );
        assert_eq!(
            tokens(&net, &representative_candidates(&ml, y, &o(&net, "1a"), &o(&net, "5b"))),
            ["{a, b}"]
        );
        // Equal values: the free slot ranges over the other category.
        assert_eq!(
            tokens(&net, &representative_candidates(&ml, x, &o(&net, "5a"), &o(&net, "5b"))),
            ["{1, 5}", "{2, 5}", "{3, 5}"]
        );
    }

    #[test]
    fn default_map_uses_the_value_next_to_the_break_point() {
        let net = fig4();
        let ml = MoreOrLessNet::new(&net).unwrap();
        let reps = RepMap::default_for(&ml, &o(&net, "4b"), &o(&net, "6a"));
        assert_eq!(reps.render(&net), "X:{3, 6} Y:{a, b}");
        reps.validate(&ml, &o(&net, "4b"), &o(&net, "6a")).unwrap();
        let reps = RepMap::default_for(&ml, &o(&net, "1a"), &o(&net, "2a"));
        // 1 and 2 share `less`, so the free value is 4, just above c = 3.
        assert_eq!(reps.render(&net), "X:{2, 4} Y:{a, b}");
    }

    #[test]
    fn validate_rejects_bad_maps() {
        let net = fig4();
        let ml = MoreOrLessNet::new(&net).unwrap();
        let x = net.var_id("X").unwrap();
        let y = net.var_id("Y").unwrap();
        let (worse, better) = (o(&net, "4b"), o(&net, "6a"));
        let ya = RepresentativeSet::new(&ml, y, 0, 1).unwrap();
        // 4 and 6 share a category, so 4 must not be a representative.
        let with_start = RepMap::new(vec![RepresentativeSet::new(&ml, x, 2, 3).unwrap(), ya]);
        assert!(matches!(with_start.validate(&ml, &worse, &better), Err(Error::BadRepMap(_))));
        let no_target = RepMap::new(vec![RepresentativeSet::new(&ml, x, 0, 4).unwrap(), ya]);
        assert!(no_target.validate(&ml, &worse, &better).is_err());
        assert!(RepresentativeSet::new(&ml, x, 0, 1).is_err());
    }

    #[test]
    fn category_flips() {
        let net = fig4();
        let ml = MoreOrLessNet::new(&net).unwrap();
        let (x, y) = (net.var_id("X").unwrap(), net.var_id("Y").unwrap());
        let rep36 = RepresentativeSet::new(&ml, x, 2, 5).unwrap();
        let rep15 = RepresentativeSet::new(&ml, x, 0, 4).unwrap();
        let rep_y = RepresentativeSet::new(&ml, y, 0, 1).unwrap();

        assert_eq!(flip_in_category(&ml, &o(&net, "4b"), x, &rep36).unwrap(), Some(o(&net, "6b")));
        assert_eq!(flip_in_category(&ml, &o(&net, "6b"), x, &rep36).unwrap(), None);
        assert_eq!(flip_in_category(&ml, &o(&net, "2a"), x, &rep15).unwrap(), None);

        assert_eq!(flip_out_category(&ml, &o(&net, "1b"), x, &rep15).unwrap(), Some(o(&net, "5b")));
        assert_eq!(flip_out_category(&ml, &o(&net, "1a"), y, &rep_y).unwrap(), Some(o(&net, "1b")));
        assert_eq!(flip_out_category(&ml, &o(&net, "5b"), x, &rep15).unwrap(), None);
    }

    #[test]
    fn non_ml_net_is_refused() {
        let net = parse_cpnet(include_str!("../../fixtures/fig6a.mlcp")).unwrap();
        match MoreOrLessNet::new(&net) {
            Err(Error::NotMoreOrLess(msg)) => assert!(msg.contains("meetingTime"), "{msg}"),
            other => panic!("{other:?}"),
        }
    }
}

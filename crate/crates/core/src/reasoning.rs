//! Optimization and ordering queries, both linear in the number of variables
//! per outcome.

use crate::error::{Error, Result};
use crate::model::{CpNet, Outcome, Value};

fn require_acyclic(net: &CpNet) -> Result<()> {
    if net.is_acyclic() {
        Ok(())
    } else {
        Err(Error::Structure("parent graph has a cycle".into()))
    }
}

/// The optimal completion of `partial` (one entry per variable, `None` for
/// unassigned): assigned values are kept, and each free variable takes its
/// best value given its parents, in topological order.
pub fn optimize(net: &CpNet, partial: &[Option<Value>]) -> Result<Outcome> {
    require_acyclic(net)?;
    if partial.len() != net.len() {
        return Err(Error::Outcome(format!(
            "partial assignment covers {} variables, the net has {}",
            partial.len(),
            net.len()
        )));
    }
    let mut current = Outcome::from_values_unchecked(vec![0; net.len()]);
    for &x in net.topological_order() {
        let v = match partial[x.0] {
            Some(v) if (v as usize) < net.var(x).domain.len() => v,
            Some(_) => {
                return Err(Error::Outcome(format!(
                    "value index out of range for `{}`",
                    net.var(x).name
                )))
            }
            None => net.lookup_ranking(x, &current)?.best(),
        };
        current.set(x, v);
    }
    Ok(current)
}

/// Sound test for whether some ranking consistent with the net places `o`
/// above `p`: a differing variable whose parents all agree is preferred in
/// `o`. When it holds, `o` is not dominated by `p`.
pub fn can_order_before(net: &CpNet, o: &Outcome, p: &Outcome) -> Result<bool> {
    require_acyclic(net)?;
    if o == p {
        return Err(Error::Precondition("cannot order an outcome against itself".into()));
    }
    let differs = o.diff(p);
    for &x in &differs {
        let minimal = net.var(x).parents.iter().all(|q| o.get(*q) == p.get(*q));
        if minimal && net.lookup_ranking(x, o)?.prefers(o.get(x), p.get(x)) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Orders distinct outcomes so that no outcome comes before one that
/// dominates it. Outcomes are compared at their first differing variable in
/// topological order, whose parents then agree; this is a strict total order
/// in which a dominated outcome always comes later.
pub fn order_outcomes(net: &CpNet, outcomes: &[Outcome]) -> Result<Vec<Outcome>> {
    require_acyclic(net)?;
    let mut out: Vec<Outcome> = Vec::with_capacity(outcomes.len());
    for o in outcomes {
        // Insertion: place `o` before the first element it may precede.
        let mut at = out.len();
        for (i, q) in out.iter().enumerate() {
            if q == o {
                return Err(Error::Precondition(format!(
                    "duplicate outcome {}",
                    net.format_outcome(o)
                )));
            }
            if at == out.len() && first_difference_prefers(net, o, q)? {
                at = i;
            }
        }
        out.insert(at, o.clone());
    }
    Ok(out)
}

fn first_difference_prefers(net: &CpNet, o: &Outcome, p: &Outcome) -> Result<bool> {
    for &x in net.topological_order() {
        if o.get(x) != p.get(x) {
            return Ok(net.lookup_ranking(x, o)?.prefers(o.get(x), p.get(x)));
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{improving_flips, oracle_dominates, DEFAULT_CAP};
    use crate::parse::parse_cpnet;

    fn fig4() -> CpNet {
        parse_cpnet(include_str!("../fixtures/fig4.mlcp")).unwrap()
    }

    fn o(net: &CpNet, s: &str) -> Outcome {
        let (x, y) = s.split_at(1);
        net.parse_outcome(&format!("X={x},Y={y}")).unwrap()
    }

    #[test]
    fn forward_sweep() {
        let net = fig4();
        let best = optimize(&net, &[None, None]).unwrap();
        assert_eq!(best, o(&net, "6a"));
        assert!(improving_flips(&net, &best).unwrap().is_empty());
        let partial = net.parse_assignment("X=2").unwrap();
        assert_eq!(optimize(&net, &partial).unwrap(), o(&net, "2b"));

        let meeting = parse_cpnet(include_str!("../fixtures/fig1.mlcp")).unwrap();
        let best = optimize(&meeting, &vec![None; meeting.len()]).unwrap();
        assert_eq!(meeting.format_outcome(&best), "Time=8am,Location=conference");
    }

    #[test]
    fn ordering_certificate() {
        let net = fig4();
        assert!(can_order_before(&net, &o(&net, "6a"), &o(&net, "1a")).unwrap());
        assert!(!can_order_before(&net, &o(&net, "1a"), &o(&net, "6a")).unwrap());
        assert!(!can_order_before(&net, &o(&net, "1b"), &o(&net, "2a")).unwrap());
        assert!(!oracle_dominates(&net, &o(&net, "2a"), &o(&net, "1b"), DEFAULT_CAP).unwrap());
        assert!(can_order_before(&net, &o(&net, "1a"), &o(&net, "1a")).is_err());
    }

    #[test]
    fn ordering_respects_dominance() {
        let net = fig4();
        let items = [o(&net, "1a"), o(&net, "6a"), o(&net, "5b")];
        let ordered = order_outcomes(&net, &items).unwrap();
        let pos = |s: &str| ordered.iter().position(|q| *q == o(&net, s)).unwrap();
        assert!(pos("6a") < pos("1a"));
        assert!(pos("5b") < pos("1a"));
        assert_eq!(order_outcomes(&net, &items[..1]).unwrap(), items[..1]);
        assert!(order_outcomes(&net, &[o(&net, "1a"), o(&net, "1a")]).is_err());
    }
}

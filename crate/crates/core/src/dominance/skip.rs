//! Skip-flipping sequences and the reduction that produces them.

use crate::error::{Error, Result};
use crate::model::{Outcome, Value, VarId};
use crate::oracle::{is_improving_sequence, removable_block};

use super::{MoreOrLessNet, RepMap, RepresentativeSet};

/// Whether every flip of `seq` lands on a representative value. `seq` must be
/// an irreducible improving sequence and `reps` must be admissible for its
/// endpoints; each violated precondition has its own error.
pub fn is_skip_flipping(ml: &MoreOrLessNet<'_>, seq: &[Outcome], reps: &RepMap) -> Result<bool> {
    let net = ml.net();
    let (first, last) = endpoints(seq)?;
    if !is_improving_sequence(net, seq)? {
        return Err(Error::NotImproving("a step is not a single improving flip".into()));
    }
    if let Some((i, j)) = removable_block(net, seq)? {
        return Err(Error::NotIrreducible(format!(
            "outcomes {}..{} can be removed",
            i + 2,
            j
        )));
    }
    reps.validate(ml, first, last)?;
    Ok(flips_stay_in(seq, reps))
}

fn endpoints(seq: &[Outcome]) -> Result<(&Outcome, &Outcome)> {
    match (seq.first(), seq.last()) {
        (Some(a), Some(b)) => Ok((a, b)),
        _ => Err(Error::Precondition("empty flipping sequence".into())),
    }
}

fn flips_stay_in(seq: &[Outcome], reps: &RepMap) -> bool {
    seq.windows(2).all(|w| {
        w[0].diff(&w[1])
            .into_iter()
            .all(|x| reps.get(x).contains(w[1].get(x)))
    })
}

/// Rewrites an irreducible improving sequence into a skip-flipping one with
/// the same endpoints, using the default representative sets.
pub fn reduce_to_skip(ml: &MoreOrLessNet<'_>, seq: &[Outcome]) -> Result<Vec<Outcome>> {
    let (first, last) = endpoints(seq)?;
    let reps = RepMap::default_for(ml, first, last);
    reduce_to_skip_with(ml, seq, &reps)
}

/// As [`reduce_to_skip`], with caller-chosen representative sets.
///
/// Each variable's trajectory is rewritten independently, keeping its
/// category at every position, so every other variable sees the same
/// contexts and its flips stay improving:
///
/// * start and end in different categories: each value becomes the endpoint
///   value of its category;
/// * equal endpoints: the endpoint's category maps to the endpoint value, the
///   other category to the free representative;
/// * same category, different values: the start value is held until the
///   variable first leaves the category, after which the endpoint category
///   maps to the end value and the other to the free representative. If it
///   never leaves, the start value is held until the first flip of the
///   variable made in a context that prefers the end value to the start.
///
/// The result is checked to be improving, irreducible and skip-flipping; a
/// failure is reported as an invariant violation rather than repaired.
pub fn reduce_to_skip_with(ml: &MoreOrLessNet<'_>, seq: &[Outcome], reps: &RepMap) -> Result<Vec<Outcome>> {
    let net = ml.net();
    let (first, last) = endpoints(seq)?;
    if !is_improving_sequence(net, seq)? {
        return Err(Error::NotImproving("reduction needs an improving sequence".into()));
    }
    if removable_block(net, seq)?.is_some() {
        return Err(Error::NotIrreducible("reduction needs an irreducible sequence".into()));
    }
    reps.validate(ml, first, last)?;

    let columns = net
        .var_ids()
        .map(|x| map_trajectory(ml, seq, x, reps.get(x)))
        .collect::<Result<Vec<_>>>()?;
    let mut out: Vec<Outcome> = Vec::with_capacity(seq.len());
    for pos in 0..seq.len() {
        let values: Vec<Value> = columns.iter().map(|col| col[pos]).collect();
        let o = Outcome::from_values_unchecked(values);
        if out.last() != Some(&o) {
            out.push(o);
        }
    }
    // Collapsing repeats can open shortcuts; close them. Deleting a block
    // keeps later outcomes only, so landed-on values stay representative.
    while let Some((i, j)) = removable_block(net, &out)? {
        out.drain(i + 1..j);
    }

    let ok = out.first() == Some(first)
        && out.last() == Some(last)
        && is_improving_sequence(net, &out)?
        && flips_stay_in(&out, reps);
    if !ok {
        return Err(Error::Invariant(format!(
            "skip-flipping reduction failed for {} -> {}",
            net.format_outcome(first),
            net.format_outcome(last)
        )));
    }
    Ok(out)
}

fn map_trajectory(
    ml: &MoreOrLessNet<'_>,
    seq: &[Outcome],
    x: VarId,
    rep: &RepresentativeSet,
) -> Result<Vec<Value>> {
    let (u, w) = (seq[0].get(x), seq[seq.len() - 1].get(x));
    let (cu, cw) = (ml.category(x, u), ml.category(x, w));
    let cat = |o: &Outcome| ml.category(x, o.get(x));

    if cu != cw {
        return Ok(seq.iter().map(|o| if cat(o) == cu { u } else { w }).collect());
    }
    let free = rep.value_in(cw.other());
    if u == w {
        return Ok(seq.iter().map(|o| if cat(o) == cu { u } else { free }).collect());
    }

    if let Some(exit) = seq.iter().position(|o| cat(o) != cu) {
        return Ok(seq
            .iter()
            .enumerate()
            .map(|(pos, o)| match (pos < exit, cat(o) == cu) {
                (true, _) => u,
                (false, true) => w,
                (false, false) => free,
            })
            .collect());
    }

    // Never leaves its category: X's value changes nothing else, so the one
    // flip u -> w can sit at any X-flip whose context prefers w to u.
    let net = ml.net();
    let mut switch = None;
    for (i, pair) in seq.windows(2).enumerate() {
        if pair[0].get(x) != pair[1].get(x) && net.lookup_ranking(x, &pair[0])?.prefers(w, u) {
            switch = Some(i);
            break;
        }
    }
    let switch = switch.ok_or_else(|| {
        Error::Invariant(format!(
            "`{}` moves from {} to {} without a flip favouring the end value",
            net.var(x).name,
            net.token(x, u),
            net.token(x, w)
        ))
    })?;
    Ok((0..seq.len()).map(|pos| if pos <= switch { u } else { w }).collect())
}

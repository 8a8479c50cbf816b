//! Seeded random more-or-less CP-nets.

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{Condition, CpNet, Cpt, CptRow, Domain, Outcome, Ranking, Value, VarId, Variable};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenSpec {
    pub n_vars: usize,
    /// Domain sizes are drawn from `2..=max_domain`.
    pub max_domain: usize,
    pub max_parents: usize,
    pub seed: u64,
}

impl GenSpec {
    pub fn new(n_vars: usize, max_domain: usize, max_parents: usize, seed: u64) -> Result<Self> {
        let spec = GenSpec {
            n_vars,
            max_domain,
            max_parents,
            seed,
        };
        spec.check()?;
        Ok(spec)
    }

    fn check(&self) -> Result<()> {
        if self.n_vars == 0 {
            return Err(Error::Invalid("a net needs at least one variable".into()));
        }
        if self.max_domain < 2 {
            return Err(Error::Invalid("domains need at least two values".into()));
        }
        if self.max_parents >= self.n_vars {
            return Err(Error::Invalid(format!(
                "{} parents is too many for {} variables",
                self.max_parents, self.n_vars
            )));
        }
        Ok(())
    }
}

/// A random net that is more-or-less by construction: every variable gets a
/// break point, and each CPT has one row per combination of its parents'
/// categories, ranked ascending or descending at random.
pub fn random_ml_net(spec: GenSpec) -> Result<CpNet> {
    spec.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n = spec.n_vars;

    // Build the DAG over generation order, then declare variables in a
    // shuffled order so declaration order is not always topological.
    let mut declared: Vec<usize> = (0..n).collect();
    declared.shuffle(&mut rng);
    let slot_of = |g: usize| VarId(declared[g]);

    let mut sizes = Vec::with_capacity(n);
    let mut breaks = Vec::with_capacity(n);
    let mut vars: Vec<Option<Variable>> = vec![None; n];
    let mut parent_lists = Vec::with_capacity(n);
    for g in 0..n {
        let size = rng.gen_range(2..=spec.max_domain);
        let domain = if rng.gen_bool(0.5) {
            let lo = rng.gen_range(0..=10i64);
            Domain::range(lo, lo + size as i64 - 1)?
        } else {
            Domain::list((0..size).map(value_name))?
        };
        let k = rng.gen_range(0..=spec.max_parents.min(g));
        let mut parents: Vec<usize> = index::sample(&mut rng, g.max(1), k).into_vec();
        parents.sort_unstable();
        sizes.push(size);
        breaks.push(rng.gen_range(0..size as Value - 1));
        vars[declared[g]] = Some(Variable {
            name: format!("V{g}"),
            domain,
            parents: parents.iter().map(|&p| slot_of(p)).collect(),
        });
        parent_lists.push(parents);
    }

    let mut cpts = Vec::with_capacity(n);
    for g in 0..n {
        let parents = &parent_lists[g];
        let mut rows = Vec::with_capacity(1 << parents.len());
        for mask in 0..(1usize << parents.len()) {
            let conditions = parents
                .iter()
                .enumerate()
                .map(|(i, &p)| {
                    let (c, last) = (breaks[p], sizes[p] as Value - 1);
                    let (lo, hi) = if mask >> i & 1 == 0 { (0, c) } else { (c + 1, last) };
                    if lo == hi {
                        Condition::Eq(lo)
                    } else {
                        Condition::Range(lo, hi)
                    }
                })
                .collect();
            let ranking = if rng.gen_bool(0.5) {
                Ranking::asc(sizes[g])
            } else {
                Ranking::desc(sizes[g])
            };
            rows.push(CptRow::new(conditions, ranking));
        }
        cpts.push(Cpt { var: slot_of(g), rows });
    }

    let vars = vars.into_iter().map(|v| v.expect("every slot filled")).collect();
    CpNet::new(format!("random{}", spec.seed), vars, cpts)
}

fn value_name(i: usize) -> String {
    if i < 26 {
        char::from(b'a' + i as u8).to_string()
    } else {
        format!("v{i}")
    }
}

/// A uniformly random outcome of `net`.
pub fn random_outcome<R: Rng>(net: &CpNet, rng: &mut R) -> Outcome {
    let values = net
        .var_ids()
        .map(|x| rng.gen_range(0..net.var(x).domain.len() as Value))
        .collect();
    Outcome::from_values_unchecked(values)
}

/// A random partial assignment: each variable is left free with probability
/// one half.
pub fn random_partial<R: Rng>(net: &CpNet, rng: &mut R) -> Vec<Option<Value>> {
    net.var_ids()
        .map(|x| {
            rng.gen_bool(0.5)
                .then(|| rng.gen_range(0..net.var(x).domain.len() as Value))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::check_more_or_less;
    use crate::parse::serialize_cpnet;
    use crate::structure::validate_structure;

    #[test]
    fn generated_nets_are_valid_and_more_or_less() {
        for seed in 0..200 {
            let spec = GenSpec::new(1 + (seed as usize % 6), 2 + (seed as usize % 7), 0, seed).unwrap();
            let spec = GenSpec {
                max_parents: (seed as usize % 3).min(spec.n_vars - 1),
                ..spec
            };
            let net = random_ml_net(spec).unwrap();
            assert!(validate_structure(&net).is_valid(), "seed {seed}");
            assert!(check_more_or_less(&net).is_more_or_less, "seed {seed}");
            assert!(net.variables().iter().all(|v| v.parents.len() <= spec.max_parents));
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let spec = GenSpec::new(3, 6, 2, 1).unwrap();
        assert_eq!(
            serialize_cpnet(&random_ml_net(spec).unwrap()),
            serialize_cpnet(&random_ml_net(spec).unwrap())
        );
    }

    #[test]
    fn domain_two_gives_binary_nets() {
        let net = random_ml_net(GenSpec::new(5, 2, 2, 3).unwrap()).unwrap();
        assert!(net.variables().iter().all(|v| v.domain.len() == 2));
    }

    #[test]
    fn invalid_specs() {
        assert!(GenSpec::new(0, 3, 0, 0).is_err());
        assert!(GenSpec::new(3, 1, 0, 0).is_err());
        assert!(GenSpec::new(3, 3, 3, 0).is_err());
    }
}

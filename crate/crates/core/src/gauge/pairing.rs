//! The pairing between extended observables and extended configurations,
//! its compatibility checks, and the separation search.
//!
//! Both ambient groups are laid out block by block over the same keys and
//! simplex bases, so the pairing is a signed dot product: `+φ·A` on star
//! blocks, `−χ·g` on inclusion blocks, and `+χ·g` in degree `−1 / 1`.

use std::collections::BTreeMap;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::abelian::{int, integer, FgAbGroup, Integer, SparseVec};
use crate::error::{Error, Result};
use crate::simplicial::{CoeffGroup, SimplicialComplex};

use super::cover::Blocks;
use super::extended::{
    extended_config_direct, extended_obs_direct, ExtConfig, ExtConfigElement, ExtObs, ExtObsElement,
};
use super::local::PairingValue;

/// Random samples below this size never make a separation run conclusive.
pub const MIN_RANDOM_SAMPLE: usize = 1000;

/// Extended complexes of one `(K, Z/q)` together with the pairing signs.
#[derive(Clone, Debug)]
pub struct PairingContext {
    pub obs: ExtObs,
    pub cfg: ExtConfig,
    q: u64,
    signs: Vec<i64>,
}

fn same_layout(a: &Blocks, b: &Blocks) -> bool {
    a.blocks().len() == b.blocks().len()
        && a.blocks()
            .iter()
            .zip(b.blocks())
            .all(|(x, y)| x.key == y.key && x.offset == y.offset && x.len == y.len)
}

impl PairingContext {
    pub fn new(k: &SimplicialComplex, g: CoeffGroup) -> Result<Self> {
        let q = g.modulus().ok_or(Error::ObservablesNeedCyclic)?;
        let obs = extended_obs_direct(k, g)?;
        let cfg = extended_config_direct(k, g)?;
        if !same_layout(&obs.deg0, &cfg.deg0) || !same_layout(&obs.deg_neg1, &cfg.deg1) {
            return Err(Error::Mismatch(
                "observable and configuration blocks differ".into(),
            ));
        }
        let mut signs = vec![1; cfg.deg0.ngens()];
        for b in cfg.deg0.blocks().iter().filter(|b| b.key.len() == 2) {
            signs[b.offset..b.offset + b.len].fill(-1);
        }
        Ok(PairingContext { obs, cfg, q, signs })
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    fn raw(&self, obs_degree: i64, f: &SparseVec, b: &SparseVec) -> PairingValue {
        let x = if obs_degree == 0 {
            f.iter().fold(int(0), |acc, (i, c)| {
                acc + c * b.get(*i) * int(self.signs[*i])
            })
        } else {
            f.dot(b)
        };
        PairingValue::from_fraction(&x, self.q)
    }

    /// `⟨F, B⟩` on ambient vectors: `F` of degree 0 against a degree-0
    /// configuration (membership checked), or `F` of degree −1 against a
    /// gauge transformation.
    pub fn pair(&self, obs_degree: i64, f: &SparseVec, b: &SparseVec) -> Result<PairingValue> {
        match obs_degree {
            0 => self.cfg.check_membership(b)?,
            -1 => {}
            n => return Err(Error::Mismatch(format!("no observables in degree {n}"))),
        }
        Ok(self.raw(obs_degree, f, b))
    }

    pub fn pair_elements(&self, f: &ExtObsElement, b: &ExtConfigElement) -> Result<PairingValue> {
        let (deg, fv) = self.obs.to_ambient(f)?;
        if deg != 0 {
            return Err(Error::Mismatch(
                "degree −1 observables pair with gauge transformations".into(),
            ));
        }
        self.pair(0, &fv, &self.cfg.to_ambient(b))
    }

    /// `F` of degree −1 against `∏ g_U`.
    pub fn pair_gauge(
        &self,
        f: &ExtObsElement,
        g: &BTreeMap<usize, SparseVec>,
    ) -> Result<PairingValue> {
        let (deg, fv) = self.obs.to_ambient(f)?;
        if deg != -1 && !fv.is_zero() {
            return Err(Error::Mismatch(
                "degree 0 observables pair with configurations".into(),
            ));
        }
        let mut b = SparseVec::new();
        for (&u, x) in g {
            b = b.add(&self.cfg.deg1.embed(&[u], x));
        }
        self.pair(-1, &fv, &b)
    }

    /// Index of the first relation generator pairing nontrivially with `b`.
    pub fn relation_failure(&self, b: &SparseVec) -> Result<Option<usize>> {
        self.cfg.check_membership(b)?;
        Ok(self
            .obs
            .relations
            .iter()
            .position(|r| !self.raw(0, r, b).is_zero()))
    }

    /// `⟨δ*F, B⟩ = ⟨F, δB⟩` for `F` of degree 0 and `B` of degree 1.
    pub fn adjunction_holds(&self, f: &SparseVec, b: &SparseVec) -> bool {
        let df = self.obs.presented.ambient().differential(0).apply_sparse(f);
        let db = self.cfg.presented.ambient().differential(1).apply_sparse(b);
        self.raw(-1, &df, b) == self.raw(0, f, &db)
    }

    /// The group of configurations in degree 0 (gluing kernel) or 1 (gauge transformations).
    pub fn config_group(&self, degree: i64) -> FgAbGroup {
        self.cfg.complex().group(degree)
    }

    /// Every configuration of the given degree, as ambient vectors.
    pub fn all_configs(&self, degree: i64) -> Result<Vec<SparseVec>> {
        let g = self.config_group(degree);
        let orders: Vec<u64> = g.orders().iter().map(finite_order).collect::<Result<_>>()?;
        if orders.is_empty() {
            return Ok(vec![SparseVec::new()]);
        }
        Ok(orders
            .iter()
            .map(|&o| 0..o)
            .multi_cartesian_product()
            .map(|c| self.lift(degree, &c.into_iter().map(Integer::from).collect_vec()))
            .collect())
    }

    pub fn random_config(&self, degree: i64, rng: &mut ChaCha8Rng) -> Result<SparseVec> {
        let coords: Vec<Integer> = self
            .config_group(degree)
            .orders()
            .iter()
            .map(|o| finite_order(o).map(|o| Integer::from(rng.gen_range(0..o))))
            .collect::<Result<_>>()?;
        Ok(self.lift(degree, &coords))
    }

    fn lift(&self, degree: i64, coords: &[Integer]) -> SparseVec {
        self.cfg.presented.lift(degree, coords)
    }

    /// Number of configurations in the given degree.
    pub fn config_count(&self, degree: i64) -> Option<Integer> {
        self.config_group(degree).cardinality()
    }

    /// `label=value` for each nonzero ambient coordinate.
    pub fn describe_config(&self, degree: i64, b: &SparseVec) -> String {
        let g = self.cfg.presented.ambient().group(degree);
        let parts = b
            .iter()
            .map(|(i, c)| format!("{}={c}", g.label(*i)))
            .collect_vec();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(", ")
        }
    }

    /// A basis observable pairing nontrivially with `b`, if any.
    pub fn separating_observable(
        &self,
        degree: i64,
        b: &SparseVec,
    ) -> Option<(usize, PairingValue)> {
        let obs_degree = if degree == 0 { 0 } else { -1 };
        let n = self.obs.presented.ambient().group(obs_degree).ngens();
        (0..n)
            .map(|i| (i, self.raw(obs_degree, &SparseVec::unit(i), b)))
            .find(|(_, v)| !v.is_zero())
    }
}

fn finite_order(o: &Integer) -> Result<u64> {
    integer::to_u64(o)
        .filter(|&o| o > 0)
        .ok_or(Error::Coefficient("enumeration needs finite groups".into()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparationWitness {
    /// Configuration degree: 0 for potentials, 1 for gauge transformations.
    pub degree: i64,
    pub config: String,
    pub observable: String,
    pub value: PairingValue,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeparationOutcome {
    Separated,
    /// A nonzero configuration no observable detects.
    Fails {
        degree: i64,
        config: String,
    },
    /// The budget only allowed a sample too small to count.
    Inconclusive {
        sampled: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparationReport {
    pub outcome: SeparationOutcome,
    /// Per degree, whether every nonzero configuration was tested.
    pub exhaustive: BTreeMap<i64, bool>,
    pub tested: usize,
    pub witnesses: Vec<SeparationWitness>,
}

/// Looks for a separating observable for every nonzero configuration of
/// degree 0 and 1. A degree is enumerated when it has at most `budget`
/// nonzero elements; otherwise `budget` random nonzero elements are drawn
/// from `seed`, and a sample below [`MIN_RANDOM_SAMPLE`] is inconclusive.
pub fn separation_check(
    ctx: &PairingContext,
    seed: u64,
    budget: usize,
) -> Result<SeparationReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SeparationReport {
        outcome: SeparationOutcome::Separated,
        exhaustive: BTreeMap::new(),
        tested: 0,
        witnesses: Vec::new(),
    };
    let mut short_sample = None;
    for degree in [0i64, 1] {
        let nonzero = ctx.config_count(degree).map(|c| c - int(1));
        let exhaustive = nonzero
            .as_ref()
            .is_some_and(|n| *n <= Integer::from(budget));
        report.exhaustive.insert(degree, exhaustive);
        let samples: Vec<SparseVec> = if exhaustive {
            ctx.all_configs(degree)?
                .into_iter()
                .filter(|b| !b.is_zero())
                .collect()
        } else {
            if budget < MIN_RANDOM_SAMPLE {
                short_sample = Some(budget);
            }
            let mut out = Vec::with_capacity(budget);
            let mut attempts = 0usize;
            while out.len() < budget && attempts < budget.saturating_mul(64).max(64) {
                attempts += 1;
                let b = ctx.random_config(degree, &mut rng)?;
                if !b.is_zero() {
                    out.push(b);
                }
            }
            out
        };
        let obs_degree = if degree == 0 { 0 } else { -1 };
        let obs_group = ctx.obs.presented.ambient().group(obs_degree);
        for b in samples {
            report.tested += 1;
            match ctx.separating_observable(degree, &b) {
                Some((i, value)) => report.witnesses.push(SeparationWitness {
                    degree,
                    config: ctx.describe_config(degree, &b),
                    observable: obs_group.label(i),
                    value,
                }),
                None => {
                    report.outcome = SeparationOutcome::Fails {
                        degree,
                        config: ctx.describe_config(degree, &b),
                    };
                    return Ok(report);
                }
            }
        }
    }
    if let Some(sampled) = short_sample {
        report.outcome = SeparationOutcome::Inconclusive { sampled };
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauge::extended::ObsSymbol;

    fn edge() -> SimplicialComplex {
        SimplicialComplex::from_facets(&[&[0, 1]]).unwrap()
    }

    fn path() -> SimplicialComplex {
        SimplicialComplex::from_maximal(&[vec!["v", "w"], vec!["w", "x"]]).unwrap()
    }

    #[test]
    fn edge_pairing_is_the_local_one() {
        let k = edge();
        let ctx = PairingContext::new(&k, CoeffGroup::cyclic(2).unwrap()).unwrap();
        let f = ExtObsElement {
            terms: vec![(
                ObsSymbol::Phi {
                    star: 0,
                    edge: k.simplex_id(&[0, 1]).unwrap(),
                },
                1,
            )],
        };
        let b = ExtConfigElement {
            a: BTreeMap::from([(0, SparseVec::unit(0))]),
            g: BTreeMap::new(),
        };
        assert_eq!(ctx.pair_elements(&f, &b).unwrap().to_string(), "1/2");
        assert!(ctx
            .pair_elements(&ExtObsElement::default(), &b)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn path_relations_and_adjunction_exhaustive() {
        let ctx = PairingContext::new(&path(), CoeffGroup::cyclic(2).unwrap()).unwrap();
        for b in ctx.all_configs(0).unwrap() {
            assert_eq!(ctx.relation_failure(&b).unwrap(), None);
        }
        let n0 = ctx.obs.deg0.ngens();
        let n1 = ctx.cfg.deg1.ngens();
        for i in 0..n0 {
            for j in 0..n1 {
                assert!(ctx.adjunction_holds(&SparseVec::unit(i), &SparseVec::unit(j)));
            }
        }
    }

    #[test]
    fn invalid_configurations_are_rejected() {
        let k = path();
        let ctx = PairingContext::new(&k, CoeffGroup::cyclic(2).unwrap()).unwrap();
        let bad = ExtConfigElement {
            a: BTreeMap::from([(0, SparseVec::unit(0))]),
            g: BTreeMap::new(),
        };
        let f = ExtObsElement {
            terms: vec![(
                ObsSymbol::Phi {
                    star: 0,
                    edge: k.simplex_id(&[0, 1]).unwrap(),
                },
                1,
            )],
        };
        assert!(matches!(
            ctx.pair_elements(&f, &bad),
            Err(Error::Membership(_))
        ));
        assert!(matches!(
            PairingContext::new(&path(), CoeffGroup::Integers),
            Err(Error::ObservablesNeedCyclic)
        ));
    }

    #[test]
    fn separation_exhaustive_and_budgeted() {
        let ctx = PairingContext::new(&path(), CoeffGroup::cyclic(2).unwrap()).unwrap();
        let r = separation_check(&ctx, 7, 1 << 20).unwrap();
        assert_eq!(r.outcome, SeparationOutcome::Separated);
        assert!(r.exhaustive.values().all(|&e| e));
        assert_eq!(r.witnesses.len(), r.tested);
        let small = separation_check(&ctx, 7, 3).unwrap();
        assert_eq!(
            small.outcome,
            SeparationOutcome::Inconclusive { sampled: 3 }
        );
    }
}

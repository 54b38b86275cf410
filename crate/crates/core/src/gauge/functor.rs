//! Pullback of configurations and pushforward of observables along a
//! simplicial isomorphism `f : K → K'`.
//!
//! Stars go to stars, `U ↦ f(U)`, and inclusions to inclusions; on each
//! block a simplex `σ` goes to `f(σ)` with the orientation sign of `f|σ`.

use std::collections::BTreeMap;

use crate::abelian::Matrix;
use crate::complexes::ChainMap;
use crate::error::{Error, Result};
use crate::simplicial::{SimplicialIso, Subcomplex};

use super::cover::{Blocks, Cover, MatrixBuilder};
use super::extended::{ExtConfig, ExtObs};
use super::pairing::PairingContext;

/// Index in `K'`'s star poset of the image of each star of `K`.
pub fn star_image(f: &SimplicialIso, src: &Cover, tgt: &Cover) -> Result<Vec<usize>> {
    (0..src.len())
        .map(|u| {
            let ids: Vec<usize> = src.sub(u).ids().iter().map(|&s| f.simplex_map[s]).collect();
            let image = Subcomplex::closure(tgt.complex(), &ids);
            tgt.stars.find(&image).ok_or_else(|| {
                Error::NotIsomorphism(format!("image of {} is not a star", src.name(u)))
            })
        })
        .collect()
}

/// Signed permutation `src → tgt` sending block `key` to block `f(key)`.
fn transport(f: &SimplicialIso, stars: &[usize], src: &Blocks, tgt: &Blocks) -> Result<Matrix> {
    let mut m = MatrixBuilder::new(tgt.ngens(), src.ngens());
    for b in src.blocks() {
        let key: Vec<usize> = b.key.iter().map(|&u| stars[u]).collect();
        if tgt.get(&key).is_none() {
            return Err(Error::NotIsomorphism(format!(
                "star inclusion {:?} has no image",
                b.key
            )));
        }
        for (i, &s) in b.base.of_dim(b.deg).iter().enumerate() {
            let j = tgt
                .position(&key, f.simplex_map[s])
                .expect("image simplex lies in the image star");
            m.entry(j, b.offset + i, f.signs[s]);
        }
    }
    Ok(m.build())
}

/// `f* : 𝔠^ext(K') → 𝔠^ext(K)`, `(f*B')_U = f^*(B'_{f(U)})`. Returns the
/// verified chain map and its degreewise ambient matrices.
pub fn pullback(
    f: &SimplicialIso,
    src: &ExtConfig,
    tgt: &ExtConfig,
) -> Result<(ChainMap, BTreeMap<i64, Matrix>)> {
    let stars = star_image(f, &src.cover, &tgt.cover)?;
    let ambient = BTreeMap::from([
        (0, transport(f, &stars, &src.deg0, &tgt.deg0)?.transpose()),
        (1, transport(f, &stars, &src.deg1, &tgt.deg1)?.transpose()),
    ]);
    Ok((tgt.presented.chain_map(&src.presented, &ambient)?, ambient))
}

/// `f_* : 𝔒^ext(K) → 𝔒^ext(K')`, `ι_U(φ) ↦ ι_{f(U)}(f_*φ)`.
pub fn pushforward(
    f: &SimplicialIso,
    src: &ExtObs,
    tgt: &ExtObs,
) -> Result<(ChainMap, BTreeMap<i64, Matrix>)> {
    let stars = star_image(f, &src.cover, &tgt.cover)?;
    let ambient = BTreeMap::from([
        (0, transport(f, &stars, &src.deg0, &tgt.deg0)?),
        (-1, transport(f, &stars, &src.deg_neg1, &tgt.deg_neg1)?),
    ]);
    Ok((src.presented.chain_map(&tgt.presented, &ambient)?, ambient))
}

/// Both maps for a pair of pairing contexts on `K` and `K'`.
#[derive(Clone, Debug)]
pub struct Functoriality {
    pub pullback: ChainMap,
    pub pushforward: ChainMap,
    pub pull_ambient: BTreeMap<i64, Matrix>,
    pub push_ambient: BTreeMap<i64, Matrix>,
}

pub fn pushpull_functoriality(
    f: &SimplicialIso,
    k: &PairingContext,
    k2: &PairingContext,
) -> Result<Functoriality> {
    let (pullback, pull_ambient) = self::pullback(f, &k.cfg, &k2.cfg)?;
    let (pushforward, push_ambient) = self::pushforward(f, &k.obs, &k2.obs)?;
    Ok(Functoriality {
        pullback,
        pushforward,
        pull_ambient,
        push_ambient,
    })
}

impl Functoriality {
    /// `⟨F, f*B'⟩_K = ⟨f_*F, B'⟩_{K'}` for ambient `F` (degree 0 or −1) and `B'`.
    pub fn natural_at(
        &self,
        k: &PairingContext,
        k2: &PairingContext,
        obs_degree: i64,
        f: &crate::abelian::SparseVec,
        b2: &crate::abelian::SparseVec,
    ) -> Result<bool> {
        let cfg_degree = if obs_degree == 0 { 0 } else { 1 };
        let pulled = self.pull_ambient[&cfg_degree]
            .apply(b2)
            .reduced(k.cfg.presented.ambient().group(cfg_degree).orders());
        let pushed = self.push_ambient[&obs_degree].apply(f);
        Ok(k.pair(obs_degree, f, &pulled)? == k2.pair(obs_degree, &pushed, b2)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::SparseVec;
    use crate::simplicial::{CoeffGroup, SimplicialComplex};
    use rand::SeedableRng;

    fn sphere() -> SimplicialComplex {
        SimplicialComplex::from_facets(&[&[0, 1, 2], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3]]).unwrap()
    }

    #[test]
    fn identity_gives_identities() {
        let k = sphere();
        let ctx = PairingContext::new(&k, CoeffGroup::cyclic(2).unwrap()).unwrap();
        let id = SimplicialIso::new(&k, &k, (0..4).collect()).unwrap();
        let f = pushpull_functoriality(&id, &ctx, &ctx).unwrap();
        assert!(f.pullback.is_identity() && f.pushforward.is_identity());
    }

    #[test]
    fn transposition_is_natural() {
        let k = sphere();
        let ctx = PairingContext::new(&k, CoeffGroup::cyclic(2).unwrap()).unwrap();
        let t = SimplicialIso::new(&k, &k, vec![1, 0, 2, 3]).unwrap();
        let f = pushpull_functoriality(&t, &ctx, &ctx).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let n_obs = ctx.obs.deg0.ngens();
        for i in 0..50 {
            let b = ctx.random_config(0, &mut rng).unwrap();
            assert!(f
                .natural_at(&ctx, &ctx, 0, &SparseVec::unit(i % n_obs), &b)
                .unwrap());
        }
    }

    #[test]
    fn composition_reverses_order() {
        let k = sphere();
        let ctx = PairingContext::new(&k, CoeffGroup::cyclic(3).unwrap()).unwrap();
        let c = SimplicialIso::new(&k, &k, vec![1, 2, 0, 3]).unwrap();
        let cc = SimplicialIso::new(&k, &k, vec![2, 0, 1, 3]).unwrap();
        let f = pushpull_functoriality(&c, &ctx, &ctx).unwrap();
        let ff = pushpull_functoriality(&cc, &ctx, &ctx).unwrap();
        // (c∘c)* = c*∘c*, and c∘c∘c = id
        assert!(f.pullback.then(&f.pullback).unwrap().same_map(&ff.pullback));
        assert!(ff.pullback.then(&f.pullback).unwrap().is_identity());
        assert!(f
            .pushforward
            .then(&f.pushforward)
            .unwrap()
            .same_map(&ff.pushforward));
    }
}

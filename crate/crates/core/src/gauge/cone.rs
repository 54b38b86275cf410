//! Extension quasi-isomorphisms on a cone: when one star `M` is all of `K`,
//! the extended complexes retract onto the local complexes of `M`.

use std::collections::BTreeMap;

use crate::abelian::{Matrix, Span, Subquotient};
use crate::complexes::{quasi_iso_check, ChainComplex, ChainHomotopy, ChainMap, Presented};
use crate::error::{Error, Result};
use crate::simplicial::{CoeffGroup, SimplicialComplex};

use super::cover::{Cover, MatrixBuilder};
use super::extended::{extended_config_direct, extended_obs_direct, ExtConfig, ExtObs};
use super::local::{local_config_complex, local_obs_complex};

/// The local complex of `K` itself, every degree presented as its whole ambient group.
fn whole(c: &ChainComplex) -> Result<Presented> {
    let parts = c
        .degrees()
        .map(|n| {
            Ok((
                n,
                (Subquotient::new(&c.group(n), Span::All, &[])?, Vec::new()),
            ))
        })
        .collect::<Result<BTreeMap<_, _>>>()?;
    Presented::new(c, parts)
}

fn top_star(cover: &Cover) -> Result<usize> {
    cover.top().ok_or_else(|| {
        Error::NotContractible(format!(
            "no star contains all {} stars of the complex",
            cover.len()
        ))
    })
}

/// `η : 𝔠(M) → 𝔠^ext`, `θ : 𝔠^ext → 𝔠(M)` and `h` with `ηθ − id = δh + hδ`.
#[derive(Clone, Debug)]
pub struct EtaTheta {
    pub top: usize,
    pub local: Presented,
    pub ext: ExtConfig,
    pub eta: ChainMap,
    pub theta: ChainMap,
    pub h: ChainHomotopy,
}

/// `η(A) = (A|_U, 0)`, `η(g) = (g|_U)`; `θ` reads off the `M` components;
/// `h(A, g)_U = g_(U⊂M)`, zero at `U = M`.
pub fn eta_theta(k: &SimplicialComplex, g: CoeffGroup) -> Result<EtaTheta> {
    let ext = extended_config_direct(k, g)?;
    let cover = &ext.cover;
    let m = top_star(cover)?;
    let local = whole(&local_config_complex(k, &k.whole(), g))?;
    let whole_k = k.whole();

    let (mut e0, mut e1) = (
        MatrixBuilder::new(ext.deg0.ngens(), local.ambient().group(0).ngens()),
        MatrixBuilder::new(ext.deg1.ngens(), local.ambient().group(1).ngens()),
    );
    let (mut t0, mut t1) = (
        MatrixBuilder::new(local.ambient().group(0).ngens(), ext.deg0.ngens()),
        MatrixBuilder::new(local.ambient().group(1).ngens(), ext.deg1.ngens()),
    );
    for u in 0..cover.len() {
        e0.add(
            ext.deg0.block(&[u]).offset,
            0,
            &cover.restrict(&whole_k, cover.sub(u), 1),
            1,
        );
        e1.add(
            ext.deg1.block(&[u]).offset,
            0,
            &cover.restrict(&whole_k, cover.sub(u), 0),
            1,
        );
    }
    t0.add_identity(0, ext.deg0.block(&[m]).offset, ext.deg0.block(&[m]).len, 1);
    t1.add_identity(0, ext.deg1.block(&[m]).offset, ext.deg1.block(&[m]).len, 1);
    let eta = local.chain_map(
        &ext.presented,
        &BTreeMap::from([(0, e0.build()), (1, e1.build())]),
    )?;
    let theta = ext
        .presented
        .chain_map(&local, &BTreeMap::from([(0, t0.build()), (1, t1.build())]))?;

    let mut h0 = MatrixBuilder::new(ext.deg1.ngens(), ext.deg0.ngens());
    for u in (0..cover.len()).filter(|&u| u != m) {
        let b = ext.deg0.block(&[u, m]);
        h0.add_identity(ext.deg1.block(&[u]).offset, b.offset, b.len, 1);
    }
    let round = theta.then(&eta)?;
    let id = ChainMap::identity(ext.complex());
    let h = ext.presented.homotopy(
        &ext.presented,
        &round,
        &id,
        &BTreeMap::from([(0, h0.build())]),
    )?;
    Ok(EtaTheta {
        top: m,
        local,
        ext,
        eta,
        theta,
        h,
    })
}

impl EtaTheta {
    /// `θη = id`, the homotopy identity and that `η` is a quasi-isomorphism.
    pub fn verify(&self) -> Result<()> {
        if !self.eta.then(&self.theta)?.is_identity() {
            return Err(Error::Mismatch("θ∘η is not the identity".into()));
        }
        self.h.verify()?;
        if !quasi_iso_check(&self.eta)? {
            return Err(Error::Mismatch("η is not a quasi-isomorphism".into()));
        }
        Ok(())
    }
}

/// `ζ : 𝔒^ext → 𝔒(M)`, `κ : 𝔒(M) → 𝔒^ext` and `k` with `κζ − id = δ*k + kδ*`.
#[derive(Clone, Debug)]
pub struct ZetaKappa {
    pub top: usize,
    pub local: Presented,
    pub ext: ExtObs,
    pub zeta: ChainMap,
    pub kappa: ChainMap,
    pub k: ChainHomotopy,
}

/// `ζ(ι_U φ) = ext_M φ`, `ζ(ι_(U⊂V) χ) = 0`, `ζ(ι_U χ) = ext_M χ`; `κ = ι_M`;
/// `k(ι_U χ) = −ι_(U⊂M) χ`, zero at `U = M`.
pub fn zeta_kappa(k: &SimplicialComplex, g: CoeffGroup) -> Result<ZetaKappa> {
    let ext = extended_obs_direct(k, g)?;
    let cover = &ext.cover;
    let m = top_star(cover)?;
    let local = whole(&local_obs_complex(k, &k.whole(), g)?)?;
    let whole_k = k.whole();
    let (l0, l1) = (
        local.ambient().group(0).ngens(),
        local.ambient().group(-1).ngens(),
    );

    let (mut z0, mut z1) = (
        MatrixBuilder::new(l0, ext.deg0.ngens()),
        MatrixBuilder::new(l1, ext.deg_neg1.ngens()),
    );
    for u in 0..cover.len() {
        z0.add(
            0,
            ext.deg0.block(&[u]).offset,
            &cover.extend(cover.sub(u), &whole_k, 1),
            1,
        );
        z1.add(
            0,
            ext.deg_neg1.block(&[u]).offset,
            &cover.extend(cover.sub(u), &whole_k, 0),
            1,
        );
    }
    let (mut c0, mut c1) = (
        MatrixBuilder::new(ext.deg0.ngens(), l0),
        MatrixBuilder::new(ext.deg_neg1.ngens(), l1),
    );
    c0.add_identity(ext.deg0.block(&[m]).offset, 0, l0, 1);
    c1.add_identity(ext.deg_neg1.block(&[m]).offset, 0, l1, 1);
    let zeta = ext
        .presented
        .chain_map(&local, &BTreeMap::from([(0, z0.build()), (-1, z1.build())]))?;
    let kappa = local.chain_map(
        &ext.presented,
        &BTreeMap::from([(0, c0.build()), (-1, c1.build())]),
    )?;

    let mut k1 = MatrixBuilder::new(ext.deg0.ngens(), ext.deg_neg1.ngens());
    for u in (0..cover.len()).filter(|&u| u != m) {
        let b = ext.deg0.block(&[u, m]);
        k1.add_identity(b.offset, ext.deg_neg1.block(&[u]).offset, b.len, -1);
    }
    let round = zeta.then(&kappa)?;
    let id = ChainMap::identity(ext.complex());
    let homotopy: BTreeMap<i64, Matrix> = BTreeMap::from([(-1, k1.build())]);
    let k = ext
        .presented
        .homotopy(&ext.presented, &round, &id, &homotopy)?;
    Ok(ZetaKappa {
        top: m,
        local,
        ext,
        zeta,
        kappa,
        k,
    })
}

impl ZetaKappa {
    /// `ζκ = id`, the homotopy identity and that `ζ` is a quasi-isomorphism.
    pub fn verify(&self) -> Result<()> {
        if !self.kappa.then(&self.zeta)?.is_identity() {
            return Err(Error::Mismatch("ζ∘κ is not the identity".into()));
        }
        self.k.verify()?;
        if !quasi_iso_check(&self.zeta)? {
            return Err(Error::Mismatch("ζ is not a quasi-isomorphism".into()));
        }
        Ok(())
    }
}

//! Local configuration and observable complexes on a single star.

use std::fmt;
use std::ops::Add;

use crate::abelian::{int, Integer, SparseVec};
use crate::complexes::ChainComplex;
use crate::error::{Error, Result};
use crate::simplicial::{
    boundary, coboundary, cochain_group, CoeffGroup, SimplicialComplex, Subcomplex,
};

/// Sign `s` in `δ* = s·∂`. Forced by `⟨φ, δg⟩ = ⟨δ*φ, g⟩` with `δg = −dg`.
pub const OBS_SIGN: i64 = -1;

/// `C¹(K_U; G)` in degree 0, `C⁰(K_U; G)` in degree 1, `δ = −d`.
pub fn local_config_complex(
    k: &SimplicialComplex,
    base: &Subcomplex,
    g: CoeffGroup,
) -> ChainComplex {
    let d = coboundary(k, base, 0, g);
    let groups = vec![cochain_group(k, base, 1, g), cochain_group(k, base, 0, g)];
    ChainComplex::new(0, groups, vec![d.matrix().neg()]).expect("two-term complex")
}

/// `C_0(K_U; Z/q)` in degree −1, `C_1(K_U; Z/q)` in degree 0, `δ* = s·∂`.
pub fn local_obs_complex(
    k: &SimplicialComplex,
    base: &Subcomplex,
    g: CoeffGroup,
) -> Result<ChainComplex> {
    if g.modulus().is_none() {
        return Err(Error::ObservablesNeedCyclic);
    }
    let b = boundary(k, base, 1, g);
    let groups = vec![cochain_group(k, base, 0, g), cochain_group(k, base, 1, g)];
    ChainComplex::new(-1, groups, vec![b.matrix().scaled(&int(OBS_SIGN))])
}

/// Local configuration: `A` (degree 0) and `g` (degree 1) in the star's simplex bases.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LocalConfig {
    pub a: SparseVec,
    pub g: SparseVec,
}

/// Local observable: `φ` (degree 0) and `χ` (degree −1).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LocalObs {
    pub phi: SparseVec,
    pub chi: SparseVec,
}

/// An element `num/den` of `Q/Z`, reduced, `0 ≤ num < den`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairingValue {
    num: u64,
    den: u64,
}

impl PairingValue {
    pub fn zero() -> Self {
        PairingValue { num: 0, den: 1 }
    }

    /// The class of `x/q`.
    pub fn from_fraction(x: &Integer, q: u64) -> Self {
        let r = crate::abelian::integer::reduce(x, &Integer::from(q));
        let r = crate::abelian::integer::to_u64(&r).expect("residue below q");
        let g = gcd(r, q);
        PairingValue {
            num: r / g,
            den: q / g,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn numerator(&self) -> u64 {
        self.num
    }

    pub fn denominator(&self) -> u64 {
        self.den
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a.max(1)
    } else {
        gcd(b, a % b)
    }
}

impl Add for PairingValue {
    type Output = PairingValue;
    fn add(self, rhs: PairingValue) -> PairingValue {
        let den = self.den / gcd(self.den, rhs.den) * rhs.den;
        let num = self.num * (den / self.den) + rhs.num * (den / rhs.den);
        PairingValue::from_fraction(&Integer::from(num), den)
    }
}

impl fmt::Display for PairingValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num == 0 {
            write!(f, "0")
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// `⟨χ ⊕ φ, A ⊕ g⟩ = (φ·A + χ·g)/q mod 1`.
pub fn local_pairing(
    base: &Subcomplex,
    g: CoeffGroup,
    f: &LocalObs,
    b: &LocalConfig,
) -> Result<PairingValue> {
    let q = g.modulus().ok_or(Error::ObservablesNeedCyclic)?;
    let (n0, n1) = (base.of_dim(0).len(), base.of_dim(1).len());
    let fits = |v: &SparseVec, n: usize| v.max_index().is_none_or(|i| i < n);
    if !fits(&f.phi, n1) || !fits(&b.a, n1) || !fits(&f.chi, n0) || !fits(&b.g, n0) {
        return Err(Error::Mismatch("cochain does not live on this star".into()));
    }
    Ok(PairingValue::from_fraction(
        &(f.phi.dot(&b.a) + f.chi.dot(&b.g)),
        q,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::star_poset;

    fn edge() -> SimplicialComplex {
        SimplicialComplex::from_facets(&[&[0, 1]]).unwrap()
    }

    #[test]
    fn vertex_star_complexes() {
        let k = SimplicialComplex::from_facets(&[&[0]]).unwrap();
        let z2 = CoeffGroup::cyclic(2).unwrap();
        let c = local_config_complex(&k, &k.whole(), z2);
        assert_eq!(
            crate::complexes::homology_report(&c.homology().unwrap()),
            "H_0 = 0\nH_1 = Z/2\n"
        );
        let o = local_obs_complex(&k, &k.whole(), CoeffGroup::cyclic(5).unwrap()).unwrap();
        assert_eq!(
            crate::complexes::homology_report(&o.homology().unwrap()),
            "H_-1 = Z/5\nH_0 = 0\n"
        );
        assert_eq!(
            local_obs_complex(&k, &k.whole(), CoeffGroup::Integers),
            Err(Error::ObservablesNeedCyclic)
        );
    }

    #[test]
    fn edge_pairing_and_boundary() {
        let k = edge();
        let z2 = CoeffGroup::cyclic(2).unwrap();
        let o = local_obs_complex(&k, &k.whole(), CoeffGroup::cyclic(5).unwrap()).unwrap();
        // s·(w − v) with s = −1, reduced mod 5
        assert_eq!(
            o.differential(0).matrix().to_dense_rows(),
            vec![vec![int(1)], vec![int(4)]]
        );
        let f = LocalObs {
            phi: SparseVec::unit(0),
            chi: SparseVec::new(),
        };
        let b = LocalConfig {
            a: SparseVec::unit(0),
            g: SparseVec::new(),
        };
        assert_eq!(
            local_pairing(&k.whole(), z2, &f, &b).unwrap().to_string(),
            "1/2"
        );
        assert!(local_pairing(&k.whole(), z2, &LocalObs::default(), &b)
            .unwrap()
            .is_zero());
    }

    /// `⟨φ, δg⟩ = ⟨δ*φ, g⟩` over all of `C_1 × C^0` with `Z/2` and `Z/3` on the edge.
    #[test]
    fn adjunction_fixes_the_sign() {
        let k = edge();
        for q in [2u64, 3] {
            let g = CoeffGroup::cyclic(q).unwrap();
            let c = local_config_complex(&k, &k.whole(), g);
            let o = local_obs_complex(&k, &k.whole(), g).unwrap();
            let vals = 0..q as i64;
            for (p, g0, g1) in itertools::iproduct!(vals.clone(), vals.clone(), vals) {
                let phi = SparseVec::from_i64(&[p]);
                let gv = SparseVec::from_i64(&[g0, g1]);
                let lhs =
                    PairingValue::from_fraction(&phi.dot(&c.differential(1).apply_sparse(&gv)), q);
                let rhs =
                    PairingValue::from_fraction(&o.differential(0).apply_sparse(&phi).dot(&gv), q);
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn connected_star_has_constant_gauge_symmetry() {
        let k = SimplicialComplex::from_facets(&[&[0, 1, 2], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3]])
            .unwrap();
        let sp = star_poset(&k);
        let g = CoeffGroup::cyclic(6).unwrap();
        for u in 0..sp.len() {
            let h = local_config_complex(&k, sp.sub(u), g).homology().unwrap();
            assert!(h
                .iter()
                .filter(|(n, _)| *n == 1)
                .all(|(_, x)| x.invariants() == g.group().invariants()));
        }
        let sums = [
            PairingValue::from_fraction(&int(1), 4),
            PairingValue::from_fraction(&int(3), 4),
        ];
        assert!(sums.into_iter().reduce(|a, b| a + b).unwrap().is_zero());
    }
}

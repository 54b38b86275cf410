//! Bounded chain complexes of finitely generated abelian groups, chain maps,
//! chain homotopies, homology and quasi-isomorphism testing.

mod double;
mod presented;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::abelian::{
    hom_cokernel, hom_kernel, FgAbGroup, GroupHom, Invariants, Matrix, Span, SparseVec, Subquotient,
};
use crate::error::{Error, Result};

pub use double::{total_complex, DoubleComplex, SumMode, TotalComplex, Truncation};
pub use presented::{labelled_iso, Presented};

/// Groups `C_lo ..= C_hi` with differentials `δ_n : C_n → C_{n-1}`; zero outside the range.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    lo: i64,
    groups: Vec<FgAbGroup>,
    /// `diffs[k]` is `δ_{lo+k+1}`.
    diffs: Vec<GroupHom>,
}

impl ChainComplex {
    /// `differentials[k]` is `δ_{lo+k+1} : C_{lo+k+1} → C_{lo+k}`.
    pub fn new(lo: i64, groups: Vec<FgAbGroup>, differentials: Vec<Matrix>) -> Result<Self> {
        if groups.is_empty() {
            return Ok(ChainComplex {
                lo,
                groups,
                diffs: Vec::new(),
            });
        }
        if differentials.len() + 1 != groups.len() {
            return Err(Error::Shape(format!(
                "{} groups need {} differentials",
                groups.len(),
                groups.len() - 1
            )));
        }
        let diffs = differentials
            .into_iter()
            .enumerate()
            .map(|(k, m)| GroupHom::new(&groups[k + 1], &groups[k], m))
            .collect::<Result<Vec<_>>>()?;
        let c = ChainComplex { lo, groups, diffs };
        c.check_square_zero()?;
        Ok(c)
    }

    /// A single group placed in degree `n`.
    pub fn concentrated(n: i64, g: FgAbGroup) -> Self {
        ChainComplex {
            lo: n,
            groups: vec![g],
            diffs: Vec::new(),
        }
    }

    pub fn zero() -> Self {
        ChainComplex {
            lo: 0,
            groups: Vec::new(),
            diffs: Vec::new(),
        }
    }

    fn check_square_zero(&self) -> Result<()> {
        for k in 1..self.diffs.len() {
            if !self.diffs[k].then(&self.diffs[k - 1])?.is_zero() {
                return Err(Error::NotAComplex(self.lo + k as i64 + 1));
            }
        }
        Ok(())
    }

    /// δ∘δ = 0 at every degree.
    pub fn is_valid(&self) -> bool {
        self.check_square_zero().is_ok()
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.groups.len() as i64 - 1
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi()
    }

    pub fn group(&self, n: i64) -> FgAbGroup {
        if n < self.lo || n > self.hi() {
            FgAbGroup::zero()
        } else {
            self.groups[(n - self.lo) as usize].clone()
        }
    }

    /// `δ_n : C_n → C_{n-1}`.
    pub fn differential(&self, n: i64) -> GroupHom {
        if n > self.lo && n <= self.hi() {
            self.diffs[(n - self.lo - 1) as usize].clone()
        } else {
            GroupHom::zero(&self.group(n), &self.group(n - 1))
        }
    }

    pub fn homology_at(&self, n: i64) -> Result<Subquotient> {
        let d = self.differential(n);
        let up = self.differential(n + 1);
        Subquotient::new(&self.group(n), Span::KernelOf(&d), up.matrix().columns())
    }

    pub fn homology(&self) -> Result<Vec<(i64, FgAbGroup)>> {
        self.degrees()
            .map(|n| Ok((n, self.homology_at(n)?.group().clone())))
            .collect()
    }

    pub fn homology_invariants(&self) -> Result<BTreeMap<i64, Invariants>> {
        Ok(self
            .homology()?
            .into_iter()
            .map(|(n, g)| (n, g.invariants()))
            .collect())
    }

    pub fn is_acyclic(&self) -> Result<bool> {
        Ok(self.homology()?.iter().all(|(_, g)| g.is_trivial()))
    }

    /// Same complex with degrees shifted by `k` (`C'_{n+k} = C_n`).
    pub fn shifted(&self, k: i64) -> ChainComplex {
        ChainComplex {
            lo: self.lo + k,
            groups: self.groups.clone(),
            diffs: self.diffs.clone(),
        }
    }
}

/// One line per degree, `H_<n> = <group>`, in increasing degree.
pub fn homology_report(h: &[(i64, FgAbGroup)]) -> String {
    let mut s = String::new();
    for (n, g) in h {
        writeln!(s, "H_{n} = {g}").expect("string write");
    }
    s
}

/// Empty when both complexes are.
#[allow(clippy::reversed_empty_ranges)]
fn degree_span(a: &ChainComplex, b: &ChainComplex) -> std::ops::RangeInclusive<i64> {
    match (a.is_empty(), b.is_empty()) {
        (true, true) => 0..=-1,
        (true, false) => b.lo..=b.hi(),
        (false, true) => a.lo..=a.hi(),
        (false, false) => a.lo.min(b.lo)..=a.hi().max(b.hi()),
    }
}

/// Degreewise homomorphisms `f_n : C_n → D_n`.
#[derive(Clone, Debug)]
pub struct ChainMap {
    source: ChainComplex,
    target: ChainComplex,
    components: BTreeMap<i64, GroupHom>,
}

impl ChainMap {
    /// Missing degrees are zero; the chain-map identity is checked.
    pub fn new(
        source: &ChainComplex,
        target: &ChainComplex,
        components: Vec<(i64, Matrix)>,
    ) -> Result<Self> {
        let f = Self::new_unverified(source, target, components)?;
        f.verify()?;
        Ok(f)
    }

    pub fn new_unverified(
        source: &ChainComplex,
        target: &ChainComplex,
        components: Vec<(i64, Matrix)>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (n, m) in components {
            map.insert(n, GroupHom::new(&source.group(n), &target.group(n), m)?);
        }
        for n in degree_span(source, target) {
            map.entry(n)
                .or_insert_with(|| GroupHom::zero(&source.group(n), &target.group(n)));
        }
        Ok(ChainMap {
            source: source.clone(),
            target: target.clone(),
            components: map,
        })
    }

    pub fn identity(c: &ChainComplex) -> Self {
        let components = c
            .degrees()
            .map(|n| (n, GroupHom::identity(&c.group(n))))
            .collect();
        ChainMap {
            source: c.clone(),
            target: c.clone(),
            components,
        }
    }

    pub fn zero(source: &ChainComplex, target: &ChainComplex) -> Self {
        Self::new_unverified(source, target, Vec::new()).expect("zero map is well defined")
    }

    pub fn source(&self) -> &ChainComplex {
        &self.source
    }

    pub fn target(&self) -> &ChainComplex {
        &self.target
    }

    pub fn component(&self, n: i64) -> GroupHom {
        self.components
            .get(&n)
            .cloned()
            .unwrap_or_else(|| GroupHom::zero(&self.source.group(n), &self.target.group(n)))
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> {
        degree_span(&self.source, &self.target)
    }

    /// `δ ∘ f_n = f_{n-1} ∘ δ` at every degree.
    pub fn verify(&self) -> Result<()> {
        for n in degree_span(&self.source, &self.target) {
            let lhs = self.component(n).then(&self.target.differential(n))?;
            let rhs = self.source.differential(n).then(&self.component(n - 1))?;
            if !lhs.same_map(&rhs) {
                return Err(Error::NotAChainMap(n));
            }
        }
        Ok(())
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &ChainMap) -> Result<ChainMap> {
        let components = degree_span(&self.source, &next.target)
            .map(|n| Ok((n, self.component(n).then(&next.component(n))?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        Ok(ChainMap {
            source: self.source.clone(),
            target: next.target.clone(),
            components,
        })
    }

    pub fn sub(&self, other: &ChainMap) -> Result<ChainMap> {
        let components = self
            .degrees()
            .map(|n| Ok((n, self.component(n).sub(&other.component(n))?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        Ok(ChainMap {
            source: self.source.clone(),
            target: self.target.clone(),
            components,
        })
    }

    /// Equality of all components.
    pub fn same_map(&self, other: &ChainMap) -> bool {
        self.degrees()
            .chain(other.degrees())
            .all(|n| self.component(n).same_map(&other.component(n)))
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target && self.same_map(&ChainMap::identity(&self.source))
    }

    /// Induced map `H_n(C) → H_n(D)` in canonical coordinates.
    pub fn induced(&self, n: i64) -> Result<GroupHom> {
        let hs = self.source.homology_at(n)?;
        let ht = self.target.homology_at(n)?;
        let f = self.component(n);
        let images: Vec<SparseVec> = hs.generators().iter().map(|x| f.apply_sparse(x)).collect();
        let m = ht.coordinate_matrix(&images)?;
        GroupHom::new(hs.group(), ht.group(), m)
    }
}

pub fn verify_chain_map(f: &ChainMap) -> bool {
    f.verify().is_ok()
}

/// `h_n : C_n → D_{n+1}` with `f − g = δh + hδ`.
#[derive(Clone, Debug)]
pub struct ChainHomotopy {
    f: ChainMap,
    g: ChainMap,
    components: BTreeMap<i64, GroupHom>,
}

impl ChainHomotopy {
    pub fn new(f: &ChainMap, g: &ChainMap, components: Vec<(i64, Matrix)>) -> Result<Self> {
        let (c, d) = (&f.source, &f.target);
        if g.source != *c || g.target != *d {
            return Err(Error::Shape(
                "homotopy between maps with different ends".into(),
            ));
        }
        let mut map = BTreeMap::new();
        for (n, m) in components {
            map.insert(n, GroupHom::new(&c.group(n), &d.group(n + 1), m)?);
        }
        Ok(ChainHomotopy {
            f: f.clone(),
            g: g.clone(),
            components: map,
        })
    }

    pub fn component(&self, n: i64) -> GroupHom {
        self.components
            .get(&n)
            .cloned()
            .unwrap_or_else(|| GroupHom::zero(&self.f.source.group(n), &self.f.target.group(n + 1)))
    }

    pub fn verify(&self) -> Result<()> {
        let (c, d) = (&self.f.source, &self.f.target);
        let span = degree_span(c, d);
        for n in (*span.start() - 1)..=(*span.end() + 1) {
            let lhs = self.f.component(n).sub(&self.g.component(n))?;
            let a = self.component(n).then(&d.differential(n + 1))?;
            let b = c.differential(n).then(&self.component(n - 1))?;
            if !lhs.same_map(&a.add(&b)?) {
                return Err(Error::HomotopyFails(n));
            }
        }
        Ok(())
    }
}

pub fn verify_homotopy(h: &ChainHomotopy) -> bool {
    h.verify().is_ok()
}

/// True iff every induced map on homology is bijective. Errors if `f` is not a chain map.
pub fn quasi_iso_check(f: &ChainMap) -> Result<bool> {
    f.verify()?;
    for n in f.degrees() {
        let h = f.induced(n)?;
        if !h.source().is_isomorphic(h.target()) {
            return Ok(false);
        }
        let (k, _) = hom_kernel(&h)?;
        let (q, _) = hom_cokernel(&h)?;
        if !k.is_trivial() || !q.is_trivial() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Mapping cone: `cone_n = C_{n-1} ⊕ D_n`, `δ(c, d) = (−δc, f(c) + δd)`.
pub fn mapping_cone(f: &ChainMap) -> Result<ChainComplex> {
    let (c, d) = (&f.source, &f.target);
    let span = degree_span(c, d);
    let (lo, hi) = (*span.start(), *span.end() + 1);
    let groups: Vec<FgAbGroup> = (lo..=hi)
        .map(|n| FgAbGroup::direct_sum(&[&c.group(n - 1), &d.group(n)]))
        .collect();
    let diffs = (lo + 1..=hi)
        .map(|n| {
            let dc = c.differential(n - 1).matrix().neg();
            let dd = d.differential(n).matrix().clone();
            let fm = f.component(n - 1).matrix().clone();
            let zero = Matrix::zeros(dc.rows(), dd.cols());
            let top = Matrix::hstack(&[&dc, &zero]);
            let bottom = Matrix::hstack(&[&fm, &dd]);
            Matrix::vstack(&[&top, &bottom])
        })
        .collect();
    ChainComplex::new(lo, groups, diffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::orders_of;

    fn z(n: usize) -> FgAbGroup {
        FgAbGroup::free(n)
    }

    #[test]
    fn two_term_homology() {
        let c =
            ChainComplex::new(0, vec![z(1), z(1)], vec![Matrix::from_rows(&[vec![2]])]).unwrap();
        let h = c.homology().unwrap();
        assert_eq!(homology_report(&h), "H_0 = Z/2\nH_1 = 0\n");
    }

    #[test]
    fn zero_differentials_give_groups() {
        let g = FgAbGroup::from_orders(orders_of(&[3, 0]));
        let c =
            ChainComplex::new(0, vec![g.clone(), g.clone()], vec![Matrix::zeros(2, 2)]).unwrap();
        for (_, h) in c.homology().unwrap() {
            assert!(h.is_isomorphic(&g));
        }
    }

    #[test]
    fn triangle_graph_homology() {
        // edges 01, 02, 12 ; boundary columns
        let d = Matrix::from_rows(&[vec![-1, -1, 0], vec![1, 0, -1], vec![0, 1, 1]]);
        let c = ChainComplex::new(0, vec![z(3), z(3)], vec![d]).unwrap();
        let h = c.homology().unwrap();
        assert_eq!(homology_report(&h), "H_0 = Z\nH_1 = Z\n");
    }

    #[test]
    fn rejects_nonzero_square() {
        let one = Matrix::from_rows(&[vec![1]]);
        let r = ChainComplex::new(0, vec![z(1), z(1), z(1)], vec![one.clone(), one]);
        assert_eq!(r.unwrap_err(), Error::NotAComplex(2));
    }

    #[test]
    fn identity_and_doubling_quasi_iso() {
        let c = ChainComplex::concentrated(0, z(1));
        assert!(quasi_iso_check(&ChainMap::identity(&c)).unwrap());
        let f = ChainMap::new(&c, &c, vec![(0, Matrix::from_rows(&[vec![2]]))]).unwrap();
        assert!(!quasi_iso_check(&f).unwrap());
        assert!(!mapping_cone(&f).unwrap().is_acyclic().unwrap());
        assert!(mapping_cone(&ChainMap::identity(&c))
            .unwrap()
            .is_acyclic()
            .unwrap());
    }

    #[test]
    fn zero_homotopy_between_equal_maps() {
        let c =
            ChainComplex::new(0, vec![z(1), z(1)], vec![Matrix::from_rows(&[vec![2]])]).unwrap();
        let id = ChainMap::identity(&c);
        assert!(verify_homotopy(
            &ChainHomotopy::new(&id, &id, vec![]).unwrap()
        ));
        // id ≃ 0 fails: H_0 = Z/2 is nonzero.
        let zero = ChainMap::zero(&c, &c);
        let h = ChainHomotopy::new(&id, &zero, vec![(0, Matrix::from_rows(&[vec![1]]))]).unwrap();
        assert!(!verify_homotopy(&h));
    }
}

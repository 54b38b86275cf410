//! Extended configuration and observable complexes on the star cover.
//!
//! The engine versions are the holim of the configuration diagram and the
//! hocolim of the observable diagram. The direct versions write the same
//! complexes out as families over stars and chains of stars. Both use the
//! labels `U:σ` and `U < V:σ`, so they can be matched basis by basis.

use std::collections::BTreeMap;

use crate::abelian::{int, GroupHom, Matrix, Span, SparseVec, Subquotient};
use crate::complexes::{ChainComplex, Presented};
use crate::diagrams::{config_diagram, obs_diagram};
use crate::error::{Error, Result};
use crate::hocolimit::{homotopy_colimit, Hocolim};
use crate::holimit::{homotopy_limit, Holim};
use crate::simplicial::{star_poset, CoeffGroup, SimplicialComplex};

use super::cover::{Blocks, Cover, MatrixBuilder};
use super::local::OBS_SIGN;

/// Presentation of the holim complex: degree 0 is the kernel inside `Tot_0`.
pub fn presented_limit(h: &Holim) -> Result<Presented> {
    let t = &h.total;
    let mut parts = BTreeMap::from([(0, (t.degree_zero.clone(), Vec::new()))]);
    for n in 1..=t.complex.hi() {
        parts.insert(
            n,
            (
                Subquotient::new(&t.untruncated.group(n), Span::All, &[])?,
                Vec::new(),
            ),
        );
    }
    Presented::new(&t.untruncated, parts)
}

/// Presentation of the hocolim complex: degree 0 is `Tot_0` modulo the image of `Tot_1`.
pub fn presented_colimit(h: &Hocolim) -> Result<Presented> {
    let t = &h.total;
    let rels = t.untruncated.differential(1).matrix().columns().to_vec();
    let mut parts = BTreeMap::from([(0, (t.degree_zero.clone(), rels))]);
    for n in t.complex.lo()..0 {
        parts.insert(
            n,
            (
                Subquotient::new(&t.untruncated.group(n), Span::All, &[])?,
                Vec::new(),
            ),
        );
    }
    Presented::new(&t.untruncated, parts)
}

/// Engine: holim of the configuration diagram over the star poset.
pub fn extended_config(k: &SimplicialComplex, g: CoeffGroup) -> Result<Presented> {
    presented_limit(&homotopy_limit(&config_diagram(&star_poset(k), g)?)?)
}

/// Engine: hocolim of the observable diagram over the star poset.
pub fn extended_obs(k: &SimplicialComplex, g: CoeffGroup) -> Result<Presented> {
    presented_colimit(&homotopy_colimit(&obs_diagram(&star_poset(k), g)?)?)
}

/// Degree-0 configuration as families: `A_U` per star, `g_(U<V)` per strict pair.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExtConfigElement {
    /// In the edge basis of `K_U`.
    pub a: BTreeMap<usize, SparseVec>,
    /// In the vertex basis of `K_U`.
    pub g: BTreeMap<(usize, usize), SparseVec>,
}

/// Hand-written extended configuration complex.
#[derive(Clone, Debug)]
pub struct ExtConfig {
    pub cover: Cover,
    /// `A_U` blocks (key `[U]`, 1-cochains) then `g_(U<V)` blocks (key `[U, V]`, 0-cochains on `K_U`).
    pub deg0: Blocks,
    /// `g_U` blocks.
    pub deg1: Blocks,
    /// Rows of the gluing conditions: `[U, V]` for potentials, `[U, V, W]` for cocycles.
    pub rows: Blocks,
    pub constraints: Matrix,
    pub presented: Presented,
}

/// Degree 0 is cut out of `∏ C¹(K_U) × ∏_{U<V} C⁰(K_U)` by
/// `A_V|_U − A_U + d g_(U<V) = 0` and `g_(V<W)|_U − g_(U<W) + g_(U<V) = 0`;
/// degree 1 is `∏ C⁰(K_U)` with `δg = (−d g_U, g_V|_U − g_U)`.
pub fn extended_config_direct(k: &SimplicialComplex, g: CoeffGroup) -> Result<ExtConfig> {
    let cover = Cover::new(k, g);
    let n = cover.len();
    let stars = |deg: usize| (0..n).map(move |u| (u, deg));
    let mut items: Vec<_> = stars(1)
        .map(|(u, d)| (vec![u], cover.name(u).to_string(), cover.sub(u).clone(), d))
        .collect();
    items.extend(cover.pairs.iter().map(|&(u, v)| {
        (
            vec![u, v],
            cover.chain_label(&[u, v]),
            cover.sub(u).clone(),
            0,
        )
    }));
    let deg0 = Blocks::new(&cover, items);
    let deg1 = Blocks::new(
        &cover,
        stars(0)
            .map(|(u, d)| (vec![u], cover.name(u).to_string(), cover.sub(u).clone(), d))
            .collect(),
    );
    let mut row_items: Vec<_> = cover
        .pairs
        .iter()
        .map(|&(u, v)| {
            (
                vec![u, v],
                cover.chain_label(&[u, v]),
                cover.sub(u).clone(),
                1,
            )
        })
        .collect();
    row_items.extend(cover.triples.iter().map(|&(u, v, w)| {
        (
            vec![u, v, w],
            cover.chain_label(&[u, v, w]),
            cover.sub(u).clone(),
            0,
        )
    }));
    let rows = Blocks::new(&cover, row_items);

    let mut m = MatrixBuilder::new(rows.ngens(), deg0.ngens());
    for &(u, v) in &cover.pairs {
        let r = rows.block(&[u, v]).offset;
        let (su, sv) = (cover.sub(u), cover.sub(v));
        m.add(r, deg0.block(&[v]).offset, &cover.restrict(sv, su, 1), 1);
        m.add_identity(r, deg0.block(&[u]).offset, deg0.block(&[u]).len, -1);
        m.add(r, deg0.block(&[u, v]).offset, &cover.d(su), 1);
    }
    for &(u, v, w) in &cover.triples {
        let r = rows.block(&[u, v, w]).offset;
        m.add(
            r,
            deg0.block(&[v, w]).offset,
            &cover.restrict(cover.sub(v), cover.sub(u), 0),
            1,
        );
        m.add_identity(r, deg0.block(&[u, w]).offset, deg0.block(&[u, w]).len, -1);
        m.add_identity(r, deg0.block(&[u, v]).offset, deg0.block(&[u, v]).len, 1);
    }
    let constraints = m.build();

    let mut delta = MatrixBuilder::new(deg0.ngens(), deg1.ngens());
    for u in 0..n {
        delta.add(
            deg0.block(&[u]).offset,
            deg1.block(&[u]).offset,
            &cover.d(cover.sub(u)),
            -1,
        );
    }
    for &(u, v) in &cover.pairs {
        let r = deg0.block(&[u, v]).offset;
        delta.add(
            r,
            deg1.block(&[v]).offset,
            &cover.restrict(cover.sub(v), cover.sub(u), 0),
            1,
        );
        delta.add_identity(r, deg1.block(&[u]).offset, deg1.block(&[u]).len, -1);
    }
    let ambient = ChainComplex::new(
        0,
        vec![deg0.group().clone(), deg1.group().clone()],
        vec![delta.build()],
    )?;
    let gluing = GroupHom::new(deg0.group(), rows.group(), constraints.clone())?;
    let parts = BTreeMap::from([
        (
            0,
            (
                Subquotient::new(deg0.group(), Span::KernelOf(&gluing), &[])?,
                Vec::new(),
            ),
        ),
        (
            1,
            (Subquotient::new(deg1.group(), Span::All, &[])?, Vec::new()),
        ),
    ]);
    let presented = Presented::new(&ambient, parts)?;
    Ok(ExtConfig {
        cover,
        deg0,
        deg1,
        rows,
        constraints,
        presented,
    })
}

impl ExtConfig {
    pub fn complex(&self) -> &ChainComplex {
        self.presented.complex()
    }

    pub fn to_ambient(&self, e: &ExtConfigElement) -> SparseVec {
        let mut v = SparseVec::new();
        for (&u, a) in &e.a {
            v = v.add(&self.deg0.embed(&[u], a));
        }
        for (&(u, w), g) in &e.g {
            v = v.add(&self.deg0.embed(&[u, w], g));
        }
        v.reduced(self.deg0.group().orders())
    }

    pub fn element(&self, v: &SparseVec) -> ExtConfigElement {
        let a = (0..self.cover.len())
            .map(|u| (u, self.deg0.slice(v, &[u])))
            .filter(|(_, x)| !x.is_zero())
            .collect();
        let g = self
            .cover
            .pairs
            .iter()
            .map(|&(u, w)| ((u, w), self.deg0.slice(v, &[u, w])))
            .filter(|(_, x)| !x.is_zero())
            .collect();
        ExtConfigElement { a, g }
    }

    /// Names the first violated gluing condition.
    pub fn check_membership(&self, v: &SparseVec) -> Result<()> {
        let r = self
            .constraints
            .apply(v)
            .reduced(self.rows.group().orders());
        let Some(&(i, _)) = r.entries().first() else {
            return Ok(());
        };
        let b = self
            .rows
            .blocks()
            .iter()
            .find(|b| i >= b.offset && i < b.offset + b.len)
            .expect("row in a block");
        let names: Vec<&str> = b.key.iter().map(|&u| self.cover.name(u)).collect();
        Err(Error::Membership(if b.key.len() == 2 {
            format!(
                "A_V|U − A_U + d g(U<V) ≠ 0 for U = {}, V = {}",
                names[0], names[1]
            )
        } else {
            format!(
                "g(V<W)|U − g(U<W) + g(U<V) ≠ 0 for U = {}, V = {}, W = {}",
                names[0], names[1], names[2]
            )
        }))
    }
}

/// A basis symbol of the extended observables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ObsSymbol {
    /// `ι_U(φ)` for an edge of `K_U` (degree 0).
    Phi { star: usize, edge: usize },
    /// `ι_(U<V)(χ)` for a vertex of `K_U` (degree 0).
    ChiPair {
        lower: usize,
        upper: usize,
        vertex: usize,
    },
    /// `ι_U(χ)` for a vertex of `K_U` (degree −1).
    Chi { star: usize, vertex: usize },
}

/// Integer combination of basis symbols, all in one degree.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExtObsElement {
    pub terms: Vec<(ObsSymbol, i64)>,
}

/// Hand-written extended observable complex.
#[derive(Clone, Debug)]
pub struct ExtObs {
    pub cover: Cover,
    /// `ι_U(φ)` blocks (key `[U]`, 1-chains) then `ι_(U<V)(χ)` blocks (key `[U, V]`, 0-chains on `K_U`).
    pub deg0: Blocks,
    /// `ι_U(χ)` blocks.
    pub deg_neg1: Blocks,
    /// Generators of the relation subgroup in degree 0.
    pub relations: Vec<SparseVec>,
    pub presented: Presented,
}

/// Degree 0 is `(∐ C_1(K_U) ⊕ ∐_{U<V} C_0(K_U))` modulo
/// `ι_U φ − ι_V ext φ − ι_(U<V)(δ*φ)` and `ι_(U<V) χ − ι_(U<W) χ + ι_(V<W) ext χ`;
/// degree −1 is `∐ C_0(K_U)` with `δ*` sending `ι_U φ ↦ ι_U(δ*φ)` and
/// `ι_(U<V) χ ↦ ι_U χ − ι_V ext χ`.
pub fn extended_obs_direct(k: &SimplicialComplex, g: CoeffGroup) -> Result<ExtObs> {
    if g.modulus().is_none() {
        return Err(Error::ObservablesNeedCyclic);
    }
    let cover = Cover::new(k, g);
    let n = cover.len();
    let mut items: Vec<_> = (0..n)
        .map(|u| (vec![u], cover.name(u).to_string(), cover.sub(u).clone(), 1))
        .collect();
    items.extend(cover.pairs.iter().map(|&(u, v)| {
        (
            vec![u, v],
            cover.chain_label(&[u, v]),
            cover.sub(u).clone(),
            0,
        )
    }));
    let deg0 = Blocks::new(&cover, items);
    let deg_neg1 = Blocks::new(
        &cover,
        (0..n)
            .map(|u| (vec![u], cover.name(u).to_string(), cover.sub(u).clone(), 0))
            .collect(),
    );
    let local_delta = |u: usize| cover.boundary(cover.sub(u)).scaled(&int(OBS_SIGN));

    let mut delta = MatrixBuilder::new(deg_neg1.ngens(), deg0.ngens());
    for u in 0..n {
        delta.add(
            deg_neg1.block(&[u]).offset,
            deg0.block(&[u]).offset,
            &local_delta(u),
            1,
        );
    }
    for &(u, v) in &cover.pairs {
        let c = deg0.block(&[u, v]).offset;
        delta.add_identity(deg_neg1.block(&[u]).offset, c, deg0.block(&[u, v]).len, 1);
        delta.add(
            deg_neg1.block(&[v]).offset,
            c,
            &cover.extend(cover.sub(u), cover.sub(v), 0),
            -1,
        );
    }

    let mut relations = Vec::new();
    for &(u, v) in &cover.pairs {
        let edges = deg0.block(&[u]).len;
        let mut r = MatrixBuilder::new(deg0.ngens(), edges);
        r.add_identity(deg0.block(&[u]).offset, 0, edges, 1);
        r.add(
            deg0.block(&[v]).offset,
            0,
            &cover.extend(cover.sub(u), cover.sub(v), 1),
            -1,
        );
        r.add(deg0.block(&[u, v]).offset, 0, &local_delta(u), -1);
        relations.extend(r.build().into_columns());
    }
    for &(u, v, w) in &cover.triples {
        let verts = deg0.block(&[u, v]).len;
        let mut r = MatrixBuilder::new(deg0.ngens(), verts);
        r.add_identity(deg0.block(&[u, v]).offset, 0, verts, 1);
        r.add_identity(deg0.block(&[u, w]).offset, 0, verts, -1);
        r.add(
            deg0.block(&[v, w]).offset,
            0,
            &cover.extend(cover.sub(u), cover.sub(v), 0),
            1,
        );
        relations.extend(r.build().into_columns());
    }
    let orders = deg0.group().orders().to_vec();
    let relations: Vec<SparseVec> = relations
        .into_iter()
        .map(|r| r.reduced(&orders))
        .filter(|r| !r.is_zero())
        .collect();

    let ambient = ChainComplex::new(
        -1,
        vec![deg_neg1.group().clone(), deg0.group().clone()],
        vec![delta.build()],
    )?;
    let parts = BTreeMap::from([
        (
            -1,
            (
                Subquotient::new(deg_neg1.group(), Span::All, &[])?,
                Vec::new(),
            ),
        ),
        (
            0,
            (
                Subquotient::new(deg0.group(), Span::All, &relations)?,
                relations.clone(),
            ),
        ),
    ]);
    let presented = Presented::new(&ambient, parts)?;
    Ok(ExtObs {
        cover,
        deg0,
        deg_neg1,
        relations,
        presented,
    })
}

impl ExtObs {
    pub fn complex(&self) -> &ChainComplex {
        self.presented.complex()
    }

    /// Degree and ambient vector of a basis symbol.
    pub fn symbol(&self, s: ObsSymbol) -> Result<(i64, SparseVec)> {
        let missing = || Error::SimplexNotFound(format!("{s:?}"));
        let (deg, idx) = match s {
            ObsSymbol::Phi { star, edge } => (0, self.deg0.position(&[star], edge)),
            ObsSymbol::ChiPair {
                lower,
                upper,
                vertex,
            } => {
                if self.deg0.get(&[lower, upper]).is_none() {
                    return Err(missing());
                }
                (0, self.deg0.position(&[lower, upper], vertex))
            }
            ObsSymbol::Chi { star, vertex } => (-1, self.deg_neg1.position(&[star], vertex)),
        };
        Ok((deg, SparseVec::unit(idx.ok_or_else(missing)?)))
    }

    pub fn to_ambient(&self, e: &ExtObsElement) -> Result<(i64, SparseVec)> {
        let mut deg = None;
        let mut v = SparseVec::new();
        for &(s, c) in &e.terms {
            let (d, x) = self.symbol(s)?;
            if deg.is_some_and(|d0| d0 != d) {
                return Err(Error::Mismatch("observable mixes degrees".into()));
            }
            deg = Some(d);
            v = v.add(&x.scaled(&int(c)));
        }
        let deg = deg.unwrap_or(0);
        let orders = if deg == 0 {
            self.deg0.group().orders().to_vec()
        } else {
            self.deg_neg1.group().orders().to_vec()
        };
        Ok((deg, v.reduced(&orders)))
    }

    /// The basis symbol behind an ambient index.
    pub fn basis_symbol(&self, deg: i64, i: usize) -> ObsSymbol {
        let blocks = if deg == 0 { &self.deg0 } else { &self.deg_neg1 };
        let b = blocks
            .blocks()
            .iter()
            .find(|b| i >= b.offset && i < b.offset + b.len)
            .expect("index in a block");
        let id = b.base.of_dim(b.deg)[i - b.offset];
        match (deg, b.key.as_slice()) {
            (0, [u]) => ObsSymbol::Phi { star: *u, edge: id },
            (0, [u, v]) => ObsSymbol::ChiPair {
                lower: *u,
                upper: *v,
                vertex: id,
            },
            (_, [u]) => ObsSymbol::Chi {
                star: *u,
                vertex: id,
            },
            _ => unreachable!("block keys have one or two stars"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::{homology_report, labelled_iso};
    use crate::gauge::local::{local_config_complex, local_obs_complex};

    fn path() -> SimplicialComplex {
        SimplicialComplex::from_maximal(&[vec!["v", "w"], vec!["w", "x"]]).unwrap()
    }

    fn sphere() -> SimplicialComplex {
        SimplicialComplex::from_facets(&[&[0, 1, 2], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3]]).unwrap()
    }

    #[test]
    fn one_star_is_the_local_complex() {
        let k = SimplicialComplex::from_facets(&[&[0, 1]]).unwrap();
        let g = CoeffGroup::cyclic(2).unwrap();
        let e = extended_config_direct(&k, g).unwrap();
        let local = local_config_complex(&k, &k.whole(), g);
        assert_eq!(e.complex().homology().unwrap(), local.homology().unwrap());
        let o = extended_obs_direct(&k, g).unwrap();
        assert_eq!(
            o.complex().homology().unwrap(),
            local_obs_complex(&k, &k.whole(), g)
                .unwrap()
                .homology()
                .unwrap()
        );
    }

    #[test]
    fn engine_matches_hand_formulas_on_the_path() {
        let g = CoeffGroup::cyclic(2).unwrap();
        let k = path();
        let e = extended_config(&k, g).unwrap();
        let h = extended_config_direct(&k, g).unwrap();
        labelled_iso(&e, &h.presented).unwrap();
        let eo = extended_obs(&k, g).unwrap();
        let ho = extended_obs_direct(&k, g).unwrap();
        labelled_iso(&eo, &ho.presented).unwrap();
    }

    #[test]
    fn sphere_gauge_symmetry_is_global_constants() {
        let g = CoeffGroup::cyclic(3).unwrap();
        let h = extended_config_direct(&sphere(), g)
            .unwrap()
            .complex()
            .homology()
            .unwrap();
        assert_eq!(
            h.iter().find(|(n, _)| *n == 1).unwrap().1.to_string(),
            "Z/3"
        );
        let hs = homology_report(
            &extended_config(&sphere(), g)
                .unwrap()
                .complex()
                .homology()
                .unwrap(),
        );
        assert!(hs.contains("H_1 = Z/3"), "{hs}");
    }

    #[test]
    fn membership_names_the_condition() {
        let g = CoeffGroup::cyclic(2).unwrap();
        let e = extended_config_direct(&path(), g).unwrap();
        // A on St[v] only: violates the potential condition for St[v] < St[w]
        let bad = ExtConfigElement {
            a: BTreeMap::from([(0, SparseVec::unit(0))]),
            g: BTreeMap::new(),
        };
        let err = e
            .check_membership(&e.to_ambient(&bad))
            .unwrap_err()
            .to_string();
        assert!(err.contains("St[v]") && err.contains("St[w]"), "{err}");
        for rep in e.presented.representatives(0) {
            e.check_membership(rep).unwrap();
            assert_eq!(
                e.to_ambient(&e.element(rep)),
                rep.reduced(e.deg0.group().orders())
            );
        }
    }

    #[test]
    fn observables_need_cyclic_coefficients() {
        assert!(matches!(
            extended_obs_direct(&path(), CoeffGroup::Integers),
            Err(Error::ObservablesNeedCyclic)
        ));
        assert!(extended_obs(&path(), CoeffGroup::Integers).is_err());
    }

    #[test]
    fn symbols_round_trip() {
        let g = CoeffGroup::cyclic(2).unwrap();
        let o = extended_obs_direct(&sphere(), g).unwrap();
        for deg in [0i64, -1] {
            let len = if deg == 0 {
                o.deg0.ngens()
            } else {
                o.deg_neg1.ngens()
            };
            for i in 0..len {
                let s = o.basis_symbol(deg, i);
                assert_eq!(o.symbol(s).unwrap(), (deg, SparseVec::unit(i)));
            }
        }
    }
}

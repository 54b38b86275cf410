//! The Deligne complex of the star cover, the comparison maps ψ and φ with
//! the extended configuration complex, and an alternating Čech–Deligne
//! assembly used as an independent check on its homology.

use std::collections::BTreeMap;

use crate::abelian::integer::reduce;
use crate::abelian::{int, FgAbGroup, GroupHom, Matrix, Span, SparseVec, Subquotient};
use crate::complexes::{
    total_complex, ChainComplex, ChainMap, DoubleComplex, Presented, SumMode, Truncation,
};
use crate::error::{Error, Result};
use crate::simplicial::{
    coboundary, cochain_group, restrict, CoeffGroup, SimplicialComplex, Subcomplex,
};

use super::cover::{Blocks, Cover, MatrixBuilder};
use super::extended::ExtConfig;

/// Degree-0 Deligne data: `A_U` per star and `g_UV` per ordered pair with
/// non-empty intersection.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DeligneElement {
    /// In the edge basis of `K_U`.
    pub a: BTreeMap<usize, SparseVec>,
    /// In the vertex basis of `K_U ∩ K_V`.
    pub g: BTreeMap<(usize, usize), SparseVec>,
}

#[derive(Clone, Debug)]
pub struct Deligne {
    pub cover: Cover,
    /// Ordered pairs `(U, V)`, `U = V` included, with `K_U ∩ K_V` non-empty.
    pub pairs: Vec<(usize, usize)>,
    pub intersections: BTreeMap<(usize, usize), Subcomplex>,
    /// Cocycle triples: `(U, U, U)`, `(U, V, U)` and increasing `U < V < W`.
    pub triples: Vec<(usize, usize, usize)>,
    pub deg0: Blocks,
    pub deg1: Blocks,
    pub rows: Blocks,
    pub constraints: Matrix,
    pub presented: Presented,
}

/// Degree 1 is `∏ C⁰(K_U)`; degree 0 is cut out of `∏ C¹(K_U) × ∏ C⁰(K_U ∩ K_V)`
/// by `A_V − A_U + d g_UV = 0` and `g_VW − g_UW + g_UV = 0` on intersections;
/// `δg = (−d g_U, g_V − g_U)`.
///
/// The triples `(U, U, U)` force `g_UU = 0` and `(U, V, U)` force
/// `g_VU = −g_UV`, so increasing triples give the condition for every triple.
pub fn deligne_complex(k: &SimplicialComplex, g: CoeffGroup) -> Result<Deligne> {
    let cover = Cover::new(k, g);
    let n = cover.len();
    let mut intersections = BTreeMap::new();
    let mut pairs = Vec::new();
    for u in 0..n {
        for v in 0..n {
            let i = cover.intersection(cover.sub(u), cover.sub(v));
            if !i.is_empty() {
                pairs.push((u, v));
                intersections.insert((u, v), i);
            }
        }
    }
    let mut triples: Vec<(usize, usize, usize)> = (0..n).map(|u| (u, u, u)).collect();
    triples.extend(
        pairs
            .iter()
            .filter(|(u, v)| u != v)
            .map(|&(u, v)| (u, v, u)),
    );
    let mut triple_bases = BTreeMap::new();
    for &(u, v, w) in &triples {
        triple_bases.insert((u, v, w), intersections[&(u, v)].clone());
    }
    for u in 0..n {
        for v in u + 1..n {
            let Some(uv) = intersections.get(&(u, v)) else {
                continue;
            };
            for w in v + 1..n {
                let t = cover.intersection(uv, cover.sub(w));
                if !t.is_empty() {
                    triples.push((u, v, w));
                    triple_bases.insert((u, v, w), t);
                }
            }
        }
    }
    let pair_label = |u: usize, v: usize| format!("({}, {})", cover.name(u), cover.name(v));

    let mut items: Vec<_> = (0..n)
        .map(|u| (vec![u], cover.name(u).to_string(), cover.sub(u).clone(), 1))
        .collect();
    items.extend(pairs.iter().map(|&(u, v)| {
        (
            vec![u, v],
            pair_label(u, v),
            intersections[&(u, v)].clone(),
            0,
        )
    }));
    let deg0 = Blocks::new(&cover, items);
    let deg1 = Blocks::new(
        &cover,
        (0..n)
            .map(|u| (vec![u], cover.name(u).to_string(), cover.sub(u).clone(), 0))
            .collect(),
    );
    let mut row_items: Vec<_> = pairs
        .iter()
        .map(|&(u, v)| {
            (
                vec![u, v],
                pair_label(u, v),
                intersections[&(u, v)].clone(),
                1,
            )
        })
        .collect();
    row_items.extend(triples.iter().map(|&(u, v, w)| {
        let label = format!("({}, {}, {})", cover.name(u), cover.name(v), cover.name(w));
        (vec![u, v, w], label, triple_bases[&(u, v, w)].clone(), 0)
    }));
    let rows = Blocks::new(&cover, row_items);

    let mut m = MatrixBuilder::new(rows.ngens(), deg0.ngens());
    for &(u, v) in &pairs {
        let i = &intersections[&(u, v)];
        let r = rows.block(&[u, v]).offset;
        m.add(
            r,
            deg0.block(&[v]).offset,
            &cover.restrict(cover.sub(v), i, 1),
            1,
        );
        m.add(
            r,
            deg0.block(&[u]).offset,
            &cover.restrict(cover.sub(u), i, 1),
            -1,
        );
        m.add(r, deg0.block(&[u, v]).offset, &cover.d(i), 1);
    }
    for (&(u, v, w), t) in &triple_bases {
        let r = rows.block(&[u, v, w]).offset;
        m.add(
            r,
            deg0.block(&[v, w]).offset,
            &cover.restrict(&intersections[&(v, w)], t, 0),
            1,
        );
        m.add(
            r,
            deg0.block(&[u, w]).offset,
            &cover.restrict(&intersections[&(u, w)], t, 0),
            -1,
        );
        m.add(
            r,
            deg0.block(&[u, v]).offset,
            &cover.restrict(&intersections[&(u, v)], t, 0),
            1,
        );
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
    for &(u, v) in &pairs {
        let i = &intersections[&(u, v)];
        let r = deg0.block(&[u, v]).offset;
        delta.add(
            r,
            deg1.block(&[v]).offset,
            &cover.restrict(cover.sub(v), i, 0),
            1,
        );
        delta.add(
            r,
            deg1.block(&[u]).offset,
            &cover.restrict(cover.sub(u), i, 0),
            -1,
        );
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
    Ok(Deligne {
        cover,
        pairs,
        intersections,
        triples,
        deg0,
        deg1,
        rows,
        constraints,
        presented,
    })
}

impl Deligne {
    pub fn complex(&self) -> &ChainComplex {
        self.presented.complex()
    }

    pub fn to_ambient(&self, e: &DeligneElement) -> SparseVec {
        let mut v = SparseVec::new();
        for (&u, a) in &e.a {
            v = v.add(&self.deg0.embed(&[u], a));
        }
        for (&(u, w), g) in &e.g {
            v = v.add(&self.deg0.embed(&[u, w], g));
        }
        v.reduced(self.deg0.group().orders())
    }

    /// Names the first violated condition.
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
                "A_V − A_U + d g_UV ≠ 0 on the intersection for U = {}, V = {}",
                names[0], names[1]
            )
        } else {
            format!(
                "g_VW − g_UW + g_UV ≠ 0 on the intersection for U = {}, V = {}, W = {}",
                names[0], names[1], names[2]
            )
        }))
    }
}

/// ψ : Deligne → extended configurations; identity in degree 1, and in
/// degree 0 it keeps `A_U` and the `g_UV` with `K_U ⊂ K_V`.
pub fn psi_map(del: &Deligne, ext: &ExtConfig) -> Result<ChainMap> {
    let cover = &ext.cover;
    let mut m0 = MatrixBuilder::new(ext.deg0.ngens(), del.deg0.ngens());
    for u in 0..cover.len() {
        m0.add_identity(
            ext.deg0.block(&[u]).offset,
            del.deg0.block(&[u]).offset,
            ext.deg0.block(&[u]).len,
            1,
        );
    }
    for &(u, v) in &cover.pairs {
        // K_U ∩ K_V = K_U, so both blocks list the vertices of K_U in the same order
        let (e, d) = (ext.deg0.block(&[u, v]), del.deg0.block(&[u, v]));
        debug_assert_eq!(e.len, d.len);
        m0.add_identity(e.offset, d.offset, e.len, 1);
    }
    let maps = BTreeMap::from([(0, m0.build()), (1, Matrix::identity(ext.deg1.ngens()))]);
    del.presented.chain_map(&ext.presented, &maps)
}

/// For each vertex of `K_U ∩ K_V`, the star used to glue `g̃_UV` there.
/// Uses `W = K_U ∩ K_V` when the intersection is itself a star.
fn gluing_charts(del: &Deligne, u: usize, v: usize) -> Result<Vec<(usize, Vec<usize>)>> {
    let cover = &del.cover;
    let i = &del.intersections[&(u, v)];
    if let Some(w) = cover.stars.find(i) {
        return Ok(i.of_dim(0).iter().map(|&x| (x, vec![w])).collect());
    }
    let inside: Vec<usize> = (0..cover.len())
        .filter(|&w| cover.sub(w).is_subset_of(i))
        .collect();
    if let Some(&s) = i
        .ids()
        .iter()
        .find(|&&s| !inside.iter().any(|&w| cover.sub(w).contains(s)))
    {
        return Err(Error::Covering {
            u: cover.name(u).into(),
            v: cover.name(v).into(),
            simplex: cover.complex().simplex_label(s),
        });
    }
    Ok(i.of_dim(0)
        .iter()
        .map(|&x| {
            (
                x,
                inside
                    .iter()
                    .copied()
                    .filter(|&w| cover.sub(w).contains(x))
                    .collect(),
            )
        })
        .collect())
}

/// `g_(W⊂V) − g_(W⊂U)` at vertex `x` as an ambient row, with `g_(W⊂W) = 0`.
fn glue_row(ext: &ExtConfig, u: usize, v: usize, w: usize, x: usize) -> Vec<(usize, i64)> {
    let mut row = Vec::new();
    if w != v {
        row.push((ext.deg0.position(&[w, v], x).expect("vertex of W"), 1));
    }
    if w != u {
        row.push((ext.deg0.position(&[w, u], x).expect("vertex of W"), -1));
    }
    row
}

/// φ : extended configurations → Deligne, gluing `g̃_UV` from the stars
/// inside each intersection. Fails with [`Error::Covering`] when those stars
/// do not cover the intersection and with [`Error::Gluing`] when two charts
/// disagree on a degree-0 generator.
pub fn phi_map(ext: &ExtConfig, del: &Deligne) -> Result<ChainMap> {
    let cover = &ext.cover;
    let mut m0 = MatrixBuilder::new(del.deg0.ngens(), ext.deg0.ngens());
    for u in 0..cover.len() {
        m0.add_identity(
            del.deg0.block(&[u]).offset,
            ext.deg0.block(&[u]).offset,
            ext.deg0.block(&[u]).len,
            1,
        );
    }
    let q = cover.coeff.order();
    let value = |row: &[(usize, i64)], rep: &SparseVec| {
        let s = row
            .iter()
            .fold(int(0), |acc, &(j, c)| acc + rep.get(j) * int(c));
        reduce(&s, &q)
    };
    for &(u, v) in del.pairs.iter().filter(|(u, v)| u != v) {
        let charts = gluing_charts(del, u, v)?;
        for (x, ws) in charts {
            let r = del
                .deg0
                .position(&[u, v], x)
                .expect("vertex of the intersection");
            let first = glue_row(ext, u, v, ws[0], x);
            for &(j, c) in &first {
                m0.entry(r, j, c);
            }
            for &w in &ws[1..] {
                let other = glue_row(ext, u, v, w, x);
                if ext
                    .presented
                    .representatives(0)
                    .iter()
                    .any(|rep| value(&first, rep) != value(&other, rep))
                {
                    return Err(Error::Gluing {
                        u: cover.name(u).into(),
                        v: cover.name(v).into(),
                        vertex: cover.complex().simplex_label(x),
                        w1: cover.name(ws[0]).into(),
                        w2: cover.name(w).into(),
                    });
                }
            }
        }
    }
    let maps = BTreeMap::from([(0, m0.build()), (1, Matrix::identity(ext.deg1.ngens()))]);
    ext.presented.chain_map(&del.presented, &maps)
}

/// Alternating Čech–Deligne total complex: `(p, q)` holds
/// `∏_{i_0 < … < i_{−p}} C^{1−q}(K_{i_0} ∩ … ∩ K_{i_{−p}})` over non-empty
/// intersections (`p = 0, −1, −2`), with Čech restriction vertically and `−d`
/// horizontally, truncated to non-negative degrees.
pub fn cech_deligne(k: &SimplicialComplex, g: CoeffGroup) -> Result<ChainComplex> {
    let stars = crate::simplicial::star_poset(k);
    let n = stars.len();
    let mut levels: Vec<Vec<(Vec<usize>, Subcomplex)>> =
        vec![(0..n).map(|u| (vec![u], stars.sub(u).clone())).collect()];
    for depth in 1..3 {
        let mut next = Vec::new();
        for (idx, base) in &levels[depth - 1] {
            for w in idx[idx.len() - 1] + 1..n {
                let t = base.intersection(stars.sub(w), k);
                if !t.is_empty() {
                    let mut j = idx.clone();
                    j.push(w);
                    next.push((j, t));
                }
            }
        }
        levels.push(next);
    }
    let mut groups = BTreeMap::new();
    let mut horizontal = BTreeMap::new();
    let mut vertical = BTreeMap::new();
    for (depth, level) in levels.iter().enumerate() {
        let p = -(depth as i64);
        for (q, deg) in [(1i64, 0usize), (0, 1)] {
            let parts: Vec<_> = level
                .iter()
                .map(|(_, b)| cochain_group(k, b, deg, g))
                .collect();
            groups.insert(
                (p, q),
                FgAbGroup::direct_sum(&parts.iter().collect::<Vec<_>>()),
            );
        }
        let ds: Vec<Matrix> = level
            .iter()
            .map(|(_, b)| coboundary(k, b, 0, g).matrix().neg())
            .collect();
        horizontal.insert((p, 1), Matrix::block_diag(&ds.iter().collect::<Vec<_>>()));
        if depth + 1 < levels.len() {
            for (q, deg) in [(1i64, 0usize), (0, 1)] {
                let src: Vec<usize> = level.iter().map(|(_, b)| b.of_dim(deg).len()).collect();
                let src_off: Vec<usize> = src
                    .iter()
                    .scan(0, |acc, &l| {
                        let o = *acc;
                        *acc += l;
                        Some(o)
                    })
                    .collect();
                let pos: BTreeMap<&Vec<usize>, usize> =
                    level.iter().enumerate().map(|(i, (j, _))| (j, i)).collect();
                let mut rows = 0;
                let mut entries = Vec::new();
                for (idx, t) in &levels[depth + 1] {
                    let len = t.of_dim(deg).len();
                    for drop in 0..idx.len() {
                        let mut face = idx.clone();
                        face.remove(drop);
                        let s = pos[&face];
                        let r = restrict(k, &level[s].1, t, deg, g)?;
                        let sign = if drop % 2 == 0 { 1 } else { -1 };
                        for (c, col) in r.matrix().columns().iter().enumerate() {
                            for (i, x) in col.iter() {
                                entries.push((rows + i, src_off[s] + c, x * int(sign)));
                            }
                        }
                    }
                    rows += len;
                }
                let cols: usize = src.iter().sum();
                vertical.insert((p, q), Matrix::from_entries(rows, cols, entries));
            }
        }
    }
    let d = DoubleComplex::new((-2, 0), (0, 1), groups, horizontal, vertical)?;
    Ok(total_complex(&d, SumMode::Product, Truncation::NonNegative)?.complex)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::quasi_iso_check;
    use crate::gauge::extended::extended_config_direct;
    use crate::gauge::local::local_config_complex;
    use crate::simplicial::cohomology;

    fn sphere() -> SimplicialComplex {
        SimplicialComplex::from_facets(&[&[0, 1, 2], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3]]).unwrap()
    }

    #[test]
    fn one_star_is_local() {
        let k = SimplicialComplex::from_facets(&[&[0, 1]]).unwrap();
        let g = CoeffGroup::cyclic(2).unwrap();
        let d = deligne_complex(&k, g).unwrap();
        assert_eq!(
            d.complex().homology().unwrap(),
            local_config_complex(&k, &k.whole(), g).homology().unwrap()
        );
    }

    #[test]
    fn sphere_matches_cech_oracle_and_constants() {
        let k = sphere();
        let g = CoeffGroup::cyclic(2).unwrap();
        let d = deligne_complex(&k, g).unwrap();
        let h = d.complex().homology().unwrap();
        assert_eq!(h, cech_deligne(&k, g).unwrap().homology().unwrap());
        let h0 = &cohomology(&k, &k.whole(), g).unwrap()[0].1;
        assert_eq!(
            h.iter().find(|(n, _)| *n == 1).unwrap().1.invariants(),
            h0.invariants()
        );
        let ext = extended_config_direct(&k, g).unwrap();
        assert!(quasi_iso_check(&psi_map(&d, &ext).unwrap()).unwrap());
    }

    #[test]
    fn simplex_maps_are_inverse() {
        let k = SimplicialComplex::from_facets(&[&[0, 1, 2]]).unwrap();
        let g = CoeffGroup::cyclic(6).unwrap();
        let d = deligne_complex(&k, g).unwrap();
        let ext = extended_config_direct(&k, g).unwrap();
        let psi = psi_map(&d, &ext).unwrap();
        let phi = phi_map(&ext, &d).unwrap();
        assert!(psi.then(&phi).unwrap().is_identity());
        assert!(phi.then(&psi).unwrap().is_identity());
    }

    #[test]
    fn path_fails_the_covering_precondition() {
        let k = SimplicialComplex::from_maximal(&[vec!["v", "w"], vec!["w", "x"]]).unwrap();
        let g = CoeffGroup::cyclic(2).unwrap();
        let d = deligne_complex(&k, g).unwrap();
        let ext = extended_config_direct(&k, g).unwrap();
        match phi_map(&ext, &d) {
            Err(Error::Covering { u, v, simplex }) => {
                assert_eq!(
                    (u.as_str(), v.as_str(), simplex.as_str()),
                    ("St[v]", "St[x]", "[w]")
                );
            }
            other => panic!("expected a covering failure, got {other:?}"),
        }
        // ψ is still a quasi-isomorphism
        assert!(quasi_iso_check(&psi_map(&d, &ext).unwrap()).unwrap());
    }

    #[test]
    fn membership_reports_the_pair() {
        let k = SimplicialComplex::from_facets(&[&[0, 1, 2]]).unwrap();
        let d = deligne_complex(&k, CoeffGroup::cyclic(2).unwrap()).unwrap();
        let bad = DeligneElement {
            a: BTreeMap::new(),
            g: BTreeMap::from([((0, 0), SparseVec::unit(0))]),
        };
        assert!(d.check_membership(&d.to_ambient(&bad)).is_err());
        for rep in d.presented.representatives(0) {
            d.check_membership(rep).unwrap();
        }
    }
}

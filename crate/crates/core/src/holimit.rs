//! Homotopy limits of contravariant diagrams.
//!
//! For a contravariant `X` on `P`, level `n` of the cosimplicial replacement
//! is `∏ X(c_0)` over weakly increasing chains `c_0 ≤ … ≤ c_n`. Co-face `d^0`
//! drops `c_0` and applies `X(c_0 ≤ c_1)`, `d^i` drops `c_i`, and `e^i`
//! repeats `c_i`. Its co-normalized Moore complex is the same product over
//! strictly increasing chains, which is what [`homotopy_limit`] totalizes.

use std::collections::{BTreeMap, HashMap};

use crate::abelian::{
    hom_cokernel, hom_kernel, int, FgAbGroup, GroupHom, Integer, Matrix, SparseVec,
};
use crate::complexes::{
    total_complex, ChainComplex, ChainMap, DoubleComplex, SumMode, TotalComplex, Truncation,
};
use crate::diagrams::{Diagram, Variance};
use crate::error::{Error, Result};
use crate::moore::{conormalized_moore, CosimplicialObject, MooreComplex};

/// Which chain each generator of a chain-indexed sum belongs to.
#[derive(Clone, Debug)]
pub struct Layout {
    pub chains: Vec<Vec<usize>>,
    /// Offset of each chain's block; one past the end is `group.ngens()`.
    pub offsets: Vec<usize>,
    pub group: FgAbGroup,
}

impl Layout {
    pub(crate) fn new(d: &Diagram, chains: Vec<Vec<usize>>, q: i64, sep: &str) -> Self {
        let mut offsets = Vec::with_capacity(chains.len() + 1);
        let mut parts = Vec::with_capacity(chains.len());
        let mut off = 0;
        for c in &chains {
            offsets.push(off);
            let g = d.value(c[0]).group(q);
            let name = chain_label(d, c, sep);
            let labels = (0..g.ngens())
                .map(|i| format!("{name}:{}", g.label(i)))
                .collect();
            off += g.ngens();
            parts.push(g.with_labels(labels));
        }
        offsets.push(off);
        let group = FgAbGroup::direct_sum(&parts.iter().collect::<Vec<_>>());
        Layout {
            chains,
            offsets,
            group,
        }
    }

    pub fn block(&self, idx: usize) -> std::ops::Range<usize> {
        self.offsets[idx]..self.offsets[idx + 1]
    }

    pub(crate) fn index(&self) -> HashMap<&[usize], usize> {
        self.chains
            .iter()
            .enumerate()
            .map(|(i, c)| (c.as_slice(), i))
            .collect()
    }
}

/// Object names joined by `sep`, first object first.
pub fn chain_label(d: &Diagram, c: &[usize], sep: &str) -> String {
    c.iter()
        .map(|&a| d.poset().name(a))
        .collect::<Vec<_>>()
        .join(sep)
}

/// One block `(target chain, source chain, map, sign)`; `None` is the identity.
pub(crate) type Term<'a> = (usize, usize, Option<&'a ChainMap>, i64);

pub(crate) fn assemble(src: &Layout, tgt: &Layout, terms: &[Term<'_>], q: i64) -> Matrix {
    let mut entries: Vec<(usize, usize, Integer)> = Vec::new();
    for &(t, s, f, sign) in terms {
        let (r0, c0) = (tgt.offsets[t], src.offsets[s]);
        match f {
            None => {
                for i in 0..src.block(s).len() {
                    entries.push((r0 + i, c0 + i, int(sign)));
                }
            }
            Some(f) => {
                for (j, col) in f.component(q).matrix().columns().iter().enumerate() {
                    for (i, v) in col.iter() {
                        entries.push((r0 + i, c0 + j, v * int(sign)));
                    }
                }
            }
        }
    }
    Matrix::from_entries(tgt.group.ngens(), src.group.ngens(), entries)
}

pub(crate) fn value_degrees(d: &Diagram) -> (i64, i64) {
    let nonempty: Vec<&ChainComplex> = d.values().iter().filter(|c| !c.is_empty()).collect();
    let lo = nonempty.iter().map(|c| c.lo()).min().unwrap_or(0);
    let hi = nonempty.iter().map(|c| c.hi()).max().unwrap_or(0);
    (lo, hi)
}

/// Sum of the value complexes over `chains`, one layout per degree.
pub(crate) fn summed_complex(
    d: &Diagram,
    chains: &[Vec<usize>],
    sep: &str,
) -> Result<(ChainComplex, BTreeMap<i64, Layout>)> {
    let (lo, hi) = value_degrees(d);
    let layouts: BTreeMap<i64, Layout> = (lo..=hi)
        .map(|q| (q, Layout::new(d, chains.to_vec(), q, sep)))
        .collect();
    let groups = layouts.values().map(|l| l.group.clone()).collect();
    let diffs = (lo + 1..=hi)
        .map(|q| {
            let (src, tgt) = (&layouts[&q], &layouts[&(q - 1)]);
            let mut entries = Vec::new();
            for (i, c) in chains.iter().enumerate() {
                let m = d.value(c[0]).differential(q);
                for (j, col) in m.matrix().columns().iter().enumerate() {
                    for (r, v) in col.iter() {
                        entries.push((tgt.offsets[i] + r, src.offsets[i] + j, v.clone()));
                    }
                }
            }
            Matrix::from_entries(tgt.group.ngens(), src.group.ngens(), entries)
        })
        .collect();
    Ok((ChainComplex::new(lo, groups, diffs)?, layouts))
}

pub(crate) fn chain_map(
    src: &(ChainComplex, BTreeMap<i64, Layout>),
    tgt: &(ChainComplex, BTreeMap<i64, Layout>),
    terms: &[Term<'_>],
) -> Result<ChainMap> {
    let comps = src
        .1
        .keys()
        .map(|&q| (q, assemble(&src.1[&q], &tgt.1[&q], terms, q)))
        .collect();
    ChainMap::new(&src.0, &tgt.0, comps)
}

fn without(c: &[usize], i: usize) -> Vec<usize> {
    let mut v = c.to_vec();
    v.remove(i);
    v
}

fn repeated(c: &[usize], i: usize) -> Vec<usize> {
    let mut v = c.to_vec();
    v.insert(i, c[i]);
    v
}

fn require(d: &Diagram, v: Variance) -> Result<()> {
    if d.variance() != v {
        return Err(Error::Diagram(format!("expected a {v:?} diagram")));
    }
    d.verify()
}

/// The cosimplicial replacement up to level `cutoff`, with identities verified.
#[derive(Clone, Debug)]
pub struct CosimplicialReplacement {
    pub object: CosimplicialObject,
    /// `layouts[n][q]`: the nerve chains of level `n` and their blocks in degree `q`.
    pub layouts: Vec<BTreeMap<i64, Layout>>,
}

pub fn cosimplicial_replacement(d: &Diagram, cutoff: usize) -> Result<CosimplicialReplacement> {
    require(d, Variance::Contravariant)?;
    let levels: Vec<(ChainComplex, BTreeMap<i64, Layout>)> = (0..=cutoff)
        .map(|n| summed_complex(d, &d.poset().nerve(n), " ≤ "))
        .collect::<Result<_>>()?;
    let chains = |n: usize| &levels[n].1.values().next().expect("some degree").chains;
    let mut cofaces = Vec::new();
    for n in 0..cutoff {
        let src_index = levels[n].1.values().next().expect("some degree").index();
        let relation_maps: Vec<Option<ChainMap>> = chains(n + 1)
            .iter()
            .map(|c| {
                if c[0] == c[1] {
                    None
                } else {
                    d.map(c[0], c[1])
                }
            })
            .collect();
        let mut row = Vec::new();
        for i in 0..=n + 1 {
            let terms: Vec<Term<'_>> = chains(n + 1)
                .iter()
                .enumerate()
                .map(|(t, c)| {
                    let s = src_index[without(c, i).as_slice()];
                    (
                        t,
                        s,
                        if i == 0 {
                            relation_maps[t].as_ref()
                        } else {
                            None
                        },
                        1,
                    )
                })
                .collect();
            row.push(chain_map(&levels[n], &levels[n + 1], &terms)?);
        }
        cofaces.push(row);
    }
    let mut codegeneracies = vec![Vec::new()];
    for n in 1..=cutoff {
        let src_index = levels[n].1.values().next().expect("some degree").index();
        let mut row = Vec::new();
        for i in 0..n {
            let terms: Vec<Term<'_>> = chains(n - 1)
                .iter()
                .enumerate()
                .map(|(t, c)| (t, src_index[repeated(c, i).as_slice()], None, 1))
                .collect();
            row.push(chain_map(&levels[n], &levels[n - 1], &terms)?);
        }
        codegeneracies.push(row);
    }
    let layouts = levels.iter().map(|l| l.1.clone()).collect();
    let object = CosimplicialObject::new(
        levels.into_iter().map(|l| l.0).collect(),
        cofaces,
        codegeneracies,
    )?;
    Ok(CosimplicialReplacement { object, layouts })
}

/// The strict-chain double complex, its totalization, and the bookkeeping
/// needed to read elements back as families indexed by chains.
#[derive(Clone, Debug)]
pub struct Holim {
    pub double: DoubleComplex,
    pub total: TotalComplex,
    /// Keyed by `(p, q)` with `p = −n` for chains of `n + 1` objects.
    pub layouts: BTreeMap<(i64, i64), Layout>,
}

impl Holim {
    pub fn complex(&self) -> &ChainComplex {
        &self.total.complex
    }
}

/// Strict chains are needed up to `n = hi + 1`: `Tot_{−1}` decides the degree-0 kernel.
pub fn homotopy_limit(d: &Diagram) -> Result<Holim> {
    let d = match d.variance() {
        Variance::Contravariant => d.clone(),
        Variance::Covariant => d.opposite(),
    };
    require(&d, Variance::Contravariant)?;
    let (qlo, qhi) = value_degrees(&d);
    let depth = (qhi + 1).max(0) as usize;
    let strict: Vec<Vec<Vec<usize>>> = (0..=depth)
        .map(|n| d.poset().chains(n))
        .take_while(|c| !c.is_empty())
        .collect();
    let nmax = strict.len().saturating_sub(1) as i64;
    let mut layouts = BTreeMap::new();
    for (n, chains) in strict.iter().enumerate() {
        for q in qlo..=qhi {
            layouts.insert((-(n as i64), q), Layout::new(&d, chains.clone(), q, " < "));
        }
    }
    let mut groups = BTreeMap::new();
    let mut horizontal = BTreeMap::new();
    let mut vertical = BTreeMap::new();
    let relation: BTreeMap<(usize, usize), ChainMap> = strict
        .get(1)
        .into_iter()
        .flatten()
        .map(|c| ((c[0], c[1]), d.map(c[0], c[1]).expect("c_0 < c_1")))
        .collect();
    for (&(p, q), lay) in &layouts {
        groups.insert((p, q), lay.group.clone());
        if q > qlo {
            let tgt = &layouts[&(p, q - 1)];
            let mut entries = Vec::new();
            for (i, c) in lay.chains.iter().enumerate() {
                for (j, col) in d
                    .value(c[0])
                    .differential(q)
                    .matrix()
                    .columns()
                    .iter()
                    .enumerate()
                {
                    for (r, v) in col.iter() {
                        entries.push((tgt.offsets[i] + r, lay.offsets[i] + j, v.clone()));
                    }
                }
            }
            horizontal.insert(
                (p, q),
                Matrix::from_entries(tgt.group.ngens(), lay.group.ngens(), entries),
            );
        }
        if p > -nmax {
            let tgt = &layouts[&(p - 1, q)];
            let index = lay.index();
            let mut terms: Vec<Term<'_>> = Vec::new();
            for (t, c) in tgt.chains.iter().enumerate() {
                for i in 0..c.len() {
                    let s = index[without(c, i).as_slice()];
                    if i == 0 {
                        terms.push((t, s, Some(&relation[&(c[0], c[1])]), 1));
                    } else {
                        terms.push((t, s, None, if i % 2 == 0 { 1 } else { -1 }));
                    }
                }
            }
            vertical.insert((p, q), assemble(lay, tgt, &terms, q));
        }
    }
    let double = DoubleComplex::new((-nmax, 0), (qlo, qhi), groups, horizontal, vertical)?;
    let total = total_complex(&double, SumMode::Product, Truncation::NonNegative)?;
    Ok(Holim {
        double,
        total,
        layouts,
    })
}

/// The holim complex, truncated to non-negative degrees.
pub fn holim(d: &Diagram) -> Result<ChainComplex> {
    Ok(homotopy_limit(d)?.total.complex)
}

/// Outcome of matching the co-normalized Moore complex with the strict-chain product.
#[derive(Clone, Debug)]
pub struct BasisMatching {
    /// Number of `(p, q)` entries matched.
    pub entries: usize,
    /// Number of strict-chain generators matched.
    pub generators: usize,
}

/// Checks that the co-degeneracy kernel intersection at each `(−n, q)` is
/// exactly the coordinate subgroup on strict chains, and that the Moore
/// differential restricts to the strict-chain vertical differential.
pub fn match_conormalized(d: &Diagram, max_level: usize) -> Result<BasisMatching> {
    let rep = cosimplicial_replacement(d, max_level)?;
    let moore = conormalized_moore(&rep.object, max_level)?;
    let hl = homotopy_limit(d)?;
    let mut entries = 0;
    let mut generators = 0;
    for (&(p, q), sq) in &moore.entries {
        let n = (-p) as usize;
        let Some(strict) = hl.layouts.get(&(p, q)) else {
            if !sq.group().is_trivial() {
                return Err(Error::Mismatch(format!(
                    "Moore entry ({p}, {q}) is nonzero but there are no strict chains"
                )));
            }
            continue;
        };
        let level = &rep.layouts[n][&q];
        let inclusion = strict_inclusion(strict, level)?;
        let (iso, gens) = iso_into(&moore, p, q, &inclusion, &strict.group)?;
        if !iso {
            return Err(Error::Mismatch(format!(
                "strict chains do not span the Moore entry ({p}, {q})"
            )));
        }
        generators += gens;
        entries += 1;
        if n < max_level {
            if let Some(next) = hl.layouts.get(&(p - 1, q)) {
                let next_inc = strict_inclusion(next, &rep.layouts[n + 1][&q])?;
                let delta = (0..=n + 1).try_fold(
                    GroupHom::zero(&level.group, &rep.layouts[n + 1][&q].group),
                    |acc, i| {
                        let c = rep.object.coface(n, i).component(q);
                        if i % 2 == 0 {
                            acc.add(&c)
                        } else {
                            acc.sub(&c)
                        }
                    },
                )?;
                let lhs = inclusion.then(&delta)?;
                let rhs = hl.double.v(p, q).then(&next_inc)?;
                if !lhs.same_map(&rhs) {
                    return Err(Error::Mismatch(format!(
                        "Moore differential differs from the strict-chain one at ({p}, {q})"
                    )));
                }
            }
        }
    }
    Ok(BasisMatching {
        entries,
        generators,
    })
}

/// Unit-vector embedding of the strict-chain blocks into a level of the replacement.
pub(crate) fn strict_inclusion(strict: &Layout, level: &Layout) -> Result<GroupHom> {
    let index = level.index();
    let mut cols = Vec::with_capacity(strict.group.ngens());
    for (i, c) in strict.chains.iter().enumerate() {
        let at = *index
            .get(c.as_slice())
            .ok_or_else(|| Error::Mismatch("strict chain missing from the nerve".into()))?;
        for k in 0..strict.block(i).len() {
            cols.push(SparseVec::unit(level.offsets[at] + k));
        }
    }
    GroupHom::new(
        &strict.group,
        &level.group,
        Matrix::from_columns(level.group.ngens(), cols),
    )
}

/// Whether `inclusion` lands in the Moore entry and is an isomorphism onto it.
pub(crate) fn iso_into(
    moore: &MooreComplex,
    p: i64,
    q: i64,
    inclusion: &GroupHom,
    strict: &FgAbGroup,
) -> Result<(bool, usize)> {
    let sq = &moore.entries[&(p, q)];
    let cols = inclusion.matrix().columns();
    if cols.iter().any(|c| !sq.contains(c)) {
        return Ok((false, 0));
    }
    let f = GroupHom::new(strict, sq.group(), sq.coordinate_matrix(cols)?)?;
    let injective = hom_kernel(&f)?.0.is_trivial();
    let surjective = hom_cokernel(&f)?.0.is_trivial();
    Ok((injective && surjective, cols.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::homology_report;
    use crate::diagrams::config_diagram;
    use crate::poset::Poset;
    use crate::simplicial::{cohomology, star_poset, CoeffGroup, SimplicialComplex};

    fn sphere() -> SimplicialComplex {
        SimplicialComplex::from_facets(&[&[0, 1, 2], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3]]).unwrap()
    }

    #[test]
    fn one_object_holim_is_the_value() {
        let c = ChainComplex::new(
            0,
            vec![FgAbGroup::free(1), FgAbGroup::free(1)],
            vec![Matrix::from_rows(&[vec![3]])],
        )
        .unwrap();
        let d = Diagram::constant(&Poset::linear(1), Variance::Contravariant, &c);
        assert_eq!(
            homology_report(&holim(&d).unwrap().homology().unwrap()),
            "H_0 = Z/3\nH_1 = 0\n"
        );
    }

    #[test]
    fn discrete_holim_is_the_product() {
        let c = ChainComplex::concentrated(0, FgAbGroup::cyclic(2));
        let d = Diagram::constant(&Poset::discrete(2), Variance::Contravariant, &c);
        assert_eq!(
            homology_report(&holim(&d).unwrap().homology().unwrap()),
            "H_0 = Z/2 + Z/2\n"
        );
    }

    #[test]
    fn two_chain_replacement_levels() {
        let c = ChainComplex::concentrated(0, FgAbGroup::free(1));
        let d = Diagram::constant(&Poset::linear(2), Variance::Contravariant, &c);
        let r = cosimplicial_replacement(&d, 2).unwrap();
        // level 0: U, V; level 1: U≤U, U≤V, V≤V
        assert_eq!(r.layouts[0][&0].chains, vec![vec![0], vec![1]]);
        assert_eq!(
            r.layouts[1][&0].chains,
            vec![vec![0, 0], vec![0, 1], vec![1, 1]]
        );
        assert_eq!(r.object.level(2).group(0).ngens(), 4);
    }

    #[test]
    fn constant_sheaf_on_the_sphere() {
        let k = sphere();
        let sp = star_poset(&k);
        let a = ChainComplex::concentrated(2, FgAbGroup::free(1));
        let d = Diagram::constant(sp.poset(), Variance::Contravariant, &a);
        let h = holim(&d).unwrap().homology().unwrap();
        assert_eq!(homology_report(&h), "H_0 = Z\nH_1 = 0\nH_2 = Z\n");
        let oracle = cohomology(&k, &k.whole(), CoeffGroup::Integers).unwrap();
        for (deg, g) in &h {
            assert_eq!(g.invariants(), oracle[(2 - deg) as usize].1.invariants());
        }
    }

    #[test]
    fn codegeneracy_kernels_are_strict_chains() {
        let k = SimplicialComplex::from_maximal(&[vec!["v", "w"], vec!["w", "x"]]).unwrap();
        let d = config_diagram(&star_poset(&k), CoeffGroup::cyclic(2).unwrap()).unwrap();
        let m = match_conormalized(&d, 2).unwrap();
        assert!(m.entries >= 4 && m.generators > 0);
        let e0d0 = {
            let r = cosimplicial_replacement(&d, 1).unwrap();
            r.object
                .coface(0, 0)
                .then(r.object.codegeneracy(1, 0))
                .unwrap()
        };
        assert!(e0d0.is_identity());
    }
}

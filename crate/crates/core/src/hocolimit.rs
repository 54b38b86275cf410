//! Homotopy colimits of covariant diagrams.
//!
//! Level `n` of the simplicial replacement is `∐ Y(c_0)` over weakly
//! increasing chains `c_0 ≤ … ≤ c_n`. Faces are indexed from the top of the
//! chain: `∂_i` drops `c_{n−i}`, so `∂_n` drops `c_0` and applies
//! `Y(c_0 ≤ c_1)`; `ε_i` repeats `c_{n−i}`. The normalized Moore complex is
//! the coproduct over strictly increasing chains.

use std::collections::BTreeMap;

use crate::complexes::{
    total_complex, ChainComplex, ChainMap, DoubleComplex, SumMode, TotalComplex, Truncation,
};
use crate::diagrams::{Diagram, Variance};
use crate::error::{Error, Result};
use crate::holimit::{
    assemble, chain_map, iso_into, strict_inclusion, summed_complex, value_degrees, BasisMatching,
    Layout, Term,
};
use crate::moore::{normalized_moore, SimplicialObject};

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

fn require_covariant(d: &Diagram) -> Result<()> {
    if d.variance() != Variance::Covariant {
        return Err(Error::Diagram("expected a covariant diagram".into()));
    }
    d.verify()
}

/// The simplicial replacement up to level `cutoff`, with identities verified.
#[derive(Clone, Debug)]
pub struct SimplicialReplacement {
    pub object: SimplicialObject,
    /// `layouts[n][q]`: the nerve chains of level `n` and their blocks in degree `q`.
    pub layouts: Vec<BTreeMap<i64, Layout>>,
}

pub fn simplicial_replacement(d: &Diagram, cutoff: usize) -> Result<SimplicialReplacement> {
    require_covariant(d)?;
    let levels: Vec<(ChainComplex, BTreeMap<i64, Layout>)> = (0..=cutoff)
        .map(|n| summed_complex(d, &d.poset().nerve(n), " ≤ "))
        .collect::<Result<_>>()?;
    let chains = |n: usize| {
        levels[n]
            .1
            .values()
            .next()
            .expect("some degree")
            .chains
            .clone()
    };
    let mut faces = vec![Vec::new()];
    for n in 1..=cutoff {
        let tgt_index = levels[n - 1]
            .1
            .values()
            .next()
            .expect("some degree")
            .index();
        let src_chains = chains(n);
        let relation_maps: Vec<Option<ChainMap>> = src_chains
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
        for i in 0..=n {
            let drop = n - i;
            let terms: Vec<Term<'_>> = src_chains
                .iter()
                .enumerate()
                .map(|(s, c)| {
                    (
                        tgt_index[without(c, drop).as_slice()],
                        s,
                        if drop == 0 {
                            relation_maps[s].as_ref()
                        } else {
                            None
                        },
                        1,
                    )
                })
                .collect();
            row.push(chain_map(&levels[n], &levels[n - 1], &terms)?);
        }
        faces.push(row);
    }
    let mut degeneracies = Vec::new();
    for n in 0..cutoff {
        let tgt_index = levels[n + 1]
            .1
            .values()
            .next()
            .expect("some degree")
            .index();
        let mut row = Vec::new();
        for i in 0..=n {
            let terms: Vec<Term<'_>> = chains(n)
                .iter()
                .enumerate()
                .map(|(s, c)| (tgt_index[repeated(c, n - i).as_slice()], s, None, 1))
                .collect();
            row.push(chain_map(&levels[n], &levels[n + 1], &terms)?);
        }
        degeneracies.push(row);
    }
    let layouts = levels.iter().map(|l| l.1.clone()).collect();
    let object = SimplicialObject::new(
        levels.into_iter().map(|l| l.0).collect(),
        faces,
        degeneracies,
    )?;
    Ok(SimplicialReplacement { object, layouts })
}

/// The strict-chain double complex and its totalization; degree 0 is the
/// cokernel of `Tot_1 → Tot_0` with labelled generators.
#[derive(Clone, Debug)]
pub struct Hocolim {
    pub double: DoubleComplex,
    pub total: TotalComplex,
    /// Keyed by `(p, q)` with `p = n` for chains of `n + 1` objects.
    pub layouts: BTreeMap<(i64, i64), Layout>,
}

impl Hocolim {
    pub fn complex(&self) -> &ChainComplex {
        &self.total.complex
    }
}

/// Strict chains are needed up to `n = 1 − lo`: `Tot_1` decides the degree-0 quotient.
pub fn homotopy_colimit(d: &Diagram) -> Result<Hocolim> {
    let d = match d.variance() {
        Variance::Covariant => d.clone(),
        Variance::Contravariant => d.opposite(),
    };
    require_covariant(&d)?;
    let (qlo, qhi) = value_degrees(&d);
    let depth = (1 - qlo).max(0) as usize;
    let strict: Vec<Vec<Vec<usize>>> = (0..=depth)
        .map(|n| d.poset().chains(n))
        .take_while(|c| !c.is_empty())
        .collect();
    let nmax = strict.len().saturating_sub(1) as i64;
    let mut layouts = BTreeMap::new();
    for (n, chains) in strict.iter().enumerate() {
        for q in qlo..=qhi {
            layouts.insert((n as i64, q), Layout::new(&d, chains.clone(), q, " < "));
        }
    }
    let relation: BTreeMap<(usize, usize), ChainMap> = strict
        .get(1)
        .into_iter()
        .flatten()
        .map(|c| ((c[0], c[1]), d.map(c[0], c[1]).expect("c_0 < c_1")))
        .collect();
    let mut groups = BTreeMap::new();
    let mut horizontal = BTreeMap::new();
    let mut vertical = BTreeMap::new();
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
                crate::abelian::Matrix::from_entries(tgt.group.ngens(), lay.group.ngens(), entries),
            );
        }
        if p > 0 {
            let tgt = &layouts[&(p - 1, q)];
            let index = tgt.index();
            let n = p as usize;
            let mut terms: Vec<Term<'_>> = Vec::new();
            for (s, c) in lay.chains.iter().enumerate() {
                for j in 0..=n {
                    let t = index[without(c, j).as_slice()];
                    let sign = if (n - j).is_multiple_of(2) { 1 } else { -1 };
                    let map = if j == 0 {
                        Some(&relation[&(c[0], c[1])])
                    } else {
                        None
                    };
                    terms.push((t, s, map, sign));
                }
            }
            vertical.insert((p, q), assemble(lay, tgt, &terms, q));
        }
    }
    let double = DoubleComplex::new((0, nmax), (qlo, qhi), groups, horizontal, vertical)?;
    let total = total_complex(&double, SumMode::Coproduct, Truncation::NonPositive)?;
    Ok(Hocolim {
        double,
        total,
        layouts,
    })
}

/// The hocolim complex, truncated to non-positive degrees.
pub fn hocolim(d: &Diagram) -> Result<ChainComplex> {
    Ok(homotopy_colimit(d)?.total.complex)
}

/// Checks that strict chains map isomorphically onto the normalized quotient
/// at each `(n, q)` and that the Moore differential restricts to the
/// strict-chain vertical differential.
pub fn match_normalized(d: &Diagram, max_level: usize) -> Result<BasisMatching> {
    let rep = simplicial_replacement(d, max_level)?;
    let moore = normalized_moore(&rep.object, max_level)?;
    let hc = homotopy_colimit(d)?;
    let mut entries = 0;
    let mut generators = 0;
    for (&(p, q), sq) in &moore.entries {
        let n = p as usize;
        let Some(strict) = hc.layouts.get(&(p, q)) else {
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
                "strict chains do not map onto the Moore entry ({p}, {q})"
            )));
        }
        generators += gens;
        entries += 1;
        if n >= 1 {
            let prev = &hc.layouts[&(p - 1, q)];
            let prev_inc = strict_inclusion(prev, &rep.layouts[n - 1][&q])?;
            let zero = crate::abelian::GroupHom::zero(&level.group, &rep.layouts[n - 1][&q].group);
            let delta = (0..=n).try_fold(zero, |acc, i| {
                let c = rep.object.face(n, i).component(q);
                if i % 2 == 0 {
                    acc.add(&c)
                } else {
                    acc.sub(&c)
                }
            })?;
            let lhs = inclusion.then(&delta)?;
            let rhs = hc.double.v(p, q).then(&prev_inc)?;
            if !lhs.same_map(&rhs) {
                return Err(Error::Mismatch(format!(
                    "Moore differential differs from the strict-chain one at ({p}, {q})"
                )));
            }
        }
    }
    Ok(BasisMatching {
        entries,
        generators,
    })
}

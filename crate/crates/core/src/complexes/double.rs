//! Double complexes with commuting squares and their truncated totalizations.
//!
//! Horizontal differentials go `(p, q) → (p, q−1)`, vertical ones
//! `(p, q) → (p−1, q)`. The total differential is `δv + (−1)^p δh`.

use std::collections::BTreeMap;

use super::ChainComplex;
use crate::abelian::{FgAbGroup, GroupHom, Matrix, Span, SparseVec, Subquotient};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SumMode {
    Product,
    Coproduct,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Truncation {
    /// Degree 0 becomes `ker(Tot_0 → Tot_{-1})`; negative degrees dropped.
    NonNegative,
    /// Degree 0 becomes `coker(Tot_1 → Tot_0)`; positive degrees dropped.
    NonPositive,
}

#[derive(Clone, Debug)]
pub struct DoubleComplex {
    p_range: (i64, i64),
    q_range: (i64, i64),
    groups: BTreeMap<(i64, i64), FgAbGroup>,
    horizontal: BTreeMap<(i64, i64), GroupHom>,
    vertical: BTreeMap<(i64, i64), GroupHom>,
}

impl DoubleComplex {
    /// `groups`, `horizontal` and `vertical` are keyed by the source position;
    /// absent groups are zero and absent maps are zero.
    pub fn new(
        p_range: (i64, i64),
        q_range: (i64, i64),
        groups: BTreeMap<(i64, i64), FgAbGroup>,
        horizontal: BTreeMap<(i64, i64), Matrix>,
        vertical: BTreeMap<(i64, i64), Matrix>,
    ) -> Result<Self> {
        if groups
            .keys()
            .any(|(p, q)| *p < p_range.0 || *p > p_range.1 || *q < q_range.0 || *q > q_range.1)
        {
            return Err(Error::DoubleComplex(
                "group outside the index rectangle".into(),
            ));
        }
        let mut d = DoubleComplex {
            p_range,
            q_range,
            groups,
            horizontal: BTreeMap::new(),
            vertical: BTreeMap::new(),
        };
        for ((p, q), m) in horizontal {
            let h = GroupHom::new(&d.group(p, q), &d.group(p, q - 1), m)?;
            d.horizontal.insert((p, q), h);
        }
        for ((p, q), m) in vertical {
            let v = GroupHom::new(&d.group(p, q), &d.group(p - 1, q), m)?;
            d.vertical.insert((p, q), v);
        }
        d.check()?;
        Ok(d)
    }

    fn check(&self) -> Result<()> {
        for p in self.p_range.0..=self.p_range.1 {
            for q in self.q_range.0..=self.q_range.1 {
                let hh = self.h(p, q).then(&self.h(p, q - 1))?;
                let vv = self.v(p, q).then(&self.v(p - 1, q))?;
                if !hh.is_zero() || !vv.is_zero() {
                    return Err(Error::DoubleComplex(format!(
                        "a row or column fails δ∘δ = 0 at ({p}, {q})"
                    )));
                }
                let a = self.h(p, q).then(&self.v(p, q - 1))?;
                let b = self.v(p, q).then(&self.h(p - 1, q))?;
                if !a.same_map(&b) {
                    return Err(Error::NonCommuting { p, q });
                }
            }
        }
        Ok(())
    }

    pub fn p_range(&self) -> (i64, i64) {
        self.p_range
    }

    pub fn q_range(&self) -> (i64, i64) {
        self.q_range
    }

    pub fn group(&self, p: i64, q: i64) -> FgAbGroup {
        self.groups
            .get(&(p, q))
            .cloned()
            .unwrap_or_else(FgAbGroup::zero)
    }

    /// Horizontal differential out of `(p, q)`.
    pub fn h(&self, p: i64, q: i64) -> GroupHom {
        self.horizontal
            .get(&(p, q))
            .cloned()
            .unwrap_or_else(|| GroupHom::zero(&self.group(p, q), &self.group(p, q - 1)))
    }

    /// Vertical differential out of `(p, q)`.
    pub fn v(&self, p: i64, q: i64) -> GroupHom {
        self.vertical
            .get(&(p, q))
            .cloned()
            .unwrap_or_else(|| GroupHom::zero(&self.group(p, q), &self.group(p - 1, q)))
    }

    /// Swaps the two indices: `T_{p,q} = D_{q,p}`, vertical and horizontal exchanged.
    pub fn transpose(&self) -> Result<DoubleComplex> {
        let groups = self
            .groups
            .iter()
            .map(|((p, q), g)| ((*q, *p), g.clone()))
            .collect();
        let horizontal = self
            .vertical
            .iter()
            .map(|((p, q), m)| ((*q, *p), m.matrix().clone()))
            .collect();
        let vertical = self
            .horizontal
            .iter()
            .map(|((p, q), m)| ((*q, *p), m.matrix().clone()))
            .collect();
        DoubleComplex::new(self.q_range, self.p_range, groups, horizontal, vertical)
    }
}

/// Position of the `(p, q)` block inside `Tot_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub p: i64,
    pub q: i64,
    pub offset: usize,
    pub len: usize,
}

#[derive(Clone, Debug)]
pub struct TotalComplex {
    pub mode: SumMode,
    pub truncation: Truncation,
    /// The truncated complex with degree 0 in canonical form.
    pub complex: ChainComplex,
    /// The untruncated total complex.
    pub untruncated: ChainComplex,
    /// Blocks of each untruncated degree, ordered by decreasing `p`.
    pub blocks: BTreeMap<i64, Vec<Block>>,
    /// Degree 0 of the truncation as a subquotient of `Tot_0`.
    pub degree_zero: Subquotient,
}

/// `Tot_n = ⊕_{p+q=n} D_{p,q}` (finite, so product and coproduct agree), truncated.
pub fn total_complex(
    d: &DoubleComplex,
    mode: SumMode,
    truncation: Truncation,
) -> Result<TotalComplex> {
    let (plo, phi) = d.p_range;
    let (qlo, qhi) = d.q_range;
    let (nlo, nhi) = ((plo + qlo).min(-1), (phi + qhi).max(1));
    let (keep_lo, keep_hi) = ((plo + qlo).min(0), (phi + qhi).max(0));
    let mut blocks: BTreeMap<i64, Vec<Block>> = BTreeMap::new();
    let mut tot_groups = Vec::new();
    for n in nlo..=nhi {
        let mut list = Vec::new();
        let mut parts = Vec::new();
        let mut offset = 0;
        for p in (plo..=phi).rev() {
            let q = n - p;
            if q < qlo || q > qhi {
                continue;
            }
            let g = d.group(p, q);
            list.push(Block {
                p,
                q,
                offset,
                len: g.ngens(),
            });
            offset += g.ngens();
            parts.push(g);
        }
        tot_groups.push(FgAbGroup::direct_sum(&parts.iter().collect::<Vec<_>>()));
        blocks.insert(n, list);
    }
    let tot = |n: i64| tot_groups[(n - nlo) as usize].clone();
    let mut diffs = Vec::new();
    for n in nlo + 1..=nhi {
        let (src, dst) = (tot(n), tot(n - 1));
        let mut entries = Vec::new();
        for b in &blocks[&n] {
            let targets = &blocks[&(n - 1)];
            let find = |p: i64, q: i64| targets.iter().find(|t| t.p == p && t.q == q);
            if let Some(t) = find(b.p - 1, b.q) {
                push_block(
                    &mut entries,
                    d.v(b.p, b.q).matrix(),
                    t.offset,
                    b.offset,
                    false,
                );
            }
            if let Some(t) = find(b.p, b.q - 1) {
                push_block(
                    &mut entries,
                    d.h(b.p, b.q).matrix(),
                    t.offset,
                    b.offset,
                    b.p.rem_euclid(2) == 1,
                );
            }
        }
        diffs.push(Matrix::from_entries(dst.ngens(), src.ngens(), entries));
    }
    let untruncated = ChainComplex::new(nlo, tot_groups.clone(), diffs)?;
    let (complex, degree_zero) = match truncation {
        Truncation::NonNegative => {
            let k = Subquotient::new(&tot(0), Span::KernelOf(&untruncated.differential(0)), &[])?;
            let mut groups = vec![k.group().clone()];
            let mut ds = Vec::new();
            if keep_hi >= 1 {
                let cols: Vec<SparseVec> = untruncated.differential(1).matrix().columns().to_vec();
                ds.push(k.coordinate_matrix(&cols)?);
            }
            for n in 1..=keep_hi {
                groups.push(tot(n));
                if n >= 2 {
                    ds.push(untruncated.differential(n).matrix().clone());
                }
            }
            (ChainComplex::new(0, groups, ds)?, k)
        }
        Truncation::NonPositive => {
            let c = Subquotient::new(
                &tot(0),
                Span::All,
                untruncated.differential(1).matrix().columns(),
            )?;
            let mut groups: Vec<FgAbGroup> = (keep_lo..0).map(tot).collect();
            groups.push(c.group().clone());
            let mut ds: Vec<Matrix> = (keep_lo + 1..0)
                .map(|n| untruncated.differential(n).matrix().clone())
                .collect();
            if keep_lo <= -1 {
                let d0 = untruncated.differential(0);
                let cols: Vec<SparseVec> =
                    c.generators().iter().map(|x| d0.apply_sparse(x)).collect();
                ds.push(Matrix::from_columns(tot(-1).ngens(), cols));
            }
            (ChainComplex::new(keep_lo, groups, ds)?, c)
        }
    };
    Ok(TotalComplex {
        mode,
        truncation,
        complex,
        untruncated,
        blocks,
        degree_zero,
    })
}

fn push_block(
    entries: &mut Vec<(usize, usize, crate::abelian::Integer)>,
    m: &Matrix,
    row0: usize,
    col0: usize,
    negate: bool,
) {
    for (j, col) in m.columns().iter().enumerate() {
        for (i, v) in col.iter() {
            entries.push((row0 + i, col0 + j, if negate { -v } else { v.clone() }));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> FgAbGroup {
        FgAbGroup::free(1)
    }

    fn one() -> Matrix {
        Matrix::from_rows(&[vec![1]])
    }

    #[test]
    fn single_column_is_the_column() {
        // column at p = 0: q = 1 → q = 0 by ×2
        let groups = BTreeMap::from([((0, 0), z()), ((0, 1), z())]);
        let h = BTreeMap::from([((0, 1), Matrix::from_rows(&[vec![2]]))]);
        let d = DoubleComplex::new((0, 0), (0, 1), groups, h, BTreeMap::new()).unwrap();
        let t = total_complex(&d, SumMode::Product, Truncation::NonNegative).unwrap();
        let h = t.complex.homology().unwrap();
        assert_eq!(
            crate::complexes::homology_report(&h),
            "H_0 = Z/2\nH_1 = 0\n"
        );
    }

    #[test]
    fn identity_square_is_acyclic() {
        let groups = BTreeMap::from([((0, 0), z()), ((0, 1), z()), ((-1, 0), z()), ((-1, 1), z())]);
        let h = BTreeMap::from([((0, 1), one()), ((-1, 1), one())]);
        let v = BTreeMap::from([((0, 0), one()), ((0, 1), one())]);
        let d = DoubleComplex::new((-1, 0), (0, 1), groups, h, v).unwrap();
        let t = total_complex(&d, SumMode::Product, Truncation::NonNegative).unwrap();
        assert!(t.untruncated.is_acyclic().unwrap());
        assert!(t.complex.is_acyclic().unwrap());
    }

    #[test]
    fn non_commuting_square_rejected() {
        let groups = BTreeMap::from([((0, 0), z()), ((0, 1), z()), ((-1, 0), z()), ((-1, 1), z())]);
        let h = BTreeMap::from([((0, 1), one()), ((-1, 1), Matrix::from_rows(&[vec![2]]))]);
        let v = BTreeMap::from([((0, 0), one()), ((0, 1), one())]);
        let r = DoubleComplex::new((-1, 0), (0, 1), groups, h, v);
        assert!(matches!(r, Err(Error::NonCommuting { .. })));
    }
}

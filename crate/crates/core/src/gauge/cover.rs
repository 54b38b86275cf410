//! The star cover of a complex and block bookkeeping for families of
//! (co)chains indexed by stars, pairs and triples of stars.

use std::collections::HashMap;

use crate::abelian::{int, FgAbGroup, Integer, Matrix, SparseVec};
use crate::error::{Error, Result};
use crate::simplicial::{
    boundary, coboundary, cochain_group, extend_by_zero, restrict, star_poset, CoeffGroup,
    SimplicialComplex, StarPoset, Subcomplex,
};

/// Stars of `K` ordered by inclusion, with all strict pairs and triples.
#[derive(Clone, Debug)]
pub struct Cover {
    pub stars: StarPoset,
    pub coeff: CoeffGroup,
    /// `U < V`, lexicographic.
    pub pairs: Vec<(usize, usize)>,
    /// `U < V < W`, lexicographic.
    pub triples: Vec<(usize, usize, usize)>,
}

impl Cover {
    pub fn new(k: &SimplicialComplex, coeff: CoeffGroup) -> Self {
        let stars = star_poset(k);
        let pairs = stars.chains(1).into_iter().map(|c| (c[0], c[1])).collect();
        let triples = stars
            .chains(2)
            .into_iter()
            .map(|c| (c[0], c[1], c[2]))
            .collect();
        Cover {
            stars,
            coeff,
            pairs,
            triples,
        }
    }

    pub fn complex(&self) -> &SimplicialComplex {
        self.stars.complex()
    }

    pub fn len(&self) -> usize {
        self.stars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stars.is_empty()
    }

    pub fn sub(&self, u: usize) -> &Subcomplex {
        self.stars.sub(u)
    }

    pub fn name(&self, u: usize) -> &str {
        self.stars.name(u)
    }

    /// Label of a chain of stars, smallest first.
    pub fn chain_label(&self, c: &[usize]) -> String {
        c.iter()
            .map(|&u| self.name(u))
            .collect::<Vec<_>>()
            .join(" < ")
    }

    /// The unique star containing every other star, if any.
    pub fn top(&self) -> Option<usize> {
        self.stars.poset().top()
    }

    pub fn intersection(&self, a: &Subcomplex, b: &Subcomplex) -> Subcomplex {
        a.intersection(b, self.complex())
    }

    pub fn restrict(&self, from: &Subcomplex, to: &Subcomplex, deg: usize) -> Matrix {
        restrict(self.complex(), from, to, deg, self.coeff)
            .expect("nested subcomplexes")
            .matrix()
            .clone()
    }

    pub fn extend(&self, from: &Subcomplex, to: &Subcomplex, deg: usize) -> Matrix {
        extend_by_zero(self.complex(), from, to, deg, self.coeff)
            .expect("nested subcomplexes")
            .matrix()
            .clone()
    }

    /// `d : C⁰ → C¹` on `base`.
    pub fn d(&self, base: &Subcomplex) -> Matrix {
        coboundary(self.complex(), base, 0, self.coeff)
            .matrix()
            .clone()
    }

    /// `∂ : C_1 → C_0` on `base`.
    pub fn boundary(&self, base: &Subcomplex) -> Matrix {
        boundary(self.complex(), base, 1, self.coeff)
            .matrix()
            .clone()
    }

    pub fn modulus(&self) -> Result<u64> {
        self.coeff.modulus().ok_or(Error::ObservablesNeedCyclic)
    }
}

/// One block of an ambient group: `C^deg(base)` (or `C_deg`) tagged by a key.
#[derive(Clone, Debug)]
pub struct Block {
    pub key: Vec<usize>,
    pub base: Subcomplex,
    pub deg: usize,
    pub offset: usize,
    pub len: usize,
}

/// A labelled direct sum of (co)chain groups, addressed by key.
#[derive(Clone, Debug)]
pub struct Blocks {
    blocks: Vec<Block>,
    index: HashMap<Vec<usize>, usize>,
    group: FgAbGroup,
}

impl Blocks {
    /// `items`: `(key, label prefix, base, degree)`; keys must be distinct.
    pub fn new(cover: &Cover, items: Vec<(Vec<usize>, String, Subcomplex, usize)>) -> Self {
        let k = cover.complex();
        let mut blocks = Vec::with_capacity(items.len());
        let mut parts = Vec::with_capacity(items.len());
        let mut offset = 0;
        for (key, prefix, base, deg) in items {
            let g = cochain_group(k, &base, deg, cover.coeff);
            let labels = (0..g.ngens())
                .map(|i| format!("{prefix}:{}", g.label(i)))
                .collect();
            let len = g.ngens();
            parts.push(g.with_labels(labels));
            blocks.push(Block {
                key,
                base,
                deg,
                offset,
                len,
            });
            offset += len;
        }
        let index = blocks
            .iter()
            .enumerate()
            .map(|(i, b)| (b.key.clone(), i))
            .collect::<HashMap<_, _>>();
        assert_eq!(index.len(), blocks.len(), "block keys are distinct");
        let group = if parts.is_empty() {
            FgAbGroup::zero().with_labels(Vec::new())
        } else {
            FgAbGroup::direct_sum(&parts.iter().collect::<Vec<_>>())
        };
        Blocks {
            blocks,
            index,
            group,
        }
    }

    pub fn group(&self) -> &FgAbGroup {
        &self.group
    }

    pub fn ngens(&self) -> usize {
        self.group.ngens()
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn get(&self, key: &[usize]) -> Option<&Block> {
        self.index.get(key).map(|&i| &self.blocks[i])
    }

    pub fn block(&self, key: &[usize]) -> &Block {
        self.get(key).unwrap_or_else(|| panic!("no block {key:?}"))
    }

    /// Local coordinates of `v` on the block `key`.
    pub fn slice(&self, v: &SparseVec, key: &[usize]) -> SparseVec {
        let b = self.block(key);
        v.reindexed(|i| (i >= b.offset && i < b.offset + b.len).then(|| i - b.offset))
    }

    /// Embeds local coordinates on `key` into the ambient group.
    pub fn embed(&self, key: &[usize], local: &SparseVec) -> SparseVec {
        let off = self.block(key).offset;
        local.reindexed(|i| Some(i + off))
    }

    /// Global index of simplex `id` inside block `key`.
    pub fn position(&self, key: &[usize], id: usize) -> Option<usize> {
        let b = self.block(key);
        b.base.local_index(b.deg, id).map(|i| b.offset + i)
    }
}

/// Accumulates signed matrix blocks into one sparse matrix.
#[derive(Debug)]
pub struct MatrixBuilder {
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, Integer)>,
}

impl MatrixBuilder {
    pub fn new(rows: usize, cols: usize) -> Self {
        MatrixBuilder {
            rows,
            cols,
            entries: Vec::new(),
        }
    }

    pub fn add(&mut self, r0: usize, c0: usize, m: &Matrix, sign: i64) {
        for (j, col) in m.columns().iter().enumerate() {
            for (i, v) in col.iter() {
                self.entries.push((r0 + i, c0 + j, v * int(sign)));
            }
        }
    }

    pub fn add_identity(&mut self, r0: usize, c0: usize, n: usize, sign: i64) {
        for i in 0..n {
            self.entries.push((r0 + i, c0 + i, int(sign)));
        }
    }

    pub fn entry(&mut self, r: usize, c: usize, v: i64) {
        self.entries.push((r, c, int(v)));
    }

    pub fn build(self) -> Matrix {
        Matrix::from_entries(self.rows, self.cols, self.entries)
    }
}

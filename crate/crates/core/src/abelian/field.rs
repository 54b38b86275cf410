//! Sparse linear algebra over `F_p`, used when every coordinate involved has
//! the same prime order.

use std::collections::BTreeMap;

use super::integer::{int, to_u64, Integer};
use super::matrix::{Matrix, SparseVec};

pub(crate) type FVec = Vec<(usize, u64)>;

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut result = 1u64;
    let (mut base, mut e) = (a % p, p - 2);
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

pub(crate) fn to_fvec(v: &SparseVec, p: u64) -> FVec {
    let pi = int(p as i64);
    v.iter()
        .filter_map(|(i, x)| {
            let r = to_u64(&super::integer::reduce(x, &pi)).expect("reduced below p");
            (r != 0).then_some((*i, r))
        })
        .collect()
}

pub(crate) fn from_fvec(v: &FVec) -> SparseVec {
    SparseVec::from_pairs(v.iter().map(|(i, x)| (*i, Integer::from(*x))).collect())
}

/// Row echelon form over `F_p` with unit leading entries.
#[derive(Clone, Debug)]
pub(crate) struct FieldEchelon {
    p: u64,
    rows: Vec<FVec>,
    pivot_row: BTreeMap<usize, usize>,
}

impl FieldEchelon {
    pub fn new(p: u64) -> Self {
        FieldEchelon {
            p,
            rows: Vec::new(),
            pivot_row: BTreeMap::new(),
        }
    }

    /// Eliminates pivot columns from `v`. With `full = false` it stops at the
    /// first column that has no pivot.
    fn reduce(&self, v: &FVec, full: bool, skip: Option<usize>) -> FVec {
        let p = self.p;
        let mut acc: BTreeMap<usize, u64> = v.iter().copied().collect();
        let mut cursor = 0usize;
        while let Some((&c, &val)) = acc.range(cursor..).next() {
            cursor = c + 1;
            match self.pivot_row.get(&c) {
                Some(&r) if Some(r) != skip => {
                    let factor = p - val;
                    for &(j, x) in &self.rows[r] {
                        let e = acc.entry(j).or_insert(0);
                        *e = (*e + factor * x) % p;
                        if *e == 0 {
                            acc.remove(&j);
                        }
                    }
                }
                _ => {
                    if !full {
                        break;
                    }
                }
            }
        }
        acc.into_iter().collect()
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: &FVec) -> bool {
        let w = self.reduce(v, false, None);
        let Some(&(lead, lv)) = w.first() else {
            return false;
        };
        let inv = inv_mod(lv, self.p);
        let w: FVec = w.into_iter().map(|(j, x)| (j, x * inv % self.p)).collect();
        self.pivot_row.insert(lead, self.rows.len());
        self.rows.push(w);
        true
    }

    /// Back-substitution: afterwards each pivot column is zero outside its row.
    pub fn make_reduced(&mut self) {
        let order: Vec<(usize, usize)> =
            self.pivot_row.iter().rev().map(|(c, r)| (*c, *r)).collect();
        for (_, r) in order {
            let reduced = self.reduce(&self.rows[r], true, Some(r));
            self.rows[r] = reduced;
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, c: usize) -> bool {
        self.pivot_row.contains_key(&c)
    }

    /// `(pivot column, row)` pairs in increasing column order.
    pub fn pivots(&self) -> impl Iterator<Item = (usize, &FVec)> {
        self.pivot_row
            .iter()
            .map(move |(c, r)| (*c, &self.rows[*r]))
    }

    /// Full reduction of `v` against a reduced echelon form.
    pub fn residue(&self, v: &FVec) -> FVec {
        self.reduce(v, true, None)
    }
}

/// Nullspace of `f` over `F_p`: basis vectors paired with their free column,
/// each equal to `1` there and `0` at every other free column.
pub(crate) fn kernel_basis(f: &Matrix, p: u64) -> Vec<(usize, FVec)> {
    let t = f.transpose();
    let mut rows: Vec<FVec> = t
        .columns()
        .iter()
        .map(|c| to_fvec(c, p))
        .filter(|r| !r.is_empty())
        .collect();
    rows.sort_by_key(|r| r.len());
    let mut ech = FieldEchelon::new(p);
    for r in &rows {
        ech.insert(r);
    }
    ech.make_reduced();
    let n = f.cols();
    let mut basis: BTreeMap<usize, FVec> = (0..n)
        .filter(|c| !ech.is_pivot(*c))
        .map(|c| (c, vec![(c, 1)]))
        .collect();
    for (c, row) in ech.pivots() {
        for &(j, x) in row.iter().skip(1) {
            if let Some(v) = basis.get_mut(&j) {
                v.push((c, (p - x) % p));
            }
        }
    }
    basis
        .into_iter()
        .map(|(c, mut v)| {
            v.sort_by_key(|(i, _)| *i);
            (c, v)
        })
        .collect()
}

/// `S / Q` over `F_p`, with coordinates read at designated columns after
/// eliminating `Q`.
#[derive(Clone, Debug)]
pub(crate) struct FieldQuotient {
    p: u64,
    quotient: FieldEchelon,
    /// `(designated column, basis vector)`; `None` basis means the unit vector.
    basis: Vec<(usize, Option<FVec>)>,
    check_membership: bool,
}

pub(crate) enum FieldSpan {
    All(usize),
    Generators(Vec<FVec>),
    /// Basis already in designated-column form.
    Designated(Vec<(usize, FVec)>),
}

impl FieldQuotient {
    pub fn new(p: u64, span: FieldSpan, relations: &[FVec]) -> Self {
        let mut quotient = FieldEchelon::new(p);
        for r in relations {
            quotient.insert(r);
        }
        quotient.make_reduced();
        let (basis, check_membership) = match span {
            FieldSpan::All(n) => (
                (0..n)
                    .filter(|c| !quotient.is_pivot(*c))
                    .map(|c| (c, None))
                    .collect(),
                false,
            ),
            FieldSpan::Designated(b) if quotient.rank() == 0 => {
                (b.into_iter().map(|(c, v)| (c, Some(v))).collect(), true)
            }
            FieldSpan::Designated(b) => (
                Self::complement(p, &quotient, b.into_iter().map(|(_, v)| v)),
                true,
            ),
            FieldSpan::Generators(g) => (Self::complement(p, &quotient, g.into_iter()), true),
        };
        FieldQuotient {
            p,
            quotient,
            basis,
            check_membership,
        }
    }

    fn complement(
        p: u64,
        quotient: &FieldEchelon,
        gens: impl Iterator<Item = FVec>,
    ) -> Vec<(usize, Option<FVec>)> {
        let mut ech = FieldEchelon::new(p);
        for g in gens {
            let r = quotient.residue(&g);
            ech.insert(&r);
        }
        ech.make_reduced();
        ech.pivots().map(|(c, v)| (c, Some(v.clone()))).collect()
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn generators(&self) -> Vec<SparseVec> {
        self.basis
            .iter()
            .map(|(c, v)| match v {
                Some(v) => from_fvec(v),
                None => SparseVec::unit(*c),
            })
            .collect()
    }

    pub fn coordinates(&self, x: &SparseVec) -> Option<Vec<Integer>> {
        let x = self.quotient.residue(&to_fvec(x, self.p));
        let lookup: BTreeMap<usize, u64> = x.iter().copied().collect();
        let coords: Vec<u64> = self
            .basis
            .iter()
            .map(|(c, _)| lookup.get(c).copied().unwrap_or(0))
            .collect();
        if self.check_membership {
            let mut acc = lookup;
            for ((_, v), y) in self.basis.iter().zip(&coords) {
                if *y == 0 {
                    continue;
                }
                for &(j, a) in v.as_ref().expect("designated basis") {
                    let e = acc.entry(j).or_insert(0);
                    *e = (*e + (self.p - a) * y) % self.p;
                    if *e == 0 {
                        acc.remove(&j);
                    }
                }
            }
            if !acc.is_empty() {
                return None;
            }
        }
        Some(coords.into_iter().map(Integer::from).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_of_sum_map_mod_3() {
        let f = Matrix::from_rows(&[vec![1, 1, 1]]);
        let k = kernel_basis(&f, 3);
        assert_eq!(k.len(), 2);
        for (_, v) in &k {
            let s: u64 = v.iter().map(|(_, x)| x).sum();
            assert_eq!(s % 3, 0);
        }
    }

    #[test]
    fn quotient_coordinates() {
        let rel = vec![vec![(0, 1), (1, 1)]];
        let q = FieldQuotient::new(2, FieldSpan::All(2), &rel);
        assert_eq!(q.dimension(), 1);
        let a = q.coordinates(&SparseVec::unit(0)).unwrap();
        let b = q.coordinates(&SparseVec::unit(1)).unwrap();
        assert_eq!(a, b);
    }
}

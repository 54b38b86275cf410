//! Integer lattices in `Z^n` that contain a fixed diagonal sublattice
//! `diag(m) Z^n` (coordinates with `m_i = 0` are free).
//!
//! Every lattice here is kept in echelon form keyed by leading index. Tails
//! are reduced modulo the diagonal moduli; a leading entry always divides its
//! modulus, so entries stay bounded on torsion coordinates.

use std::collections::BTreeMap;

use super::integer::{divides, int, is_zero, quot, xgcd, Integer};
use super::matrix::{Matrix, SparseVec};
use super::smith::{SmithRun, Track};

fn reduce_tail(v: &SparseVec, moduli: &[Integer]) -> SparseVec {
    let Some((lead, lv)) = v.leading() else {
        return SparseVec::new();
    };
    let rest = SparseVec::from_pairs(v.iter().skip(1).cloned().collect()).reduced(moduli);
    let mut pairs = vec![(lead, lv.clone())];
    pairs.extend(rest.iter().cloned());
    SparseVec::from_pairs(pairs)
}

/// Echelon basis of `span(inserted) + diag(moduli) Z^n`.
#[derive(Clone, Debug)]
pub(crate) struct IntEchelon {
    moduli: Vec<Integer>,
    rows: BTreeMap<usize, SparseVec>,
}

impl IntEchelon {
    pub fn new(moduli: &[Integer]) -> Self {
        let rows = moduli
            .iter()
            .enumerate()
            .filter(|(_, m)| !is_zero(m))
            .map(|(i, m)| (i, SparseVec::from_pairs(vec![(i, m.clone())])))
            .collect();
        IntEchelon {
            moduli: moduli.to_vec(),
            rows,
        }
    }

    pub fn insert(&mut self, v: &SparseVec) {
        let mut v = v.reduced(&self.moduli);
        while let Some((p, vp)) = v.leading().map(|(p, x)| (p, x.clone())) {
            let Some(e) = self.rows.get(&p) else {
                let v = if vp < int(0) { v.neg() } else { v };
                self.rows.insert(p, reduce_tail(&v, &self.moduli));
                return;
            };
            let ep = e.leading().expect("rows are nonzero").1.clone();
            if divides(&ep, &vp) {
                v = v
                    .combine(&int(1), e, &-quot(&vp, &ep))
                    .reduced(&self.moduli);
            } else {
                let (g, s, t) = xgcd(&ep, &vp);
                let new_row = e.combine(&s, &v, &t);
                let rest = v.combine(&quot(&ep, &g), e, &-quot(&vp, &g));
                self.rows.insert(p, reduce_tail(&new_row, &self.moduli));
                v = rest.reduced(&self.moduli);
            }
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> Vec<SparseVec> {
        self.rows.values().cloned().collect()
    }

    /// Exact coefficients of `x` in the basis, or `None` if `x` is outside the lattice.
    pub fn solve(&self, x: &SparseVec) -> Option<Vec<(usize, Integer)>> {
        let mut x = x.clone();
        let mut out = Vec::new();
        let index: BTreeMap<usize, usize> =
            self.rows.keys().enumerate().map(|(k, p)| (*p, k)).collect();
        while let Some((p, xp)) = x.leading().map(|(p, v)| (p, v.clone())) {
            let e = self.rows.get(&p)?;
            let ep = e.leading().expect("rows are nonzero").1;
            if !divides(ep, &xp) {
                return None;
            }
            let c = quot(&xp, ep);
            x = x.combine(&int(1), e, &-&c);
            out.push((index[&p], c));
        }
        Some(out)
    }
}

/// Generators of `{x : F x ∈ diag(target_moduli) Z^m}`, modulo `diag(source_moduli)`.
pub(crate) fn kernel_lattice(
    f: &Matrix,
    source_moduli: &[Integer],
    target_moduli: &[Integer],
) -> Vec<SparseVec> {
    let mut rows: BTreeMap<usize, (SparseVec, SparseVec)> = target_moduli
        .iter()
        .enumerate()
        .filter(|(_, m)| !is_zero(m))
        .map(|(i, m)| {
            (
                i,
                (
                    SparseVec::from_pairs(vec![(i, m.clone())]),
                    SparseVec::new(),
                ),
            )
        })
        .collect();
    let mut kernel = Vec::new();
    for (j, col) in f.columns().iter().enumerate() {
        let mut img = col.reduced(target_moduli);
        let mut trk = SparseVec::unit(j).reduced(source_moduli);
        loop {
            let Some((p, vp)) = img.leading().map(|(p, x)| (p, x.clone())) else {
                if !trk.is_zero() {
                    kernel.push(trk);
                }
                break;
            };
            let Some((ei, et)) = rows.get(&p) else {
                let (img, trk) = if vp < int(0) {
                    (img.neg(), trk.neg())
                } else {
                    (img, trk)
                };
                rows.insert(
                    p,
                    (reduce_tail(&img, target_moduli), trk.reduced(source_moduli)),
                );
                break;
            };
            let ep = ei.leading().expect("rows are nonzero").1.clone();
            if divides(&ep, &vp) {
                let c = -quot(&vp, &ep);
                img = img.combine(&int(1), ei, &c).reduced(target_moduli);
                trk = trk.combine(&int(1), et, &c).reduced(source_moduli);
            } else {
                let (g, s, t) = xgcd(&ep, &vp);
                let (a, b) = (quot(&ep, &g), -quot(&vp, &g));
                let new_img = ei.combine(&s, &img, &t);
                let new_trk = et.combine(&s, &trk, &t);
                let rest_img = img.combine(&a, ei, &b);
                let rest_trk = trk.combine(&a, et, &b);
                rows.insert(
                    p,
                    (
                        reduce_tail(&new_img, target_moduli),
                        new_trk.reduced(source_moduli),
                    ),
                );
                img = rest_img.reduced(target_moduli);
                trk = rest_trk.reduced(source_moduli);
            }
        }
    }
    kernel
}

/// `(Λ + D) / (R + D)` for `D = diag(moduli) Z^n`, in invariant-factor form.
#[derive(Clone, Debug)]
pub(crate) struct LatticeQuotient {
    pub orders: Vec<Integer>,
    pub generators: Vec<SparseVec>,
    basis: IntEchelon,
    /// Rows of the left Smith transform that survive (one per output generator).
    projector: Vec<SparseVec>,
}

impl LatticeQuotient {
    pub fn new(
        moduli: &[Integer],
        lambda: Option<&[SparseVec]>,
        relations: &[SparseVec],
    ) -> Option<Self> {
        let n = moduli.len();
        let mut basis = IntEchelon::new(moduli);
        match lambda {
            Some(gens) => gens.iter().for_each(|g| basis.insert(g)),
            None => (0..n).for_each(|i| basis.insert(&SparseVec::unit(i))),
        }
        let mut rel = IntEchelon::new(moduli);
        relations.iter().for_each(|g| rel.insert(g));
        let r = basis.len();
        let rel_rows = rel.basis();
        let k = rel_rows.len();
        let mut dense = vec![vec![int(0); k]; r];
        for (j, row) in rel_rows.iter().enumerate() {
            for (i, c) in basis.solve(row)? {
                dense[i][j] = c;
            }
        }
        let run = SmithRun::new(
            dense,
            r,
            k,
            Track {
                u: true,
                u_inv: true,
                v: false,
            },
        );
        let u = run.u.expect("tracked");
        let u_inv = run.u_inv.expect("tracked");
        let rows = basis.basis();
        let mut orders = Vec::new();
        let mut generators = Vec::new();
        let mut projector = Vec::new();
        for i in 0..r {
            let s = run.diag.get(i).cloned().unwrap_or_else(|| int(0));
            if s == int(1) {
                continue;
            }
            let gen = SparseVec::linear_combination((0..r).map(|j| (&u_inv[j][i], &rows[j])));
            generators.push(gen.reduced(moduli));
            projector.push(SparseVec::from_dense(&u[i]));
            orders.push(s);
        }
        Some(LatticeQuotient {
            orders,
            generators,
            basis,
            projector,
        })
    }

    pub fn coordinates(&self, x: &SparseVec) -> Option<Vec<Integer>> {
        let c = SparseVec::from_pairs(self.basis.solve(x)?);
        Some(
            self.projector
                .iter()
                .zip(&self.orders)
                .map(|(row, s)| super::integer::reduce(&row.dot(&c), s))
                .collect(),
        )
    }
}

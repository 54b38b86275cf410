//! Complexes whose groups are subquotients of labelled ambient groups.
//!
//! Hand-written formulas live on ambient coordinates (families indexed by
//! stars, pairs of stars, simplices). A [`Presented`] complex carries the
//! canonical groups together with the ambient view, so ambient matrices can
//! be pushed down to chain maps and homotopies with every well-definedness
//! condition checked.

use std::collections::{BTreeMap, HashMap};

use super::{ChainComplex, ChainHomotopy, ChainMap};
use crate::abelian::{Integer, Matrix, SparseVec, Subquotient};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct Presented {
    complex: ChainComplex,
    ambient: ChainComplex,
    subs: BTreeMap<i64, Subquotient>,
    relations: BTreeMap<i64, Vec<SparseVec>>,
}

impl Presented {
    /// `parts[n] = (S_n / Q_n, generators of Q_n)` for a contiguous range of
    /// degrees. Checks `δ(S_n) ⊆ S_{n−1}` and `δ(Q_n) ⊆ Q_{n−1}`.
    pub fn new(
        ambient: &ChainComplex,
        parts: BTreeMap<i64, (Subquotient, Vec<SparseVec>)>,
    ) -> Result<Self> {
        let (Some(&lo), Some(&hi)) = (parts.keys().next(), parts.keys().next_back()) else {
            return Err(Error::Shape("no degrees".into()));
        };
        if parts.len() as i64 != hi - lo + 1 {
            return Err(Error::Shape("degrees must be contiguous".into()));
        }
        let mut subs = BTreeMap::new();
        let mut relations = BTreeMap::new();
        for (n, (s, r)) in parts {
            if s.ambient().orders() != ambient.group(n).orders() {
                return Err(Error::Shape(format!(
                    "subquotient at degree {n} lives in a different group"
                )));
            }
            subs.insert(n, s);
            relations.insert(n, r);
        }
        let mut diffs = Vec::new();
        for n in lo + 1..=hi {
            let d = ambient.differential(n);
            let images: Vec<SparseVec> = subs[&n]
                .generators()
                .iter()
                .map(|x| d.apply_sparse(x))
                .collect();
            diffs.push(subs[&(n - 1)].coordinate_matrix(&images)?);
            for r in &relations[&n] {
                if subs[&(n - 1)]
                    .coordinates(&d.apply_sparse(r))?
                    .iter()
                    .any(|c| !crate::abelian::integer::is_zero(c))
                {
                    return Err(Error::Mismatch(format!(
                        "differential out of degree {n} does not respect the relations"
                    )));
                }
            }
        }
        let groups = subs.values().map(|s| s.group().clone()).collect();
        let complex = ChainComplex::new(lo, groups, diffs)?;
        Ok(Presented {
            complex,
            ambient: ambient.clone(),
            subs,
            relations,
        })
    }

    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    pub fn ambient(&self) -> &ChainComplex {
        &self.ambient
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.subs.keys().copied()
    }

    pub fn sub(&self, n: i64) -> Option<&Subquotient> {
        self.subs.get(&n)
    }

    pub fn relations(&self, n: i64) -> &[SparseVec] {
        self.relations.get(&n).map(|v| v.as_slice()).unwrap_or(&[])
    }

    /// Ambient representative of each canonical generator in degree `n`.
    pub fn representatives(&self, n: i64) -> &[SparseVec] {
        self.subs.get(&n).map(|s| s.generators()).unwrap_or(&[])
    }

    /// Canonical coordinates of an ambient vector; errors if it is not in `S_n`.
    pub fn coordinates(&self, n: i64, x: &SparseVec) -> Result<Vec<Integer>> {
        match self.subs.get(&n) {
            Some(s) => s.coordinates(x),
            None if x.is_zero() => Ok(Vec::new()),
            None => Err(Error::NotInSubgroup(format!("degree {n} is zero"))),
        }
    }

    /// `Σ c_i · rep_i`, reduced in the ambient group.
    pub fn lift(&self, n: i64, coords: &[Integer]) -> SparseVec {
        let reps = self.representatives(n);
        let v = SparseVec::linear_combination(coords.iter().zip(reps));
        v.reduced(self.ambient.group(n).orders())
    }

    /// Ambient generator index by label in degree `n`.
    pub fn label_index(&self, n: i64) -> HashMap<String, usize> {
        let g = self.ambient.group(n);
        (0..g.ngens()).map(|i| (g.label(i), i)).collect()
    }

    /// Pushes an ambient matrix `amb_n(self) → amb_m(target)` down to canonical
    /// coordinates; checks it maps `S_n` into `S_m` and `Q_n` into `Q_m`.
    pub fn descend(&self, n: i64, target: &Presented, m: i64, matrix: &Matrix) -> Result<Matrix> {
        let tgt_len = target.complex.group(m).ngens();
        let reps = self.representatives(n);
        if reps.is_empty() {
            return Ok(Matrix::zeros(tgt_len, 0));
        }
        if !target.subs.contains_key(&m) {
            return Ok(Matrix::zeros(0, reps.len()));
        }
        let images: Vec<SparseVec> = reps.iter().map(|x| matrix.apply(x)).collect();
        let cols = target.subs[&m].coordinate_matrix(&images)?;
        for r in self.relations(n) {
            if target
                .coordinates(m, &matrix.apply(r))?
                .iter()
                .any(|c| !crate::abelian::integer::is_zero(c))
            {
                return Err(Error::Mismatch(format!(
                    "map out of degree {n} does not respect the relations"
                )));
            }
        }
        Ok(cols)
    }

    /// Chain map from degreewise ambient matrices; the chain-map identity is verified.
    pub fn chain_map(
        &self,
        target: &Presented,
        ambient_maps: &BTreeMap<i64, Matrix>,
    ) -> Result<ChainMap> {
        let comps = self
            .degrees()
            .filter_map(|n| {
                ambient_maps
                    .get(&n)
                    .map(|m| self.descend(n, target, n, m).map(|c| (n, c)))
            })
            .collect::<Result<Vec<_>>>()?;
        ChainMap::new(&self.complex, &target.complex, comps)
    }

    /// Homotopy `h_n : C_n → D_{n+1}` between `f` and `g` from ambient matrices; verified.
    pub fn homotopy(
        &self,
        target: &Presented,
        f: &ChainMap,
        g: &ChainMap,
        ambient_maps: &BTreeMap<i64, Matrix>,
    ) -> Result<ChainHomotopy> {
        let comps = ambient_maps
            .iter()
            .map(|(&n, m)| self.descend(n, target, n + 1, m).map(|c| (n, c)))
            .collect::<Result<Vec<_>>>()?;
        let h = ChainHomotopy::new(f, g, comps)?;
        h.verify()?;
        Ok(h)
    }
}

/// Labelled-basis isomorphism: ambient generators are matched by label in
/// every degree, pushed down both ways, and both composites checked to be
/// identities.
pub fn labelled_iso(a: &Presented, b: &Presented) -> Result<(ChainMap, ChainMap)> {
    if a.subs.keys().ne(b.subs.keys()) {
        return Err(Error::Mismatch(
            "complexes live in different degrees".into(),
        ));
    }
    let mut fwd = BTreeMap::new();
    let mut back = BTreeMap::new();
    for n in a.degrees() {
        let (ga, gb) = (a.ambient.group(n), b.ambient.group(n));
        if ga.labels().is_none() || gb.labels().is_none() || ga.ngens() != gb.ngens() {
            return Err(Error::Mismatch(format!(
                "degree {n}: ambient bases are not comparably labelled"
            )));
        }
        let index = b.label_index(n);
        let mut entries = Vec::with_capacity(ga.ngens());
        for i in 0..ga.ngens() {
            let l = ga.label(i);
            let j = *index
                .get(&l)
                .ok_or_else(|| Error::Mismatch(format!("degree {n}: label {l} has no partner")))?;
            if ga.order(i) != gb.order(j) {
                return Err(Error::Mismatch(format!(
                    "degree {n}: label {l} has different orders"
                )));
            }
            entries.push((j, i));
        }
        let one = crate::abelian::int(1);
        fwd.insert(
            n,
            Matrix::from_entries(
                gb.ngens(),
                ga.ngens(),
                entries.iter().map(|&(j, i)| (j, i, one.clone())),
            ),
        );
        back.insert(
            n,
            Matrix::from_entries(
                ga.ngens(),
                gb.ngens(),
                entries.iter().map(|&(j, i)| (i, j, one.clone())),
            ),
        );
    }
    let f = a.chain_map(b, &fwd)?;
    let g = b.chain_map(a, &back)?;
    if !f.then(&g)?.is_identity() || !g.then(&f)?.is_identity() {
        return Err(Error::Mismatch(
            "label matching is not an isomorphism".into(),
        ));
    }
    Ok((f, g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::{FgAbGroup, GroupHom, Span};

    fn labelled(n: usize, tag: &str) -> FgAbGroup {
        FgAbGroup::free(n).with_labels((0..n).map(|i| format!("{tag}{i}")).collect())
    }

    #[test]
    fn kernel_presentation_and_relabelling() {
        // degree 1 is Z, mapping onto the kernel of (1, 1) in degree 0
        let amb = ChainComplex::new(
            0,
            vec![labelled(2, "a"), labelled(1, "b")],
            vec![Matrix::from_rows(&[vec![1], vec![-1]])],
        )
        .unwrap();
        let sum = GroupHom::new(
            &amb.group(0),
            &FgAbGroup::free(1),
            Matrix::from_rows(&[vec![1, 1]]),
        )
        .unwrap();
        let k = Subquotient::new(&amb.group(0), Span::KernelOf(&sum), &[]).unwrap();
        let all = Subquotient::new(&amb.group(1), Span::All, &[]).unwrap();
        let p =
            Presented::new(&amb, BTreeMap::from([(0, (k, vec![])), (1, (all, vec![]))])).unwrap();
        assert_eq!(
            crate::complexes::homology_report(&p.complex().homology().unwrap()),
            "H_0 = 0\nH_1 = 0\n"
        );
        // same complex with the ambient basis of degree 0 swapped
        let swapped = FgAbGroup::free(2).with_labels(vec!["a1".into(), "a0".into()]);
        let amb2 = ChainComplex::new(
            0,
            vec![swapped, labelled(1, "b")],
            vec![Matrix::from_rows(&[vec![-1], vec![1]])],
        )
        .unwrap();
        let sum2 = GroupHom::new(
            &amb2.group(0),
            &FgAbGroup::free(1),
            Matrix::from_rows(&[vec![1, 1]]),
        )
        .unwrap();
        let k2 = Subquotient::new(&amb2.group(0), Span::KernelOf(&sum2), &[]).unwrap();
        let all2 = Subquotient::new(&amb2.group(1), Span::All, &[]).unwrap();
        let p2 = Presented::new(
            &amb2,
            BTreeMap::from([(0, (k2, vec![])), (1, (all2, vec![]))]),
        )
        .unwrap();
        assert!(labelled_iso(&p, &p2).is_ok());
        assert!(p.coordinates(0, &SparseVec::from_i64(&[1, -1])).is_ok());
        assert!(p.coordinates(0, &SparseVec::from_i64(&[1, 0])).is_err());
    }
}

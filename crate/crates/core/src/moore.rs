//! Normalized and co-normalized Moore complexes of (co)simplicial objects in
//! chain complexes, and the nerve of an abelian action groupoid.
//!
//! A (co)simplicial object is stored up to a cutoff level `N`; levels above
//! `N` are asserted degenerate, so Moore complexes stop at degree `N`.

use std::collections::BTreeMap;

use crate::abelian::{FgAbGroup, GroupHom, Matrix, Span, SparseVec, Subquotient};
use crate::complexes::{ChainComplex, ChainMap, DoubleComplex};
use crate::error::{Error, Result};

/// Levels `0..=cutoff` with faces `∂_i : X_n → X_{n−1}` and degeneracies `ε_i : X_n → X_{n+1}`.
#[derive(Clone, Debug)]
pub struct SimplicialObject {
    levels: Vec<ChainComplex>,
    /// `faces[n][i]`, `n ≥ 1`; `faces[0]` is empty.
    faces: Vec<Vec<ChainMap>>,
    /// `degeneracies[n][i]` for `n < cutoff`.
    degeneracies: Vec<Vec<ChainMap>>,
}

/// Levels `0..=cutoff` with co-faces `d^i : X_n → X_{n+1}` and co-degeneracies `e^i : X_n → X_{n−1}`.
#[derive(Clone, Debug)]
pub struct CosimplicialObject {
    levels: Vec<ChainComplex>,
    /// `cofaces[n][i]` for `n < cutoff`, `i = 0..=n+1`.
    cofaces: Vec<Vec<ChainMap>>,
    /// `codegeneracies[n][i]` for `n ≥ 1`, `i = 0..n`; `codegeneracies[0]` is empty.
    codegeneracies: Vec<Vec<ChainMap>>,
}

fn check_shape(
    maps: &[Vec<ChainMap>],
    levels: &[ChainComplex],
    expect: impl Fn(usize) -> (usize, i64),
) -> Result<()> {
    for (n, row) in maps.iter().enumerate() {
        let (count, step) = expect(n);
        if row.len() != count {
            return Err(Error::Shape(format!(
                "level {n} needs {count} structure maps, got {}",
                row.len()
            )));
        }
        for f in row {
            let to = (n as i64 + step) as usize;
            if f.source() != &levels[n] || f.target() != &levels[to] {
                return Err(Error::Shape(format!(
                    "structure map out of level {n} has the wrong ends"
                )));
            }
        }
    }
    Ok(())
}

fn same(a: &ChainMap, b: &ChainMap, kind: &'static str, detail: String) -> Result<()> {
    if a.same_map(b) {
        Ok(())
    } else {
        Err(Error::Identity { kind, detail })
    }
}

impl SimplicialObject {
    /// Checks every simplicial identity that lives inside levels `0..=cutoff`.
    pub fn new(
        levels: Vec<ChainComplex>,
        faces: Vec<Vec<ChainMap>>,
        degeneracies: Vec<Vec<ChainMap>>,
    ) -> Result<Self> {
        let top = levels
            .len()
            .checked_sub(1)
            .ok_or_else(|| Error::Shape("no levels".into()))?;
        if faces.len() != top + 1 || degeneracies.len() != top {
            return Err(Error::Shape(
                "one row of faces per level and of degeneracies per level below the cutoff".into(),
            ));
        }
        check_shape(&faces, &levels, |n| (if n == 0 { 0 } else { n + 1 }, -1))?;
        check_shape(&degeneracies, &levels, |n| (n + 1, 1))?;
        let s = SimplicialObject {
            levels,
            faces,
            degeneracies,
        };
        s.check_identities()?;
        Ok(s)
    }

    fn check_identities(&self) -> Result<()> {
        let top = self.cutoff();
        for n in 2..=top {
            for j in 0..=n {
                for i in 0..j {
                    let a = self.faces[n][j].then(&self.faces[n - 1][i])?;
                    let b = self.faces[n][i].then(&self.faces[n - 1][j - 1])?;
                    same(&a, &b, "face-face", format!("∂{i}∂{j} at level {n}"))?;
                }
            }
        }
        for n in 0..top.saturating_sub(1) {
            for j in 0..=n {
                for i in 0..=j {
                    let a = self.degeneracies[n][j].then(&self.degeneracies[n + 1][i])?;
                    let b = self.degeneracies[n][i].then(&self.degeneracies[n + 1][j + 1])?;
                    same(
                        &a,
                        &b,
                        "degeneracy-degeneracy",
                        format!("ε{i}ε{j} at level {n}"),
                    )?;
                }
            }
        }
        for n in 0..top {
            for j in 0..=n {
                for i in 0..=n + 1 {
                    let lhs = self.degeneracies[n][j].then(&self.faces[n + 1][i])?;
                    let detail = format!("∂{i}ε{j} at level {n}");
                    if i == j || i == j + 1 {
                        same(
                            &lhs,
                            &ChainMap::identity(&self.levels[n]),
                            "face-degeneracy",
                            detail,
                        )?;
                    } else if i < j {
                        let rhs = self.faces[n][i].then(&self.degeneracies[n - 1][j - 1])?;
                        same(&lhs, &rhs, "face-degeneracy", detail)?;
                    } else {
                        let rhs = self.faces[n][i - 1].then(&self.degeneracies[n - 1][j])?;
                        same(&lhs, &rhs, "face-degeneracy", detail)?;
                    }
                }
            }
        }
        Ok(())
    }

    pub fn cutoff(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, n: usize) -> &ChainComplex {
        &self.levels[n]
    }

    pub fn face(&self, n: usize, i: usize) -> &ChainMap {
        &self.faces[n][i]
    }

    pub fn degeneracy(&self, n: usize, i: usize) -> &ChainMap {
        &self.degeneracies[n][i]
    }
}

impl CosimplicialObject {
    /// Checks every cosimplicial identity that lives inside levels `0..=cutoff`.
    pub fn new(
        levels: Vec<ChainComplex>,
        cofaces: Vec<Vec<ChainMap>>,
        codegeneracies: Vec<Vec<ChainMap>>,
    ) -> Result<Self> {
        let top = levels
            .len()
            .checked_sub(1)
            .ok_or_else(|| Error::Shape("no levels".into()))?;
        if cofaces.len() != top || codegeneracies.len() != top + 1 {
            return Err(Error::Shape(
                "one row of co-faces per level below the cutoff and of co-degeneracies per level"
                    .into(),
            ));
        }
        check_shape(&cofaces, &levels, |n| (n + 2, 1))?;
        check_shape(&codegeneracies, &levels, |n| (n, -1))?;
        let c = CosimplicialObject {
            levels,
            cofaces,
            codegeneracies,
        };
        c.check_identities()?;
        Ok(c)
    }

    fn check_identities(&self) -> Result<()> {
        let top = self.cutoff();
        for n in 0..top.saturating_sub(1) {
            for j in 0..=n + 2 {
                for i in 0..j {
                    let a = self.cofaces[n][i].then(&self.cofaces[n + 1][j])?;
                    let b = self.cofaces[n][j - 1].then(&self.cofaces[n + 1][i])?;
                    same(&a, &b, "coface-coface", format!("d{j}d{i} at level {n}"))?;
                }
            }
        }
        for n in 2..=top {
            for j in 0..n - 1 {
                for i in 0..=j {
                    let a = self.codegeneracies[n][i].then(&self.codegeneracies[n - 1][j])?;
                    let b = self.codegeneracies[n][j + 1].then(&self.codegeneracies[n - 1][i])?;
                    same(
                        &a,
                        &b,
                        "codegeneracy-codegeneracy",
                        format!("e{j}e{i} at level {n}"),
                    )?;
                }
            }
        }
        for n in 0..top {
            for i in 0..=n + 1 {
                for j in 0..=n {
                    let lhs = self.cofaces[n][i].then(&self.codegeneracies[n + 1][j])?;
                    let detail = format!("e{j}d{i} at level {n}");
                    if i == j || i == j + 1 {
                        same(
                            &lhs,
                            &ChainMap::identity(&self.levels[n]),
                            "coface-codegeneracy",
                            detail,
                        )?;
                    } else if i < j {
                        let rhs = self.codegeneracies[n][j - 1].then(&self.cofaces[n - 1][i])?;
                        same(&lhs, &rhs, "coface-codegeneracy", detail)?;
                    } else {
                        let rhs = self.codegeneracies[n][j].then(&self.cofaces[n - 1][i - 1])?;
                        same(&lhs, &rhs, "coface-codegeneracy", detail)?;
                    }
                }
            }
        }
        Ok(())
    }

    pub fn cutoff(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, n: usize) -> &ChainComplex {
        &self.levels[n]
    }

    pub fn coface(&self, n: usize, i: usize) -> &ChainMap {
        &self.cofaces[n][i]
    }

    pub fn codegeneracy(&self, n: usize, i: usize) -> &ChainMap {
        &self.codegeneracies[n][i]
    }
}

/// A Moore double complex together with how each entry sits in its level.
#[derive(Clone, Debug)]
pub struct MooreComplex {
    pub double: DoubleComplex,
    /// Entry `(p, q)` as a subquotient of the chain-degree-`q` group of level `|p|`.
    pub entries: BTreeMap<(i64, i64), Subquotient>,
}

impl MooreComplex {
    /// The column `q` as a chain complex in the simplicial direction.
    pub fn column(&self, q: i64) -> Result<ChainComplex> {
        let (plo, phi) = self.double.p_range();
        let groups: Vec<FgAbGroup> = (plo..=phi).map(|p| self.double.group(p, q)).collect();
        let diffs = (plo + 1..=phi)
            .map(|p| self.double.v(p, q).matrix().clone())
            .collect();
        ChainComplex::new(plo, groups, diffs)
    }
}

fn degree_range(levels: &[ChainComplex]) -> (i64, i64) {
    let nonempty = levels.iter().filter(|c| !c.is_empty());
    let lo = nonempty.clone().map(|c| c.lo()).min().unwrap_or(0);
    let hi = nonempty.map(|c| c.hi()).max().unwrap_or(0);
    (lo, hi)
}

fn alternating(maps: &[ChainMap], q: i64) -> Result<GroupHom> {
    let mut total = GroupHom::zero(&maps[0].source().group(q), &maps[0].target().group(q));
    for (i, f) in maps.iter().enumerate() {
        let c = f.component(q);
        total = if i % 2 == 0 {
            total.add(&c)?
        } else {
            total.sub(&c)?
        };
    }
    Ok(total)
}

fn image_coordinates(target: &Subquotient, f: &GroupHom, sources: &[SparseVec]) -> Result<Matrix> {
    let images: Vec<SparseVec> = sources.iter().map(|x| f.apply_sparse(x)).collect();
    target.coordinate_matrix(&images)
}

/// `N_n = X_n / Σ ε_i(X_{n−1})` with `δ = Σ (−1)^i ∂_i`, for `n ≤ max_degree`.
pub fn normalized_moore(s: &SimplicialObject, max_degree: usize) -> Result<MooreComplex> {
    if max_degree > s.cutoff() {
        return Err(Error::Cutoff {
            cutoff: s.cutoff(),
            requested: max_degree,
        });
    }
    let (qlo, qhi) = degree_range(&s.levels[..=max_degree]);
    let mut entries = BTreeMap::new();
    for n in 0..=max_degree {
        for q in qlo..=qhi {
            let ambient = s.levels[n].group(q);
            let rel: Vec<SparseVec> = if n == 0 {
                Vec::new()
            } else {
                s.degeneracies[n - 1]
                    .iter()
                    .flat_map(|e| e.component(q).matrix().columns().to_vec())
                    .collect()
            };
            entries.insert((n as i64, q), Subquotient::new(&ambient, Span::All, &rel)?);
        }
    }
    let mut groups = BTreeMap::new();
    let mut horizontal = BTreeMap::new();
    let mut vertical = BTreeMap::new();
    for (&(p, q), sq) in &entries {
        groups.insert((p, q), sq.group().clone());
        if q > qlo {
            let d = s.levels[p as usize].differential(q);
            horizontal.insert(
                (p, q),
                image_coordinates(&entries[&(p, q - 1)], &d, sq.generators())?,
            );
        }
        if p > 0 {
            let d = alternating(&s.faces[p as usize], q)?;
            vertical.insert(
                (p, q),
                image_coordinates(&entries[&(p - 1, q)], &d, sq.generators())?,
            );
        }
    }
    let double = DoubleComplex::new(
        (0, max_degree as i64),
        (qlo, qhi),
        groups,
        horizontal,
        vertical,
    )?;
    Ok(MooreComplex { double, entries })
}

/// `N*_{−n} = ⋂_i ker(e^i : X_n → X_{n−1})` with `δ = Σ (−1)^i d^i`, for `n ≤ max_degree`.
pub fn conormalized_moore(c: &CosimplicialObject, max_degree: usize) -> Result<MooreComplex> {
    if max_degree > c.cutoff() {
        return Err(Error::Cutoff {
            cutoff: c.cutoff(),
            requested: max_degree,
        });
    }
    let (qlo, qhi) = degree_range(&c.levels[..=max_degree]);
    let mut entries = BTreeMap::new();
    for n in 0..=max_degree {
        for q in qlo..=qhi {
            let ambient = c.levels[n].group(q);
            let sq = if n == 0 {
                Subquotient::new(&ambient, Span::All, &[])?
            } else {
                let maps: Vec<GroupHom> =
                    c.codegeneracies[n].iter().map(|e| e.component(q)).collect();
                let target =
                    FgAbGroup::direct_sum(&maps.iter().map(|m| m.target()).collect::<Vec<_>>());
                let stacked = Matrix::vstack(&maps.iter().map(|m| m.matrix()).collect::<Vec<_>>());
                let joint = GroupHom::new(&ambient, &target, stacked)?;
                Subquotient::new(&ambient, Span::KernelOf(&joint), &[])?
            };
            entries.insert((-(n as i64), q), sq);
        }
    }
    let mut groups = BTreeMap::new();
    let mut horizontal = BTreeMap::new();
    let mut vertical = BTreeMap::new();
    for (&(p, q), sq) in &entries {
        groups.insert((p, q), sq.group().clone());
        let n = (-p) as usize;
        if q > qlo {
            let d = c.levels[n].differential(q);
            horizontal.insert(
                (p, q),
                image_coordinates(&entries[&(p, q - 1)], &d, sq.generators())?,
            );
        }
        if n < max_degree {
            let d = alternating(&c.cofaces[n], q)?;
            vertical.insert(
                (p, q),
                image_coordinates(&entries[&(p - 1, q)], &d, sq.generators())?,
            );
        }
    }
    let double = DoubleComplex::new(
        (-(max_degree as i64), 0),
        (qlo, qhi),
        groups,
        horizontal,
        vertical,
    )?;
    Ok(MooreComplex { double, entries })
}

/// Nerve of `G ⋉ X` with `g · A = A + τ(g)`: level `n` is `G^n × X` (coordinates `g_1, …, g_n, A`),
/// as complexes concentrated in degree 0.
pub fn action_groupoid_nerve(tau: &GroupHom, cutoff: usize) -> Result<SimplicialObject> {
    let (g, x) = (tau.source(), tau.target());
    let (gn, xn) = (g.ngens(), x.ngens());
    let level_group = |n: usize| {
        let mut parts: Vec<&FgAbGroup> = vec![g; n];
        parts.push(x);
        FgAbGroup::direct_sum(&parts)
    };
    let levels: Vec<ChainComplex> = (0..=cutoff)
        .map(|n| ChainComplex::concentrated(0, level_group(n)))
        .collect();
    let block = |k: usize| k * gn;
    let x_at = |n: usize| n * gn;
    let mut faces = vec![Vec::new()];
    for n in 1..=cutoff {
        let mut row = Vec::new();
        for i in 0..=n {
            let mut entries = Vec::new();
            // g-slots of the target
            for k in 0..n - 1 {
                let sources: Vec<usize> = if i == 0 {
                    vec![k + 1]
                } else if k + 1 < i {
                    vec![k]
                } else if k + 1 == i {
                    vec![k, k + 1]
                } else {
                    vec![k + 1]
                };
                for s in sources {
                    for t in 0..gn {
                        entries.push((block(k) + t, block(s) + t, crate::abelian::int(1)));
                    }
                }
            }
            for t in 0..xn {
                entries.push((x_at(n - 1) + t, x_at(n) + t, crate::abelian::int(1)));
            }
            if i == n {
                for (col, v) in tau.matrix().columns().iter().enumerate() {
                    for (r, c) in v.iter() {
                        entries.push((x_at(n - 1) + r, block(n - 1) + col, c.clone()));
                    }
                }
            }
            let m = Matrix::from_entries(x_at(n - 1) + xn, x_at(n) + xn, entries);
            row.push(ChainMap::new(&levels[n], &levels[n - 1], vec![(0, m)])?);
        }
        faces.push(row);
    }
    let mut degeneracies = Vec::new();
    for n in 0..cutoff {
        let mut row = Vec::new();
        for i in 0..=n {
            let mut entries = Vec::new();
            for k in 0..n {
                let tk = if k < i { k } else { k + 1 };
                for t in 0..gn {
                    entries.push((block(tk) + t, block(k) + t, crate::abelian::int(1)));
                }
            }
            for t in 0..xn {
                entries.push((x_at(n + 1) + t, x_at(n) + t, crate::abelian::int(1)));
            }
            let m = Matrix::from_entries(x_at(n + 1) + xn, x_at(n) + xn, entries);
            row.push(ChainMap::new(&levels[n], &levels[n + 1], vec![(0, m)])?);
        }
        degeneracies.push(row);
    }
    SimplicialObject::new(levels, faces, degeneracies)
}

/// Constant simplicial object: every level is `c`, every structure map the identity.
pub fn constant_simplicial(c: &ChainComplex, cutoff: usize) -> Result<SimplicialObject> {
    let id = ChainMap::identity(c);
    let levels = vec![c.clone(); cutoff + 1];
    let faces = (0..=cutoff)
        .map(|n| vec![id.clone(); if n == 0 { 0 } else { n + 1 }])
        .collect();
    let degeneracies = (0..cutoff).map(|n| vec![id.clone(); n + 1]).collect();
    SimplicialObject::new(levels, faces, degeneracies)
}

/// Constant cosimplicial object: every level is `c`, every structure map the identity.
pub fn constant_cosimplicial(c: &ChainComplex, cutoff: usize) -> Result<CosimplicialObject> {
    let id = ChainMap::identity(c);
    let levels = vec![c.clone(); cutoff + 1];
    let cofaces = (0..cutoff).map(|n| vec![id.clone(); n + 2]).collect();
    let codegeneracies = (0..=cutoff).map(|n| vec![id.clone(); n]).collect();
    CosimplicialObject::new(levels, cofaces, codegeneracies)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::{int, GroupElement};
    use crate::complexes::homology_report;

    fn tau(q: u64, k: i64) -> GroupHom {
        let g = FgAbGroup::cyclic(q);
        GroupHom::new(&g, &g, Matrix::from_rows(&[vec![k]])).unwrap()
    }

    #[test]
    fn nerve_low_faces_and_degeneracy() {
        let s = action_groupoid_nerve(&tau(3, 1), 2).unwrap();
        let apply = |f: &ChainMap, v: &[i64]| {
            let x = GroupElement::new(
                &f.source().group(0),
                &v.iter().map(|&a| int(a)).collect::<Vec<_>>(),
            )
            .unwrap();
            f.component(0).apply(&x).unwrap().coords().to_vec()
        };
        // (g, A) = (2, 1)
        assert_eq!(apply(s.face(1, 0), &[2, 1]), vec![int(1)]);
        assert_eq!(apply(s.face(1, 1), &[2, 1]), vec![int(0)]);
        assert_eq!(apply(s.degeneracy(0, 0), &[1]), vec![int(0), int(1)]);
    }

    #[test]
    fn face_identity_exhaustive_on_z2() {
        let s = action_groupoid_nerve(&tau(2, 1), 2).unwrap();
        let f = s.face(2, 2).then(s.face(1, 0)).unwrap();
        let g = s.face(2, 0).then(s.face(1, 1)).unwrap();
        let grp = s.level(2).group(0);
        for bits in 0..8i64 {
            let v: Vec<_> = (0..3).map(|k| int((bits >> k) & 1)).collect();
            let x = GroupElement::new(&grp, &v).unwrap();
            assert_eq!(
                f.component(0).apply(&x).unwrap(),
                g.component(0).apply(&x).unwrap()
            );
        }
    }

    #[test]
    fn nerve_moore_complex_is_two_term() {
        for (k, expect) in [
            (1, "H_0 = 0\nH_1 = 0\nH_2 = 0\n"),
            (0, "H_0 = Z/3\nH_1 = Z/3\nH_2 = 0\n"),
        ] {
            let s = action_groupoid_nerve(&tau(3, k), 3).unwrap();
            let m = normalized_moore(&s, 2).unwrap();
            let c = m.column(0).unwrap();
            assert!(c.group(2).is_trivial());
            assert_eq!(c.group(1).invariants(), FgAbGroup::cyclic(3).invariants());
            assert_eq!(homology_report(&c.homology().unwrap()), expect);
        }
        assert!(matches!(
            normalized_moore(&action_groupoid_nerve(&tau(2, 1), 1).unwrap(), 2),
            Err(Error::Cutoff { .. })
        ));
    }

    #[test]
    fn constant_objects_collapse_to_degree_zero() {
        let a = ChainComplex::concentrated(0, FgAbGroup::cyclic(5));
        let n = normalized_moore(&constant_simplicial(&a, 3).unwrap(), 3)
            .unwrap()
            .column(0)
            .unwrap();
        assert_eq!(
            homology_report(&n.homology().unwrap()),
            "H_0 = Z/5\nH_1 = 0\nH_2 = 0\nH_3 = 0\n"
        );
        assert!(n.group(1).is_trivial() && n.group(3).is_trivial());
        let c = conormalized_moore(&constant_cosimplicial(&a, 3).unwrap(), 3)
            .unwrap()
            .column(0)
            .unwrap();
        assert!(c.group(-1).is_trivial() && c.group(-3).is_trivial());
        assert_eq!(c.group(0).invariants(), FgAbGroup::cyclic(5).invariants());
    }

    #[test]
    fn broken_identity_is_reported() {
        let a = ChainComplex::concentrated(0, FgAbGroup::cyclic(5));
        let id = ChainMap::identity(&a);
        let twice = ChainMap::new(&a, &a, vec![(0, Matrix::from_rows(&[vec![2]]))]).unwrap();
        let r = SimplicialObject::new(
            vec![a.clone(), a.clone()],
            vec![vec![], vec![id.clone(), twice]],
            vec![vec![id]],
        );
        assert!(matches!(r, Err(Error::Identity { .. })));
    }
}

//! Finite simplicial complexes, closed stars, the star poset, and simplicial
//! (co)chains with coefficients in `Z` or `Z/q`.
//!
//! Vertices are numbered in order of first appearance; simplices are sorted
//! vertex lists and orientations come from that order.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use itertools::Itertools;

use crate::abelian::{int, FgAbGroup, GroupHom, Integer, Matrix};
use crate::complexes::ChainComplex;
use crate::error::{Error, Result};
use crate::poset::Poset;

/// Coefficient group `Z` or `Z/q` with `q >= 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CoeffGroup {
    Integers,
    Cyclic(u64),
}

impl CoeffGroup {
    pub fn cyclic(q: u64) -> Result<Self> {
        if q < 2 {
            return Err(Error::Coefficient(format!("Z/{q} needs q >= 2")));
        }
        Ok(CoeffGroup::Cyclic(q))
    }

    /// Parses `Z` or `Z/<q>`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "Z" {
            return Ok(CoeffGroup::Integers);
        }
        let q = s
            .strip_prefix("Z/")
            .and_then(|q| q.parse::<u64>().ok())
            .ok_or_else(|| Error::Coefficient(format!("expected `Z` or `Z/<q>`, got `{s}`")))?;
        Self::cyclic(q)
    }

    /// Order of a generator: `0` for `Z`.
    pub fn order(&self) -> Integer {
        match self {
            CoeffGroup::Integers => int(0),
            CoeffGroup::Cyclic(q) => Integer::from(*q),
        }
    }

    pub fn modulus(&self) -> Option<u64> {
        match self {
            CoeffGroup::Integers => None,
            CoeffGroup::Cyclic(q) => Some(*q),
        }
    }

    pub fn group(&self) -> FgAbGroup {
        FgAbGroup::repeated(&self.order(), 1)
    }
}

impl fmt::Display for CoeffGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffGroup::Integers => write!(f, "Z"),
            CoeffGroup::Cyclic(q) => write!(f, "Z/{q}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    labels: Vec<String>,
    /// Sorted by dimension, then lexicographically.
    simplices: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
    by_dim: Vec<Vec<usize>>,
}

impl SimplicialComplex {
    /// Face closure of the given simplices (vertex labels); duplicates are ignored.
    pub fn from_maximal<S: AsRef<str>>(maximal: &[Vec<S>]) -> Result<Self> {
        let mut labels: Vec<String> = Vec::new();
        let mut lookup: HashMap<String, usize> = HashMap::new();
        let mut faces: BTreeSet<Vec<usize>> = BTreeSet::new();
        for s in maximal {
            let mut verts: Vec<usize> = s
                .iter()
                .map(|l| {
                    let l = l.as_ref().to_string();
                    *lookup.entry(l.clone()).or_insert_with(|| {
                        labels.push(l);
                        labels.len() - 1
                    })
                })
                .collect();
            verts.sort_unstable();
            verts.dedup();
            for k in 1..=verts.len() {
                for f in verts.iter().copied().combinations(k) {
                    faces.insert(f);
                }
            }
        }
        if faces.is_empty() {
            return Err(Error::NoSimplices);
        }
        let mut simplices: Vec<Vec<usize>> = faces.into_iter().collect();
        simplices.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let index = simplices
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        let dim = simplices.last().map_or(0, |s| s.len() - 1);
        let mut by_dim = vec![Vec::new(); dim + 1];
        for (i, s) in simplices.iter().enumerate() {
            by_dim[s.len() - 1].push(i);
        }
        Ok(SimplicialComplex {
            labels,
            simplices,
            index,
            by_dim,
        })
    }

    /// Convenience for integer-labelled complexes.
    pub fn from_facets(maximal: &[&[usize]]) -> Result<Self> {
        let m: Vec<Vec<String>> = maximal
            .iter()
            .map(|s| s.iter().map(|v| v.to_string()).collect())
            .collect();
        Self::from_maximal(&m)
    }

    /// One maximal simplex per line, whitespace-separated labels, `#` comments.
    pub fn parse(text: &str) -> Result<Self> {
        let mut maximal = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let verts: Vec<&str> = line.split_whitespace().collect();
            if verts.iter().any(|v| v.contains('#')) {
                return Err(Error::Parse {
                    line: n + 1,
                    message: "`#` is only allowed at the start of a line".into(),
                });
            }
            let unique: BTreeSet<&&str> = verts.iter().collect();
            if unique.len() != verts.len() {
                return Err(Error::Parse {
                    line: n + 1,
                    message: "repeated vertex in a simplex".into(),
                });
            }
            maximal.push(verts);
        }
        Self::from_maximal(&maximal)
    }

    pub fn vertex_labels(&self) -> &[String] {
        &self.labels
    }

    pub fn num_vertices(&self) -> usize {
        self.labels.len()
    }

    pub fn dimension(&self) -> usize {
        self.by_dim.len() - 1
    }

    pub fn simplices(&self) -> &[Vec<usize>] {
        &self.simplices
    }

    pub fn simplex(&self, id: usize) -> &[usize] {
        &self.simplices[id]
    }

    pub fn simplex_id(&self, verts: &[usize]) -> Option<usize> {
        self.index.get(verts).copied()
    }

    /// Simplex ids of dimension `k`, in the global order.
    pub fn of_dim(&self, k: usize) -> &[usize] {
        self.by_dim.get(k).map_or(&[], |v| v.as_slice())
    }

    pub fn simplex_label(&self, id: usize) -> String {
        format!(
            "[{}]",
            self.simplices[id]
                .iter()
                .map(|v| self.labels[*v].as_str())
                .join(",")
        )
    }

    pub fn whole(&self) -> Subcomplex {
        Subcomplex::from_ids(self, (0..self.simplices.len()).collect())
    }

    /// Number of connected components.
    pub fn components(&self) -> usize {
        let n = self.num_vertices();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut x = x;
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for &e in self.of_dim(1) {
            let (a, b) = (self.simplices[e][0], self.simplices[e][1]);
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra] = rb;
        }
        (0..n).filter(|&v| find(&mut parent, v) == v).count()
    }
}

/// A face-closed set of simplices of an ambient complex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subcomplex {
    /// Sorted global simplex ids.
    ids: Vec<usize>,
    /// Per dimension, sorted global ids.
    by_dim: Vec<Vec<usize>>,
}

impl Subcomplex {
    fn from_ids(k: &SimplicialComplex, mut ids: Vec<usize>) -> Self {
        ids.sort_unstable();
        ids.dedup();
        let dim = ids
            .iter()
            .map(|&i| k.simplices[i].len() - 1)
            .max()
            .unwrap_or(0);
        let mut by_dim = vec![Vec::new(); dim + 1];
        for &i in &ids {
            by_dim[k.simplices[i].len() - 1].push(i);
        }
        Subcomplex { ids, by_dim }
    }

    /// Face closure of the given simplices.
    pub fn closure(k: &SimplicialComplex, generators: &[usize]) -> Self {
        let mut ids = Vec::new();
        for &g in generators {
            let s = &k.simplices[g];
            for r in 1..=s.len() {
                for f in s.iter().copied().combinations(r) {
                    ids.push(k.index[&f]);
                }
            }
        }
        Self::from_ids(k, ids)
    }

    pub fn ids(&self) -> &[usize] {
        &self.ids
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn of_dim(&self, k: usize) -> &[usize] {
        self.by_dim.get(k).map_or(&[], |v| v.as_slice())
    }

    pub fn dimension(&self) -> usize {
        self.by_dim.len().saturating_sub(1)
    }

    pub fn contains(&self, id: usize) -> bool {
        self.ids.binary_search(&id).is_ok()
    }

    /// Position of a `k`-simplex among this subcomplex's `k`-simplices.
    pub fn local_index(&self, k: usize, id: usize) -> Option<usize> {
        self.of_dim(k).binary_search(&id).ok()
    }

    pub fn is_subset_of(&self, other: &Subcomplex) -> bool {
        self.ids.iter().all(|&i| other.contains(i))
    }

    pub fn intersection(&self, other: &Subcomplex, k: &SimplicialComplex) -> Subcomplex {
        let ids = self
            .ids
            .iter()
            .copied()
            .filter(|&i| other.contains(i))
            .collect();
        Self::from_ids(k, ids)
    }

    pub fn union(&self, other: &Subcomplex, k: &SimplicialComplex) -> Subcomplex {
        Self::from_ids(k, self.ids.iter().chain(&other.ids).copied().collect())
    }
}

/// Closed star `K_σ` with the set of simplices it is the star of.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Star {
    pub centers: Vec<usize>,
    pub subcomplex: Subcomplex,
}

/// All faces of all simplices containing `σ`.
pub fn closed_star(k: &SimplicialComplex, sigma: &[usize]) -> Result<Star> {
    let mut s = sigma.to_vec();
    s.sort_unstable();
    let id = k
        .simplex_id(&s)
        .ok_or_else(|| Error::SimplexNotFound(format!("{sigma:?}")))?;
    let cofaces: Vec<usize> = (0..k.simplices.len())
        .filter(|&t| s.iter().all(|v| k.simplices[t].binary_search(v).is_ok()))
        .collect();
    Ok(Star {
        centers: vec![id],
        subcomplex: Subcomplex::closure(k, &cofaces),
    })
}

/// Closed stars of all simplices, equal stars merged, ordered by inclusion.
#[derive(Clone, Debug)]
pub struct StarPoset {
    complex: Arc<SimplicialComplex>,
    stars: Vec<Star>,
    poset: Poset,
}

pub fn star_poset(k: &SimplicialComplex) -> StarPoset {
    let mut stars: Vec<Star> = Vec::new();
    for id in 0..k.simplices.len() {
        let st = closed_star(k, &k.simplices[id].clone()).expect("simplex of the complex");
        match stars.iter_mut().find(|s| s.subcomplex == st.subcomplex) {
            Some(s) => s.centers.push(id),
            None => stars.push(st),
        }
    }
    let names: Vec<String> = stars
        .iter()
        .map(|s| format!("St{}", k.simplex_label(s.centers[0])))
        .collect();
    let leq = stars
        .iter()
        .map(|a| {
            stars
                .iter()
                .map(|b| a.subcomplex.is_subset_of(&b.subcomplex))
                .collect()
        })
        .collect();
    let poset = Poset::new(names, leq).expect("inclusion is a partial order");
    StarPoset {
        complex: Arc::new(k.clone()),
        stars,
        poset,
    }
}

impl StarPoset {
    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn len(&self) -> usize {
        self.stars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stars.is_empty()
    }

    pub fn star(&self, u: usize) -> &Star {
        &self.stars[u]
    }

    pub fn stars(&self) -> &[Star] {
        &self.stars
    }

    pub fn sub(&self, u: usize) -> &Subcomplex {
        &self.stars[u].subcomplex
    }

    pub fn name(&self, u: usize) -> &str {
        self.poset.name(u)
    }

    /// Strictly increasing chains `U_0 ⊂ ... ⊂ U_n`.
    pub fn chains(&self, n: usize) -> Vec<Vec<usize>> {
        self.poset.chains(n)
    }

    /// The object equal to a given subcomplex, if any.
    pub fn find(&self, sub: &Subcomplex) -> Option<usize> {
        self.stars.iter().position(|s| s.subcomplex == *sub)
    }
}

/// `C^k(base; G)` (equivalently `C_k(base; G)`), basis = `k`-simplices of `base`.
pub fn cochain_group(
    k: &SimplicialComplex,
    base: &Subcomplex,
    deg: usize,
    g: CoeffGroup,
) -> FgAbGroup {
    let ids = base.of_dim(deg);
    FgAbGroup::repeated(&g.order(), ids.len())
        .with_labels(ids.iter().map(|&i| k.simplex_label(i)).collect())
}

fn coboundary_matrix(k: &SimplicialComplex, base: &Subcomplex, deg: usize) -> Matrix {
    let rows = base.of_dim(deg + 1);
    let cols = base.of_dim(deg);
    let mut entries = Vec::new();
    for (r, &t) in rows.iter().enumerate() {
        let s = &k.simplices[t];
        for i in 0..s.len() {
            let mut face = s.clone();
            face.remove(i);
            let c = base
                .local_index(deg, k.index[&face])
                .expect("subcomplex is face-closed");
            entries.push((r, c, int(if i % 2 == 0 { 1 } else { -1 })));
        }
    }
    Matrix::from_entries(rows.len(), cols.len(), entries)
}

/// `d : C^k → C^{k+1}`, `(dg)(τ) = Σ_i (−1)^i g(∂_i τ)`.
pub fn coboundary(k: &SimplicialComplex, base: &Subcomplex, deg: usize, g: CoeffGroup) -> GroupHom {
    GroupHom::new(
        &cochain_group(k, base, deg, g),
        &cochain_group(k, base, deg + 1, g),
        coboundary_matrix(k, base, deg),
    )
    .expect("integral matrix is well defined")
}

/// `∂ : C_k → C_{k−1}`, the transpose of the coboundary.
pub fn boundary(k: &SimplicialComplex, base: &Subcomplex, deg: usize, g: CoeffGroup) -> GroupHom {
    if deg == 0 {
        return GroupHom::zero(&cochain_group(k, base, 0, g), &FgAbGroup::zero());
    }
    GroupHom::new(
        &cochain_group(k, base, deg, g),
        &cochain_group(k, base, deg - 1, g),
        coboundary_matrix(k, base, deg - 1).transpose(),
    )
    .expect("integral matrix is well defined")
}

/// Coordinate projection `C^k(B) → C^k(B')` for `B' ⊆ B`.
pub fn restrict(
    k: &SimplicialComplex,
    from: &Subcomplex,
    to: &Subcomplex,
    deg: usize,
    g: CoeffGroup,
) -> Result<GroupHom> {
    if !to.is_subset_of(from) {
        return Err(Error::NotSubcomplex(
            "restriction target is not inside the source".into(),
        ));
    }
    let entries = to
        .of_dim(deg)
        .iter()
        .enumerate()
        .map(|(r, &id)| (r, from.local_index(deg, id).expect("subset"), int(1)));
    let m = Matrix::from_entries(to.of_dim(deg).len(), from.of_dim(deg).len(), entries);
    GroupHom::new(
        &cochain_group(k, from, deg, g),
        &cochain_group(k, to, deg, g),
        m,
    )
}

/// Coordinate embedding `C_k(B') → C_k(B)` for `B' ⊆ B`.
pub fn extend_by_zero(
    k: &SimplicialComplex,
    from: &Subcomplex,
    to: &Subcomplex,
    deg: usize,
    g: CoeffGroup,
) -> Result<GroupHom> {
    let r = restrict(k, to, from, deg, g)?;
    GroupHom::new(r.target(), r.source(), r.matrix().transpose())
}

/// Cochain complex of `base`, placed so that `C^k` sits in chain degree `-k`.
pub fn cochain_complex(k: &SimplicialComplex, base: &Subcomplex, g: CoeffGroup) -> ChainComplex {
    let top = base.dimension();
    let groups: Vec<FgAbGroup> = (0..=top)
        .rev()
        .map(|d| cochain_group(k, base, d, g))
        .collect();
    let diffs = (0..top)
        .rev()
        .map(|d| coboundary_matrix(k, base, d))
        .collect();
    ChainComplex::new(-(top as i64), groups, diffs).expect("d∘d = 0")
}

/// `H^k(base; G)` for `k = 0..=dim`.
pub fn cohomology(
    k: &SimplicialComplex,
    base: &Subcomplex,
    g: CoeffGroup,
) -> Result<Vec<(usize, FgAbGroup)>> {
    let c = cochain_complex(k, base, g);
    let mut out: Vec<(usize, FgAbGroup)> = c
        .homology()?
        .into_iter()
        .map(|(n, h)| ((-n) as usize, h))
        .collect();
    out.sort_by_key(|(d, _)| *d);
    Ok(out)
}

/// Augmented chain complex over `Z`, with `Z` in degree `-1`.
pub fn augmented_chain_complex(k: &SimplicialComplex, base: &Subcomplex) -> ChainComplex {
    let top = base.dimension();
    let mut groups = vec![FgAbGroup::free(1)];
    let mut diffs = vec![Matrix::from_entries(
        1,
        base.of_dim(0).len(),
        (0..base.of_dim(0).len()).map(|j| (0, j, int(1))),
    )];
    for d in 0..=top {
        groups.push(cochain_group(k, base, d, CoeffGroup::Integers));
        if d >= 1 {
            diffs.push(coboundary_matrix(k, base, d - 1).transpose());
        }
    }
    ChainComplex::new(-1, groups, diffs).expect("∂∘∂ = 0")
}

/// Reduced homology vanishes in every degree.
pub fn is_acyclic(k: &SimplicialComplex, base: &Subcomplex) -> Result<bool> {
    augmented_chain_complex(k, base).is_acyclic()
}

/// A vertex bijection `K → K'` that maps simplices onto simplices.
#[derive(Clone, Debug)]
pub struct SimplicialIso {
    pub vertex_map: Vec<usize>,
    /// Global simplex id in the target for each source simplex.
    pub simplex_map: Vec<usize>,
    /// Orientation sign of each mapped simplex relative to sorted order.
    pub signs: Vec<i64>,
}

impl SimplicialIso {
    pub fn new(
        source: &SimplicialComplex,
        target: &SimplicialComplex,
        vertex_map: Vec<usize>,
    ) -> Result<Self> {
        let n = source.num_vertices();
        if vertex_map.len() != n || target.num_vertices() != n {
            return Err(Error::NotIsomorphism("vertex counts differ".into()));
        }
        if vertex_map.iter().collect::<BTreeSet<_>>().len() != n
            || vertex_map.iter().any(|&v| v >= n)
        {
            return Err(Error::NotIsomorphism(
                "vertex map is not a bijection".into(),
            ));
        }
        if source.simplices.len() != target.simplices.len() {
            return Err(Error::NotIsomorphism("simplex counts differ".into()));
        }
        let mut simplex_map = Vec::with_capacity(source.simplices.len());
        let mut signs = Vec::with_capacity(source.simplices.len());
        for s in &source.simplices {
            let image: Vec<usize> = s.iter().map(|&v| vertex_map[v]).collect();
            let mut sorted = image.clone();
            sorted.sort_unstable();
            let id = target
                .simplex_id(&sorted)
                .ok_or_else(|| Error::NotIsomorphism(format!("image of {s:?} is not a simplex")))?;
            simplex_map.push(id);
            signs.push(permutation_sign(&image));
        }
        Ok(SimplicialIso {
            vertex_map,
            simplex_map,
            signs,
        })
    }

    /// Looks vertices up by label: `pairs` maps source labels to target labels.
    pub fn from_labels(
        source: &SimplicialComplex,
        target: &SimplicialComplex,
        pairs: &[(&str, &str)],
    ) -> Result<Self> {
        let find = |k: &SimplicialComplex, l: &str| {
            k.labels
                .iter()
                .position(|x| x == l)
                .ok_or_else(|| Error::NotIsomorphism(format!("unknown vertex {l}")))
        };
        let mut map = vec![usize::MAX; source.num_vertices()];
        for (a, b) in pairs {
            map[find(source, a)?] = find(target, b)?;
        }
        Self::new(source, target, map)
    }
}

/// Sign of the permutation that sorts `v` (distinct entries).
pub fn permutation_sign(v: &[usize]) -> i64 {
    let mut inversions = 0;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            if v[i] > v[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn boundary_tetrahedron() -> SimplicialComplex {
        SimplicialComplex::from_facets(&[&[0, 1, 2], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3]]).unwrap()
    }

    #[test]
    fn parse_and_errors() {
        let k = SimplicialComplex::parse("# a path\nv w\nw x\n").unwrap();
        assert_eq!(k.num_vertices(), 3);
        assert_eq!(k.of_dim(1).len(), 2);
        assert_eq!(
            SimplicialComplex::parse("# nothing\n\n").unwrap_err(),
            Error::NoSimplices
        );
        assert!(matches!(
            SimplicialComplex::parse("a a\n"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn stars_of_single_edge_coincide() {
        let k = SimplicialComplex::from_facets(&[&[0, 1]]).unwrap();
        let p = star_poset(&k);
        assert_eq!(p.len(), 1);
        assert_eq!(p.star(0).centers.len(), 3);
        assert_eq!(p.sub(0), &k.whole());
    }

    #[test]
    fn path_star_poset() {
        let k = SimplicialComplex::parse("v w\nw x\n").unwrap();
        let p = star_poset(&k);
        assert_eq!(p.len(), 3);
        let names: Vec<&str> = (0..p.len()).map(|u| p.name(u)).collect();
        assert_eq!(names, vec!["St[v]", "St[w]", "St[x]"]);
        // St[v] = St[vw] ⊂ St[w] = whole
        assert!(p.poset().lt(0, 1) && p.poset().lt(2, 1));
        assert_eq!(p.chains(1), vec![vec![0, 1], vec![2, 1]]);
    }

    #[test]
    fn tetrahedron_boundary_has_fourteen_acyclic_stars() {
        let k = boundary_tetrahedron();
        let p = star_poset(&k);
        assert_eq!(p.len(), 14);
        for s in p.stars() {
            assert!(is_acyclic(&k, &s.subcomplex).unwrap());
        }
        let tri = closed_star(&k, &[0, 1, 2]).unwrap();
        assert_eq!(tri.subcomplex.ids().len(), 7);
        assert!(!is_acyclic(&k, &k.whole()).unwrap());
    }

    #[test]
    fn coboundary_conventions() {
        let k = SimplicialComplex::from_facets(&[&[0, 1]]).unwrap();
        let d = coboundary(&k, &k.whole(), 0, CoeffGroup::Integers);
        assert_eq!(d.matrix(), &Matrix::from_rows(&[vec![-1, 1]]));
        let b = boundary(&k, &k.whole(), 1, CoeffGroup::Integers);
        assert_eq!(b.matrix(), &Matrix::from_rows(&[vec![-1], vec![1]]));
        let k = boundary_tetrahedron();
        let g = CoeffGroup::Cyclic(6);
        let dd = coboundary(&k, &k.whole(), 0, g)
            .then(&coboundary(&k, &k.whole(), 1, g))
            .unwrap();
        assert!(dd.is_zero());
    }

    #[test]
    fn sphere_cohomology() {
        let k = boundary_tetrahedron();
        let h = cohomology(&k, &k.whole(), CoeffGroup::Integers).unwrap();
        let s: Vec<String> = h.iter().map(|(_, g)| g.to_string()).collect();
        assert_eq!(s, vec!["Z", "0", "Z"]);
    }

    #[test]
    fn restriction_and_extension_compose() {
        let k = boundary_tetrahedron();
        let p = star_poset(&k);
        let g = CoeffGroup::Cyclic(2);
        let (a, b) = (p.poset().covers()[0].0, p.poset().covers()[0].1);
        let whole = k.whole();
        let r1 = restrict(&k, &whole, p.sub(b), 1, g).unwrap();
        let r2 = restrict(&k, p.sub(b), p.sub(a), 1, g).unwrap();
        let r = restrict(&k, &whole, p.sub(a), 1, g).unwrap();
        assert!(r1.then(&r2).unwrap().same_map(&r));
        let e1 = extend_by_zero(&k, p.sub(a), p.sub(b), 0, g).unwrap();
        let e2 = extend_by_zero(&k, p.sub(b), &whole, 0, g).unwrap();
        let e = extend_by_zero(&k, p.sub(a), &whole, 0, g).unwrap();
        assert!(e1.then(&e2).unwrap().same_map(&e));
        assert!(restrict(&k, p.sub(a), &whole, 0, g).is_err());
    }

    #[test]
    fn permutation_signs() {
        assert_eq!(permutation_sign(&[0, 1, 2]), 1);
        assert_eq!(permutation_sign(&[1, 0, 2]), -1);
        assert_eq!(permutation_sign(&[1, 2, 0]), 1);
    }
}

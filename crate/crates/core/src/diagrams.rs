//! Functors from a finite poset to chain complexes.
//!
//! Maps are stored on Hasse covers only. The map for a general relation
//! `a < b` is composed along the first cover path; `verify` checks that every
//! other factorization agrees, so path-independence is tested, not assumed.

use std::collections::BTreeMap;

use crate::complexes::{ChainComplex, ChainMap};
use crate::error::{Error, Result};
use crate::gauge::{local_config_complex, local_obs_complex};
use crate::poset::Poset;
use crate::simplicial::{extend_by_zero, restrict, CoeffGroup, StarPoset};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variance {
    /// `a ≤ b` gives `X(a) → X(b)`.
    Covariant,
    /// `a ≤ b` gives `X(b) → X(a)`.
    Contravariant,
}

impl Variance {
    pub fn flipped(self) -> Self {
        match self {
            Variance::Covariant => Variance::Contravariant,
            Variance::Contravariant => Variance::Covariant,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Diagram {
    poset: Poset,
    variance: Variance,
    values: Vec<ChainComplex>,
    covers: BTreeMap<(usize, usize), ChainMap>,
    /// Every strict relation, composed along `Poset::cover_path`.
    maps: BTreeMap<(usize, usize), ChainMap>,
}

impl Diagram {
    /// `covers` must hold exactly one map per Hasse cover `(a, b)`, oriented by `variance`.
    /// Functoriality is not checked here; see [`Diagram::verify`].
    pub fn new(
        poset: Poset,
        variance: Variance,
        values: Vec<ChainComplex>,
        covers: BTreeMap<(usize, usize), ChainMap>,
    ) -> Result<Self> {
        if values.len() != poset.len() {
            return Err(Error::Shape(format!(
                "{} values for {} objects",
                values.len(),
                poset.len()
            )));
        }
        if covers.keys().ne(poset.covers().iter()) {
            return Err(Error::Shape(
                "cover maps must be indexed by exactly the Hasse covers".into(),
            ));
        }
        for (&(a, b), f) in &covers {
            let (s, t) = match variance {
                Variance::Covariant => (a, b),
                Variance::Contravariant => (b, a),
            };
            if f.source() != &values[s] || f.target() != &values[t] {
                return Err(Error::Diagram(format!(
                    "map for {} ≤ {} has the wrong ends",
                    poset.name(a),
                    poset.name(b)
                )));
            }
        }
        let mut d = Diagram {
            poset,
            variance,
            values,
            covers,
            maps: BTreeMap::new(),
        };
        d.compose_all()?;
        Ok(d)
    }

    fn compose_all(&mut self) -> Result<()> {
        let mut maps = BTreeMap::new();
        for a in 0..self.poset.len() {
            for b in 0..self.poset.len() {
                if !self.poset.lt(a, b) {
                    continue;
                }
                let path = self.poset.cover_path(a, b).expect("a < b");
                let mut steps = path
                    .windows(2)
                    .map(|w| &self.covers[&(w[0], w[1])])
                    .collect::<Vec<_>>();
                if self.variance == Variance::Contravariant {
                    steps.reverse();
                }
                let mut f = steps[0].clone();
                for s in &steps[1..] {
                    f = f.then(s)?;
                }
                maps.insert((a, b), f);
            }
        }
        self.maps = maps;
        Ok(())
    }

    /// Constant diagram: value `c` everywhere, identities on every relation.
    pub fn constant(poset: &Poset, variance: Variance, c: &ChainComplex) -> Self {
        let id = ChainMap::identity(c);
        let covers = poset.covers().iter().map(|&ab| (ab, id.clone())).collect();
        Diagram::new(
            poset.clone(),
            variance,
            vec![c.clone(); poset.len()],
            covers,
        )
        .expect("constant diagram")
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn variance(&self) -> Variance {
        self.variance
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, a: usize) -> &ChainComplex {
        &self.values[a]
    }

    pub fn values(&self) -> &[ChainComplex] {
        &self.values
    }

    pub fn cover_map(&self, a: usize, b: usize) -> Option<&ChainMap> {
        self.covers.get(&(a, b))
    }

    /// The map for `a ≤ b`; `None` unless `a ≤ b`.
    pub fn map(&self, a: usize, b: usize) -> Option<ChainMap> {
        if a == b {
            Some(ChainMap::identity(&self.values[a]))
        } else {
            self.maps.get(&(a, b)).cloned()
        }
    }

    fn map_ref(&self, a: usize, b: usize) -> &ChainMap {
        &self.maps[&(a, b)]
    }

    /// Same diagram with one cover map replaced, unverified.
    pub fn with_cover_map(&self, a: usize, b: usize, f: ChainMap) -> Result<Self> {
        let mut covers = self.covers.clone();
        if covers.insert((a, b), f).is_none() {
            return Err(Error::Shape(format!("({a}, {b}) is not a cover")));
        }
        Diagram::new(
            self.poset.clone(),
            self.variance,
            self.values.clone(),
            covers,
        )
    }

    /// The same data viewed on the opposite poset with the opposite variance.
    pub fn opposite(&self) -> Self {
        let covers = self
            .covers
            .iter()
            .map(|(&(a, b), f)| ((b, a), f.clone()))
            .collect();
        Diagram::new(
            self.poset.opposite(),
            self.variance.flipped(),
            self.values.clone(),
            covers,
        )
        .expect("opposite of a diagram")
    }

    /// Every cover map is a chain map and `map(a, c)` equals the composite
    /// through every `b` with `a < b < c`. Reports the first failing triple.
    pub fn verify(&self) -> Result<()> {
        for (&(a, b), f) in &self.covers {
            f.verify().map_err(|e| {
                Error::Diagram(format!(
                    "map for {} ≤ {} is not a chain map: {e}",
                    self.poset.name(a),
                    self.poset.name(b)
                ))
            })?;
        }
        let n = self.poset.len();
        for a in 0..n {
            for b in 0..n {
                if !self.poset.lt(a, b) {
                    continue;
                }
                for c in 0..n {
                    if !self.poset.lt(b, c) {
                        continue;
                    }
                    let (ab, bc) = (self.map_ref(a, b), self.map_ref(b, c));
                    let composite = match self.variance {
                        Variance::Covariant => ab.then(bc)?,
                        Variance::Contravariant => bc.then(ab)?,
                    };
                    if !composite.same_map(self.map_ref(a, c)) {
                        return Err(Error::Diagram(format!(
                            "{} ≤ {} ≤ {}: composite differs from the direct map",
                            self.poset.name(a),
                            self.poset.name(b),
                            self.poset.name(c)
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// `true` iff [`Diagram::verify`] passes.
pub fn verify_diagram(d: &Diagram) -> bool {
    d.verify().is_ok()
}

/// Componentwise chain maps `f_a : X(a) → Y(a)` between diagrams on one poset.
#[derive(Clone, Debug)]
pub struct DiagramMorphism {
    pub components: Vec<ChainMap>,
}

impl DiagramMorphism {
    /// Checks every naturality square.
    pub fn new(source: &Diagram, target: &Diagram, components: Vec<ChainMap>) -> Result<Self> {
        if source.poset != target.poset
            || source.variance != target.variance
            || components.len() != source.len()
        {
            return Err(Error::Shape(
                "morphism between diagrams of different shapes".into(),
            ));
        }
        for (a, f) in components.iter().enumerate() {
            if f.source() != source.value(a) || f.target() != target.value(a) {
                return Err(Error::Shape(format!(
                    "component at {} has the wrong ends",
                    source.poset.name(a)
                )));
            }
        }
        for &(a, b) in source.poset.covers() {
            let (x, y) = (
                source.cover_map(a, b).expect("cover"),
                target.cover_map(a, b).expect("cover"),
            );
            let (first, second) = match source.variance {
                Variance::Covariant => (a, b),
                Variance::Contravariant => (b, a),
            };
            let lhs = x.then(&components[second])?;
            let rhs = components[first].then(y)?;
            if !lhs.same_map(&rhs) {
                return Err(Error::Diagram(format!(
                    "naturality fails on {} ≤ {}",
                    source.poset.name(a),
                    source.poset.name(b)
                )));
            }
        }
        Ok(DiagramMorphism { components })
    }
}

/// Contravariant diagram of local configuration complexes with restriction maps.
pub fn config_diagram(sp: &StarPoset, g: CoeffGroup) -> Result<Diagram> {
    let k = sp.complex();
    let values: Vec<ChainComplex> = (0..sp.len())
        .map(|u| local_config_complex(k, sp.sub(u), g))
        .collect();
    let mut covers = BTreeMap::new();
    for &(a, b) in sp.poset().covers() {
        let (from, to) = (sp.sub(b), sp.sub(a));
        let comps = vec![
            (0, restrict(k, from, to, 1, g)?.matrix().clone()),
            (1, restrict(k, from, to, 0, g)?.matrix().clone()),
        ];
        covers.insert((a, b), ChainMap::new(&values[b], &values[a], comps)?);
    }
    let d = Diagram::new(sp.poset().clone(), Variance::Contravariant, values, covers)?;
    d.verify()?;
    Ok(d)
}

/// Covariant diagram of local observable complexes with extension-by-zero maps.
pub fn obs_diagram(sp: &StarPoset, g: CoeffGroup) -> Result<Diagram> {
    let k = sp.complex();
    let values = (0..sp.len())
        .map(|u| local_obs_complex(k, sp.sub(u), g))
        .collect::<Result<Vec<_>>>()?;
    let mut covers = BTreeMap::new();
    for &(a, b) in sp.poset().covers() {
        let (from, to) = (sp.sub(a), sp.sub(b));
        let comps = vec![
            (0, extend_by_zero(k, from, to, 1, g)?.matrix().clone()),
            (-1, extend_by_zero(k, from, to, 0, g)?.matrix().clone()),
        ];
        covers.insert((a, b), ChainMap::new(&values[a], &values[b], comps)?);
    }
    let d = Diagram::new(sp.poset().clone(), Variance::Covariant, values, covers)?;
    d.verify()?;
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::{FgAbGroup, Matrix};
    use crate::simplicial::{star_poset, SimplicialComplex};

    fn path() -> SimplicialComplex {
        SimplicialComplex::from_maximal(&[vec!["v", "w"], vec!["w", "x"]]).unwrap()
    }

    fn tetra_boundary() -> SimplicialComplex {
        SimplicialComplex::from_facets(&[&[0, 1, 2], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3]]).unwrap()
    }

    #[test]
    fn single_edge_diagram_is_one_complex() {
        let k = SimplicialComplex::from_facets(&[&[0, 1]]).unwrap();
        let sp = star_poset(&k);
        let d = config_diagram(&sp, CoeffGroup::cyclic(2).unwrap()).unwrap();
        assert_eq!(d.len(), 1);
        assert!(d.poset().covers().is_empty());
    }

    #[test]
    fn path_restriction_is_projection() {
        let k = path();
        let sp = star_poset(&k);
        let d = config_diagram(&sp, CoeffGroup::Integers).unwrap();
        // St[v] = [v,w] sits inside St[w] = whole path
        let f = d.map(0, 1).unwrap();
        assert_eq!(
            f.component(0).matrix().to_dense_rows(),
            Matrix::from_rows(&[vec![1, 0]]).to_dense_rows()
        );
        assert_eq!(
            f.component(1).matrix().to_dense_rows(),
            Matrix::from_rows(&[vec![1, 0, 0], vec![0, 1, 0]]).to_dense_rows()
        );
        let o = obs_diagram(&sp, CoeffGroup::cyclic(2).unwrap()).unwrap();
        assert_eq!(
            o.map(0, 1).unwrap().component(0).matrix().to_dense_rows(),
            Matrix::from_rows(&[vec![1], vec![0]]).to_dense_rows()
        );
    }

    #[test]
    fn tetra_boundary_diagrams_commute() {
        let sp = star_poset(&tetra_boundary());
        let g = CoeffGroup::cyclic(2).unwrap();
        assert!(verify_diagram(&config_diagram(&sp, g).unwrap()));
        assert!(verify_diagram(&obs_diagram(&sp, g).unwrap()));
        assert!(verify_diagram(&config_diagram(&sp, g).unwrap().opposite()));
    }

    #[test]
    fn corrupted_map_names_the_triple() {
        let sp = star_poset(&tetra_boundary());
        let g = CoeffGroup::cyclic(3).unwrap();
        let d = config_diagram(&sp, g).unwrap();
        for &(a, b) in sp.poset().covers() {
            let f = d.cover_map(a, b).unwrap();
            let two = crate::abelian::int(2);
            let doubled = ChainMap::new(
                f.source(),
                f.target(),
                vec![
                    (0, f.component(0).matrix().scaled(&two)),
                    (1, f.component(1).matrix().scaled(&two)),
                ],
            )
            .unwrap();
            let bad = d.with_cover_map(a, b, doubled).unwrap();
            assert!(!verify_diagram(&bad));
            let msg = bad.verify().unwrap_err().to_string();
            assert!(
                msg.contains(sp.name(a)) || msg.contains(sp.name(b)),
                "{msg}"
            );
        }
    }

    #[test]
    fn constant_diagram_and_morphisms() {
        let p = Poset::linear(3);
        let c = ChainComplex::concentrated(0, FgAbGroup::cyclic(4));
        let d = Diagram::constant(&p, Variance::Covariant, &c);
        assert!(verify_diagram(&d));
        let two = ChainMap::new(&c, &c, vec![(0, Matrix::from_rows(&[vec![2]]))]).unwrap();
        assert!(DiagramMorphism::new(&d, &d, vec![two.clone(); 3]).is_ok());
        let id = ChainMap::identity(&c);
        let twisted = d.with_cover_map(0, 1, two.clone()).unwrap();
        assert!(DiagramMorphism::new(&d, &twisted, vec![id.clone(), id, two]).is_err());
    }
}

//! Finitely generated abelian groups presented as `⊕ Z/m_i` (with `m_i = 0`
//! meaning `Z`), elements, and homomorphisms.

use std::fmt;
use std::sync::Arc;

use itertools::Itertools;

use super::integer::{divides, gcd, int, is_small_prime, is_zero, reduce, Integer};
use super::matrix::{Matrix, SparseVec};
use crate::error::{Error, Result};

/// Diagonal presentation `⊕_i Z/orders[i]`. Groups produced by kernels,
/// cokernels and homology are already in invariant-factor order (torsion
/// ascending along the divisibility chain, then free); direct sums are kept
/// blockwise and compared through [`FgAbGroup::invariants`].
#[derive(Clone, PartialEq, Eq)]
pub struct FgAbGroup {
    orders: Arc<Vec<Integer>>,
    labels: Option<Arc<Vec<String>>>,
}

/// Canonical isomorphism invariant: free rank and invariant factors `d_1 | d_2 | ...`, each `>= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Invariants {
    pub free_rank: usize,
    pub invariant_factors: Vec<Integer>,
}

impl fmt::Display for Invariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.invariant_factors.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl fmt::Debug for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FgAbGroup[{}; {} generators]",
            self.invariants(),
            self.orders.len()
        )
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.invariants())
    }
}

impl FgAbGroup {
    pub fn from_orders(orders: Vec<Integer>) -> Self {
        assert!(
            orders.iter().all(|m| *m >= int(0)),
            "orders must be non-negative"
        );
        FgAbGroup {
            orders: Arc::new(orders),
            labels: None,
        }
    }

    pub fn zero() -> Self {
        Self::from_orders(Vec::new())
    }

    pub fn free(rank: usize) -> Self {
        Self::from_orders(vec![int(0); rank])
    }

    pub fn cyclic(order: u64) -> Self {
        Self::from_orders(vec![Integer::from(order)])
    }

    /// `n` copies of `Z/order` (`order = 0` gives `Z^n`).
    pub fn repeated(order: &Integer, n: usize) -> Self {
        Self::from_orders(vec![order.clone(); n])
    }

    /// The canonical group with the given invariants, generators ordered torsion first.
    pub fn from_invariants(inv: &Invariants) -> Self {
        let mut orders = inv.invariant_factors.clone();
        orders.extend(std::iter::repeat_n(int(0), inv.free_rank));
        Self::from_orders(orders)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.orders.len(), "one label per generator");
        self.labels = Some(Arc::new(labels));
        self
    }

    pub fn direct_sum(parts: &[&FgAbGroup]) -> Self {
        let orders = parts
            .iter()
            .flat_map(|g| g.orders.iter().cloned())
            .collect();
        let labelled = parts
            .iter()
            .all(|g| g.labels.is_some() || g.orders.is_empty());
        let mut out = Self::from_orders(orders);
        if labelled && !parts.is_empty() {
            out.labels = Some(Arc::new(
                parts
                    .iter()
                    .flat_map(|g| g.labels.as_ref().map(|l| l.to_vec()).unwrap_or_default())
                    .collect(),
            ));
        }
        out
    }

    pub fn ngens(&self) -> usize {
        self.orders.len()
    }

    pub fn orders(&self) -> &[Integer] {
        &self.orders
    }

    pub fn order(&self, i: usize) -> &Integer {
        &self.orders[i]
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref().map(|v| v.as_slice())
    }

    pub fn label(&self, i: usize) -> String {
        self.labels
            .as_ref()
            .map(|l| l[i].clone())
            .unwrap_or_else(|| format!("#{i}"))
    }

    pub fn is_trivial(&self) -> bool {
        self.orders.iter().all(|m| *m == int(1))
    }

    /// `Some(p)` when every generator has the same prime order `p`.
    pub fn uniform_prime(&self) -> Option<u64> {
        let first = self.orders.first()?;
        if self.orders.iter().all(|m| m == first) {
            is_small_prime(first)
        } else {
            None
        }
    }

    pub fn free_rank(&self) -> usize {
        self.orders.iter().filter(|m| is_zero(m)).count()
    }

    pub fn invariants(&self) -> Invariants {
        let torsion: Vec<Integer> = self
            .orders
            .iter()
            .filter(|m| **m > int(1))
            .cloned()
            .collect();
        Invariants {
            free_rank: self.free_rank(),
            invariant_factors: invariant_factors(&torsion),
        }
    }

    pub fn is_isomorphic(&self, other: &FgAbGroup) -> bool {
        self.invariants() == other.invariants()
    }

    /// Reduces an integer vector to normal-form coordinates.
    pub fn normalize(&self, coords: &[Integer]) -> Vec<Integer> {
        coords
            .iter()
            .zip(self.orders.iter())
            .map(|(c, m)| reduce(c, m))
            .collect()
    }

    pub fn normalize_sparse(&self, v: &SparseVec) -> SparseVec {
        v.reduced(&self.orders)
    }

    /// Number of elements, or `None` if infinite.
    pub fn cardinality(&self) -> Option<Integer> {
        self.orders
            .iter()
            .try_fold(int(1), |acc, m| (!is_zero(m)).then(|| acc * m))
    }
}

/// Invariant factors of `⊕ Z/m_i` for `m_i >= 2`, via a pairwise coprime base.
pub fn invariant_factors(orders: &[Integer]) -> Vec<Integer> {
    if orders.is_empty() {
        return Vec::new();
    }
    if orders.iter().all_equal() {
        return orders.to_vec();
    }
    let counts = orders.iter().cloned().counts();
    let distinct: Vec<Integer> = counts.keys().cloned().sorted().collect();
    let base = coprime_base(&distinct);
    let mut exponents: Vec<Vec<u32>> = vec![Vec::new(); base.len()];
    for m in &distinct {
        let mut rest = m.clone();
        for (b, exps) in base.iter().zip(exponents.iter_mut()) {
            let mut e = 0u32;
            while divides(b, &rest) {
                rest = &rest / b;
                e += 1;
            }
            if e > 0 {
                exps.extend(std::iter::repeat_n(e, counts[m]));
            }
        }
        debug_assert_eq!(rest, int(1));
    }
    let n = exponents.iter().map(Vec::len).max().unwrap_or(0);
    for e in exponents.iter_mut() {
        e.sort_unstable_by(|a, b| b.cmp(a));
    }
    let mut factors: Vec<Integer> = (0..n)
        .map(|i| {
            base.iter().zip(&exponents).fold(int(1), |acc, (b, e)| {
                acc * b.pow(e.get(i).copied().unwrap_or(0) as usize)
            })
        })
        .collect();
    factors.reverse();
    factors
}

fn coprime_base(values: &[Integer]) -> Vec<Integer> {
    let mut base: Vec<Integer> = Vec::new();
    let mut stack: Vec<Integer> = values.to_vec();
    'outer: while let Some(y) = stack.pop() {
        if y == int(1) {
            continue;
        }
        for k in 0..base.len() {
            let g = gcd(&base[k], &y);
            if g != int(1) {
                let b = base.swap_remove(k);
                if b == y {
                    base.push(b);
                    continue 'outer;
                }
                stack.push(&b / &g);
                stack.push(&y / &g);
                stack.push(g);
                continue 'outer;
            }
        }
        base.push(y);
    }
    base
}

/// `iso_check`: true iff the canonical forms coincide.
pub fn iso_check(a: &FgAbGroup, b: &FgAbGroup) -> bool {
    a.is_isomorphic(b)
}

/// An element with coordinates reduced into `[0, m_i)` on torsion generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupElement {
    group: FgAbGroup,
    coords: Vec<Integer>,
}

impl GroupElement {
    pub fn new(group: &FgAbGroup, coords: &[Integer]) -> Result<Self> {
        if coords.len() != group.ngens() {
            return Err(Error::Shape(format!(
                "{} coordinates for {} generators",
                coords.len(),
                group.ngens()
            )));
        }
        Ok(GroupElement {
            group: group.clone(),
            coords: group.normalize(coords),
        })
    }

    pub fn group(&self) -> &FgAbGroup {
        &self.group
    }

    pub fn coords(&self) -> &[Integer] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(is_zero)
    }

    pub fn add(&self, other: &GroupElement) -> Result<GroupElement> {
        if self.group != other.group {
            return Err(Error::Mismatch("elements of different groups".into()));
        }
        let sum: Vec<Integer> = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a + b)
            .collect();
        GroupElement::new(&self.group, &sum)
    }

    pub fn to_sparse(&self) -> SparseVec {
        SparseVec::from_dense(&self.coords)
    }
}

/// Homomorphism given by an integer matrix (target generators × source generators),
/// stored reduced modulo the target orders.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    source: FgAbGroup,
    target: FgAbGroup,
    matrix: Matrix,
}

impl GroupHom {
    pub fn new(source: &FgAbGroup, target: &FgAbGroup, matrix: Matrix) -> Result<Self> {
        if matrix.shape() != (target.ngens(), source.ngens()) {
            return Err(Error::Shape(format!(
                "matrix {:?} for hom {} -> {} generators",
                matrix.shape(),
                source.ngens(),
                target.ngens()
            )));
        }
        for (j, col) in matrix.columns().iter().enumerate() {
            let d = source.order(j);
            if is_zero(d) {
                continue;
            }
            if col.iter().any(|(i, v)| {
                !divides(target.order(*i), &(v * d))
                    && !(is_zero(target.order(*i)) && is_zero(&(v * d)))
            }) {
                return Err(Error::IllDefined {
                    generator: j,
                    order: d.to_string(),
                });
            }
        }
        let matrix = matrix.reduced_rows(target.orders());
        Ok(GroupHom {
            source: source.clone(),
            target: target.clone(),
            matrix,
        })
    }

    /// Skips the torsion check; callers guarantee well-definedness.
    pub(crate) fn new_unchecked(source: &FgAbGroup, target: &FgAbGroup, matrix: Matrix) -> Self {
        debug_assert_eq!(matrix.shape(), (target.ngens(), source.ngens()));
        let matrix = matrix.reduced_rows(target.orders());
        GroupHom {
            source: source.clone(),
            target: target.clone(),
            matrix,
        }
    }

    pub fn identity(g: &FgAbGroup) -> Self {
        GroupHom {
            source: g.clone(),
            target: g.clone(),
            matrix: Matrix::identity(g.ngens()).reduced_rows(g.orders()),
        }
    }

    pub fn zero(source: &FgAbGroup, target: &FgAbGroup) -> Self {
        GroupHom {
            source: source.clone(),
            target: target.clone(),
            matrix: Matrix::zeros(target.ngens(), source.ngens()),
        }
    }

    pub fn source(&self) -> &FgAbGroup {
        &self.source
    }

    pub fn target(&self) -> &FgAbGroup {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &GroupHom) -> Result<GroupHom> {
        if self.target.orders() != next.source.orders() {
            return Err(Error::Shape(
                "composition of homs with mismatched groups".into(),
            ));
        }
        Ok(GroupHom::new_unchecked(
            &self.source,
            &next.target,
            next.matrix.mul(&self.matrix),
        ))
    }

    pub fn add(&self, other: &GroupHom) -> Result<GroupHom> {
        self.check_parallel(other)?;
        Ok(GroupHom::new_unchecked(
            &self.source,
            &self.target,
            self.matrix.add(&other.matrix),
        ))
    }

    pub fn sub(&self, other: &GroupHom) -> Result<GroupHom> {
        self.check_parallel(other)?;
        Ok(GroupHom::new_unchecked(
            &self.source,
            &self.target,
            self.matrix.sub(&other.matrix),
        ))
    }

    pub fn neg(&self) -> GroupHom {
        GroupHom::new_unchecked(&self.source, &self.target, self.matrix.neg())
    }

    fn check_parallel(&self, other: &GroupHom) -> Result<()> {
        if self.source.orders() != other.source.orders()
            || self.target.orders() != other.target.orders()
        {
            return Err(Error::Shape("homs between different groups".into()));
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    /// Equality as homomorphisms (matrices are stored reduced).
    pub fn same_map(&self, other: &GroupHom) -> bool {
        self.source.orders() == other.source.orders()
            && self.target.orders() == other.target.orders()
            && self.matrix == other.matrix
    }

    pub fn apply(&self, x: &GroupElement) -> Result<GroupElement> {
        if x.group().orders() != self.source.orders() {
            return Err(Error::Mismatch("element not in the source group".into()));
        }
        let y = self.matrix.apply(&x.to_sparse());
        GroupElement::new(&self.target, &y.to_dense(self.target.ngens()))
    }

    pub fn apply_sparse(&self, x: &SparseVec) -> SparseVec {
        self.matrix.apply(x).reduced(self.target.orders())
    }

    pub fn direct_sum(parts: &[&GroupHom]) -> GroupHom {
        let s = FgAbGroup::direct_sum(&parts.iter().map(|h| &h.source).collect::<Vec<_>>());
        let t = FgAbGroup::direct_sum(&parts.iter().map(|h| &h.target).collect::<Vec<_>>());
        let m = Matrix::block_diag(&parts.iter().map(|h| &h.matrix).collect::<Vec<_>>());
        GroupHom {
            source: s,
            target: t,
            matrix: m,
        }
    }
}

/// Generators and a relation matrix whose columns span the relation lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixPresentation {
    pub generator_count: usize,
    pub relations: Matrix,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inv(free: usize, t: &[i64]) -> Invariants {
        Invariants {
            free_rank: free,
            invariant_factors: t.iter().map(|&x| int(x)).collect(),
        }
    }

    #[test]
    fn invariant_factor_merge() {
        let g = FgAbGroup::from_orders(vec![int(2), int(6)]);
        assert_eq!(g.invariants(), inv(0, &[2, 6]));
        let g = FgAbGroup::from_orders(vec![int(6), int(2)]);
        assert_eq!(g.invariants(), inv(0, &[2, 6]));
        let g = FgAbGroup::from_orders(vec![int(4), int(6), int(0), int(1)]);
        assert_eq!(g.invariants(), inv(1, &[2, 12]));
        let g = FgAbGroup::from_orders(vec![int(2), int(3)]);
        assert_eq!(g.invariants(), inv(0, &[6]));
    }

    #[test]
    fn iso_examples() {
        assert!(iso_check(&FgAbGroup::free(1), &FgAbGroup::free(1)));
        let z2z2 = FgAbGroup::from_orders(vec![int(2), int(2)]);
        assert!(!iso_check(&z2z2, &FgAbGroup::cyclic(4)));
        let a = FgAbGroup::from_orders(vec![int(2), int(6)]);
        let b = FgAbGroup::from_orders(vec![int(6), int(2)]);
        assert!(iso_check(&a, &b));
    }

    #[test]
    fn pretty_print() {
        assert_eq!(inv(0, &[]).to_string(), "0");
        assert_eq!(inv(1, &[]).to_string(), "Z");
        assert_eq!(inv(2, &[2, 4]).to_string(), "Z^2 + Z/2 + Z/4");
        assert_eq!(inv(0, &[3]).to_string(), "Z/3");
    }

    #[test]
    fn hom_well_definedness() {
        let z2 = FgAbGroup::cyclic(2);
        let z4 = FgAbGroup::cyclic(4);
        assert!(GroupHom::new(&z2, &z4, Matrix::from_rows(&[vec![2]])).is_ok());
        assert!(matches!(
            GroupHom::new(&z2, &z4, Matrix::from_rows(&[vec![1]])),
            Err(Error::IllDefined { .. })
        ));
        assert!(GroupHom::new(&z2, &FgAbGroup::free(1), Matrix::from_rows(&[vec![1]])).is_err());
        assert!(GroupHom::new(&FgAbGroup::free(1), &z2, Matrix::from_rows(&[vec![1]])).is_ok());
    }

    #[test]
    fn element_normalization() {
        let g = FgAbGroup::from_orders(vec![int(3), int(0)]);
        let x = GroupElement::new(&g, &[int(-1), int(-1)]).unwrap();
        assert_eq!(x.coords(), &[int(2), int(-1)]);
    }
}

//! Subquotients `S / Q` of a diagonal group `A`, returned in canonical form
//! with representatives for each generator and a coordinate map.

use super::field::{kernel_basis, to_fvec, FieldQuotient, FieldSpan};
use super::group::{FgAbGroup, GroupHom, MatrixPresentation};
use super::integer::{int, Integer};
use super::lattice::{kernel_lattice, LatticeQuotient};
use super::matrix::{Matrix, SparseVec};
use crate::error::{Error, Result};

/// Which subgroup `S` of the ambient group to start from.
pub enum Span<'a> {
    All,
    Generators(&'a [SparseVec]),
    KernelOf(&'a GroupHom),
}

#[derive(Clone, Debug)]
enum Coordinates {
    Lattice(LatticeQuotient),
    Field(FieldQuotient),
}

#[derive(Clone, Debug)]
pub struct Subquotient {
    ambient: FgAbGroup,
    group: FgAbGroup,
    generators: Vec<SparseVec>,
    coords: Coordinates,
}

impl Subquotient {
    /// `S / (Q ∩ S)` where `Q` is spanned by `relations`; relations must lie in `S`.
    pub fn new(ambient: &FgAbGroup, span: Span<'_>, relations: &[SparseVec]) -> Result<Self> {
        let prime = match &span {
            Span::KernelOf(f) => {
                if f.source().orders() != ambient.orders() {
                    return Err(Error::Shape(
                        "kernel of a map out of a different group".into(),
                    ));
                }
                ambient
                    .uniform_prime()
                    .filter(|p| f.target().ngens() == 0 || f.target().uniform_prime() == Some(*p))
            }
            _ => ambient.uniform_prime(),
        };
        let (coords, generators, orders) = match prime {
            Some(p) => {
                let rel: Vec<_> = relations.iter().map(|r| to_fvec(r, p)).collect();
                let fspan = match span {
                    Span::All => FieldSpan::All(ambient.ngens()),
                    Span::Generators(g) => {
                        FieldSpan::Generators(g.iter().map(|v| to_fvec(v, p)).collect())
                    }
                    Span::KernelOf(f) => FieldSpan::Designated(kernel_basis(f.matrix(), p)),
                };
                let q = FieldQuotient::new(p, fspan, &rel);
                let gens = q.generators();
                let orders = vec![Integer::from(p); q.dimension()];
                let coords = Coordinates::Field(q);
                (coords, gens, orders)
            }
            None => {
                let kernel;
                let lambda = match span {
                    Span::All => None,
                    Span::Generators(g) => Some(g),
                    Span::KernelOf(f) => {
                        kernel =
                            kernel_lattice(f.matrix(), f.source().orders(), f.target().orders());
                        Some(kernel.as_slice())
                    }
                };
                let q =
                    LatticeQuotient::new(ambient.orders(), lambda, relations).ok_or_else(|| {
                        Error::NotInSubgroup("relations are not contained in the subgroup".into())
                    })?;
                let gens = q.generators.clone();
                let orders = q.orders.clone();
                (Coordinates::Lattice(q), gens, orders)
            }
        };
        let sq = Subquotient {
            ambient: ambient.clone(),
            group: FgAbGroup::from_orders(orders),
            generators,
            coords,
        };
        if let Coordinates::Field(_) = sq.coords {
            for r in relations {
                if sq.coordinates(r).is_err() {
                    return Err(Error::NotInSubgroup(
                        "relations are not contained in the subgroup".into(),
                    ));
                }
            }
        }
        Ok(sq)
    }

    pub fn ambient(&self) -> &FgAbGroup {
        &self.ambient
    }

    /// Canonical group.
    pub fn group(&self) -> &FgAbGroup {
        &self.group
    }

    /// Ambient representative of each canonical generator.
    pub fn generators(&self) -> &[SparseVec] {
        &self.generators
    }

    /// Canonical coordinates of the class of `x`; errors if `x ∉ S`.
    pub fn coordinates(&self, x: &SparseVec) -> Result<Vec<Integer>> {
        let c = match &self.coords {
            Coordinates::Lattice(q) => q.coordinates(x),
            Coordinates::Field(q) => q.coordinates(x),
        };
        c.ok_or_else(|| Error::NotInSubgroup(format!("vector with {} nonzero entries", x.nnz())))
    }

    pub fn contains(&self, x: &SparseVec) -> bool {
        self.coordinates(x).is_ok()
    }

    /// Ambient vectors → canonical coordinates, as the columns of a hom into [`Self::group`].
    pub fn coordinate_matrix(&self, columns: &[SparseVec]) -> Result<Matrix> {
        let cols = columns
            .iter()
            .map(|c| self.coordinates(c).map(|v| SparseVec::from_dense(&v)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix::from_columns(self.group.ngens(), cols))
    }

    /// The inclusion of canonical generators into the ambient group (meaningful when `Q = 0`).
    pub fn inclusion(&self) -> GroupHom {
        GroupHom::new_unchecked(
            &self.group,
            &self.ambient,
            Matrix::from_columns(self.ambient.ngens(), self.generators.clone()),
        )
    }
}

/// Canonical invariant-factor form of a presentation.
pub fn normalize_group(p: &MatrixPresentation) -> FgAbGroup {
    let ambient = FgAbGroup::free(p.generator_count);
    Subquotient::new(&ambient, Span::All, p.relations.columns())
        .expect("every relation lies in the free group")
        .group()
        .clone()
}

/// Kernel in canonical form with its inclusion; `f ∘ incl = 0` is checked.
pub fn hom_kernel(f: &GroupHom) -> Result<(FgAbGroup, GroupHom)> {
    let sq = Subquotient::new(f.source(), Span::KernelOf(f), &[])?;
    let incl = sq.inclusion();
    debug_assert!(incl.then(f)?.is_zero());
    Ok((sq.group().clone(), incl))
}

/// Cokernel in canonical form with its projection; `proj ∘ f = 0` is checked.
pub fn hom_cokernel(f: &GroupHom) -> Result<(FgAbGroup, GroupHom)> {
    let sq = Subquotient::new(f.target(), Span::All, f.matrix().columns())?;
    let n = f.target().ngens();
    let unit: Vec<SparseVec> = (0..n).map(SparseVec::unit).collect();
    let proj = GroupHom::new_unchecked(f.target(), sq.group(), sq.coordinate_matrix(&unit)?);
    debug_assert!(f.then(&proj)?.is_zero());
    Ok((sq.group().clone(), proj))
}

/// Helper for tests and callers: `Z/q` orders as integers.
pub fn orders_of(values: &[i64]) -> Vec<Integer> {
    values.iter().map(|&v| int(v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::group::Invariants;

    fn inv(free: usize, t: &[i64]) -> Invariants {
        Invariants {
            free_rank: free,
            invariant_factors: orders_of(t),
        }
    }

    #[test]
    fn normalize_examples() {
        let p = MatrixPresentation {
            generator_count: 1,
            relations: Matrix::from_rows(&[vec![5]]),
        };
        assert_eq!(normalize_group(&p).invariants(), inv(0, &[5]));
        let p = MatrixPresentation {
            generator_count: 2,
            relations: Matrix::zeros(2, 0),
        };
        assert_eq!(normalize_group(&p).invariants(), inv(2, &[]));
        let p = MatrixPresentation {
            generator_count: 2,
            relations: Matrix::from_rows(&[vec![2, 0], vec![0, 4]]),
        };
        assert_eq!(normalize_group(&p).invariants(), inv(0, &[2, 4]));
    }

    #[test]
    fn kernel_cokernel_examples() {
        let z = FgAbGroup::free(1);
        let f = GroupHom::new(&z, &z, Matrix::from_rows(&[vec![2]])).unwrap();
        assert_eq!(hom_kernel(&f).unwrap().0.invariants(), inv(0, &[]));
        assert_eq!(hom_cokernel(&f).unwrap().0.invariants(), inv(0, &[2]));

        let z3 = FgAbGroup::cyclic(3);
        let f = GroupHom::zero(&z3, &z3);
        assert_eq!(hom_kernel(&f).unwrap().0.invariants(), inv(0, &[3]));
        assert_eq!(hom_cokernel(&f).unwrap().0.invariants(), inv(0, &[3]));

        let f = GroupHom::new(&FgAbGroup::free(2), &z, Matrix::from_rows(&[vec![1, 1]])).unwrap();
        assert_eq!(hom_kernel(&f).unwrap().0.invariants(), inv(1, &[]));
        assert_eq!(hom_cokernel(&f).unwrap().0.invariants(), inv(0, &[]));
    }

    #[test]
    fn mixed_orders_use_lattice_path() {
        let a = FgAbGroup::from_orders(orders_of(&[4, 6]));
        let b = FgAbGroup::cyclic(2);
        let f = GroupHom::new(&a, &b, Matrix::from_rows(&[vec![1, 1]])).unwrap();
        let (k, incl) = hom_kernel(&f).unwrap();
        assert_eq!(k.invariants(), inv(0, &[12]));
        assert!(incl.then(&f).unwrap().is_zero());
    }
}

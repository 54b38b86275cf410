//! Exact linear algebra over the integers: finitely generated abelian groups,
//! homomorphisms, Smith normal form, kernels, cokernels and subquotients.

mod field;
mod group;
pub mod integer;
mod lattice;
pub mod matrix;
pub mod smith;
mod subquotient;

pub use group::{
    invariant_factors, iso_check, FgAbGroup, GroupElement, GroupHom, Invariants, MatrixPresentation,
};
pub use integer::{int, Integer};
pub use matrix::{Matrix, SparseVec};
pub use smith::{smith_normal_form, SmithForm};
pub use subquotient::{hom_cokernel, hom_kernel, normalize_group, orders_of, Span, Subquotient};

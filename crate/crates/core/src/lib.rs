//! Exact homotopy limits and colimits of diagrams of chain complexes of
//! finitely generated abelian groups, and a discrete Abelian gauge theory on
//! finite simplicial complexes built on top of them.

pub mod abelian;
pub mod complexes;
pub mod diagrams;
pub mod error;
pub mod gauge;
pub mod hocolimit;
pub mod holimit;
pub mod moore;
pub mod poset;
pub mod simplicial;

pub use error::{Error, Result};

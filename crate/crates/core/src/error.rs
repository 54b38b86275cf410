use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("homomorphism is not well defined on torsion: source generator {generator} of order {order}")]
    IllDefined { generator: usize, order: String },
    #[error("element is not in the subgroup: {0}")]
    NotInSubgroup(String),
    #[error("not a chain complex: δ∘δ ≠ 0 at degree {0}")]
    NotAComplex(i64),
    #[error("not a chain map at degree {0}")]
    NotAChainMap(i64),
    #[error("chain homotopy identity fails at degree {0}")]
    HomotopyFails(i64),
    #[error("double complex square does not commute at ({p}, {q})")]
    NonCommuting { p: i64, q: i64 },
    #[error("double complex invalid: {0}")]
    DoubleComplex(String),
    #[error("{kind} identity violated: {detail}")]
    Identity { kind: &'static str, detail: String },
    #[error("cutoff {cutoff} too small for requested degree {requested}")]
    Cutoff { cutoff: usize, requested: usize },
    #[error("simplex {0} is not in the complex")]
    SimplexNotFound(String),
    #[error("not a subcomplex: {0}")]
    NotSubcomplex(String),
    #[error("no simplices")]
    NoSimplices,
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid coefficient group: {0}")]
    Coefficient(String),
    #[error("diagram functoriality fails: {0}")]
    Diagram(String),
    #[error("observables are undefined for G = Z; use Z/q")]
    ObservablesNeedCyclic,
    #[error("complex has no top star (not a cone on a single star): {0}")]
    NotContractible(String),
    #[error("covering precondition fails for pair ({u}, {v}): simplex {simplex} of the intersection lies in no star inside it")]
    Covering {
        u: String,
        v: String,
        simplex: String,
    },
    #[error("gluing inconsistent for pair ({u}, {v}) at vertex {vertex}: stars {w1} and {w2} disagree (cocycle condition on triple inclusions violated)")]
    Gluing {
        u: String,
        v: String,
        vertex: String,
        w1: String,
        w2: String,
    },
    #[error("configuration violates the gluing conditions: {0}")]
    Membership(String),
    #[error("not a simplicial isomorphism: {0}")]
    NotIsomorphism(String),
    #[error("mismatch: {0}")]
    Mismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("relation is not reflexive at {x}")]
    NotReflexive { x: usize },
    #[error("relation is not transitive: {x} ≼ {y} ≼ {z} but not {x} ≼ {z}")]
    NotTransitive { x: usize, y: usize, z: usize },
    #[error("relation is not antisymmetric: {x} ≈ {y} with {x} ≠ {y}")]
    NotAntisymmetric { x: usize, y: usize },
    #[error("carrier mismatch: expected {expected} elements, found {found}")]
    CarrierMismatch { expected: usize, found: usize },
    #[error("element {x} outside carrier of {n} elements")]
    ElementOutOfRange { x: usize, n: usize },
    #[error("{what} has {size} elements, more than the supported {cap}")]
    TooLarge { what: &'static str, size: usize, cap: usize },
    #[error("not a topology: {0}")]
    NotATopology(String),
    #[error("invalid quasi-pseudometric: {0}")]
    InvalidMetric(String),
    #[error("preorder graph is not closed in the product topology: {a} ⋠ {b} cannot be separated")]
    NotOrderClosed { a: usize, b: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("normal separation failed at refinement step {step}")]
    SeparationFailed { step: usize },
    #[error("counterexample: {0}")]
    CounterExample(String),
    #[error("not a complete lattice")]
    NotALattice,
    #[error("function is not constant on quotient class {class}")]
    NotClassConstant { class: usize },
    #[error("family is not closed under pointwise max/min")]
    NotLatticeClosed,
    #[error("internal consistency check failed: {0}")]
    Defect(String),
}

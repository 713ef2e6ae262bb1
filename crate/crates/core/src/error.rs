use thiserror::Error;

use crate::group::Elem;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("group order does not fit the 64-bit encoding")]
    EncodingOverflow,
    #[error("tuple {tuple:?} is not a valid element encoding")]
    BadTuple { tuple: Vec<u64> },
    #[error("element {0} is outside the group universe")]
    BadElement(Elem),
    #[error("group of order {order} exceeds the enumeration cap {cap}")]
    CapExceeded { order: u64, cap: u64 },
    #[error("element {0} does not lie in the required subgroup")]
    NotInSubgroup(Elem),
    #[error("subgroups belong to different ambient groups")]
    AmbientMismatch,
    #[error("subgroup is not normal: conjugate of {element} by generator {generator} escapes")]
    NotNormal { element: Elem, generator: Elem },
    #[error("map is not a homomorphism at ({x}, {y})")]
    NotHomomorphism { x: Elem, y: Elem },
    #[error("generator images do not extend to a well-defined map (conflict at {0})")]
    IllDefinedMap(Elem),
    #[error("map is not injective: {0} and {1} share an image")]
    NotInjective(Elem, Elem),
    #[error("map image does not equal the declared codomain")]
    NotSurjective,
    #[error("map is not a bijection of its domain")]
    NotAutomorphism,
    #[error("automorphism order {0} is not a power of p")]
    OrderNotPPower(u64),
    #[error("automorphism order overflowed 64 bits")]
    OrderOverflow,
    #[error("filtration is invalid: {0}")]
    InvalidFiltration(String),
    #[error("pair is not compatible with the normal subgroup: witness {0}")]
    Incompatible(Elem),
    #[error("group is not abelian: {0} and {1} do not commute")]
    NotAbelian(Elem, Elem),
    #[error("group is not elementary abelian")]
    NotElementaryAbelian,
    #[error("hypothesis failed: {0}")]
    Hypothesis(String),
    #[error("lower central series did not terminate; group is not nilpotent")]
    NotNilpotent,
    #[error("internal oracle disagreement: {0}")]
    OracleDisagreement(String),
    #[error("certificate rejected: {0}")]
    Certificate(String),
}

pub type Result<T> = std::result::Result<T, Error>;

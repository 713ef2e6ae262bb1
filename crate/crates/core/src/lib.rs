//! Deciding and certifying residual p-finiteness of HNN extensions of finite
//! p-groups.
//!
//! Groups are explicit: every element has a canonical integer code and the
//! multiplication is an oracle on codes. On top of that sit the HNN pair and
//! its core, reduction of words in the extension, compatible filtrations with
//! the decision procedures built on them, and the abelian-base machinery
//! (cyclic covers and explicit chief-filtration witnesses).

pub mod abelian;
pub mod arith;
pub mod corpus;
pub mod error;
pub mod filtrations;
pub mod group;
pub mod hnn;
pub mod linalg;
pub mod problem;
pub mod random;
pub mod words;

pub use error::{Error, Result};
pub use group::{Elem, Filtration, Group, GroupMap, Subgroup};
pub use hnn::HnnPair;

//! Finite solvable groups `V^u ⋊ H`, their maximal subgroups, and exact
//! computation of covering and 2-covering numbers.

pub mod constructions;
pub mod cover;
pub mod error;
pub mod field;
pub mod group;
pub mod linalg;
pub mod module;
pub mod oracle;
pub mod structural;
pub mod tabular;
pub mod verify;

pub use error::{Error, Result};

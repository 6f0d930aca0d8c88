//! Combinatorics of equivariant dendroidal sets.

pub mod anodyne;
pub mod broadposet;
pub mod complexes;
pub mod dot;
pub mod equivariance;
pub mod error;
pub mod genuine;
pub mod group;
pub mod indexing;
pub mod reedy;
pub mod replay;
pub mod subtree;
pub mod tensor;
pub mod treemaps;
pub mod truncation;

pub use error::{Error, Result};

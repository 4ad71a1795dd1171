//! Exact rational models of 2/3-PROPs: the endomorphism pre-2/3-PROP of a vector
//! space, its biequivariant refinement, the free 2/3-PROP on bialgebra generators,
//! the stratified cell complexes, and the Lie algebra ℵ whose Maurer-Cartan elements
//! are bialgebras.

pub mod aleph;
pub mod bi;
pub mod bialgebra;
pub mod endv;
pub mod error;
pub mod free;
pub mod linalg;
pub mod perm;
pub mod scalar;
pub mod strata;
pub mod tensor;

pub use error::{Error, Result};
pub use perm::Permutation;
pub use scalar::Scalar;
pub use tensor::TensorMap;

//! Exact linear algebra over ℚ and 𝔽_p.

mod echelon;
mod linmap;
mod scalar;
mod space;
mod system;

pub use echelon::{Echelon, SparseRow};
pub use linmap::{
    cokernel_quotient, compose, dense_of, invert, kernel, kronecker, rank, solve, sparse_of, unit_vector, zero_vector, LinMap,
    Quotient, SparseVec, Subspace, Vector,
};
pub use scalar::{Field, Scalar};
pub use space::{multi_index, split_index, tensor_index, BasedSpace};
pub use system::{Equation, LinearSystem};

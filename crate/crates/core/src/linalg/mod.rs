//! Dense real-matrix primitives, Gaussian block samplers and the spectral
//! utilities used by the chain and the experiments.

mod dense;
mod ldlt;
mod lu;
mod sample;

pub use dense::{frobenius_norm, operator_norm, trace_product, Interval, Matrix, SymMatrix};
pub use ldlt::{count_below, eigen_count_in_interval, sym_inverse, Inertia, Ldlt, PIVOT_FLOOR};
pub use lu::{dense_inverse, Lu};
pub use sample::{sample_gaussian_block, sample_goe_block};

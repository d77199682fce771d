//! Exact integer and rational matrix algebra.

pub mod exterior;
pub mod lattice;
pub mod matrix;
pub mod smith;

pub use exterior::{exterior_power, k_subsets, pair_index};
pub use lattice::{integer_kernel, restrict_and_quotient, saturate, span_saturation, RestrictQuotient, Sublattice};
pub use matrix::{IntMatrix, Matrix, RationalMatrix};
pub use smith::{hermite_rows, smith_form, SmithDecomposition};

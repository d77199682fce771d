//! Exact scalars and univariate polynomials.

pub mod complex;
pub mod cyclotomic;
pub mod poly;
pub mod quad;
pub mod roots;
pub mod salem;
pub mod scalar;
pub mod sturm;

pub use complex::{Cx, GaussianRational, QuadComplex};
pub use cyclotomic::{cyclotomic_poly, cyclotomic_root_count, euler_phi, is_kronecker, CyclotomicCount};
pub use poly::{IntPolynomial, Poly, RatPolynomial};
pub use quad::RealQuad;
pub use roots::{root_magnitudes, CertifiedMagnitudeMultiset, MagnitudeEntry};
pub use salem::{polynomial_class, PolynomialClass};
pub use scalar::{FieldScalar, Scalar};

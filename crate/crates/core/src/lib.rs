//! Exact dynamics of surjective endomorphisms of complex tori with CM-type
//! complex structure.
//!
//! A torus is `R^{2n} / Z^{2n}` with a complex structure `J` whose entries lie
//! in a real quadratic field `Q(sqrt D)` (rational when `D = 1`). An
//! endomorphism is `x -> M x + tau` with `M` integral, `MJ = JM`, and `tau`
//! rational. Every verdict is decided in exact arithmetic; the only
//! approximate quantities are root magnitudes, which carry certified rational
//! enclosures.

pub mod classify;
pub mod dynamics;
pub mod endo;
pub mod error;
pub mod exactnum;
pub mod matlin;
pub mod scenarios;
pub mod torus;

pub use error::{Error, Result};

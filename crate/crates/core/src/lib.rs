//! Envelope lower bounds and numerical eigenvalues for a Dirac particle in
//! the softcore Coulomb potential `V(r) = -v/(r^q + b^q)^(1/q)` in `d > 1`
//! dimensions.
//!
//! * [`model`]: quantum-number algebra and the scaling law.
//! * [`potential`]: the shape `f_q`, the transformation `g(h)` over the
//!   Coulomb base `h = -1/r`, and its tangent lines.
//! * [`coulomb`]: the exact Dirac-Coulomb spectral function `D(u)`.
//! * [`envelope`]: the optimized tangential lower bound.
//! * [`radial`]: two-sided shooting for the radial Dirac system.
//! * [`workbench`]: reference dataset, comparison reports and property scans.

pub mod coulomb;
pub mod envelope;
pub mod error;
pub mod model;
pub mod potential;
pub mod radial;
pub mod workbench;

pub use error::{Error, Result};

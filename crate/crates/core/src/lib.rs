//! Spectral zeta functions, functional determinants and finite-temperature
//! thermodynamics of scalar fields on quotients of odd spheres.
//!
//! All values are for a single real scalar. Complex fields double everything.

pub mod contour;
pub mod detcore;
pub mod kernels;
pub mod polyhedral;
pub mod thermo;
mod sum;

pub use sum::NeumaierSum;

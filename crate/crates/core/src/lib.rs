//! Numerical workbench for minimal hypersurfaces of the unit 4-sphere with
//! identically vanishing Gauss–Kronecker curvature.
//!
//! The crate builds the explicit immersions of this class (two
//! non-isoparametric families and Cartan's isoparametric hypersurface),
//! computes their fundamental forms, principal curvatures and frame
//! connection coefficients, and evaluates the residuals of the structure,
//! Gauss, Codazzi and coordinate equations on parameter grids.

pub mod error;
pub mod expr;
pub mod families;
pub mod kernel;
pub mod phase;
pub mod quadrature;
pub mod shape;

pub use error::{Error, Result};

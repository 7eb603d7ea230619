//! Numerical building blocks: ℝ⁵ vectors, 3×3 matrices, symmetric-definite
//! eigenproblems, normal complements and second-order jets.

mod dual;
mod eig;
mod jet;
mod matrix;
mod normal;
mod point;

pub use dual::{jet_from_duals, point_from, Dual2, Scalar};
pub use eig::{canonicalize_sign, generalized_sym_eig3, symmetric_eig3, PencilEigen};
pub use jet::{central_diff, central_diff_array, jet, pair_index, DiffConfig, Jet2};
pub use matrix::{add3, dot3, scale3, sub3, Mat3, Vec3};
pub use normal::{cross4, normal_complement, DEGENERATE_NORM};
pub use point::{dot, Point5};

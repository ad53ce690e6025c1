//! Quaternion Sylvester equations `A X − X B = C`: quaternion matrices and
//! polynomials, unique-solution solvers, the singular chain case with its
//! solvability conditions and homogeneous solutions, two-sided polynomial
//! interpolation, and a real-linear-algebra oracle.

pub mod error;
pub mod format;
pub mod interp;
pub mod linalg;
pub mod matrix;
pub mod oracle;
pub mod poly;
pub mod quaternion;
pub mod regular;
pub mod sample;
pub mod singular;

pub use error::{Error, Result};
pub use matrix::{Orientation, QMatrix};
pub use num_complex;
pub use poly::{QMatPoly, QPoly, SphericalChain};
pub use quaternion::{Plane, Quaternion, SolutionSet};

/// Default tolerance for rank, similarity and solvability decisions.
pub const DEFAULT_TOL: f64 = 1e-9;

//! Numerical kernels shared by the weights and the certification code.

mod eigen;
mod gauss;
mod quad;
mod roots;
mod sparse;
mod sphere;

pub use eigen::{smallest_eigenpair, CholeskyFactor, EigenPair, SkylineMatrix, SymmetricPencil, MAX_ITERATIONS};
pub use gauss::GaussLegendre;
pub use quad::{quad_1d, QuadEstimate};
pub use roots::{monotone_root, monotone_root_from, DEFAULT_ROOT_TOL};
pub use sparse::SparseSymmetric;
pub use sphere::{sphere_rule, SphereRule};

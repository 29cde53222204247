//! Finite-element certification of Hardy inequalities.

mod assembly;
mod certify;
mod fiber;
mod mesh;
mod radial;
mod report;

pub use assembly::{assemble, AssemblyOptions, DiscreteForm, Mesh, WeightSampling};
pub use certify::{certify, certify_form, check_trace, dirichlet_limit, mesh_for, trace_excess, CertifyOptions};
pub use fiber::{
    exponential_rayleigh, fiber_certify, fiber_samples, negative_eigenvalue_demo, robin_neumann_discrete,
    subgraph_certify, RobinEigenCheck,
};
pub use mesh::{bilinear, GridCell, GridMesh, LineMesh, RadialMesh, CUT_SUBDIVISION};
pub use radial::{
    exterior_certify, radial_cross_check, sharpness_integral, sharpness_ratio, sharpness_scan, ExteriorProblem,
    SharpnessPoint,
};
pub use report::{Check, LevelResult, Status, Tolerance, VerificationReport};

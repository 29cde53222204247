//! Hardy weights: the interior and boundary fields on the right-hand side of
//! each inequality.

mod convex;
mod exterior;
mod general;
mod interval;
mod mu;
mod robin;
mod signchange;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::BoundaryNode;

pub use convex::{convex_weight, dirichlet_weight, ConvexWeight};
pub use exterior::{exterior_weight, ExteriorWeight};
pub use general::{cor_general_bound, unit_ball_volume, GeneralBound, GeneralWeight, DEFAULT_MC_SAMPLES};
pub use interval::{lemma1_weight, lemma2_weight, IntervalWeight};
pub use mu::{mu_sigma, mu_sigma_converged, MuEstimate, MuWeight, MU_SELF_TOL};
pub use robin::{facet_count, half_inverse, BaseRegion, RobinCoefficient};
pub use signchange::{fiber_weight, robin_neumann_mu, sign_changing_weight, SignChangingWeight};

/// Which construction a weight realizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// One Robin end on an interval, with a boundary bonus.
    IntervalRobin,
    /// Robin ends on both sides of an interval, split at the midpoint.
    IntervalTwoSided,
    /// Distance and inradius weight on a bounded convex domain.
    Convex,
    /// Directional average over unit vectors on a general bounded domain.
    DirectionalAverage,
    /// Constant multiple of the squared shifted inverse distance.
    GeneralConstant,
    /// Robin coefficient changing sign on the base of a subgraph.
    SignChanging,
    /// Exterior of a ball.
    Exterior,
}

/// Interior weight (units 1/length²) and boundary weight (units 1/length).
pub trait HardyWeight: Send + Sync {
    fn interior(&self, x: &[f64]) -> Result<f64>;

    fn boundary(&self, _node: &BoundaryNode) -> f64 {
        0.0
    }

    fn provenance(&self) -> Provenance;
}

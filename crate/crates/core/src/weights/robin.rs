use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::geometry::Domain;

/// `1/(2σ)` on the extended half-line: `0 ↦ +∞`, `+∞ ↦ 0`.
pub fn half_inverse(sigma: f64) -> Result<f64> {
    if sigma.is_nan() || sigma < 0.0 {
        return Err(invalid(format!("Robin coefficient {sigma} must lie in [0, +inf]")));
    }
    Ok(if sigma == 0.0 {
        f64::INFINITY
    } else if sigma == f64::INFINITY {
        0.0
    } else {
        0.5 / sigma
    })
}

/// Axis-aligned box of the base region of a subgraph carrying one value of σ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaseRegion {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub value: f64,
}

impl BaseRegion {
    fn contains(&self, y: &[f64]) -> bool {
        y.iter().zip(self.lo.iter().zip(&self.hi)).all(|(v, (l, h))| *l <= *v && *v <= *h)
    }
}

/// Boundary coefficient `σ` with values in `[0, +∞]` (`f64::INFINITY` marks
/// Dirichlet parts).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RobinCoefficient {
    Constant(f64),
    /// One value per facet id of the domain.
    PerFacet(Vec<f64>),
    /// Values on the base `A × {0}` of a subgraph, looked up by the base
    /// coordinates; the first matching region wins. The remaining boundary
    /// carries `σ = 0`. Negative values are allowed only here.
    BaseRegions { regions: Vec<BaseRegion>, default: f64 },
}

/// Number of facet ids the domain's boundary queries can report.
pub fn facet_count(domain: &Domain) -> usize {
    match domain {
        Domain::Interval(_) | Domain::Subgraph(_) => 2,
        Domain::Polytope(p) => p.halfspaces().len(),
        Domain::Ball(_) | Domain::BallComplement(_) => 1,
    }
}

impl RobinCoefficient {
    pub fn dirichlet() -> Self {
        RobinCoefficient::Constant(f64::INFINITY)
    }

    pub fn neumann() -> Self {
        RobinCoefficient::Constant(0.0)
    }

    /// `σ` at a boundary point tagged with `facet`.
    pub fn at(&self, facet: usize, point: &[f64]) -> f64 {
        match self {
            RobinCoefficient::Constant(s) => *s,
            RobinCoefficient::PerFacet(v) => v[facet],
            RobinCoefficient::BaseRegions { .. } => {
                if facet == 0 {
                    self.base_value(&point[..point.len() - 1])
                } else {
                    0.0
                }
            }
        }
    }

    /// `σ(x′)` on the base of a subgraph; other variants ignore `x′`.
    pub fn base_value(&self, base_point: &[f64]) -> f64 {
        match self {
            RobinCoefficient::Constant(s) => *s,
            RobinCoefficient::PerFacet(v) => v[0],
            RobinCoefficient::BaseRegions { regions, default } => regions
                .iter()
                .find(|r| r.contains(base_point))
                .map_or(*default, |r| r.value),
        }
    }

    fn values(&self) -> Vec<f64> {
        match self {
            RobinCoefficient::Constant(s) => vec![*s],
            RobinCoefficient::PerFacet(v) => v.clone(),
            RobinCoefficient::BaseRegions { regions, default } => {
                regions.iter().map(|r| r.value).chain([*default, 0.0]).collect()
            }
        }
    }

    pub fn sup(&self) -> f64 {
        self.values().into_iter().fold(0.0, f64::max)
    }

    pub fn inf(&self) -> f64 {
        self.values().into_iter().fold(f64::INFINITY, f64::min)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.values().iter().all(|v| *v >= 0.0)
    }

    /// Checks value ranges and that the variant fits the domain.
    pub fn validate(&self, domain: &Domain) -> Result<()> {
        if let Some(v) = self.values().into_iter().find(|v| v.is_nan()) {
            return Err(invalid(format!("Robin coefficient {v} is not a number")));
        }
        match self {
            RobinCoefficient::Constant(_) => {}
            RobinCoefficient::PerFacet(v) => {
                let expected = facet_count(domain);
                if v.len() != expected {
                    return Err(invalid(format!(
                        "{} has {expected} facets but {} coefficients were given",
                        domain.name(),
                        v.len()
                    )));
                }
            }
            RobinCoefficient::BaseRegions { regions, .. } => {
                let Domain::Subgraph(s) = domain else {
                    return Err(invalid("base-region coefficients require a subgraph domain"));
                };
                let m = s.dim() - 1;
                for r in regions {
                    if r.lo.len() != m || r.hi.len() != m {
                        return Err(invalid(format!("base region bounds must have {m} coordinates")));
                    }
                    if !r.value.is_finite() {
                        return Err(invalid("base-region coefficients must be finite"));
                    }
                }
                return Ok(());
            }
        }
        if !self.is_nonnegative() {
            return Err(invalid("negative Robin coefficients are only supported on subgraph bases"));
        }
        Ok(())
    }

    /// Every value multiplied by `c > 0`; infinities stay infinite.
    pub fn scaled(&self, c: f64) -> Self {
        let f = |v: f64| v * c;
        match self {
            RobinCoefficient::Constant(s) => RobinCoefficient::Constant(f(*s)),
            RobinCoefficient::PerFacet(v) => RobinCoefficient::PerFacet(v.iter().map(|s| f(*s)).collect()),
            RobinCoefficient::BaseRegions { regions, default } => RobinCoefficient::BaseRegions {
                regions: regions
                    .iter()
                    .map(|r| BaseRegion {
                        value: f(r.value),
                        ..r.clone()
                    })
                    .collect(),
                default: f(*default),
            },
        }
    }

    /// Replaces every `+∞` by `k`.
    pub fn truncated(&self, k: f64) -> Self {
        let f = |v: f64| if v == f64::INFINITY { k } else { v };
        match self {
            RobinCoefficient::Constant(s) => RobinCoefficient::Constant(f(*s)),
            RobinCoefficient::PerFacet(v) => RobinCoefficient::PerFacet(v.iter().map(|s| f(*s)).collect()),
            other => other.clone(),
        }
    }
}

use super::{half_inverse, HardyWeight, Provenance, RobinCoefficient};
use crate::error::{invalid, Result};
use crate::geometry::BoundaryNode;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Kind {
    /// Robin at `t = 0`, free at `t = b`.
    OneSided { sigma: f64, a: f64 },
    TwoSided { sigma: [f64; 2], a: [f64; 2] },
}

/// Weights on the interval `(0, b)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalWeight {
    b: f64,
    kind: Kind,
}

fn check_length(b: f64) -> Result<()> {
    if b.is_finite() && b > 0.0 {
        Ok(())
    } else {
        Err(invalid(format!("interval length {b} must be positive and finite")))
    }
}

/// `¼[(t + a)⁻² + (b + a)⁻²]` with `a = 1/(2σ)`, plus the bonus `½(b + a)⁻¹` at `t = 0`.
pub fn lemma1_weight(b: f64, sigma: f64) -> Result<IntervalWeight> {
    check_length(b)?;
    let a = half_inverse(sigma)?;
    Ok(IntervalWeight {
        b,
        kind: Kind::OneSided { sigma, a },
    })
}

/// `¼(t + a₁)⁻²` on the left half and `¼(b − t + a₂)⁻²` on the right half; no bonus.
pub fn lemma2_weight(b: f64, sigma1: f64, sigma2: f64) -> Result<IntervalWeight> {
    check_length(b)?;
    let a = [half_inverse(sigma1)?, half_inverse(sigma2)?];
    Ok(IntervalWeight {
        b,
        kind: Kind::TwoSided {
            sigma: [sigma1, sigma2],
            a,
        },
    })
}

impl IntervalWeight {
    pub fn length(&self) -> f64 {
        self.b
    }

    /// The endpoint coefficients `[σ(0), σ(b)]` of the matching quadratic form.
    pub fn robin(&self) -> RobinCoefficient {
        match self.kind {
            Kind::OneSided { sigma, .. } => RobinCoefficient::PerFacet(vec![sigma, 0.0]),
            Kind::TwoSided { sigma, .. } => RobinCoefficient::PerFacet(sigma.to_vec()),
        }
    }

    /// Interior weight at `t ∈ [0, b]`.
    pub fn at(&self, t: f64) -> f64 {
        let b = self.b;
        match self.kind {
            Kind::OneSided { a, .. } => 0.25 * ((t + a).powi(-2) + (b + a).powi(-2)),
            Kind::TwoSided { a, .. } => {
                if t <= 0.5 * b {
                    0.25 * (t + a[0]).powi(-2)
                } else {
                    0.25 * (b - t + a[1]).powi(-2)
                }
            }
        }
    }

    /// Boundary bonus at `t = 0` (`left = true`) or `t = b`.
    pub fn bonus(&self, left: bool) -> f64 {
        match self.kind {
            Kind::OneSided { a, .. } if left => 0.5 / (self.b + a),
            _ => 0.0,
        }
    }
}

impl HardyWeight for IntervalWeight {
    fn interior(&self, x: &[f64]) -> Result<f64> {
        let t = x[0];
        if !(0.0..=self.b).contains(&t) {
            return Err(invalid(format!("t = {t} outside [0, {}]", self.b)));
        }
        Ok(self.at(t))
    }

    fn boundary(&self, node: &BoundaryNode) -> f64 {
        self.bonus(node.facet == 0)
    }

    fn provenance(&self) -> Provenance {
        match self.kind {
            Kind::OneSided { .. } => Provenance::IntervalRobin,
            Kind::TwoSided { .. } => Provenance::IntervalTwoSided,
        }
    }
}

use super::{half_inverse, HardyWeight, Provenance};
use crate::error::{invalid, Error, Result};
use crate::geometry::norm;

/// `W(x) = ¼(|x| − R + a)⁻² + (n−1)(n−3)/4·|x|⁻²` on `{|x| > R}`, `a = 1/(2σ)`.
///
/// The second term is negative for `n = 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExteriorWeight {
    radius: f64,
    a: f64,
    n: usize,
}

pub fn exterior_weight(radius: f64, sigma: f64, n: usize) -> Result<ExteriorWeight> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(invalid(format!("radius {radius} must be positive and finite")));
    }
    if n < 2 {
        return Err(invalid(format!("dimension {n} must be at least 2")));
    }
    Ok(ExteriorWeight {
        radius,
        a: half_inverse(sigma)?,
        n,
    })
}

impl ExteriorWeight {
    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// `(n−1)(n−3)/4`
    pub fn curvature_coefficient(&self) -> f64 {
        let n = self.n as f64;
        (n - 1.0) * (n - 3.0) / 4.0
    }

    /// Weight at radius `r > R`.
    pub fn radial(&self, r: f64) -> f64 {
        0.25 * (r - self.radius + self.a).powi(-2) + self.curvature_coefficient() / (r * r)
    }
}

impl HardyWeight for ExteriorWeight {
    fn interior(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: x.len() });
        }
        let r = norm(x);
        if r <= self.radius {
            return Err(Error::OutsideDomain { point: x.to_vec() });
        }
        Ok(self.radial(r))
    }

    fn provenance(&self) -> Provenance {
        Provenance::Exterior
    }
}

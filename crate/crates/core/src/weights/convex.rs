use super::{half_inverse, HardyWeight, Provenance, RobinCoefficient};
use crate::error::{Error, Result};
use crate::geometry::{BoundaryNode, Domain};

/// `W(x) = ¼(δ + a)⁻² + ¼(R_in + a)⁻²` with `a = 1/(2σ(p(x)))`, and
/// boundary weight `½(R_in + 1/(2σ))⁻¹`.
#[derive(Debug, Clone)]
pub struct ConvexWeight {
    domain: Domain,
    sigma: RobinCoefficient,
    inradius: f64,
}

pub fn convex_weight(domain: &Domain, sigma: &RobinCoefficient) -> Result<ConvexWeight> {
    if !(domain.is_convex() && domain.is_bounded()) {
        return Err(Error::Unsupported(format!(
            "the convex weight needs a bounded convex domain, got {}",
            domain.name()
        )));
    }
    sigma.validate(domain)?;
    Ok(ConvexWeight {
        domain: domain.clone(),
        sigma: sigma.clone(),
        inradius: domain.inradius()?,
    })
}

/// The `σ = +∞` case: `¼δ⁻² + ¼R_in⁻²`, no boundary term.
pub fn dirichlet_weight(domain: &Domain) -> Result<ConvexWeight> {
    convex_weight(domain, &RobinCoefficient::dirichlet())
}

impl ConvexWeight {
    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn sigma(&self) -> &RobinCoefficient {
        &self.sigma
    }

    pub fn inradius(&self) -> f64 {
        self.inradius
    }

    /// `σ(p(x))`; at points with several nearest boundary points the
    /// smallest coefficient among them is used.
    pub fn sigma_at_projection(&self, x: &[f64]) -> Result<(f64, f64)> {
        let p = self.domain.distance_and_projection(x)?;
        let s = p
            .all_minimizers
            .iter()
            .map(|h| self.sigma.at(h.facet, &h.point))
            .fold(f64::INFINITY, f64::min);
        Ok((p.distance, s))
    }
}

impl HardyWeight for ConvexWeight {
    fn interior(&self, x: &[f64]) -> Result<f64> {
        let (delta, s) = self.sigma_at_projection(x)?;
        let a = half_inverse(s)?;
        Ok(0.25 * ((delta + a).powi(-2) + (self.inradius + a).powi(-2)))
    }

    fn boundary(&self, node: &BoundaryNode) -> f64 {
        let s = self.sigma.at(node.facet, &node.position);
        half_inverse(s).map_or(0.0, |a| 0.5 / (self.inradius + a))
    }

    fn provenance(&self) -> Provenance {
        Provenance::Convex
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Ball, ConvexPolytope};
    use approx::assert_relative_eq;

    fn square() -> Domain {
        ConvexPolytope::unit_cube(2).unwrap().into()
    }

    #[test]
    fn disk_center_dirichlet() {
        let d: Domain = Ball::centered(2, 1.0).unwrap().into();
        let w = dirichlet_weight(&d).unwrap();
        assert_relative_eq!(w.interior(&[0.0, 0.0]).unwrap(), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn square_constant_sigma() {
        let d = square();
        let w = convex_weight(&d, &RobinCoefficient::Constant(1.0)).unwrap();
        let expect = 0.25 * (1.0 / 0.5625 + 1.0);
        assert_relative_eq!(w.interior(&[0.5, 0.25]).unwrap(), expect, epsilon = 1e-14);
        for node in d.boundary_quadrature(2).unwrap() {
            assert_relative_eq!(w.boundary(&node), 0.5, epsilon = 1e-15);
        }
    }

    #[test]
    fn square_mixed_sigma() {
        let d = square();
        let bottom = d.nearest_facet(&[0.5, 0.1]).unwrap().facet;
        let mut values = vec![1.0; 4];
        values[bottom] = f64::INFINITY;
        let w = convex_weight(&d, &RobinCoefficient::PerFacet(values)).unwrap();
        assert_relative_eq!(w.interior(&[0.5, 0.1]).unwrap(), 26.0, epsilon = 1e-12);
    }

    #[test]
    fn unsupported_domains() {
        let d: Domain = crate::geometry::BallComplement::new(2, 1.0).unwrap().into();
        assert!(convex_weight(&d, &RobinCoefficient::Constant(1.0)).is_err());
        assert!(convex_weight(&square(), &RobinCoefficient::PerFacet(vec![1.0; 3])).is_err());
    }
}

use super::{half_inverse, HardyWeight, Provenance, RobinCoefficient};
use crate::error::{invalid, Error, Result};
use crate::geometry::{BoundaryNode, Domain, Subgraph};
use crate::numerics::{monotone_root, DEFAULT_ROOT_TOL};

/// Lowest eigenvalue `μ < 0` of `−u″` on `(0, f)` with `u′(0) = σu(0)` and
/// `u′(f) = 0`, for `σ < 0`: `μ = −s²` where `s·tanh(f s) = −σ`.
///
/// `s ↦ s·tanh(f s)` is strictly increasing, so the root is unique.
pub fn robin_neumann_mu(f: f64, sigma: f64) -> Result<f64> {
    if !(f > 0.0 && f.is_finite()) {
        return Err(invalid(format!("fiber height {f} must be positive and finite")));
    }
    if !(sigma < 0.0 && sigma.is_finite()) {
        return Err(invalid(format!("Robin coefficient {sigma} must be negative and finite here")));
    }
    let s = monotone_root(|s| s * (f * s).tanh(), -sigma, DEFAULT_ROOT_TOL)?;
    Ok(-s * s)
}

/// Interior weight and boundary bonus on one fiber `{x′} × (0, f)`.
///
/// `σ > 0`: `(½(f + a)⁻², ½(f + a)⁻¹)` with `a = 1/(2σ)`; `σ < 0`: `(μ, 0)`;
/// `σ = 0`: `(0, 0)`.
pub fn fiber_weight(f: f64, sigma: f64) -> Result<(f64, f64)> {
    if !(f > 0.0) {
        return Err(Error::Degenerate(format!("profile value {f} is not positive inside the base")));
    }
    if sigma > 0.0 {
        let a = half_inverse(sigma)?;
        Ok((0.5 * (f + a).powi(-2), 0.5 / (f + a)))
    } else if sigma < 0.0 {
        Ok((robin_neumann_mu(f, sigma)?, 0.0))
    } else if sigma == 0.0 {
        Ok((0.0, 0.0))
    } else {
        Err(invalid("Robin coefficient is not a number"))
    }
}

/// Weight for a subgraph whose base carries a sign-changing coefficient.
#[derive(Debug, Clone)]
pub struct SignChangingWeight {
    domain: Subgraph,
    sigma: RobinCoefficient,
}

pub fn sign_changing_weight(domain: &Domain, sigma: &RobinCoefficient) -> Result<SignChangingWeight> {
    let Domain::Subgraph(s) = domain else {
        return Err(Error::Unsupported(format!(
            "the sign-changing weight needs a subgraph domain, got {}",
            domain.name()
        )));
    };
    sigma.validate(domain)?;
    if !sigma.sup().is_finite() {
        return Err(invalid("the sign-changing construction needs a bounded coefficient"));
    }
    Ok(SignChangingWeight {
        domain: s.clone(),
        sigma: sigma.clone(),
    })
}

impl SignChangingWeight {
    pub fn subgraph(&self) -> &Subgraph {
        &self.domain
    }

    pub fn sigma(&self) -> &RobinCoefficient {
        &self.sigma
    }
}

impl HardyWeight for SignChangingWeight {
    fn interior(&self, x: &[f64]) -> Result<f64> {
        let base = &x[..x.len() - 1];
        let f = self.domain.profile_value(base);
        Ok(fiber_weight(f, self.sigma.base_value(base))?.0)
    }

    fn boundary(&self, node: &BoundaryNode) -> f64 {
        if node.facet != 0 {
            return 0.0;
        }
        let p = node.position.coords();
        let base = &p[..p.len() - 1];
        let f = self.domain.profile_value(base);
        fiber_weight(f, self.sigma.base_value(base)).map_or(0.0, |w| w.1)
    }

    fn provenance(&self) -> Provenance {
        Provenance::SignChanging
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    // independent bisection of s·tanh(s) = 1 to 1e-15
    const S_ORACLE: f64 = 1.199678640257734;

    #[test]
    fn unit_fiber() {
        let mu = robin_neumann_mu(1.0, -1.0).unwrap();
        assert_relative_eq!(mu, -S_ORACLE * S_ORACLE, epsilon = 1e-11);
        let (rho, bonus) = fiber_weight(1.0, -1.0).unwrap();
        assert_eq!(rho, mu);
        assert_eq!(bonus, 0.0);
    }

    #[test]
    fn vanishing_coefficient() {
        assert!(robin_neumann_mu(1.0, -1e-12).unwrap().abs() <= 1e-12);
        assert_eq!(fiber_weight(1.0, 0.0).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn positive_side() {
        let (rho, bonus) = fiber_weight(1.0, 1.0).unwrap();
        assert_relative_eq!(rho, 0.5 / 2.25, epsilon = 1e-15);
        assert_relative_eq!(bonus, 1.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn rejects_wrong_sign_and_height() {
        assert!(robin_neumann_mu(1.0, 0.5).is_err());
        assert!(robin_neumann_mu(0.0, -1.0).is_err());
        assert!(fiber_weight(0.0, 1.0).is_err());
    }
}

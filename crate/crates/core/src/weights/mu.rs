use serde::Serialize;

use super::{half_inverse, HardyWeight, Provenance, RobinCoefficient};
use crate::error::{invalid, Error, Result};
use crate::geometry::{along, Domain};
use crate::numerics::{sphere_rule, SphereRule};

/// Successive quadrature levels must agree to this before a value is accepted.
pub const MU_SELF_TOL: f64 = 1e-8;

fn max_level(n: usize) -> usize {
    match n {
        1 => 1,
        2 => 1 << 18,
        _ => 64,
    }
}

fn check(domain: &Domain, sigma: &RobinCoefficient, x: &[f64]) -> Result<()> {
    sigma.validate(domain)?;
    if !sigma.is_nonnegative() {
        return Err(invalid("the directional average needs a nonnegative Robin coefficient"));
    }
    if !domain.contains(x)? {
        return Err(Error::OutsideDomain { point: x.to_vec() });
    }
    Ok(())
}

fn integrate(domain: &Domain, sigma: &RobinCoefficient, x: &[f64], rule: &SphereRule) -> Result<f64> {
    let mut sum = 0.0;
    for (e, w) in rule.nodes.iter().zip(&rule.weights) {
        let exit = domain.directional_distance_unchecked(x, e);
        if exit.is_unbounded() {
            // no exit in either direction: the integrand vanishes
            continue;
        }
        let sigma_e = exit
            .hits
            .iter()
            .map(|h| sigma.at(h.facet, &along(x, h.s, e)))
            .fold(0.0, f64::max);
        let v = (exit.distance + half_inverse(sigma_e)?).powi(-2);
        if !v.is_finite() {
            return Err(Error::NonFiniteWeight { point: x.to_vec(), value: v });
        }
        sum += w * v;
    }
    Ok(sum)
}

/// `μ_σ(x) = ∫ (d_e(x) + 1/(2σ_e(x)))⁻² dℒ(e)` on the sphere rule of the
/// given level, with `σ_e` the largest coefficient among the nearest exits
/// along `±e`.
pub fn mu_sigma(domain: &Domain, sigma: &RobinCoefficient, x: &[f64], level: usize) -> Result<f64> {
    check(domain, sigma, x)?;
    integrate(domain, sigma, x, &sphere_rule(domain.dim(), level)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MuEstimate {
    pub value: f64,
    pub level: usize,
    /// Difference to the value at half the level.
    pub change: f64,
    pub converged: bool,
}

/// Doubles the level until successive values differ by less than `tol`.
pub fn mu_sigma_converged(domain: &Domain, sigma: &RobinCoefficient, x: &[f64], tol: f64) -> Result<MuEstimate> {
    check(domain, sigma, x)?;
    let n = domain.dim();
    let cap = max_level(n);
    let mut level = 1;
    let mut prev = integrate(domain, sigma, x, &sphere_rule(n, level)?)?;
    if cap == 1 {
        return Ok(MuEstimate { value: prev, level, change: 0.0, converged: true });
    }
    loop {
        level *= 2;
        let value = integrate(domain, sigma, x, &sphere_rule(n, level)?)?;
        let change = (value - prev).abs();
        if change < tol || level >= cap {
            return Ok(MuEstimate {
                value,
                level,
                change,
                converged: change < tol,
            });
        }
        prev = value;
    }
}

/// `¼μ_σ` as an interior weight, evaluated at a fixed quadrature level.
#[derive(Debug, Clone)]
pub struct MuWeight {
    domain: Domain,
    sigma: RobinCoefficient,
    rule: SphereRule,
}

impl MuWeight {
    pub fn new(domain: &Domain, sigma: &RobinCoefficient, level: usize) -> Result<Self> {
        sigma.validate(domain)?;
        if !sigma.is_nonnegative() {
            return Err(invalid("the directional average needs a nonnegative Robin coefficient"));
        }
        Ok(MuWeight {
            domain: domain.clone(),
            sigma: sigma.clone(),
            rule: sphere_rule(domain.dim(), level)?,
        })
    }
}

impl HardyWeight for MuWeight {
    fn interior(&self, x: &[f64]) -> Result<f64> {
        if !self.domain.contains(x)? {
            return Err(Error::OutsideDomain { point: x.to_vec() });
        }
        Ok(0.25 * integrate(&self.domain, &self.sigma, x, &self.rule)?)
    }

    fn provenance(&self) -> Provenance {
        Provenance::DirectionalAverage
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Ball, ConvexPolytope};
    use approx::assert_relative_eq;

    #[test]
    fn disk_center() {
        let d: Domain = Ball::centered(2, 1.0).unwrap().into();
        let inf = RobinCoefficient::dirichlet();
        assert_relative_eq!(mu_sigma(&d, &inf, &[0.0, 0.0], 3).unwrap(), 1.0, epsilon = 1e-14);
        let two = RobinCoefficient::Constant(2.0);
        assert_relative_eq!(mu_sigma(&d, &two, &[0.0, 0.0], 3).unwrap(), 0.64, epsilon = 1e-14);
    }

    #[test]
    fn interval_uses_nearest_end() {
        let d: Domain = crate::geometry::Interval::new(1.0).unwrap().into();
        let s = RobinCoefficient::PerFacet(vec![1.0, f64::INFINITY]);
        // both signs of e see the left end
        assert_relative_eq!(mu_sigma(&d, &s, &[0.25], 1).unwrap(), 0.75f64.powi(-2), epsilon = 1e-13);
        // at the midpoint both ends are nearest and the larger σ wins
        assert_relative_eq!(mu_sigma(&d, &s, &[0.5], 1).unwrap(), 4.0, epsilon = 1e-13);
    }

    #[test]
    fn ball_3d_center() {
        let d: Domain = Ball::centered(3, 2.0).unwrap().into();
        let m = mu_sigma(&d, &RobinCoefficient::dirichlet(), &[0.0; 3], 2).unwrap();
        assert_relative_eq!(m, 0.25, epsilon = 1e-13);
    }

    #[test]
    fn square_self_convergence() {
        let d: Domain = ConvexPolytope::unit_cube(2).unwrap().into();
        let est = mu_sigma_converged(&d, &RobinCoefficient::Constant(1.0), &[0.3, 0.6], MU_SELF_TOL).unwrap();
        assert!(est.converged, "{est:?}");
    }

    #[test]
    fn rejects_outside_and_negative() {
        let d: Domain = Ball::centered(2, 1.0).unwrap().into();
        assert!(mu_sigma(&d, &RobinCoefficient::Constant(1.0), &[2.0, 0.0], 1).is_err());
        assert!(mu_sigma(&d, &RobinCoefficient::Constant(-1.0), &[0.0, 0.0], 1).is_err());
    }
}

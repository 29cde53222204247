use super::GaussLegendre;
use crate::error::{invalid, Error, Result};

/// Value of a composite quadrature and an error bound estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadEstimate {
    pub value: f64,
    /// Bound on the change produced by doubling the number of panels.
    pub error: f64,
}

fn composite(f: &impl Fn(f64) -> f64, a: f64, b: f64, panels: usize, rule: &GaussLegendre) -> Result<f64> {
    let h = (b - a) / panels as f64;
    let mut sum = 0.0;
    for k in 0..panels {
        let lo = a + k as f64 * h;
        let hi = if k + 1 == panels { b } else { lo + h };
        let mut panel = 0.0;
        for (t, w) in rule.mapped(lo, hi) {
            let v = f(t);
            if !v.is_finite() {
                return Err(Error::NonFiniteIntegrand { location: t, value: v });
            }
            panel += w * v;
        }
        sum += panel;
    }
    Ok(sum)
}

/// Composite 5-point Gauss–Legendre quadrature of `f` over `[a, b]`.
///
/// The error estimate is twice the difference to the same rule on `2·panels`
/// panels (plus a round-off floor), so doubling the panels moves the value
/// by less than the reported error.
pub fn quad_1d(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> Result<QuadEstimate> {
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(invalid(format!("quad_1d needs finite a < b, got [{a}, {b}]")));
    }
    if panels == 0 {
        return Err(invalid("quad_1d needs at least one panel"));
    }
    let rule = GaussLegendre::new(5);
    let coarse = composite(&f, a, b, panels, &rule)?;
    let fine = composite(&f, a, b, 2 * panels, &rule)?;
    let error = 2.0 * (fine - coarse).abs() + 64.0 * f64::EPSILON * coarse.abs().max(f64::MIN_POSITIVE);
    Ok(QuadEstimate { value: coarse, error })
}

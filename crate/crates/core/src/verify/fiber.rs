use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::assembly::{assemble, AssemblyOptions, Mesh};
use super::certify::{certify_form, trace_excess, CertifyOptions};
use super::mesh::LineMesh;
use super::report::{Status, VerificationReport};
use crate::error::{invalid, Result};
use crate::geometry::{BoundaryNode, Subgraph};
use crate::numerics::{quad_1d, smallest_eigenpair};
use crate::weights::{fiber_weight, robin_neumann_mu, HardyWeight, Provenance, RobinCoefficient};

/// Lowest eigenvalue of `−u″` on `(0, f)` with Robin `σ` at 0 and Neumann at
/// `f`, discretized with linear elements, compared with the tanh root.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RobinEigenCheck {
    pub f: f64,
    pub sigma: f64,
    pub h: f64,
    pub mu: f64,
    pub discrete: f64,
    pub error: f64,
    /// `error / h²`
    pub constant: f64,
}

pub fn robin_neumann_discrete(f: f64, sigma: f64, h: f64, eigen_tol: f64) -> Result<RobinEigenCheck> {
    let mu = robin_neumann_mu(f, sigma)?;
    let mesh = Mesh::Line(LineMesh::with_spacing(0.0, f, h)?);
    let form = assemble(&mesh, &RobinCoefficient::PerFacet(vec![sigma, 0.0]), None, &AssemblyOptions::default())?;
    let pair = smallest_eigenpair(&form.pencil()?, eigen_tol)?;
    let error = (pair.value - mu).abs();
    Ok(RobinEigenCheck {
        f,
        sigma,
        h: form.h,
        mu,
        discrete: pair.value,
        error,
        constant: error / (form.h * form.h),
    })
}

/// Rayleigh quotient of `e^{−t}` on `(0, b)` with Robin `σ₀` at 0 and `σ_b` at `b`.
pub fn exponential_rayleigh(b: f64, sigma0: f64, sigma_b: f64) -> Result<(f64, f64)> {
    let norm = quad_1d(|t| (-2.0 * t).exp(), 0.0, b, 16)?.value;
    let numerator = norm + sigma0 + sigma_b * (-2.0 * b).exp();
    Ok((numerator, numerator / norm))
}

/// Shows that `∫σ dν > 0` does not prevent a negative eigenvalue: with
/// `σ₀ < 0 < σ₀ + σ_b` the test function `e^{−t}` and the discrete `λ_min`
/// are both negative. Runs where `σ₀ ≥ 0` or `σ₀ + σ_b ≤ 0` are reported as
/// not applicable.
pub fn negative_eigenvalue_demo(b: f64, sigma0: f64, sigma_b: f64, h: f64, opts: &CertifyOptions) -> Result<VerificationReport> {
    if !(b > 0.0 && b.is_finite()) {
        return Err(invalid(format!("interval length {b} must be positive and finite")));
    }
    if !(sigma0.is_finite() && sigma_b.is_finite()) {
        return Err(invalid("the demonstration needs finite Robin coefficients"));
    }
    let mesh = Mesh::Line(LineMesh::with_spacing(0.0, b, h)?);
    let form = assemble(&mesh, &RobinCoefficient::PerFacet(vec![sigma0, sigma_b]), None, &opts.assembly)?;
    let mut report = VerificationReport::new("negative-eigenvalue", None);
    let mut level = certify_form(&form, f64::INFINITY, opts)?;
    level.tolerance = 0.0;
    let lambda = level.lambda_min;
    report.levels.push(level);

    let (numerator, rq) = exponential_rayleigh(b, sigma0, sigma_b)?;
    let applicable = sigma0 < 0.0 && sigma0 + sigma_b > 0.0;
    report.check_ge("boundary-integral", sigma0 + sigma_b, f64::MIN_POSITIVE);
    report.check_le("rayleigh-numerator", numerator, 0.0);
    report.check_le("rayleigh-quotient", rq, 0.0);
    if let Some(l) = lambda {
        report.check_le("lambda-min", l, 0.0);
        report.check_le("lambda-below-rayleigh", l - rq, 1e-10 * rq.abs().max(1.0));
    }
    if applicable {
        Ok(report.finalize())
    } else {
        report.status = Status::NotApplicable;
        Ok(report.finalize())
    }
}

/// Constant interior weight with a bonus at `t = 0` on a single fiber.
#[derive(Debug, Clone, Copy)]
struct FiberWeight {
    rho: f64,
    bonus: f64,
}

impl HardyWeight for FiberWeight {
    fn interior(&self, _x: &[f64]) -> Result<f64> {
        Ok(self.rho)
    }

    fn boundary(&self, node: &BoundaryNode) -> f64 {
        if node.facet == 0 {
            self.bonus
        } else {
            0.0
        }
    }

    fn provenance(&self) -> Provenance {
        Provenance::SignChanging
    }
}

/// Certifies one fiber `(0, f)` with Robin `σ` at 0 and Neumann at `f`
/// against the sign-changing weight.
pub fn fiber_certify(f: f64, sigma: f64, resolutions: &[f64], opts: &CertifyOptions) -> Result<VerificationReport> {
    let (rho, bonus) = fiber_weight(f, sigma)?;
    let weight = FiberWeight { rho, bonus };
    let robin = RobinCoefficient::PerFacet(vec![sigma, 0.0]);
    let mut report = VerificationReport::new("fiber", Some(Provenance::SignChanging));
    let mut hs = resolutions.to_vec();
    hs.sort_by(|a, b| b.total_cmp(a));
    for h in hs {
        let mesh = Mesh::Line(LineMesh::with_spacing(0.0, f, h)?);
        let form = assemble(&mesh, &robin, Some(&weight), &opts.assembly)?;
        let mut level = certify_form(&form, opts.tolerance.at(form.h), opts)?;
        level.at = Some(vec![f, sigma]);
        report.levels.push(level);
    }
    Ok(report)
}

/// Base points at the centers of a `samples`-per-axis grid over the base's
/// bounding box, restricted to the open base.
pub fn fiber_samples(domain: &Subgraph, samples: usize) -> Vec<Vec<f64>> {
    let (lo, hi) = domain.base().bounding_box();
    let m = lo.len();
    let total = samples.pow(m as u32);
    (0..total)
        .filter_map(|k| {
            let mut idx = k;
            let y: Vec<f64> = (0..m)
                .map(|i| {
                    let j = idx % samples;
                    idx /= samples;
                    lo[i] + (j as f64 + 0.5) * (hi[i] - lo[i]) / samples as f64
                })
                .collect();
            domain.base().contains(&y).then_some(y)
        })
        .collect()
}

/// Fiberwise certification of the sign-changing subgraph inequality on a
/// grid of base points, in parallel over fibers.
pub fn subgraph_certify(
    domain: &Subgraph,
    sigma: &RobinCoefficient,
    samples: usize,
    resolutions: &[f64],
    opts: &CertifyOptions,
) -> Result<VerificationReport> {
    if samples == 0 || resolutions.is_empty() {
        return Err(invalid("subgraph certification needs samples and mesh sizes"));
    }
    sigma.validate(&domain.clone().into())?;
    let points = fiber_samples(domain, samples);
    if points.is_empty() {
        return Err(invalid("no base sample lies inside the base region"));
    }
    let fibers: Vec<(Vec<f64>, VerificationReport)> = points
        .into_par_iter()
        .map(|y| {
            let f = domain.profile_value(&y);
            let s = sigma.base_value(&y);
            let mut r = fiber_certify(f, s, resolutions, opts)?;
            for l in &mut r.levels {
                let mut at = y.clone();
                at.extend([f, s]);
                l.at = Some(at);
            }
            Ok((y, r))
        })
        .collect::<Result<_>>()?;
    let mut report = VerificationReport::new("subgraph", Some(Provenance::SignChanging));
    let mut worst_trace: f64 = 0.0;
    for (_, r) in fibers {
        let lams: Vec<f64> = r.levels.iter().filter_map(|l| l.lambda_min).collect();
        worst_trace = worst_trace.max(trace_excess(&lams));
        report.levels.extend(r.levels);
    }
    if resolutions.len() >= 2 {
        report.check_le("negative-part-non-increasing", worst_trace, 0.0);
    }
    let worst = report
        .levels
        .iter()
        .filter_map(|l| l.lambda_min)
        .fold(f64::INFINITY, f64::min);
    report.check_ge("worst-fiber-lambda", worst, -opts.tolerance.at(resolutions.iter().cloned().fold(0.0, f64::max)));
    Ok(report.finalize())
}

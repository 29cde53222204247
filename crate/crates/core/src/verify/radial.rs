use serde::{Deserialize, Serialize};

use super::assembly::{assemble, AssemblyOptions, Mesh};
use super::certify::{certify_form, CertifyOptions};
use super::mesh::RadialMesh;
use super::report::{Tolerance, VerificationReport};
use crate::error::{invalid, Result};
use crate::numerics::quad_1d;
use crate::weights::{exterior_weight, half_inverse, HardyWeight, RobinCoefficient};

/// One point of the sharpness curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SharpnessPoint {
    pub radius: f64,
    /// `Q_σ[u_R] / ∫(δ + a)⁻²|u_R|²` for `u_R = (R + a − |x|)^{1/2}` on `B_R`.
    pub ratio: f64,
    /// `2 / log(1 + 2σR)`
    pub log_bound: f64,
}

/// `∫₀^R r^{n−1} / (R + a − r) dr`, integrated on panels graded toward `r = R`.
pub fn sharpness_integral(n: usize, a: f64, radius: f64) -> Result<f64> {
    let p = n as i32 - 1;
    let g = |s: f64| (radius - s).powi(p) / (s + a);
    // s = R − r, panels [0, a], [a, 2a], [2a, 4a], ... up to R
    let mut edges = vec![0.0];
    let mut e = a.min(radius);
    while e < radius {
        edges.push(e);
        e *= 2.0;
    }
    edges.push(radius);
    let mut total = 0.0;
    for w in edges.windows(2) {
        if w[1] > w[0] {
            total += quad_1d(g, w[0], w[1], 8)?.value;
        }
    }
    Ok(total)
}

/// Ratio `c(R)` for a ball of radius `R` in `n` dimensions.
///
/// With `|u_R′|² = ¼(R + a − r)⁻¹` and `σ u_R(R)² = ½` the
/// quotient reduces to `¼ + ½R^{n−1} / I(R)`.
pub fn sharpness_ratio(n: usize, sigma: f64, radius: f64) -> Result<f64> {
    if n == 0 {
        return Err(invalid("dimension must be positive"));
    }
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(invalid(format!("σ = {sigma} must be positive and finite")));
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(invalid(format!("radius {radius} must be positive and finite")));
    }
    let a = half_inverse(sigma)?;
    let integral = sharpness_integral(n, a, radius)?;
    Ok(0.25 + 0.5 * radius.powi(n as i32 - 1) / integral)
}

/// `c(R)` over `radii` with the checks `c > ¼`, strictly decreasing, and
/// `c − ¼ ≤ 2/log(1 + 2σR)`.
pub fn sharpness_scan(n: usize, sigma: f64, radii: &[f64]) -> Result<(Vec<SharpnessPoint>, VerificationReport)> {
    if radii.is_empty() {
        return Err(invalid("at least one radius is required"));
    }
    let points = radii
        .iter()
        .map(|&r| {
            Ok(SharpnessPoint {
                radius: r,
                ratio: sharpness_ratio(n, sigma, r)?,
                log_bound: 2.0 / (1.0 + 2.0 * sigma * r).ln(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut report = VerificationReport::new("sharpness", None);
    let min_excess = points.iter().map(|p| p.ratio - 0.25).fold(f64::INFINITY, f64::min);
    report.check_ge("ratio-above-quarter", min_excess, f64::MIN_POSITIVE);
    let mut sorted = points.clone();
    sorted.sort_by(|a, b| a.radius.total_cmp(&b.radius));
    let max_step = sorted
        .windows(2)
        .map(|w| w[1].ratio - w[0].ratio)
        .fold(f64::NEG_INFINITY, f64::max);
    if sorted.len() >= 2 {
        report.check_le("strictly-decreasing", max_step, -f64::MIN_POSITIVE);
    }
    let worst = points
        .iter()
        .map(|p| p.ratio - 0.25 - p.log_bound)
        .fold(f64::NEG_INFINITY, f64::max);
    report.check_le("log-bound", worst, 0.0);
    Ok((points, report.finalize()))
}

/// Radial exterior problem on `(R, ρ_out)` with Dirichlet data at `ρ_out`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExteriorProblem {
    pub radius: f64,
    pub sigma: f64,
    pub dim: usize,
    pub outer: f64,
    pub nodes: usize,
}

impl ExteriorProblem {
    fn mesh(&self) -> Result<Mesh> {
        if !(self.outer > self.radius) {
            return Err(invalid(format!(
                "outer radius {} must exceed R = {}",
                self.outer, self.radius
            )));
        }
        Ok(Mesh::Radial(RadialMesh::new(self.radius, self.outer, self.nodes, self.dim)?))
    }
}

/// Direct quadrature of the radial form minus the weight term for the
/// piecewise-linear interpolant of `u`, against the assembled matrices.
///
/// Returns `(assembled, direct)`.
pub fn radial_cross_check(problem: &ExteriorProblem, u: impl Fn(f64) -> f64, opts: &AssemblyOptions) -> Result<(f64, f64)> {
    let mesh = problem.mesh()?;
    let Mesh::Radial(ref rm) = mesh else { unreachable!() };
    let sigma = RobinCoefficient::Constant(problem.sigma);
    let weight = exterior_weight(problem.radius, problem.sigma, problem.dim)?;
    let form = assemble(&mesh, &sigma, Some(&weight), opts)?;
    let v = form.interpolate(|x| u(x[0]));
    let assembled = form.operator().quadratic(&v);

    let line = &rm.line;
    let p = problem.dim as i32 - 1;
    let mut direct = 0.0;
    for e in 0..line.cells {
        let (r0, r1) = (line.node(e), line.node(e + 1));
        let (u0, u1) = (u(r0), u(r1));
        let slope = (u1 - u0) / (r1 - r0);
        let lin = |r: f64| u0 + slope * (r - r0);
        let energy = quad_1d(|r| slope * slope * r.powi(p), r0, r1, 1)?.value;
        let weighted = quad_1d(
            |r| weight.interior(&radial_point(r, problem.dim)).unwrap_or(f64::NAN) * lin(r).powi(2) * r.powi(p),
            r0,
            r1,
            1,
        )?
        .value;
        direct += energy - weighted;
    }
    if problem.sigma.is_finite() {
        direct += problem.sigma * problem.radius.powi(p) * u(problem.radius).powi(2);
    }
    Ok((assembled, direct))
}

fn radial_point(r: f64, n: usize) -> Vec<f64> {
    let mut x = vec![0.0; n];
    x[0] = r;
    x
}

/// Certifies the radial exterior inequality: `λ_min ≥ −tol` for the pencil of
/// `∫|u′|²r^{n−1} + σR^{n−1}u(R)² − ∫W u² r^{n−1}` against `∫u² r^{n−1}`,
/// plus the cross-assembly identity on a fixed test function.
pub fn exterior_certify(problem: &ExteriorProblem, tol: f64, opts: &CertifyOptions) -> Result<VerificationReport> {
    let mesh = problem.mesh()?;
    let sigma = RobinCoefficient::Constant(problem.sigma);
    let weight = exterior_weight(problem.radius, problem.sigma, problem.dim)?;
    let form = assemble(&mesh, &sigma, Some(&weight), &opts.assembly)?;
    let mut report = VerificationReport::new("exterior", Some(weight.provenance()));
    let o = CertifyOptions {
        tolerance: Tolerance::Absolute { value: tol },
        ..*opts
    };
    report.levels.push(certify_form(&form, tol, &o)?);

    let (r0, r1) = (problem.radius, problem.outer);
    let test = |r: f64| (r - r0) * (r1 - r) / (r1 * r1);
    let (assembled, direct) = radial_cross_check(problem, test, &opts.assembly)?;
    let scale = assembled.abs().max(direct.abs()).max(1e-300);
    report.check_le("cross-assembly", (assembled - direct).abs() / scale, 1e-8);
    Ok(report.finalize())
}

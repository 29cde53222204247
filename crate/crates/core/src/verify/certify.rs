use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::assembly::{assemble, AssemblyOptions, DiscreteForm, Mesh};
use super::mesh::{GridMesh, LineMesh};
use super::report::{LevelResult, Tolerance, VerificationReport};
use crate::error::{invalid, Error, Result};
use crate::geometry::Domain;
use crate::numerics::smallest_eigenpair;
use crate::weights::{convex_weight, HardyWeight, Provenance, RobinCoefficient};

/// Knobs shared by all certification runs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertifyOptions {
    pub tolerance: Tolerance,
    /// Stopping tolerance of the eigensolver.
    pub eigen_tol: f64,
    pub assembly: AssemblyOptions,
    /// Random test vectors whose Rayleigh quotients must not undercut `λ_min`.
    pub random_checks: usize,
    pub seed: u64,
}

impl CertifyOptions {
    /// Defaults for a domain of dimension `n`: `10⁻³` in 1D, `5h` otherwise.
    pub fn for_dim(n: usize) -> Self {
        CertifyOptions {
            tolerance: if n == 1 {
                Tolerance::Absolute { value: 1e-3 }
            } else {
                Tolerance::Linear { factor: 5.0 }
            },
            eigen_tol: 1e-10,
            assembly: AssemblyOptions::default(),
            random_checks: 20,
            seed: 0x5eed,
        }
    }
}

/// Conforming mesh of size `h` for a domain the assembler supports.
pub fn mesh_for(domain: &Domain, h: f64) -> Result<Mesh> {
    match domain {
        Domain::Interval(iv) => Ok(Mesh::Line(LineMesh::with_spacing(0.0, iv.length(), h)?)),
        d if d.dim() == 2 && d.is_bounded() => Ok(Mesh::Grid(GridMesh::new(d, h)?)),
        d => Err(Error::Unsupported(format!("no mesh for a {}-dimensional {}", d.dim(), d.name()))),
    }
}

fn random_rayleigh_min(form: &DiscreteForm, count: usize, seed: u64) -> Option<f64> {
    if count == 0 {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = form.dofs();
    let op = form.operator();
    let mut best = f64::INFINITY;
    for _ in 0..count {
        let v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let q = op.quadratic(&v) / form.mass.quadratic(&v);
        best = best.min(q);
    }
    Some(best)
}

/// Solves for `λ_min` of an assembled form and grades it against `tol`.
pub fn certify_form(form: &DiscreteForm, tol: f64, opts: &CertifyOptions) -> Result<LevelResult> {
    let pencil = form.pencil()?;
    let rayleigh_min = random_rayleigh_min(form, opts.random_checks, opts.seed);
    let mut level = LevelResult {
        h: form.h,
        dofs: form.dofs(),
        lambda_min: None,
        residual: None,
        lower_bound: None,
        iterations: 0,
        tolerance: tol,
        rayleigh_min,
        pass: false,
        at: None,
        diagnostic: None,
    };
    match smallest_eigenpair(&pencil, opts.eigen_tol) {
        Ok(pair) => {
            let consistent = rayleigh_min.is_none_or(|q| pair.value <= q + 1e-8 * q.abs().max(1.0));
            level.lambda_min = Some(pair.value);
            level.residual = Some(pair.residual);
            level.lower_bound = Some(pair.lower_bound);
            level.iterations = pair.iterations;
            level.pass = pair.value >= -tol && consistent;
            if !consistent {
                level.diagnostic = Some("a random vector has a smaller Rayleigh quotient than λ_min".into());
            }
        }
        Err(Error::NoConvergence { iterations, estimate, residual, .. }) => {
            level.iterations = iterations;
            level.diagnostic = Some(format!(
                "eigensolver stopped at {estimate} with relative residual {residual:e}"
            ));
        }
        Err(e) => return Err(e),
    }
    Ok(level)
}

/// Largest growth of `max(−λ, 0)` between consecutive entries, beyond a
/// relative slack of `10⁻⁸`; zero if it never grows.
pub fn trace_excess(lams: &[f64]) -> f64 {
    lams.windows(2)
        .map(|w| {
            let (prev, next) = ((-w[0]).max(0.0), (-w[1]).max(0.0));
            next - prev - 1e-8 * w[0].abs().max(1.0)
        })
        .fold(0.0, f64::max)
}

/// Adds the check that the negative part of `λ_min` does not grow under refinement.
pub fn check_trace(report: &mut VerificationReport) {
    let lams: Vec<f64> = report.levels.iter().filter_map(|l| l.lambda_min).collect();
    if lams.len() >= 2 {
        report.check_le("negative-part-non-increasing", trace_excess(&lams), 0.0);
    }
}

/// Checks `Q_σ[u] ≥ ∫W|u|² (+ boundary terms)` on a sequence of meshes.
///
/// `resolutions` are mesh sizes and are processed from coarse to fine.
pub fn certify(
    domain: &Domain,
    sigma: &RobinCoefficient,
    weight: &dyn HardyWeight,
    resolutions: &[f64],
    opts: &CertifyOptions,
) -> Result<VerificationReport> {
    if resolutions.is_empty() {
        return Err(invalid("at least one mesh size is required"));
    }
    if let Some(h) = resolutions.iter().find(|h| !(**h > 0.0 && h.is_finite())) {
        return Err(invalid(format!("mesh size {h} must be positive and finite")));
    }
    sigma.validate(domain)?;
    let mut hs = resolutions.to_vec();
    hs.sort_by(|a, b| b.total_cmp(a));
    let mut report = VerificationReport::new("certify", Some(weight.provenance()));
    for h in hs {
        let mesh = mesh_for(domain, h)?;
        let form = assemble(&mesh, sigma, Some(weight), &opts.assembly)?;
        let tol = opts.tolerance.at(mesh.size());
        report.levels.push(certify_form(&form, tol, opts)?);
    }
    check_trace(&mut report);
    Ok(report.finalize())
}

/// Robin coefficients `σ = k` on the whole boundary against the eliminated
/// Dirichlet problem, each certified with the convex weight for its `σ`.
///
/// Checks that `|λ_k − λ_∞|` does not grow along `ks` and that the last gap
/// is at most `gap`.
pub fn dirichlet_limit(domain: &Domain, ks: &[f64], h: f64, gap: f64, opts: &CertifyOptions) -> Result<VerificationReport> {
    if ks.is_empty() || ks.iter().any(|k| !(*k > 0.0 && k.is_finite())) {
        return Err(invalid("coefficients must be a non-empty list of positive finite values"));
    }
    let mesh = mesh_for(domain, h)?;
    let tol = opts.tolerance.at(mesh.size());
    let mut report = VerificationReport::new("dirichlet-limit", Some(Provenance::Convex));
    let mut sorted = ks.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.push(f64::INFINITY);
    let levels = sorted
        .par_iter()
        .map(|&k| {
            let sigma = RobinCoefficient::Constant(k);
            let weight = convex_weight(domain, &sigma)?;
            let form = assemble(&mesh, &sigma, Some(&weight), &opts.assembly)?;
            let mut level = certify_form(&form, tol, opts)?;
            level.at = Some(vec![k]);
            Ok(level)
        })
        .collect::<Result<Vec<_>>>()?;
    report.levels = levels;
    let lams: Option<Vec<f64>> = report.levels.iter().map(|l| l.lambda_min).collect();
    if let Some(lams) = lams {
        let limit = *lams.last().unwrap();
        let gaps: Vec<f64> = lams[..lams.len() - 1].iter().map(|l| (l - limit).abs()).collect();
        let growth = gaps
            .windows(2)
            .map(|w| w[1] - w[0] - 1e-8 * limit.abs().max(1.0))
            .fold(0.0, f64::max);
        report.check_le("gap-non-increasing", growth, 0.0);
        report.check_le("final-gap", *gaps.last().unwrap(), gap);
    }
    Ok(report.finalize())
}

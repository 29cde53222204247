//! One pass/fail line per acceptance criterion; exits nonzero if any fails.
//!
//! Run with `cargo test -p hardy-robin --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use hardy_robin::geometry::{Ball, ConvexPolytope, Domain, Interval};
use hardy_robin::verify::{
    certify, dirichlet_limit, exterior_certify, negative_eigenvalue_demo, robin_neumann_discrete, sharpness_scan,
    CertifyOptions, ExteriorProblem, VerificationReport,
};
use hardy_robin::weights::{
    convex_weight, cor_general_bound, half_inverse, lemma1_weight, mu_sigma_converged, robin_neumann_mu,
    RobinCoefficient, MU_SELF_TOL,
};
use hardy_robin::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

include!("oracles/mu_square.rs");

struct Outcome {
    pass: bool,
    detail: String,
    limit: Option<Duration>,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into(), limit: None }
}

fn within(mut o: Outcome, secs: u64) -> Outcome {
    o.limit = Some(Duration::from_secs(secs));
    o
}

fn min_lambda(r: &VerificationReport) -> f64 {
    r.levels.iter().map(|l| l.lambda_min.unwrap_or(f64::NAN)).fold(f64::INFINITY, f64::min)
}

fn failed_checks(r: &VerificationReport) -> String {
    let names: Vec<_> = r.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
    if names.is_empty() {
        String::new()
    } else {
        format!(", failed checks: {}", names.join(" "))
    }
}

fn unit_square() -> Domain {
    ConvexPolytope::unit_cube(2).unwrap().into()
}

fn right_triangle() -> Domain {
    ConvexPolytope::from_vertices_2d(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]).unwrap().into()
}

fn interval_certification() -> Result<Outcome> {
    let hs = [1.0 / 100.0, 1.0 / 200.0, 1.0 / 400.0];
    let opts = CertifyOptions::for_dim(1);
    let mut worst = f64::INFINITY;
    let mut bad = Vec::new();
    for b in [0.5, 1.0, 2.0] {
        for s in [0.0, 0.5, 1.0, 10.0, f64::INFINITY] {
            let w = lemma1_weight(b, s)?;
            let d: Domain = Interval::new(b)?.into();
            let r = certify(&d, &w.robin(), &w, &hs, &opts)?;
            worst = worst.min(min_lambda(&r));
            if !r.pass {
                bad.push(format!("(b={b}, σ={s}){}", failed_checks(&r)));
            }
        }
    }
    Ok(outcome(
        bad.is_empty() && worst >= -1e-3,
        format!("15 cases, min λ = {worst:.3e} (≥ -1e-3), trace checked; failing: [{}]", bad.join("; ")),
    ))
}

fn sharpness() -> Result<Outcome> {
    let (points, report) = sharpness_scan(3, 1.0, &[10.0, 1e2, 1e3, 1e4])?;
    let above = points.iter().all(|p| p.ratio > 0.25);
    let decreasing = points.windows(2).all(|w| w[1].ratio < w[0].ratio);
    let excess = points.last().unwrap().ratio - 0.25;
    let ratios: Vec<String> = points.iter().map(|p| format!("{:.5}", p.ratio)).collect();
    Ok(outcome(
        above && decreasing && report.pass && excess <= 0.05,
        format!(
            "c(R) = [{}], above ¼: {above}, strictly decreasing: {decreasing}, c(1e4) − ¼ = {excess:.4} (≤ 0.05)",
            ratios.join(", ")
        ),
    ))
}

fn fiber_eigenvalue() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for f in [0.5, 1.0, 2.0] {
        for s in [-0.25, -1.0, -4.0] {
            let mu = robin_neumann_mu(f, s)?;
            let c = robin_neumann_discrete(f, s, 1e-3, 1e-12)?;
            worst = worst.max((mu - c.discrete).abs() / mu.abs().max(1.0));
        }
    }
    Ok(outcome(worst <= 1e-4, format!("9 cases, max |μ − λ_h|/max(1,|μ|) = {worst:.2e} (≤ 1e-4)")))
}

fn convex_certification() -> Result<Outcome> {
    let hs = [1.0 / 32.0, 1.0 / 64.0, 1.0 / 128.0];
    let opts = CertifyOptions::for_dim(2);
    let domains = [("square", unit_square()), ("disk", Ball::centered(2, 1.0)?.into())];
    let mut lines = Vec::new();
    let mut pass = true;
    for (name, d) in &domains {
        for s in [0.5, 2.0, f64::INFINITY] {
            let sigma = RobinCoefficient::Constant(s);
            let w = convex_weight(d, &sigma)?;
            let r = certify(d, &sigma, &w, &hs, &opts)?;
            let ok = r.pass && r.levels.iter().all(|l| l.lambda_min.is_some_and(|v| v >= -5.0 * l.h));
            pass &= ok;
            let lams: Vec<String> = r.lambdas().iter().map(|l| format!("{:.4}", l.unwrap_or(f64::NAN))).collect();
            lines.push(format!("{name} σ={s}: [{}]{}", lams.join(" "), failed_checks(&r)));
        }
    }
    Ok(outcome(pass, format!("λ ≥ −5h and non-worsening; {}", lines.join("; "))))
}

fn mu_quadrature() -> Result<Outcome> {
    let d = unit_square();
    let mut unconverged = 0;
    let mut max_change: f64 = 0.0;
    let mut max_err: f64 = 0.0;
    let mut dominated = true;
    for (s, oracle) in [(1.0, MU_SIGMA_ONE), (f64::INFINITY, MU_DIRICHLET)] {
        let sigma = RobinCoefficient::Constant(s);
        for (p, want) in POINTS.iter().zip(oracle) {
            let est = mu_sigma_converged(&d, &sigma, p, MU_SELF_TOL)?;
            if !est.converged {
                unconverged += 1;
            }
            max_change = max_change.max(est.change);
            max_err = max_err.max((est.value - want).abs());
            dominated &= est.value <= (d.distance(p)? + half_inverse(s)?).powi(-2);
        }
    }
    Ok(outcome(
        unconverged == 0 && max_change < 1e-8 && max_err <= 1e-6 && dominated,
        format!(
            "40 evaluations, max doubling change = {max_change:.2e} (< 1e-8), max oracle error = {max_err:.2e} (≤ 1e-6), \
             domination holds: {dominated}"
        ),
    ))
}

fn general_constant() -> Result<Outcome> {
    let d = unit_square();
    let (bound, w) = cor_general_bound(&d, 1.0, 1_000_000, 2024)?;
    let sigma = RobinCoefficient::Constant(1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut violations = 0;
    let mut worst = f64::INFINITY;
    for _ in 0..100 {
        let x = [rng.random_range(0.0..1.0), rng.random_range(0.0..1.0)];
        let lhs = w.at_distance(d.distance(&x)?);
        let rhs = 0.25 * mu_sigma_converged(&d, &sigma, &x, MU_SELF_TOL)?.value;
        if lhs > rhs {
            violations += 1;
        }
        worst = worst.min(rhs / lhs);
    }
    Ok(outcome(
        violations == 0,
        format!(
            "α = {:.4}, K = {:.3e}, {violations} violations in 100 points, min ¼μ/(K(δ+¼)⁻²) = {worst:.1}",
            bound.alpha, bound.k
        ),
    ))
}

fn negative_eigenvalue() -> Result<Outcome> {
    let r = negative_eigenvalue_demo(1.0, -1.0, 2.0, 1e-3, &CertifyOptions::for_dim(1))?;
    let integral = r.check("boundary-integral").map_or(f64::NAN, |c| c.value);
    let rq = r.check("rayleigh-quotient").map_or(f64::NAN, |c| c.value);
    let lam = min_lambda(&r);
    Ok(outcome(
        r.pass && integral > 0.0 && rq <= -0.29 && lam < 0.0,
        format!("∫σ = {integral}, Rayleigh quotient of e^(-t) = {rq:.4} (≤ -0.29), λ_h = {lam:.4} (< 0){}", failed_checks(&r)),
    ))
}

fn exterior() -> Result<Outcome> {
    let opts = CertifyOptions::for_dim(1);
    let mut worst = f64::INFINITY;
    let mut bad = Vec::new();
    for dim in [2, 3, 5] {
        for sigma in [0.0, 1.0, f64::INFINITY] {
            let p = ExteriorProblem { radius: 1.0, sigma, dim, outer: 50.0, nodes: 10_000 };
            let r = exterior_certify(&p, 1e-6, &opts)?;
            worst = worst.min(min_lambda(&r));
            if !r.pass {
                bad.push(format!("(n={dim}, σ={sigma}){}", failed_checks(&r)));
            }
        }
    }
    Ok(outcome(
        bad.is_empty() && worst >= -1e-6,
        format!("9 cases, min λ = {worst:.3e} (≥ -1e-6); failing: [{}]", bad.join("; ")),
    ))
}

fn geometry() -> Result<Outcome> {
    let t = right_triangle();
    let exact = (2.0 - 2f64.sqrt()) / 2.0;
    let m = 1000;
    let mut grid_max: f64 = 0.0;
    for i in 1..m {
        for j in 1..(m - i) {
            let x = [i as f64 / m as f64, j as f64 / m as f64];
            grid_max = grid_max.max(t.distance(&x)?);
        }
    }
    let inradius_err = (grid_max - exact).abs();

    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let sample = |rng: &mut ChaCha8Rng| loop {
        let x = [rng.random_range(0.0..1.0), rng.random_range(0.0..1.0)];
        if x[0] + x[1] < 1.0 {
            return x;
        }
    };
    let mut lipschitz_excess = f64::NEG_INFINITY;
    for _ in 0..10_000 {
        let (x, y) = (sample(&mut rng), sample(&mut rng));
        let gap = (t.distance(&x)? - t.distance(&y)?).abs() - ((x[0] - y[0]).hypot(x[1] - y[1]));
        lipschitz_excess = lipschitz_excess.max(gap);
    }

    let v = [0.7, -1.3];
    let lambda = 3.5;
    let moved = t.translated(&v)?;
    let scaled = t.dilated(lambda)?;
    let mut invariant_err: f64 = 0.0;
    for _ in 0..1000 {
        let x = sample(&mut rng);
        let d = t.distance(&x)?;
        invariant_err = invariant_err.max((moved.distance(&[x[0] + v[0], x[1] + v[1]])? - d).abs());
        invariant_err = invariant_err.max((scaled.distance(&[lambda * x[0], lambda * x[1]])? - lambda * d).abs());
    }
    Ok(outcome(
        inradius_err <= 1e-3 && lipschitz_excess <= 1e-12 && invariant_err <= 1e-10,
        format!(
            "|grid max δ − inradius| = {inradius_err:.2e} (≤ 1e-3), max |Δδ| − |x−y| = {lipschitz_excess:.2e} (≤ 0), \
             invariant error = {invariant_err:.2e} (≤ 1e-10)"
        ),
    ))
}

fn dirichlet_consistency() -> Result<Outcome> {
    let r = dirichlet_limit(&unit_square(), &[10.0, 1e2, 1e3], 1.0 / 32.0, 1e-2, &CertifyOptions::for_dim(2))?;
    let lams: Vec<String> = r.levels.iter().map(|l| format!("{:.4}", l.lambda_min.unwrap_or(f64::NAN))).collect();
    let gap = r.check("final-gap").map_or(f64::NAN, |c| c.value);
    Ok(outcome(
        r.pass,
        format!("λ(k = 10, 1e2, 1e3, ∞) = [{}], final gap = {gap:.4} (≤ 1e-2){}", lams.join(", "), failed_checks(&r)),
    ))
}

type Criterion = (&'static str, fn() -> Result<Outcome>, u64);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("interval weight certification", interval_certification, 10),
        ("sharpness of the constant ¼", sharpness, 5),
        ("Robin-Neumann fiber eigenvalue", fiber_eigenvalue, 10),
        ("convex weight certification in 2D", convex_certification, 120),
        ("directional average quadrature", mu_quadrature, 0),
        ("general constant chain", general_constant, 0),
        ("negative eigenvalue demo", negative_eigenvalue, 1),
        ("exterior radial certification", exterior, 10),
        ("geometry oracles", geometry, 0),
        ("Dirichlet limit consistency", dirichlet_consistency, 0),
    ];
    let mut failures = 0;
    for (i, (name, run, secs)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = run().map(|o| if secs > 0 { within(o, secs) } else { o });
        let elapsed = start.elapsed();
        let (pass, detail) = match result {
            Ok(o) => {
                let in_time = o.limit.is_none_or(|l| elapsed < l);
                let timing = match o.limit {
                    Some(l) => format!("{:.2} s (< {} s)", elapsed.as_secs_f64(), l.as_secs()),
                    None => format!("{:.2} s", elapsed.as_secs_f64()),
                };
                (o.pass && in_time, format!("{}; {timing}", o.detail))
            }
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failures += 1;
        }
        println!("[{}] C{} {name}: {detail}", if pass { "PASS" } else { "FAIL" }, i + 1);
    }
    println!("{} of 10 criteria passed", 10 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

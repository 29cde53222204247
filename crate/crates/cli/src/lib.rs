//! Experiment runner behind the `hardy-robin` binary.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use hardy_robin::config::{Experiment, RunConfig};
use hardy_robin::geometry::{Direction, Domain};
use hardy_robin::verify::{
    certify, dirichlet_limit, exterior_certify, negative_eigenvalue_demo, robin_neumann_discrete, sharpness_scan,
    subgraph_certify, CertifyOptions, ExteriorProblem, Status, Tolerance, VerificationReport,
};
use hardy_robin::weights::{
    convex_weight, cor_general_bound, dirichlet_weight, exterior_weight, lemma1_weight, lemma2_weight,
    sign_changing_weight, HardyWeight, MuWeight, RobinCoefficient, DEFAULT_MC_SAMPLES,
};
use hardy_robin::{Error, Result};
use serde::Serialize;
use serde_json::Value;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;

/// Report of a run plus experiment-specific tables.
#[derive(Debug, Clone, Serialize)]
pub struct RunOutput {
    pub report: VerificationReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub details: Option<Value>,
}

#[derive(Serialize)]
struct Document<'a> {
    config: &'a RunConfig,
    #[serde(flatten)]
    output: &'a RunOutput,
}

pub fn exit_code(report: &VerificationReport) -> i32 {
    match report.status {
        Status::Pass | Status::NotApplicable => EXIT_PASS,
        Status::Violation => EXIT_VIOLATION,
        Status::SolverFailure => EXIT_SOLVER,
    }
}

pub fn error_exit_code(e: &Error) -> i32 {
    if e.is_input_error() || matches!(e, Error::Io(_)) {
        EXIT_INPUT
    } else {
        EXIT_SOLVER
    }
}

fn config_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

fn tolerance(cfg: &RunConfig, default: Tolerance) -> Result<Tolerance> {
    match (cfg.tol, cfg.tol_factor) {
        (Some(_), Some(_)) => Err(config_err("`tol` and `tol-factor` are mutually exclusive")),
        (Some(value), None) => Ok(Tolerance::Absolute { value }),
        (None, Some(factor)) => Ok(Tolerance::Linear { factor }),
        (None, None) => Ok(default),
    }
}

fn options(cfg: &RunConfig, dim: usize) -> Result<CertifyOptions> {
    let mut o = CertifyOptions::for_dim(dim);
    o.tolerance = tolerance(cfg, o.tolerance)?;
    o.seed = cfg.seed;
    Ok(o)
}

fn resolutions(cfg: &RunConfig, default: &[f64]) -> Vec<f64> {
    cfg.resolutions.clone().unwrap_or_else(|| default.to_vec())
}

fn constant_sigma(cfg: &RunConfig) -> Result<f64> {
    match cfg.build_sigma()? {
        RobinCoefficient::Constant(s) => Ok(s),
        _ => Err(config_err("sigma: this experiment needs a constant `constant = ...`")),
    }
}

fn interval_length(cfg: &RunConfig) -> Result<f64> {
    if let Some(b) = cfg.params.b {
        return Ok(b);
    }
    match cfg.domain.as_ref().map(|d| d.build()).transpose()? {
        Some(Domain::Interval(iv)) => Ok(iv.length()),
        Some(d) => Err(config_err(format!("domain: expected an interval, got {}", d.name()))),
        None => Err(config_err("params: missing field `b`")),
    }
}

fn required<T: Clone>(v: &Option<T>, name: &str) -> Result<T> {
    v.clone().ok_or_else(|| config_err(format!("params: missing field `{name}`")))
}

fn to_json<T: Serialize>(v: &T) -> Option<Value> {
    serde_json::to_value(v).ok()
}

/// Executes the experiment named in `cfg`.
pub fn run(cfg: &RunConfig) -> Result<RunOutput> {
    let mut out = dispatch(cfg)?;
    out.report.experiment = cfg.experiment.name().to_string();
    Ok(out)
}

fn dispatch(cfg: &RunConfig) -> Result<RunOutput> {
    let plain = |report| Ok(RunOutput { report, details: None });
    match cfg.experiment {
        Experiment::Lemma1 => {
            let b = interval_length(cfg)?;
            let w = lemma1_weight(b, constant_sigma(cfg)?)?;
            let d: Domain = hardy_robin::geometry::Interval::new(b)?.into();
            plain(certify(&d, &w.robin(), &w, &resolutions(cfg, &[1e-2, 5e-3, 2.5e-3]), &options(cfg, 1)?)?)
        }
        Experiment::Lemma2 => {
            let b = interval_length(cfg)?;
            let s1 = required(&cfg.params.sigma_left, "sigma-left")?.0;
            let s2 = required(&cfg.params.sigma_right, "sigma-right")?.0;
            let w = lemma2_weight(b, s1, s2)?;
            let d: Domain = hardy_robin::geometry::Interval::new(b)?.into();
            plain(certify(&d, &w.robin(), &w, &resolutions(cfg, &[1e-2, 5e-3, 2.5e-3]), &options(cfg, 1)?)?)
        }
        Experiment::Convex => {
            let d = cfg.build_domain()?;
            let s = cfg.build_sigma()?;
            let w = convex_weight(&d, &s)?;
            let hs = resolutions(cfg, &default_grid(&d));
            plain(certify(&d, &s, &w, &hs, &options(cfg, d.dim())?)?)
        }
        Experiment::Mu => {
            let d = cfg.build_domain()?;
            let s = cfg.build_sigma()?;
            let level = cfg.params.level.unwrap_or(if d.dim() == 1 { 1 } else { 256 });
            let w = MuWeight::new(&d, &s, level)?;
            let hs = resolutions(cfg, &default_grid(&d));
            plain(certify(&d, &s, &w, &hs, &options(cfg, d.dim())?)?)
        }
        Experiment::General => {
            let d = cfg.build_domain()?;
            let s = cfg.build_sigma()?;
            let samples = cfg.params.samples.unwrap_or(DEFAULT_MC_SAMPLES);
            let (bound, w) = cor_general_bound(&d, constant_sigma(cfg)?, samples, cfg.seed)?;
            let hs = resolutions(cfg, &default_grid(&d));
            let report = certify(&d, &s, &w, &hs, &options(cfg, d.dim())?)?;
            Ok(RunOutput { report, details: to_json(&bound) })
        }
        Experiment::Dirichlet => {
            let d = cfg.build_domain()?;
            let ks = cfg.params.ks.clone().unwrap_or_else(|| vec![10.0, 100.0, 1000.0]);
            let h = resolutions(cfg, &[1.0 / 32.0])[0];
            let gap = cfg.tol.unwrap_or(1e-2);
            let mut o = CertifyOptions::for_dim(d.dim());
            o.seed = cfg.seed;
            plain(dirichlet_limit(&d, &ks, h, gap, &o)?)
        }
        Experiment::Subgraph => {
            let d = cfg.build_domain()?;
            let s = cfg.build_sigma()?;
            let Domain::Subgraph(sg) = &d else {
                return Err(config_err(format!("domain: expected a subgraph, got {}", d.name())));
            };
            let samples = cfg.params.samples.unwrap_or(8);
            let mut o = options(cfg, 1)?;
            if cfg.tol.is_none() && cfg.tol_factor.is_none() {
                o.tolerance = Tolerance::Absolute { value: 1e-3 };
            }
            plain(subgraph_certify(sg, &s, samples, &resolutions(cfg, &[1e-2, 5e-3]), &o)?)
        }
        Experiment::Exterior => {
            let problem = ExteriorProblem {
                radius: required(&cfg.params.radius, "radius")?,
                sigma: constant_sigma(cfg)?,
                dim: required(&cfg.params.dim, "dim")?,
                outer: cfg.params.outer.unwrap_or(50.0),
                nodes: cfg.params.nodes.unwrap_or(10_000),
            };
            let mut o = CertifyOptions::for_dim(1);
            o.seed = cfg.seed;
            plain(exterior_certify(&problem, cfg.tol.unwrap_or(1e-6), &o)?)
        }
        Experiment::Sharpness => {
            let n = cfg.params.dim.unwrap_or(3);
            let radii = cfg.params.radii.clone().unwrap_or_else(|| vec![10.0, 1e2, 1e3, 1e4]);
            let (points, report) = sharpness_scan(n, constant_sigma(cfg)?, &radii)?;
            Ok(RunOutput { report, details: to_json(&points) })
        }
        Experiment::RobinEv => {
            let sigma = constant_sigma(cfg)?;
            let heights = cfg.params.heights.clone().unwrap_or_else(|| vec![0.5, 1.0, 2.0]);
            let h = resolutions(cfg, &[1e-3])[0];
            let mut report = VerificationReport::new("robin-ev", None);
            let mut rows = Vec::new();
            for f in heights {
                let c = robin_neumann_discrete(f, sigma, h, 1e-12)?;
                report.check_le(format!("f={f}"), c.error, cfg.tol.unwrap_or(1e-4) * c.mu.abs().max(1.0));
                rows.push(c);
            }
            Ok(RunOutput { report: report.finalize(), details: to_json(&rows) })
        }
        Experiment::NegEvDemo => {
            let b = cfg.params.b.unwrap_or(1.0);
            let s0 = required(&cfg.params.sigma_left, "sigma-left")?.0;
            let sb = required(&cfg.params.sigma_right, "sigma-right")?.0;
            let h = resolutions(cfg, &[1e-3])[0];
            let mut o = CertifyOptions::for_dim(1);
            o.seed = cfg.seed;
            plain(negative_eigenvalue_demo(b, s0, sb, h, &o)?)
        }
    }
}

fn default_grid(d: &Domain) -> Vec<f64> {
    if d.dim() == 1 {
        vec![1e-2, 5e-3, 2.5e-3]
    } else {
        vec![1.0 / 16.0, 1.0 / 32.0]
    }
}

/// Writes the JSON document (config, report, details).
pub fn write_json(w: impl Write, cfg: &RunConfig, out: &RunOutput) -> Result<()> {
    let doc = Document { config: cfg, output: out };
    let mut w = w;
    serde_json::to_writer_pretty(&mut w, &doc).map_err(|e| Error::Io(e.into()))?;
    writeln!(w)?;
    Ok(())
}

/// One CSV row per level of the report.
pub fn write_trace(w: impl Write, report: &VerificationReport) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    let csv_err = |e: csv::Error| Error::Io(std::io::Error::other(e));
    wr.write_record(["experiment", "h", "dofs", "lambda_min", "residual", "lower_bound", "tolerance", "pass", "at"])
        .map_err(csv_err)?;
    let opt = |v: Option<f64>| v.map_or(String::new(), |x| format!("{x:e}"));
    for l in &report.levels {
        let at = l
            .at
            .as_ref()
            .map_or(String::new(), |v| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";"));
        wr.write_record([
            report.experiment.clone(),
            format!("{:e}", l.h),
            l.dofs.to_string(),
            opt(l.lambda_min),
            opt(l.residual),
            opt(l.lower_bound),
            format!("{:e}", l.tolerance),
            l.pass.to_string(),
            at,
        ])
        .map_err(csv_err)?;
    }
    wr.flush()?;
    Ok(())
}

/// Writes the configured outputs; the JSON goes to stdout when no path is set.
pub fn emit(cfg: &RunConfig, out: &RunOutput) -> Result<()> {
    match &cfg.output.report {
        Some(p) => write_json(BufWriter::new(File::create(p)?), cfg, out)?,
        None => write_json(std::io::stdout().lock(), cfg, out)?,
    }
    if let Some(p) = &cfg.output.trace {
        write_trace(BufWriter::new(File::create(p)?), &out.report)?;
    }
    Ok(())
}

/// Reads points from CSV text: one point per row, an optional header row.
pub fn read_points(text: &str) -> Result<Vec<Vec<f64>>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| config_err(format!("points: {e}")))?;
        let parsed: std::result::Result<Vec<f64>, _> = rec.iter().map(str::parse::<f64>).collect();
        match parsed {
            Ok(p) if !p.is_empty() => out.push(p),
            Ok(_) => {}
            Err(_) if i == 0 => {}
            Err(_) => return Err(config_err(format!("points: row {} is not numeric", i + 1))),
        }
    }
    Ok(out)
}

pub fn read_points_file(path: &Path) -> Result<Vec<Vec<f64>>> {
    let mut text = String::new();
    File::open(path)
        .map_err(|e| config_err(format!("cannot read {}: {e}", path.display())))?
        .read_to_string(&mut text)?;
    read_points(&text)
}

/// Weight families selectable by `weight eval`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightKind {
    Convex,
    Dirichlet,
    Mu,
    General,
    SignChanging,
    Exterior,
}

fn build_weight(kind: WeightKind, domain: &Domain, sigma: &RobinCoefficient, seed: u64) -> Result<Box<dyn HardyWeight>> {
    Ok(match kind {
        WeightKind::Convex => Box::new(convex_weight(domain, sigma)?),
        WeightKind::Dirichlet => Box::new(dirichlet_weight(domain)?),
        WeightKind::Mu => Box::new(MuWeight::new(domain, sigma, if domain.dim() == 1 { 1 } else { 1024 })?),
        WeightKind::General => {
            let RobinCoefficient::Constant(s) = sigma else {
                return Err(config_err("the general-domain weight needs a constant sigma"));
            };
            Box::new(cor_general_bound(domain, *s, DEFAULT_MC_SAMPLES, seed)?.1)
        }
        WeightKind::SignChanging => Box::new(sign_changing_weight(domain, sigma)?),
        WeightKind::Exterior => {
            let Domain::BallComplement(b) = domain else {
                return Err(config_err("the exterior weight needs a ball-complement domain"));
            };
            let RobinCoefficient::Constant(s) = sigma else {
                return Err(config_err("the exterior weight needs a constant sigma"));
            };
            Box::new(exterior_weight(b.radius(), *s, domain.dim())?)
        }
    })
}

fn coord_headers(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

/// `weight eval`: interior weight, nearest boundary point and flags per point.
pub fn weight_eval(
    w: impl Write,
    domain: &Domain,
    sigma: &RobinCoefficient,
    kind: WeightKind,
    points: &[Vec<f64>],
    seed: u64,
) -> Result<()> {
    let weight = build_weight(kind, domain, sigma, seed)?;
    let n = domain.dim();
    let mut wr = csv::Writer::from_writer(w);
    let csv_err = |e: csv::Error| Error::Io(std::io::Error::other(e));
    let mut header = coord_headers("x", n);
    header.push("weight".into());
    header.extend(coord_headers("p", n));
    header.push("flags".into());
    wr.write_record(&header).map_err(csv_err)?;
    for x in points {
        if x.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: x.len() });
        }
        let mut row: Vec<String> = x.iter().map(|v| v.to_string()).collect();
        if !domain.contains(x)? {
            row.push("nan".into());
            row.extend(std::iter::repeat_n(String::new(), n));
            row.push("outside".into());
        } else {
            let value = weight.interior(x)?;
            let proj = domain.distance_and_projection(x)?;
            row.push(value.to_string());
            row.extend(proj.nearest.coords().iter().map(|v| v.to_string()));
            row.push(if proj.unique { String::new() } else { "singular".into() });
        }
        wr.write_record(&row).map_err(csv_err)?;
    }
    wr.flush()?;
    Ok(())
}

/// `geometry probe`: `δ`, nearest point, facet and optionally `d_e` per point.
pub fn geometry_probe(w: impl Write, domain: &Domain, points: &[Vec<f64>], direction: Option<&[f64]>) -> Result<()> {
    let n = domain.dim();
    let dir = direction.map(|d| Direction::normalize(d.to_vec())).transpose()?;
    if let Some(d) = &dir {
        if d.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, got: d.dim() });
        }
    }
    let mut wr = csv::Writer::from_writer(w);
    let csv_err = |e: csv::Error| Error::Io(std::io::Error::other(e));
    let mut header = coord_headers("x", n);
    header.push("delta".into());
    header.extend(coord_headers("p", n));
    header.extend(["facet".into(), "unique".into(), "minimizers".into()]);
    if dir.is_some() {
        header.extend(["d_e".into(), "exits".into()]);
    }
    wr.write_record(&header).map_err(csv_err)?;
    for x in points {
        let proj = domain.distance_and_projection(x)?;
        let mut row: Vec<String> = x.iter().map(|v| v.to_string()).collect();
        row.push(proj.distance.to_string());
        row.extend(proj.nearest.coords().iter().map(|v| v.to_string()));
        row.push(proj.facet.to_string());
        row.push(proj.unique.to_string());
        row.push(proj.all_minimizers.len().to_string());
        if let Some(e) = &dir {
            let exit = domain.directional_distance(x, e)?;
            row.push(exit.distance.to_string());
            row.push(exit.minimizers().iter().map(|s| s.to_string()).collect::<Vec<_>>().join(";"));
        }
        wr.write_record(&row).map_err(csv_err)?;
    }
    wr.flush()?;
    Ok(())
}

/// Caps rayon's global pool from `HARDY_ROBIN_THREADS` when set.
pub fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("HARDY_ROBIN_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .map_err(|_| config_err(format!("HARDY_ROBIN_THREADS=`{v}` is not a positive integer")))?;
        if n == 0 {
            return Err(config_err("HARDY_ROBIN_THREADS must be positive"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| config_err(e.to_string()))?;
    }
    Ok(())
}

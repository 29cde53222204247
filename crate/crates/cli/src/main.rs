use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hardy_robin::config::{DomainFile, Experiment, Extended, RunConfig, SigmaSpec};
use hardy_robin::{Error, Result};
use hardy_robin_cli::{
    configure_threads, emit, error_exit_code, exit_code, geometry_probe, read_points, read_points_file, run,
    weight_eval, WeightKind, EXIT_INPUT,
};

#[derive(Parser)]
#[command(name = "hardy-robin", version, about = "Hardy weights for Robin Laplacians and their numerical certification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment described by a TOML config.
    Run {
        config: PathBuf,
    },
    /// Certify a Hardy inequality on a sequence of meshes.
    #[command(subcommand)]
    Verify(Verify),
    /// Ratio of the sharpness test function on balls of growing radius.
    Sharpness {
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[arg(long, value_delimiter = ',')]
        radii: Option<Vec<f64>>,
        #[command(flatten)]
        common: Common,
    },
    /// Lowest Robin-Neumann eigenvalue on fibers against the tanh root.
    RobinEv {
        #[arg(long, value_delimiter = ',')]
        heights: Option<Vec<f64>>,
        #[command(flatten)]
        common: Common,
    },
    /// Negative eigenvalue despite a positive boundary integral of σ.
    NegEvDemo {
        #[arg(long, default_value_t = 1.0)]
        b: f64,
        #[arg(long, allow_hyphen_values = true)]
        sigma_left: Extended,
        #[arg(long, allow_hyphen_values = true)]
        sigma_right: Extended,
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate weights at given points.
    #[command(subcommand)]
    Weight(WeightCmd),
    /// Query distances and projections.
    #[command(subcommand)]
    Geometry(GeometryCmd),
}

#[derive(Subcommand)]
enum Verify {
    /// One-sided interval weight with a Robin end at `t = 0`.
    Lemma1 {
        #[arg(long)]
        b: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Two-sided interval weight with Robin coefficients at both ends.
    Lemma2 {
        #[arg(long)]
        b: f64,
        #[arg(long)]
        sigma_left: Extended,
        #[arg(long)]
        sigma_right: Extended,
        #[command(flatten)]
        common: Common,
    },
    /// Distance weight on a bounded convex domain.
    Convex {
        #[command(flatten)]
        common: Common,
    },
    /// Directional average weight.
    Mu {
        #[arg(long)]
        level: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Constant-times-distance weight with a Monte Carlo volume constant.
    General {
        #[arg(long)]
        samples: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Robin coefficients `σ = k` against the Dirichlet problem.
    Dirichlet {
        #[arg(long, value_delimiter = ',')]
        ks: Option<Vec<f64>>,
        #[command(flatten)]
        common: Common,
    },
    /// Fiberwise weight on a subgraph domain with a sign-changing coefficient.
    Subgraph {
        #[arg(long)]
        samples: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Radial reduction outside a ball.
    Exterior {
        #[arg(long)]
        radius: f64,
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        outer: Option<f64>,
        #[arg(long)]
        nodes: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand)]
enum WeightCmd {
    /// Evaluate a weight at the points of a CSV file.
    Eval {
        #[arg(long)]
        domain: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        sigma: Option<String>,
        #[arg(long)]
        points: PathBuf,
        #[arg(long, value_enum, default_value = "convex")]
        weight: WeightArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GeometryCmd {
    /// Distance, projection and directional distance at given points.
    Probe {
        #[arg(long)]
        domain: PathBuf,
        /// CSV file of points; alternatively `--point`.
        #[arg(long)]
        points: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        point: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        direction: Option<Vec<f64>>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum WeightArg {
    Convex,
    Dirichlet,
    Mu,
    General,
    SignChanging,
    Exterior,
}

impl From<WeightArg> for WeightKind {
    fn from(w: WeightArg) -> Self {
        match w {
            WeightArg::Convex => WeightKind::Convex,
            WeightArg::Dirichlet => WeightKind::Dirichlet,
            WeightArg::Mu => WeightKind::Mu,
            WeightArg::General => WeightKind::General,
            WeightArg::SignChanging => WeightKind::SignChanging,
            WeightArg::Exterior => WeightKind::Exterior,
        }
    }
}

#[derive(Args, Default)]
struct Common {
    /// TOML file with a `[domain]` and optionally a `[sigma]` section.
    #[arg(long)]
    domain: Option<PathBuf>,
    /// `1`, `inf`, or a per-facet list such as `1,inf,0,0`.
    #[arg(long, allow_hyphen_values = true)]
    sigma: Option<String>,
    /// Single mesh size.
    #[arg(long, conflicts_with = "resolutions")]
    h: Option<f64>,
    /// Comma-separated mesh sizes.
    #[arg(long, value_delimiter = ',')]
    resolutions: Option<Vec<f64>>,
    /// Absolute tolerance.
    #[arg(long, conflicts_with = "tol_factor")]
    tol: Option<f64>,
    /// Tolerance proportional to the mesh size.
    #[arg(long)]
    tol_factor: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// JSON report path (stdout otherwise).
    #[arg(long)]
    out: Option<PathBuf>,
    /// CSV trace path.
    #[arg(long)]
    trace: Option<PathBuf>,
}

impl Common {
    fn config(&self, experiment: Experiment) -> Result<RunConfig> {
        let mut cfg = RunConfig::new(experiment);
        cfg.seed = self.seed;
        cfg.resolutions = self.h.map(|h| vec![h]).or_else(|| self.resolutions.clone());
        cfg.tol = self.tol;
        cfg.tol_factor = self.tol_factor;
        cfg.output.report = self.out.clone();
        cfg.output.trace = self.trace.clone();
        if let Some(p) = &self.domain {
            let file = DomainFile::load(p)?;
            cfg.domain = Some(file.domain);
            cfg.sigma = file.sigma;
        }
        if let Some(s) = &self.sigma {
            cfg.sigma = Some(s.parse::<SigmaSpec>()?);
        }
        Ok(cfg)
    }
}

fn build(cmd: Command) -> Result<Option<RunConfig>> {
    let cfg = match cmd {
        Command::Run { config } => RunConfig::load(&config)?,
        Command::Verify(v) => match v {
            Verify::Lemma1 { b, common } => {
                let mut c = common.config(Experiment::Lemma1)?;
                c.params.b = Some(b);
                c
            }
            Verify::Lemma2 { b, sigma_left, sigma_right, common } => {
                let mut c = common.config(Experiment::Lemma2)?;
                c.params.b = Some(b);
                c.params.sigma_left = Some(sigma_left);
                c.params.sigma_right = Some(sigma_right);
                c
            }
            Verify::Convex { common } => common.config(Experiment::Convex)?,
            Verify::Mu { level, common } => {
                let mut c = common.config(Experiment::Mu)?;
                c.params.level = level;
                c
            }
            Verify::General { samples, common } => {
                let mut c = common.config(Experiment::General)?;
                c.params.samples = samples;
                c
            }
            Verify::Dirichlet { ks, common } => {
                let mut c = common.config(Experiment::Dirichlet)?;
                c.params.ks = ks;
                c
            }
            Verify::Subgraph { samples, common } => {
                let mut c = common.config(Experiment::Subgraph)?;
                c.params.samples = samples;
                c
            }
            Verify::Exterior { radius, dim, outer, nodes, common } => {
                let mut c = common.config(Experiment::Exterior)?;
                c.params.radius = Some(radius);
                c.params.dim = Some(dim);
                c.params.outer = outer;
                c.params.nodes = nodes;
                c
            }
        },
        Command::Sharpness { dim, radii, common } => {
            let mut c = common.config(Experiment::Sharpness)?;
            c.params.dim = Some(dim);
            c.params.radii = radii;
            c
        }
        Command::RobinEv { heights, common } => {
            let mut c = common.config(Experiment::RobinEv)?;
            c.params.heights = heights;
            c
        }
        Command::NegEvDemo { b, sigma_left, sigma_right, common } => {
            let mut c = common.config(Experiment::NegEvDemo)?;
            c.params.b = Some(b);
            c.params.sigma_left = Some(sigma_left);
            c.params.sigma_right = Some(sigma_right);
            c
        }
        Command::Weight(WeightCmd::Eval { domain, sigma, points, weight, seed, out }) => {
            let file = DomainFile::load(&domain)?;
            let d = file.domain.build()?;
            let s = match sigma {
                Some(s) => s.parse::<SigmaSpec>()?,
                None => file.sigma.ok_or_else(|| Error::Config("missing `--sigma` or a `[sigma]` section".into()))?,
            }
            .build()?;
            let pts = read_points_file(&points)?;
            with_output(out, |w| weight_eval(w, &d, &s, weight.into(), &pts, seed))?;
            return Ok(None);
        }
        Command::Geometry(GeometryCmd::Probe { domain, points, point, direction, out }) => {
            let d = DomainFile::load(&domain)?.domain.build()?;
            let pts = match (points, point) {
                (Some(p), None) => read_points_file(&p)?,
                (None, Some(p)) => read_points(&p.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","))?,
                _ => return Err(Error::Config("exactly one of `--points` or `--point` is required".into())),
            };
            with_output(out, |w| geometry_probe(w, &d, &pts, direction.as_deref()))?;
            return Ok(None);
        }
    };
    Ok(Some(cfg))
}

fn with_output(path: Option<PathBuf>, f: impl FnOnce(Box<dyn Write>) -> Result<()>) -> Result<()> {
    let w: Box<dyn Write> = match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(std::io::stdout().lock()),
    };
    f(w)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| build(cli.command)).and_then(|cfg| {
        let Some(cfg) = cfg else { return Ok(0) };
        let out = run(&cfg)?;
        emit(&cfg, &out)?;
        eprintln!(
            "{}: {:?} ({} level(s), {} check(s))",
            cfg.experiment.name(),
            out.report.status,
            out.report.levels.len(),
            out.report.checks.len()
        );
        Ok(exit_code(&out.report))
    });
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            let code = error_exit_code(&e);
            ExitCode::from(if code == 0 { EXIT_INPUT } else { code } as u8)
        }
    }
}

//! TOML descriptions of domains, Robin coefficients and runs.
//!
//! ```toml
//! experiment = "convex"
//! resolutions = [0.03125, 0.015625]
//!
//! [domain]
//! variant = "ball"
//! center = [0.0, 0.0]
//! radius = 1.0
//!
//! [sigma]
//! constant = "inf"
//! ```

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::geometry::{Ball, BallComplement, ConvexPolytope, Domain, Halfspace, Interval, Profile, Subgraph};
use crate::weights::{BaseRegion, RobinCoefficient};

/// A value in `[−∞, +∞]` written as a number or as `"inf"` / `"-inf"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extended(pub f64);

impl FromStr for Extended {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        let v = match t.as_str() {
            "inf" | "+inf" | "infinity" | "+infinity" | "dirichlet" => f64::INFINITY,
            "-inf" | "-infinity" => f64::NEG_INFINITY,
            "neumann" => 0.0,
            _ => t
                .parse::<f64>()
                .map_err(|_| Error::Config(format!("`{s}` is neither a number nor inf")))?,
        };
        if v.is_nan() {
            return Err(Error::Config("NaN is not an admissible value".into()));
        }
        Ok(Extended(v))
    }
}

impl<'de> Deserialize<'de> for Extended {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) if !v.is_nan() => Ok(Extended(v)),
            Raw::Num(_) => Err(serde::de::Error::custom("NaN is not an admissible value")),
            Raw::Int(v) => Ok(Extended(v as f64)),
            Raw::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

impl Serialize for Extended {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_infinite() {
            s.serialize_str(if self.0 > 0.0 { "inf" } else { "-inf" })
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_infinite() {
            f.write_str(if self.0 > 0.0 { "inf" } else { "-inf" })
        } else {
            write!(f, "{}", self.0)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HalfspaceSpec {
    pub normal: Vec<f64>,
    pub offset: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProfileKind {
    Tent,
    Bubble,
}

/// Domain section of a config.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DomainSpec {
    Interval {
        length: f64,
    },
    /// Exactly one of `halfspaces`, `vertices` (planar) or `lo`/`hi` (box).
    Polytope {
        #[serde(default)]
        halfspaces: Option<Vec<HalfspaceSpec>>,
        #[serde(default)]
        vertices: Option<Vec<[f64; 2]>>,
        #[serde(default)]
        lo: Option<Vec<f64>>,
        #[serde(default)]
        hi: Option<Vec<f64>>,
    },
    Ball {
        center: Vec<f64>,
        radius: f64,
    },
    BallComplement {
        dim: usize,
        radius: f64,
    },
    /// Box base `base_lo`/`base_hi`.
    Subgraph {
        base_lo: Vec<f64>,
        base_hi: Vec<f64>,
        profile: ProfileKind,
        height: f64,
    },
}

impl DomainSpec {
    pub fn build(&self) -> Result<Domain> {
        Ok(match self {
            DomainSpec::Interval { length } => Interval::new(*length)?.into(),
            DomainSpec::Polytope { halfspaces, vertices, lo, hi } => {
                let given = [halfspaces.is_some(), vertices.is_some(), lo.is_some() || hi.is_some()];
                if given.iter().filter(|g| **g).count() != 1 {
                    return Err(Error::Config(
                        "domain: polytope needs exactly one of `halfspaces`, `vertices` or `lo`/`hi`".into(),
                    ));
                }
                if let Some(hs) = halfspaces {
                    let hs = hs
                        .iter()
                        .map(|h| Halfspace::new(h.normal.clone(), h.offset))
                        .collect::<Result<Vec<_>>>()?;
                    ConvexPolytope::from_halfspaces(hs)?.into()
                } else if let Some(v) = vertices {
                    ConvexPolytope::from_vertices_2d(v)?.into()
                } else {
                    let lo = lo.as_ref().ok_or_else(|| Error::Config("domain: missing field `lo`".into()))?;
                    let hi = hi.as_ref().ok_or_else(|| Error::Config("domain: missing field `hi`".into()))?;
                    ConvexPolytope::axis_box(lo, hi)?.into()
                }
            }
            DomainSpec::Ball { center, radius } => Ball::new(center.clone(), *radius)?.into(),
            DomainSpec::BallComplement { dim, radius } => BallComplement::new(*dim, *radius)?.into(),
            DomainSpec::Subgraph { base_lo, base_hi, profile, height } => {
                let base = ConvexPolytope::axis_box(base_lo, base_hi)?;
                let profile = match profile {
                    ProfileKind::Tent => Profile::Tent { height: *height },
                    ProfileKind::Bubble => Profile::Bubble { height: *height },
                };
                Subgraph::new(base, profile)?.into()
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionSpec {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub value: Extended,
}

/// Robin coefficient section: exactly one of `constant`, `per-facet` or `regions`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct SigmaSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constant: Option<Extended>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub per_facet: Option<Vec<Extended>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub regions: Option<Vec<RegionSpec>>,
    /// Base value outside all `regions`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub default: Option<Extended>,
}

impl SigmaSpec {
    pub fn constant(v: f64) -> Self {
        SigmaSpec {
            constant: Some(Extended(v)),
            ..Default::default()
        }
    }

    pub fn build(&self) -> Result<RobinCoefficient> {
        let given = [self.constant.is_some(), self.per_facet.is_some(), self.regions.is_some()];
        if given.iter().filter(|g| **g).count() != 1 {
            return Err(Error::Config(
                "sigma: exactly one of `constant`, `per-facet` or `regions` is required".into(),
            ));
        }
        if self.default.is_some() && self.regions.is_none() {
            return Err(Error::Config("sigma: `default` only applies together with `regions`".into()));
        }
        Ok(if let Some(c) = self.constant {
            RobinCoefficient::Constant(c.0)
        } else if let Some(v) = &self.per_facet {
            RobinCoefficient::PerFacet(v.iter().map(|e| e.0).collect())
        } else {
            let regions = self.regions.as_ref().map_or_else(Vec::new, |r| {
                r.iter()
                    .map(|r| BaseRegion {
                        lo: r.lo.clone(),
                        hi: r.hi.clone(),
                        value: r.value.0,
                    })
                    .collect()
            });
            RobinCoefficient::BaseRegions {
                regions,
                default: self.default.map_or(0.0, |d| d.0),
            }
        })
    }
}

impl FromStr for SigmaSpec {
    type Err = Error;

    /// `1`, `inf`, or a comma-separated per-facet list such as `1,inf,0,0`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').collect();
        if parts.len() == 1 {
            Ok(SigmaSpec::constant(parts[0].parse::<Extended>()?.0))
        } else {
            Ok(SigmaSpec {
                per_facet: Some(parts.iter().map(|p| p.parse()).collect::<Result<_>>()?),
                ..Default::default()
            })
        }
    }
}

/// Named experiments a run config can request.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Lemma1,
    Lemma2,
    Convex,
    Mu,
    General,
    Dirichlet,
    Subgraph,
    Exterior,
    Sharpness,
    RobinEv,
    NegEvDemo,
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Experiment::Lemma1 => "lemma1",
            Experiment::Lemma2 => "lemma2",
            Experiment::Convex => "convex",
            Experiment::Mu => "mu",
            Experiment::General => "general",
            Experiment::Dirichlet => "dirichlet",
            Experiment::Subgraph => "subgraph",
            Experiment::Exterior => "exterior",
            Experiment::Sharpness => "sharpness",
            Experiment::RobinEv => "robin-ev",
            Experiment::NegEvDemo => "neg-ev-demo",
        }
    }
}

/// Scalar parameters of the 1D and radial experiments.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct Params {
    /// Interval length.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_left: Option<Extended>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_right: Option<Extended>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outer: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nodes: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radii: Option<Vec<f64>>,
    /// Robin coefficients of the Dirichlet-limit run.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ks: Option<Vec<f64>>,
    /// Base samples per axis (subgraph) or Monte Carlo samples (general).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    /// Fiber heights of the Robin eigenvalue run.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub heights: Option<Vec<f64>>,
    /// Sphere quadrature level of the directional average.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct OutputSpec {
    /// JSON report path.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<PathBuf>,
    /// CSV trace path.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<PathBuf>,
}

/// A complete run description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct RunConfig {
    pub experiment: Experiment,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolutions: Option<Vec<f64>>,
    /// Absolute tolerance on the negative part of `λ_min`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    /// Tolerance `factor · h`; exclusive with `tol`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol_factor: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<DomainSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<SigmaSpec>,
    #[serde(default)]
    pub params: Params,
    #[serde(default)]
    pub output: OutputSpec,
}

impl RunConfig {
    pub fn new(experiment: Experiment) -> Self {
        RunConfig {
            experiment,
            seed: 0,
            resolutions: None,
            tol: None,
            tol_factor: None,
            domain: None,
            sigma: None,
            params: Params::default(),
            output: OutputSpec::default(),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// Reads a config and checks that referenced output directories exist.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let cfg = Self::from_toml(&text)?;
        for p in [&cfg.output.report, &cfg.output.trace].into_iter().flatten() {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                if !dir.is_dir() {
                    return Err(Error::Config(format!("output directory {} does not exist", dir.display())));
                }
            }
        }
        Ok(cfg)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn build_domain(&self) -> Result<Domain> {
        self.domain
            .as_ref()
            .ok_or_else(|| Error::Config("missing section `domain`".into()))?
            .build()
    }

    pub fn build_sigma(&self) -> Result<RobinCoefficient> {
        self.sigma
            .as_ref()
            .ok_or_else(|| Error::Config("missing section `sigma`".into()))?
            .build()
    }
}

/// Domain and optional σ read from a standalone domain file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainFile {
    pub domain: DomainSpec,
    #[serde(default)]
    pub sigma: Option<SigmaSpec>,
}

impl DomainFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| Error::Config(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extended_values() {
        assert_eq!("inf".parse::<Extended>().unwrap().0, f64::INFINITY);
        assert_eq!(" 2.5 ".parse::<Extended>().unwrap().0, 2.5);
        assert!("abc".parse::<Extended>().is_err());
        assert!("nan".parse::<Extended>().is_err());
    }

    #[test]
    fn sigma_strings() {
        let s: SigmaSpec = "1,inf,0".parse().unwrap();
        assert_eq!(
            s.build().unwrap(),
            RobinCoefficient::PerFacet(vec![1.0, f64::INFINITY, 0.0])
        );
        let s: SigmaSpec = "inf".parse().unwrap();
        assert_eq!(s.build().unwrap(), RobinCoefficient::Constant(f64::INFINITY));
    }

    #[test]
    fn run_config_round_trip() {
        let text = r#"
experiment = "convex"
resolutions = [0.125]

[domain]
variant = "polytope"
lo = [0.0, 0.0]
hi = [1.0, 1.0]

[sigma]
constant = "inf"
"#;
        let cfg = RunConfig::from_toml(text).unwrap();
        assert_eq!(cfg.experiment, Experiment::Convex);
        assert_eq!(cfg.build_sigma().unwrap(), RobinCoefficient::Constant(f64::INFINITY));
        assert_eq!(cfg.build_domain().unwrap().dim(), 2);
        let again = RunConfig::from_toml(&cfg.to_toml().unwrap()).unwrap();
        assert_eq!(again, cfg);
    }

    #[test]
    fn missing_field_is_named() {
        let text = "experiment = \"convex\"\n[domain]\nvariant = \"ball\"\ncenter = [0.0, 0.0]\n";
        let err = RunConfig::from_toml(text).unwrap_err().to_string();
        assert!(err.contains("radius"), "{err}");
        let err = RunConfig::from_toml("experiment = \"nope\"").unwrap_err().to_string();
        assert!(err.contains("experiment") || err.contains("nope"), "{err}");
    }

    #[test]
    fn polytope_forms_are_exclusive() {
        let spec = DomainSpec::Polytope {
            halfspaces: None,
            vertices: Some(vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]),
            lo: Some(vec![0.0, 0.0]),
            hi: Some(vec![1.0, 1.0]),
        };
        assert!(spec.build().is_err());
    }
}

use serde::{Deserialize, Serialize};

use crate::weights::Provenance;

/// Overall outcome of a verification run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Violation,
    SolverFailure,
    /// The run's premise does not hold (nothing to demonstrate).
    NotApplicable,
}

/// Admissible negative part of `λ_min` at mesh size `h`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Tolerance {
    Absolute { value: f64 },
    /// `factor · h`
    Linear { factor: f64 },
}

impl Tolerance {
    pub fn at(&self, h: f64) -> f64 {
        match *self {
            Tolerance::Absolute { value } => value,
            Tolerance::Linear { factor } => factor * h,
        }
    }
}

/// Result of one eigenvalue certification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelResult {
    pub h: f64,
    pub dofs: usize,
    pub lambda_min: Option<f64>,
    pub residual: Option<f64>,
    /// Shift at which the operator was factored positive definite.
    pub lower_bound: Option<f64>,
    pub iterations: usize,
    pub tolerance: f64,
    /// Smallest Rayleigh quotient among the random test vectors.
    pub rayleigh_min: Option<f64>,
    pub pass: bool,
    /// Parameters that identify the level beyond `h` (fiber base point, `σ`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub at: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
}

/// A named scalar comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub bound: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub experiment: String,
    pub provenance: Option<Provenance>,
    pub levels: Vec<LevelResult>,
    pub checks: Vec<Check>,
    pub status: Status,
    pub pass: bool,
}

impl VerificationReport {
    pub fn new(experiment: impl Into<String>, provenance: Option<Provenance>) -> Self {
        VerificationReport {
            experiment: experiment.into(),
            provenance,
            levels: Vec::new(),
            checks: Vec::new(),
            status: Status::Pass,
            pass: true,
        }
    }

    /// Records `value ≤ bound`.
    pub fn check_le(&mut self, name: impl Into<String>, value: f64, bound: f64) -> bool {
        let pass = value <= bound;
        self.checks.push(Check {
            name: name.into(),
            value,
            bound,
            pass,
        });
        pass
    }

    /// Records `value ≥ bound`.
    pub fn check_ge(&mut self, name: impl Into<String>, value: f64, bound: f64) -> bool {
        let pass = value >= bound;
        self.checks.push(Check {
            name: name.into(),
            value,
            bound,
            pass,
        });
        pass
    }

    /// Records a condition without a natural scalar.
    pub fn check_flag(&mut self, name: impl Into<String>, pass: bool) -> bool {
        self.checks.push(Check {
            name: name.into(),
            value: f64::from(u8::from(pass)),
            bound: 1.0,
            pass,
        });
        pass
    }

    /// Derives `status` and `pass` from the levels and checks.
    pub fn finalize(mut self) -> Self {
        if self.status == Status::NotApplicable {
            self.pass = false;
            return self;
        }
        let solver_failed = self.levels.iter().any(|l| l.lambda_min.is_none());
        let failed = self.levels.iter().any(|l| !l.pass) || self.checks.iter().any(|c| !c.pass);
        self.status = if solver_failed {
            Status::SolverFailure
        } else if failed {
            Status::Violation
        } else {
            Status::Pass
        };
        self.pass = self.status == Status::Pass;
        self
    }

    /// `λ_min` per level, `None` where the solver failed.
    pub fn lambdas(&self) -> Vec<Option<f64>> {
        self.levels.iter().map(|l| l.lambda_min).collect()
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

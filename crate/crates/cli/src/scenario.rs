//! Scenario files: one TOML document per run.

use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use apsflow::evolution::Scheme;
use apsflow::family::FamilySpec;
use apsflow::index::{DecayProfile, Verdict};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    Sfl,
    Evolve,
    ApsIndex,
    VerifyMain,
    VerifyGluing,
    Diagnostic,
    CounterexampleGrowth,
}

impl Task {
    pub fn as_str(&self) -> &'static str {
        match self {
            Task::Sfl => "sfl",
            Task::Evolve => "evolve",
            Task::ApsIndex => "aps-index",
            Task::VerifyMain => "verify-main",
            Task::VerifyGluing => "verify-gluing",
            Task::Diagnostic => "diagnostic",
            Task::CounterexampleGrowth => "counterexample-growth",
        }
    }
}

/// A time written either as a decimal string or as a TOML number.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TimeValue {
    Text(String),
    Number(f64),
}

impl TimeValue {
    pub fn value(&self) -> Result<f64> {
        match self {
            TimeValue::Number(v) => Ok(*v),
            TimeValue::Text(s) => s.trim().parse().map_err(|_| anyhow!("`{s}` is not a decimal time")),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    pub steps: Option<usize>,
    pub scheme: Option<Scheme>,
    /// Refinement tolerance for adaptive propagation.
    pub tol: Option<f64>,
    pub checkpoints: Option<usize>,
    pub rank_tol: Option<f64>,
    pub fredholm_margin: Option<f64>,
    /// Block counts for the growth experiment.
    pub ns: Option<Vec<usize>>,
    pub lambda_scale: Option<f64>,
    pub r: Option<TimeValue>,
    pub s: Option<TimeValue>,
    pub t: Option<TimeValue>,
    /// Base refinements for self-convergence ratios.
    pub ratio_steps: Option<Vec<usize>>,
    pub volterra: Option<bool>,
    /// Two refinements at which the Duhamel residual is compared.
    pub duhamel: Option<Vec<usize>>,
    pub closed_form: Option<bool>,
    pub eigenpath_samples: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expect {
    pub sfl: Option<i64>,
    pub index: Option<i64>,
    pub kernel_dim: Option<usize>,
    pub coker_dim: Option<usize>,
    pub verdict: Option<Verdict>,
    pub kernel_equals_n: Option<bool>,
    /// `[whole, first, second]`.
    pub gluing: Option<[i64; 3]>,
    pub profile: Option<DecayProfile>,
    pub max_closed_form_error: Option<f64>,
    pub ratio_range: Option<[f64; 2]>,
    pub max_volterra_error: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub task: Task,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub description: String,
    pub family: FamilySpec,
    #[serde(default)]
    pub params: Params,
    #[serde(default)]
    pub expect: Expect,
}

impl Scenario {
    pub fn parse(text: &str, origin: &str) -> Result<Scenario> {
        let scenario: Scenario = toml::from_str(text).map_err(|e| anyhow!("{origin}: {e}"))?;
        scenario.validate().with_context(|| format!("{origin}: scenario `{}`", scenario.name))?;
        Ok(scenario)
    }

    pub fn load(path: &Path) -> Result<Scenario> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Scenario::parse(&text, &path.display().to_string())
    }

    fn validate(&self) -> Result<()> {
        if self.name.is_empty() || !self.name.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_') {
            bail!("name must be non-empty and use only letters, digits, `-` and `_`");
        }
        let p = &self.params;
        match self.task {
            Task::VerifyGluing if p.s.is_none() => bail!("task verify-gluing needs params.s"),
            Task::CounterexampleGrowth => {
                if p.ns.as_ref().is_none_or(|n| n.is_empty()) {
                    bail!("task counterexample-growth needs a non-empty params.ns");
                }
            }
            _ => {}
        }
        if let Some(d) = &p.duhamel {
            if d.len() != 2 {
                bail!("params.duhamel takes exactly two step counts");
            }
        }
        if p.steps == Some(0) {
            bail!("params.steps must be positive");
        }
        Ok(())
    }
}

//! Experiment specification file: one document drives every subcommand.

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use strikesim_core::sim::{ControllerPolicy, PolicyKind, SimConfig};
use strikesim_core::simgen::GeneratorConfig;

/// Full experiment description, loadable from TOML or JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub seed: u64,
    #[serde(default)]
    pub dataset: DatasetSpec,
    #[serde(default)]
    pub predictor: PredictorSpec,
    #[serde(default)]
    pub uncertainty: UncertaintySpec,
    #[serde(default = "default_policies")]
    pub policies: Vec<PolicySpec>,
    #[serde(default)]
    pub sim: SimConfig,
    #[serde(default)]
    pub sweep: SweepSpec,
    #[serde(default)]
    pub robot: RobotSpec,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct DatasetSpec {
    /// Where previously generated data lives (fit/benchmark/diagnose/sweep).
    pub path: Option<PathBuf>,
    /// Generation settings (generate); the top-level seed wins.
    #[serde(default)]
    pub generator: GeneratorConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PredictorKind {
    Knn,
    NoisyOracle,
    Ensemble,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PredictorSpec {
    pub kind: PredictorKind,
    /// Persisted model to load instead of fitting inline.
    pub path: Option<PathBuf>,
    pub k: usize,
    /// Pre-hit frames per feature window.
    pub window: usize,
    /// Prediction rows represented in the training set; empty = all 30.
    #[serde(default)]
    pub train_rows: Vec<usize>,
    /// Ensemble fold count.
    pub members: usize,
    /// Noisy-oracle schedule: σ(row) = intercept + slope·row (cm).
    pub sigma_intercept: f64,
    pub sigma_slope: f64,
}

impl Default for PredictorSpec {
    fn default() -> Self {
        Self {
            kind: PredictorKind::Knn,
            path: None,
            k: 8,
            window: 10,
            train_rows: Vec::new(),
            members: 5,
            sigma_intercept: 10.0,
            sigma_slope: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct UncertaintySpec {
    /// Conformal miscoverage α.
    pub alpha_conf: f64,
    /// Estimators exercised by fit/diagnose.
    pub estimators: Vec<String>,
    pub knn_error_k: usize,
    /// Row at which per-prediction estimators evaluate (0 = at the hit).
    pub eval_row: usize,
    /// Frames covered by the median-error table and κ calibration.
    pub frames: Vec<usize>,
}

impl Default for UncertaintySpec {
    fn default() -> Self {
        Self {
            alpha_conf: 0.1,
            estimators: vec![
                "knn_error".into(),
                "ensemble".into(),
                "conformal".into(),
                "time_to_hit".into(),
            ],
            knn_error_k: 8,
            eval_row: 0,
            frames: vec![1, 5, 10, 15, 20, 25, 29],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolicySpec {
    pub id: String,
    pub kind: PolicyKind,
    pub alpha1: f64,
    pub alpha2: f64,
}

impl PolicySpec {
    pub fn to_policy(&self) -> ControllerPolicy {
        ControllerPolicy {
            id: self.id.clone(),
            kind: self.kind,
            alpha1: self.alpha1,
            alpha2: self.alpha2,
        }
    }
}

fn default_policies() -> Vec<PolicySpec> {
    vec![
        PolicySpec {
            id: "servo_only".into(),
            kind: PolicyKind::ServoOnly,
            alpha1: 0.0,
            alpha2: 0.0,
        },
        PolicySpec {
            id: "anticipatory".into(),
            kind: PolicyKind::Anticipatory,
            alpha1: 1.0,
            alpha2: 1.0,
        },
        PolicySpec {
            id: "uncertainty_aware".into(),
            kind: PolicyKind::UncertaintyAware,
            alpha1: 0.6,
            alpha2: 1.0,
        },
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepSpec {
    /// Policy id from `policies` used as the sweep template.
    pub policy: String,
    pub alpha1_grid: Vec<f64>,
    pub alpha2_grid: Vec<f64>,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            policy: "uncertainty_aware".into(),
            alpha1_grid: vec![0.0, 0.2, 0.4, 0.6, 0.8, 1.0],
            alpha2_grid: vec![0.0, 0.2, 0.4, 0.6, 0.8, 1.0],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RobotSpec {
    /// Joint limits config (JSON/TOML); built-in defaults when omitted.
    pub limits_path: Option<PathBuf>,
    /// Chain geometry config; built-in standard chain when omitted.
    pub chain_path: Option<PathBuf>,
}

impl ExperimentSpec {
    pub fn load(path: &Path, seed_override: Option<u64>) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        let mut spec: ExperimentSpec = if path.extension().and_then(|e| e.to_str()) == Some("json")
        {
            serde_json::from_str(&text).context("config is not valid JSON")?
        } else {
            toml::from_str(&text).context("config is not valid TOML")?
        };
        if let Some(seed) = seed_override {
            spec.seed = seed;
        }
        // one seed governs everything downstream
        spec.dataset.generator.seed = spec.seed;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.policies.is_empty() {
            bail!("at least one policy must be configured");
        }
        for policy in &self.policies {
            if !(0.0..=1.0).contains(&policy.alpha1) || !(0.0..=1.0).contains(&policy.alpha2) {
                bail!("policy '{}' has alphas outside [0, 1]", policy.id);
            }
        }
        if self.predictor.k == 0 {
            bail!("predictor k must be ≥ 1");
        }
        if self.predictor.window == 0 {
            bail!("predictor window must be ≥ 1");
        }
        if self.predictor.members < 2 {
            bail!("ensemble needs ≥ 2 members");
        }
        if !(self.uncertainty.alpha_conf > 0.0 && self.uncertainty.alpha_conf < 1.0) {
            bail!("alpha_conf must lie in (0, 1)");
        }
        if self.uncertainty.frames.len() < 2 {
            bail!("uncertainty.frames needs at least two entries");
        }
        if self.sweep.alpha1_grid.is_empty() || self.sweep.alpha2_grid.is_empty() {
            bail!("sweep grids must not be empty");
        }
        self.dataset
            .generator
            .validate()
            .context("invalid [dataset.generator]")?;
        self.sim.validate().context("invalid [sim] section")?;
        Ok(())
    }

    /// Canonical hash over the resolved spec, for provenance headers.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("spec serializes");
        let mut hash = 0xcbf2_9ce4_8422_2325u64;
        for byte in json.as_bytes() {
            hash ^= *byte as u64;
            hash = hash.wrapping_mul(0x1000_0000_01b3);
        }
        format!("{hash:016x}")
    }
}

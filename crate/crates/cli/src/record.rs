//! Machine-readable run records.

use ldpc_distance::{DistanceResult, Ensemble, EnsembleSpec, Seed, ThresholdReport};
use serde::{Deserialize, Serialize};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// What a run operated on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Input {
    Ensemble { ensemble: Ensemble, spec: EnsembleSpec },
    Pair { ell: u32, emm: u32 },
    File { path: String },
    Codes { pairs: Vec<(u32, u32)> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSummary {
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
    pub alist: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErasurePoint {
    pub theta: f64,
    /// Erasures per trial, `⌊θn⌋`.
    pub erased: usize,
    pub trials: u64,
    /// Trials with `corank(H_J) = 0`, i.e. a unique completion.
    pub successes: u64,
    pub failures: u64,
    pub mean_corank: f64,
}

impl ErasurePoint {
    pub fn success_rate(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.successes as f64 / self.trials as f64
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErasureStats {
    pub ensemble: Ensemble,
    pub spec: EnsembleSpec,
    pub fixed_code: bool,
    pub points: Vec<ErasurePoint>,
}

/// One line of the figure table. Generic rows leave the ensemble columns empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FigureRow {
    pub kind: String,
    pub rate: f64,
    pub generic_gv_delta: f64,
    pub generic_f_swmb: f64,
    pub generic_f_cs: f64,
    pub ell: Option<u32>,
    pub emm: Option<u32>,
    pub delta_star: Option<f64>,
    pub theta_star: Option<f64>,
    pub f_sw: Option<f64>,
    pub f_mb: Option<f64>,
    pub f_comb: Option<f64>,
    pub f_cs: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub n: usize,
    pub alg: String,
    pub theta: Option<f64>,
    pub distance: Option<usize>,
    pub certificate: String,
    pub row_xors: u64,
    pub patterns: u64,
    pub trials: u64,
    pub eliminations: u64,
    pub skipped: u64,
    /// `log₂(patterns)/n`.
    pub log2_patterns_per_n: f64,
    /// Asymptotic exponent of the algorithm for this ensemble.
    pub predicted_exponent: Option<f64>,
    /// Closed-form pattern count for runs with early exit disabled.
    pub closed_form_patterns: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", content = "value", rename_all = "snake_case")]
pub enum RunResult {
    Sample(SampleSummary),
    Distance(DistanceResult),
    Thresholds(ThresholdReport),
    Figure(Vec<FigureRow>),
    ErasureSim(ErasureStats),
    Bench(Vec<BenchRow>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunRecord {
    pub command: String,
    pub version: String,
    pub seed: Seed,
    pub input: Option<Input>,
    pub parameters: serde_json::Value,
    pub result: RunResult,
    pub duration_secs: f64,
}

/// Equality ignores the wall-clock duration.
impl PartialEq for RunRecord {
    fn eq(&self, o: &Self) -> bool {
        self.command == o.command
            && self.version == o.version
            && self.seed == o.seed
            && self.input == o.input
            && self.parameters == o.parameters
            && self.result == o.result
    }
}

impl RunRecord {
    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string(self)
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    /// Reason the run's result is not conclusive, if it is not.
    pub fn inconclusive_reason(&self) -> Option<String> {
        match &self.result {
            RunResult::Distance(r) if !r.certificate.is_conclusive() => Some(r.certificate.to_string()),
            _ => None,
        }
    }
}

//! Serialisable shapes of every JSON document the binary emits.
//!
//! Big integers are written as decimal strings so that no count is ever
//! rounded through a float. All structs reject unknown fields on input, which
//! makes deserialising an output a schema check.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CountRow {
    pub k: usize,
    pub r: usize,
    #[serde(rename = "B")]
    pub b: String,
    #[serde(rename = "B2")]
    pub b2: String,
    pub norun: String,
    #[serde(rename = "C0")]
    pub c0: String,
    #[serde(rename = "M")]
    pub m: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CountsReport {
    pub k_max: usize,
    pub rows: Vec<CountRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathsReport {
    pub k: usize,
    pub r: usize,
    pub class: Option<String>,
    pub paths: Vec<Vec<u32>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeRecord {
    pub i: u32,
    pub t: u32,
    pub degree: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeltaReport {
    pub i: Vec<u32>,
    pub t: Vec<u32>,
    pub edges: Vec<EdgeRecord>,
    pub n_e: usize,
    pub even: bool,
    pub connected: bool,
    pub tree: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContributingReport {
    pub i: Vec<u32>,
    pub mode: String,
    /// `levels[s − 1]` lists the paths of level `s`.
    pub levels: Vec<Vec<Vec<u32>>>,
    pub t_star: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MomentRow {
    pub k: usize,
    pub beta_k: f64,
    pub d_k: f64,
    pub mu_k: f64,
    /// `closed_form` or `enumeration`.
    pub source: String,
    /// Canonical paths visited, for enumerated rows.
    pub paths: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MomentsReport {
    pub alpha: f64,
    pub gamma: f64,
    pub k_max: usize,
    pub rows: Vec<MomentRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundaryReport {
    pub gamma: f64,
    /// `pmf[j] = q(j)`, truncated once the listed mass reaches `1 − 10⁻¹⁵`.
    pub pmf: Vec<f64>,
    /// `1 − Σ pmf`, the mass beyond the listed support.
    pub tail_mass: f64,
    /// `moments[k − 1]` is the `k`-th moment.
    pub moments: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunRecord {
    pub p: usize,
    pub n: usize,
    pub dist: String,
    pub alpha: Option<f64>,
    pub k: usize,
    pub replicates: usize,
    pub seed: u64,
    pub gamma: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StatRecord {
    pub mean: f64,
    pub stddev: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MomentSummary {
    pub k: usize,
    pub mean: f64,
    pub stddev: f64,
    pub stderr: f64,
    /// Limit the mean is compared with, when it is computable.
    pub exact: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HistogramRecord {
    pub bins: usize,
    pub lo: f64,
    pub hi: f64,
    pub in_range: u64,
    pub below: u64,
    pub above: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationSummary {
    pub config: RunRecord,
    /// `mu` or `beta`.
    pub target: String,
    pub moments: Vec<MomentSummary>,
    pub lambda_min: StatRecord,
    pub lambda_max: StatRecord,
    pub histogram: Option<HistogramRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompareRow {
    pub k: usize,
    pub exact: f64,
    pub mean: f64,
    pub stderr: f64,
    pub z: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompareReport {
    pub config: RunRecord,
    pub target: String,
    pub threshold: f64,
    pub rows: Vec<CompareRow>,
    pub pass: bool,
}

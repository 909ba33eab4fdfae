//! Typed experiment configurations. Configs load from JSON (strictly: every
//! unknown key is an error), `--set key=value` overrides apply on the raw
//! JSON value by dot path, and the fully materialized config is echoed into
//! the run record so a run can be reproduced without hidden defaults.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use scatter_core::forward::layered::RadialProfile;
use scatter_core::forward::subsurface::Inclusion;
use scatter_core::lsm::{GridSpec, LsmVariant};
use scatter_core::mrc::Shape;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "snake_case")]
pub struct BoxSpec {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Default for BoxSpec {
    fn default() -> Self {
        BoxSpec { lower: vec![-2.0, -1.0, 0.0], upper: vec![2.0, 1.0, 1.0] }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "snake_case")]
pub enum SourceLayout {
    /// 12 sources / 21 detectors directly above the search box.
    Overhead,
    /// 8 sources / 22 detectors to one side of the search box.
    Side,
    Explicit { sources: Vec<[f64; 3]>, detectors: Vec<[f64; 3]> },
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "snake_case", tag = "kind")]
pub enum SyntheticModel {
    Subsurface {
        #[serde(default = "benchmark_inclusions")]
        inclusions: Vec<Inclusion>,
        #[serde(default = "default_layout")]
        layout: SourceLayout,
        #[serde(default = "default_k5")]
        k: f64,
        #[serde(default)]
        noise_level: f64,
    },
    Potential {
        profile: RadialProfile,
        k: f64,
        #[serde(default = "default_l31")]
        l_max: usize,
        #[serde(default)]
        noise_h: f64,
    },
    Layers {
        profile: RadialProfile,
        #[serde(default = "default_freqs")]
        frequencies: Vec<f64>,
        #[serde(default = "default_one")]
        radius: f64,
        #[serde(default = "default_angles")]
        n_angles: usize,
    },
}

fn benchmark_inclusions() -> Vec<Inclusion> {
    scatter_core::forward::presets::six_inclusion_phantom().items
}
fn default_layout() -> SourceLayout {
    SourceLayout::Overhead
}
fn default_k5() -> f64 {
    5.0
}
fn default_l31() -> usize {
    31
}
fn default_freqs() -> Vec<f64> {
    scatter_core::forward::presets::LAYERED_FREQUENCIES.to_vec()
}
fn default_one() -> f64 {
    1.0
}
fn default_angles() -> usize {
    64
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MakeSyntheticConfig {
    pub model: SyntheticModel,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HsdConfig {
    #[serde(default = "default_m16")]
    pub m: usize,
    #[serde(default = "default_one")]
    pub p0: f64,
    #[serde(default = "default_tmax")]
    pub t_max: usize,
    #[serde(default = "default_nmax")]
    pub n_max: usize,
    #[serde(default = "default_eps_s")]
    pub eps_s: f64,
    #[serde(default = "default_eps_i")]
    pub eps_i: f64,
    #[serde(default = "default_eps_d")]
    pub eps_d: f64,
    #[serde(default = "default_eps_hsd")]
    pub eps: f64,
}

fn default_m16() -> usize {
    16
}
fn default_tmax() -> usize {
    1000
}
fn default_nmax() -> usize {
    6
}
fn default_eps_s() -> f64 {
    0.5
}
fn default_eps_i() -> f64 {
    0.25
}
fn default_eps_d() -> f64 {
    0.1
}
fn default_eps_hsd() -> f64 {
    1e-5
}

impl Default for HsdConfig {
    fn default() -> Self {
        serde_json::from_value(Value::Object(Default::default())).unwrap()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InvertSubsurfaceConfig {
    /// Path to a dataset JSON; when absent, data are synthesized from
    /// `model`.
    #[serde(default)]
    pub data: Option<String>,
    #[serde(default)]
    pub model: Option<MakeSyntheticConfig>,
    #[serde(default)]
    pub boxdom: BoxSpec,
    #[serde(default = "default_vmax")]
    pub v_max: f64,
    #[serde(default)]
    pub hsd: HsdConfig,
}

fn default_vmax() -> f64 {
    2.0
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForwardLayersConfig {
    pub profile: RadialProfile,
    #[serde(default = "default_freqs")]
    pub frequencies: Vec<f64>,
    #[serde(default = "default_one")]
    pub radius: f64,
    #[serde(default = "default_angles")]
    pub n_angles: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MslmConfig {
    #[serde(default = "default_batch")]
    pub batch: usize,
    #[serde(default = "default_gamma_mslm")]
    pub gamma: f64,
    #[serde(default = "default_sigma")]
    pub sigma: f64,
    #[serde(default = "default_15")]
    pub max_iter: usize,
}

fn default_batch() -> usize {
    50
}
fn default_gamma_mslm() -> f64 {
    0.2
}
fn default_sigma() -> f64 {
    4.0
}
fn default_15() -> usize {
    15
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LmmConfig {
    #[serde(default = "default_eps_r")]
    pub eps_r: f64,
    #[serde(default = "default_eps_n")]
    pub eps_n: f64,
}

fn default_eps_r() -> f64 {
    0.02
}
fn default_eps_n() -> f64 {
    1e-3
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InvertLayersConfig {
    /// Target dataset path; when absent the target is synthesized from
    /// `truth`.
    #[serde(default)]
    pub target: Option<String>,
    #[serde(default)]
    pub truth: Option<RadialProfile>,
    #[serde(default = "default_freqs")]
    pub frequencies: Vec<f64>,
    #[serde(default = "default_one")]
    pub radius: f64,
    #[serde(default = "default_angles")]
    pub n_angles: usize,
    pub layers: usize,
    pub n_low: f64,
    pub n_high: f64,
    #[serde(default)]
    pub mslm: MslmConfig,
    #[serde(default)]
    pub lmm: LmmConfig,
}

impl Default for MslmConfig {
    fn default() -> Self {
        serde_json::from_value(Value::Object(Default::default())).unwrap()
    }
}

impl Default for LmmConfig {
    fn default() -> Self {
        serde_json::from_value(Value::Object(Default::default())).unwrap()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhaseShiftsConfig {
    pub profile: RadialProfile,
    pub k: f64,
    #[serde(default = "default_l31")]
    pub l_max: usize,
    #[serde(default)]
    pub noise_h: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IrrsConfig {
    #[serde(default = "default_batch5000")]
    pub batch: usize,
    #[serde(default = "default_gamma_irrs")]
    pub gamma: f64,
    #[serde(default = "default_eta")]
    pub eta: f64,
    #[serde(default = "default_beta")]
    pub beta: f64,
    #[serde(default = "default_jmax")]
    pub j_max: usize,
    #[serde(default = "default_nu")]
    pub nu: f64,
}

fn default_batch5000() -> usize {
    5000
}
fn default_gamma_irrs() -> f64 {
    0.01
}
fn default_eta() -> f64 {
    0.02
}
fn default_beta() -> f64 {
    1.10
}
fn default_jmax() -> usize {
    30
}
fn default_nu() -> f64 {
    0.16
}

impl Default for IrrsConfig {
    fn default() -> Self {
        serde_json::from_value(Value::Object(Default::default())).unwrap()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InvertPotentialConfig {
    /// Shift table path (CSV l,delta) plus its wavenumber; when absent the
    /// target is synthesized from `truth`.
    #[serde(default)]
    pub shifts: Option<String>,
    #[serde(default)]
    pub truth: Option<RadialProfile>,
    pub k: f64,
    #[serde(default = "default_l31")]
    pub n_shifts: usize,
    #[serde(default)]
    pub noise_h: f64,
    #[serde(default = "default_layers2")]
    pub layers: usize,
    #[serde(default = "default_qlow")]
    pub q_low: f64,
    #[serde(default)]
    pub q_high: f64,
    #[serde(default = "default_radius10")]
    pub radius: f64,
    #[serde(default)]
    pub irrs: IrrsConfig,
}

fn default_layers2() -> usize {
    2
}
fn default_qlow() -> f64 {
    -20.0
}
fn default_radius10() -> f64 {
    10.0
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MrcSolveConfig {
    pub shape: Shape,
    #[serde(default = "default_m720")]
    pub nodes: usize,
    pub k: f64,
    pub alpha: [f64; 3],
    #[serde(default = "default_l_expansion")]
    pub l: usize,
    #[serde(default = "default_j1")]
    pub j: usize,
    #[serde(default = "default_eps_mrc")]
    pub eps: f64,
    #[serde(default = "default_n_max_mrc")]
    pub n_max: usize,
    #[serde(default = "default_w_min")]
    pub w_min: f64,
    /// Far-field pattern is exported on this many uniform directions (2D).
    #[serde(default = "default_angles")]
    pub far_field_directions: usize,
}

fn default_m720() -> usize {
    720
}
fn default_l_expansion() -> usize {
    5
}
fn default_j1() -> usize {
    1
}
fn default_eps_mrc() -> f64 {
    1e-4
}
fn default_n_max_mrc() -> usize {
    6000
}
fn default_w_min() -> f64 {
    1e-12
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "snake_case", tag = "kind")]
pub enum AmplitudeSourceConfig {
    Circle {
        a: f64,
        center: [f64; 2],
        k: f64,
        #[serde(default)]
        robin_h: Option<f64>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SfmIdentifyConfig {
    pub source: AmplitudeSourceConfig,
    #[serde(default = "default_dirs40")]
    pub directions: usize,
    #[serde(default = "default_n_alpha")]
    pub n_alpha: usize,
    #[serde(default = "default_scan_radius")]
    pub scan_radius: f64,
    /// Also run the unknown-boundary regression per direction.
    #[serde(default = "default_true")]
    pub robin_regression: bool,
}

fn default_dirs40() -> usize {
    40
}
fn default_n_alpha() -> usize {
    32
}
fn default_scan_radius() -> f64 {
    20.0
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LsmScanConfig {
    pub source: AmplitudeSourceConfig,
    #[serde(default = "default_n128")]
    pub n: usize,
    #[serde(default = "default_variant")]
    pub variant: LsmVariant,
    pub grid: GridSpec,
}

fn default_n128() -> usize {
    128
}
fn default_variant() -> LsmVariant {
    LsmVariant::ColtonKress
}

/// Applies `--set a.b.c=value` overrides onto the raw JSON value.
pub fn apply_overrides(mut value: Value, sets: &[String]) -> Result<Value, String> {
    fn insert(node: &mut Value, parts: &[&str], leaf: Value) {
        if !node.is_object() {
            *node = Value::Object(Default::default());
        }
        let map = node.as_object_mut().unwrap();
        match parts {
            [last] => {
                map.insert(last.to_string(), leaf);
            }
            [head, rest @ ..] => {
                let child =
                    map.entry(head.to_string()).or_insert(Value::Object(Default::default()));
                insert(child, rest, leaf);
            }
            [] => {}
        }
    }
    for s in sets {
        let (path, raw) = s
            .split_once('=')
            .ok_or_else(|| format!("--set needs key=value, got {s:?}"))?;
        let parsed: Value = serde_json::from_str(raw).unwrap_or(Value::String(raw.to_string()));
        let parts: Vec<&str> = path.split('.').collect();
        insert(&mut value, &parts, parsed);
    }
    Ok(value)
}


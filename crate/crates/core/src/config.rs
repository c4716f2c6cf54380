//! Scenario configuration. Defaults reproduce the evaluation setup of the
//! reference experiments; every field can be overridden from a JSON file.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fuzzy::Stance;
use crate::interference::{IfAggregation, TABLE_IR};
use crate::utility::Metric;

/// Converts dBm to watts.
pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Fuzzy,
    Crisp,
    Random,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::Fuzzy, Scheme::Crisp, Scheme::Random];

    pub fn as_str(&self) -> &'static str {
        match self {
            Scheme::Fuzzy => "fuzzy",
            Scheme::Crisp => "crisp",
            Scheme::Random => "random",
        }
    }
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fuzzy" => Ok(Scheme::Fuzzy),
            "crisp" => Ok(Scheme::Crisp),
            "random" => Ok(Scheme::Random),
            other => Err(Error::invalid(format!("unknown scheme {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    /// Simulation box extents in metres.
    pub box_extent: [f64; 3],
    pub n_nodes: usize,
    /// Maximum cluster size.
    pub c_th: usize,
    pub p_member_dbm: f64,
    pub p_head_dbm: f64,
    /// Per-node power budget as a multiple of the node's per-channel power.
    pub power_budget_factor: f64,
    pub noise_dbm: f64,
    pub path_loss_exp: f64,
    pub gain_k: f64,
    /// Reference distance in metres.
    pub d0: f64,
    pub distance_floor: f64,
    /// Per-channel bandwidth (normalised units).
    pub bandwidth: f64,
    pub channels: usize,
    pub tau: usize,
    /// Interference range in metres indexed by channel separation.
    pub ir_table: Vec<f64>,
    pub if_aggregation: IfAggregation,
    /// Range of the normalised gain uncertainty `Δh/ĥ`.
    pub rel_uncertainty: [f64; 2],
    pub zeta: f64,
    pub eta: f64,
    pub ld_max_iters: usize,
    pub viewpoint: Stance,
    pub metric: Metric,
    pub r_th: f64,
    pub delta_r: f64,
    pub delta_t: f64,
    pub iteration_cap: usize,
    /// Slot duration in seconds.
    pub slot_duration: f64,
    /// Mobility speed range in m/s.
    pub speed_range: [f64; 2],
    /// Mobility trajectory extent range in metres.
    pub extent_range: [f64; 2],
    /// Ground control station position; centre of the box floor when absent.
    pub gcs_position: Option<[f64; 3]>,
    pub topologies: usize,
    pub trials: usize,
    pub master_seed: u64,
    pub schemes: Vec<Scheme>,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            box_extent: [200.0, 200.0, 200.0],
            n_nodes: 10,
            c_th: 6,
            p_member_dbm: -10.0,
            p_head_dbm: 10.0,
            power_budget_factor: 1.0,
            noise_dbm: -80.0,
            path_loss_exp: 2.0,
            gain_k: 1.0,
            d0: 10.0,
            distance_floor: 1.0,
            bandwidth: 1.0,
            channels: 11,
            tau: 5,
            ir_table: TABLE_IR.to_vec(),
            if_aggregation: IfAggregation::Sum,
            rel_uncertainty: [1e-3, 1.0],
            zeta: 0.5,
            eta: 0.8,
            ld_max_iters: 10_000,
            viewpoint: Stance::Neutral,
            metric: Metric::Throughput,
            r_th: 0.5,
            delta_r: 1e-3,
            delta_t: 1e-3,
            iteration_cap: 30,
            slot_duration: 0.1,
            speed_range: [5.0, 15.0],
            extent_range: [20.0, 60.0],
            gcs_position: None,
            topologies: 50,
            trials: 100,
            master_seed: 0,
            schemes: Scheme::ALL.to_vec(),
        }
    }
}

impl ScenarioConfig {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let cfg: ScenarioConfig = serde_json::from_str(s)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        ScenarioConfig::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.n_nodes == 0 {
            return bad("n_nodes must be at least 1".into());
        }
        if self.c_th == 0 {
            return bad("c_th must be at least 1".into());
        }
        if self.box_extent.iter().any(|e| !(*e > 0.0)) {
            return bad(format!("box extents {:?} must be positive", self.box_extent));
        }
        if self.channels == 0 || self.tau == 0 {
            return bad("channels and tau must be positive".into());
        }
        if self.ir_table.len() != self.tau {
            return bad(format!(
                "ir_table has {} entries, expected one per separation below tau = {}",
                self.ir_table.len(),
                self.tau
            ));
        }
        if self.ir_table.windows(2).any(|w| w[1] >= w[0]) || self.ir_table.iter().any(|r| !(*r > 0.0)) {
            return bad("ir_table must be positive and strictly decreasing".into());
        }
        let [lo, hi] = self.rel_uncertainty;
        if !(0.0 <= lo && lo <= hi && hi <= 1.0) {
            return bad(format!(
                "rel_uncertainty {:?} must satisfy 0 <= lo <= hi <= 1",
                self.rel_uncertainty
            ));
        }
        if !(0.0..=1.0).contains(&self.zeta) || !(self.eta > 0.0) || self.ld_max_iters == 0 {
            return bad("zeta must lie in [0, 1], eta must be positive, ld_max_iters >= 1".into());
        }
        if !(self.d0 > 0.0) || !(self.path_loss_exp > 0.0) || !(self.gain_k > 0.0) || !(self.distance_floor > 0.0) {
            return bad("gain model constants must be positive".into());
        }
        if !(self.bandwidth > 0.0) || !(self.power_budget_factor > 0.0) {
            return bad("bandwidth and power_budget_factor must be positive".into());
        }
        if self.r_th < 0.0 || self.delta_r < 0.0 || self.delta_t < 0.0 {
            return bad("QoS thresholds must be non-negative".into());
        }
        if self.iteration_cap == 0 || !(self.slot_duration > 0.0) {
            return bad("iteration_cap and slot_duration must be positive".into());
        }
        if !(self.speed_range[0] >= 0.0 && self.speed_range[0] <= self.speed_range[1])
            || !(self.extent_range[0] > 0.0 && self.extent_range[0] <= self.extent_range[1])
        {
            return bad("speed_range / extent_range must be ordered and positive".into());
        }
        if self.schemes.is_empty() {
            return bad("at least one scheme is required".into());
        }
        Ok(())
    }

    pub fn p_member_w(&self) -> f64 {
        dbm_to_watts(self.p_member_dbm)
    }

    pub fn p_head_w(&self) -> f64 {
        dbm_to_watts(self.p_head_dbm)
    }

    pub fn noise_w(&self) -> f64 {
        dbm_to_watts(self.noise_dbm)
    }

    pub fn gcs(&self) -> [f64; 3] {
        self.gcs_position
            .unwrap_or([0.5 * self.box_extent[0], 0.5 * self.box_extent[1], 0.0])
    }
}

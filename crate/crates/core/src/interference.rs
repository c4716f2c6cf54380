//! Partially overlapping channels: separation-dependent interference ranges,
//! interference factors, orthogonal sets and SINR.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gain::GainModel;
use crate::network::{distance, NetworkState, Position};
use crate::plan::ChannelPlan;

/// Interference range in metres for channel separations 0..=4.
pub const TABLE_IR: [f64; 5] = [132.6, 90.8, 75.9, 46.9, 32.1];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChannelSet {
    pub m_total: usize,
    pub tau: usize,
}

impl Default for ChannelSet {
    fn default() -> Self {
        ChannelSet { m_total: 11, tau: 5 }
    }
}

impl ChannelSet {
    pub fn new(m_total: usize, tau: usize) -> Result<Self> {
        if m_total == 0 || tau == 0 {
            return Err(Error::invalid("channel count and tau must be positive"));
        }
        Ok(ChannelSet { m_total, tau })
    }

    /// Size of the largest mutually orthogonal channel set.
    pub fn o_max(&self) -> usize {
        (self.m_total - 1) / self.tau + 1
    }

    pub fn ids(&self) -> std::ops::RangeInclusive<usize> {
        1..=self.m_total
    }

    pub fn contains(&self, channel: usize) -> bool {
        (1..=self.m_total).contains(&channel)
    }

    pub fn orthogonal(&self, a: usize, b: usize) -> bool {
        a.abs_diff(b) >= self.tau
    }

    /// Channels orthogonal to `m`.
    pub fn orthogonal_set(&self, m: usize) -> Vec<usize> {
        self.ids().filter(|&j| self.orthogonal(m, j)).collect()
    }

    /// Lowest-index maximal orthogonal set `{1, 1+τ, 1+2τ, ...}`.
    pub fn max_orthogonal_set(&self) -> Vec<usize> {
        (0..self.o_max()).map(|i| 1 + i * self.tau).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IrTable {
    ranges: Vec<f64>,
}

impl Default for IrTable {
    fn default() -> Self {
        IrTable { ranges: TABLE_IR.to_vec() }
    }
}

impl IrTable {
    pub fn new(ranges: Vec<f64>) -> Result<Self> {
        if ranges.is_empty() || ranges.iter().any(|r| !(*r > 0.0)) || ranges.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::invalid("interference ranges must be positive and strictly decreasing"));
        }
        Ok(IrTable { ranges })
    }

    pub fn ranges(&self) -> &[f64] {
        &self.ranges
    }

    pub fn ir(&self, delta: usize) -> f64 {
        self.ranges.get(delta).copied().unwrap_or(0.0)
    }

    /// Zero when orthogonal or out of range, `IR/d` in range, infinite when co-located.
    pub fn interference_factor(&self, delta: usize, d: f64) -> f64 {
        let range = self.ir(delta);
        if range == 0.0 || d > range {
            0.0
        } else if d == 0.0 {
            f64::INFINITY
        } else {
            range / d
        }
    }
}

/// Interference range from the default table.
pub fn ir(delta: usize) -> f64 {
    TABLE_IR.get(delta).copied().unwrap_or(0.0)
}

/// Interference factor from the default table.
pub fn interference_factor(delta: usize, d: f64) -> f64 {
    IrTable::default().interference_factor(delta, d)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IfAggregation {
    #[default]
    Sum,
    Max,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadioParams {
    pub noise_w: f64,
    pub bandwidth: f64,
    pub channels: ChannelSet,
    pub ir: IrTable,
    pub if_mode: IfAggregation,
    pub gain: GainModel,
}

/// Interference seen by one node on one channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelLoad {
    /// Received interference power in watts.
    pub power: f64,
    /// Aggregated interference factor.
    pub factor: f64,
}

/// Immutable radio snapshot: geometry, link gains and per-node constants.
#[derive(Debug, Clone)]
pub struct Radio {
    pub params: RadioParams,
    n: usize,
    power: Vec<f64>,
    weight: Vec<f64>,
    dist: Vec<f64>,
    /// `(D0/d)^ς` per node pair, one matrix for flat models or one per channel.
    attenuation: Vec<Vec<f64>>,
    signal: Vec<f64>,
}

impl Radio {
    /// Builds a snapshot from node positions and a per-(node, channel) signal gain table.
    pub fn new(params: RadioParams, net: &NetworkState, positions: &[Position], signal: Vec<f64>) -> Result<Self> {
        let n = net.len();
        let m = params.channels.m_total;
        if positions.len() != n || signal.len() != n * m {
            return Err(Error::invalid("radio snapshot dimensions do not match the network"));
        }
        if params.gain.channels() != m {
            return Err(Error::invalid("gain model and channel set disagree on the channel count"));
        }
        let mut dist = vec![0.0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let d = distance(&positions[i], &positions[j]);
                dist[i * n + j] = d;
                dist[j * n + i] = d;
            }
        }
        let layers = if params.gain.is_channel_flat() { 1 } else { m };
        let attenuation = (0..layers)
            .map(|l| dist.iter().map(|&d| params.gain.attenuation(l + 1, d)).collect())
            .collect();
        Ok(Radio {
            n,
            power: net.nodes.iter().map(|x| x.tx_power_w).collect(),
            weight: net.nodes.iter().map(|x| x.connectivity() / x.hops() as f64).collect(),
            dist,
            attenuation,
            signal,
            params,
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn distance(&self, a: usize, b: usize) -> f64 {
        self.dist[a * self.n + b]
    }

    pub fn power(&self, node: usize) -> f64 {
        self.power[node]
    }

    /// `β/κ` of the node.
    pub fn weight(&self, node: usize) -> f64 {
        self.weight[node]
    }

    pub fn signal(&self, node: usize, channel: usize) -> f64 {
        self.signal[node * self.params.channels.m_total + channel - 1]
    }

    pub fn signal_table(&self) -> &[f64] {
        &self.signal
    }

    /// Gain from transmitter `from` to victim `to` on `channel`.
    pub fn cross_gain(&self, from: usize, to: usize, channel: usize) -> f64 {
        let layer = if self.attenuation.len() == 1 { 0 } else { channel - 1 };
        self.params.gain.k * self.params.gain.epsilon(from, channel) * self.attenuation[layer][from * self.n + to]
    }

    /// Interference power and factor at `node` on `channel` from every other
    /// active transmitter in range.
    pub fn load(&self, node: usize, channel: usize, plan: &ChannelPlan) -> ChannelLoad {
        let table = &self.params.ir;
        let mut power = 0.0;
        let mut factor: f64 = 0.0;
        for i in 0..self.n {
            if i == node || !plan.active[i] {
                continue;
            }
            let d = self.dist[node * self.n + i];
            for &c in &plan.channels[i] {
                let range = table.ir(c.abs_diff(channel));
                if range == 0.0 || d > range {
                    continue;
                }
                power += self.power[i] * self.cross_gain(i, node, c);
                let f = table.interference_factor(c.abs_diff(channel), d);
                factor = match self.params.if_mode {
                    IfAggregation::Sum => factor + f,
                    IfAggregation::Max => factor.max(f),
                };
            }
        }
        ChannelLoad { power, factor }
    }

    /// SINR for a given signal gain and interference power.
    pub fn sinr_for(&self, node: usize, gain: f64, interference: f64) -> f64 {
        self.power[node] * gain / (interference + self.params.noise_w)
    }

    pub fn sinr(&self, node: usize, channel: usize, plan: &ChannelPlan) -> f64 {
        let load = self.load(node, channel, plan);
        self.sinr_for(node, self.signal(node, channel), load.power)
    }

    pub fn aggregate_if(&self, node: usize, channel: usize, plan: &ChannelPlan) -> f64 {
        self.load(node, channel, plan).factor
    }
}

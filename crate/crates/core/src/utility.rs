//! Rate, generalized throughput, global utility, fuzzy payoffs and the
//! constraint report.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fuzzy::Tfn;
use crate::interference::{ChannelLoad, Radio};
use crate::network::NetworkState;
use crate::plan::ChannelPlan;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Rate,
    #[default]
    Throughput,
}

impl std::str::FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rate" => Ok(Metric::Rate),
            "throughput" => Ok(Metric::Throughput),
            other => Err(Error::invalid(format!("unknown metric {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QosSpec {
    /// Minimum achievable rate per node.
    pub r_th: f64,
    pub delta_r: f64,
    pub delta_t: f64,
}

impl Default for QosSpec {
    fn default() -> Self {
        QosSpec {
            r_th: 0.5,
            delta_r: 1e-3,
            delta_t: 1e-3,
        }
    }
}

impl QosSpec {
    /// Stopping threshold for the chosen metric.
    pub fn delta(&self, metric: Metric) -> f64 {
        match metric {
            Metric::Rate => self.delta_r,
            Metric::Throughput => self.delta_t,
        }
    }
}

/// Rate and generalized throughput of one node.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct NodeMetrics {
    pub rate: f64,
    pub throughput: f64,
}

impl NodeMetrics {
    pub fn get(&self, metric: Metric) -> f64 {
        match metric {
            Metric::Rate => self.rate,
            Metric::Throughput => self.throughput,
        }
    }
}

fn link_rate(radio: &Radio, node: usize, gain: f64, load: &ChannelLoad) -> f64 {
    radio.params.bandwidth * (1.0 + radio.sinr_for(node, gain, load.power)).log2()
}

/// Metrics for `node` when transmitting on `channels` with signal gains
/// supplied per channel; interference comes from `plan`'s other nodes.
fn metrics_with<G: Fn(usize) -> f64>(radio: &Radio, node: usize, channels: &[usize], plan: &ChannelPlan, gain: G) -> NodeMetrics {
    let mut out = NodeMetrics::default();
    for &c in channels {
        let load = radio.load(node, c, plan);
        let r = link_rate(radio, node, gain(c), &load);
        out.rate += r;
        out.throughput += r / (load.factor + 1.0);
    }
    out.throughput *= radio.weight(node);
    out
}

/// Both metrics of `node` under `plan`, zero when the node is inactive.
pub fn node_metrics(radio: &Radio, node: usize, plan: &ChannelPlan) -> NodeMetrics {
    if !plan.active[node] {
        return NodeMetrics::default();
    }
    metrics_with(radio, node, &plan.channels[node], plan, |c| radio.signal(node, c))
}

/// Metrics of `node` as if it held `channels` and were active, leaving `plan` untouched.
pub fn metrics_if(radio: &Radio, node: usize, channels: &[usize], plan: &ChannelPlan) -> NodeMetrics {
    metrics_with(radio, node, channels, plan, |c| radio.signal(node, c))
}

pub fn achievable_rate(radio: &Radio, node: usize, plan: &ChannelPlan) -> f64 {
    node_metrics(radio, node, plan).rate
}

pub fn generalized_throughput(radio: &Radio, node: usize, plan: &ChannelPlan) -> f64 {
    node_metrics(radio, node, plan).throughput
}

pub fn global_utility(radio: &Radio, plan: &ChannelPlan, metric: Metric) -> f64 {
    (0..radio.len()).map(|n| node_metrics(radio, n, plan).get(metric)).sum()
}

/// Payoff of `node` holding `channels` as a triangular fuzzy number whose
/// spread comes from evaluating at `ĥ ∓ Δh` with interference held at the
/// snapshot values. `bounds` is laid out like the radio's signal table.
pub fn fuzzy_payoff(radio: &Radio, node: usize, channels: &[usize], plan: &ChannelPlan, bounds: &[f64], metric: Metric) -> Result<Tfn> {
    let m = radio.params.channels.m_total;
    if bounds.len() != radio.len() * m {
        return Err(Error::invalid("gain bound table has the wrong size"));
    }
    let bound = |c: usize| bounds[node * m + c - 1];
    let mut low = NodeMetrics::default();
    let mut mid = NodeMetrics::default();
    let mut high = NodeMetrics::default();
    for &c in channels {
        let load = radio.load(node, c, plan);
        let h = radio.signal(node, c);
        let scale = 1.0 / (load.factor + 1.0);
        for (acc, g) in [(&mut low, (h - bound(c)).max(0.0)), (&mut mid, h), (&mut high, h + bound(c))] {
            let r = link_rate(radio, node, g, &load);
            acc.rate += r;
            acc.throughput += r * scale;
        }
    }
    let w = radio.weight(node);
    let pick = |x: NodeMetrics| match metric {
        Metric::Rate => x.rate,
        Metric::Throughput => x.throughput * w,
    };
    let (lo, c, hi) = (pick(low), pick(mid), pick(high));
    Tfn::new(c, (c - lo).max(0.0), (hi - c).max(0.0))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NodeConstraints {
    pub node: usize,
    pub c1_power: bool,
    /// `P_max − α·P` in watts.
    pub c1_margin: f64,
    pub c2_qos: bool,
    /// `R − R_th`.
    pub c2_margin: f64,
    pub c4_orthogonal: bool,
    /// Smallest within-node separation minus `τ`; absent with fewer than two channels.
    pub c4_margin: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterConstraint {
    pub head: usize,
    pub c3_size: bool,
    /// `C_th − |C_i|`.
    pub c3_margin: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstraintReport {
    pub nodes: Vec<NodeConstraints>,
    pub clusters: Vec<ClusterConstraint>,
}

impl ConstraintReport {
    pub fn all_satisfied(&self) -> bool {
        self.nodes.iter().all(|n| n.c1_power && n.c2_qos && n.c4_orthogonal) && self.clusters.iter().all(|c| c.c3_size)
    }

    pub fn c4_violations(&self) -> usize {
        self.nodes.iter().filter(|n| !n.c4_orthogonal).count()
    }
}

pub fn check_constraints(plan: &ChannelPlan, net: &NetworkState, radio: &Radio, qos: &QosSpec, c_th: usize) -> ConstraintReport {
    let cs = &radio.params.channels;
    let nodes = net
        .nodes
        .iter()
        .map(|node| {
            let n = node.id;
            let chans = &plan.channels[n];
            let c1_margin = node.power_budget_w - chans.len() as f64 * node.tx_power_w;
            let rate = achievable_rate(radio, n, plan);
            let mut min_sep: Option<usize> = None;
            for (i, &a) in chans.iter().enumerate() {
                for &b in &chans[i + 1..] {
                    let s = a.abs_diff(b);
                    min_sep = Some(min_sep.map_or(s, |m| m.min(s)));
                }
            }
            NodeConstraints {
                node: n,
                // small relative slack so α·P = P_max is not rejected by rounding
                c1_power: c1_margin >= -1e-12 * node.power_budget_w,
                c1_margin,
                c2_qos: rate >= qos.r_th,
                c2_margin: rate - qos.r_th,
                c4_orthogonal: plan.node_orthogonal(n, cs),
                c4_margin: min_sep.map(|s| s as i64 - cs.tau as i64),
            }
        })
        .collect();
    let clusters = net
        .clusters
        .iter()
        .map(|c| ClusterConstraint {
            head: c.head,
            c3_size: c.members.len() <= c_th,
            c3_margin: c_th as i64 - c.members.len() as i64,
        })
        .collect();
    ConstraintReport { nodes, clusters }
}

//! Independent reference implementations shared by the integration tests.
//! Nothing here calls into the library's rate, interference or quadrature
//! code; inputs are plain numbers copied out of the library structures.

#![allow(dead_code)]

use uavpoc::network::NetworkState;
use uavpoc::plan::ChannelPlan;

/// Interference ranges in metres for channel separations 0..=4.
pub const IR: [f64; 5] = [132.6, 90.8, 75.9, 46.9, 32.1];

pub fn if_oracle(delta: usize, d: f64) -> f64 {
    if delta >= IR.len() || d > IR[delta] {
        0.0
    } else if d == 0.0 {
        f64::INFINITY
    } else {
        IR[delta] / d
    }
}

/// `P(X < Y)` for independent `X ~ U[a1, b1]`, `Y ~ U[a2, b2]`.
pub fn rect_less(a1: f64, b1: f64, a2: f64, b2: f64) -> f64 {
    let len = b1 - a1;
    // ∫_{-∞}^{t} clamp(s - a1, 0, len) ds
    let h = |t: f64| {
        if t <= a1 {
            0.0
        } else if t <= b1 {
            0.5 * (t - a1) * (t - a1)
        } else {
            0.5 * len * len + len * (t - b1)
        }
    };
    (h(b2) - h(a2)) / (len * (b2 - a2))
}

/// All non-empty channel sets on `1..=m` whose members are pairwise at least `tau` apart.
pub fn valid_sets(m: usize, tau: usize, max_len: usize) -> Vec<Vec<usize>> {
    fn grow(start: usize, m: usize, tau: usize, max_len: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        for c in start..=m {
            cur.push(c);
            out.push(cur.clone());
            if cur.len() < max_len {
                grow(c + tau, m, tau, max_len, cur, out);
            }
            cur.pop();
        }
    }
    let mut out = Vec::new();
    grow(1, m, tau, max_len, &mut Vec::new(), &mut out);
    out
}

/// Plain-number copy of one radio snapshot.
pub struct OracleRadio {
    pub positions: Vec<[f64; 3]>,
    pub power: Vec<f64>,
    /// Connectivity over hop count.
    pub weight: Vec<f64>,
    /// Row-major `node * m + channel - 1`.
    pub signal: Vec<f64>,
    pub m: usize,
    pub noise: f64,
    pub bandwidth: f64,
    pub k: f64,
    pub d0: f64,
    pub floor: f64,
    pub exponent: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Metrics {
    pub rate: f64,
    pub throughput: f64,
}

impl OracleRadio {
    pub fn from_net(net: &NetworkState, signal: Vec<f64>, m: usize, noise: f64, bandwidth: f64) -> Self {
        OracleRadio {
            positions: net.nodes.iter().map(|n| n.position).collect(),
            power: net.nodes.iter().map(|n| n.tx_power_w).collect(),
            weight: net.nodes.iter().map(|n| if n.is_cluster_head { 1.0 } else { 0.5 }).collect(),
            signal,
            m,
            noise,
            bandwidth,
            k: 1.0,
            d0: 10.0,
            floor: 1.0,
            exponent: 2.0,
        }
    }

    fn dist(&self, a: usize, b: usize) -> f64 {
        let (p, q) = (self.positions[a], self.positions[b]);
        ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2) + (p[2] - q[2]).powi(2)).sqrt()
    }

    /// Interference power and summed factor at `node` on `channel`.
    pub fn load(&self, node: usize, channel: usize, plan: &ChannelPlan) -> (f64, f64) {
        let (mut power, mut factor) = (0.0, 0.0);
        for i in 0..self.positions.len() {
            if i == node || !plan.active[i] {
                continue;
            }
            let d = self.dist(node, i);
            for &c in &plan.channels[i] {
                let f = if_oracle(c.abs_diff(channel), d);
                if f > 0.0 {
                    power += self.power[i] * self.k * (self.d0 / d.max(self.floor)).powf(self.exponent);
                    factor += f;
                }
            }
        }
        (power, factor)
    }

    /// Metrics of `node` on `channels` with signal gain `gain(c)`, interference from `plan`.
    pub fn metrics_with(&self, node: usize, channels: &[usize], plan: &ChannelPlan, gain: impl Fn(usize) -> f64) -> Metrics {
        let mut out = Metrics::default();
        for &c in channels {
            let (i, f) = self.load(node, c, plan);
            let r = self.bandwidth * (1.0 + self.power[node] * gain(c) / (i + self.noise)).log2();
            out.rate += r;
            out.throughput += r / (1.0 + f);
        }
        out.throughput *= self.weight[node];
        out
    }

    pub fn metrics(&self, node: usize, plan: &ChannelPlan) -> Metrics {
        if !plan.active[node] {
            return Metrics::default();
        }
        self.metrics_with(node, &plan.channels[node], plan, |c| self.signal[node * self.m + c - 1])
    }

    pub fn global_throughput(&self, plan: &ChannelPlan) -> f64 {
        (0..self.positions.len()).map(|n| self.metrics(n, plan).throughput).sum()
    }

    pub fn global_rate(&self, plan: &ChannelPlan) -> f64 {
        (0..self.positions.len()).map(|n| self.metrics(n, plan).rate).sum()
    }
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
}

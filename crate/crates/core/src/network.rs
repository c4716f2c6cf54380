//! Clustered mesh network: node state, topology generation and cluster formation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::ScenarioConfig;
use crate::error::{Error, Result};

pub type Position = [f64; 3];

pub fn distance(a: &Position, b: &Position) -> f64 {
    let dx = a[0] - b[0];
    let dy = a[1] - b[1];
    let dz = a[2] - b[2];
    (dx * dx + dy * dy + dz * dz).sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UavNode {
    pub id: usize,
    pub position: Position,
    pub is_cluster_head: bool,
    /// Per-channel transmit power in watts.
    pub tx_power_w: f64,
    /// Total power budget in watts.
    pub power_budget_w: f64,
    /// Head of the node's cluster; heads reference themselves.
    pub cluster_head: Option<usize>,
}

impl UavNode {
    /// Hop count to the ground station.
    pub fn hops(&self) -> u32 {
        if self.is_cluster_head {
            1
        } else {
            2
        }
    }

    /// Connectivity indicator: 1 when the node reaches the ground station through a head.
    pub fn connectivity(&self) -> f64 {
        if self.cluster_head.is_some() {
            1.0
        } else {
            0.0
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cluster {
    pub head: usize,
    /// All node ids in the cluster, head included, ascending.
    pub members: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkState {
    pub nodes: Vec<UavNode>,
    pub clusters: Vec<Cluster>,
    pub gcs_position: Position,
    pub box_extent: [f64; 3],
    pub slot: usize,
}

/// Head election and cluster assignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clustering {
    /// Head node id of each cluster.
    pub heads: Vec<usize>,
    /// Cluster index of each node.
    pub assignment: Vec<usize>,
}

impl Clustering {
    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.heads.len()];
        for &c in &self.assignment {
            sizes[c] += 1;
        }
        sizes
    }
}

/// Farthest-point head seeding followed by capacity-constrained nearest-head assignment.
pub fn form_clusters(positions: &[Position], c_th: usize) -> Result<Clustering> {
    if positions.is_empty() {
        return Err(Error::Empty("positions"));
    }
    if c_th == 0 {
        return Err(Error::invalid("cluster size cap must be at least 1"));
    }
    let n = positions.len();
    let k = n.div_ceil(c_th);

    let mut heads = vec![0usize];
    let mut nearest: Vec<f64> = positions.iter().map(|p| distance(p, &positions[0])).collect();
    let mut is_head = vec![false; n];
    is_head[0] = true;
    while heads.len() < k {
        let mut best: Option<usize> = None;
        for i in 0..n {
            if is_head[i] {
                continue;
            }
            if best.is_none_or(|b| nearest[i] > nearest[b]) {
                best = Some(i);
            }
        }
        let h = best.expect("fewer heads than nodes");
        heads.push(h);
        is_head[h] = true;
        for i in 0..n {
            nearest[i] = nearest[i].min(distance(&positions[i], &positions[h]));
        }
    }

    let mut assignment = vec![usize::MAX; n];
    let mut load = vec![1usize; k];
    for (c, &h) in heads.iter().enumerate() {
        assignment[h] = c;
    }
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity((n - k) * k);
    for i in (0..n).filter(|&i| !is_head[i]) {
        for (c, &h) in heads.iter().enumerate() {
            pairs.push((distance(&positions[i], &positions[h]), i, c));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    for (_, i, c) in pairs {
        if assignment[i] == usize::MAX && load[c] < c_th {
            assignment[i] = c;
            load[c] += 1;
        }
    }
    debug_assert!(assignment.iter().all(|&c| c != usize::MAX));
    Ok(Clustering { heads, assignment })
}

impl NetworkState {
    /// Builds the network from explicit positions.
    pub fn from_positions(positions: Vec<Position>, cfg: &ScenarioConfig) -> Result<Self> {
        let clustering = form_clusters(&positions, cfg.c_th)?;
        let (p_head, p_member) = (cfg.p_head_w(), cfg.p_member_w());
        let nodes = positions
            .into_iter()
            .enumerate()
            .map(|(id, position)| {
                let cluster = clustering.assignment[id];
                let head = clustering.heads[cluster];
                let is_cluster_head = head == id;
                let tx_power_w = if is_cluster_head { p_head } else { p_member };
                UavNode {
                    id,
                    position,
                    is_cluster_head,
                    tx_power_w,
                    power_budget_w: cfg.power_budget_factor * tx_power_w,
                    cluster_head: Some(head),
                }
            })
            .collect();
        let clusters = clustering
            .heads
            .iter()
            .enumerate()
            .map(|(c, &head)| Cluster {
                head,
                members: (0..clustering.assignment.len())
                    .filter(|&i| clustering.assignment[i] == c)
                    .collect(),
            })
            .collect();
        Ok(NetworkState {
            nodes,
            clusters,
            gcs_position: cfg.gcs(),
            box_extent: cfg.box_extent,
            slot: 0,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn positions(&self) -> Vec<Position> {
        self.nodes.iter().map(|n| n.position).collect()
    }

    /// Where `node` delivers its traffic: its head, or the ground station for heads.
    pub fn receiver_position(&self, node: usize) -> Position {
        let n = &self.nodes[node];
        match n.cluster_head {
            Some(h) if h != node => self.nodes[h].position,
            _ => self.gcs_position,
        }
    }

    /// Length of the node's own link.
    pub fn link_distance(&self, node: usize) -> f64 {
        distance(&self.nodes[node].position, &self.receiver_position(node))
    }

    /// Checks the partition, single-head and size-cap invariants.
    pub fn validate(&self, c_th: usize) -> Result<()> {
        let mut seen = vec![false; self.nodes.len()];
        for c in &self.clusters {
            if c.members.len() > c_th {
                return Err(Error::invalid(format!(
                    "cluster of head {} has {} > {c_th} nodes",
                    c.head,
                    c.members.len()
                )));
            }
            let heads: Vec<_> = c.members.iter().filter(|&&i| self.nodes[i].is_cluster_head).collect();
            if heads != [&c.head] {
                return Err(Error::invalid(format!("cluster of head {} does not have exactly one head", c.head)));
            }
            for &i in &c.members {
                if std::mem::replace(&mut seen[i], true) {
                    return Err(Error::invalid(format!("node {i} appears in two clusters")));
                }
                if self.nodes[i].cluster_head != Some(c.head) {
                    return Err(Error::invalid(format!("node {i} points at the wrong head")));
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::invalid("clusters do not cover every node"));
        }
        Ok(())
    }

    /// Per-node JSON-friendly snapshot rows.
    pub fn snapshot(&self) -> Vec<NodeSnapshot> {
        self.nodes
            .iter()
            .map(|n| NodeSnapshot {
                id: n.id,
                position: n.position,
                role: if n.is_cluster_head { "head" } else { "member" },
                cluster_head: n.cluster_head,
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NodeSnapshot {
    pub id: usize,
    pub position: Position,
    pub role: &'static str,
    pub cluster_head: Option<usize>,
}

/// Uniform placement of `cfg.n_nodes` nodes in the box, then clustering.
pub fn generate_topology(cfg: &ScenarioConfig, seed: u64) -> Result<NetworkState> {
    if cfg.n_nodes == 0 {
        return Err(Error::invalid("n_nodes must be at least 1"));
    }
    if cfg.box_extent.iter().any(|e| !(*e > 0.0)) {
        return Err(Error::invalid("box extents must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let positions = (0..cfg.n_nodes)
        .map(|_| {
            let mut p = [0.0; 3];
            for (x, e) in p.iter_mut().zip(cfg.box_extent) {
                *x = rng.random_range(0.0..e);
            }
            p
        })
        .collect();
    NetworkState::from_positions(positions, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ten_nodes_respect_cluster_cap() {
        let cfg = ScenarioConfig::default();
        let net = generate_topology(&cfg, 11).unwrap();
        assert_eq!(net.len(), 10);
        assert!(net.clusters.len() >= 2);
        net.validate(6).unwrap();
        for n in &net.nodes {
            let expected = if n.is_cluster_head { cfg.p_head_w() } else { cfg.p_member_w() };
            assert_eq!(n.tx_power_w, expected);
        }
    }

    #[test]
    fn same_seed_same_topology() {
        let cfg = ScenarioConfig::default();
        assert_eq!(generate_topology(&cfg, 5).unwrap(), generate_topology(&cfg, 5).unwrap());
        assert_ne!(generate_topology(&cfg, 5).unwrap(), generate_topology(&cfg, 6).unwrap());
    }

    #[test]
    fn small_network_is_one_cluster() {
        let pts = vec![[0.0, 0.0, 0.0], [5.0, 1.0, 0.0], [3.0, 3.0, 3.0]];
        let c = form_clusters(&pts, 6).unwrap();
        assert_eq!(c.heads, vec![0]);
        assert_eq!(c.assignment, vec![0, 0, 0]);
    }

    #[test]
    fn coincident_points_split_by_capacity() {
        let pts = vec![[1.0, 1.0, 1.0]; 7];
        let c = form_clusters(&pts, 6).unwrap();
        let mut sizes = c.sizes();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 6]);
    }

    #[test]
    fn separated_groups_become_clusters() {
        let pts = vec![
            [0.0, 0.0, 0.0],
            [1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [100.0, 100.0, 0.0],
            [101.0, 100.0, 0.0],
            [100.0, 101.0, 0.0],
            [101.0, 101.0, 0.0],
        ];
        let c = form_clusters(&pts, 4).unwrap();
        assert_eq!(c.heads.len(), 2);
        assert!(c.assignment[..3].iter().all(|&a| a == c.assignment[0]));
        assert!(c.assignment[3..].iter().all(|&a| a == c.assignment[3]));
        assert_ne!(c.assignment[0], c.assignment[3]);
    }

    #[test]
    fn bad_inputs() {
        assert!(form_clusters(&[], 3).is_err());
        assert!(form_clusters(&[[0.0; 3]], 0).is_err());
    }

    #[test]
    fn receivers() {
        let cfg = ScenarioConfig::default();
        let net = generate_topology(&cfg, 2).unwrap();
        for n in &net.nodes {
            let rx = net.receiver_position(n.id);
            if n.is_cluster_head {
                assert_eq!(rx, net.gcs_position);
                assert_eq!(n.hops(), 1);
            } else {
                assert_eq!(rx, net.nodes[n.cluster_head.unwrap()].position);
                assert_eq!(n.hops(), 2);
            }
        }
    }
}

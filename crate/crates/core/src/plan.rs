//! Strategy profile: the channels each node occupies and whether it transmits.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interference::ChannelSet;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChannelPlan {
    /// Channel ids (1-based) per node.
    pub channels: Vec<Vec<usize>>,
    /// Activity flag per node.
    pub active: Vec<bool>,
}

impl ChannelPlan {
    /// Every node active with no channels.
    pub fn empty(nodes: usize) -> Self {
        ChannelPlan {
            channels: vec![Vec::new(); nodes],
            active: vec![true; nodes],
        }
    }

    pub fn len(&self) -> usize {
        self.channels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.channels.is_empty()
    }

    pub fn alpha(&self, node: usize) -> usize {
        self.channels[node].len()
    }

    /// Whether the node is transmitting on at least one channel.
    pub fn transmits(&self, node: usize) -> bool {
        self.active[node] && !self.channels[node].is_empty()
    }

    pub fn set(&mut self, node: usize, channels: Vec<usize>, active: bool) {
        self.channels[node] = channels;
        self.active[node] = active;
    }

    /// True when all channels of `node` are valid ids and pairwise orthogonal.
    pub fn node_orthogonal(&self, node: usize, cs: &ChannelSet) -> bool {
        is_orthogonal_set(&self.channels[node], cs)
    }

    pub fn validate(&self, cs: &ChannelSet) -> Result<()> {
        if self.channels.len() != self.active.len() {
            return Err(Error::invalid("channel and activity vectors differ in length"));
        }
        for n in 0..self.len() {
            if !self.node_orthogonal(n, cs) {
                return Err(Error::invalid(format!(
                    "node {n} holds non-orthogonal or invalid channels {:?}",
                    self.channels[n]
                )));
            }
        }
        Ok(())
    }
}

/// Valid ids, no duplicates, every pair separated by at least `tau`.
pub fn is_orthogonal_set(channels: &[usize], cs: &ChannelSet) -> bool {
    channels.iter().all(|&c| cs.contains(c))
        && channels
            .iter()
            .enumerate()
            .all(|(i, &a)| channels[i + 1..].iter().all(|&b| cs.orthogonal(a, b)))
}

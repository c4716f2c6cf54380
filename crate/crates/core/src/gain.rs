//! Path-loss channel gains and bounded-error gain estimates.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fuzzy::Tfn;

/// Smallest admissible `1 + δ` when perturbing a gain, keeps estimates finite.
const MIN_PERTURBATION: f64 = 1e-3;

/// Power-law gain `h = K·ε·(D0/D)^ς`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GainModel {
    pub k: f64,
    pub d0: f64,
    /// Path-loss exponent per channel (index `m - 1`).
    pub path_loss_exp: Vec<f64>,
    /// Per-(node, channel) scaling `ε`, row-major `node * M + (m - 1)`. Empty means 1 everywhere.
    pub scaling: Vec<f64>,
    pub distance_floor: f64,
}

impl GainModel {
    pub fn uniform(channels: usize, k: f64, d0: f64, exponent: f64, distance_floor: f64) -> Result<Self> {
        let model = GainModel {
            k,
            d0,
            path_loss_exp: vec![exponent; channels],
            scaling: Vec::new(),
            distance_floor,
        };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.k > 0.0 && self.d0 > 0.0 && self.distance_floor > 0.0) {
            return Err(Error::invalid("gain model requires K, D0 and the distance floor to be positive"));
        }
        if self.path_loss_exp.is_empty() || self.path_loss_exp.iter().any(|e| !(*e > 0.0)) {
            return Err(Error::invalid("path-loss exponents must be positive"));
        }
        if self.scaling.iter().any(|e| !(*e >= 0.0)) {
            return Err(Error::invalid("scaling factors must be non-negative"));
        }
        Ok(())
    }

    pub fn channels(&self) -> usize {
        self.path_loss_exp.len()
    }

    /// True when every channel shares one exponent and no per-node scaling is set.
    pub fn is_channel_flat(&self) -> bool {
        self.scaling.is_empty() && self.path_loss_exp.windows(2).all(|w| w[0] == w[1])
    }

    pub fn epsilon(&self, node: usize, channel: usize) -> f64 {
        if self.scaling.is_empty() {
            1.0
        } else {
            self.scaling[node * self.channels() + channel - 1]
        }
    }

    /// `(D0/D)^ς` without the constant factors; `distance` is clamped to the floor.
    pub fn attenuation(&self, channel: usize, distance: f64) -> f64 {
        let ratio = self.d0 / distance.max(self.distance_floor);
        let exp = self.path_loss_exp[channel - 1];
        if exp == 2.0 {
            ratio * ratio
        } else {
            ratio.powf(exp)
        }
    }

    /// Gain clamped at the distance floor, for callers that tolerate co-located nodes.
    pub fn gain_floored(&self, node: usize, channel: usize, distance: f64) -> f64 {
        self.k * self.epsilon(node, channel) * self.attenuation(channel, distance)
    }
}

/// Channel gain of `node` on `channel` (1-based) at `distance` metres.
pub fn channel_gain(model: &GainModel, node: usize, channel: usize, distance: f64) -> Result<f64> {
    if channel == 0 || channel > model.channels() {
        return Err(Error::invalid(format!("channel {channel} outside 1..={}", model.channels())));
    }
    if !(distance >= model.distance_floor) {
        return Err(Error::DistanceBelowFloor {
            distance,
            floor: model.distance_floor,
        });
    }
    Ok(model.gain_floored(node, channel, distance))
}

/// A gain known only up to a symmetric error bound; `truth` is hidden from
/// the allocator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UncertainGain {
    pub estimate: f64,
    pub bound: f64,
    pub truth: f64,
}

impl UncertainGain {
    pub fn is_consistent(&self) -> bool {
        (self.truth - self.estimate).abs() <= self.bound
    }
}

fn perturbation<R: Rng + ?Sized>(rel: f64, rng: &mut R) -> f64 {
    let delta = if rel > 0.0 { rng.random_range(-rel..=rel) } else { 0.0 };
    (1.0 + delta).max(MIN_PERTURBATION)
}

/// Draws an estimate of `truth` whose error stays within `rel · estimate`.
pub fn estimate_gain<R: Rng + ?Sized>(truth: f64, rel: f64, rng: &mut R) -> Result<UncertainGain> {
    if !(truth >= 0.0) || !truth.is_finite() {
        return Err(Error::invalid(format!("gain {truth} must be finite and non-negative")));
    }
    if !(0.0..=1.0).contains(&rel) {
        return Err(Error::invalid(format!("relative uncertainty {rel} outside [0, 1]")));
    }
    let estimate = truth / perturbation(rel, rng);
    let mut bound = rel * estimate;
    // truth/(1+δ) with |δ| <= rel already satisfies the bound up to rounding
    let err = (truth - estimate).abs();
    if err > bound {
        bound = err;
    }
    Ok(UncertainGain { estimate, bound, truth })
}

/// Draws a true gain around a known estimate, inside `estimate · (1 ± rel)`.
pub fn realize_gain<R: Rng + ?Sized>(estimate: f64, rel: f64, rng: &mut R) -> f64 {
    (estimate * perturbation(rel, rng)).clamp(estimate * (1.0 - rel), estimate * (1.0 + rel))
}

/// Symmetric fuzzy gain `(ĥ, Δh, Δh)`.
pub fn gain_tfn(g: &UncertainGain) -> Result<Tfn> {
    Tfn::symmetric(g.estimate, g.bound)
}

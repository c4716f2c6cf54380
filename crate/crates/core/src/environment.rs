//! Time-varying radio environment shared by all schemes of a trial.
//!
//! At the start of a run every node measures its link gain once, giving
//! the estimate `ĥ` and bound `Δh = rel·ĥ` with `rel` drawn per node. Each
//! slot the nodes move and the true gains fluctuate inside `ĥ ± Δh`
//! around the path-loss gain at the current distance. Two independent
//! draws are made per slot: the observation available to crisp decision
//! makers and the gain the transmission actually experiences.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::ScenarioConfig;
use crate::error::{Error, Result};
use crate::gain::{estimate_gain, GainModel};
use crate::interference::{ChannelSet, IrTable, Radio, RadioParams};
use crate::mobility::{random_mobility, step_mobility, MobilityParams, MobilityState};
use crate::network::{NetworkState, Position};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvironmentOptions {
    pub mobility: bool,
    /// Redraw gains every slot; when false the first draw is reused.
    pub redraw: bool,
    pub rel_uncertainty: [f64; 2],
    pub slot_duration: f64,
    pub mobility_params: MobilityParams,
}

impl EnvironmentOptions {
    pub fn from_scenario(cfg: &ScenarioConfig) -> Self {
        EnvironmentOptions {
            mobility: true,
            redraw: true,
            rel_uncertainty: cfg.rel_uncertainty,
            slot_duration: cfg.slot_duration,
            mobility_params: MobilityParams {
                speed_range: cfg.speed_range,
                extent_range: cfg.extent_range,
            },
        }
    }

    /// Static positions and gains.
    pub fn frozen(mut self) -> Self {
        self.mobility = false;
        self.redraw = false;
        self
    }
}

pub fn radio_params(cfg: &ScenarioConfig) -> Result<RadioParams> {
    Ok(RadioParams {
        noise_w: cfg.noise_w(),
        bandwidth: cfg.bandwidth,
        channels: ChannelSet::new(cfg.channels, cfg.tau)?,
        ir: IrTable::new(cfg.ir_table.clone())?,
        if_mode: cfg.if_aggregation,
        gain: GainModel::uniform(cfg.channels, cfg.gain_k, cfg.d0, cfg.path_loss_exp, cfg.distance_floor)?,
    })
}

#[derive(Debug, Clone)]
pub struct Environment {
    net: NetworkState,
    mobility: Vec<MobilityState>,
    options: EnvironmentOptions,
    rel: Vec<f64>,
    estimates: Radio,
    bounds: Vec<f64>,
    snapshot: Vec<Position>,
    frozen_draws: Option<(Vec<f64>, Vec<f64>)>,
    pending_tx: Option<Vec<f64>>,
    rng: ChaCha8Rng,
}

impl Environment {
    pub fn new(net: NetworkState, params: RadioParams, options: EnvironmentOptions, seed: u64) -> Result<Self> {
        let [lo, hi] = options.rel_uncertainty;
        if !(0.0 <= lo && lo <= hi && hi <= 1.0) {
            return Err(Error::invalid("relative uncertainty range must lie in [0, 1]"));
        }
        if !(options.slot_duration > 0.0) {
            return Err(Error::invalid("slot duration must be positive"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = net.len();
        let m = params.channels.m_total;
        let rel: Vec<f64> = (0..n).map(|_| if hi > lo { rng.random_range(lo..=hi) } else { lo }).collect();
        let mut estimate = vec![0.0; n * m];
        let mut bounds = vec![0.0; n * m];
        for node in 0..n {
            let d = net.link_distance(node);
            for c in 1..=m {
                let g = estimate_gain(params.gain.gain_floored(node, c, d), rel[node], &mut rng)?;
                estimate[node * m + c - 1] = g.estimate;
                bounds[node * m + c - 1] = g.bound;
            }
        }
        let mobility = if options.mobility {
            random_mobility(&net, &options.mobility_params, &mut rng)
        } else {
            net.nodes.iter().map(|x| MobilityState::stay_at(x.position)).collect()
        };
        let snapshot = net.positions();
        let estimates = Radio::new(params, &net, &snapshot, estimate)?;
        Ok(Environment {
            net,
            mobility,
            options,
            rel,
            estimates,
            bounds,
            snapshot,
            frozen_draws: None,
            pending_tx: None,
            rng,
        })
    }

    pub fn from_scenario(net: NetworkState, cfg: &ScenarioConfig, seed: u64) -> Result<Self> {
        Environment::new(net, radio_params(cfg)?, EnvironmentOptions::from_scenario(cfg), seed)
    }

    pub fn net(&self) -> &NetworkState {
        &self.net
    }

    pub fn radio_params(&self) -> &RadioParams {
        &self.estimates.params
    }

    /// Radio snapshot at the initial geometry with signal gains `ĥ`.
    pub fn estimates(&self) -> &Radio {
        &self.estimates
    }

    /// Gain bounds `Δh`, laid out like the signal table.
    pub fn bounds(&self) -> &[f64] {
        &self.bounds
    }

    pub fn relative_uncertainty(&self) -> &[f64] {
        &self.rel
    }

    /// Moves the nodes by one slot.
    pub fn advance(&mut self) -> Result<()> {
        if self.options.mobility {
            step_mobility(&mut self.net, &mut self.mobility, self.options.slot_duration, &mut self.rng)
        } else {
            self.net.slot += 1;
            Ok(())
        }
    }

    /// One gain draw per (node, channel) around the current path-loss gain, clamped to `ĥ ± Δh`.
    fn draw_gains(&mut self) -> Vec<f64> {
        let m = self.estimates.params.channels.m_total;
        let n = self.net.len();
        let mut out = vec![0.0; n * m];
        for node in 0..n {
            let d = self.net.link_distance(node);
            let rel = self.rel[node];
            for c in 1..=m {
                let i = node * m + c - 1;
                let nominal = self.estimates.params.gain.gain_floored(node, c, d);
                let delta = if rel > 0.0 { self.rng.random_range(-rel..=rel) } else { 0.0 };
                let (est, bound) = (self.estimates.signal(node, c), self.bounds[i]);
                out[i] = (nominal * (1.0 + delta)).clamp(est - bound, est + bound).max(0.0);
            }
        }
        out
    }

    fn draws(&mut self) -> (Vec<f64>, Vec<f64>) {
        if !self.options.redraw {
            if let Some(d) = &self.frozen_draws {
                return d.clone();
            }
        }
        let d = (self.draw_gains(), self.draw_gains());
        if !self.options.redraw {
            self.frozen_draws = Some(d.clone());
        }
        d
    }

    /// Noisy instantaneous observation at the initial geometry.
    ///
    /// Both this and [`Environment::transmit`] must be called once per slot,
    /// in this order, to keep the random streams paired across schemes.
    pub fn observe(&mut self) -> Result<Radio> {
        let (obs, tx) = self.draws();
        self.pending_tx = Some(tx);
        Radio::new(self.estimates.params.clone(), &self.net, &self.snapshot, obs)
    }

    /// Gains experienced by transmissions at the current geometry.
    pub fn transmit(&mut self) -> Result<Radio> {
        let tx = self
            .pending_tx
            .take()
            .ok_or_else(|| Error::invalid("transmit called before observe"))?;
        let positions = self.net.positions();
        Radio::new(self.estimates.params.clone(), &self.net, &positions, tx)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::generate_topology;

    fn env(options: impl Fn(EnvironmentOptions) -> EnvironmentOptions, seed: u64) -> Environment {
        let cfg = ScenarioConfig {
            n_nodes: 8,
            ..ScenarioConfig::default()
        };
        let net = generate_topology(&cfg, 17).unwrap();
        Environment::new(
            net,
            radio_params(&cfg).unwrap(),
            options(EnvironmentOptions::from_scenario(&cfg)),
            seed,
        )
        .unwrap()
    }

    #[test]
    fn draws_stay_inside_the_bounds() {
        let mut e = env(|o| o, 1);
        for _ in 0..5 {
            e.advance().unwrap();
            let obs = e.observe().unwrap();
            let tx = e.transmit().unwrap();
            for (i, (&h, &b)) in e.estimates().signal_table().iter().zip(e.bounds()).enumerate() {
                for g in [obs.signal_table()[i], tx.signal_table()[i]] {
                    assert!(g >= (h - b).max(0.0) - 1e-15 && g <= h + b + 1e-15);
                }
            }
        }
        assert!(e.relative_uncertainty().iter().all(|&r| (1e-3..=1.0).contains(&r)));
    }

    #[test]
    fn frozen_environment_reuses_draws() {
        let mut e = env(EnvironmentOptions::frozen, 2);
        let first = (
            e.observe().unwrap().signal_table().to_vec(),
            e.transmit().unwrap().signal_table().to_vec(),
        );
        let start = e.net().positions();
        for _ in 0..3 {
            e.advance().unwrap();
            assert_eq!(e.observe().unwrap().signal_table(), &first.0[..]);
            assert_eq!(e.transmit().unwrap().signal_table(), &first.1[..]);
        }
        assert_eq!(e.net().positions(), start);
    }

    #[test]
    fn zero_uncertainty_observes_the_estimate() {
        let mut e = env(
            |o| EnvironmentOptions {
                rel_uncertainty: [0.0, 0.0],
                ..o
            },
            3,
        );
        assert!(e.bounds().iter().all(|&b| b == 0.0));
        e.advance().unwrap();
        assert_eq!(e.observe().unwrap().signal_table(), e.estimates().signal_table());
    }

    #[test]
    fn transmit_requires_a_prior_observation() {
        let mut e = env(|o| o, 4);
        assert!(e.transmit().is_err());
        e.observe().unwrap();
        assert!(e.transmit().is_ok());
        assert!(e.transmit().is_err());
    }

    #[test]
    fn same_seed_same_stream() {
        let mut a = env(|o| o, 5);
        let mut b = env(|o| o, 5);
        for _ in 0..3 {
            a.advance().unwrap();
            b.advance().unwrap();
            assert_eq!(a.observe().unwrap().signal_table(), b.observe().unwrap().signal_table());
            assert_eq!(a.transmit().unwrap().signal_table(), b.transmit().unwrap().signal_table());
        }
    }

    #[test]
    fn rejects_bad_options() {
        let cfg = ScenarioConfig::default();
        let net = generate_topology(&cfg, 0).unwrap();
        let bad = EnvironmentOptions {
            rel_uncertainty: [0.5, 0.2],
            ..EnvironmentOptions::from_scenario(&cfg)
        };
        assert!(Environment::new(net, radio_params(&cfg).unwrap(), bad, 0).is_err());
    }
}

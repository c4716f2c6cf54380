//! Channel allocation: fuzzy-learning best response, the crisp and random
//! baselines, and the slot loop that runs them to convergence.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::config::{ScenarioConfig, Scheme};
use crate::environment::Environment;
use crate::error::{Error, Result};
use crate::fuzzy::{relative_index, Stance, Tfn, Viewpoint};
use crate::interference::{ChannelSet, Radio};
use crate::network::UavNode;
use crate::plan::{is_orthogonal_set, ChannelPlan};
use crate::preference::{build_fpr, least_deviation, PreferenceParams, PriorityVector};
use crate::utility::{fuzzy_payoff, metrics_if, node_metrics, Metric, NodeMetrics, QosSpec};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LearnerConfig {
    pub metric: Metric,
    pub stance: Stance,
    pub preference: PreferenceParams,
    pub qos: QosSpec,
    pub iteration_cap: usize,
}

impl Default for LearnerConfig {
    fn default() -> Self {
        LearnerConfig {
            metric: Metric::Throughput,
            stance: Stance::Neutral,
            preference: PreferenceParams::default(),
            qos: QosSpec::default(),
            iteration_cap: 30,
        }
    }
}

impl LearnerConfig {
    pub fn from_scenario(cfg: &ScenarioConfig) -> Self {
        LearnerConfig {
            metric: cfg.metric,
            stance: cfg.viewpoint,
            preference: PreferenceParams {
                zeta: cfg.zeta,
                eta: cfg.eta,
                max_iters: cfg.ld_max_iters,
            },
            qos: QosSpec {
                r_th: cfg.r_th,
                delta_r: cfg.delta_r,
                delta_t: cfg.delta_t,
            },
            iteration_cap: cfg.iteration_cap,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.preference.validate()?;
        if self.iteration_cap == 0 {
            return Err(Error::invalid("iteration_cap must be at least 1"));
        }
        Ok(())
    }
}

/// What a node knows when it decides: a radio snapshot holding its gain
/// estimates and the per-gain uncertainty bounds (zero for crisp decisions).
#[derive(Debug, Clone, Copy)]
pub struct DecisionView<'a> {
    pub radio: &'a Radio,
    pub bounds: &'a [f64],
}

/// Channel preference order for one node.
#[derive(Debug, Clone, PartialEq)]
pub struct Ranking {
    /// Channel ids, most preferred first.
    pub order: Vec<usize>,
    pub payoffs: Vec<Tfn>,
    pub indices: Vec<f64>,
    pub weights: PriorityVector,
    /// False when the least-deviation iteration hit its cap and the last iterate was used.
    pub converged: bool,
}

/// Number of channels a node requests: the largest power-feasible orthogonal set.
pub fn alpha_for(node: &UavNode, cs: &ChannelSet) -> usize {
    let affordable = (node.power_budget_w / node.tx_power_w * (1.0 + 1e-12)).floor();
    (affordable.max(0.0) as usize).min(cs.o_max())
}

/// Ranks every channel by the priority vector of its single-channel fuzzy payoff.
///
/// Channels whose relative indices are bitwise equal share the largest
/// weight among them, so the sequential weight updates cannot split ties;
/// remaining ties go to the higher relative index, then the lower channel id.
pub fn rank_channels(view: DecisionView<'_>, node: usize, plan: &ChannelPlan, cfg: &LearnerConfig) -> Result<Ranking> {
    let cs = view.radio.params.channels;
    let payoffs = cs
        .ids()
        .map(|m| fuzzy_payoff(view.radio, node, &[m], plan, view.bounds, cfg.metric))
        .collect::<Result<Vec<_>>>()?;
    let viewpoint = Viewpoint::for_set(&payoffs, cfg.stance)?;
    let indices = relative_index(&payoffs, &viewpoint)?;
    let q = build_fpr(&indices, cfg.preference.zeta)?;
    let (weights, converged) = match least_deviation(&q, &cfg.preference, &PriorityVector::uniform(indices.len())) {
        Ok(w) => (w, true),
        Err(Error::NotConverged { last, .. }) => (last, false),
        Err(e) => return Err(e),
    };
    let w = weights.weights();
    let class: Vec<f64> = (0..w.len())
        .map(|i| {
            (0..w.len())
                .filter(|&j| indices[j].to_bits() == indices[i].to_bits())
                .map(|j| w[j])
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .collect();
    let mut idx: Vec<usize> = (0..w.len()).collect();
    idx.sort_by(|&a, &b| {
        class[b]
            .total_cmp(&class[a])
            .then(indices[b].total_cmp(&indices[a]))
            .then(a.cmp(&b))
    });
    Ok(Ranking {
        order: idx.into_iter().map(|i| i + 1).collect(),
        payoffs,
        indices,
        weights,
        converged,
    })
}

/// `first`, then `forced`, then the best-ranked channels orthogonal to all chosen, up to `alpha`.
pub fn fill(order: &[usize], cs: &ChannelSet, first: usize, forced: Option<usize>, alpha: usize) -> Vec<usize> {
    let mut chosen = vec![first];
    if let Some(f) = forced {
        chosen.push(f);
    }
    for &c in order {
        if chosen.len() >= alpha {
            break;
        }
        if chosen.iter().all(|&x| cs.orthogonal(x, c)) {
            chosen.push(c);
        }
    }
    chosen.truncate(alpha.max(1));
    chosen
}

/// A node's decision for the next slot.
#[derive(Debug, Clone, PartialEq)]
pub struct Proposal {
    pub channels: Vec<usize>,
    pub active: bool,
    /// Whether the decision-view rate meets the QoS threshold.
    pub qos_ok: bool,
}

/// Takes the top channel, fills orthogonal secondaries by rank, and if the
/// rate misses the threshold retries with each remaining orthogonal
/// candidate as the first secondary. Without a feasible set the best one
/// found is kept and the node goes inactive.
pub fn propose(view: DecisionView<'_>, node: usize, alpha: usize, plan: &ChannelPlan, order: &[usize], qos: &QosSpec) -> Proposal {
    let cs = view.radio.params.channels;
    let rate = |chans: &[usize]| metrics_if(view.radio, node, chans, plan).rate;
    let s1 = order[0];
    let base = fill(order, &cs, s1, None, alpha);
    let base_rate = rate(&base);
    if base_rate >= qos.r_th {
        return Proposal {
            channels: base,
            active: true,
            qos_ok: true,
        };
    }
    let mut best = (base_rate, base);
    if alpha >= 2 {
        let tried = best.1.get(1).copied();
        for &c in order.iter().filter(|&&c| cs.orthogonal(s1, c) && Some(c) != tried) {
            let cand = fill(order, &cs, s1, Some(c), alpha);
            let r = rate(&cand);
            if r >= qos.r_th {
                return Proposal {
                    channels: cand,
                    active: true,
                    qos_ok: true,
                };
            }
            if r > best.0 {
                best = (r, cand);
            }
        }
    }
    Proposal {
        channels: best.1,
        active: false,
        qos_ok: false,
    }
}

/// Outcome of one node's update.
#[derive(Debug, Clone, PartialEq)]
pub struct StepOutcome {
    pub proposal: Proposal,
    /// Whether the proposal replaced the node's current strategy.
    pub adopted: bool,
    pub ranking_converged: bool,
}

/// Ranks, proposes, and adopts the proposal unless the current strategy
/// already meets QoS with at least the same decision-view utility.
pub fn best_response_step(view: DecisionView<'_>, node: &UavNode, plan: &mut ChannelPlan, cfg: &LearnerConfig) -> Result<StepOutcome> {
    let n = node.id;
    let cs = view.radio.params.channels;
    let alpha = alpha_for(node, &cs);
    if alpha == 0 {
        let proposal = Proposal {
            channels: Vec::new(),
            active: false,
            qos_ok: false,
        };
        let adopted = plan.channels[n] != proposal.channels || plan.active[n];
        plan.set(n, Vec::new(), false);
        return Ok(StepOutcome {
            proposal,
            adopted,
            ranking_converged: true,
        });
    }
    let ranking = rank_channels(view, n, plan, cfg)?;
    let proposal = propose(view, n, alpha, plan, &ranking.order, &cfg.qos);

    let current_ok = plan.transmits(n) && node_metrics(view.radio, n, plan).rate >= cfg.qos.r_th;
    let adopt = if !current_ok {
        true
    } else if proposal.qos_ok {
        let cur = node_metrics(view.radio, n, plan).get(cfg.metric);
        let new = metrics_if(view.radio, n, &proposal.channels, plan).get(cfg.metric);
        new > cur + 1e-12 * cur.abs()
    } else {
        false
    };
    let changed = adopt && (plan.channels[n] != proposal.channels || plan.active[n] != proposal.active);
    if adopt {
        plan.set(n, proposal.channels.clone(), proposal.active);
    }
    Ok(StepOutcome {
        proposal,
        adopted: changed,
        ranking_converged: ranking.converged,
    })
}

/// Fuzzy-learning update on gain estimates with their uncertainty bounds.
pub fn fuzzy_step(view: DecisionView<'_>, node: &UavNode, plan: &mut ChannelPlan, cfg: &LearnerConfig) -> Result<StepOutcome> {
    best_response_step(view, node, plan, cfg)
}

/// Crisp best response on instantaneous observed gains.
pub fn crisp_step(observed: &Radio, node: &UavNode, plan: &mut ChannelPlan, cfg: &LearnerConfig) -> Result<StepOutcome> {
    let zeros = vec![0.0; observed.signal_table().len()];
    best_response_step(
        DecisionView {
            radio: observed,
            bounds: &zeros,
        },
        node,
        plan,
        cfg,
    )
}

/// Uniform first channel, then a random orthogonal fill up to `alpha`.
pub fn random_step<R: Rng + ?Sized>(cs: &ChannelSet, alpha: usize, rng: &mut R) -> Vec<usize> {
    if alpha == 0 {
        return Vec::new();
    }
    let first = rng.random_range(1..=cs.m_total);
    let mut candidates = cs.orthogonal_set(first);
    candidates.shuffle(rng);
    let chosen = fill(&candidates, cs, first, None, alpha);
    debug_assert!(is_orthogonal_set(&chosen, cs));
    chosen
}

/// Random initial strategy profile with every node active.
pub fn random_plan<R: Rng + ?Sized>(nodes: &[UavNode], cs: &ChannelSet, rng: &mut R) -> ChannelPlan {
    let mut plan = ChannelPlan::empty(nodes.len());
    for node in nodes {
        plan.set(node.id, random_step(cs, alpha_for(node, cs), rng), true);
    }
    plan
}

/// Transmitting nodes whose rate meets the QoS threshold.
pub fn active_links(radio: &Radio, plan: &ChannelPlan, qos: &QosSpec) -> usize {
    (0..plan.len())
        .filter(|&n| plan.transmits(n) && node_metrics(radio, n, plan).rate >= qos.r_th)
        .count()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlotRecord {
    pub slot: usize,
    pub plan: ChannelPlan,
    /// Per-node utility as seen by the deciding scheme.
    pub decision_utility: Vec<f64>,
    /// Per-node metrics on the gains actually experienced.
    pub realized: Vec<NodeMetrics>,
    pub active_links: usize,
    pub c4_violations: usize,
    pub converged: bool,
}

impl SlotRecord {
    pub fn realized_total(&self) -> NodeMetrics {
        self.realized.iter().fold(NodeMetrics::default(), |acc, m| NodeMetrics {
            rate: acc.rate + m.rate,
            throughput: acc.throughput + m.throughput,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AllocationTrace {
    pub scheme: Scheme,
    pub slots: Vec<SlotRecord>,
    pub converged: bool,
    /// Slot at which the stopping rule held, or the number of slots run.
    pub iterations: usize,
}

impl AllocationTrace {
    pub fn last(&self) -> &SlotRecord {
        self.slots.last().expect("a trace has at least one slot")
    }

    pub fn c4_violations(&self) -> usize {
        self.slots.iter().map(|s| s.c4_violations).sum()
    }
}

fn decision_utilities(radio: &Radio, plan: &ChannelPlan, metric: Metric) -> Vec<f64> {
    (0..plan.len()).map(|n| node_metrics(radio, n, plan).get(metric)).collect()
}

/// Runs `scheme` from `initial` until every node's utility changes by less
/// than the metric's threshold between consecutive slots, or the cap.
///
/// Nodes update sequentially in id order within a slot. Fuzzy decisions use
/// the environment's gain estimates and bounds; crisp and random decisions
/// (and their stopping test) use the slot's noisy observation.
pub fn run<R: Rng + ?Sized>(
    env: &mut Environment,
    initial: ChannelPlan,
    scheme: Scheme,
    cfg: &LearnerConfig,
    rng: &mut R,
) -> Result<AllocationTrace> {
    cfg.validate()?;
    let cs = env.radio_params().channels;
    initial.validate(&cs)?;
    if initial.len() != env.net().len() {
        return Err(Error::invalid("initial plan does not match the network size"));
    }
    let delta = cfg.qos.delta(cfg.metric);
    let nodes = env.net().nodes.clone();
    let mut plan = initial;
    let mut prev: Option<Vec<f64>> = None;
    let mut slots = Vec::new();
    for k in 1..=cfg.iteration_cap {
        if k > 1 {
            env.advance()?;
        }
        let observed = env.observe()?;
        let decision_radio = match scheme {
            Scheme::Fuzzy => env.estimates(),
            Scheme::Crisp | Scheme::Random => &observed,
        };
        if prev.is_none() {
            prev = Some(decision_utilities(decision_radio, &plan, cfg.metric));
        }
        for node in &nodes {
            match scheme {
                Scheme::Fuzzy => {
                    let view = DecisionView {
                        radio: env.estimates(),
                        bounds: env.bounds(),
                    };
                    fuzzy_step(view, node, &mut plan, cfg)?;
                }
                Scheme::Crisp => {
                    crisp_step(&observed, node, &mut plan, cfg)?;
                }
                Scheme::Random => {
                    plan.set(node.id, random_step(&cs, alpha_for(node, &cs), rng), true);
                }
            }
        }
        let utility = decision_utilities(decision_radio, &plan, cfg.metric);
        let converged = prev
            .as_ref()
            .is_some_and(|p| p.iter().zip(&utility).all(|(a, b)| (b - a).abs() < delta));
        let actual = env.transmit()?;
        let realized: Vec<NodeMetrics> = (0..plan.len()).map(|n| node_metrics(&actual, n, &plan)).collect();
        let c4_violations = (0..plan.len()).filter(|&n| !plan.node_orthogonal(n, &cs)).count();
        slots.push(SlotRecord {
            slot: k,
            active_links: active_links(&actual, &plan, &cfg.qos),
            plan: plan.clone(),
            decision_utility: utility.clone(),
            realized,
            c4_violations,
            converged,
        });
        prev = Some(utility);
        if converged {
            return Ok(AllocationTrace {
                scheme,
                slots,
                converged: true,
                iterations: k,
            });
        }
    }
    Ok(AllocationTrace {
        scheme,
        slots,
        converged: false,
        iterations: cfg.iteration_cap,
    })
}

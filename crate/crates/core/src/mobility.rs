//! Paparazzi-style mobility: stay-at, way-point, eight, scan and oval movements.
//!
//! Closed trajectories (oval, eight, scan) start at the node's position and
//! advance a phase at constant speed along the curve; the resulting position
//! is clipped to the simulation box.

use std::f64::consts::TAU;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::{distance, NetworkState, Position};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MovementType {
    StayAt,
    Waypoint,
    Eight,
    Scan,
    Oval,
}

impl MovementType {
    pub const ALL: [MovementType; 5] = [
        MovementType::StayAt,
        MovementType::Waypoint,
        MovementType::Eight,
        MovementType::Scan,
        MovementType::Oval,
    ];
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Trajectory {
    StayAt,
    Waypoint {
        target: Position,
    },
    /// Ellipse with semi-axes `(a, b)` in the horizontal plane.
    Oval {
        a: f64,
        b: f64,
    },
    /// Lemniscate of Gerono `(a sin θ, a sin θ cos θ)`.
    Eight {
        a: f64,
    },
    /// Closed lawnmower pattern of `lanes` passes over a `width × height` rectangle.
    Scan {
        width: f64,
        height: f64,
        lanes: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MobilityState {
    pub trajectory: Trajectory,
    /// Point the closed trajectory is attached to (its start).
    pub anchor: Position,
    /// Speed in m/s.
    pub speed: f64,
    /// Fraction of the closed trajectory covered, in `[0, 1)`.
    pub phase: f64,
}

impl MobilityState {
    pub fn stay_at(anchor: Position) -> Self {
        MobilityState {
            trajectory: Trajectory::StayAt,
            anchor,
            speed: 0.0,
            phase: 0.0,
        }
    }

    pub fn kind(&self) -> MovementType {
        match self.trajectory {
            Trajectory::StayAt => MovementType::StayAt,
            Trajectory::Waypoint { .. } => MovementType::Waypoint,
            Trajectory::Oval { .. } => MovementType::Oval,
            Trajectory::Eight { .. } => MovementType::Eight,
            Trajectory::Scan { .. } => MovementType::Scan,
        }
    }

    /// Length of one lap of a closed trajectory.
    pub fn perimeter(&self) -> Option<f64> {
        match self.trajectory {
            Trajectory::Oval { a, b } => {
                // Ramanujan's second approximation
                let h = ((a - b) / (a + b)).powi(2);
                Some(std::f64::consts::PI * (a + b) * (1.0 + 3.0 * h / (10.0 + (4.0 - 3.0 * h).sqrt())))
            }
            Trajectory::Eight { a } => {
                const SAMPLES: usize = 512;
                let pts: Vec<[f64; 2]> = (0..=SAMPLES).map(|i| gerono(a, TAU * i as f64 / SAMPLES as f64)).collect();
                Some(pts.windows(2).map(|w| (w[1][0] - w[0][0]).hypot(w[1][1] - w[0][1])).sum())
            }
            Trajectory::Scan { width, height, lanes } => Some(scan_polyline(width, height, lanes).1),
            _ => None,
        }
    }

    /// Position on a closed trajectory at the current phase, before clipping.
    fn curve_point(&self) -> Position {
        let [x, y, z] = self.anchor;
        let theta = TAU * self.phase;
        match self.trajectory {
            Trajectory::Oval { a, b } => [x + a * (theta.cos() - 1.0), y + b * theta.sin(), z],
            Trajectory::Eight { a } => {
                let [dx, dy] = gerono(a, theta);
                [x + dx, y + dy, z]
            }
            Trajectory::Scan { width, height, lanes } => {
                let (pts, total) = scan_polyline(width, height, lanes);
                let mut s = self.phase * total;
                for w in pts.windows(2) {
                    let seg = (w[1][0] - w[0][0]).hypot(w[1][1] - w[0][1]);
                    if s <= seg && seg > 0.0 {
                        let t = s / seg;
                        return [x + w[0][0] + t * (w[1][0] - w[0][0]), y + w[0][1] + t * (w[1][1] - w[0][1]), z];
                    }
                    s -= seg;
                }
                self.anchor
            }
            _ => self.anchor,
        }
    }
}

fn gerono(a: f64, theta: f64) -> [f64; 2] {
    let s = theta.sin();
    [a * s, a * s * theta.cos()]
}

/// Vertices of a closed lawnmower path starting and ending at the origin, and its length.
fn scan_polyline(width: f64, height: f64, lanes: usize) -> (Vec<[f64; 2]>, f64) {
    let lanes = lanes.max(1);
    let spacing = if lanes > 1 { height / (lanes - 1) as f64 } else { 0.0 };
    let mut pts = vec![[0.0, 0.0]];
    for lane in 0..lanes {
        let y = lane as f64 * spacing;
        let (from, to) = if lane % 2 == 0 { (0.0, width) } else { (width, 0.0) };
        if lane > 0 {
            pts.push([from, y]);
        }
        pts.push([to, y]);
    }
    pts.push([0.0, 0.0]);
    pts.dedup();
    let total = pts.windows(2).map(|w| (w[1][0] - w[0][0]).hypot(w[1][1] - w[0][1])).sum();
    (pts, total)
}

fn clip(p: Position, extent: &[f64; 3]) -> Position {
    [p[0].clamp(0.0, extent[0]), p[1].clamp(0.0, extent[1]), p[2].clamp(0.0, extent[2])]
}

fn random_point<R: Rng + ?Sized>(extent: &[f64; 3], rng: &mut R) -> Position {
    [
        rng.random_range(0.0..extent[0]),
        rng.random_range(0.0..extent[1]),
        rng.random_range(0.0..extent[2]),
    ]
}

/// Parameters for randomly drawn trajectories.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobilityParams {
    pub speed_range: [f64; 2],
    pub extent_range: [f64; 2],
}

fn draw_in<R: Rng + ?Sized>(range: [f64; 2], rng: &mut R) -> f64 {
    if range[1] > range[0] {
        rng.random_range(range[0]..=range[1])
    } else {
        range[0]
    }
}

/// Draws one trajectory per node, anchored at its current position.
pub fn random_mobility<R: Rng + ?Sized>(net: &NetworkState, params: &MobilityParams, rng: &mut R) -> Vec<MobilityState> {
    net.nodes
        .iter()
        .map(|node| {
            let kind = MovementType::ALL[rng.random_range(0..MovementType::ALL.len())];
            let speed = draw_in(params.speed_range, rng);
            let extent = draw_in(params.extent_range, rng);
            let trajectory = match kind {
                MovementType::StayAt => return MobilityState::stay_at(node.position),
                MovementType::Waypoint => Trajectory::Waypoint {
                    target: random_point(&net.box_extent, rng),
                },
                MovementType::Oval => Trajectory::Oval {
                    a: extent,
                    b: extent * rng.random_range(0.3..=1.0),
                },
                MovementType::Eight => Trajectory::Eight { a: extent },
                MovementType::Scan => Trajectory::Scan {
                    width: extent,
                    height: extent * rng.random_range(0.3..=1.0),
                    lanes: rng.random_range(2..=5),
                },
            };
            MobilityState {
                trajectory,
                anchor: node.position,
                speed,
                phase: 0.0,
            }
        })
        .collect()
}

/// Advances one mobility state by `dt` seconds, returning the new position.
pub fn advance<R: Rng + ?Sized>(state: &mut MobilityState, position: Position, dt: f64, extent: &[f64; 3], rng: &mut R) -> Position {
    match state.trajectory {
        Trajectory::StayAt => position,
        Trajectory::Waypoint { .. } => {
            let mut pos = position;
            let mut budget = state.speed * dt;
            // bounded so a degenerate box cannot spin forever
            for _ in 0..64 {
                let Trajectory::Waypoint { target } = state.trajectory else {
                    unreachable!()
                };
                let remaining = distance(&pos, &target);
                if remaining > budget {
                    let t = budget / remaining;
                    for (p, q) in pos.iter_mut().zip(target) {
                        *p += t * (q - *p);
                    }
                    break;
                }
                budget -= remaining;
                pos = target;
                state.trajectory = Trajectory::Waypoint {
                    target: random_point(extent, rng),
                };
                if budget <= 0.0 {
                    break;
                }
            }
            clip(pos, extent)
        }
        _ => {
            let perimeter = state.perimeter().unwrap_or(0.0);
            if perimeter > 0.0 {
                state.phase = (state.phase + state.speed * dt / perimeter).fract();
            }
            clip(state.curve_point(), extent)
        }
    }
}

/// Moves every node along its trajectory; cluster membership is unchanged.
pub fn step_mobility<R: Rng + ?Sized>(net: &mut NetworkState, mobility: &mut [MobilityState], dt: f64, rng: &mut R) -> Result<()> {
    if !(dt > 0.0) {
        return Err(Error::invalid(format!("time step {dt} must be positive")));
    }
    if mobility.len() != net.nodes.len() {
        return Err(Error::invalid("one mobility state per node is required"));
    }
    let extent = net.box_extent;
    for (node, state) in net.nodes.iter_mut().zip(mobility.iter_mut()) {
        node.position = advance(state, node.position, dt, &extent, rng);
    }
    net.slot += 1;
    Ok(())
}

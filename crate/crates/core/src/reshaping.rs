//! Reshaping plans: the per-interval moves behind an optimal FD assignment.
//!
//! A move pairs source interval `from_index` with target interval `to_index`
//! and prices the pairing. It reports the assignment as solved and does not
//! decide whether energy physically moves between slots.

use serde::Serialize;

use crate::error::Result;
use crate::metrics::flexibility_distance;
use crate::numeric::exact_sum;
use crate::types::FdWeights;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Move {
    pub from_index: usize,
    pub to_index: usize,
    pub source_value: f64,
    pub target_value: f64,
    pub amplitude_cost: f64,
    pub temporal_cost: f64,
    pub total_cost: f64,
}

impl Move {
    pub fn is_stay(&self) -> bool {
        self.from_index == self.to_index && self.amplitude_cost == 0.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReshapePlan {
    /// One move per source interval, in source order.
    pub moves: Vec<Move>,
    pub total_cost: f64,
    pub weights_used: FdWeights,
    /// Temporal weight resolved for this pair.
    pub temporal_weight: f64,
}

pub fn plan(x: &[f64], y: &[f64], weights: &FdWeights) -> Result<ReshapePlan> {
    let (fd, assignment) = flexibility_distance(x, y, weights)?;
    let p = weights.amplitude_value();
    let t = weights.temporal_value(x, y);

    let moves: Vec<Move> = assignment
        .pairs()
        .map(|(i, j)| {
            let amplitude_cost = (x[i] - y[j]).abs() * p;
            let temporal_cost = i.abs_diff(j) as f64 * t;
            Move {
                from_index: i,
                to_index: j,
                source_value: x[i],
                target_value: y[j],
                amplitude_cost,
                temporal_cost,
                total_cost: amplitude_cost + temporal_cost,
            }
        })
        .collect();
    debug_assert_eq!(exact_sum(moves.iter().map(|m| m.total_cost)), fd);

    Ok(ReshapePlan { moves, total_cost: fd, weights_used: *weights, temporal_weight: t })
}

/// Moves that change slot or amplitude, in plan order.
pub fn moved_only(plan: &ReshapePlan) -> Vec<Move> {
    plan.moves.iter().filter(|m| !m.is_stay()).cloned().collect()
}

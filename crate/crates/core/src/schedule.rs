//! Ranking of rescheduling scenarios by their distance to an ideal profile.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::metrics::{distance, Measure};
use crate::types::TimeSeries;

/// Original profile `O`, ideal profile `E` and named candidate scenarios.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSet {
    pub original: TimeSeries,
    pub ideal: TimeSeries,
    pub scenarios: Vec<(String, TimeSeries)>,
}

impl ScenarioSet {
    pub fn new(original: TimeSeries, ideal: TimeSeries, scenarios: Vec<(String, TimeSeries)>) -> Result<Self> {
        let m = ideal.len();
        for s in std::iter::once(&original).chain(scenarios.iter().map(|(_, s)| s)) {
            if s.len() != m {
                return Err(Error::LengthMismatch(m, s.len()));
            }
        }
        Ok(Self { original, ideal, scenarios })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedRow {
    pub name: String,
    pub distance: f64,
    /// 1-based; tied distances share the lower rank.
    pub rank: usize,
    /// `baseline - distance`; negative when the scenario is further from the
    /// ideal than the original.
    pub improvement: f64,
    pub worse_than_baseline: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedReport {
    pub measure: Measure,
    /// Distance from the original to the ideal profile.
    pub baseline: f64,
    /// Ascending by distance, then by name.
    pub rows: Vec<RankedRow>,
}

pub fn rank_scenarios(set: &ScenarioSet, measure: &Measure) -> Result<RankedReport> {
    let ideal = set.ideal.values();
    let baseline = distance(measure, set.original.values(), ideal)?;
    let dists =
        set.scenarios.par_iter().map(|(_, s)| distance(measure, s.values(), ideal)).collect::<Result<Vec<_>>>()?;

    let mut rows: Vec<RankedRow> = set
        .scenarios
        .iter()
        .zip(dists)
        .map(|((name, _), d)| RankedRow {
            name: name.clone(),
            distance: d,
            rank: 0,
            improvement: baseline - d,
            worse_than_baseline: d > baseline,
        })
        .collect();
    rows.sort_by(|a, b| a.distance.total_cmp(&b.distance).then_with(|| a.name.cmp(&b.name)));

    for k in 0..rows.len() {
        rows[k].rank = if k > 0 && rows[k].distance == rows[k - 1].distance { rows[k - 1].rank } else { k + 1 };
    }
    Ok(RankedReport { measure: *measure, baseline, rows })
}

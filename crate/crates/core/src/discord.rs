//! Day-aligned matrix profile and discord search.
//!
//! Each complete day of a series is one subsequence. The profile holds every
//! day's distance to its nearest other day; the discord is the day whose
//! nearest neighbour is furthest away. Days are compared raw, without
//! z-normalisation, so amplitude anomalies remain visible.

use chrono::NaiveDateTime;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::metrics::{distance, Measure};
use crate::types::TimeSeries;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DayMatrix {
    pub days: Vec<TimeSeries>,
    pub samples_per_day: usize,
    /// Start of the first and last complete day, when the source had timestamps.
    pub source_span: Option<(NaiveDateTime, NaiveDateTime)>,
    /// Trailing samples that did not fill a complete day.
    pub dropped_tail: usize,
}

impl DayMatrix {
    pub fn from_days(days: Vec<TimeSeries>) -> Result<Self> {
        let samples_per_day = days.first().map_or(0, TimeSeries::len);
        if let Some(bad) = days.iter().find(|d| d.len() != samples_per_day) {
            return Err(Error::LengthMismatch(samples_per_day, bad.len()));
        }
        Ok(Self { days, samples_per_day, source_span: None, dropped_tail: 0 })
    }

    pub fn len(&self) -> usize {
        self.days.len()
    }

    pub fn is_empty(&self) -> bool {
        self.days.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatrixProfile {
    pub nn_distance: Vec<f64>,
    pub nn_index: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Discord {
    pub day: usize,
    pub nn_distance: f64,
}

/// Splits `series` into consecutive days of `samples_per_day` samples,
/// discarding a trailing partial day.
pub fn segment_days(series: &TimeSeries, samples_per_day: usize) -> Result<DayMatrix> {
    if samples_per_day == 0 {
        return Err(Error::InvalidParameter("samples per day must be positive".into()));
    }
    let len = series.len();
    let n_days = len / samples_per_day;
    if n_days < 2 {
        return Err(Error::TooShort { len, samples_per_day });
    }

    let days = series
        .values()
        .chunks_exact(samples_per_day)
        .enumerate()
        .map(|(d, chunk)| {
            let day = TimeSeries::new(chunk.to_vec())?.with_interval(series.interval_minutes())?;
            Ok(match series.timestamp_of(d * samples_per_day) {
                Some(start) => day.with_start(start),
                None => day,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let source_span = days.first().and_then(TimeSeries::start).zip(days.last().and_then(TimeSeries::start));

    Ok(DayMatrix { days, samples_per_day, source_span, dropped_tail: len % samples_per_day })
}

/// Nearest-neighbour profile over days, excluding self-matches.
///
/// Each unordered pair is evaluated once (pairs run in parallel) and the
/// profile is assembled in a fixed order, so the result does not depend on
/// scheduling. Ties resolve to the lowest neighbour index.
pub fn matrix_profile(days: &DayMatrix, measure: &Measure) -> Result<MatrixProfile> {
    let n = days.len();
    if n < 2 {
        return Err(Error::InvalidParameter(format!("matrix profile needs at least 2 days, got {n}")));
    }
    if !measure.is_symmetric() {
        return matrix_profile_all_pairs(days, measure);
    }

    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let dists = pairs
        .par_iter()
        .map(|&(a, b)| distance(measure, days.days[a].values(), days.days[b].values()))
        .collect::<Result<Vec<f64>>>()?;

    let mut nn_distance = vec![f64::INFINITY; n];
    let mut nn_index = vec![usize::MAX; n];
    // Pairs are in lexicographic order, so every day sees its candidate
    // neighbours in increasing index order and strict `<` keeps the lowest.
    for (&(a, b), &d) in pairs.iter().zip(&dists) {
        if d < nn_distance[a] {
            nn_distance[a] = d;
            nn_index[a] = b;
        }
        if d < nn_distance[b] {
            nn_distance[b] = d;
            nn_index[b] = a;
        }
    }
    Ok(MatrixProfile { nn_distance, nn_index })
}

/// Profile from all `N(N-1)` ordered pairs, without using symmetry.
pub fn matrix_profile_all_pairs(days: &DayMatrix, measure: &Measure) -> Result<MatrixProfile> {
    let n = days.len();
    if n < 2 {
        return Err(Error::InvalidParameter(format!("matrix profile needs at least 2 days, got {n}")));
    }
    let rows = (0..n)
        .into_par_iter()
        .map(|a| {
            let mut best = (f64::INFINITY, usize::MAX);
            for b in (0..n).filter(|&b| b != a) {
                let d = distance(measure, days.days[a].values(), days.days[b].values())?;
                if d < best.0 {
                    best = (d, b);
                }
            }
            Ok(best)
        })
        .collect::<Result<Vec<_>>>()?;
    let (nn_distance, nn_index) = rows.into_iter().unzip();
    Ok(MatrixProfile { nn_distance, nn_index })
}

/// Day with the largest nearest-neighbour distance; lowest index on ties.
pub fn find_discord(profile: &MatrixProfile) -> Option<Discord> {
    let mut best: Option<Discord> = None;
    for (day, &d) in profile.nn_distance.iter().enumerate() {
        if best.is_none_or(|b| d > b.nn_distance) {
            best = Some(Discord { day, nn_distance: d });
        }
    }
    best
}

//! Domain types shared by every module: series, weights, cost matrices and
//! assignments.

use chrono::NaiveDateTime;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Interval assumed when a series is built without timing information.
pub const DEFAULT_INTERVAL_MINUTES: u32 = 30;

/// Fixed-interval power samples (kW).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimeSeries {
    values: Vec<f64>,
    interval_minutes: u32,
    start: Option<NaiveDateTime>,
    label: Option<String>,
}

impl TimeSeries {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        validate_samples(&values)?;
        Ok(Self { values, interval_minutes: DEFAULT_INTERVAL_MINUTES, start: None, label: None })
    }

    pub fn with_interval(mut self, minutes: u32) -> Result<Self> {
        if minutes == 0 {
            return Err(Error::InvalidInterval);
        }
        self.interval_minutes = minutes;
        Ok(self)
    }

    pub fn with_start(mut self, start: NaiveDateTime) -> Self {
        self.start = Some(start);
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Always false for a constructed series; present for API symmetry.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn interval_minutes(&self) -> u32 {
        self.interval_minutes
    }

    pub fn start(&self) -> Option<NaiveDateTime> {
        self.start
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    /// Timestamp of sample `index`, if the series has a start time.
    pub fn timestamp_of(&self, index: usize) -> Option<NaiveDateTime> {
        let offset = chrono::Duration::minutes(index as i64 * self.interval_minutes as i64);
        self.start.map(|s| s + offset)
    }
}

impl AsRef<[f64]> for TimeSeries {
    fn as_ref(&self) -> &[f64] {
        &self.values
    }
}

fn validate_samples(values: &[f64]) -> Result<()> {
    if values.is_empty() {
        return Err(Error::EmptySeries);
    }
    match values.iter().position(|v| !v.is_finite()) {
        Some(i) => Err(Error::NonFiniteSample(i)),
        None => Ok(()),
    }
}

/// Checks that two sample vectors are non-empty, finite and of equal length.
pub fn validate_pair<'a>(x: &'a [f64], y: &'a [f64]) -> Result<(&'a [f64], &'a [f64])> {
    validate_samples(x)?;
    validate_samples(y)?;
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    Ok((x, y))
}

/// Weight on the amplitude term `|X_i - Y_j|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", content = "value", rename_all = "snake_case")]
pub enum AmplitudeWeight {
    Constant(f64),
}

/// Weight on the temporal term `|i - j|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", content = "value", rename_all = "snake_case")]
pub enum TemporalWeight {
    /// `(max(X ∪ Y) - min(X ∪ Y)) / m`, recomputed for every pair.
    MaxminScaled,
    Constant(f64),
}

/// Amplitude and temporal weights of the flexibility cost matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FdWeights {
    pub amplitude: AmplitudeWeight,
    pub temporal: TemporalWeight,
}

impl Default for FdWeights {
    fn default() -> Self {
        Self { amplitude: AmplitudeWeight::Constant(1.0), temporal: TemporalWeight::MaxminScaled }
    }
}

impl FdWeights {
    pub fn new(amplitude: AmplitudeWeight, temporal: TemporalWeight) -> Result<Self> {
        let w = Self { amplitude, temporal };
        w.validate()?;
        Ok(w)
    }

    /// Default amplitude weight with a fixed temporal weight.
    pub fn constant_temporal(weight: f64) -> Result<Self> {
        Self::new(AmplitudeWeight::Constant(1.0), TemporalWeight::Constant(weight))
    }

    pub fn validate(&self) -> Result<()> {
        let AmplitudeWeight::Constant(a) = self.amplitude;
        check_weight("amplitude", a)?;
        if let TemporalWeight::Constant(t) = self.temporal {
            check_weight("temporal", t)?;
        }
        Ok(())
    }

    pub fn amplitude_value(&self) -> f64 {
        let AmplitudeWeight::Constant(a) = self.amplitude;
        a
    }

    /// Temporal weight in force for the pair `(x, y)`.
    pub fn temporal_value(&self, x: &[f64], y: &[f64]) -> f64 {
        match self.temporal {
            TemporalWeight::Constant(t) => t,
            TemporalWeight::MaxminScaled => {
                let (lo, hi) =
                    x.iter().chain(y).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
                if x.is_empty() {
                    0.0
                } else {
                    (hi - lo) / x.len() as f64
                }
            }
        }
    }
}

fn check_weight(name: &str, w: f64) -> Result<()> {
    if w.is_finite() && w >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidWeight(format!("{name} weight must be finite and non-negative, got {w}")))
    }
}

/// Square matrix of finite, non-negative costs, stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CostMatrix {
    m: usize,
    entries: Vec<f64>,
}

impl CostMatrix {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let m = rows.len();
        for (r, row) in rows.iter().enumerate() {
            if row.len() != m {
                return Err(Error::NonSquare { rows: m, row: r, len: row.len() });
            }
        }
        Self::from_row_major(m, rows.into_iter().flatten().collect())
    }

    pub fn from_row_major(m: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != m * m {
            return Err(Error::NonSquare { rows: m, row: 0, len: entries.len() });
        }
        for (k, &c) in entries.iter().enumerate() {
            if !c.is_finite() {
                return Err(Error::NonFiniteEntry(k / m.max(1), k % m.max(1)));
            }
            if c < 0.0 {
                return Err(Error::NegativeEntry(k / m, k % m));
            }
        }
        Ok(Self { m, entries })
    }

    pub fn from_fn(m: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut entries = Vec::with_capacity(m * m);
        for i in 0..m {
            for j in 0..m {
                entries.push(f(i, j));
            }
        }
        Self::from_row_major(m, entries)
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.m + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.m..(i + 1) * self.m]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.entries.chunks(self.m.max(1))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.entries
    }

    pub fn transpose(&self) -> Self {
        let m = self.m;
        let mut entries = vec![0.0; m * m];
        for i in 0..m {
            for j in 0..m {
                entries[j * m + i] = self.entries[i * m + j];
            }
        }
        Self { m, entries }
    }
}

/// A bijection from source indices to target indices.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Assignment {
    target_of: Vec<usize>,
    total_cost: f64,
}

impl Assignment {
    pub fn new(target_of: Vec<usize>, total_cost: f64) -> Result<Self> {
        let m = target_of.len();
        let mut seen = vec![false; m];
        for (i, &j) in target_of.iter().enumerate() {
            if j >= m {
                return Err(Error::NotAPermutation(format!("row {i} maps to {j}, out of range")));
            }
            if std::mem::replace(&mut seen[j], true) {
                return Err(Error::NotAPermutation(format!("target {j} selected twice")));
            }
        }
        if !(total_cost.is_finite() && total_cost >= 0.0) {
            return Err(Error::NotAPermutation(format!("invalid total cost {total_cost}")));
        }
        Ok(Self { target_of, total_cost })
    }

    pub fn identity(m: usize) -> Self {
        Self { target_of: (0..m).collect(), total_cost: 0.0 }
    }

    pub fn target_of(&self) -> &[usize] {
        &self.target_of
    }

    pub fn total_cost(&self) -> f64 {
        self.total_cost
    }

    pub fn len(&self) -> usize {
        self.target_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.target_of.is_empty()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.target_of.iter().copied().enumerate()
    }

    pub fn is_identity(&self) -> bool {
        self.target_of.iter().enumerate().all(|(i, &j)| i == j)
    }
}

//! Euclidean distance, dynamic time warping and the flexibility distance.
//!
//! FD is the minimum total effort of reshaping `x` into `y`, where moving the
//! sample at `i` onto the sample at `j` costs `|x_i - y_j|·P + |i - j|·T`.
//! Unlike ED and DTW no square root is taken, so FD magnitudes are not directly
//! comparable with the other two measures.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::lsap;
use crate::types::{validate_pair, Assignment, CostMatrix, FdWeights};

/// One of the three supported distance measures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Measure {
    Euclidean,
    Dtw,
    Flexibility { weights: FdWeights },
}

impl Measure {
    /// FD with the default max-min scaled temporal weight.
    pub fn fd() -> Self {
        Measure::Flexibility { weights: FdWeights::default() }
    }

    pub fn flexibility(weights: FdWeights) -> Result<Self> {
        weights.validate()?;
        Ok(Measure::Flexibility { weights })
    }

    pub fn short_name(&self) -> &'static str {
        match self {
            Measure::Euclidean => "ed",
            Measure::Dtw => "dtw",
            Measure::Flexibility { .. } => "fd",
        }
    }

    /// All three implemented measures are symmetric.
    pub fn is_symmetric(&self) -> bool {
        true
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

/// Scalar distance under `measure`.
pub fn distance(measure: &Measure, x: &[f64], y: &[f64]) -> Result<f64> {
    match measure {
        Measure::Euclidean => euclidean(x, y),
        Measure::Dtw => dtw(x, y).map(|r| r.distance),
        Measure::Flexibility { weights } => flexibility_distance(x, y, weights).map(|(d, _)| d),
    }
}

/// `sqrt(Σ (x_i - y_i)²)`.
pub fn euclidean(x: &[f64], y: &[f64]) -> Result<f64> {
    let (x, y) = validate_pair(x, y)?;
    Ok(x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DtwResult {
    pub distance: f64,
    /// 0-based `(i, j)` pairs from `(0, 0)` to `(m-1, m-1)`.
    pub path: Vec<(usize, usize)>,
}

/// Unconstrained DTW with the symmetric three-way step pattern.
///
/// `Θ(i,j) = (x_i - y_j)² + min(Θ(i-1,j-1), Θ(i-1,j), Θ(i,j-1))`, distance
/// `sqrt(Θ(m,m))`. On backtracking, ties prefer the diagonal, then `(i-1, j)`.
pub fn dtw(x: &[f64], y: &[f64]) -> Result<DtwResult> {
    let (x, y) = validate_pair(x, y)?;
    let m = x.len();
    let w = m + 1;
    let mut acc = vec![f64::INFINITY; w * w];
    acc[0] = 0.0;
    for i in 1..=m {
        for j in 1..=m {
            let d = x[i - 1] - y[j - 1];
            let best = acc[(i - 1) * w + j - 1].min(acc[(i - 1) * w + j]).min(acc[i * w + j - 1]);
            acc[i * w + j] = d * d + best;
        }
    }

    let mut path = Vec::with_capacity(2 * m);
    let (mut i, mut j) = (m, m);
    loop {
        path.push((i - 1, j - 1));
        if i == 1 && j == 1 {
            break;
        }
        let diag = acc[(i - 1) * w + j - 1];
        let up = acc[(i - 1) * w + j];
        let left = acc[i * w + j - 1];
        if diag <= up && diag <= left {
            i -= 1;
            j -= 1;
        } else if up <= left {
            i -= 1;
        } else {
            j -= 1;
        }
    }
    path.reverse();

    Ok(DtwResult { distance: acc[m * w + m].sqrt(), path })
}

/// Reshaping-effort matrix, `C(i,j) = |x_i - y_j|·P + |i - j|·T`.
pub fn fd_cost_matrix(x: &[f64], y: &[f64], weights: &FdWeights) -> Result<CostMatrix> {
    let (x, y) = validate_pair(x, y)?;
    weights.validate()?;
    let p = weights.amplitude_value();
    let t = weights.temporal_value(x, y);
    CostMatrix::from_fn(x.len(), |i, j| (x[i] - y[j]).abs() * p + i.abs_diff(j) as f64 * t)
}

/// Minimum of `Σ C(i, σ(i))` over all permutations `σ`, with one optimal `σ`.
///
/// The total is the correctly rounded sum of the selected entries, so it does
/// not depend on the argument order: `FD(x, y)` and `FD(y, x)` are bitwise
/// equal.
pub fn flexibility_distance(x: &[f64], y: &[f64], weights: &FdWeights) -> Result<(f64, Assignment)> {
    let costs = fd_cost_matrix(x, y, weights)?;
    let assignment = lsap::solve(&costs)?;
    Ok((assignment.total_cost(), assignment))
}
